#include "pcbody/estimator/forward_model.h"

#include <stdexcept>
#include <string>

namespace pcbody::estimator {
namespace {

void CheckDim(const Eigen::VectorXd& x, int dim) {
  if (x.size() != dim) {
    throw std::invalid_argument("forward model: expected input of size " + std::to_string(dim) +
                                ", got " + std::to_string(x.size()));
  }
}

}  // namespace

Eigen::VectorXd IdentityModel::Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  CheckDim(x, dim_);
  return x;
}

Eigen::MatrixXd IdentityModel::Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  CheckDim(x, dim_);
  return Eigen::MatrixXd::Identity(dim_, dim_);
}

SelectModel::SelectModel(int input_dim, std::vector<int> indices)
    : input_dim_(input_dim), indices_(std::move(indices)) {
  if (indices_.empty()) throw std::invalid_argument("select model: no indices");
  for (int i : indices_) {
    if (i < 0 || i >= input_dim_) throw std::invalid_argument("select model: index out of range");
  }
}

Eigen::VectorXd SelectModel::Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  CheckDim(x, input_dim_);
  Eigen::VectorXd out(indices_.size());
  for (size_t k = 0; k < indices_.size(); ++k) out[k] = x[indices_[k]];
  return out;
}

Eigen::MatrixXd SelectModel::Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  CheckDim(x, input_dim_);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(indices_.size(), input_dim_);
  for (size_t k = 0; k < indices_.size(); ++k) J(k, indices_[k]) = 1.0;
  return J;
}

Eigen::VectorXd QuadraticModel::Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  CheckDim(x, dim_);
  return x.array().square();
}

Eigen::MatrixXd QuadraticModel::Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  CheckDim(x, dim_);
  return (2.0 * x).asDiagonal();
}

GPForwardModel::GPForwardModel(std::shared_ptr<const gp::GPModel> model)
    : model_(std::move(model)) {
  if (!model_) throw std::invalid_argument("GP forward model: null model");
}

Eigen::VectorXd GPForwardModel::Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  return model_->Predict(x);
}

Eigen::MatrixXd GPForwardModel::Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  return model_->PredictGradient(x);
}

}  // namespace pcbody::estimator
