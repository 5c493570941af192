#ifndef PCBODY_ESTIMATOR_FORWARD_MODEL_H_
#define PCBODY_ESTIMATOR_FORWARD_MODEL_H_

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "pcbody/gp/gaussian_process.h"

namespace pcbody::estimator {

// Maps a body configuration to a predicted sensor reading. `context` carries
// per-frame side information some models need (the touch model reads the
// other agent's location from it); most models ignore it.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;
  virtual Eigen::VectorXd Predict(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& context) const = 0;
  // output_dim x input_dim.
  virtual Eigen::MatrixXd Jacobian(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& context) const = 0;
};

// Proprioception in sensor space: g(x) = x, unit Jacobian.
class IdentityModel : public ForwardModel {
 public:
  explicit IdentityModel(int dim) : dim_(dim) {}
  int input_dim() const override { return dim_; }
  int output_dim() const override { return dim_; }
  Eigen::VectorXd Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;

 private:
  int dim_;
};

// A subset of the joint sensors, e.g. shoulder_1 and elbow only.
class SelectModel : public ForwardModel {
 public:
  SelectModel(int input_dim, std::vector<int> indices);
  int input_dim() const override { return input_dim_; }
  int output_dim() const override { return static_cast<int>(indices_.size()); }
  const std::vector<int>& indices() const { return indices_; }
  Eigen::VectorXd Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;

 private:
  int input_dim_;
  std::vector<int> indices_;
};

// Element-wise square, for joint sensors that report x^2.
class QuadraticModel : public ForwardModel {
 public:
  explicit QuadraticModel(int dim) : dim_(dim) {}
  int input_dim() const override { return dim_; }
  int output_dim() const override { return dim_; }
  Eigen::VectorXd Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;

 private:
  int dim_;
};

class GPForwardModel : public ForwardModel {
 public:
  explicit GPForwardModel(std::shared_ptr<const gp::GPModel> model);
  int input_dim() const override { return model_->input_dim(); }
  int output_dim() const override { return model_->output_dim(); }
  const gp::GPModel& model() const { return *model_; }
  Eigen::VectorXd Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override;

 private:
  std::shared_ptr<const gp::GPModel> model_;
};

}  // namespace pcbody::estimator

#endif  // PCBODY_ESTIMATOR_FORWARD_MODEL_H_
