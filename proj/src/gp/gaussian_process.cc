#include "pcbody/gp/gaussian_process.h"

#include <cmath>
#include <string>

namespace pcbody::gp {

GPHyperparams GPHyperparams::Defaults(int input_dim) {
  GPHyperparams h;
  h.noise_variance = std::exp(0.04);
  h.length_scales = Eigen::VectorXd::Constant(input_dim, std::exp(0.1));
  h.signal_variance = 1.0;
  return h;
}

void GPHyperparams::Validate(int input_dim) const {
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("noise_variance must be positive");
  }
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw std::invalid_argument("signal_variance must be positive");
  }
  if (length_scales.size() != input_dim) {
    throw std::invalid_argument("expected " + std::to_string(input_dim) +
                                " length scales, got " +
                                std::to_string(length_scales.size()));
  }
  for (Eigen::Index i = 0; i < length_scales.size(); ++i) {
    if (!(length_scales[i] > 0.0) || !std::isfinite(length_scales[i])) {
      throw std::invalid_argument("length scales must be positive");
    }
  }
}

void SampleSet::Validate() const {
  if (inputs.rows() != targets.rows()) {
    throw std::invalid_argument("sample set: " + std::to_string(inputs.rows()) +
                                " inputs but " + std::to_string(targets.rows()) +
                                " targets");
  }
  if (inputs.rows() < 1) throw std::invalid_argument("sample set is empty");
  if (inputs.cols() < 1 || targets.cols() < 1) {
    throw std::invalid_argument("sample set has no input or output columns");
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw std::invalid_argument("sample set contains non-finite values");
  }
}

double Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const GPHyperparams& hyper) {
  if (a.size() != b.size() || a.size() != hyper.length_scales.size()) {
    throw std::invalid_argument("kernel: dimension mismatch");
  }
  const double r2 = ((a - b).array() / hyper.length_scales.array()).square().sum();
  return hyper.signal_variance * std::exp(-0.5 * r2);
}

GPModel::GPModel(Eigen::MatrixXd inputs, Eigen::MatrixXd alpha, GPHyperparams hyper)
    : inputs_(std::move(inputs)), alpha_(std::move(alpha)), hyper_(std::move(hyper)) {
  if (inputs_.rows() < 1) throw std::invalid_argument("GP model needs at least one sample");
  if (alpha_.rows() != inputs_.rows()) {
    throw std::invalid_argument("GP model: alpha rows do not match training inputs");
  }
  hyper_.Validate(static_cast<int>(inputs_.cols()));
  inv_sq_length_ = hyper_.length_scales.array().square().inverse();
}

void GPModel::CheckQuery(const Eigen::VectorXd& xq) const {
  if (xq.size() != inputs_.cols()) {
    throw std::invalid_argument("GP query has dimension " + std::to_string(xq.size()) +
                                ", model expects " + std::to_string(inputs_.cols()));
  }
}

Eigen::VectorXd GPModel::KernelRow(const Eigen::VectorXd& xq) const {
  CheckQuery(xq);
  const Eigen::Index n = inputs_.rows();
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r2 =
        ((inputs_.row(i).transpose() - xq).array().square() * inv_sq_length_.array()).sum();
    k[i] = hyper_.signal_variance * std::exp(-0.5 * r2);
  }
  return k;
}

Eigen::VectorXd GPModel::Predict(const Eigen::VectorXd& xq) const {
  return alpha_.transpose() * KernelRow(xq);
}

Eigen::MatrixXd GPModel::PredictGradient(const Eigen::VectorXd& xq) const {
  const Eigen::VectorXd k = KernelRow(xq);
  // d k_n / d xq_m = k_n (X_nm - xq_m) / l_m^2
  Eigen::MatrixXd dk = inputs_.rowwise() - xq.transpose();
  dk = dk.array().rowwise() * inv_sq_length_.transpose().array();
  dk = dk.array().colwise() * k.array();
  return alpha_.transpose() * dk;
}

GPModel Train(const SampleSet& samples, const GPHyperparams& hyper) {
  samples.Validate();
  hyper.Validate(static_cast<int>(samples.inputs.cols()));
  const Eigen::Index n = samples.inputs.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = Kernel(samples.inputs.row(i).transpose(),
                              samples.inputs.row(j).transpose(), hyper);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  K.diagonal().array() += hyper.noise_variance;
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    throw TrainingError("covariance matrix is not positive definite (" + std::to_string(n) +
                        " samples, noise_variance " + std::to_string(hyper.noise_variance) +
                        "); check for duplicate inputs or raise the noise variance");
  }
  Eigen::MatrixXd alpha = llt.solve(samples.targets);
  if (!alpha.allFinite()) throw TrainingError("Cholesky solve produced non-finite weights");
  return GPModel(samples.inputs, std::move(alpha), hyper);
}

}  // namespace pcbody::gp
