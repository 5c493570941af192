#ifndef PCBODY_GP_GAUSSIAN_PROCESS_H_
#define PCBODY_GP_GAUSSIAN_PROCESS_H_

#include <Eigen/Dense>
#include <stdexcept>

namespace pcbody::gp {

struct GPHyperparams {
  // Added to the diagonal of the training covariance only.
  double noise_variance = 0.0;
  // One length scale per input dimension.
  Eigen::VectorXd length_scales;
  double signal_variance = 1.0;

  // noise_variance = exp(0.02)^2, every length scale exp(0.1), signal variance 1.
  static GPHyperparams Defaults(int input_dim);

  // Throws std::invalid_argument unless all fields are positive and there
  // are exactly `input_dim` length scales.
  void Validate(int input_dim) const;
};

struct SampleSet {
  Eigen::MatrixXd inputs;   // N x M
  Eigen::MatrixXd targets;  // N x D

  int size() const { return static_cast<int>(inputs.rows()); }
  // Throws std::invalid_argument on row mismatch, empty set or non-finite data.
  void Validate() const;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Squared exponential kernel with per-dimension length scales.
double Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const GPHyperparams& hyper);

// Zero-mean GP regressor with one weight column per output dimension. Immutable
// once built; Predict and PredictGradient are safe to call concurrently.
class GPModel {
 public:
  GPModel(Eigen::MatrixXd inputs, Eigen::MatrixXd alpha, GPHyperparams hyper);

  int input_dim() const { return static_cast<int>(inputs_.cols()); }
  int output_dim() const { return static_cast<int>(alpha_.cols()); }
  int num_samples() const { return static_cast<int>(inputs_.rows()); }
  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::MatrixXd& alpha() const { return alpha_; }
  const GPHyperparams& hyper() const { return hyper_; }

  // Kernel row k(xq, X) as an N-vector.
  Eigen::VectorXd KernelRow(const Eigen::VectorXd& xq) const;

  // k(xq, X) * alpha.
  Eigen::VectorXd Predict(const Eigen::VectorXd& xq) const;

  // D x M Jacobian of Predict at xq.
  Eigen::MatrixXd PredictGradient(const Eigen::VectorXd& xq) const;

 private:
  void CheckQuery(const Eigen::VectorXd& xq) const;

  Eigen::MatrixXd inputs_;
  Eigen::MatrixXd alpha_;
  GPHyperparams hyper_;
  Eigen::VectorXd inv_sq_length_;
};

// Solves (K + noise_variance * I) alpha = targets through a Cholesky factor.
GPModel Train(const SampleSet& samples, const GPHyperparams& hyper);

}  // namespace pcbody::gp

#endif  // PCBODY_GP_GAUSSIAN_PROCESS_H_
