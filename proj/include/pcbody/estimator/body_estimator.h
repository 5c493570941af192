#ifndef PCBODY_ESTIMATOR_BODY_ESTIMATOR_H_
#define PCBODY_ESTIMATOR_BODY_ESTIMATOR_H_

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcbody/estimator/forward_model.h"

namespace pcbody::estimator {

struct BodyState {
  Eigen::VectorXd x_hat;  // believed configuration
  Eigen::VectorXd mu_x;   // prior belief
};

struct SensorChannel {
  std::string id;
  Eigen::VectorXd variance;  // one entry per output component
  std::shared_ptr<const ForwardModel> model;

  int dim() const { return static_cast<int>(variance.size()); }
};

struct EstimatorState {
  BodyState body;
  Eigen::VectorXd e_x;
  std::vector<Eigen::VectorXd> errors;  // parallel to the channel list
  double t = 0.0;

  int dim() const { return static_cast<int>(body.x_hat.size()); }
};

struct EstimatorConfig {
  double dt = 0.05;
  double lambda = 1.0;
  Eigen::VectorXd sigma_x = Eigen::VectorXd::Ones(3);

  void Validate(int state_dim) const;
};

struct SensorReading {
  Eigen::VectorXd value;
  bool available = false;
  Eigen::VectorXd context;
};

// Readings are parallel to the channel list.
struct SensorFrame {
  double t = 0.0;
  std::vector<SensorReading> readings;
};

// State with zero errors, x_hat = mu_x = `initial`, sized for `channels`.
EstimatorState InitialState(const Eigen::VectorXd& initial,
                            const std::vector<SensorChannel>& channels, double t = 0.0);

// Validates a channel list against a state dimension.
void ValidateChannels(const std::vector<SensorChannel>& channels, int state_dim);

struct PredictionErrorRates {
  std::vector<Eigen::VectorXd> channel_rates;  // d e_i / dt
  Eigen::VectorXd prior_rate;                  // d e_x / dt
  std::vector<Eigen::VectorXd> predictions;    // g_i(x_hat), empty when not evaluated
  std::vector<bool> active;                    // channel contributed sensory evidence
  std::vector<int> faulted;                    // channels masked for non-finite output
};

// d e_i/dt = s_i - g_i(x_hat) - sigma_i e_i for available channels and
// -sigma_i e_i otherwise; d e_x/dt = x_hat - mu_x - sigma_x e_x.
PredictionErrorRates ComputePredictionErrors(const EstimatorState& state,
                                             const SensorFrame& frame,
                                             const std::vector<SensorChannel>& channels,
                                             const EstimatorConfig& cfg);

// d x_hat/dt = -e_x + sum_i J_i(x_hat)^T e_i over channels with a reading.
Eigen::VectorXd ComputeStateDerivative(const EstimatorState& state, const SensorFrame& frame,
                                       const std::vector<SensorChannel>& channels);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& component, EstimatorState last_finite, long step_index);

  const std::string& component() const { return component_; }
  const EstimatorState& last_finite() const { return last_finite_; }
  // -1 when raised outside Run.
  long step_index() const { return step_index_; }

 private:
  std::string component_;
  EstimatorState last_finite_;
  long step_index_;
};

// Entries larger than this in magnitude count as divergence.
inline constexpr double kDivergenceBound = 1e6;

struct StepReport {
  std::vector<int> faulted;
};

// One forward Euler update of x_hat, every e_i, e_x and mu_x. Pure.
EstimatorState Step(const EstimatorState& state, const SensorFrame& frame,
                    const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg,
                    StepReport* report = nullptr);

// Quadratic terms of the Laplace-approximated free energy:
// sum over available channels of (s - g)^2 / (2 sigma) plus
// (x_hat - mu_x)^2 / (2 sigma_x). Constants and log-variance terms are omitted.
double FreeEnergy(const EstimatorState& state, const SensorFrame& frame,
                  const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg);

}  // namespace pcbody::estimator

#endif  // PCBODY_ESTIMATOR_BODY_ESTIMATOR_H_
