#ifndef PCBODY_HARNESS_EXPERIMENT_H_
#define PCBODY_HARNESS_EXPERIMENT_H_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcbody/estimator/body_estimator.h"
#include "pcbody/gp/gaussian_process.h"
#include "pcbody/sim/other_agent.h"
#include "pcbody/sim/sensors.h"
#include "pcbody/tactile/visuo_tactile.h"

namespace pcbody::harness {

// Bad flags, unknown keys, invalid values or unwritable paths (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing input files or manifest hash mismatches (exit code 4).
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GPSettings {
  // Observation noise standard deviation; the covariance diagonal gets its square.
  double noise_std = std::exp(0.02);
  double length_scale = std::exp(0.1);
  double signal_variance = 1.0;

  gp::GPHyperparams Hyper(int input_dim) const;
};

struct EstimatorSettings {
  estimator::EstimatorConfig config;
  Eigen::Vector3d sigma_p = Eigen::Vector3d::Ones();
  Eigen::Vector2d sigma_v = Eigen::Vector2d::Constant(5.0);
  double sigma_t = 1.0;
  // Starting belief (x_hat = mu_x); empty means the first true pose.
  std::optional<Eigen::Vector3d> initial;
};

struct KFSettings {
  Eigen::Vector3d process_noise = Eigen::Vector3d::Constant(0.001);  // diagonal variances
  Eigen::Vector3d measurement_noise = Eigen::Vector3d::Ones();
};

struct MetricsSettings {
  double transient = 5.0;      // seconds excluded from RMSE
  double band_multiple = 3.0;  // convergence band in proprioceptive noise stds
};

struct TouchSettings {
  bool enabled = false;
  tactile::TouchParams params;
  // Timing (duration, dt) is taken from the test trajectory.
  sim::OtherAgentScript script;
};

struct ExperimentSpec {
  std::string name = "custom";
  std::uint64_t seed = 0;
  std::vector<std::string> channels{"p", "v"};
  sim::NoiseSpec noise;
  sim::TrajectorySpec exploration;
  int exploration_samples = 46;
  sim::TrajectorySpec trajectory;
  sim::ProprioceptionMap proprio;
  GPSettings gp;
  EstimatorSettings estimator;
  KFSettings kf;
  MetricsSettings metrics;
  TouchSettings touch;

  void Validate() const;
};

// Known presets: ablation, nonlinear_proprio, damaged_sensor, prior_bias,
// rubber_hand, custom.
const std::vector<std::string>& PresetNames();
ExperimentSpec Preset(const std::string& name);

nlohmann::json ToJson(const ExperimentSpec& spec);
// Starts from the preset named in j["name"] (custom if absent) and overlays
// the given keys. Unknown keys raise UsageError.
ExperimentSpec SpecFromJson(const nlohmann::json& j);

// Applies "a.b=value,c=value" overrides in place. Values are parsed as JSON
// when possible and taken as strings otherwise; commas inside brackets do not
// split.
void ApplyOverrides(nlohmann::json& j, const std::string& overrides);

// Enabled channels. Proprioception may be restricted to a joint subset.
struct ChannelSet {
  bool kf = false;
  std::vector<int> proprio_joints;  // 0-based, sorted
  bool visual = false;
  bool tactile = false;

  // Tokens: p, p1, p2, p3, v, t, kf. Throws UsageError on unknown or
  // conflicting tokens.
  static ChannelSet Parse(const std::vector<std::string>& tokens);
  // e.g. "p+v", "p1+p3+v", "kf".
  std::string Label() const;
  bool needs_visual_model() const { return visual || tactile; }
};

std::vector<std::string> SplitList(const std::string& text, char sep = ',');

}  // namespace pcbody::harness

#endif  // PCBODY_HARNESS_EXPERIMENT_H_
