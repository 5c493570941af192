#ifndef PCBODY_HARNESS_METRICS_H_
#define PCBODY_HARNESS_METRICS_H_

#include <Eigen/Dense>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcbody/estimator/trajectory_log.h"

namespace pcbody::harness {

struct DriftReport {
  Eigen::Vector2d drift_px;    // believed hand pixel, touch run minus control run
  Eigen::Vector2d target_px;   // o_v
  Eigen::Vector2d control_px;  // believed hand pixel in the control run
  double fraction = 0.0;       // projection of drift onto (o_v - control), normalised
};

struct MetricsReport {
  std::string label;
  Eigen::Vector3d rmse = Eigen::Vector3d::Zero();  // per joint, radians
  double rmse_total = 0.0;                          // sqrt of summed squares
  // First time after which |x_hat - truth| stays inside the band, per joint.
  std::vector<std::optional<double>> convergence_time;
  double band = 0.0;
  Eigen::Vector3d final_x_hat = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean_bias = Eigen::Vector3d::Zero();  // post-transient mean of x_hat - truth
  std::map<std::string, double> channel_mae;             // mean |s - g| per channel
  std::optional<DriftReport> drift;
  int samples = 0;  // rows inside the scoring window
};

// RMSE, bias and convergence from a log with truth attached. Rows with
// t > transient are scored.
MetricsReport ComputeMetrics(const estimator::TrajectoryLog& log, double transient, double band);

nlohmann::json ToJson(const MetricsReport& m);
MetricsReport MetricsFromJson(const nlohmann::json& j);

}  // namespace pcbody::harness

#endif  // PCBODY_HARNESS_METRICS_H_
