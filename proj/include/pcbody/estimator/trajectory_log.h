#ifndef PCBODY_ESTIMATOR_TRAJECTORY_LOG_H_
#define PCBODY_ESTIMATOR_TRAJECTORY_LOG_H_

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "pcbody/common/csv.h"
#include "pcbody/estimator/body_estimator.h"

namespace pcbody::estimator {

// Per-step record of an estimation run. Row 0 is the initial state; row k is
// the state after the k-th frame, with predictions and free energy evaluated
// against that frame.
struct TrajectoryLog {
  int state_dim = 0;
  std::vector<std::string> channel_ids;
  std::vector<int> channel_dims;

  std::vector<double> t;
  std::vector<Eigen::VectorXd> x_hat;
  std::vector<Eigen::VectorXd> mu_x;
  std::vector<Eigen::VectorXd> e_x;
  std::vector<std::vector<Eigen::VectorXd>> errors;       // [row][channel]
  std::vector<std::vector<Eigen::VectorXd>> predictions;  // [row][channel], NaN if unavailable
  std::vector<double> free_energy;
  std::vector<Eigen::VectorXd> truth;  // empty, or one per row

  // (row, channel id) for every channel masked after a non-finite prediction.
  std::vector<std::pair<int, std::string>> faults;

  int rows() const { return static_cast<int>(t.size()); }
  bool has_truth() const { return !truth.empty(); }

  // Truth rows must match the number of log rows.
  void AttachTruth(std::vector<Eigen::VectorXd> truth_rows);

  // Column layout: t, x_hat_*, mu_x_*, truth_* (if any), e_x_*, e_<id>_k,
  // g_<id>_k, free_energy.
  csv::Table ToTable() const;
  static TrajectoryLog FromTable(const csv::Table& table);

  void WriteCsv(const std::string& path) const;
  static TrajectoryLog ReadCsv(const std::string& path);
};

// Creates an empty log whose layout matches `channels`.
TrajectoryLog MakeLog(int state_dim, const std::vector<SensorChannel>& channels);

// Appends one row, evaluating predictions and free energy against `frame`.
void AppendRow(TrajectoryLog& log, const EstimatorState& state, const SensorFrame& frame,
               const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg);

// Applies Step to every frame. Divergence is rethrown with the step index.
TrajectoryLog Run(const std::vector<SensorFrame>& frames, const EstimatorState& initial,
                  const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg);

}  // namespace pcbody::estimator

#endif  // PCBODY_ESTIMATOR_TRAJECTORY_LOG_H_
