#ifndef PCBODY_KF_KALMAN_FILTER_H_
#define PCBODY_KF_KALMAN_FILTER_H_

#include <Eigen/Dense>
#include <vector>

#include "pcbody/estimator/trajectory_log.h"

namespace pcbody::kf {

struct KFState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Identity transition and identity measurement matrix.
struct KFConfig {
  Eigen::MatrixXd process_noise = Eigen::MatrixXd::Identity(3, 3) * 0.001;
  Eigen::MatrixXd measurement_noise = Eigen::MatrixXd::Identity(3, 3);

  void Validate(int dim) const;
};

// Mean `initial`, covariance identity.
KFState InitialKFState(const Eigen::VectorXd& initial);

// Predict with the static model, then a Joseph-form update on measurement z.
// Throws NumericalError if the innovation covariance cannot be inverted.
KFState KalmanStep(const KFState& state, const Eigen::VectorXd& z, const KFConfig& cfg);

struct KFTrack {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> z;
};

// Runs the filter over `track` and returns a log in the estimator's layout:
// mu_x mirrors the mean, error columns are zero, the single "p" channel's
// prediction is the mean and free_energy is the measurement misfit
// (z - mean)^T R^-1 (z - mean) / 2. Row 0 holds the initial state at t0.
estimator::TrajectoryLog RunKalman(const KFTrack& track, const KFState& initial,
                                   const KFConfig& cfg, double t0 = 0.0, double dt = 0.05);

}  // namespace pcbody::kf

#endif  // PCBODY_KF_KALMAN_FILTER_H_
