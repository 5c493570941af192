#include "pcbody/kf/kalman_filter.h"

#include <stdexcept>
#include <string>

#include "pcbody/common/errors.h"

namespace pcbody::kf {

void KFConfig::Validate(int dim) const {
  if (process_noise.rows() != dim || process_noise.cols() != dim ||
      measurement_noise.rows() != dim || measurement_noise.cols() != dim) {
    throw std::invalid_argument("KF noise matrices must be " + std::to_string(dim) + "x" +
                                std::to_string(dim));
  }
}

KFState InitialKFState(const Eigen::VectorXd& initial) {
  return {initial, Eigen::MatrixXd::Identity(initial.size(), initial.size())};
}

KFState KalmanStep(const KFState& state, const Eigen::VectorXd& z, const KFConfig& cfg) {
  const Eigen::Index n = state.mean.size();
  if (z.size() != n) throw std::invalid_argument("measurement has the wrong dimension");
  if (!z.allFinite()) throw std::invalid_argument("measurement is not finite");
  const Eigen::MatrixXd P = state.covariance + cfg.process_noise;
  const Eigen::MatrixXd S = P + cfg.measurement_noise;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-300) {
    throw NumericalError("innovation covariance is not invertible");
  }
  // K = P S^-1, with S symmetric.
  const Eigen::MatrixXd K = ldlt.solve(P).transpose();
  if (!K.allFinite()) throw NumericalError("Kalman gain is not finite");
  const Eigen::MatrixXd I_K = Eigen::MatrixXd::Identity(n, n) - K;
  KFState next;
  next.mean = state.mean + K * (z - state.mean);
  next.covariance = I_K * P * I_K.transpose() + K * cfg.measurement_noise * K.transpose();
  next.covariance = (0.5 * (next.covariance + next.covariance.transpose())).eval();
  return next;
}

estimator::TrajectoryLog RunKalman(const KFTrack& track, const KFState& initial,
                                   const KFConfig& cfg, double t0, double dt) {
  const int n = static_cast<int>(initial.mean.size());
  cfg.Validate(n);
  if (track.t.size() != track.z.size()) throw std::invalid_argument("KF track is ragged");
  const Eigen::MatrixXd r_inv = cfg.measurement_noise.inverse();

  estimator::TrajectoryLog log;
  log.state_dim = n;
  log.channel_ids = {"p"};
  log.channel_dims = {n};
  auto append = [&](double t, const KFState& s, const Eigen::VectorXd* z) {
    log.t.push_back(t);
    log.x_hat.push_back(s.mean);
    log.mu_x.push_back(s.mean);
    log.e_x.push_back(Eigen::VectorXd::Zero(n));
    log.errors.push_back({Eigen::VectorXd::Zero(n)});
    log.predictions.push_back({s.mean});
    double f = 0.0;
    if (z) {
      const Eigen::VectorXd r = *z - s.mean;
      f = 0.5 * r.dot(r_inv * r);
    }
    log.free_energy.push_back(f);
  };
  append(t0, initial, track.z.empty() ? nullptr : &track.z.front());
  KFState state = initial;
  for (size_t k = 0; k < track.z.size(); ++k) {
    state = KalmanStep(state, track.z[k], cfg);
    append(t0 + static_cast<double>(k + 1) * dt, state, &track.z[k]);
  }
  return log;
}

}  // namespace pcbody::kf
