#include "pcbody/estimator/body_estimator.h"

#include <cmath>

namespace pcbody::estimator {
namespace {

struct ChannelEval {
  std::vector<Eigen::VectorXd> predictions;
  std::vector<Eigen::MatrixXd> jacobians;
  std::vector<bool> active;
  std::vector<int> faulted;
};

void CheckFrame(const SensorFrame& frame, const std::vector<SensorChannel>& channels) {
  if (frame.readings.size() != channels.size()) {
    throw std::invalid_argument("frame at t=" + std::to_string(frame.t) + " has " +
                                std::to_string(frame.readings.size()) + " readings for " +
                                std::to_string(channels.size()) + " channels");
  }
  for (size_t i = 0; i < channels.size(); ++i) {
    const auto& r = frame.readings[i];
    if (r.available && r.value.size() != channels[i].dim()) {
      throw std::invalid_argument("reading for channel '" + channels[i].id + "' has size " +
                                  std::to_string(r.value.size()) + ", expected " +
                                  std::to_string(channels[i].dim()));
    }
  }
}

// Evaluates g_i and, if requested, J_i for every channel with a reading.
ChannelEval Evaluate(const EstimatorState& state, const SensorFrame& frame,
                     const std::vector<SensorChannel>& channels, bool with_jacobians) {
  CheckFrame(frame, channels);
  ChannelEval ev;
  ev.predictions.resize(channels.size());
  ev.jacobians.resize(channels.size());
  ev.active.assign(channels.size(), false);
  for (size_t i = 0; i < channels.size(); ++i) {
    const auto& reading = frame.readings[i];
    if (!reading.available) continue;
    Eigen::VectorXd g = channels[i].model->Predict(state.body.x_hat, reading.context);
    bool ok = g.allFinite();
    Eigen::MatrixXd J;
    if (ok && with_jacobians) {
      J = channels[i].model->Jacobian(state.body.x_hat, reading.context);
      ok = J.allFinite();
    }
    if (!ok) {
      ev.faulted.push_back(static_cast<int>(i));
      continue;
    }
    ev.predictions[i] = std::move(g);
    ev.jacobians[i] = std::move(J);
    ev.active[i] = true;
  }
  return ev;
}

PredictionErrorRates Rates(const EstimatorState& state, const SensorFrame& frame,
                           const std::vector<SensorChannel>& channels,
                           const EstimatorConfig& cfg, ChannelEval& ev) {
  PredictionErrorRates out;
  out.channel_rates.resize(channels.size());
  for (size_t i = 0; i < channels.size(); ++i) {
    const Eigen::VectorXd decay = channels[i].variance.cwiseProduct(state.errors[i]);
    if (ev.active[i]) {
      out.channel_rates[i] = frame.readings[i].value - ev.predictions[i] - decay;
    } else {
      out.channel_rates[i] = -decay;
    }
  }
  out.prior_rate = state.body.x_hat - state.body.mu_x - cfg.sigma_x.cwiseProduct(state.e_x);
  out.predictions = ev.predictions;
  out.active = ev.active;
  out.faulted = ev.faulted;
  return out;
}

Eigen::VectorXd Drift(const EstimatorState& state, const std::vector<SensorChannel>& channels,
                      const ChannelEval& ev) {
  Eigen::VectorXd dx = -state.e_x;
  for (size_t i = 0; i < channels.size(); ++i) {
    if (ev.active[i]) dx.noalias() += ev.jacobians[i].transpose() * state.errors[i];
  }
  return dx;
}

// Name of the first offending entry, or empty when every entry is finite and bounded.
std::string FindDivergence(const EstimatorState& s, const std::vector<SensorChannel>& channels) {
  auto bad = [](const Eigen::VectorXd& v) -> int {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k]) || std::abs(v[k]) > kDivergenceBound) return static_cast<int>(k);
    }
    return -1;
  };
  int k;
  if ((k = bad(s.body.x_hat)) >= 0) return "x_hat_" + std::to_string(k + 1);
  if ((k = bad(s.body.mu_x)) >= 0) return "mu_x_" + std::to_string(k + 1);
  if ((k = bad(s.e_x)) >= 0) return "e_x_" + std::to_string(k + 1);
  for (size_t i = 0; i < channels.size(); ++i) {
    if ((k = bad(s.errors[i])) >= 0) return "e_" + channels[i].id + "_" + std::to_string(k + 1);
  }
  return {};
}

}  // namespace

void EstimatorConfig::Validate(int state_dim) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be nonnegative");
  }
  if (sigma_x.size() != state_dim) {
    throw std::invalid_argument("sigma_x must have " + std::to_string(state_dim) + " entries");
  }
  if (!((sigma_x.array() > 0.0).all())) throw std::invalid_argument("sigma_x must be positive");
}

void ValidateChannels(const std::vector<SensorChannel>& channels, int state_dim) {
  for (const auto& ch : channels) {
    if (!ch.model) throw std::invalid_argument("channel '" + ch.id + "' has no forward model");
    if (ch.model->input_dim() != state_dim) {
      throw std::invalid_argument("channel '" + ch.id + "' expects input dimension " +
                                  std::to_string(ch.model->input_dim()) + ", state has " +
                                  std::to_string(state_dim));
    }
    if (ch.model->output_dim() != ch.dim()) {
      throw std::invalid_argument("channel '" + ch.id + "' variance size does not match model");
    }
    if (!((ch.variance.array() > 0.0).all())) {
      throw std::invalid_argument("channel '" + ch.id + "' variances must be positive");
    }
  }
}

EstimatorState InitialState(const Eigen::VectorXd& initial,
                            const std::vector<SensorChannel>& channels, double t) {
  EstimatorState s;
  s.body.x_hat = initial;
  s.body.mu_x = initial;
  s.e_x = Eigen::VectorXd::Zero(initial.size());
  for (const auto& ch : channels) s.errors.push_back(Eigen::VectorXd::Zero(ch.dim()));
  s.t = t;
  return s;
}

PredictionErrorRates ComputePredictionErrors(const EstimatorState& state,
                                             const SensorFrame& frame,
                                             const std::vector<SensorChannel>& channels,
                                             const EstimatorConfig& cfg) {
  ChannelEval ev = Evaluate(state, frame, channels, false);
  return Rates(state, frame, channels, cfg, ev);
}

Eigen::VectorXd ComputeStateDerivative(const EstimatorState& state, const SensorFrame& frame,
                                       const std::vector<SensorChannel>& channels) {
  return Drift(state, channels, Evaluate(state, frame, channels, true));
}

DivergenceError::DivergenceError(const std::string& component, EstimatorState last_finite,
                                 long step_index)
    : std::runtime_error("estimator diverged in " + component +
                         (step_index >= 0 ? " at step " + std::to_string(step_index) : "") +
                         " (t=" + std::to_string(last_finite.t) + ")"),
      component_(component),
      last_finite_(std::move(last_finite)),
      step_index_(step_index) {}

EstimatorState Step(const EstimatorState& state, const SensorFrame& frame,
                    const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg,
                    StepReport* report) {
  if (state.errors.size() != channels.size()) {
    throw std::invalid_argument("state carries " + std::to_string(state.errors.size()) +
                                " error vectors for " + std::to_string(channels.size()) +
                                " channels");
  }
  ChannelEval ev = Evaluate(state, frame, channels, true);
  const PredictionErrorRates rates = Rates(state, frame, channels, cfg, ev);
  const Eigen::VectorXd dx = Drift(state, channels, ev);

  const double dt = cfg.dt;
  EstimatorState next;
  next.body.x_hat = state.body.x_hat + dt * dx;
  next.body.mu_x = state.body.mu_x + dt * cfg.lambda * state.e_x;
  next.e_x = state.e_x + dt * rates.prior_rate;
  next.errors.resize(channels.size());
  for (size_t i = 0; i < channels.size(); ++i) {
    next.errors[i] = state.errors[i] + dt * rates.channel_rates[i];
  }
  next.t = state.t + dt;

  if (report) report->faulted = ev.faulted;
  const std::string bad = FindDivergence(next, channels);
  if (!bad.empty()) throw DivergenceError(bad, state, -1);
  return next;
}

double FreeEnergy(const EstimatorState& state, const SensorFrame& frame,
                  const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg) {
  const ChannelEval ev = Evaluate(state, frame, channels, false);
  double f = 0.0;
  for (size_t i = 0; i < channels.size(); ++i) {
    if (!ev.active[i]) continue;
    const Eigen::VectorXd r = frame.readings[i].value - ev.predictions[i];
    f += (r.array().square() / (2.0 * channels[i].variance.array())).sum();
  }
  const Eigen::VectorXd d = state.body.x_hat - state.body.mu_x;
  f += (d.array().square() / (2.0 * cfg.sigma_x.array())).sum();
  return f;
}

}  // namespace pcbody::estimator
