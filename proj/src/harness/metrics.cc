#include "pcbody/harness/metrics.h"

#include <cmath>

#include "pcbody/common/errors.h"
#include "pcbody/common/json_eigen.h"

namespace pcbody::harness {

MetricsReport ComputeMetrics(const estimator::TrajectoryLog& log, double transient, double band) {
  if (!log.has_truth()) throw std::invalid_argument("metrics need a log with truth attached");
  if (log.state_dim != 3) throw std::invalid_argument("metrics expect a 3-joint log");
  MetricsReport m;
  m.band = band;
  Eigen::Vector3d sq = Eigen::Vector3d::Zero();
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int r = 0; r < log.rows(); ++r) {
    if (!(log.t[r] > transient)) continue;
    const Eigen::Vector3d d = log.x_hat[r] - log.truth[r];
    sq += d.cwiseAbs2();
    sum += d;
    ++m.samples;
  }
  if (m.samples > 0) {
    m.rmse = (sq / m.samples).cwiseSqrt();
    m.mean_bias = sum / m.samples;
  }
  m.rmse_total = std::sqrt(m.rmse.squaredNorm());
  m.convergence_time.assign(3, std::nullopt);
  for (int j = 0; j < 3; ++j) {
    // Scan backwards for the last row outside the band.
    int last_out = -1;
    for (int r = log.rows() - 1; r >= 0; --r) {
      if (!(std::abs(log.x_hat[r][j] - log.truth[r][j]) <= band)) {
        last_out = r;
        break;
      }
    }
    if (last_out + 1 < log.rows()) m.convergence_time[j] = log.t[last_out + 1];
  }
  if (log.rows() > 0) m.final_x_hat = log.x_hat.back();
  return m;
}

nlohmann::json ToJson(const MetricsReport& m) {
  nlohmann::json conv = nlohmann::json::array();
  for (const auto& c : m.convergence_time) conv.push_back(c ? nlohmann::json(*c) : nlohmann::json());
  nlohmann::json j = {{"label", m.label},
                      {"rmse", pcbody::ToJson(Eigen::VectorXd(m.rmse))},
                      {"rmse_total", m.rmse_total},
                      {"convergence_time", conv},
                      {"band", m.band},
                      {"final_x_hat", pcbody::ToJson(Eigen::VectorXd(m.final_x_hat))},
                      {"mean_bias", pcbody::ToJson(Eigen::VectorXd(m.mean_bias))},
                      {"channel_mae", m.channel_mae},
                      {"samples", m.samples}};
  if (m.drift) {
    j["drift"] = {{"drift_px", pcbody::ToJson(Eigen::VectorXd(m.drift->drift_px))},
                  {"target_px", pcbody::ToJson(Eigen::VectorXd(m.drift->target_px))},
                  {"control_px", pcbody::ToJson(Eigen::VectorXd(m.drift->control_px))},
                  {"fraction", m.drift->fraction}};
  } else {
    j["drift"] = nullptr;
  }
  return j;
}

MetricsReport MetricsFromJson(const nlohmann::json& j) {
  try {
    MetricsReport m;
    m.label = j.at("label").get<std::string>();
    m.rmse = VectorFromJson(j.at("rmse"), "rmse");
    m.rmse_total = j.at("rmse_total").get<double>();
    for (const auto& c : j.at("convergence_time")) {
      m.convergence_time.push_back(c.is_null() ? std::nullopt : std::optional<double>(c.get<double>()));
    }
    m.band = j.at("band").get<double>();
    m.final_x_hat = VectorFromJson(j.at("final_x_hat"), "final_x_hat");
    m.mean_bias = VectorFromJson(j.at("mean_bias"), "mean_bias");
    m.channel_mae = j.at("channel_mae").get<std::map<std::string, double>>();
    m.samples = j.at("samples").get<int>();
    if (!j.at("drift").is_null()) {
      const auto& d = j.at("drift");
      DriftReport r;
      r.drift_px = VectorFromJson(d.at("drift_px"), "drift_px");
      r.target_px = VectorFromJson(d.at("target_px"), "target_px");
      r.control_px = VectorFromJson(d.at("control_px"), "control_px");
      r.fraction = d.at("fraction").get<double>();
      m.drift = r;
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("metrics: ") + e.what());
  }
}

}  // namespace pcbody::harness
