#include "pcbody/estimator/trajectory_log.h"

#include <cmath>
#include <limits>

#include "pcbody/common/errors.h"

namespace pcbody::estimator {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Indexed(const std::string& prefix, int k) { return prefix + std::to_string(k + 1); }

void AppendVector(std::vector<double>& row, const Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) row.push_back(v[k]);
}

Eigen::VectorXd ReadVector(const std::vector<double>& row, const std::vector<int>& cols) {
  Eigen::VectorXd v(cols.size());
  for (size_t k = 0; k < cols.size(); ++k) v[k] = row[cols[k]];
  return v;
}

std::vector<int> Columns(const csv::Table& table, const std::string& prefix, int n) {
  std::vector<int> cols;
  for (int k = 0; k < n; ++k) cols.push_back(table.Column(Indexed(prefix, k)));
  return cols;
}

int CountPrefixed(const csv::Table& table, const std::string& prefix) {
  int n = 0;
  while (table.HasColumn(Indexed(prefix, n))) ++n;
  return n;
}

}  // namespace

void TrajectoryLog::AttachTruth(std::vector<Eigen::VectorXd> truth_rows) {
  if (static_cast<int>(truth_rows.size()) != rows()) {
    throw std::invalid_argument("truth has " + std::to_string(truth_rows.size()) +
                                " rows, log has " + std::to_string(rows()));
  }
  for (const auto& v : truth_rows) {
    if (v.size() != state_dim) throw std::invalid_argument("truth row has wrong dimension");
  }
  truth = std::move(truth_rows);
}

csv::Table TrajectoryLog::ToTable() const {
  csv::Table table;
  auto& h = table.header;
  h.push_back("t");
  for (int k = 0; k < state_dim; ++k) h.push_back(Indexed("x_hat_", k));
  for (int k = 0; k < state_dim; ++k) h.push_back(Indexed("mu_x_", k));
  if (has_truth()) {
    for (int k = 0; k < state_dim; ++k) h.push_back(Indexed("truth_", k));
  }
  for (int k = 0; k < state_dim; ++k) h.push_back(Indexed("e_x_", k));
  for (size_t i = 0; i < channel_ids.size(); ++i) {
    for (int k = 0; k < channel_dims[i]; ++k) h.push_back(Indexed("e_" + channel_ids[i] + "_", k));
  }
  for (size_t i = 0; i < channel_ids.size(); ++i) {
    for (int k = 0; k < channel_dims[i]; ++k) h.push_back(Indexed("g_" + channel_ids[i] + "_", k));
  }
  h.push_back("free_energy");

  for (int r = 0; r < rows(); ++r) {
    std::vector<double> row;
    row.reserve(h.size());
    row.push_back(t[r]);
    AppendVector(row, x_hat[r]);
    AppendVector(row, mu_x[r]);
    if (has_truth()) AppendVector(row, truth[r]);
    AppendVector(row, e_x[r]);
    for (const auto& e : errors[r]) AppendVector(row, e);
    for (size_t i = 0; i < channel_ids.size(); ++i) {
      const auto& g = predictions[r][i];
      if (g.size() == channel_dims[i]) {
        AppendVector(row, g);
      } else {
        row.insert(row.end(), channel_dims[i], kNaN);
      }
    }
    row.push_back(free_energy[r]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

TrajectoryLog TrajectoryLog::FromTable(const csv::Table& table) {
  TrajectoryLog log;
  log.state_dim = CountPrefixed(table, "x_hat_");
  if (log.state_dim == 0) throw FormatError("trajectory log: no x_hat_ columns");
  // Channel ids come from the e_<id>_1 columns, in header order.
  for (const auto& name : table.header) {
    if (name.rfind("e_", 0) != 0 || name.rfind("e_x_", 0) == 0) continue;
    if (name.size() < 5 || name.substr(name.size() - 2) != "_1") continue;
    const std::string id = name.substr(2, name.size() - 4);
    log.channel_ids.push_back(id);
    log.channel_dims.push_back(CountPrefixed(table, "e_" + id + "_"));
  }
  const int tc = table.Column("t");
  const auto xc = Columns(table, "x_hat_", log.state_dim);
  const auto mc = Columns(table, "mu_x_", log.state_dim);
  const auto ec = Columns(table, "e_x_", log.state_dim);
  const bool has_truth = table.HasColumn("truth_1");
  const auto tr = has_truth ? Columns(table, "truth_", log.state_dim) : std::vector<int>{};
  std::vector<std::vector<int>> err_cols, pred_cols;
  for (size_t i = 0; i < log.channel_ids.size(); ++i) {
    err_cols.push_back(Columns(table, "e_" + log.channel_ids[i] + "_", log.channel_dims[i]));
    pred_cols.push_back(Columns(table, "g_" + log.channel_ids[i] + "_", log.channel_dims[i]));
  }
  const int fc = table.Column("free_energy");
  for (const auto& row : table.rows) {
    log.t.push_back(row[tc]);
    log.x_hat.push_back(ReadVector(row, xc));
    log.mu_x.push_back(ReadVector(row, mc));
    log.e_x.push_back(ReadVector(row, ec));
    if (has_truth) log.truth.push_back(ReadVector(row, tr));
    std::vector<Eigen::VectorXd> e, g;
    for (size_t i = 0; i < log.channel_ids.size(); ++i) {
      e.push_back(ReadVector(row, err_cols[i]));
      Eigen::VectorXd gi = ReadVector(row, pred_cols[i]);
      if (gi.array().isNaN().all()) gi.resize(0);
      g.push_back(std::move(gi));
    }
    log.errors.push_back(std::move(e));
    log.predictions.push_back(std::move(g));
    log.free_energy.push_back(row[fc]);
  }
  return log;
}

void TrajectoryLog::WriteCsv(const std::string& path) const { csv::WriteFile(path, ToTable()); }

TrajectoryLog TrajectoryLog::ReadCsv(const std::string& path) {
  return FromTable(csv::ReadFile(path));
}

TrajectoryLog MakeLog(int state_dim, const std::vector<SensorChannel>& channels) {
  TrajectoryLog log;
  log.state_dim = state_dim;
  for (const auto& ch : channels) {
    log.channel_ids.push_back(ch.id);
    log.channel_dims.push_back(ch.dim());
  }
  return log;
}

void AppendRow(TrajectoryLog& log, const EstimatorState& state, const SensorFrame& frame,
               const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg) {
  log.t.push_back(state.t);
  log.x_hat.push_back(state.body.x_hat);
  log.mu_x.push_back(state.body.mu_x);
  log.e_x.push_back(state.e_x);
  log.errors.push_back(state.errors);
  const PredictionErrorRates rates = ComputePredictionErrors(state, frame, channels, cfg);
  log.predictions.push_back(rates.predictions);
  log.free_energy.push_back(FreeEnergy(state, frame, channels, cfg));
}

TrajectoryLog Run(const std::vector<SensorFrame>& frames, const EstimatorState& initial,
                  const std::vector<SensorChannel>& channels, const EstimatorConfig& cfg) {
  ValidateChannels(channels, initial.dim());
  cfg.Validate(initial.dim());
  TrajectoryLog log = MakeLog(initial.dim(), channels);
  SensorFrame no_readings;
  no_readings.readings.resize(channels.size());
  AppendRow(log, initial, frames.empty() ? no_readings : frames.front(), channels, cfg);

  EstimatorState state = initial;
  StepReport report;
  for (size_t k = 0; k < frames.size(); ++k) {
    try {
      state = Step(state, frames[k], channels, cfg, &report);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.component(), e.last_finite(), static_cast<long>(k));
    }
    for (int i : report.faulted) log.faults.emplace_back(log.rows(), channels[i].id);
    AppendRow(log, state, frames[k], channels, cfg);
  }
  return log;
}

}  // namespace pcbody::estimator
