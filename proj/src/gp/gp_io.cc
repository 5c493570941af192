#include "pcbody/gp/gp_io.h"

#include <fstream>

#include "pcbody/common/csv.h"
#include "pcbody/common/errors.h"
#include "pcbody/common/json_eigen.h"

namespace pcbody::gp {

void WriteSampleSet(const std::string& path, const SampleSet& samples) {
  csv::Table table;
  for (Eigen::Index m = 0; m < samples.inputs.cols(); ++m) {
    table.header.push_back("x_" + std::to_string(m + 1));
  }
  for (Eigen::Index d = 0; d < samples.targets.cols(); ++d) {
    table.header.push_back("s_" + std::to_string(d + 1));
  }
  for (Eigen::Index i = 0; i < samples.inputs.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index m = 0; m < samples.inputs.cols(); ++m) row.push_back(samples.inputs(i, m));
    for (Eigen::Index d = 0; d < samples.targets.cols(); ++d) row.push_back(samples.targets(i, d));
    table.rows.push_back(std::move(row));
  }
  csv::WriteFile(path, table);
}

SampleSet ReadSampleSet(const std::string& path) {
  const csv::Table table = csv::ReadFile(path);
  std::vector<int> x_cols, s_cols;
  for (int m = 1; table.HasColumn("x_" + std::to_string(m)); ++m) {
    x_cols.push_back(table.Column("x_" + std::to_string(m)));
  }
  for (int d = 1; table.HasColumn("s_" + std::to_string(d)); ++d) {
    s_cols.push_back(table.Column("s_" + std::to_string(d)));
  }
  if (x_cols.empty() || s_cols.empty()) {
    throw FormatError(path + ": sample set needs x_1.. and s_1.. columns");
  }
  SampleSet samples;
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  samples.inputs.resize(n, static_cast<Eigen::Index>(x_cols.size()));
  samples.targets.resize(n, static_cast<Eigen::Index>(s_cols.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    for (size_t m = 0; m < x_cols.size(); ++m) samples.inputs(i, m) = row[x_cols[m]];
    for (size_t d = 0; d < s_cols.size(); ++d) samples.targets(i, d) = row[s_cols[d]];
  }
  return samples;
}

nlohmann::json HyperparamsToJson(const GPHyperparams& hyper) {
  return {{"noise_variance", hyper.noise_variance},
          {"length_scales", ToJson(hyper.length_scales)},
          {"signal_variance", hyper.signal_variance}};
}

GPHyperparams HyperparamsFromJson(const nlohmann::json& j) {
  try {
    GPHyperparams h;
    h.noise_variance = j.at("noise_variance").get<double>();
    h.length_scales = VectorFromJson(j.at("length_scales"), "length_scales");
    h.signal_variance = j.at("signal_variance").get<double>();
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("GP hyperparameters: ") + e.what());
  }
}

nlohmann::json ModelToJson(const GPModel& model) {
  return {{"input_dim", model.input_dim()},
          {"output_dim", model.output_dim()},
          {"hyper", HyperparamsToJson(model.hyper())},
          {"X", ToJson(model.inputs())},
          {"alpha", ToJson(model.alpha())}};
}

GPModel ModelFromJson(const nlohmann::json& j) {
  try {
    GPHyperparams hyper = HyperparamsFromJson(j.at("hyper"));
    Eigen::MatrixXd X = MatrixFromJson(j.at("X"), "X");
    Eigen::MatrixXd alpha = MatrixFromJson(j.at("alpha"), "alpha");
    if (j.at("output_dim").get<int>() != alpha.cols() ||
        j.at("input_dim").get<int>() != X.cols()) {
      throw FormatError("GP model: declared dimensions do not match stored matrices");
    }
    return GPModel(std::move(X), std::move(alpha), std::move(hyper));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("GP model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("GP model: ") + e.what());
  }
}

void SaveModel(const std::string& path, const GPModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << ModelToJson(model).dump(2) << '\n';
}

GPModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return ModelFromJson(j);
}

}  // namespace pcbody::gp
