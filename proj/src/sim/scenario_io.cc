#include "pcbody/sim/scenario_io.h"

#include <cmath>
#include <limits>

#include "pcbody/common/csv.h"
#include "pcbody/common/errors.h"
#include "pcbody/common/json_eigen.h"

namespace pcbody::sim {
namespace {

template <int N>
Eigen::Matrix<double, N, 1> FixedVector(const nlohmann::json& j, const std::string& what) {
  const Eigen::VectorXd v = VectorFromJson(j, what);
  if (v.size() != N) throw FormatError(what + ": expected " + std::to_string(N) + " entries");
  return v;
}

template <typename T, typename F>
void Read(const nlohmann::json& j, const char* key, T& field, F&& convert) {
  if (j.contains(key)) field = convert(j.at(key));
}

template <typename T>
void ReadScalar(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

template <typename Fn>
auto Guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

nlohmann::json ToJson(const TrajectorySpec& s) {
  nlohmann::json j = {{"duration", s.duration},
                      {"dt", s.dt},
                      {"segment", s.segment},
                      {"center", pcbody::ToJson(Eigen::VectorXd(s.center))},
                      {"span", pcbody::ToJson(Eigen::VectorXd(s.span))},
                      {"elbow_fixed", s.elbow_fixed},
                      {"elbow_jitter", s.elbow_jitter},
                      {"hold", s.hold}};
  j["static_pose"] = s.static_pose ? pcbody::ToJson(Eigen::VectorXd(*s.static_pose))
                                   : nlohmann::json(nullptr);
  return j;
}

TrajectorySpec TrajectorySpecFromJson(const nlohmann::json& j, TrajectorySpec s) {
  return Guard("trajectory", [&] {
    ReadScalar(j, "duration", s.duration);
    ReadScalar(j, "dt", s.dt);
    ReadScalar(j, "segment", s.segment);
    Read(j, "center", s.center, [](const auto& v) { return FixedVector<3>(v, "center"); });
    Read(j, "span", s.span, [](const auto& v) { return FixedVector<3>(v, "span"); });
    ReadScalar(j, "elbow_fixed", s.elbow_fixed);
    ReadScalar(j, "elbow_jitter", s.elbow_jitter);
    ReadScalar(j, "hold", s.hold);
    if (j.contains("static_pose")) {
      if (j.at("static_pose").is_null()) {
        s.static_pose.reset();
      } else {
        s.static_pose = FixedVector<3>(j.at("static_pose"), "static_pose");
      }
    }
    s.Validate();
    return s;
  });
}

nlohmann::json ToJson(const NoiseSpec& n) {
  return {{"proprio_std", pcbody::ToJson(Eigen::VectorXd(n.proprio_std))},
          {"visual_std", pcbody::ToJson(Eigen::VectorXd(n.visual_std))},
          {"seed", n.seed}};
}

NoiseSpec NoiseSpecFromJson(const nlohmann::json& j, NoiseSpec n) {
  return Guard("noise", [&] {
    Read(j, "proprio_std", n.proprio_std, [](const auto& v) { return FixedVector<3>(v, "proprio_std"); });
    Read(j, "visual_std", n.visual_std, [](const auto& v) { return FixedVector<2>(v, "visual_std"); });
    ReadScalar(j, "seed", n.seed);
    n.Validate();
    return n;
  });
}

std::string ToString(ProprioMode mode) {
  switch (mode) {
    case ProprioMode::kLinear:
      return "linear";
    case ProprioMode::kQuadratic:
      return "quadratic";
    case ProprioMode::kBiased:
      return "biased";
  }
  return "linear";
}

ProprioMode ProprioModeFromString(const std::string& s) {
  if (s == "linear") return ProprioMode::kLinear;
  if (s == "quadratic") return ProprioMode::kQuadratic;
  if (s == "biased") return ProprioMode::kBiased;
  throw FormatError("unknown proprioception mode '" + s + "'");
}

std::string ToString(TouchMode mode) {
  switch (mode) {
    case TouchMode::kSynchronous:
      return "synchronous";
    case TouchMode::kAsynchronous:
      return "asynchronous";
    case TouchMode::kPerturbation:
      return "perturbation";
  }
  return "synchronous";
}

TouchMode TouchModeFromString(const std::string& s) {
  if (s == "synchronous") return TouchMode::kSynchronous;
  if (s == "asynchronous") return TouchMode::kAsynchronous;
  if (s == "perturbation") return TouchMode::kPerturbation;
  throw FormatError("unknown touch mode '" + s + "'");
}

nlohmann::json ToJson(const ProprioceptionMap& p) {
  return {{"mode", ToString(p.mode)}, {"bias", pcbody::ToJson(Eigen::VectorXd(p.bias))}};
}

ProprioceptionMap ProprioceptionMapFromJson(const nlohmann::json& j, ProprioceptionMap p) {
  return Guard("proprioception", [&] {
    if (j.contains("mode")) p.mode = ProprioModeFromString(j.at("mode").get<std::string>());
    Read(j, "bias", p.bias, [](const auto& v) { return FixedVector<3>(v, "bias"); });
    return p;
  });
}

nlohmann::json ToJson(const OtherAgentScript& s) {
  nlohmann::json strokes = nlohmann::json::array();
  for (const auto& st : s.strokes) strokes.push_back({{"t_start", st.t_start}, {"dwell", st.dwell}});
  return {{"mode", ToString(s.mode)},
          {"duration", s.duration},
          {"dt", s.dt},
          {"strokes", strokes},
          {"approach_time", s.approach_time},
          {"rest", pcbody::ToJson(Eigen::VectorXd(s.rest))},
          {"rest_sway", s.rest_sway},
          {"rest_period", s.rest_period},
          {"visual_offset", pcbody::ToJson(Eigen::VectorXd(s.visual_offset))},
          {"async_offset", s.async_offset},
          {"touched_cell", s.touched_cell},
          {"contact_level", s.contact_level},
          {"baseline_level", s.baseline_level},
          {"skin_noise_std", s.skin_noise_std}};
}

OtherAgentScript OtherAgentScriptFromJson(const nlohmann::json& j, OtherAgentScript s) {
  return Guard("other agent script", [&] {
    if (j.contains("mode")) s.mode = TouchModeFromString(j.at("mode").get<std::string>());
    ReadScalar(j, "duration", s.duration);
    ReadScalar(j, "dt", s.dt);
    if (j.contains("strokes")) {
      s.strokes.clear();
      for (const auto& st : j.at("strokes")) {
        s.strokes.push_back({st.at("t_start").get<double>(), st.at("dwell").get<double>()});
      }
    }
    ReadScalar(j, "approach_time", s.approach_time);
    Read(j, "rest", s.rest, [](const auto& v) { return FixedVector<2>(v, "rest"); });
    ReadScalar(j, "rest_sway", s.rest_sway);
    ReadScalar(j, "rest_period", s.rest_period);
    Read(j, "visual_offset", s.visual_offset,
         [](const auto& v) { return FixedVector<2>(v, "visual_offset"); });
    ReadScalar(j, "async_offset", s.async_offset);
    ReadScalar(j, "touched_cell", s.touched_cell);
    ReadScalar(j, "contact_level", s.contact_level);
    ReadScalar(j, "baseline_level", s.baseline_level);
    ReadScalar(j, "skin_noise_std", s.skin_noise_std);
    s.Validate();
    return s;
  });
}

void WriteTruthCsv(const std::string& path, const std::vector<TruthRecord>& truth) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  csv::Table table;
  table.header = {"t", "q_1", "q_2", "q_3", "u", "v"};
  for (const auto& r : truth) {
    table.rows.push_back({r.t, r.q[0], r.q[1], r.q[2], r.pixel ? r.pixel->x() : kNaN,
                          r.pixel ? r.pixel->y() : kNaN});
  }
  csv::WriteFile(path, table);
}

std::vector<TruthRecord> ReadTruthCsv(const std::string& path) {
  const csv::Table table = csv::ReadFile(path);
  const int tc = table.Column("t"), q1 = table.Column("q_1"), q2 = table.Column("q_2"),
            q3 = table.Column("q_3"), uc = table.Column("u"), vc = table.Column("v");
  std::vector<TruthRecord> out;
  for (const auto& row : table.rows) {
    TruthRecord r;
    r.t = row[tc];
    r.q = Eigen::Vector3d(row[q1], row[q2], row[q3]);
    if (!std::isnan(row[uc]) && !std::isnan(row[vc])) r.pixel = Eigen::Vector2d(row[uc], row[vc]);
    out.push_back(r);
  }
  return out;
}

}  // namespace pcbody::sim
