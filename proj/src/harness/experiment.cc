#include "pcbody/harness/experiment.h"

#include <algorithm>
#include <set>

#include "pcbody/common/json_eigen.h"
#include "pcbody/common/errors.h"
#include "pcbody/sim/scenario_io.h"
#include "pcbody/tactile/tactile_io.h"

namespace pcbody::harness {
namespace {

using nlohmann::json;

json Vec(const Eigen::VectorXd& v) { return pcbody::ToJson(v); }

template <int N>
Eigen::Matrix<double, N, 1> FixedVec(const json& j, const std::string& what) {
  const Eigen::VectorXd v = VectorFromJson(j, what);
  if (v.size() != N) throw UsageError(what + ": expected " + std::to_string(N) + " numbers");
  return v;
}

// Rejects keys in `given` that do not appear in `reference`, recursing into
// objects present in both.
void CheckKnownKeys(const json& given, const json& reference, const std::string& path) {
  if (!given.is_object()) return;
  for (const auto& [key, value] : given.items()) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!reference.is_object() || !reference.contains(key)) {
      throw UsageError("unknown spec key '" + full + "'");
    }
    if (value.is_object() && reference.at(key).is_object()) {
      CheckKnownKeys(value, reference.at(key), full);
    }
  }
}

json SectionOrEmpty(const json& j, const char* key) {
  return j.contains(key) ? j.at(key) : json::object();
}

}  // namespace

gp::GPHyperparams GPSettings::Hyper(int input_dim) const {
  gp::GPHyperparams h;
  h.noise_variance = noise_std * noise_std;
  h.length_scales = Eigen::VectorXd::Constant(input_dim, length_scale);
  h.signal_variance = signal_variance;
  return h;
}

void ExperimentSpec::Validate() const {
  try {
    noise.Validate();
    exploration.Validate();
    trajectory.Validate();
    estimator.config.Validate(3);
    gp.Hyper(3).Validate(3);
    if (touch.enabled) touch.params.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid spec: ") + e.what());
  }
  if (exploration_samples < 1) throw UsageError("exploration_samples must be at least 1");
  if (std::abs(trajectory.dt - estimator.config.dt) > 1e-12) {
    throw UsageError("trajectory.dt must equal estimator.dt");
  }
  if ((estimator.sigma_p.array() <= 0.0).any() || (estimator.sigma_v.array() <= 0.0).any() ||
      !(estimator.sigma_t > 0.0)) {
    throw UsageError("channel variances must be positive");
  }
  if ((kf.process_noise.array() < 0.0).any() || (kf.measurement_noise.array() <= 0.0).any()) {
    throw UsageError("invalid Kalman filter noise");
  }
  if (!(metrics.transient >= 0.0) || !(metrics.band_multiple > 0.0)) {
    throw UsageError("invalid metrics settings");
  }
  const ChannelSet set = ChannelSet::Parse(channels);
  if (set.tactile && !touch.enabled) throw UsageError("channel t requires touch.enabled");
  if (proprio.mode == sim::ProprioMode::kQuadratic && set.proprio_joints.size() != 0 &&
      set.proprio_joints.size() != 3) {
    throw UsageError("quadratic proprioception supports only the full joint set");
  }
}

const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> kNames = {"ablation",   "nonlinear_proprio",
                                                  "damaged_sensor", "prior_bias",
                                                  "rubber_hand", "custom"};
  return kNames;
}

ExperimentSpec Preset(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  const Eigen::Vector3d center = sim::WorkspaceCenter();

  // Exploration shared by every preset: 46 poses, one every 0.5 s, elbow held.
  s.exploration.dt = 0.5;
  s.exploration.segment = 2.3;
  s.exploration.duration = 23.0;
  s.exploration.elbow_fixed = true;
  s.gp.signal_variance = 10.0;

  const Eigen::Vector3d fig6_truth(-0.9550, -0.8692, 0.7532);
  const Eigen::Vector3d fig6_prior(-0.8, 0.70, 0.60);

  if (name == "ablation") {
    s.channels = {"p", "v"};
    s.trajectory.elbow_fixed = true;
    s.estimator.initial = center + Eigen::Vector3d(0.2, -0.2, -0.3);
  } else if (name == "nonlinear_proprio" || name == "prior_bias") {
    s.channels = {"p"};
    s.trajectory.duration = 20.0;
    s.trajectory.static_pose = fig6_truth;
    s.estimator.initial = fig6_prior;
    if (name == "nonlinear_proprio") s.proprio.mode = sim::ProprioMode::kQuadratic;
  } else if (name == "damaged_sensor") {
    s.channels = {"p", "v"};
    s.trajectory.segment = 5.0;
    s.trajectory.span = Eigen::Vector3d(0.3, 0.25, 0.3);
    s.proprio.mode = sim::ProprioMode::kBiased;
    s.proprio.bias = Eigen::Vector3d(0.3, 0.0, 0.0);
  } else if (name == "rubber_hand") {
    s.channels = {"p", "t"};
    s.trajectory.static_pose = center + Eigen::Vector3d(0.1, 0.1, 0.0);
    s.touch.enabled = true;
    s.touch.params.a2 = 1000.0;
    s.touch.script.mode = sim::TouchMode::kPerturbation;
    s.touch.script.visual_offset = Eigen::Vector2d(50.0, 0.0);
    s.touch.script.strokes = {sim::TouchStroke{5.0, 25.0}};
  } else if (name == "custom") {
    s.channels = {"p", "v"};
  } else {
    throw UsageError("unknown experiment '" + name + "'");
  }
  return s;
}

json ToJson(const ExperimentSpec& s) {
  json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["channels"] = s.channels;
  json noise = sim::ToJson(s.noise);
  noise.erase("seed");
  j["noise"] = noise;
  j["exploration"] = {{"trajectory", sim::ToJson(s.exploration)},
                      {"samples", s.exploration_samples}};
  j["trajectory"] = sim::ToJson(s.trajectory);
  j["proprio"] = sim::ToJson(s.proprio);
  j["gp"] = {{"noise_std", s.gp.noise_std},
             {"length_scale", s.gp.length_scale},
             {"signal_variance", s.gp.signal_variance}};
  const auto& e = s.estimator;
  j["estimator"] = {{"dt", e.config.dt},
                    {"lambda", e.config.lambda},
                    {"sigma_x", Vec(e.config.sigma_x)},
                    {"sigma_p", Vec(e.sigma_p)},
                    {"sigma_v", Vec(e.sigma_v)},
                    {"sigma_t", e.sigma_t},
                    {"initial", e.initial ? Vec(*e.initial) : json("truth")}};
  j["kf"] = {{"process_noise", Vec(s.kf.process_noise)},
             {"measurement_noise", Vec(s.kf.measurement_noise)}};
  j["metrics"] = {{"transient", s.metrics.transient},
                  {"band_multiple", s.metrics.band_multiple}};
  json script = sim::ToJson(s.touch.script);
  script.erase("duration");
  script.erase("dt");
  j["touch"] = {{"enabled", s.touch.enabled},
                {"params", tactile::TouchParamsToJson(s.touch.params)},
                {"script", script}};
  return j;
}

ExperimentSpec SpecFromJson(const json& j) {
  if (!j.is_object()) throw UsageError("spec must be a JSON object");
  const std::string name = j.value("name", std::string("custom"));
  ExperimentSpec s = Preset(name);
  CheckKnownKeys(j, ToJson(s), "");
  try {
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("channels")) {
      const auto& c = j.at("channels");
      s.channels = c.is_string() ? SplitList(c.get<std::string>())
                                 : c.get<std::vector<std::string>>();
    }
    if (j.contains("noise")) {
      json noise = j.at("noise");
      noise["seed"] = s.seed;
      s.noise = sim::NoiseSpecFromJson(noise, s.noise);
    }
    s.noise.seed = s.seed;
    if (j.contains("exploration")) {
      const json& ex = j.at("exploration");
      s.exploration = sim::TrajectorySpecFromJson(SectionOrEmpty(ex, "trajectory"), s.exploration);
      if (ex.contains("samples")) s.exploration_samples = ex.at("samples").get<int>();
    }
    if (j.contains("trajectory")) {
      s.trajectory = sim::TrajectorySpecFromJson(j.at("trajectory"), s.trajectory);
    }
    if (j.contains("proprio")) s.proprio = sim::ProprioceptionMapFromJson(j.at("proprio"), s.proprio);
    if (j.contains("gp")) {
      const json& g = j.at("gp");
      s.gp.noise_std = g.value("noise_std", s.gp.noise_std);
      s.gp.length_scale = g.value("length_scale", s.gp.length_scale);
      s.gp.signal_variance = g.value("signal_variance", s.gp.signal_variance);
    }
    if (j.contains("estimator")) {
      const json& e = j.at("estimator");
      auto& es = s.estimator;
      es.config.dt = e.value("dt", es.config.dt);
      es.config.lambda = e.value("lambda", es.config.lambda);
      if (e.contains("sigma_x")) es.config.sigma_x = FixedVec<3>(e.at("sigma_x"), "sigma_x");
      if (e.contains("sigma_p")) es.sigma_p = FixedVec<3>(e.at("sigma_p"), "sigma_p");
      if (e.contains("sigma_v")) es.sigma_v = FixedVec<2>(e.at("sigma_v"), "sigma_v");
      es.sigma_t = e.value("sigma_t", es.sigma_t);
      if (e.contains("initial")) {
        const json& init = e.at("initial");
        if (init.is_string() && init.get<std::string>() == "truth") {
          es.initial.reset();
        } else {
          es.initial = FixedVec<3>(init, "initial");
        }
      }
    }
    if (j.contains("kf")) {
      const json& k = j.at("kf");
      if (k.contains("process_noise")) s.kf.process_noise = FixedVec<3>(k.at("process_noise"), "process_noise");
      if (k.contains("measurement_noise")) {
        s.kf.measurement_noise = FixedVec<3>(k.at("measurement_noise"), "measurement_noise");
      }
    }
    if (j.contains("metrics")) {
      const json& m = j.at("metrics");
      s.metrics.transient = m.value("transient", s.metrics.transient);
      s.metrics.band_multiple = m.value("band_multiple", s.metrics.band_multiple);
    }
    if (j.contains("touch")) {
      const json& t = j.at("touch");
      s.touch.enabled = t.value("enabled", s.touch.enabled);
      if (t.contains("params")) {
        json merged = tactile::TouchParamsToJson(s.touch.params);
        merged.update(t.at("params"));
        s.touch.params = tactile::TouchParamsFromJson(merged);
      }
      if (t.contains("script")) {
        s.touch.script = sim::OtherAgentScriptFromJson(t.at("script"), s.touch.script);
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid spec: ") + e.what());
  } catch (const FormatError& e) {
    throw UsageError(std::string("invalid spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid spec: ") + e.what());
  }
  s.Validate();
  return s;
}

std::vector<std::string> SplitList(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '[' || c == '{') ++depth;
    if (c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else if (c != ' ' || depth > 0) {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

void ApplyOverrides(json& j, const std::string& overrides) {
  for (const std::string& item : SplitList(overrides)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("override '" + item + "' is not of the form key=value");
    }
    const std::string path = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &j;
    const auto keys = SplitList(path, '.');
    for (size_t k = 0; k < keys.size(); ++k) {
      const std::string& key = keys[k];
      const bool last = k + 1 == keys.size();
      if (node->is_array()) {
        size_t idx = 0;
        try {
          idx = std::stoul(key);
        } catch (const std::exception&) {
          throw UsageError("override '" + path + "': '" + key + "' is not an array index");
        }
        if (idx >= node->size()) throw UsageError("override '" + path + "': index out of range");
        node = &(*node)[idx];
      } else {
        if (!node->is_object()) *node = json::object();
        node = &(*node)[key];
      }
      if (last) *node = value;
    }
  }
}

ChannelSet ChannelSet::Parse(const std::vector<std::string>& tokens) {
  ChannelSet set;
  std::set<int> joints;
  bool full_p = false;
  for (const auto& tok : tokens) {
    if (tok == "kf") {
      set.kf = true;
    } else if (tok == "p") {
      full_p = true;
    } else if (tok == "p1" || tok == "p2" || tok == "p3") {
      joints.insert(tok[1] - '1');
    } else if (tok == "v") {
      set.visual = true;
    } else if (tok == "t") {
      set.tactile = true;
    } else {
      throw UsageError("unknown channel '" + tok + "' (expected p, p1, p2, p3, v, t or kf)");
    }
  }
  if (full_p) joints = {0, 1, 2};
  set.proprio_joints.assign(joints.begin(), joints.end());
  if (set.kf && (set.visual || set.tactile || !set.proprio_joints.empty())) {
    throw UsageError("channel kf cannot be combined with other channels");
  }
  if (!set.kf && set.proprio_joints.empty() && !set.visual && !set.tactile) {
    throw UsageError("no channels selected");
  }
  return set;
}

std::string ChannelSet::Label() const {
  if (kf) return "kf";
  std::vector<std::string> parts;
  if (proprio_joints.size() == 3) {
    parts.push_back("p");
  } else {
    for (int j : proprio_joints) parts.push_back("p" + std::to_string(j + 1));
  }
  if (visual) parts.push_back("v");
  if (tactile) parts.push_back("t");
  std::string label;
  for (const auto& p : parts) label += (label.empty() ? "" : "+") + p;
  return label;
}

}  // namespace pcbody::harness
