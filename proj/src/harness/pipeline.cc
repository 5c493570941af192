#include "pcbody/harness/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pcbody/common/csv.h"
#include "pcbody/common/errors.h"
#include "pcbody/common/json_eigen.h"
#include "pcbody/estimator/forward_model.h"
#include "pcbody/gp/gp_io.h"
#include "pcbody/harness/manifest.h"
#include "pcbody/kf/kalman_filter.h"
#include "pcbody/sim/scenario_io.h"
#include "pcbody/tactile/tactile_io.h"
#include "pcbody/tactile/touch_model.h"

namespace pcbody::harness {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Independent, reproducible sub-streams of one experiment seed.
std::uint64_t SubSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string PathIn(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void WriteJson(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << j.dump(2) << '\n';
}

json ReadJson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing artifact: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ArtifactError("unreadable " + path + ": " + e.what());
  }
}

gp::SampleSet ToFeatureTargets(const gp::SampleSet& pixels, const sim::VisualFeatureMap& map) {
  gp::SampleSet out = pixels;
  for (Eigen::Index i = 0; i < out.targets.rows(); ++i) {
    out.targets.row(i) = map.ToFeatures(pixels.targets.row(i).transpose()).transpose();
  }
  return out;
}

struct ChannelLayout {
  std::vector<estimator::SensorChannel> channels;
  int proprio = -1;
  int visual = -1;
  int tactile = -1;
};

ChannelLayout BuildChannels(const ExperimentSpec& spec, const ChannelSet& set,
                            const std::shared_ptr<const gp::GPModel>& visual_model) {
  ChannelLayout layout;
  const auto& es = spec.estimator;
  if (!set.proprio_joints.empty()) {
    estimator::SensorChannel ch;
    ch.id = "p";
    if (spec.proprio.mode == sim::ProprioMode::kQuadratic) {
      ch.model = std::make_shared<estimator::QuadraticModel>(3);
      ch.variance = es.sigma_p;
    } else if (set.proprio_joints.size() == 3) {
      ch.model = std::make_shared<estimator::IdentityModel>(3);
      ch.variance = es.sigma_p;
    } else {
      ch.model = std::make_shared<estimator::SelectModel>(3, set.proprio_joints);
      ch.variance.resize(set.proprio_joints.size());
      for (size_t k = 0; k < set.proprio_joints.size(); ++k) {
        ch.variance[k] = es.sigma_p[set.proprio_joints[k]];
      }
    }
    layout.proprio = static_cast<int>(layout.channels.size());
    layout.channels.push_back(std::move(ch));
  }
  if (set.needs_visual_model() && !visual_model) {
    throw ArtifactError("channels " + set.Label() + " need a trained visual model");
  }
  if (set.visual) {
    layout.visual = static_cast<int>(layout.channels.size());
    layout.channels.push_back({"v", es.sigma_v, std::make_shared<estimator::GPForwardModel>(visual_model)});
  }
  if (set.tactile) {
    layout.tactile = static_cast<int>(layout.channels.size());
    layout.channels.push_back({"t", Eigen::VectorXd::Constant(1, es.sigma_t),
                               std::make_shared<tactile::TouchForwardModel>(visual_model,
                                                                           spec.touch.params)});
  }
  return layout;
}

std::vector<tactile::TouchEvent> DetectEvents(const ExperimentSpec& spec, const Dataset& data) {
  if (!data.other) throw UsageError("tactile channel requested but the dataset has no touch recording");
  const auto& p = spec.touch.params;
  return tactile::PairEvents(tactile::DetectTactileEvents(data.other->skin, p),
                             tactile::DetectVisualEvents(data.other->track, p), p);
}

const tactile::TouchEvent* ActiveEventAt(const std::vector<tactile::TouchEvent>& events, double t) {
  for (const auto& e : events) {
    if (e.active && t >= e.t_onset - 1e-9 && t <= e.t_offset + 1e-9) return &e;
  }
  return nullptr;
}

std::vector<estimator::SensorFrame> BuildFrames(const ExperimentSpec& spec, const Dataset& data,
                                                const ChannelSet& set, const ChannelLayout& layout,
                                                const std::vector<tactile::TouchEvent>& events,
                                                const sim::Scene& scene) {
  std::vector<estimator::SensorFrame> frames;
  frames.reserve(data.stream.size());
  for (const auto& obs : data.stream) {
    estimator::SensorFrame f;
    f.t = obs.t;
    f.readings.resize(layout.channels.size());
    if (layout.proprio >= 0) {
      auto& r = f.readings[layout.proprio];
      r.available = true;
      if (set.proprio_joints.size() == 3) {
        r.value = obs.s_p;
      } else {
        r.value.resize(set.proprio_joints.size());
        for (size_t k = 0; k < set.proprio_joints.size(); ++k) {
          r.value[k] = obs.s_p[set.proprio_joints[k]];
        }
      }
    }
    if (layout.visual >= 0 && obs.s_v) {
      auto& r = f.readings[layout.visual];
      r.available = true;
      r.value = scene.features.ToFeatures(*obs.s_v);
    }
    if (layout.tactile >= 0) {
      if (const auto* e = ActiveEventAt(events, obs.t)) {
        auto& r = f.readings[layout.tactile];
        r.available = true;
        r.value = Eigen::VectorXd::Constant(1, *tactile::TactileObservation(*e, spec.touch.params));
        r.context = tactile::TouchForwardModel::Context(scene.features.ToFeatures(e->o_v), e->delta);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

Eigen::Vector3d InitialPose(const ExperimentSpec& spec, const Dataset& data) {
  if (spec.estimator.initial) return *spec.estimator.initial;
  if (!data.stream.empty()) return data.stream.front().q_true;
  return spec.trajectory.static_pose.value_or(spec.trajectory.center);
}

std::vector<Eigen::VectorXd> TruthRows(const Dataset& data, const Eigen::Vector3d& initial) {
  std::vector<Eigen::VectorXd> rows;
  rows.push_back(data.stream.empty() ? Eigen::VectorXd(initial)
                                     : Eigen::VectorXd(data.stream.front().q_true));
  for (const auto& obs : data.stream) rows.push_back(obs.q_true);
  return rows;
}

double Band(const ExperimentSpec& spec) {
  return spec.metrics.band_multiple * spec.noise.proprio_std.maxCoeff();
}

// Mean |s - g| per channel over scored rows. Row k+1 pairs with frame k.
void AddChannelErrors(MetricsReport& m, const estimator::TrajectoryLog& log,
                      const std::vector<estimator::SensorFrame>& frames,
                      const ChannelLayout& layout, double transient) {
  for (size_t i = 0; i < layout.channels.size(); ++i) {
    double sum = 0.0;
    long count = 0;
    for (size_t k = 0; k < frames.size(); ++k) {
      const size_t row = k + 1;
      if (!(log.t[row] > transient)) continue;
      const auto& r = frames[k].readings[i];
      const auto& g = log.predictions[row][i];
      if (!r.available || g.size() != r.value.size()) continue;
      sum += (r.value - g).cwiseAbs().sum();
      count += r.value.size();
    }
    m.channel_mae[layout.channels[i].id] = count > 0 ? sum / count : kNaN;
  }
}

}  // namespace

Dataset GenerateDataset(const ExperimentSpec& spec, const sim::Scene& scene) {
  spec.Validate();
  Dataset data;
  sim::Rng explore_rng(SubSeed(spec.seed, 1));
  data.exploration = sim::GenerateExploration(scene, spec.noise, sim::ProprioceptionMap{},
                                              spec.exploration, spec.exploration_samples,
                                              explore_rng);
  sim::Rng traj_rng(SubSeed(spec.seed, 2));
  const sim::JointTrajectory traj = sim::GenerateTrajectory(spec.trajectory, traj_rng);
  sim::Rng obs_rng(SubSeed(spec.seed, 3));
  data.stream.reserve(traj.q.size());
  for (size_t k = 0; k < traj.q.size(); ++k) {
    data.stream.push_back(sim::Observe(scene, spec.noise, spec.proprio, traj.q[k], traj.t[k], obs_rng));
  }
  if (spec.touch.enabled) {
    sim::OtherAgentScript script = spec.touch.script;
    script.duration = spec.trajectory.duration;
    script.dt = spec.trajectory.dt;
    Eigen::Vector2d target = scene.features.center;
    if (!data.stream.empty()) {
      const double t_touch = script.strokes.empty() ? 0.0 : script.strokes.front().t_start;
      const auto idx = std::min<size_t>(
          data.stream.size() - 1,
          static_cast<size_t>(std::max(0L, std::lround(t_touch / spec.trajectory.dt))));
      const auto& px = data.stream[idx].pixel_true;
      if (!px) throw UsageError("touched hand is outside the camera frame");
      target = *px;
    }
    sim::Rng other_rng(SubSeed(spec.seed, 4));
    data.other = sim::SimulateOtherAgent(script, target, other_rng);
  }
  return data;
}

gp::GPModel TrainVisualModel(const ExperimentSpec& spec, const gp::SampleSet& exploration,
                             const sim::Scene& scene) {
  return gp::Train(ToFeatureTargets(exploration, scene.features), spec.gp.Hyper(3));
}

TrainSummary SummarizeTraining(const ExperimentSpec& spec, const gp::GPModel& model,
                               const gp::SampleSet& exploration, const sim::Scene& scene) {
  const gp::SampleSet feat = ToFeatureTargets(exploration, scene.features);
  TrainSummary s;
  s.hyper = model.hyper();
  s.noise_std = spec.gp.noise_std;
  s.samples = feat.size();
  int within = 0;
  double sum = 0.0;
  for (int i = 0; i < feat.size(); ++i) {
    const Eigen::VectorXd res = model.Predict(feat.inputs.row(i).transpose()) -
                                feat.targets.row(i).transpose();
    const double px = res.norm() * scene.features.pixels_per_unit;
    s.max_residual_px = std::max(s.max_residual_px, px);
    sum += px;
    if (res.cwiseAbs().maxCoeff() <= 3.0 * spec.gp.noise_std) ++within;
  }
  s.mean_residual_px = s.samples > 0 ? sum / s.samples : 0.0;
  s.fraction_within_3sigma = s.samples > 0 ? static_cast<double>(within) / s.samples : 0.0;
  return s;
}

json ToJson(const TrainSummary& s) {
  return {{"hyper", gp::HyperparamsToJson(s.hyper)},
          {"noise_std", s.noise_std},
          {"samples", s.samples},
          {"max_residual_px", s.max_residual_px},
          {"mean_residual_px", s.mean_residual_px},
          {"fraction_within_3sigma", s.fraction_within_3sigma}};
}

RunOutput Estimate(const ExperimentSpec& spec, const Dataset& data,
                   std::shared_ptr<const gp::GPModel> visual_model, const ChannelSet& set,
                   const sim::Scene& scene) {
  RunOutput out;
  const Eigen::Vector3d initial = InitialPose(spec, data);
  const double t0 = data.stream.empty() ? 0.0 : data.stream.front().t;

  if (set.kf) {
    kf::KFConfig cfg;
    cfg.process_noise = spec.kf.process_noise.asDiagonal();
    cfg.measurement_noise = spec.kf.measurement_noise.asDiagonal();
    kf::KFTrack track;
    for (const auto& obs : data.stream) {
      track.t.push_back(obs.t);
      track.z.push_back(obs.s_p);
    }
    out.log = kf::RunKalman(track, kf::InitialKFState(initial), cfg, t0, spec.estimator.config.dt);
    out.log.AttachTruth(TruthRows(data, initial));
    out.metrics = ComputeMetrics(out.log, spec.metrics.transient, Band(spec));
    out.metrics.label = set.Label();
    return out;
  }

  const ChannelLayout layout = BuildChannels(spec, set, visual_model);
  if (set.tactile) out.events = DetectEvents(spec, data);
  const auto frames = BuildFrames(spec, data, set, layout, out.events, scene);
  const auto state0 = estimator::InitialState(initial, layout.channels, t0);
  out.log = estimator::Run(frames, state0, layout.channels, spec.estimator.config);
  out.log.AttachTruth(TruthRows(data, initial));
  out.metrics = ComputeMetrics(out.log, spec.metrics.transient, Band(spec));
  out.metrics.label = set.Label();
  AddChannelErrors(out.metrics, out.log, frames, layout, spec.metrics.transient);

  if (set.tactile && !out.events.empty()) {
    // Control: identical stream with the tactile channel silent.
    auto control_frames = frames;
    for (auto& f : control_frames) f.readings[layout.tactile] = estimator::SensorReading{};
    out.control_log = estimator::Run(control_frames, state0, layout.channels, spec.estimator.config);
    out.control_log->AttachTruth(TruthRows(data, initial));

    const tactile::TouchEvent* target = &out.events.front();
    for (const auto& e : out.events) {
      if (e.active) {
        target = &e;
        break;
      }
    }
    const auto px = [&](const Eigen::VectorXd& x) {
      return scene.features.ToPixels(visual_model->Predict(x));
    };
    DriftReport d;
    d.control_px = px(out.control_log->x_hat.back());
    d.drift_px = px(out.log.x_hat.back()) - d.control_px;
    d.target_px = target->o_v;
    const Eigen::Vector2d disp = d.target_px - d.control_px;
    d.fraction = disp.squaredNorm() > 0.0 ? d.drift_px.dot(disp) / disp.squaredNorm() : 0.0;
    out.metrics.drift = d;
  }
  return out;
}

std::string DefaultOutDir(const ExperimentSpec& spec) {
  const char* root = std::getenv("PCBODY_OUT_ROOT");
  const fs::path base = (root && *root) ? fs::path(root) : fs::path("runs");
  return (base / (spec.name + "-seed" + std::to_string(spec.seed))).string();
}

void CmdGenerate(const ExperimentSpec& spec, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + dir);
  const Dataset data = GenerateDataset(spec);

  WriteJson(PathIn(dir, "spec.json"), ToJson(spec));
  gp::WriteSampleSet(PathIn(dir, "exploration.csv"), data.exploration);

  csv::Table frames;
  frames.header = {"t", "s_p_1", "s_p_2", "s_p_3", "s_v_1", "s_v_2"};
  std::vector<sim::TruthRecord> truth;
  for (const auto& o : data.stream) {
    frames.rows.push_back({o.t, o.s_p[0], o.s_p[1], o.s_p[2], o.s_v ? o.s_v->x() : kNaN,
                           o.s_v ? o.s_v->y() : kNaN});
    truth.push_back({o.t, o.q_true, o.pixel_true});
  }
  csv::WriteFile(PathIn(dir, "frames.csv"), frames);
  sim::WriteTruthCsv(PathIn(dir, "truth.csv"), truth);

  Manifest m;
  m.experiment = spec.name;
  m.seed = spec.seed;
  for (const char* name : {"spec.json", "exploration.csv", "frames.csv", "truth.csv"}) {
    m.RecordFile(dir, name);
  }
  if (data.other) {
    tactile::WriteSkinCsv(PathIn(dir, "skin.csv"), data.other->skin);
    tactile::WriteTrackCsv(PathIn(dir, "other.csv"), data.other->track);
    m.RecordFile(dir, "skin.csv");
    m.RecordFile(dir, "other.csv");
  }
  m.Save(dir);
}

ExperimentSpec LoadSpec(const std::string& dir) {
  return SpecFromJson(ReadJson(PathIn(dir, "spec.json")));
}

Dataset LoadDataset(const std::string& dir, const ExperimentSpec& spec) {
  Dataset data;
  try {
    data.exploration = gp::ReadSampleSet(PathIn(dir, "exploration.csv"));
    const csv::Table frames = csv::ReadFile(PathIn(dir, "frames.csv"));
    const auto truth = sim::ReadTruthCsv(PathIn(dir, "truth.csv"));
    if (frames.rows.size() != truth.size()) {
      throw ArtifactError("frames.csv and truth.csv disagree on length in " + dir);
    }
    const int tc = frames.Column("t");
    const int p[3] = {frames.Column("s_p_1"), frames.Column("s_p_2"), frames.Column("s_p_3")};
    const int v[2] = {frames.Column("s_v_1"), frames.Column("s_v_2")};
    for (size_t k = 0; k < truth.size(); ++k) {
      const auto& row = frames.rows[k];
      sim::Observation o;
      o.t = row[tc];
      o.s_p = Eigen::Vector3d(row[p[0]], row[p[1]], row[p[2]]);
      if (!std::isnan(row[v[0]]) && !std::isnan(row[v[1]])) o.s_v = Eigen::Vector2d(row[v[0]], row[v[1]]);
      o.q_true = truth[k].q;
      o.pixel_true = truth[k].pixel;
      data.stream.push_back(o);
    }
    if (spec.touch.enabled) {
      sim::OtherAgentRecording rec;
      rec.skin = tactile::ReadSkinCsv(PathIn(dir, "skin.csv"));
      rec.track = tactile::ReadTrackCsv(PathIn(dir, "other.csv"));
      data.other = std::move(rec);
    }
  } catch (const FormatError& e) {
    throw ArtifactError(e.what());
  }
  return data;
}

TrainSummary CmdTrain(const std::string& dir) {
  const Manifest pinned = Manifest::Load(dir);
  pinned.Verify(dir, "spec.json");
  pinned.Verify(dir, "exploration.csv");
  const ExperimentSpec spec = LoadSpec(dir);
  gp::SampleSet samples;
  try {
    samples = gp::ReadSampleSet(PathIn(dir, "exploration.csv"));
  } catch (const FormatError& e) {
    throw ArtifactError(e.what());
  }
  const gp::GPModel model = TrainVisualModel(spec, samples);
  gp::SaveModel(PathIn(dir, "visual_model.json"), model);
  const TrainSummary summary = SummarizeTraining(spec, model, samples);
  WriteJson(PathIn(dir, "train_summary.json"), ToJson(summary));
  Manifest m = pinned;
  m.RecordModel(dir, "visual_model.json");
  m.RecordFile(dir, "train_summary.json");
  m.Save(dir);
  return summary;
}

RunOutput CmdRun(const std::string& dir, const std::vector<std::string>& channels,
                 const std::string& overrides) {
  const Manifest m = Manifest::Load(dir);
  for (const char* name : {"spec.json", "frames.csv", "truth.csv", "exploration.csv"}) {
    m.Verify(dir, name);
  }
  json spec_json = ReadJson(PathIn(dir, "spec.json"));
  if (!overrides.empty()) {
    for (const auto& item : SplitList(overrides)) {
      const std::string key = item.substr(0, item.find('='));
      const bool allowed = key.rfind("estimator.", 0) == 0 || key.rfind("kf.", 0) == 0 ||
                           key.rfind("metrics.", 0) == 0 || key.rfind("touch.params.", 0) == 0;
      if (!allowed) {
        throw UsageError("run-time override '" + key +
                         "' would change the generated dataset; regenerate instead");
      }
    }
    ApplyOverrides(spec_json, overrides);
  }
  if (!channels.empty()) spec_json["channels"] = channels;
  const ExperimentSpec spec = SpecFromJson(spec_json);
  const ChannelSet set = ChannelSet::Parse(spec.channels);
  if (set.tactile) {
    m.Verify(dir, "skin.csv");
    m.Verify(dir, "other.csv");
  }
  std::shared_ptr<const gp::GPModel> model;
  if (set.needs_visual_model()) {
    if (!m.models.count("visual_model.json")) {
      throw ArtifactError("no trained visual model in " + dir + "; run 'train' first");
    }
    m.Verify(dir, "visual_model.json");
    try {
      model = std::make_shared<const gp::GPModel>(gp::LoadModel(PathIn(dir, "visual_model.json")));
    } catch (const FormatError& e) {
      throw ArtifactError(e.what());
    }
  }
  const Dataset data = LoadDataset(dir, spec);
  RunOutput out = Estimate(spec, data, model, set);
  const std::string label = set.Label();
  out.log.WriteCsv(PathIn(dir, "trajectory_" + label + ".csv"));
  if (out.control_log) out.control_log->WriteCsv(PathIn(dir, "trajectory_" + label + "_control.csv"));
  json metrics = ToJson(out.metrics);
  metrics["spec"] = spec_json;
  WriteJson(PathIn(dir, "metrics_" + label + ".json"), metrics);
  if (set.tactile) WriteJson(PathIn(dir, "events.json"), tactile::EventsToJson(out.events));
  return out;
}

void CmdReport(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  if (run_dirs.empty()) throw UsageError("report needs at least one run directory");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw UsageError("cannot create output directory " + out_dir);

  std::ostringstream table;
  table << "run,label,rmse_1,rmse_2,rmse_3,rmse_total,convergence_1,convergence_2,convergence_3,"
           "bias_1,bias_2,bias_3,drift_u,drift_v,drift_fraction\n";
  int rows = 0;
  for (const auto& dir : run_dirs) {
    if (!fs::is_directory(dir)) throw ArtifactError("not a run directory: " + dir);
    std::vector<std::string> labels;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("metrics_", 0) == 0 && entry.path().extension() == ".json") {
        labels.push_back(name.substr(8, name.size() - 13));
      }
    }
    std::sort(labels.begin(), labels.end());
    const std::string run = fs::path(dir).lexically_normal().filename().string().empty()
                                ? fs::path(dir).lexically_normal().parent_path().filename().string()
                                : fs::path(dir).lexically_normal().filename().string();
    if (labels.empty()) continue;

    csv::Table merged;
    merged.header.push_back("t");
    for (int j = 1; j <= 3; ++j) merged.header.push_back("truth_" + std::to_string(j));
    for (const auto& label : labels) {
      MetricsReport m;
      try {
        m = MetricsFromJson(ReadJson(PathIn(dir, "metrics_" + label + ".json")));
      } catch (const FormatError& e) {
        throw ArtifactError(e.what());
      }
      auto num = [](double v) { return csv::FormatNumber(v); };
      table << run << ',' << label;
      for (int j = 0; j < 3; ++j) table << ',' << num(m.rmse[j]);
      table << ',' << num(m.rmse_total);
      for (int j = 0; j < 3; ++j) {
        table << ',' << num(j < static_cast<int>(m.convergence_time.size()) && m.convergence_time[j]
                                ? *m.convergence_time[j]
                                : kNaN);
      }
      for (int j = 0; j < 3; ++j) table << ',' << num(m.mean_bias[j]);
      table << ',' << num(m.drift ? m.drift->drift_px.x() : kNaN) << ','
            << num(m.drift ? m.drift->drift_px.y() : kNaN) << ','
            << num(m.drift ? m.drift->fraction : kNaN) << '\n';
      ++rows;

      estimator::TrajectoryLog log;
      try {
        log = estimator::TrajectoryLog::ReadCsv(PathIn(dir, "trajectory_" + label + ".csv"));
      } catch (const FormatError& e) {
        throw ArtifactError(e.what());
      }
      if (merged.rows.empty()) {
        for (int r = 0; r < log.rows(); ++r) {
          std::vector<double> row{log.t[r]};
          for (int j = 0; j < 3; ++j) row.push_back(log.has_truth() ? log.truth[r][j] : kNaN);
          merged.rows.push_back(std::move(row));
        }
      } else if (static_cast<int>(merged.rows.size()) != log.rows()) {
        throw ArtifactError("trajectories in " + dir + " have different lengths");
      }
      for (int j = 1; j <= 3; ++j) merged.header.push_back(label + "_x_hat_" + std::to_string(j));
      for (int r = 0; r < log.rows(); ++r) {
        for (int j = 0; j < 3; ++j) merged.rows[r].push_back(log.x_hat[r][j]);
      }
    }
    csv::WriteFile(PathIn(out_dir, "merged_" + run + ".csv"), merged);
  }
  if (rows == 0) throw ArtifactError("no completed runs (metrics_*.json) found");
  std::ofstream out(PathIn(out_dir, "report.csv"), std::ios::binary);
  if (!out) throw UsageError("cannot write report in " + out_dir);
  out << table.str();
}

}  // namespace pcbody::harness
