#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcbody/common/csv.h"
#include "pcbody/common/hash.h"
#include "pcbody/gp/gp_io.h"
#include "pcbody/harness/experiment.h"
#include "pcbody/harness/manifest.h"
#include "pcbody/harness/metrics.h"
#include "pcbody/harness/pipeline.h"
#include "test_util.h"

using namespace pcbody;
using namespace pcbody::harness;
namespace fs = std::filesystem;

namespace {

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int LineCount(const std::string& path) {
  const std::string text = Slurp(path);
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

ExperimentSpec Short(const std::string& preset, double duration = 8.0) {
  ExperimentSpec s = Preset(preset);
  s.trajectory.duration = duration;
  return s;
}

}  // namespace

TEST_CASE("presets carry the experiment settings") {
  for (const auto& name : PresetNames()) {
    const ExperimentSpec s = Preset(name);
    s.Validate();
    CHECK(s.name == name);
    CHECK(s.exploration_samples == 46);
    CHECK(s.estimator.config.dt == 0.05);
    CHECK(s.estimator.config.lambda == 1.0);
    CHECK(s.estimator.sigma_p == Eigen::Vector3d::Ones());
    CHECK(s.estimator.sigma_v == Eigen::Vector2d::Constant(5.0));
    CHECK(s.gp.noise_std == doctest::Approx(std::exp(0.02)));
    CHECK(s.gp.length_scale == doctest::Approx(std::exp(0.1)));
    CHECK(s.kf.process_noise == Eigen::Vector3d::Constant(0.001));
  }
  CHECK(Preset("damaged_sensor").proprio.bias == Eigen::Vector3d(0.3, 0, 0));
  CHECK(Preset("nonlinear_proprio").proprio.mode == sim::ProprioMode::kQuadratic);
  const auto pb = Preset("prior_bias");
  CHECK(*pb.estimator.initial == Eigen::Vector3d(-0.8, 0.70, 0.60));
  CHECK(*pb.trajectory.static_pose == Eigen::Vector3d(-0.9550, -0.8692, 0.7532));
  CHECK(Preset("rubber_hand").touch.enabled);
  CHECK_THROWS_AS(Preset("fig9"), UsageError);
}

TEST_CASE("spec json round trip and unknown keys") {
  for (const auto& name : PresetNames()) {
    const auto j = ToJson(Preset(name));
    CHECK(ToJson(SpecFromJson(j)) == j);
  }
  CHECK_THROWS_AS(SpecFromJson(nlohmann::json{{"name", "ablation"}, {"colour", 1}}), UsageError);
  CHECK_THROWS_AS(SpecFromJson(nlohmann::json{{"estimator", {{"sigma_q", 1}}}}), UsageError);
  CHECK_THROWS_AS(SpecFromJson(nlohmann::json::array()), UsageError);
  const auto partial = SpecFromJson(nlohmann::json{{"name", "ablation"}, {"seed", 7}});
  CHECK(partial.seed == 7);
  CHECK(partial.trajectory.elbow_fixed);
}

TEST_CASE("overrides with dotted paths, arrays and bracketed lists") {
  auto j = ToJson(Preset("ablation"));
  ApplyOverrides(j, "estimator.lambda=0.5,estimator.sigma_v=[2,3],trajectory.span.1=0.1,name=ablation");
  const auto s = SpecFromJson(j);
  CHECK(s.estimator.config.lambda == 0.5);
  CHECK(s.estimator.sigma_v == Eigen::Vector2d(2, 3));
  CHECK(s.trajectory.span[1] == 0.1);
  ApplyOverrides(j, "estimator.initial=truth");
  CHECK_FALSE(SpecFromJson(j).estimator.initial.has_value());
  CHECK_THROWS_AS(ApplyOverrides(j, "estimator.lambda"), UsageError);
  auto bad = j;
  ApplyOverrides(bad, "estimator.lamda=2");
  CHECK_THROWS_AS(SpecFromJson(bad), UsageError);
  CHECK(SplitList("a=[1,2],b=3") == std::vector<std::string>{"a=[1,2]", "b=3"});
  CHECK(SplitList("") == std::vector<std::string>{});
}

TEST_CASE("spec validation catches inconsistent settings") {
  auto s = Preset("ablation");
  s.trajectory.dt = 0.1;
  CHECK_THROWS_AS(s.Validate(), UsageError);
  s = Preset("ablation");
  s.channels = {"p", "t"};
  CHECK_THROWS_AS(s.Validate(), UsageError);
  s = Preset("nonlinear_proprio");
  s.channels = {"p1"};
  CHECK_THROWS_AS(s.Validate(), UsageError);
}

TEST_CASE("channel sets parse and label") {
  CHECK(ChannelSet::Parse({"p", "v"}).Label() == "p+v");
  CHECK(ChannelSet::Parse({"v", "p3", "p1"}).Label() == "p1+p3+v");
  CHECK(ChannelSet::Parse({"kf"}).Label() == "kf");
  CHECK(ChannelSet::Parse({"p", "t"}).Label() == "p+t");
  const auto subset = ChannelSet::Parse({"p1", "p3"});
  CHECK(subset.proprio_joints == std::vector<int>{0, 2});
  CHECK_FALSE(subset.needs_visual_model());
  CHECK(ChannelSet::Parse({"t"}).needs_visual_model());
  CHECK_THROWS_AS(ChannelSet::Parse({"x"}), UsageError);
  CHECK_THROWS_AS(ChannelSet::Parse({"kf", "v"}), UsageError);
  CHECK_THROWS_AS(ChannelSet::Parse({}), UsageError);
}

TEST_CASE("metrics against a hand-built log") {
  estimator::TrajectoryLog log;
  log.state_dim = 3;
  const double dt = 0.5;
  // Joint 1 error: 1.0 until t = 2, then 0.1. Joint 2: constant -0.2. Joint 3: 0.
  for (int k = 0; k <= 10; ++k) {
    const double t = k * dt;
    log.t.push_back(t);
    const double e1 = t <= 2.0 ? 1.0 : 0.1;
    log.x_hat.push_back(Eigen::Vector3d(e1, -0.2, 0.0));
    log.truth.push_back(Eigen::Vector3d::Zero());
  }
  const MetricsReport m = ComputeMetrics(log, 1.0, 0.15);
  // Scored rows: t = 1.5 .. 5.0 (8 rows), joint 1 has 2 at 1.0 and 6 at 0.1.
  CHECK(m.samples == 8);
  CHECK(m.rmse[0] == doctest::Approx(std::sqrt((2 * 1.0 + 6 * 0.01) / 8)));
  CHECK(m.rmse[1] == doctest::Approx(0.2));
  CHECK(m.rmse[2] == 0.0);
  CHECK(m.rmse_total == doctest::Approx(std::sqrt(m.rmse.squaredNorm())));
  CHECK(m.mean_bias[1] == doctest::Approx(-0.2));
  REQUIRE(m.convergence_time[0].has_value());
  CHECK(*m.convergence_time[0] == doctest::Approx(2.5));
  CHECK_FALSE(m.convergence_time[1].has_value());
  CHECK(*m.convergence_time[2] == 0.0);
  CHECK(m.final_x_hat == Eigen::Vector3d(0.1, -0.2, 0.0));

  const auto back = MetricsFromJson(ToJson(m));
  CHECK(ToJson(back) == ToJson(m));
  log.truth.clear();
  CHECK_THROWS_AS(ComputeMetrics(log, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("manifest pins file hashes") {
  const std::string dir = testing::ScratchDir("manifest");
  std::ofstream(dir + "/a.csv") << "x\n1\n";
  Manifest m;
  m.experiment = "custom";
  m.seed = 3;
  m.RecordFile(dir, "a.csv");
  CHECK(m.files.at("a.csv") == Sha256Hex("x\n1\n"));
  m.Save(dir);
  const Manifest back = Manifest::Load(dir);
  CHECK(back.files == m.files);
  CHECK(back.seed == 3);
  back.Verify(dir, "a.csv");
  CHECK_THROWS_AS(back.Verify(dir, "b.csv"), ArtifactError);
  std::ofstream(dir + "/a.csv") << "x\n2\n";
  CHECK_THROWS_AS(back.Verify(dir, "a.csv"), ArtifactError);
  fs::remove(dir + "/a.csv");
  CHECK_THROWS_AS(back.Verify(dir, "a.csv"), ArtifactError);
  CHECK_THROWS_AS(Manifest::Load(dir + "/nowhere"), ArtifactError);
}

TEST_CASE("generate writes a deterministic dataset") {
  const std::string a = testing::ScratchDir("gen_a");
  const std::string b = testing::ScratchDir("gen_b");
  const auto spec = Short("ablation");
  CmdGenerate(spec, a);
  CmdGenerate(spec, b);
  for (const char* f : {"manifest.json", "spec.json", "exploration.csv", "frames.csv", "truth.csv"}) {
    REQUIRE(fs::exists(a + "/" + f));
    CHECK(Slurp(a + "/" + f) == Slurp(b + "/" + f));
  }
  CHECK(csv::ReadFile(a + "/exploration.csv").rows.size() == 46);
  CHECK(csv::ReadFile(a + "/frames.csv").rows.size() == 160);

  auto other_seed = spec;
  other_seed.seed = 1;
  const std::string c = testing::ScratchDir("gen_c");
  CmdGenerate(other_seed, c);
  CHECK(Slurp(a + "/frames.csv") != Slurp(c + "/frames.csv"));

  const Dataset loaded = LoadDataset(a, LoadSpec(a));
  const Dataset fresh = GenerateDataset(spec);
  CHECK(loaded.stream.size() == fresh.stream.size());
  CHECK(loaded.exploration.inputs == fresh.exploration.inputs);
}

TEST_CASE("generate with zero frames") {
  const std::string dir = testing::ScratchDir("gen_empty");
  auto spec = Preset("custom");
  spec.trajectory.duration = 0.0;
  CmdGenerate(spec, dir);
  CHECK(fs::exists(dir + "/manifest.json"));
  CHECK(csv::ReadFile(dir + "/frames.csv").rows.empty());
  CmdTrain(dir);
  const auto out = CmdRun(dir, {});
  CHECK(out.log.rows() == 1);
  CHECK(out.metrics.samples == 0);
}

TEST_CASE("train records hyperparameters and fits the samples") {
  const std::string dir = testing::ScratchDir("train");
  CmdGenerate(Short("ablation"), dir);
  const TrainSummary s = CmdTrain(dir);
  CHECK(s.noise_std == doctest::Approx(std::exp(0.02)));
  CHECK(s.hyper.noise_variance == doctest::Approx(std::exp(0.04)));
  CHECK(s.hyper.length_scales[0] == doctest::Approx(std::exp(0.1)));
  CHECK(s.samples == 46);
  CHECK(s.fraction_within_3sigma >= 0.95);
  const auto j = nlohmann::json::parse(Slurp(dir + "/train_summary.json"));
  CHECK(j.at("noise_std").get<double>() == doctest::Approx(std::exp(0.02)));
  const std::string first = Slurp(dir + "/visual_model.json");
  CmdTrain(dir);
  CHECK(Slurp(dir + "/visual_model.json") == first);
  const auto model = gp::LoadModel(dir + "/visual_model.json");
  CHECK(model.num_samples() == 46);
  CHECK(Manifest::Load(dir).models.count("visual_model.json") == 1);
}

TEST_CASE("run refuses tampered inputs and missing models") {
  const std::string dir = testing::ScratchDir("run_guard");
  CmdGenerate(Short("ablation"), dir);
  CHECK_THROWS_AS(CmdRun(dir, {"p", "v"}), ArtifactError);
  CHECK_NOTHROW(CmdRun(dir, {"p"}));
  CmdTrain(dir);
  CHECK_NOTHROW(CmdRun(dir, {"p", "v"}));
  CHECK_THROWS_AS(CmdRun(dir, {"p"}, "trajectory.duration=3"), UsageError);
  CHECK_NOTHROW(CmdRun(dir, {"p"}, "estimator.lambda=0.5"));
  {
    std::ofstream out(dir + "/frames.csv", std::ios::app);
    out << "99,0,0,0,nan,nan\n";
  }
  CHECK_THROWS_AS(CmdRun(dir, {"p"}), ArtifactError);
  CHECK_THROWS_AS(CmdRun(testing::ScratchDir("run_empty"), {"p"}), ArtifactError);
}

TEST_CASE("run writes logs and metrics") {
  const std::string dir = testing::ScratchDir("run_out");
  CmdGenerate(Short("ablation", 10.0), dir);
  CmdTrain(dir);
  const auto out = CmdRun(dir, {"p", "v"});
  CHECK(fs::exists(dir + "/trajectory_p+v.csv"));
  CHECK(fs::exists(dir + "/metrics_p+v.json"));
  CHECK(out.log.rows() == 201);
  CHECK(out.metrics.samples > 0);
  CHECK(out.metrics.channel_mae.count("p") == 1);
  const auto log = estimator::TrajectoryLog::ReadCsv(dir + "/trajectory_p+v.csv");
  CHECK(log.has_truth());
  CHECK(log.channel_ids == std::vector<std::string>{"p", "v"});
  const auto kf = CmdRun(dir, {"kf"});
  CHECK(fs::exists(dir + "/trajectory_kf.csv"));
  CHECK(kf.log.rows() == out.log.rows());
}

TEST_CASE("report tables: single run, ablation family, idempotence") {
  const std::string dir = testing::ScratchDir("report_run");
  CmdGenerate(Short("ablation"), dir);
  CmdTrain(dir);
  CmdRun(dir, {"v"});
  const std::string out1 = testing::ScratchDir("report_single");
  CmdReport({dir}, out1);
  CHECK(LineCount(out1 + "/report.csv") == 2);

  CmdRun(dir, {"p1", "p3", "v"});
  CmdRun(dir, {"p", "v"});
  CmdRun(dir, {"kf"});
  const std::string out2 = testing::ScratchDir("report_family");
  CmdReport({dir}, out2);
  CHECK(LineCount(out2 + "/report.csv") == 5);
  CHECK(Slurp(out2 + "/report.csv").find("rmse_total") != std::string::npos);
  const std::string first = Slurp(out2 + "/report.csv");
  const std::string merged = fs::path(dir).filename().string();
  REQUIRE(fs::exists(out2 + "/merged_" + merged + ".csv"));
  const auto mt = csv::ReadFile(out2 + "/merged_" + merged + ".csv");
  CHECK(mt.HasColumn("truth_1"));
  CHECK(mt.HasColumn("kf_x_hat_1"));
  CHECK(mt.HasColumn("p1+p3+v_x_hat_3"));
  CmdReport({dir}, out2);
  CHECK(Slurp(out2 + "/report.csv") == first);
  CHECK_THROWS_AS(CmdReport({}, out2), UsageError);
  CHECK_THROWS_AS(CmdReport({out2 + "/missing"}, out2), ArtifactError);
}

TEST_CASE("rubber hand run pairs events and reports drift") {
  const std::string dir = testing::ScratchDir("rubber");
  CmdGenerate(Short("rubber_hand", 12.0), dir);
  CmdTrain(dir);
  const auto out = CmdRun(dir, {});
  CHECK(fs::exists(dir + "/events.json"));
  CHECK(fs::exists(dir + "/trajectory_p+t_control.csv"));
  REQUIRE(out.events.size() == 1);
  CHECK(out.events[0].active);
  REQUIRE(out.metrics.drift.has_value());
  CHECK(out.metrics.drift->fraction > 0.0);
  CHECK(out.control_log.has_value());
}

TEST_CASE("default output directory honours the environment") {
  auto spec = Preset("ablation");
  spec.seed = 4;
  setenv("PCBODY_OUT_ROOT", "/tmp/pcbody_root", 1);
  CHECK(DefaultOutDir(spec) == "/tmp/pcbody_root/ablation-seed4");
  unsetenv("PCBODY_OUT_ROOT");
  CHECK(DefaultOutDir(spec) == "runs/ablation-seed4");
}

TEST_CASE("golden trajectory fixtures parse and match a fresh run") {
  const std::string golden = std::string(PCBODY_TEST_DATA) + "/golden";
  const std::string dir = testing::ScratchDir("golden");
  auto spec = Preset("ablation");
  spec.trajectory.duration = 10.0;
  CmdGenerate(spec, dir);
  CmdTrain(dir);
  for (const std::string label : {"v", "p1+p3+v", "p+v", "kf"}) {
    CAPTURE(label);
    CmdRun(dir, SplitList(label, '+'));
    const auto fixture = estimator::TrajectoryLog::ReadCsv(golden + "/ablation_" + label + ".csv");
    const auto fresh = estimator::TrajectoryLog::ReadCsv(dir + "/trajectory_" + label + ".csv");
    CHECK(fixture.has_truth());
    CHECK(fixture.channel_ids == fresh.channel_ids);
    REQUIRE(fixture.rows() == fresh.rows());
    double worst = 0.0;
    for (int r = 0; r < fixture.rows(); ++r) {
      worst = std::max(worst, (fixture.x_hat[r] - fresh.x_hat[r]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (fixture.truth[r] - fresh.truth[r]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
  }
  for (const char* name : {"rubber_hand_p+t.csv", "rubber_hand_p+t_control.csv"}) {
    const auto log = estimator::TrajectoryLog::ReadCsv(golden + "/" + name);
    CHECK(log.channel_ids == std::vector<std::string>{"p", "t"});
    CHECK(log.has_truth());
  }
}
