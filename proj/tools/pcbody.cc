// Command line front end: generate, train, run, report.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "pcbody/common/errors.h"
#include "pcbody/estimator/body_estimator.h"
#include "pcbody/gp/gaussian_process.h"
#include "pcbody/harness/experiment.h"
#include "pcbody/harness/pipeline.h"

namespace {

namespace fs = std::filesystem;
using namespace pcbody;

constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitArtifact = 4;

// --spec accepts a preset name or a JSON file.
harness::ExperimentSpec ResolveSpec(const std::string& spec_arg, const std::string& overrides,
                                    const std::optional<std::uint64_t>& seed,
                                    const std::string& channels) {
  nlohmann::json j;
  if (fs::exists(spec_arg)) {
    std::ifstream in(spec_arg);
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw harness::UsageError("cannot parse " + spec_arg + ": " + e.what());
    }
  } else {
    const auto& names = harness::PresetNames();
    if (std::find(names.begin(), names.end(), spec_arg) == names.end()) {
      throw harness::UsageError("--spec '" + spec_arg + "' is neither a file nor a preset");
    }
    j = {{"name", spec_arg}};
  }
  if (!overrides.empty()) harness::ApplyOverrides(j, overrides);
  if (seed) j["seed"] = *seed;
  if (!channels.empty()) j["channels"] = harness::SplitList(channels);
  return harness::SpecFromJson(j);
}

void PrintMetrics(const harness::RunOutput& out) {
  const auto& m = out.metrics;
  std::cout << m.label << ": rmse [" << m.rmse.transpose() << "] total " << m.rmse_total;
  if (m.drift) std::cout << " drift_fraction " << m.drift->fraction;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multisensory body estimation: data generation, GP training, estimation runs"};
  app.require_subcommand(1);

  std::string spec_arg = "ablation", out_dir, overrides, channels;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> report_runs;

  auto* gen = app.add_subcommand("generate", "simulate exploration and test data into a run directory");
  gen->add_option("--spec", spec_arg, "preset name or spec JSON file")->capture_default_str();
  gen->add_option("--out", out_dir, "run directory (default $PCBODY_OUT_ROOT/<name>-seed<seed>)");
  gen->add_option("--seed", seed, "experiment seed");
  gen->add_option("--channels", channels, "default channel list, e.g. p,v");
  gen->add_option("--overrides", overrides, "key=value,... applied to the spec");

  auto* train = app.add_subcommand("train", "train the visual forward model of a run directory");
  train->add_option("--out", out_dir, "run directory")->required();

  auto* run = app.add_subcommand("run", "run the estimator (or kf) and write log and metrics");
  run->add_option("--out", out_dir, "run directory")->required();
  run->add_option("--channels", channels, "channels: p, p1, p2, p3, v, t or kf");
  run->add_option("--overrides", overrides, "estimator/kf/metrics/touch.params overrides");
  run->add_option("--spec", spec_arg, "ignored unless it names a different experiment");

  auto* report = app.add_subcommand("report", "aggregate metrics of completed runs");
  report->add_option("runs", report_runs, "run directories")->required();
  report->add_option("--out", out_dir, "output directory (default: first run directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const auto spec = ResolveSpec(spec_arg, overrides, seed, channels);
      if (out_dir.empty()) out_dir = harness::DefaultOutDir(spec);
      harness::CmdGenerate(spec, out_dir);
      std::cout << "generated " << spec.name << " (seed " << spec.seed << ") in " << out_dir << '\n';
    } else if (train->parsed()) {
      const auto s = harness::CmdTrain(out_dir);
      std::cout << "trained visual model on " << s.samples << " samples, max residual "
                << s.max_residual_px << " px\n";
    } else if (run->parsed()) {
      if (run->count("--spec")) {
        const auto pinned = harness::LoadSpec(out_dir);
        if (spec_arg != pinned.name && spec_arg != (fs::path(out_dir) / "spec.json").string()) {
          throw harness::UsageError("run directory holds experiment '" + pinned.name +
                                    "', not '" + spec_arg + "'");
        }
      }
      const auto out = harness::CmdRun(out_dir, harness::SplitList(channels), overrides);
      PrintMetrics(out);
    } else if (report->parsed()) {
      if (out_dir.empty()) out_dir = report_runs.front();
      harness::CmdReport(report_runs, out_dir);
      std::cout << "wrote " << (fs::path(out_dir) / "report.csv").string() << '\n';
    }
  } catch (const harness::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const harness::ArtifactError& e) {
    std::cerr << "artifact error: " << e.what() << '\n';
    return kExitArtifact;
  } catch (const estimator::DivergenceError& e) {
    std::cerr << "numerical divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const gp::TrainingError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
