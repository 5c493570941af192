#ifndef PCBODY_HARNESS_PIPELINE_H_
#define PCBODY_HARNESS_PIPELINE_H_

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcbody/estimator/trajectory_log.h"
#include "pcbody/gp/gaussian_process.h"
#include "pcbody/harness/experiment.h"
#include "pcbody/harness/metrics.h"
#include "pcbody/sim/camera.h"
#include "pcbody/sim/other_agent.h"
#include "pcbody/sim/sensors.h"
#include "pcbody/tactile/visuo_tactile.h"

namespace pcbody::harness {

// Everything the simulator produces for one experiment.
struct Dataset {
  gp::SampleSet exploration;  // proprioceptive inputs, pixel targets
  std::vector<sim::Observation> stream;
  std::optional<sim::OtherAgentRecording> other;
};

// Deterministic in spec.seed. Exploration, test stream and other agent draw
// from independent streams derived from the seed.
Dataset GenerateDataset(const ExperimentSpec& spec, const sim::Scene& scene = sim::DefaultScene());

// Trains the visual forward model on feature-unit targets.
gp::GPModel TrainVisualModel(const ExperimentSpec& spec, const gp::SampleSet& exploration,
                             const sim::Scene& scene = sim::DefaultScene());

struct TrainSummary {
  gp::GPHyperparams hyper;
  double noise_std = 0.0;
  double max_residual_px = 0.0;
  double mean_residual_px = 0.0;
  double fraction_within_3sigma = 0.0;  // residuals (feature units) within 3 noise stds
  int samples = 0;
};
TrainSummary SummarizeTraining(const ExperimentSpec& spec, const gp::GPModel& model,
                               const gp::SampleSet& exploration,
                               const sim::Scene& scene = sim::DefaultScene());
nlohmann::json ToJson(const TrainSummary& s);

struct RunOutput {
  estimator::TrajectoryLog log;
  MetricsReport metrics;
  std::vector<tactile::TouchEvent> events;
  std::optional<estimator::TrajectoryLog> control_log;  // tactile runs only
};

// Runs the estimator (or the Kalman baseline) over the dataset's stream.
// `visual_model` may be null when no channel needs it.
RunOutput Estimate(const ExperimentSpec& spec, const Dataset& dataset,
                   std::shared_ptr<const gp::GPModel> visual_model, const ChannelSet& channels,
                   const sim::Scene& scene = sim::DefaultScene());

// Output root: $PCBODY_OUT_ROOT if set, else ./runs; directory <name>-seed<seed>.
std::string DefaultOutDir(const ExperimentSpec& spec);

// File-based commands. Directory layout:
//   manifest.json spec.json exploration.csv frames.csv truth.csv
//   [skin.csv other.csv] visual_model.json train_summary.json
//   trajectory_<label>.csv metrics_<label>.json
//   [events.json trajectory_<label>_control.csv]
void CmdGenerate(const ExperimentSpec& spec, const std::string& dir);
TrainSummary CmdTrain(const std::string& dir);
// Empty `channels` uses the spec's channel list. Run-time overrides may touch
// only estimator, kf, metrics and touch.params keys.
RunOutput CmdRun(const std::string& dir, const std::vector<std::string>& channels,
                 const std::string& overrides = "");
// Writes report.csv and merged_<run>.csv files into out_dir.
void CmdReport(const std::vector<std::string>& run_dirs, const std::string& out_dir);

// Reads a run directory back into memory (no hash checks).
ExperimentSpec LoadSpec(const std::string& dir);
Dataset LoadDataset(const std::string& dir, const ExperimentSpec& spec);

}  // namespace pcbody::harness

#endif  // PCBODY_HARNESS_PIPELINE_H_
