#ifndef PCBODY_SIM_SENSORS_H_
#define PCBODY_SIM_SENSORS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pcbody/gp/gaussian_process.h"
#include "pcbody/sim/camera.h"

namespace pcbody::sim {

struct NoiseSpec {
  Eigen::Vector3d proprio_std = Eigen::Vector3d::Constant(0.02);  // radians
  Eigen::Vector2d visual_std = Eigen::Vector2d::Constant(2.0);    // pixels
  std::uint64_t seed = 0;

  void Validate() const;
};

enum class ProprioMode { kLinear, kQuadratic, kBiased };

struct ProprioceptionMap {
  ProprioMode mode = ProprioMode::kLinear;
  Eigen::Vector3d bias = Eigen::Vector3d::Zero();  // used in kBiased mode

  Eigen::Vector3d Apply(const Eigen::Vector3d& q) const;
};

// Seeded sample stream; identical seeds give identical sequences.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Normal(double stddev);
  double Uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

struct Observation {
  double t = 0.0;
  Eigen::Vector3d s_p;
  std::optional<Eigen::Vector2d> s_v;  // pixels; empty when out of frame
  Eigen::Vector3d q_true;
  std::optional<Eigen::Vector2d> pixel_true;
};

// Noisy joint and camera readings for configuration q. Draws proprioceptive
// noise first, then visual noise (only when the hand is visible).
Observation Observe(const Scene& scene, const NoiseSpec& noise, const ProprioceptionMap& pmap,
                    const Eigen::Vector3d& q, double t, Rng& rng);

// Smooth random joint trajectories: waypoints drawn uniformly in
// center +- span, visited every `segment` seconds with a cosine blend.
struct TrajectorySpec {
  double duration = 30.0;
  double dt = 0.05;
  double segment = 2.5;
  Eigen::Vector3d center = WorkspaceCenter();
  Eigen::Vector3d span = Eigen::Vector3d(0.5, 0.4, 0.4);
  // Keep the elbow near center[2] so the motion carries no elbow information.
  bool elbow_fixed = false;
  double elbow_jitter = 0.01;
  // Hold the first waypoint for this long before moving.
  double hold = 0.0;
  // Constant pose for the whole run instead of random motion.
  std::optional<Eigen::Vector3d> static_pose;

  int num_steps() const;
  void Validate() const;
};

struct JointTrajectory {
  std::vector<double> t;
  std::vector<Eigen::Vector3d> q;
};

JointTrajectory GenerateTrajectory(const TrajectorySpec& spec, Rng& rng);

// `n` samples pairing the proprioceptive reading (input) with the pixel
// reading (target), taken every spec.dt along a random trajectory. Poses whose
// hand falls outside the image are skipped.
gp::SampleSet GenerateExploration(const Scene& scene, const NoiseSpec& noise,
                                  const ProprioceptionMap& pmap, const TrajectorySpec& spec,
                                  int n, Rng& rng);

}  // namespace pcbody::sim

#endif  // PCBODY_SIM_SENSORS_H_
