#include "pcbody/sim/sensors.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pcbody::sim {

void NoiseSpec::Validate() const {
  if ((proprio_std.array() < 0.0).any() || (visual_std.array() < 0.0).any()) {
    throw std::invalid_argument("noise standard deviations must be nonnegative");
  }
}

Eigen::Vector3d ProprioceptionMap::Apply(const Eigen::Vector3d& q) const {
  switch (mode) {
    case ProprioMode::kLinear:
      return q;
    case ProprioMode::kQuadratic:
      return q.array().square();
    case ProprioMode::kBiased:
      return q + bias;
  }
  return q;
}

double Rng::Normal(double stddev) {
  if (stddev == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, stddev)(engine_);
}

double Rng::Uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Observation Observe(const Scene& scene, const NoiseSpec& noise, const ProprioceptionMap& pmap,
                    const Eigen::Vector3d& q, double t, Rng& rng) {
  Observation obs;
  obs.t = t;
  obs.q_true = q;
  obs.s_p = pmap.Apply(q);
  for (int j = 0; j < 3; ++j) obs.s_p[j] += rng.Normal(noise.proprio_std[j]);
  obs.pixel_true = scene.camera.Project(scene.arm.ForwardKinematics(q));
  if (obs.pixel_true) {
    Eigen::Vector2d px = *obs.pixel_true;
    for (int d = 0; d < 2; ++d) px[d] += rng.Normal(noise.visual_std[d]);
    obs.s_v = px;
  }
  return obs;
}

int TrajectorySpec::num_steps() const {
  return static_cast<int>(std::llround(duration / dt));
}

void TrajectorySpec::Validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("trajectory dt must be positive");
  if (!(duration >= 0.0)) throw std::invalid_argument("trajectory duration must be nonnegative");
  if (!(segment > 0.0)) throw std::invalid_argument("trajectory segment must be positive");
  if ((span.array() < 0.0).any()) throw std::invalid_argument("trajectory span must be nonnegative");
  if (!(hold >= 0.0)) throw std::invalid_argument("trajectory hold must be nonnegative");
}

JointTrajectory GenerateTrajectory(const TrajectorySpec& spec, Rng& rng) {
  spec.Validate();
  JointTrajectory out;
  const int steps = spec.num_steps();
  out.t.reserve(steps);
  out.q.reserve(steps);
  if (spec.static_pose) {
    for (int k = 0; k < steps; ++k) {
      out.t.push_back(k * spec.dt);
      out.q.push_back(*spec.static_pose);
    }
    return out;
  }
  const double moving = std::max(0.0, spec.duration - spec.hold);
  const int n_way = static_cast<int>(moving / spec.segment) + 2;
  std::vector<Eigen::Vector3d> way(n_way);
  for (auto& w : way) {
    for (int j = 0; j < 3; ++j) w[j] = spec.center[j] + rng.Uniform(-1.0, 1.0) * spec.span[j];
  }
  if (spec.elbow_fixed) {
    for (auto& w : way) w[2] = spec.center[2] + rng.Normal(spec.elbow_jitter);
  }
  for (int k = 0; k < steps; ++k) {
    const double t = k * spec.dt;
    const double tm = std::max(0.0, t - spec.hold);
    const int i = std::min(static_cast<int>(tm / spec.segment), n_way - 2);
    const double u = (tm - i * spec.segment) / spec.segment;
    const double s = 0.5 - 0.5 * std::cos(std::numbers::pi * u);
    out.t.push_back(t);
    out.q.push_back(way[i] * (1.0 - s) + way[i + 1] * s);
  }
  return out;
}

gp::SampleSet GenerateExploration(const Scene& scene, const NoiseSpec& noise,
                                  const ProprioceptionMap& pmap, const TrajectorySpec& spec,
                                  int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("exploration needs at least one sample");
  TrajectorySpec long_spec = spec;
  long_spec.static_pose.reset();
  // Twice the nominal length leaves room for skipped out-of-frame poses.
  long_spec.duration = 2.0 * n * spec.dt;
  const JointTrajectory traj = GenerateTrajectory(long_spec, rng);
  gp::SampleSet samples;
  samples.inputs.resize(n, 3);
  samples.targets.resize(n, 2);
  int count = 0;
  for (size_t k = 0; k < traj.q.size() && count < n; ++k) {
    const Observation obs = Observe(scene, noise, pmap, traj.q[k], traj.t[k], rng);
    if (!obs.s_v) continue;
    samples.inputs.row(count) = obs.s_p.transpose();
    samples.targets.row(count) = obs.s_v->transpose();
    ++count;
  }
  if (count < n) {
    throw std::runtime_error("exploration found only " + std::to_string(count) + " of " +
                             std::to_string(n) + " visible poses");
  }
  return samples;
}

}  // namespace pcbody::sim
