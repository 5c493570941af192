#include "pcbody/sim/other_agent.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcbody::sim {
namespace {

double Ease(double u) { return 0.5 - 0.5 * std::cos(std::numbers::pi * std::clamp(u, 0.0, 1.0)); }

Eigen::Vector2d IdleAt(const OtherAgentScript& s, double t) {
  const double phase = 2.0 * std::numbers::pi * t / s.rest_period;
  return s.rest + s.rest_sway * Eigen::Vector2d(std::cos(phase), std::sin(phase));
}

// Hand position at time t: idle, approach, dwell at `spot`, retract.
Eigen::Vector2d HandAt(const OtherAgentScript& s, const Eigen::Vector2d& spot, double t) {
  const Eigen::Vector2d rest = IdleAt(s, t);
  for (const auto& st : s.strokes) {
    const double a0 = st.t_start - s.approach_time;
    const double d1 = st.t_start + st.dwell;
    const double r1 = d1 + s.approach_time;
    if (t < a0 || t > r1) continue;
    if (t < st.t_start) return rest + (spot - rest) * Ease((t - a0) / s.approach_time);
    if (t <= d1) return spot;
    return spot + (rest - spot) * Ease((t - d1) / s.approach_time);
  }
  return rest;
}

bool InContact(const OtherAgentScript& s, double t) {
  const double shift = s.mode == TouchMode::kAsynchronous ? s.async_offset : 0.0;
  for (const auto& st : s.strokes) {
    if (t >= st.t_start + shift - 1e-9 && t <= st.t_start + st.dwell + shift + 1e-9) return true;
  }
  return false;
}

}  // namespace

void OtherAgentScript::Validate() const {
  if (!(dt > 0.0) || !(duration >= 0.0)) throw std::invalid_argument("invalid script timing");
  if (!(approach_time > 0.0)) throw std::invalid_argument("approach_time must be positive");
  if (!(rest_sway >= 0.0) || !(rest_period > 0.0)) throw std::invalid_argument("invalid rest motion");
  if (touched_cell < 0 || touched_cell >= tactile::kSkinCells) {
    throw std::invalid_argument("touched_cell out of range");
  }
  double last_end = -1e300;
  for (const auto& st : strokes) {
    if (!(st.dwell >= 0.0)) throw std::invalid_argument("stroke dwell must be nonnegative");
    if (st.t_start - approach_time < last_end) {
      throw std::invalid_argument("strokes must be time-ordered and not overlap");
    }
    last_end = st.t_start + st.dwell + approach_time;
  }
}

OtherAgentRecording SimulateOtherAgent(const OtherAgentScript& script,
                                       const Eigen::Vector2d& touch_target, Rng& rng) {
  script.Validate();
  const Eigen::Vector2d spot = touch_target + script.visual_offset;
  OtherAgentRecording rec;
  const int steps = static_cast<int>(std::llround(script.duration / script.dt));
  for (int k = 0; k < steps; ++k) {
    const double t = k * script.dt;
    rec.track.push_back({t, HandAt(script, spot, t)});
    Eigen::VectorXd cells(tactile::kSkinCells);
    for (int c = 0; c < tactile::kSkinCells; ++c) {
      cells[c] = script.baseline_level + rng.Normal(script.skin_noise_std);
    }
    if (InContact(script, t)) {
      // The touched cell and its immediate neighbours saturate above 0.9.
      for (int c = script.touched_cell - 1; c <= script.touched_cell + 1; ++c) {
        if (c >= 0 && c < tactile::kSkinCells) {
          cells[c] = std::max(0.91, script.contact_level + rng.Normal(script.skin_noise_std));
        }
      }
    }
    rec.skin.push_back(tactile::SkinFrame::Make(t, cells));
  }
  return rec;
}

}  // namespace pcbody::sim
