#ifndef PCBODY_SIM_OTHER_AGENT_H_
#define PCBODY_SIM_OTHER_AGENT_H_

#include <Eigen/Dense>
#include <vector>

#include "pcbody/sim/sensors.h"
#include "pcbody/tactile/visuo_tactile.h"

namespace pcbody::sim {

enum class TouchMode {
  kSynchronous,    // skin contact coincides with the visible dwell
  kAsynchronous,   // skin contact shifted by async_offset
  kPerturbation,   // synchronous; used with a nonzero visual_offset
};

struct TouchStroke {
  double t_start = 5.0;  // dwell (and, when synchronous, contact) begins
  double dwell = 1.0;    // seconds
};

// The other agent's hand idles around `rest`, approaches the touch location before
// each stroke, dwells there, and retracts afterwards.
struct OtherAgentScript {
  TouchMode mode = TouchMode::kSynchronous;
  double duration = 30.0;
  double dt = 0.05;
  std::vector<TouchStroke> strokes{TouchStroke{}};
  double approach_time = 1.0;
  Eigen::Vector2d rest = Eigen::Vector2d(600.0, 60.0);   // pixels
  // While idle the hand circles the rest point, so it never reads as a dwell.
  double rest_sway = 20.0;   // pixels
  double rest_period = 2.0;  // seconds
  Eigen::Vector2d visual_offset = Eigen::Vector2d::Zero();  // pixels; the seen hand dwells at target + offset
  double async_offset = 2.0;                                 // seconds
  int touched_cell = 58;
  double contact_level = 0.95;
  double baseline_level = 0.05;
  double skin_noise_std = 0.01;

  void Validate() const;
};

struct OtherAgentRecording {
  std::vector<tactile::TrackPoint> track;
  std::vector<tactile::SkinFrame> skin;
};

// `touch_target` is the pixel location of the touched spot on the arm.
OtherAgentRecording SimulateOtherAgent(const OtherAgentScript& script,
                                       const Eigen::Vector2d& touch_target, Rng& rng);

}  // namespace pcbody::sim

#endif  // PCBODY_SIM_OTHER_AGENT_H_
