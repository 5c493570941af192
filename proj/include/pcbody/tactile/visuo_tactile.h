#ifndef PCBODY_TACTILE_VISUO_TACTILE_H_
#define PCBODY_TACTILE_VISUO_TACTILE_H_

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

namespace pcbody::tactile {

inline constexpr int kSkinCells = 117;

struct TouchParams {
  // Spatial factor a1 exp(-b1 |g_v - o_v|^2).
  double a1 = 0.001;
  double b1 = 1.0;
  // Temporal factor a2 exp(-b2 delta^2); b2 halves it at |delta| = 0.3 s.
  double a2 = 1.0;
  double b2 = std::log(2.0) / 0.09;
  double prox_threshold = 0.7;
  double sync_window = 0.5;  // seconds
  // The other hand counts as dwelling while its speed stays below stop_speed
  // (px/s) for at least stop_window seconds.
  double stop_speed = 5.0;
  double stop_window = 0.25;

  void Validate() const;
};

struct SkinFrame {
  double t = 0.0;
  Eigen::VectorXd proximities;  // kSkinCells entries in (0, 1)

  // Clamps every value into the open unit interval.
  static SkinFrame Make(double t, const Eigen::VectorXd& values);
};

struct TrackPoint {
  double t = 0.0;
  Eigen::Vector2d position;  // pixels
};

struct Interval {
  double t_onset = 0.0;
  double t_offset = 0.0;
};

struct VisualEvent {
  double t_onset = 0.0;
  double t_offset = 0.0;
  Eigen::Vector2d position;  // other hand at onset
};

struct TouchEvent {
  Eigen::Vector2d o_v = Eigen::Vector2d::Zero();
  double delta = 0.0;  // tactile onset minus visual onset
  bool active = false;
  double t_onset = 0.0;  // tactile onset
  double t_offset = 0.0;
};

// An event opens on the first frame where any cell exceeds the threshold and
// closes at the last frame before every cell is back at or below it.
std::vector<Interval> DetectTactileEvents(const std::vector<SkinFrame>& frames,
                                          const TouchParams& params);

// Dwell detection on the other agent's track. Segment speeds come from
// forward differences; a run of slow segments lasting at least stop_window
// becomes one event spanning the run's end points.
std::vector<VisualEvent> DetectVisualEvents(const std::vector<TrackPoint>& track,
                                            const TouchParams& params);

// Pairs each tactile event with the visual event whose onset is nearest.
// Tactile events are dropped when there is no visual event at all.
std::vector<TouchEvent> PairEvents(const std::vector<Interval>& tactile,
                                   const std::vector<VisualEvent>& visual,
                                   const TouchParams& params);

// g_t for a predicted visual location `g_v`; o_v and g_v share units.
double TouchLikelihoodAt(const Eigen::VectorXd& g_v, const Eigen::Vector2d& o_v, double delta,
                         const TouchParams& params);

// s_t: the likelihood of a touch exactly at o_v for the measured delta.
// Empty for inactive events, which carry no tactile reading.
std::optional<double> TactileObservation(const TouchEvent& event, const TouchParams& params);

}  // namespace pcbody::tactile

#endif  // PCBODY_TACTILE_VISUO_TACTILE_H_
