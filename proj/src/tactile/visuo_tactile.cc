#include "pcbody/tactile/visuo_tactile.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pcbody::tactile {

void TouchParams::Validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(a1) || !positive(b1) || !positive(a2) || !positive(b2)) {
    throw std::invalid_argument("touch likelihood parameters must be positive");
  }
  if (!(prox_threshold > 0.0 && prox_threshold < 1.0)) {
    throw std::invalid_argument("prox_threshold must lie in (0, 1)");
  }
  if (!(sync_window >= 0.0) || !positive(stop_speed) || !(stop_window >= 0.0)) {
    throw std::invalid_argument("invalid touch timing parameters");
  }
}

SkinFrame SkinFrame::Make(double t, const Eigen::VectorXd& values) {
  constexpr double kEps = 1e-6;
  SkinFrame f;
  f.t = t;
  f.proximities = values.cwiseMax(kEps).cwiseMin(1.0 - kEps);
  return f;
}

std::vector<Interval> DetectTactileEvents(const std::vector<SkinFrame>& frames,
                                          const TouchParams& params) {
  std::vector<Interval> events;
  bool open = false;
  Interval current;
  for (const auto& frame : frames) {
    const bool above = frame.proximities.size() > 0 &&
                       frame.proximities.maxCoeff() > params.prox_threshold;
    if (above) {
      if (!open) {
        current.t_onset = frame.t;
        open = true;
      }
      current.t_offset = frame.t;
    } else if (open) {
      events.push_back(current);
      open = false;
    }
  }
  if (open) events.push_back(current);
  return events;
}

std::vector<VisualEvent> DetectVisualEvents(const std::vector<TrackPoint>& track,
                                            const TouchParams& params) {
  std::vector<VisualEvent> events;
  if (track.size() < 2) return events;
  auto slow = [&](size_t k) {
    const double dt = track[k + 1].t - track[k].t;
    if (!(dt > 0.0)) return false;
    return (track[k + 1].position - track[k].position).norm() / dt < params.stop_speed;
  };
  const size_t segments = track.size() - 1;
  size_t k = 0;
  while (k < segments) {
    if (!slow(k)) {
      ++k;
      continue;
    }
    size_t end = k;
    while (end + 1 < segments && slow(end + 1)) ++end;
    const double t0 = track[k].t;
    const double t1 = track[end + 1].t;
    if (t1 - t0 >= params.stop_window - 1e-9) {
      events.push_back({t0, t1, track[k].position});
    }
    k = end + 1;
  }
  return events;
}

std::vector<TouchEvent> PairEvents(const std::vector<Interval>& tactile,
                                   const std::vector<VisualEvent>& visual,
                                   const TouchParams& params) {
  std::vector<TouchEvent> out;
  if (visual.empty()) return out;
  for (const auto& te : tactile) {
    const VisualEvent* best = nullptr;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& ve : visual) {
      const double gap = std::abs(te.t_onset - ve.t_onset);
      if (gap < best_gap) {
        best_gap = gap;
        best = &ve;
      }
    }
    TouchEvent ev;
    ev.delta = te.t_onset - best->t_onset;
    ev.active = std::abs(ev.delta) <= params.sync_window;
    ev.o_v = best->position;
    ev.t_onset = te.t_onset;
    ev.t_offset = te.t_offset;
    out.push_back(ev);
  }
  return out;
}

double TouchLikelihoodAt(const Eigen::VectorXd& g_v, const Eigen::Vector2d& o_v, double delta,
                         const TouchParams& params) {
  if (g_v.size() != 2) throw std::invalid_argument("touch likelihood needs a 2-D visual prediction");
  const double spatial = params.a1 * std::exp(-params.b1 * (g_v - o_v).squaredNorm());
  const double temporal = params.a2 * std::exp(-params.b2 * delta * delta);
  return spatial * temporal;
}

std::optional<double> TactileObservation(const TouchEvent& event, const TouchParams& params) {
  if (!event.active) return std::nullopt;
  return params.a1 * params.a2 * std::exp(-params.b2 * event.delta * event.delta);
}

}  // namespace pcbody::tactile
