#include "vsearch/metrics.hpp"

#include <algorithm>

#include "vsearch/errors.hpp"

namespace vsearch {

Overlap iou_ioa(const BBox& a, const BBox& b) {
  if (!(a.area() > 0.0) || !(b.area() > 0.0)) throw DomainError("iou_ioa needs boxes with positive area");
  const double w = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double h = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = w * h;
  return {inter / (a.area() + b.area() - inter), inter / a.area()};
}

bool overlap_confirms(const BBox& candidate, const BBox& truth) {
  const Overlap o = iou_ioa(candidate, truth);
  return o.iou > kConfirmIou || o.ioa > kConfirmIoa;
}

double spl(std::span<const EpisodeMetrics> episodes) {
  if (episodes.empty()) throw DomainError("spl of an empty episode list");
  double sum = 0.0;
  for (const auto& e : episodes) {
    if (!e.success) continue;
    const double denom = std::max(e.traveled, e.shortest);
    sum += denom > 0.0 ? e.shortest / denom : 1.0;
  }
  return sum / static_cast<double>(episodes.size());
}

double success_rate(std::span<const EpisodeMetrics> episodes) {
  if (episodes.empty()) throw DomainError("success rate of an empty episode list");
  std::size_t n = 0;
  for (const auto& e : episodes) n += e.success;
  return 100.0 * static_cast<double>(n) / static_cast<double>(episodes.size());
}

double mean_waypoints(std::span<const EpisodeMetrics> episodes) {
  if (episodes.empty()) throw DomainError("mean waypoints of an empty episode list");
  double s = 0.0;
  for (const auto& e : episodes) s += static_cast<double>(e.waypoints);
  return s / static_cast<double>(episodes.size());
}

}  // namespace vsearch
