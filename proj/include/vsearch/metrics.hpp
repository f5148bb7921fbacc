#pragma once

#include <span>

#include "vsearch/detection.hpp"

namespace vsearch {

inline constexpr double kConfirmIou = 0.3;
inline constexpr double kConfirmIoa = 0.5;

struct Overlap {
  double iou = 0.0;
  double ioa = 0.0;  // intersection over the area of the first box
};

/// Throws DomainError when either box has zero area.
Overlap iou_ioa(const BBox& a, const BBox& b);

/// The simulated success rule: IoU > 0.3 or IoA > 0.5.
bool overlap_confirms(const BBox& candidate, const BBox& truth);

struct EpisodeMetrics {
  bool success = false;
  double traveled = 0.0;  // meters
  double shortest = 0.0;  // meters
  std::size_t waypoints = 0;
};

/// Mean of S_i * l_i / max(p_i, l_i); an episode with p_i = l_i = 0 scores 1
/// when successful. Throws DomainError for an empty list.
double spl(std::span<const EpisodeMetrics> episodes);

/// Percentage of successful episodes.
double success_rate(std::span<const EpisodeMetrics> episodes);

double mean_waypoints(std::span<const EpisodeMetrics> episodes);

}  // namespace vsearch
