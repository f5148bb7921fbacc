#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsearch/detection.hpp"
#include "vsearch/sensing.hpp"
#include "vsearch/world.hpp"

namespace vsearch {

/// Cells the robot center may occupy: Free cells farther than robot_radius
/// from every Occupied cell. Unknown cells are never passable.
class NavGrid {
 public:
  NavGrid(const OccupancyGrid& grid, double robot_radius);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Cell cell_of(std::size_t i) const { return {static_cast<int>(i % width_), static_cast<int>(i / width_)}; }
  bool passable(Cell c) const { return in_bounds(c) && passable_[index(c)]; }
  /// Free in the source grid, ignoring the inflation margin.
  bool free(Cell c) const { return in_bounds(c) && free_[index(c)]; }

 private:
  int width_;
  int height_;
  double resolution_;
  std::vector<char> passable_;
  std::vector<char> free_;
};

/// Step counts of an 8-connected path; length = (straight + diagonal * sqrt 2) * res.
struct StepCount {
  int straight = 0;
  int diagonal = 0;
  double cells() const { return straight + diagonal * std::numbers::sqrt2; }
  friend bool operator==(const StepCount&, const StepCount&) = default;
};

struct Path {
  std::vector<Cell> cells;
  StepCount steps;
  double length = 0.0;  // meters
};

/// Shortest 8-connected path (no corner cutting) by A* with the octile
/// heuristic. The start cell is exempt from the passability test, and moves
/// out of an impassable cell may enter any Free cell. Ties in f
/// break on cell index. Throws NoPathError when the goal is unreachable.
Path plan_path(const NavGrid& nav, Cell start, Cell goal);

/// Convenience overload: Unknown blocked, no inflation.
Path plan_path(const BeliefMap& belief, Cell start, Cell goal);

/// Single-source shortest path lengths over a NavGrid (Dijkstra, same move set
/// as plan_path).
class DistanceField {
 public:
  DistanceField(const NavGrid& nav, Cell source);
  bool reachable(Cell c) const;
  /// Meters; +inf when unreachable.
  double distance(Cell c) const;
  std::optional<StepCount> steps(Cell c) const;

 private:
  const NavGrid* nav_;
  std::vector<double> dist_;
  std::vector<StepCount> steps_;
};

struct Viewpoint {
  std::size_t landmark_id = 0;
  std::string landmark_name;
  Pose pose;
  double cooccur = 0.0;
  double sem_uncert = 0.0;
  DetectionRecord detection;
};

/// Ring candidates around a landmark, snapped to cell centers and facing the
/// landmark; keeps the reachable one with the shortest path distance. Empty
/// when none qualifies.
std::vector<Viewpoint> generate_viewpoints(const BeliefMap& belief, const NavGrid& nav, const DistanceField& reach,
                                           Vec2 landmark, const DetectionRecord& detection, double radius, int dirs);

/// Euclidean distance from current plus the co-occurrence and uncertainty penalties.
double viewpoint_cost(const Pose& current, const Viewpoint& candidate, const HyperParams& hp);

/// True when the skip thresholds remove this candidate.
bool violates_thresholds(const Viewpoint& candidate, const HyperParams& hp);

struct WaypointPlan {
  std::vector<Viewpoint> order;
  std::vector<Viewpoint> skipped;
};

/// Threshold filter followed by greedy minimum-cost ordering from current.
WaypointPlan plan_waypoints(const Pose& current, std::span<const Viewpoint> candidates, const HyperParams& hp);

struct Frontier {
  std::vector<Cell> cells;
  Vec2 centroid;
  Cell goal{};        // reachable member closest by path length
  double distance = 0.0;  // path length to goal, meters
};

/// Free cells with an Unknown 4-neighbor.
std::vector<Cell> frontier_cells(const BeliefMap& belief);

/// Nearest frontier cluster (8-connected, at least min_cells members) by path
/// distance. nullopt signals exploration exhausted.
std::optional<Frontier> nearest_frontier(const BeliefMap& belief, const NavGrid& nav, const DistanceField& reach,
                                         int min_cells);
std::optional<Frontier> nearest_frontier(const BeliefMap& belief, const Pose& pose, double robot_radius,
                                         int min_cells);

}  // namespace vsearch
