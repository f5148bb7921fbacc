#include "vsearch/planning.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "vsearch/errors.hpp"

namespace vsearch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Move {
  int dx;
  int dy;
  bool diagonal;
};

constexpr Move kMoves[8] = {{1, 0, false},  {-1, 0, false}, {0, 1, false},  {0, -1, false},
                            {1, 1, true},   {1, -1, true},  {-1, 1, true},  {-1, -1, true}};

/// Diagonal moves require both orthogonal neighbors to be enterable. From a
/// cell inside the inflation margin any Free cell may be entered, so a robot
/// whose margin grew around it can still back out; once on a passable cell
/// it stays on passable cells.
bool can_step(const NavGrid& nav, Cell from, const Move& m) {
  const bool escaping = !nav.passable(from);
  auto enterable = [&](Cell c) { return escaping ? nav.free(c) : nav.passable(c); };
  const Cell to{from.x + m.dx, from.y + m.dy};
  if (!enterable(to)) return false;
  if (m.diagonal && (!enterable({from.x + m.dx, from.y}) || !enterable({from.x, from.y + m.dy}))) return false;
  return true;
}

StepCount add(StepCount s, const Move& m) {
  if (m.diagonal)
    ++s.diagonal;
  else
    ++s.straight;
  return s;
}

double octile(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy);
}

using QueueEntry = std::pair<double, std::size_t>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

}  // namespace

NavGrid::NavGrid(const OccupancyGrid& grid, double robot_radius)
    : width_(grid.width()), height_(grid.height()), resolution_(grid.resolution()) {
  passable_.assign(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) passable_[i] = grid.cells()[i] == CellState::Free;
  free_ = passable_;
  const int r = static_cast<int>(std::floor(robot_radius / resolution_ + 1e-9));
  if (r <= 0) return;
  const double r2 = (robot_radius / resolution_) * (robot_radius / resolution_) + 1e-9;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) {
      if (grid.at({x, y}) != CellState::Occupied) continue;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const Cell c{x + dx, y + dy};
          if (in_bounds(c) && dx * dx + dy * dy <= r2) passable_[index(c)] = 0;
        }
    }
}

Path plan_path(const NavGrid& nav, Cell start, Cell goal) {
  if (!nav.in_bounds(start)) throw DomainError("path start outside map");
  if (!nav.in_bounds(goal)) throw NoPathError("path goal outside map");
  if (start == goal) return {{start}, {}, 0.0};
  if (!nav.free(goal)) throw NoPathError("path goal is not free");

  const std::size_t n = static_cast<std::size_t>(nav.width()) * nav.height();
  std::vector<double> g(n, kInf);
  std::vector<StepCount> steps(n);
  std::vector<std::size_t> parent(n, n);
  std::vector<char> closed(n, 0);
  MinQueue open;
  const std::size_t s = nav.index(start);
  const std::size_t t = nav.index(goal);
  g[s] = 0.0;
  open.push({octile(start, goal), s});

  while (!open.empty()) {
    const auto [f, i] = open.top();
    open.pop();
    if (closed[i]) continue;
    closed[i] = 1;
    if (i == t) break;
    const Cell c = nav.cell_of(i);
    for (const Move& m : kMoves) {
      if (!can_step(nav, c, m)) continue;
      const Cell nc{c.x + m.dx, c.y + m.dy};
      const std::size_t j = nav.index(nc);
      if (closed[j]) continue;
      const StepCount ns = add(steps[i], m);
      const double ng = ns.cells();
      if (ng < g[j] - 1e-12) {
        g[j] = ng;
        steps[j] = ns;
        parent[j] = i;
        open.push({ng + octile(nc, goal), j});
      }
    }
  }
  if (!closed[t]) throw NoPathError("goal unreachable");

  Path p;
  for (std::size_t i = t; i != n; i = parent[i]) p.cells.push_back(nav.cell_of(i));
  std::reverse(p.cells.begin(), p.cells.end());
  p.steps = steps[t];
  p.length = p.steps.cells() * nav.resolution();
  return p;
}

Path plan_path(const BeliefMap& belief, Cell start, Cell goal) {
  if (!belief.in_bounds(start)) throw DomainError("path start outside map");
  if (belief.at(start) != CellState::Free) throw DomainError("path start must be Free");
  return plan_path(NavGrid(belief, 0.0), start, goal);
}

DistanceField::DistanceField(const NavGrid& nav, Cell source) : nav_(&nav) {
  if (!nav.in_bounds(source)) throw DomainError("distance field source outside map");
  const std::size_t n = static_cast<std::size_t>(nav.width()) * nav.height();
  dist_.assign(n, kInf);
  steps_.assign(n, {});
  std::vector<char> closed(n, 0);
  MinQueue open;
  const std::size_t s = nav.index(source);
  dist_[s] = 0.0;
  open.push({0.0, s});
  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (closed[i]) continue;
    closed[i] = 1;
    const Cell c = nav.cell_of(i);
    for (const Move& m : kMoves) {
      if (!can_step(nav, c, m)) continue;
      const std::size_t j = nav.index({c.x + m.dx, c.y + m.dy});
      if (closed[j]) continue;
      const StepCount ns = add(steps_[i], m);
      if (ns.cells() < dist_[j] - 1e-12) {
        dist_[j] = ns.cells();
        steps_[j] = ns;
        open.push({dist_[j], j});
      }
    }
  }
  for (double& v : dist_)
    if (v != kInf) v *= nav.resolution();
}

bool DistanceField::reachable(Cell c) const { return nav_->in_bounds(c) && dist_[nav_->index(c)] != kInf; }

double DistanceField::distance(Cell c) const { return nav_->in_bounds(c) ? dist_[nav_->index(c)] : kInf; }

std::optional<StepCount> DistanceField::steps(Cell c) const {
  if (!reachable(c)) return std::nullopt;
  return steps_[nav_->index(c)];
}

std::vector<Viewpoint> generate_viewpoints(const BeliefMap& belief, const NavGrid& nav, const DistanceField& reach,
                                           Vec2 landmark, const DetectionRecord& detection, double radius, int dirs) {
  if (!belief.contains(landmark)) throw DomainError("landmark position outside map");
  std::optional<Viewpoint> best;
  double best_dist = kInf;
  for (int k = 0; k < dirs; ++k) {
    const double a = 2.0 * kPi * k / dirs;
    const Vec2 p = landmark + radius * Vec2{std::cos(a), std::sin(a)};
    if (!belief.contains(p)) continue;
    const Cell c = belief.world_to_cell(p);
    if (belief.at(c) != CellState::Free || !nav.passable(c)) continue;
    const double d = reach.distance(c);
    if (!(d < best_dist)) continue;
    best_dist = d;
    const Vec2 at = belief.cell_center(c);
    Viewpoint v;
    v.pose = Pose(at.x, at.y, std::atan2(landmark.y - at.y, landmark.x - at.x));
    v.detection = detection;
    best = std::move(v);
  }
  if (!best) return {};
  return {std::move(*best)};
}

double viewpoint_cost(const Pose& current, const Viewpoint& candidate, const HyperParams& hp) {
  return std::hypot(current.x - candidate.pose.x, current.y - candidate.pose.y) +
         hp.lambda1 * (1.0 + 1e-3 - candidate.cooccur) + hp.lambda2 * candidate.sem_uncert;
}

bool violates_thresholds(const Viewpoint& v, const HyperParams& hp) {
  return (hp.skip_low_cooccurrence && v.cooccur < hp.t_c) || (hp.skip_high_uncertainty && v.sem_uncert > hp.t_u);
}

WaypointPlan plan_waypoints(const Pose& current, std::span<const Viewpoint> candidates, const HyperParams& hp) {
  WaypointPlan plan;
  std::vector<Viewpoint> pool;
  for (const auto& v : candidates) (violates_thresholds(v, hp) ? plan.skipped : pool).push_back(v);

  Pose at = current;
  while (!pool.empty()) {
    std::size_t pick = 0;
    double best = viewpoint_cost(at, pool[0], hp);
    for (std::size_t i = 1; i < pool.size(); ++i) {
      const double c = viewpoint_cost(at, pool[i], hp);
      if (c < best || (c == best && pool[i].landmark_id < pool[pick].landmark_id)) {
        best = c;
        pick = i;
      }
    }
    at = pool[pick].pose;
    plan.order.push_back(std::move(pool[pick]));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return plan;
}

std::vector<Cell> frontier_cells(const BeliefMap& belief) {
  std::vector<Cell> out;
  for (int y = 0; y < belief.height(); ++y)
    for (int x = 0; x < belief.width(); ++x) {
      if (belief.at({x, y}) != CellState::Free) continue;
      const Cell n4[4] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
      for (Cell n : n4)
        if (belief.in_bounds(n) && belief.at(n) == CellState::Unknown) {
          out.push_back({x, y});
          break;
        }
    }
  return out;
}

std::optional<Frontier> nearest_frontier(const BeliefMap& belief, const NavGrid& /*nav*/, const DistanceField& reach,
                                         int min_cells) {
  const std::vector<Cell> cells = frontier_cells(belief);
  std::vector<char> is_frontier(belief.size(), 0);
  for (Cell c : cells) is_frontier[belief.index(c)] = 1;
  std::vector<char> seen(belief.size(), 0);

  std::optional<Frontier> best;
  for (Cell seed : cells) {
    if (seen[belief.index(seed)]) continue;
    Frontier f;
    std::vector<Cell> stack{seed};
    seen[belief.index(seed)] = 1;
    while (!stack.empty()) {
      const Cell c = stack.back();
      stack.pop_back();
      f.cells.push_back(c);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const Cell n{c.x + dx, c.y + dy};
          if ((dx || dy) && belief.in_bounds(n) && is_frontier[belief.index(n)] && !seen[belief.index(n)]) {
            seen[belief.index(n)] = 1;
            stack.push_back(n);
          }
        }
    }
    if (static_cast<int>(f.cells.size()) < min_cells) continue;
    std::sort(f.cells.begin(), f.cells.end(), [&](Cell a, Cell b) { return belief.index(a) < belief.index(b); });
    double closest = kInf;
    Vec2 sum{};
    for (Cell c : f.cells) {
      sum = sum + belief.cell_center(c);
      if (!reach.reachable(c)) continue;
      const double d = reach.distance(c);
      if (d < closest) {
        closest = d;
        f.goal = c;
      }
    }
    if (closest == kInf) continue;
    f.distance = closest;
    f.centroid = (1.0 / static_cast<double>(f.cells.size())) * sum;
    if (!best || f.distance < best->distance) best = std::move(f);
  }
  return best;
}

std::optional<Frontier> nearest_frontier(const BeliefMap& belief, const Pose& pose, double robot_radius,
                                         int min_cells) {
  const NavGrid nav(belief, robot_radius);
  const DistanceField reach(nav, belief.world_to_cell(pose.position()));
  return nearest_frontier(belief, nav, reach, min_cells);
}

}  // namespace vsearch
