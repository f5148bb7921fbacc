#include "vsearch/world.hpp"

#include <cstdlib>
#include <limits>
#include <set>

#include "vsearch/errors.hpp"

namespace vsearch {

double normalize_angle(double radians) {
  if (!std::isfinite(radians)) throw DomainError("angle must be finite");
  double a = std::fmod(radians + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  a -= kPi;
  // fmod rounding can land exactly on +pi.
  if (a >= kPi) a = -kPi;
  return a;
}

double Rect::distance_to(Vec2 p) const {
  const double dx = std::max({x_min - p.x, 0.0, p.x - x_max});
  const double dy = std::max({y_min - p.y, 0.0, p.y - y_max});
  return std::hypot(dx, dy);
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, CellState fill)
    : width_(width), height_(height), resolution_(resolution) {
  if (width < 1 || height < 1) throw DomainError("grid dimensions must be at least 1x1");
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw DomainError("grid resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width) * height, fill);
}

bool OccupancyGrid::contains(Vec2 p) const {
  return p.x >= 0.0 && p.y >= 0.0 && p.x < width_ * resolution_ && p.y < height_ * resolution_;
}

Cell OccupancyGrid::world_to_cell(Vec2 p) const {
  return {static_cast<int>(std::floor(p.x / resolution_)), static_cast<int>(std::floor(p.y / resolution_))};
}

Vec2 OccupancyGrid::cell_center(Cell c) const {
  return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
}

std::size_t OccupancyGrid::count(CellState s) const {
  std::size_t n = 0;
  for (CellState c : cells_) n += (c == s);
  return n;
}

std::vector<Cell> cells_in_rect(const OccupancyGrid& grid, const Rect& r) {
  std::vector<Cell> out;
  const double res = grid.resolution();
  const int x0 = std::max(0, static_cast<int>(std::ceil(r.x_min / res - 0.5)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(r.y_min / res - 0.5)));
  const int x1 = std::min(grid.width() - 1, static_cast<int>(std::floor(r.x_max / res - 0.5)));
  const int y1 = std::min(grid.height() - 1, static_cast<int>(std::floor(r.y_max / res - 0.5)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) out.push_back({x, y});
  return out;
}

void GridMap::fill_rect(const Rect& r, CellState s) {
  for (Cell c : cells_in_rect(*this, r)) set(c, s);
}

const ObjectSpec& ScenarioSpec::target() const {
  for (const auto& o : objects)
    if (o.is_target) return o;
  throw ValidationError("scenario has no target object");
}

namespace {

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ValidationError(std::string("hyperparams.") + name + " must be finite");
}

void validate_hyperparams(const HyperParams& hp) {
  check_finite(hp.lambda1, "lambda1");
  check_finite(hp.lambda2, "lambda2");
  check_finite(hp.t_c, "t_c");
  check_finite(hp.t_u, "t_u");
  check_finite(hp.m_t, "m_t");
  check_finite(hp.cooccurrence_fallback, "cooccurrence_fallback");
  if (!(hp.temperature > 0.0) || !std::isfinite(hp.temperature))
    throw ValidationError("hyperparams.temperature must be positive");
  if (!(hp.fail_distance > 0.0) || !std::isfinite(hp.fail_distance))
    throw ValidationError("hyperparams.fail_distance must be positive");
  if (!(hp.fov > 0.0 && hp.fov < 2.0 * kPi)) throw ValidationError("hyperparams.fov must be in (0, 2pi)");
  if (!(hp.cam_range > 0.0)) throw ValidationError("hyperparams.cam_range must be positive");
  if (!(hp.lidar_range > 0.0)) throw ValidationError("hyperparams.lidar_range must be positive");
  if (hp.scan_headings < 1) throw ValidationError("hyperparams.scan_headings must be >= 1");
  if (hp.pan_views < 1) throw ValidationError("hyperparams.pan_views must be >= 1");
  if (hp.lidar_rays < 4) throw ValidationError("hyperparams.lidar_rays must be >= 4");
  if (hp.mixtures < 1) throw ValidationError("hyperparams.mixtures must be >= 1");
  if (hp.step_interval < 1) throw ValidationError("hyperparams.step_interval must be >= 1");
  if (hp.view_dirs < 1) throw ValidationError("hyperparams.view_dirs must be >= 1");
  if (!(hp.view_radius > 0.0)) throw ValidationError("hyperparams.view_radius must be positive");
  if (!(hp.robot_radius >= 0.0)) throw ValidationError("hyperparams.robot_radius must be non-negative");
  if (!(hp.sigma_emb >= 0.0)) throw ValidationError("hyperparams.sigma_emb must be non-negative");
  if (!(hp.sigma_mix >= 0.0)) throw ValidationError("hyperparams.sigma_mix must be non-negative");
  if (!(hp.p_miss >= 0.0 && hp.p_miss <= 1.0)) throw ValidationError("hyperparams.p_miss must be in [0, 1]");
  if (hp.clutter_per_scan < 0) throw ValidationError("hyperparams.clutter_per_scan must be >= 0");
  if (hp.min_frontier_cells < 1) throw ValidationError("hyperparams.min_frontier_cells must be >= 1");
  check_finite(hp.pan_step, "pan_step");
}

bool contains_name(const std::vector<std::string>& names, const std::string& n) {
  for (const auto& s : names)
    if (s == n) return true;
  return false;
}

}  // namespace

void validate(ScenarioSpec& s) {
  validate_hyperparams(s.hyperparams);
  auto& map = s.map;
  const Rect bounds{0.0, 0.0, map.width() * map.resolution(), map.height() * map.resolution()};

  if (s.vocabulary.known_classes.empty() && s.vocabulary.unknown_landmarks.empty())
    throw ValidationError("vocabulary must name at least one landmark class");

  std::set<std::string> ids;
  for (const auto& l : s.landmarks) {
    if (l.id.empty()) throw ValidationError("landmark id must be non-empty");
    if (!ids.insert(l.id).second) throw ValidationError("duplicate id '" + l.id + "'");
    if (l.name.empty()) throw ValidationError("landmark '" + l.id + "' name must be non-empty");
    const Rect& f = l.footprint;
    if (!(f.x_min < f.x_max && f.y_min < f.y_max))
      throw ValidationError("landmark '" + l.id + "' footprint is empty");
    if (f.x_min < bounds.x_min || f.y_min < bounds.y_min || f.x_max > bounds.x_max || f.y_max > bounds.y_max)
      throw ValidationError("landmark '" + l.id + "' footprint outside map");
    const auto& pool = l.known ? s.vocabulary.known_classes : s.vocabulary.unknown_landmarks;
    if (!contains_name(pool, l.name))
      throw ValidationError("landmark '" + l.id + "' name '" + l.name + "' not in the " +
                            (l.known ? "known_classes" : "unknown_landmarks") + " vocabulary");
    if (cells_in_rect(map, f).empty())
      throw ValidationError("landmark '" + l.id + "' footprint covers no cell center");
  }
  for (const auto& l : s.landmarks) map.fill_rect(l.footprint, CellState::Occupied);

  int targets = 0;
  for (const auto& o : s.objects) {
    if (o.id.empty()) throw ValidationError("object id must be non-empty");
    if (!ids.insert(o.id).second) throw ValidationError("duplicate id '" + o.id + "'");
    if (o.name.empty()) throw ValidationError("object '" + o.id + "' name must be non-empty");
    if (!(o.radius > 0.0)) throw ValidationError("object '" + o.id + "' radius must be positive");
    if (!map.contains(o.position)) throw ValidationError("object '" + o.id + "' outside map");
    targets += o.is_target;
  }
  if (targets != 1) throw ValidationError("exactly one object must have is_target = true");
  if (s.target().name != s.target_phrase)
    throw ValidationError("target_phrase '" + s.target_phrase + "' does not match target object name '" +
                          s.target().name + "'");

  if (!std::isfinite(s.start.x) || !std::isfinite(s.start.y)) throw ValidationError("start must be finite");
  s.start.theta = normalize_angle(s.start.theta);
  if (!map.contains(s.start.position())) throw ValidationError("start outside map");
  if (map.occupied(map.world_to_cell(s.start.position()))) throw ValidationError("start inside an obstacle");
}

namespace {

/// Walks every cell the segment from origin to end passes through (grid
/// traversal of Amanatides and Woo), origin cell excluded, stopping when the
/// walk leaves the grid. visit(cell, entry_distance) returns false to stop.
/// A segment through a cell corner steps along x first.
template <class Visit>
void traverse(const OccupancyGrid& grid, Vec2 origin, double bearing, double max_range, Visit visit) {
  const double res = grid.resolution();
  const double dx = std::cos(bearing);
  const double dy = std::sin(bearing);
  Cell c = grid.world_to_cell(origin);
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double tdx = std::abs(dx) < 1e-12 ? kInf : res / std::abs(dx);
  const double tdy = std::abs(dy) < 1e-12 ? kInf : res / std::abs(dy);
  const double bx = (sx > 0 ? c.x + 1 : c.x) * res;
  const double by = (sy > 0 ? c.y + 1 : c.y) * res;
  double tx = std::abs(dx) < 1e-12 ? kInf : (bx - origin.x) / dx;
  double ty = std::abs(dy) < 1e-12 ? kInf : (by - origin.y) / dy;
  for (;;) {
    double t;
    if (tx <= ty) {
      t = tx;
      tx += tdx;
      c.x += sx;
    } else {
      t = ty;
      ty += tdy;
      c.y += sy;
    }
    if (t > max_range || !grid.in_bounds(c)) return;
    if (!visit(c, std::max(0.0, t))) return;
  }
}

}  // namespace

std::vector<Cell> ray_cells(const OccupancyGrid& grid, Vec2 origin, double bearing, double max_range) {
  std::vector<Cell> out;
  traverse(grid, origin, bearing, max_range, [&](Cell c, double) {
    out.push_back(c);
    return true;
  });
  return out;
}

RayHit raycast(const OccupancyGrid& grid, Vec2 origin, double bearing, double max_range) {
  if (!grid.contains(origin)) throw DomainError("raycast origin outside map");
  if (!(max_range >= 0.0)) throw DomainError("raycast range must be non-negative");
  RayHit hit{max_range, false, {}};
  traverse(grid, origin, bearing, max_range, [&](Cell c, double t) {
    if (grid.at(c) != CellState::Occupied) return true;
    hit = {t, true, c};
    return false;
  });
  return hit;
}

}  // namespace vsearch
