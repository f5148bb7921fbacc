#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace vsearch {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into [-pi, pi).
double normalize_angle(double radians);

inline double deg_to_rad(double degrees) { return degrees * kPi / 180.0; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // [-pi, pi)

  Pose() = default;
  Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}
  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Axis-aligned rectangle in world meters.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(Vec2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
  /// Euclidean distance from p to the rectangle (0 inside).
  double distance_to(Vec2 p) const;
  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

/// Row-major occupancy raster with world <-> cell transforms. Cell (x, y) covers
/// [x*res, (x+1)*res) x [y*res, (y+1)*res); the world origin is the map corner.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double resolution, CellState fill);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool contains(Vec2 p) const;
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Cell cell_of(std::size_t index) const {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }

  CellState at(Cell c) const { return cells_[index(c)]; }
  void set(Cell c, CellState s) { cells_[index(c)] = s; }
  std::span<const CellState> cells() const { return cells_; }

  Cell world_to_cell(Vec2 p) const;
  Vec2 cell_center(Cell c) const;

  bool same_shape(const OccupancyGrid& other) const {
    return width_ == other.width_ && height_ == other.height_ && resolution_ == other.resolution_;
  }
  std::size_t count(CellState s) const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  int width_;
  int height_;
  double resolution_;
  std::vector<CellState> cells_;
};

/// Ground-truth map; cells are Free or Occupied.
class GridMap : public OccupancyGrid {
 public:
  GridMap(int width, int height, double resolution)
      : OccupancyGrid(width, height, resolution, CellState::Free) {}
  bool occupied(Cell c) const { return at(c) == CellState::Occupied; }
  void fill_rect(const Rect& r, CellState s);
  friend bool operator==(const GridMap&, const GridMap&) = default;
};

struct LandmarkSpec {
  std::string id;
  std::string name;
  bool known = false;
  Rect footprint;

  /// Radius used by the camera projection model.
  double apparent_radius() const { return 0.5 * std::max(footprint.width(), footprint.height()); }
  friend bool operator==(const LandmarkSpec&, const LandmarkSpec&) = default;
};

struct ObjectSpec {
  std::string id;
  std::string name;
  Vec2 position;
  double radius = 0.1;
  bool is_target = false;
  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct HyperParams {
  // Planner weights and thresholds.
  double lambda1 = 1.0;
  double lambda2 = 0.05;
  double t_c = 0.2;
  double t_u = 2.5;
  double m_t = 29.0;
  double temperature = 1.0;
  bool skip_low_cooccurrence = true;
  bool skip_high_uncertainty = true;
  double cooccurrence_fallback = 0.5;

  // Mission.
  double fail_distance = 50.0;
  int scan_headings = 12;
  int pan_views = 3;
  double pan_step = deg_to_rad(30.0);
  int step_interval = 5;
  bool detect_en_route = false;
  bool relabel_known = true;

  // Sensors.
  double fov = deg_to_rad(60.0);
  double cam_range = 3.5;
  double lidar_range = 3.5;
  int lidar_rays = 360;
  double sigma_emb = 0.05;
  double sigma_mix = 1.0;
  int mixtures = 5;
  double p_miss = 0.0;
  int clutter_per_scan = 0;

  // Viewpoints and navigation.
  double view_radius = 1.5;
  int view_dirs = 8;
  double robot_radius = 0.2;
  int min_frontier_cells = 3;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Landmark name sets given to the planner as free-form phrases.
struct Vocabulary {
  std::vector<std::string> known_classes{"tv monitor", "sofa", "dining table"};
  std::vector<std::string> unknown_landmarks{"armchair", "side table", "coffee table",
                                             "desk",     "bed",        "drawer"};
  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

struct ScenarioSpec {
  GridMap map{1, 1, 0.1};
  std::vector<LandmarkSpec> landmarks;
  std::vector<ObjectSpec> objects;
  Pose start;
  std::string target_phrase;
  HyperParams hyperparams;
  Vocabulary vocabulary;
  std::uint64_t seed = 0;

  const ObjectSpec& target() const;
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Stamps landmark footprints into the map and checks every scenario invariant.
/// Throws ValidationError.
void validate(ScenarioSpec& scenario);

/// Cells whose centers fall inside r.
std::vector<Cell> cells_in_rect(const OccupancyGrid& grid, const Rect& r);

struct RayHit {
  double distance = 0.0;
  bool blocked = false;
  Cell cell{};  // hit cell when blocked
};

/// Every cell the segment origin -> origin + max_range * (cos, sin) passes
/// through, in order, origin cell excluded, stopping at the map edge.
std::vector<Cell> ray_cells(const OccupancyGrid& grid, Vec2 origin, double bearing, double max_range);

/// Distance at which the ray enters the first Occupied cell. Throws DomainError when
/// origin lies outside the map.
RayHit raycast(const OccupancyGrid& grid, Vec2 origin, double bearing, double max_range);

}  // namespace vsearch
