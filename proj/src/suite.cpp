#include "vsearch/suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_reader.hpp"
#include "vsearch/errors.hpp"
#include "vsearch/mission.hpp"
#include "vsearch/planning.hpp"
#include "vsearch/rng.hpp"
#include "vsearch/scenario_io.hpp"
#include "vsearch/sensing.hpp"

namespace vsearch {

using nlohmann::json;

namespace {

constexpr double kDoorWidth = 1.0;
constexpr double kClearance = 0.7;
constexpr double kMinRoomSide = 2.5;
constexpr double kFrontOffsetMin = 0.2;
constexpr double kFrontOffsetMax = 0.35;
constexpr double kMinStartToTarget = 3.0;
constexpr int kPlacementTries = 60;

/// Half-open cell rectangle [x0, x1) x [y0, y1).
struct CellRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  int w() const { return x1 - x0; }
  int h() const { return y1 - y0; }
  CellRect grown(int m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
  bool intersects(const CellRect& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

/// Wall the landmark backs onto; the front faces the opposite way.
enum class Side { South, North, West, East };

struct Placed {
  CellRect cells;
  Side side;
};

struct Layout {
  GridMap map{1, 1, 0.1};
  std::vector<CellRect> rooms;
  std::vector<CellRect> doors;
};

class Attempt {
 public:
  explicit Attempt(std::string constraint) : constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

double pick(RngStream& rng, Range<double> r) { return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi); }
int pick(RngStream& rng, Range<int> r) {
  return r.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(r.hi - r.lo + 1)));
}

int pick_between(RngStream& rng, int lo, int hi) {  // inclusive
  if (hi < lo) throw Attempt("room too small for placement");
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

Layout make_layout(RngStream& rng, int side_cells, double res, int rooms) {
  Layout L;
  L.map = GridMap(side_cells, side_cells, res);
  for (int i = 0; i < side_cells; ++i) {
    L.map.set({i, 0}, CellState::Occupied);
    L.map.set({i, side_cells - 1}, CellState::Occupied);
    L.map.set({0, i}, CellState::Occupied);
    L.map.set({side_cells - 1, i}, CellState::Occupied);
  }
  L.rooms.push_back({1, 1, side_cells - 1, side_cells - 1});
  const int door = static_cast<int>(std::lround(kDoorWidth / res));
  const int min_side = static_cast<int>(std::ceil(kMinRoomSide / res));

  while (static_cast<int>(L.rooms.size()) < rooms) {
    auto it = std::max_element(L.rooms.begin(), L.rooms.end(),
                               [](const CellRect& a, const CellRect& b) { return a.w() * a.h() < b.w() * b.h(); });
    const CellRect r = *it;
    const bool vertical = r.w() >= r.h();  // wall runs along y
    const int len = vertical ? r.w() : r.h();
    const int lo = std::max(min_side, static_cast<int>(len * 0.4));
    const int hi = std::min(len - min_side - 1, static_cast<int>(len * 0.6));
    if (hi < lo) throw Attempt("map too small for the requested room count");
    const int cut = pick_between(rng, lo, hi);
    CellRect a = r, b = r;
    CellRect gap;
    if (vertical) {
      const int xs = r.x0 + cut;
      for (int y = r.y0; y < r.y1; ++y) L.map.set({xs, y}, CellState::Occupied);
      const int d0 = pick_between(rng, r.y0 + 2, r.y1 - door - 2);
      for (int y = d0; y < d0 + door; ++y) L.map.set({xs, y}, CellState::Free);
      gap = {xs, d0, xs + 1, d0 + door};
      a.x1 = xs;
      b.x0 = xs + 1;
    } else {
      const int ys = r.y0 + cut;
      for (int x = r.x0; x < r.x1; ++x) L.map.set({x, ys}, CellState::Occupied);
      const int d0 = pick_between(rng, r.x0 + 2, r.x1 - door - 2);
      for (int x = d0; x < d0 + door; ++x) L.map.set({x, ys}, CellState::Free);
      gap = {d0, ys, d0 + door, ys + 1};
      a.y1 = ys;
      b.y0 = ys + 1;
    }
    *it = a;
    L.rooms.push_back(b);
    L.doors.push_back(gap);
  }
  return L;
}

std::optional<Placed> place_against_wall(RngStream& rng, const Layout& L, const CellRect& room, double width,
                                         double depth, const std::vector<Placed>& others) {
  const double res = L.map.resolution();
  const int wc = std::max(1, static_cast<int>(std::ceil(width / res - 1e-9)));
  const int dc = std::max(1, static_cast<int>(std::ceil(depth / res - 1e-9)));
  const int clear = static_cast<int>(std::ceil(kClearance / res));
  const Side side = static_cast<Side>(rng.below(4));
  CellRect c;
  switch (side) {
    case Side::South:
    case Side::North: {
      if (wc > room.w() || dc * 2 > room.h()) return std::nullopt;
      const int a = room.x0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(room.w() - wc + 1)));
      c = side == Side::South ? CellRect{a, room.y0, a + wc, room.y0 + dc} : CellRect{a, room.y1 - dc, a + wc, room.y1};
      break;
    }
    case Side::West:
    case Side::East: {
      if (wc > room.h() || dc * 2 > room.w()) return std::nullopt;
      const int a = room.y0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(room.h() - wc + 1)));
      c = side == Side::West ? CellRect{room.x0, a, room.x0 + dc, a + wc} : CellRect{room.x1 - dc, a, room.x1, a + wc};
      break;
    }
  }
  const CellRect halo = c.grown(clear);
  for (const auto& o : others)
    if (halo.intersects(o.cells)) return std::nullopt;
  for (const auto& d : L.doors)
    if (halo.intersects(d)) return std::nullopt;
  return Placed{c, side};
}

Rect world_rect(const CellRect& c, double res) { return {c.x0 * res, c.y0 * res, c.x1 * res, c.y1 * res}; }

/// A point on the floor just in front of the landmark.
Vec2 front_point(RngStream& rng, const Placed& p, double res) {
  const Rect r = world_rect(p.cells, res);
  const double off = rng.uniform(kFrontOffsetMin, kFrontOffsetMax);
  const double u = rng.uniform(0.15, 0.85);
  switch (p.side) {
    case Side::South:
      return {r.x_min + u * r.width(), r.y_max + off};
    case Side::North:
      return {r.x_min + u * r.width(), r.y_min - off};
    case Side::West:
      return {r.x_max + off, r.y_min + u * r.height()};
    case Side::East:
      return {r.x_min - off, r.y_min + u * r.height()};
  }
  return r.center();
}

std::size_t draw_weighted(RngStream& rng, const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    if (u < w[i]) return i;
    u -= w[i];
  }
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i] > 0.0) return i;
  return 0;
}

void enclose(GridMap& map, Vec2 p) {
  const Cell c = map.world_to_cell(p);
  constexpr int r = 2;
  for (int d = -r; d <= r; ++d)
    for (const Cell e : {Cell{c.x + d, c.y - r}, Cell{c.x + d, c.y + r}, Cell{c.x - r, c.y + d}, Cell{c.x + r, c.y + d}})
      if (map.in_bounds(e)) map.set(e, CellState::Occupied);
}

bool landmark_reachable(const ScenarioSpec& s, const DistanceField& reach, const LandmarkSpec& l) {
  const GridMap& map = s.map;
  const double radius = s.hyperparams.view_radius + map.resolution();
  const Rect box{l.footprint.x_min - radius, l.footprint.y_min - radius, l.footprint.x_max + radius,
                 l.footprint.y_max + radius};
  for (const Cell c : cells_in_rect(map, box))
    if (reach.reachable(c) && l.footprint.distance_to(map.cell_center(c)) <= radius) return true;
  return false;
}

ScenarioSpec attempt_scenario(const SuiteParams& p, RngStream& rng, const Assets& assets, std::uint64_t seed) {
  const double res = p.resolution;
  const double size = pick(rng, p.map_size);
  const int side_cells = static_cast<int>(std::lround(size / res));
  Layout L = make_layout(rng, side_cells, res, pick(rng, p.rooms));

  // Landmark names, without replacement while the pool lasts.
  std::vector<std::string> pool = p.vocabulary.known_classes;
  pool.insert(pool.end(), p.vocabulary.unknown_landmarks.begin(), p.vocabulary.unknown_landmarks.end());
  if (pool.empty()) throw GenerationError("vocabulary has no landmark names");
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
  if (!p.weights.empty()) {
    // Keep at least one positively weighted name in the draw.
    auto pos = std::find_if(pool.begin(), pool.end(), [&](const std::string& n) {
      auto w = p.weights.find(n);
      return w != p.weights.end() && w->second > 0.0;
    });
    if (pos == pool.end()) throw GenerationError("no vocabulary landmark has a positive placement weight");
    std::rotate(pool.begin(), pos, pos + 1);
  }
  const int n_landmarks = pick(rng, p.landmarks);

  std::vector<std::string> targets = p.targets;
  if (targets.empty()) throw GenerationError("no target phrases available");
  const std::string target = targets[rng.below(targets.size())];

  ScenarioSpec s;
  s.hyperparams = p.hyperparams;
  s.vocabulary = p.vocabulary;
  s.seed = seed;
  s.target_phrase = target;

  std::vector<Placed> placed;
  for (int i = 0; i < n_landmarks; ++i) {
    const std::string& name = pool[static_cast<std::size_t>(i) % pool.size()];
    const auto [w, d] = landmark_extent(name);
    std::optional<Placed> spot;
    for (int t = 0; t < kPlacementTries && !spot; ++t)
      spot = place_against_wall(rng, L, L.rooms[rng.below(L.rooms.size())], w, d, placed);
    if (!spot) throw Attempt("landmark placement against walls");
    placed.push_back(*spot);
    const bool known =
        std::find(p.vocabulary.known_classes.begin(), p.vocabulary.known_classes.end(), name) !=
        p.vocabulary.known_classes.end();
    s.landmarks.push_back({"L" + std::to_string(i), name, known, world_rect(spot->cells, res)});
  }

  std::vector<double> weights;
  for (const auto& l : s.landmarks) {
    if (!p.weights.empty()) {
      auto it = p.weights.find(l.name);
      weights.push_back(it == p.weights.end() ? 0.0 : std::max(0.0, it->second));
    } else {
      const auto co = cooccurrence(target, l.name, assets.generations, assets.words, p.hyperparams.cooccurrence_fallback);
      weights.push_back(std::max(0.0, co.score));
    }
  }
  for (double& w : weights) w = w > 0.0 ? std::pow(w, p.weight_power) : 0.0;
  if (std::all_of(weights.begin(), weights.end(), [](double w) { return w <= 0.0; }))
    throw Attempt("target placement weights are all zero");
  const std::size_t host = draw_weighted(rng, weights);
  const Vec2 target_pos = front_point(rng, placed[host], res);
  s.objects.push_back({"T", target, target_pos, 0.1, true});

  std::vector<std::string> others;
  for (const auto& t : targets)
    if (t != target) others.push_back(t);
  for (int i = 0; i < p.distractors && !others.empty(); ++i) {
    const std::string& name = others[rng.below(others.size())];
    std::size_t at = rng.below(placed.size());
    if (placed.size() > 1 && at == host) at = (at + 1) % placed.size();
    s.objects.push_back({"D" + std::to_string(i), name, front_point(rng, placed[at], res), 0.1, false});
  }

  if (p.enclose_target) enclose(L.map, target_pos);
  s.map = L.map;

  // Start: a passable cell that cannot see the target yet.
  {
    GridMap stamped = s.map;
    for (const auto& l : s.landmarks) stamped.fill_rect(l.footprint, CellState::Occupied);
    const NavGrid nav(stamped, p.hyperparams.robot_radius);
    bool found = false;
    for (int t = 0; t < 400 && !found; ++t) {
      const Cell c{static_cast<int>(rng.below(static_cast<std::uint64_t>(side_cells))),
                   static_cast<int>(rng.below(static_cast<std::uint64_t>(side_cells)))};
      if (!nav.passable(c)) continue;
      const Vec2 at = stamped.cell_center(c);
      if (distance(at, target_pos) < kMinStartToTarget) continue;
      if (object_visible(stamped, at, s.objects.front(), p.hyperparams.cam_range)) continue;
      s.start = Pose(at.x, at.y, rng.uniform(-kPi, kPi));
      found = true;
    }
    if (!found) throw Attempt("start pose out of the target's view");
  }

  try {
    validate(s);
  } catch (const ValidationError& e) {
    throw Attempt(std::string("validation: ") + e.what());
  }

  const NavGrid nav(s.map, s.hyperparams.robot_radius);
  const DistanceField reach(nav, s.map.world_to_cell(s.start.position()));
  for (const auto& l : s.landmarks)
    if (!landmark_reachable(s, reach, l)) throw Attempt("every landmark reachable");
  const bool viewable = shortest_confirming_path(s).has_value();
  if (p.enclose_target && viewable) throw Attempt("enclosed target hidden from every cell");
  if (!p.enclose_target && !viewable) throw Attempt("reachable target viewpoint");
  return s;
}

template <class T>
Range<T> parse_range(const json& j, const std::string& name) {
  if (j.is_number()) {
    const T v = j.get<T>();
    return {v, v};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<T>(), j[1].get<T>()};
  throw ParseError(name + " must be a number or a [lo, hi] pair");
}

template <class T>
void check_range(const Range<T>& r, T lo, T hi, const std::string& name) {
  if (r.lo > r.hi || r.lo < lo || r.hi > hi)
    throw ValidationError(name + " must lie within [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

std::pair<double, double> landmark_extent(std::string_view name) {
  static const std::map<std::string, std::pair<double, double>, std::less<>> table{
      {"tv monitor", {1.0, 0.3}}, {"sofa", {1.8, 0.8}},   {"dining table", {1.4, 0.9}},
      {"armchair", {0.8, 0.8}},   {"side table", {0.5, 0.5}}, {"coffee table", {1.0, 0.6}},
      {"desk", {1.2, 0.6}},       {"bed", {1.4, 2.0}},    {"drawer", {0.9, 0.5}},
  };
  auto it = table.find(name);
  return it == table.end() ? std::pair{1.0, 0.6} : it->second;
}

SuiteParams parse_suite_params(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("suite parameters are not valid JSON: ") + e.what());
  }
  detail::ObjectReader r(doc, "");
  SuiteParams p;
  if (const json* v = r.optional("count")) {
    if (!v->is_number_unsigned() || v->get<std::size_t>() == 0) throw ParseError("count must be a positive integer");
    p.count = v->get<std::size_t>();
  }
  if (const json* v = r.optional("rooms")) p.rooms = parse_range<int>(*v, "rooms");
  if (const json* v = r.optional("landmarks")) p.landmarks = parse_range<int>(*v, "landmarks");
  if (const json* v = r.optional("map_size")) p.map_size = parse_range<double>(*v, "map_size");
  r.number_opt("resolution", p.resolution);
  if (const json* v = r.optional("targets")) {
    if (!v->is_array()) throw ParseError("targets must be an array of strings");
    for (const auto& t : *v) p.targets.push_back(detail::ObjectReader::as_string(t, "targets[]"));
  }
  if (const json* v = r.optional("weights")) {
    if (!v->is_object()) throw ParseError("weights must be an object");
    for (const auto& [k, w] : v->items()) p.weights[k] = detail::ObjectReader::as_number(w, "weights." + k);
  }
  r.number_opt("weight_power", p.weight_power);
  r.int_opt("distractors", p.distractors);
  r.bool_opt("enclose_target", p.enclose_target);
  if (const json* v = r.optional("hyperparams")) p.hyperparams = hyperparams_from_json(*v);
  if (const json* v = r.optional("vocabulary")) p.vocabulary = vocabulary_from_json(*v);
  r.int_opt("max_retries", p.max_retries);
  r.finish();

  check_range(p.rooms, 1, 4, "rooms");
  check_range(p.landmarks, 3, 8, "landmarks");
  check_range(p.map_size, 8.0, 20.0, "map_size");
  if (!(p.resolution > 0.0) || p.resolution > 0.5) throw ValidationError("resolution must lie in (0, 0.5]");
  if (!(p.weight_power > 0.0)) throw ValidationError("weight_power must be positive");
  if (p.distractors < 0) throw ValidationError("distractors must be non-negative");
  if (p.max_retries < 1) throw ValidationError("max_retries must be positive");
  return p;
}

SuiteParams load_suite_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open suite parameters " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite_params(ss.str());
}

std::vector<ScenarioSpec> generate_suite(const SuiteParams& params, std::uint64_t seed, const Assets& assets) {
  SuiteParams p = params;
  if (p.targets.empty()) p.targets = assets.generations.targets();
  std::vector<ScenarioSpec> out;
  out.reserve(p.count);
  for (std::size_t i = 0; i < p.count; ++i) {
    const std::uint64_t s = mix_seed(seed, i);
    RngStream rng(s);
    std::string last;
    bool done = false;
    for (int attempt = 0; attempt < p.max_retries && !done; ++attempt) {
      try {
        out.push_back(attempt_scenario(p, rng, assets, s));
        done = true;
      } catch (const Attempt& a) {
        last = a.constraint();
      }
    }
    if (!done)
      throw GenerationError("scenario " + std::to_string(i) + ": could not satisfy '" + last + "' after " +
                            std::to_string(p.max_retries) + " attempts");
  }
  return out;
}

}  // namespace vsearch
