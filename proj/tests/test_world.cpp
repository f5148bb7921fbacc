#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "vsearch/errors.hpp"
#include "vsearch/scenario_io.hpp"
#include "vsearch/world.hpp"

using namespace vsearch;

namespace {

// Walks the ray in tiny increments and reports where it first lands in an
// occupied cell. Slow, but free of any traversal bookkeeping.
double fine_walk(const GridMap& g, Vec2 o, double bearing, double max_range) {
  const double step = 1e-4;
  const Cell origin = g.world_to_cell(o);
  for (double t = 0.0; t <= max_range; t += step) {
    const Vec2 p{o.x + t * std::cos(bearing), o.y + t * std::sin(bearing)};
    if (!g.contains(p)) break;
    const Cell c = g.world_to_cell(p);
    if (c != origin && g.occupied(c)) return t;
  }
  return max_range;
}

GridMap random_map(std::mt19937_64& gen, int w, int h, double density) {
  GridMap g(w, h, 0.1);
  std::bernoulli_distribution wall(density);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (wall(gen)) g.set({x, y}, CellState::Occupied);
  return g;
}

}  // namespace

TEST_SUITE("world") {
  TEST_CASE("angles wrap into the half-open interval") {
    CHECK(normalize_angle(kPi) == doctest::Approx(-kPi));
    CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(normalize_angle(-kPi / 2) == doctest::Approx(-kPi / 2));
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> any(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
      const double a = normalize_angle(any(gen));
      CHECK(a >= -kPi);
      CHECK(a < kPi);
    }
  }

  TEST_CASE("raycast through an empty map reaches full range") {
    const GridMap g(60, 60, 0.1);
    for (double b = -kPi; b < kPi; b += 0.37) {
      const RayHit h = raycast(g, {3.0, 3.0}, b, 2.0);
      CHECK_FALSE(h.blocked);
      CHECK(h.distance == 2.0);
    }
  }

  TEST_CASE("raycast finds a wall two meters ahead") {
    GridMap g(60, 20, 0.1);
    for (int y = 0; y < 20; ++y) g.set({25, y}, CellState::Occupied);
    const Vec2 o{0.55, 1.05};
    const RayHit h = raycast(g, o, 0.0, 3.5);
    CHECK(h.blocked);
    CHECK(std::abs(h.distance - 2.0) <= g.resolution());
    CHECK(std::abs(h.distance - fine_walk(g, o, 0.0, 3.5)) <= 1e-3);
    CHECK(h.cell == Cell{25, 10});
  }

  TEST_CASE("raycast from a cell next to a wall stops within one cell") {
    GridMap g(10, 10, 0.1);
    for (int y = 0; y < 10; ++y) g.set({2, y}, CellState::Occupied);
    const RayHit h = raycast(g, {0.15, 0.55}, 0.0, 3.5);
    CHECK(h.blocked);
    CHECK(h.distance <= g.resolution());
  }

  TEST_CASE("raycast agrees with a fine sampled walk on random maps") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> bearing(-kPi, kPi);
    for (int trial = 0; trial < 40; ++trial) {
      const GridMap g = random_map(gen, 30, 30, 0.08);
      const Vec2 o{1.537, 1.481};
      for (int k = 0; k < 10; ++k) {
        const double b = bearing(gen);
        const double expect = fine_walk(g, o, b, 2.5);
        const RayHit h = raycast(g, o, b, 2.5);
        CHECK(std::abs(h.distance - expect) <= 2e-3);
      }
    }
  }

  TEST_CASE("raycast is unchanged by rotating map and bearing a quarter turn") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> bearing(-kPi, kPi);
    for (int trial = 0; trial < 30; ++trial) {
      const GridMap g = random_map(gen, 24, 24, 0.1);
      GridMap r(24, 24, 0.1);
      // (x, y) -> (H - 1 - y, x) is a counter-clockwise quarter turn.
      for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 24; ++x) r.set({23 - y, x}, g.at({x, y}));
      const Vec2 o{1.13, 1.27};
      const Vec2 ro{2.4 - o.y, o.x};
      for (int k = 0; k < 10; ++k) {
        const double b = bearing(gen);
        const double d0 = raycast(g, o, b, 3.0).distance;
        const double d1 = raycast(r, ro, b + kPi / 2, 3.0).distance;
        CHECK(std::abs(d0 - d1) <= g.resolution());
      }
    }
  }

  TEST_CASE("ray cells form a 4-connected chain that excludes the origin") {
    const GridMap g(40, 40, 0.1);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> bearing(-kPi, kPi);
    for (int k = 0; k < 200; ++k) {
      const Vec2 o{2.03, 1.97};
      const auto cells = ray_cells(g, o, bearing(gen), 1.5);
      REQUIRE_FALSE(cells.empty());
      Cell prev = g.world_to_cell(o);
      for (Cell c : cells) {
        CHECK(std::abs(c.x - prev.x) + std::abs(c.y - prev.y) == 1);
        prev = c;
      }
    }
  }

  TEST_CASE("raycast rejects an origin outside the map") {
    const GridMap g(10, 10, 0.1);
    CHECK_THROWS_AS(raycast(g, {-0.1, 0.5}, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(raycast(g, {0.5, 1.0}, 0.0, 1.0), DomainError);
  }

  TEST_CASE("cell and world transforms invert on cell centers") {
    const GridMap g(37, 23, 0.05);
    for (int y = 0; y < g.height(); ++y)
      for (int x = 0; x < g.width(); ++x) CHECK(g.world_to_cell(g.cell_center({x, y})) == Cell{x, y});
  }

  TEST_CASE("a minimal document loads with defaults filled") {
    const auto rows = fixtures::walled_rows(10, 10);
    const auto doc = fixtures::scenario_json(rows, {fixtures::landmark_json("L", "sofa", true, 0.1, 0.1, 0.4, 0.3)},
                                             {fixtures::object_json("T", "book", 0.7, 0.7, true)}, 0.55, 0.55, 0.0,
                                             "book");
    const ScenarioSpec s = fixtures::load(doc);
    CHECK(s.hyperparams == HyperParams{});
    CHECK(s.vocabulary == Vocabulary{});
    CHECK(s.seed == 0);
    CHECK(s.map.occupied(s.map.world_to_cell({0.25, 0.25})));
    CHECK(s.target().id == "T");
  }

  TEST_CASE("a missing target phrase is a parse error") {
    auto doc = fixtures::scenario_json(fixtures::walled_rows(10, 10), nlohmann::json::array(),
                                       {fixtures::object_json("T", "book", 0.7, 0.7, true)}, 0.55, 0.55, 0.0, "book");
    doc.erase("target");
    try {
      fixtures::load(doc);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("target_phrase required") != std::string::npos);
    }
  }

  TEST_CASE("invariant violations are validation errors") {
    const auto rows = fixtures::walled_rows(10, 10);
    const auto obj = fixtures::object_json("T", "book", 0.7, 0.7, true);
    // Start inside the border wall.
    CHECK_THROWS_AS(fixtures::load(fixtures::scenario_json(rows, nlohmann::json::array(), {obj}, 0.05, 0.55, 0.0, "book")),
                    ValidationError);
    // Target phrase does not name the target object.
    CHECK_THROWS_AS(fixtures::load(fixtures::scenario_json(rows, nlohmann::json::array(), {obj}, 0.55, 0.55, 0.0, "cup")),
                    ValidationError);
    // No target object.
    auto other = fixtures::object_json("T", "book", 0.7, 0.7, false);
    CHECK_THROWS_AS(
        fixtures::load(fixtures::scenario_json(rows, nlohmann::json::array(), {other}, 0.55, 0.55, 0.0, "book")),
        ValidationError);
    // Start inside a landmark footprint.
    CHECK_THROWS_AS(fixtures::load(fixtures::scenario_json(
                        rows, {fixtures::landmark_json("L", "sofa", true, 0.4, 0.4, 0.7, 0.7)}, {obj}, 0.55, 0.55, 0.0,
                        "book")),
                    ValidationError);
  }

  TEST_CASE("unknown keys and mistyped fields name the field") {
    auto doc = fixtures::scenario_json(fixtures::walled_rows(10, 10), nlohmann::json::array(),
                                       {fixtures::object_json("T", "book", 0.7, 0.7, true)}, 0.55, 0.55, 0.0, "book");
    doc["hyperparams"] = {{"lambda_one", 2.0}};
    try {
      fixtures::load(doc);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("lambda_one") != std::string::npos);
    }
    doc["hyperparams"] = {{"lambda1", "two"}};
    try {
      fixtures::load(doc);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("lambda1") != std::string::npos);
    }
  }

  TEST_CASE("serialize then load reproduces the scenario") {
    const ScenarioSpec s = fixtures::golden();
    const std::string text = serialize_scenario(s);
    const ScenarioSpec back = load_scenario(text);
    CHECK(back == s);
    CHECK(serialize_scenario(back) == text);
  }
}
