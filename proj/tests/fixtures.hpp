#pragma once
// Small builders shared by the unit tests.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsearch/assets.hpp"
#include "vsearch/scenario_io.hpp"
#include "vsearch/sensing.hpp"
#include "vsearch/world.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return VSEARCH_TEST_DATA_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const vsearch::Assets& assets() {
  static const vsearch::Assets a = vsearch::load_assets(VSEARCH_DEFAULT_ASSET_ROOT);
  return a;
}

/// Rows use '#' for occupied and '.' for free; row 0 is y = 0.
inline vsearch::GridMap grid_from_rows(const std::vector<std::string>& rows, double res = 0.1) {
  vsearch::GridMap g(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()), res);
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x)
      if (rows[y][x] == '#') g.set({x, y}, vsearch::CellState::Occupied);
  return g;
}

/// Same, for a belief map: '?' is Unknown.
inline vsearch::BeliefMap belief_from_rows(const std::vector<std::string>& rows, double res = 0.1) {
  vsearch::GridMap shape(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()), res);
  vsearch::BeliefMap b(shape);
  for (int y = 0; y < b.height(); ++y)
    for (int x = 0; x < b.width(); ++x) {
      const char ch = rows[y][x];
      b.set({x, y}, ch == '#' ? vsearch::CellState::Occupied
                    : ch == '.' ? vsearch::CellState::Free
                                : vsearch::CellState::Unknown);
    }
  return b;
}

/// Rectangle of wall around an open interior.
inline std::vector<std::string> walled_rows(int w, int h) {
  std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
  for (int x = 0; x < w; ++x) rows.front()[x] = rows.back()[x] = '#';
  for (auto& r : rows) r.front() = r.back() = '#';
  return rows;
}

/// A scenario document as JSON, to be tweaked before loading.
inline nlohmann::json scenario_json(const std::vector<std::string>& rows, nlohmann::json landmarks,
                                    nlohmann::json objects, double sx, double sy, double theta,
                                    const std::string& target) {
  return {{"map", {{"resolution", 0.1}, {"rows", rows}}},
          {"landmarks", std::move(landmarks)},
          {"objects", std::move(objects)},
          {"start", {{"x", sx}, {"y", sy}, {"theta", theta}}},
          {"target", target}};
}

inline nlohmann::json landmark_json(const std::string& id, const std::string& name, bool known, double x0, double y0,
                                    double x1, double y1) {
  return {{"id", id},
          {"name", name},
          {"known", known},
          {"footprint", {{"x_min", x0}, {"y_min", y0}, {"x_max", x1}, {"y_max", y1}}}};
}

inline nlohmann::json object_json(const std::string& id, const std::string& name, double x, double y,
                                  bool target) {
  return {{"id", id}, {"name", name}, {"position", {x, y}}, {"radius", 0.1}, {"is_target", target}};
}

inline vsearch::ScenarioSpec load(const nlohmann::json& doc) { return vsearch::load_scenario(doc.dump()); }

inline vsearch::ScenarioSpec golden() { return vsearch::load_scenario_file(data_dir() / "golden_scenario.json"); }

}  // namespace fixtures
