#include "vsearch/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vsearch/errors.hpp"
#include "json_reader.hpp"

namespace vsearch {

using nlohmann::json;

namespace {

using detail::ObjectReader;


GridMap parse_map(const json& j) {
  ObjectReader r(j, "map");
  const double res = r.optional("resolution") ? r.number("resolution") : 0.1;
  const json& rows = r.required("rows");
  r.finish();
  if (!rows.is_array() || rows.empty()) throw ParseError("map.rows must be a non-empty array of strings");
  std::vector<std::string> lines;
  for (const auto& row : rows) lines.push_back(ObjectReader::as_string(row, "map.rows[]"));
  const std::size_t w = lines.front().size();
  if (w == 0) throw ParseError("map.rows must be non-empty strings");
  if (!(res > 0.0)) throw ValidationError("map.resolution must be positive");
  GridMap map(static_cast<int>(w), static_cast<int>(lines.size()), res);
  for (std::size_t y = 0; y < lines.size(); ++y) {
    if (lines[y].size() != w) throw ParseError("map.rows[" + std::to_string(y) + "] has inconsistent width");
    for (std::size_t x = 0; x < w; ++x) {
      const char ch = lines[y][x];
      if (ch == '#')
        map.set({static_cast<int>(x), static_cast<int>(y)}, CellState::Occupied);
      else if (ch != '.')
        throw ParseError("map.rows[" + std::to_string(y) + "] has invalid character '" + std::string(1, ch) + "'");
    }
  }
  return map;
}

Rect parse_rect(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Rect out{r.number("x_min"), r.number("y_min"), r.number("x_max"), r.number("y_max")};
  r.finish();
  return out;
}

LandmarkSpec parse_landmark(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  LandmarkSpec l;
  l.id = r.string("id");
  l.name = r.string("name");
  r.bool_opt("known", l.known);
  l.footprint = parse_rect(r.required("footprint"), r.field("footprint"));
  r.finish();
  return l;
}

ObjectSpec parse_object(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ObjectSpec o;
  o.id = r.string("id");
  o.name = r.string("name");
  const json& pos = r.required("position");
  if (!pos.is_array() || pos.size() != 2) throw ParseError(r.field("position") + " must be [x, y]");
  o.position = {ObjectReader::as_number(pos[0], r.field("position")),
                ObjectReader::as_number(pos[1], r.field("position"))};
  r.number_opt("radius", o.radius);
  r.bool_opt("is_target", o.is_target);
  r.finish();
  return o;
}

Pose parse_pose(const json& j) {
  ObjectReader r(j, "start");
  const double x = r.number("x");
  const double y = r.number("y");
  double theta = 0.0;
  r.number_opt("theta", theta);
  r.finish();
  if (!std::isfinite(theta)) throw ParseError("start.theta must be finite");
  return {x, y, theta};
}

void angle_opt(ObjectReader& r, const std::string& key, double& out) {
  r.number_opt(key, out);
  double deg = 0.0;
  if (r.has(key + "_deg")) {
    if (r.has(key)) throw ParseError(r.field(key) + " and " + r.field(key + "_deg") + " are exclusive");
    r.number_opt(key + "_deg", deg);
    out = deg_to_rad(deg);
  } else {
    r.optional(key + "_deg");
  }
}

HyperParams parse_hyperparams(const json& j) {
  ObjectReader r(j, "hyperparams");
  HyperParams hp;
  r.number_opt("lambda1", hp.lambda1);
  r.number_opt("lambda2", hp.lambda2);
  r.number_opt("t_c", hp.t_c);
  r.number_opt("t_u", hp.t_u);
  r.number_opt("m_t", hp.m_t);
  r.number_opt("temperature", hp.temperature);
  r.bool_opt("skip_low_cooccurrence", hp.skip_low_cooccurrence);
  r.bool_opt("skip_high_uncertainty", hp.skip_high_uncertainty);
  r.number_opt("cooccurrence_fallback", hp.cooccurrence_fallback);
  r.number_opt("fail_distance", hp.fail_distance);
  r.int_opt("scan_headings", hp.scan_headings);
  r.int_opt("pan_views", hp.pan_views);
  angle_opt(r, "pan_step", hp.pan_step);
  r.int_opt("step_interval", hp.step_interval);
  r.bool_opt("detect_en_route", hp.detect_en_route);
  r.bool_opt("relabel_known", hp.relabel_known);
  angle_opt(r, "fov", hp.fov);
  r.number_opt("cam_range", hp.cam_range);
  r.number_opt("lidar_range", hp.lidar_range);
  r.int_opt("lidar_rays", hp.lidar_rays);
  r.number_opt("sigma_emb", hp.sigma_emb);
  r.number_opt("sigma_mix", hp.sigma_mix);
  r.int_opt("mixtures", hp.mixtures);
  r.number_opt("p_miss", hp.p_miss);
  r.int_opt("clutter_per_scan", hp.clutter_per_scan);
  r.number_opt("view_radius", hp.view_radius);
  r.int_opt("view_dirs", hp.view_dirs);
  r.number_opt("robot_radius", hp.robot_radius);
  r.int_opt("min_frontier_cells", hp.min_frontier_cells);
  r.finish();
  return hp;
}

std::vector<std::string> parse_names(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(ObjectReader::as_string(v, path + "[]"));
  return out;
}

Vocabulary parse_vocabulary(const json& j) {
  ObjectReader r(j, "vocabulary");
  Vocabulary v;
  if (const json* k = r.optional("known_classes")) v.known_classes = parse_names(*k, "vocabulary.known_classes");
  if (const json* u = r.optional("unknown_landmarks"))
    v.unknown_landmarks = parse_names(*u, "vocabulary.unknown_landmarks");
  r.finish();
  return v;
}

json rect_json(const Rect& r) {
  return {{"x_min", r.x_min}, {"y_min", r.y_min}, {"x_max", r.x_max}, {"y_max", r.y_max}};
}

}  // namespace

HyperParams hyperparams_from_json(const nlohmann::json& j) { return parse_hyperparams(j); }
Vocabulary vocabulary_from_json(const nlohmann::json& j) { return parse_vocabulary(j); }

ScenarioSpec load_scenario(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  ObjectReader r(doc, "");
  ScenarioSpec s;
  s.map = parse_map(r.required("map"));

  const json& lms = r.required("landmarks");
  if (!lms.is_array()) throw ParseError("landmarks must be an array");
  for (std::size_t i = 0; i < lms.size(); ++i)
    s.landmarks.push_back(parse_landmark(lms[i], "landmarks[" + std::to_string(i) + "]"));

  const json& objs = r.required("objects");
  if (!objs.is_array()) throw ParseError("objects must be an array");
  for (std::size_t i = 0; i < objs.size(); ++i)
    s.objects.push_back(parse_object(objs[i], "objects[" + std::to_string(i) + "]"));

  s.start = parse_pose(r.required("start"));
  if (!doc.contains("target")) throw ParseError("target_phrase required");
  s.target_phrase = r.string("target");
  if (const json* hp = r.optional("hyperparams")) s.hyperparams = parse_hyperparams(*hp);
  if (const json* v = r.optional("vocabulary")) s.vocabulary = parse_vocabulary(*v);
  if (const json* seed = r.optional("seed")) {
    if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<std::int64_t>() >= 0))
      throw ParseError("seed must be a non-negative integer");
    s.seed = seed->get<std::uint64_t>();
  }
  r.finish();
  validate(s);
  return s;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioSpec& s) {
  json rows = json::array();
  for (int y = 0; y < s.map.height(); ++y) {
    std::string row(static_cast<std::size_t>(s.map.width()), '.');
    for (int x = 0; x < s.map.width(); ++x)
      if (s.map.occupied({x, y})) row[static_cast<std::size_t>(x)] = '#';
    rows.push_back(row);
  }
  json lms = json::array();
  for (const auto& l : s.landmarks)
    lms.push_back({{"id", l.id}, {"name", l.name}, {"known", l.known}, {"footprint", rect_json(l.footprint)}});
  json objs = json::array();
  for (const auto& o : s.objects)
    objs.push_back({{"id", o.id},
                    {"name", o.name},
                    {"position", {o.position.x, o.position.y}},
                    {"radius", o.radius},
                    {"is_target", o.is_target}});
  const HyperParams& hp = s.hyperparams;
  json hpj = {
      {"lambda1", hp.lambda1},
      {"lambda2", hp.lambda2},
      {"t_c", hp.t_c},
      {"t_u", hp.t_u},
      {"m_t", hp.m_t},
      {"temperature", hp.temperature},
      {"skip_low_cooccurrence", hp.skip_low_cooccurrence},
      {"skip_high_uncertainty", hp.skip_high_uncertainty},
      {"cooccurrence_fallback", hp.cooccurrence_fallback},
      {"fail_distance", hp.fail_distance},
      {"scan_headings", hp.scan_headings},
      {"pan_views", hp.pan_views},
      {"pan_step", hp.pan_step},
      {"step_interval", hp.step_interval},
      {"detect_en_route", hp.detect_en_route},
      {"relabel_known", hp.relabel_known},
      {"fov", hp.fov},
      {"cam_range", hp.cam_range},
      {"lidar_range", hp.lidar_range},
      {"lidar_rays", hp.lidar_rays},
      {"sigma_emb", hp.sigma_emb},
      {"sigma_mix", hp.sigma_mix},
      {"mixtures", hp.mixtures},
      {"p_miss", hp.p_miss},
      {"clutter_per_scan", hp.clutter_per_scan},
      {"view_radius", hp.view_radius},
      {"view_dirs", hp.view_dirs},
      {"robot_radius", hp.robot_radius},
      {"min_frontier_cells", hp.min_frontier_cells},
  };
  json doc = {
      {"map", {{"resolution", s.map.resolution()}, {"rows", rows}}},
      {"landmarks", lms},
      {"objects", objs},
      {"start", {{"x", s.start.x}, {"y", s.start.y}, {"theta", s.start.theta}}},
      {"target", s.target_phrase},
      {"hyperparams", hpj},
      {"vocabulary",
       {{"known_classes", s.vocabulary.known_classes}, {"unknown_landmarks", s.vocabulary.unknown_landmarks}}},
      {"seed", s.seed},
  };
  return doc.dump(2) + "\n";
}

}  // namespace vsearch
