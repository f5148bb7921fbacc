#include "vsearch/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsearch/errors.hpp"
#include "vsearch/semantic.hpp"

namespace vsearch {

using nlohmann::json;

namespace {

constexpr std::size_t kCalibrationSamplesPerClass = 200;
constexpr std::uint64_t kCalibrationStream = 0xca11b7a7e;
constexpr int kMaxCycles = 500;

json pose_json(const Pose& p) { return json::array({p.x, p.y, p.theta}); }
json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json viewpoint_json(const Viewpoint& v) {
  return {{"landmark", v.landmark_id},
          {"name", v.landmark_name},
          {"pose", pose_json(v.pose)},
          {"cooccur", v.cooccur},
          {"sem_uncert", v.sem_uncert}};
}

std::vector<std::string> needed_phrases(const ScenarioSpec& s) {
  std::vector<std::string> out{s.target_phrase};
  for (const auto& l : s.landmarks) out.push_back(l.name);
  for (const auto& o : s.objects) out.push_back(o.name);
  for (const auto& c : s.vocabulary.known_classes) out.push_back(c);
  for (const auto& u : s.vocabulary.unknown_landmarks) out.push_back(u);
  return out;
}

}  // namespace

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Scanning:
      return "scanning";
    case Phase::Visiting:
      return "visiting";
    case Phase::Exploring:
      return "exploring";
    case Phase::Done:
      return "done";
  }
  return "?";
}

std::vector<bool> oracle_confirm(std::span<const CandidatePatch> candidates, const ScenarioSpec& world) {
  const ObjectSpec& target = world.target();
  std::vector<bool> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto truth = sight_object(world, target, c.observed_from);
    out.push_back(truth && overlap_confirms(c.detection.bbox, truth->bbox));
  }
  return out;
}

std::optional<double> shortest_confirming_path(const ScenarioSpec& world) {
  const HyperParams& hp = world.hyperparams;
  const GridMap& map = world.map;
  const NavGrid nav(map, hp.robot_radius);
  const Cell start = map.world_to_cell(world.start.position());
  const DistanceField reach(nav, start);
  const ObjectSpec& target = world.target();

  const int r = static_cast<int>(std::ceil(hp.cam_range / map.resolution())) + 1;
  const Cell tc = map.world_to_cell(target.position);
  double best = std::numeric_limits<double>::infinity();
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const Cell c{tc.x + dx, tc.y + dy};
      if (!map.in_bounds(c) || !reach.reachable(c)) continue;
      const double d = reach.distance(c);
      if (d >= best) continue;
      const Vec2 from = c == start ? world.start.position() : map.cell_center(c);
      const double range = distance(from, target.position);
      if (range < 1e-9 || range > hp.cam_range) continue;
      if (object_visible(map, from, target, hp.cam_range)) best = d;
    }
  if (std::isinf(best)) return std::nullopt;
  return best;
}

Mission::Mission(const ScenarioSpec& scenario, MissionAssets assets, ConfirmFn confirm)
    : scenario_(&scenario), assets_(assets), confirm_(std::move(confirm)) {
  if (!assets_.words || !assets_.generations) throw DomainError("mission assets are incomplete");
  text_ = text_store_from_words(*assets_.words, needed_phrases(scenario));
  sensors_ = SensorModel::build(scenario, text_);

  const HyperParams& hp = scenario.hyperparams;
  if (hp.relabel_known && !sensors_.class_embeddings.empty()) {
    // Total uncertainty of known-class patches plays the role of the training set.
    std::vector<double> samples;
    for (std::size_t c = 0; c < sensors_.class_embeddings.size(); ++c)
      for (std::size_t i = 0; i < kCalibrationSamplesPerClass; ++i) {
        RngStream rng(mix_seed(mix_seed(scenario.seed, kCalibrationStream), c * kCalibrationSamplesPerClass + i));
        const EmbeddingVector patch = noisy_patch(sensors_.class_embeddings[c], hp.sigma_emb, rng);
        samples.push_back(
            total_uncertainty(synthesize_mixture(patch, sensors_.class_embeddings, hp.mixtures, hp.sigma_mix, rng)));
      }
    try {
      calibration_ = calibrate(samples);
    } catch (const CalibrationError&) {
      calibration_.reset();
    }
  }
}

EpisodeState Mission::begin() const {
  EpisodeState s{scenario_->start, BeliefMap(scenario_->map), {}, {}, {}, 0, std::nullopt, 0.0,
                 Phase::Scanning, scenario_->seed, 0, 0, {}, {}};
  s.trace.emit("start", {{"pose", pose_json(s.pose)},
                         {"target", scenario_->target_phrase},
                         {"seed", scenario_->seed},
                         {"relabel_calibrated", calibration_.has_value()}});
  return s;
}

CameraObservation Mission::observe(EpisodeState& state, double heading) const {
  RngStream rng(mix_seed(state.seed, state.observations++));
  const Pose camera(state.pose.x, state.pose.y, heading);
  CameraObservation obs = camera_observe(*scenario_, sensors_, camera, rng);
  if (calibration_) {
    for (auto& d : obs.detections) {
      if (d.label.is_unknown()) continue;
      d.label = relabel_unknown(d.label, total_uncertainty(d.mixture), *calibration_);
    }
  }
  json dets = json::array();
  for (const auto& d : obs.detections)
    dets.push_back({{"label", d.label.index()}, {"range", d.range}, {"bearing", d.bearing}});
  state.trace.emit("observe", {{"pose", pose_json(camera)}, {"phase", phase_name(state.phase)}, {"detections", dets}});
  return obs;
}

void Mission::match_target(EpisodeState& state, const CameraObservation& obs) const {
  const EmbeddingVector& target = text_.lookup(scenario_->target_phrase);
  for (const auto& d : obs.detections) {
    if (!d.label.is_unknown()) continue;
    const double score = matching_score(target, d.patch_embedding);
    if (!(score > scenario_->hyperparams.m_t)) continue;
    CandidatePatch c{d, score, project_detection(d, obs.pose), obs.pose};
    state.trace.emit("candidate", {{"index", state.candidates.size()},
                                   {"score", score},
                                   {"position", vec_json(c.position)},
                                   {"bbox", json::array({d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max})}});
    state.candidates.push_back(std::move(c));
  }
}

void Mission::register_landmarks(EpisodeState& state, const CameraObservation& obs) const {
  const HyperParams& hp = scenario_->hyperparams;
  const auto& vocab = scenario_->vocabulary;
  const double merge_radius = 2.0 * scenario_->map.resolution();

  for (const auto& d : obs.detections) {
    LandmarkEntry e;
    if (!d.label.is_unknown()) {
      e.name = vocab.known_classes[static_cast<std::size_t>(d.label.index())];
      e.known = true;
      e.sem_uncert = 0.0;
    } else {
      if (vocab.unknown_landmarks.empty()) continue;
      const NameMatch best = best_name_match(d.patch_embedding, vocab.unknown_landmarks, text_);
      if (!(best.score > hp.m_t)) continue;  // not a landmark we can name
      e.name = best.name;
      e.sem_uncert = semantic_uncertainty(
          landmark_probability(d.patch_embedding, vocab.unknown_landmarks, text_, hp.temperature));
    }
    e.position = project_detection(d, obs.pose);
    e.detection = d;

    auto dup = std::find_if(state.landmarks.begin(), state.landmarks.end(),
                            [&](const LandmarkEntry& x) { return distance(x.position, e.position) <= merge_radius; });
    if (dup != state.landmarks.end()) {
      const bool better = e.sem_uncert < dup->sem_uncert ||
                          (e.sem_uncert == dup->sem_uncert && e.known && !dup->known);
      if (!better) continue;
      e.id = dup->id;
      e.skipped = dup->skipped;
    } else {
      e.id = state.landmarks.size();
    }
    const CooccurrenceScore co =
        cooccurrence(scenario_->target_phrase, e.name, *assets_.generations, *assets_.words, hp.cooccurrence_fallback);
    e.cooccur = co.score;
    e.cooccur_fallback = co.fallback;
    state.trace.emit(dup != state.landmarks.end() ? "landmark_update" : "landmark",
                     {{"id", e.id},
                      {"name", e.name},
                      {"known", e.known},
                      {"position", vec_json(e.position)},
                      {"cooccur", e.cooccur},
                      {"cooccur_fallback", e.cooccur_fallback},
                      {"sem_uncert", e.sem_uncert}});
    if (dup != state.landmarks.end())
      *dup = std::move(e);
    else
      state.landmarks.push_back(std::move(e));
  }
}

void Mission::initial_scan(EpisodeState& state) const {
  const HyperParams& hp = scenario_->hyperparams;
  state.phase = Phase::Scanning;
  state.belief = lidar_update(std::move(state.belief), scenario_->map, state.pose, hp.lidar_rays, hp.lidar_range);
  for (int h = 0; h < hp.scan_headings; ++h) {
    const CameraObservation obs = observe(state, state.pose.theta + 2.0 * kPi * h / hp.scan_headings);
    register_landmarks(state, obs);
    match_target(state, obs);
  }
}

bool Mission::navigate(EpisodeState& state, Cell goal, std::optional<Pose> arrival) const {
  const HyperParams& hp = scenario_->hyperparams;
  const GridMap& map = scenario_->map;
  const Cell here = map.world_to_cell(state.pose.position());
  Path path;
  try {
    path = plan_path(NavGrid(state.belief, hp.robot_radius), here, goal);
  } catch (const NoPathError&) {
    return false;
  }
  for (std::size_t i = 1; i < path.cells.size(); ++i) {
    const Vec2 prev = i == 1 ? state.pose.position() : map.cell_center(path.cells[i - 1]);
    const Vec2 at = map.cell_center(path.cells[i]);
    state.pose = Pose(at.x, at.y, std::atan2(at.y - prev.y, at.x - prev.x));
    const bool last = i + 1 == path.cells.size();
    if (i % static_cast<std::size_t>(hp.step_interval) == 0 || last) {
      state.belief = lidar_update(std::move(state.belief), map, state.pose, hp.lidar_rays, hp.lidar_range);
      if (hp.detect_en_route && !last) match_target(state, observe(state, state.pose.theta));
    }
  }
  if (arrival) state.pose = *arrival;
  state.traveled += path.length;
  state.trace.emit("navigate", {{"goal", json::array({goal.x, goal.y})},
                                {"cells", path.cells.size()},
                                {"length", path.length},
                                {"traveled", state.traveled}});
  return true;
}

bool Mission::visit_waypoint(EpisodeState& state, const Viewpoint& vp) const {
  const HyperParams& hp = scenario_->hyperparams;
  state.phase = Phase::Visiting;
  const Cell goal = scenario_->map.world_to_cell(vp.pose.position());
  if (!navigate(state, goal, vp.pose)) {
    state.trace.emit("abandon", {{"landmark", vp.landmark_id}});
    return false;
  }
  state.visited.insert(vp.landmark_id);
  state.visit_order.push_back(vp.landmark_id);
  ++state.waypoints_visited;
  state.trace.emit("visit", {{"landmark", vp.landmark_id}, {"name", vp.landmark_name}});
  if (state.traveled > hp.fail_distance) return true;
  for (int k = 0; k < hp.pan_views; ++k) {
    // 0, +step, -step, +2 step, ...
    const int mag = (k + 1) / 2;
    const double offset = (k % 2 == 1 ? 1.0 : -1.0) * mag * hp.pan_step;
    match_target(state, observe(state, vp.pose.theta + offset));
  }
  return true;
}

bool Mission::confirm_pending(EpisodeState& state) const {
  if (state.confirmed) return true;
  while (state.confirmed_upto < state.candidates.size()) {
    const std::size_t i = state.confirmed_upto++;
    const CandidatePatch& c = state.candidates[i];
    const bool ok = confirm_ ? confirm_(c) : oracle_confirm(std::span(&c, 1), *scenario_).front();
    state.trace.emit("confirm", {{"index", i}, {"confirmed", ok}});
    if (ok) {
      state.confirmed = i;
      return true;
    }
  }
  return false;
}

std::vector<Viewpoint> Mission::candidate_viewpoints(const EpisodeState& state) const {
  const HyperParams& hp = scenario_->hyperparams;
  const NavGrid nav(state.belief, hp.robot_radius);
  const DistanceField reach(nav, scenario_->map.world_to_cell(state.pose.position()));
  std::vector<Viewpoint> out;
  for (const auto& e : state.landmarks) {
    if (e.skipped || state.visited.count(e.id)) continue;
    if (!state.belief.contains(e.position)) continue;
    auto vps = generate_viewpoints(state.belief, nav, reach, e.position, e.detection, hp.view_radius, hp.view_dirs);
    if (vps.empty()) continue;
    Viewpoint v = std::move(vps.front());
    v.landmark_id = e.id;
    v.landmark_name = e.name;
    v.cooccur = e.cooccur;
    v.sem_uncert = e.sem_uncert;
    out.push_back(std::move(v));
  }
  return out;
}

EpisodeResult Mission::run() const {
  const HyperParams& hp = scenario_->hyperparams;
  EpisodeState state = begin();
  std::string reason;
  auto over_budget = [&] { return state.traveled > hp.fail_distance; };

  for (int cycle = 0; reason.empty(); ++cycle) {
    if (cycle == kMaxCycles) {
      reason = "cycle_cap";
      break;
    }
    initial_scan(state);
    if (confirm_pending(state)) {
      reason = "confirmed";
      break;
    }

    state.phase = Phase::Visiting;
    const WaypointPlan plan = plan_waypoints(state.pose, candidate_viewpoints(state), hp);
    for (const auto& v : plan.skipped)
      for (auto& e : state.landmarks)
        if (e.id == v.landmark_id) e.skipped = true;
    json cands = json::array();
    for (const auto& v : plan.order) cands.push_back(viewpoint_json(v));
    json skipped = json::array();
    for (const auto& v : plan.skipped) skipped.push_back(viewpoint_json(v));
    state.trace.emit("plan", {{"pose", pose_json(state.pose)}, {"order", cands}, {"skipped", skipped}});

    for (const auto& vp : plan.order) {
      visit_waypoint(state, vp);
      if (over_budget()) {
        reason = "distance_budget";
        break;
      }
      if (confirm_pending(state)) {
        reason = "confirmed";
        break;
      }
    }
    if (!reason.empty()) break;

    state.phase = Phase::Exploring;
    const auto frontier = nearest_frontier(state.belief, state.pose, hp.robot_radius, hp.min_frontier_cells);
    if (!frontier) {
      reason = "exploration_exhausted";
      break;
    }
    state.trace.emit("frontier", {{"goal", json::array({frontier->goal.x, frontier->goal.y})},
                                  {"cells", frontier->cells.size()},
                                  {"distance", frontier->distance}});
    if (!navigate(state, frontier->goal, std::nullopt)) {
      reason = "frontier_unreachable";
      break;
    }
    if (over_budget()) reason = "distance_budget";
  }

  state.phase = Phase::Done;
  EpisodeResult r;
  r.success = reason == "confirmed";
  r.reason = reason;
  r.traveled = state.traveled;
  r.shortest = shortest_confirming_path(*scenario_);
  r.waypoints_visited = state.waypoints_visited;
  r.confirmed = state.confirmed;
  r.visit_order = state.visit_order;
  state.trace.emit("done", {{"success", r.success},
                            {"reason", reason},
                            {"traveled", r.traveled},
                            {"waypoints", r.waypoints_visited},
                            {"shortest", r.shortest ? json(*r.shortest) : json(nullptr)}});
  r.candidates = std::move(state.candidates);
  r.trace = std::move(state.trace);
  return r;
}

EpisodeResult run_episode(const ScenarioSpec& scenario, MissionAssets assets, ConfirmFn confirm) {
  return Mission(scenario, assets, std::move(confirm)).run();
}

}  // namespace vsearch
