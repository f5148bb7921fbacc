#include "vsearch/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "vsearch/errors.hpp"
#include "vsearch/semantic.hpp"

namespace vsearch {

BeliefMap lidar_update(BeliefMap belief, const GridMap& world, const Pose& pose, int rays, double max_range) {
  if (!belief.same_shape(world)) throw DomainError("belief and world maps differ in shape");
  if (!world.contains(pose.position())) throw DomainError("lidar pose outside map");
  if (rays < 1) throw DomainError("lidar needs at least one ray");
  const Cell origin = world.world_to_cell(pose.position());
  if (world.at(origin) != CellState::Occupied) belief.set(origin, CellState::Free);
  for (int r = 0; r < rays; ++r) {
    const double bearing = pose.theta + 2.0 * kPi * r / rays;
    for (Cell c : ray_cells(world, pose.position(), bearing, max_range)) {
      if (world.occupied(c)) {
        belief.set(c, CellState::Occupied);
        break;
      }
      belief.set(c, CellState::Free);
    }
  }
  return belief;
}

SensorModel SensorModel::build(const ScenarioSpec& s, const TextEmbeddingStore& text) {
  SensorModel m;
  const auto& classes = s.vocabulary.known_classes;
  for (const auto& c : classes) m.class_embeddings.push_back(text.lookup(c));
  for (const auto& l : s.landmarks) {
    m.landmark_embeddings.push_back(text.lookup(l.name));
    int cls = -1;
    if (l.known)
      for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == l.name) cls = static_cast<int>(i);
    m.landmark_class.push_back(cls);
  }
  for (const auto& o : s.objects) m.object_embeddings.push_back(text.lookup(o.name));
  return m;
}

BBox project_bbox(double bearing, double range, double radius, double fov) {
  if (!(range > 0.0) || !(fov > 0.0)) throw DomainError("projection needs positive range and fov");
  const double u = (0.5 - bearing / fov) * kImageWidth;
  const double w = std::clamp(2.0 * std::atan(radius / range) / fov * kImageWidth, 4.0, kImageWidth);
  BBox b;
  b.x_min = std::max(0.0, u - 0.5 * w);
  b.x_max = std::min(kImageWidth, u + 0.5 * w);
  // Keep a sliver on screen when the center sits on the image edge.
  if (b.x_max - b.x_min < 1.0) {
    if (b.x_min <= 0.0) b.x_max = 1.0;
    if (b.x_max >= kImageWidth) b.x_min = kImageWidth - 1.0;
  }
  b.y_min = std::max(0.0, 0.5 * kImageHeight - 0.5 * w);
  b.y_max = std::min(kImageHeight, 0.5 * kImageHeight + 0.5 * w);
  return b;
}

bool landmark_visible(const GridMap& map, Vec2 from, const LandmarkSpec& landmark, double max_range) {
  const Vec2 c = landmark.footprint.center();
  const double d = distance(c, from);
  if (d > max_range) return false;
  const double bearing = std::atan2(c.y - from.y, c.x - from.x);
  for (Cell cell : ray_cells(map, from, bearing, d)) {
    if (!map.occupied(cell)) continue;
    return landmark.footprint.contains(map.cell_center(cell));
  }
  return true;
}

bool object_visible(const GridMap& map, Vec2 from, const ObjectSpec& object, double max_range) {
  const double d = distance(object.position, from);
  if (d > max_range) return false;
  const double reach = object.radius + 0.5 * std::numbers::sqrt2 * map.resolution();
  const double bearing = std::atan2(object.position.y - from.y, object.position.x - from.x);
  for (Cell cell : ray_cells(map, from, bearing, d)) {
    if (!map.occupied(cell)) continue;
    return distance(map.cell_center(cell), object.position) <= reach;
  }
  return true;
}

namespace {

std::optional<Sighting> sight(Vec2 center, double radius, const Pose& pose, const HyperParams& hp) {
  const Vec2 rel = center - pose.position();
  const double range = rel.norm();
  if (range > hp.cam_range || range < 1e-9) return std::nullopt;
  const double bearing = normalize_angle(std::atan2(rel.y, rel.x) - pose.theta);
  if (std::abs(bearing) > 0.5 * hp.fov) return std::nullopt;
  return Sighting{range, bearing, project_bbox(bearing, range, radius, hp.fov)};
}

}  // namespace

std::optional<Sighting> sight_landmark(const ScenarioSpec& s, const LandmarkSpec& l, const Pose& pose) {
  auto out = sight(l.footprint.center(), l.apparent_radius(), pose, s.hyperparams);
  if (out && !landmark_visible(s.map, pose.position(), l, s.hyperparams.cam_range)) return std::nullopt;
  return out;
}

std::optional<Sighting> sight_object(const ScenarioSpec& s, const ObjectSpec& o, const Pose& pose) {
  auto out = sight(o.position, o.radius, pose, s.hyperparams);
  if (out && !object_visible(s.map, pose.position(), o, s.hyperparams.cam_range)) return std::nullopt;
  return out;
}

EmbeddingVector noisy_patch(const EmbeddingVector& canonical, double sigma, RngStream& rng) {
  if (sigma == 0.0) return canonical;
  std::vector<double> v = canonical.values();
  for (double& x : v) x += sigma * rng.normal();
  return EmbeddingVector::normalized(std::move(v));
}

MixtureOutput synthesize_mixture(const EmbeddingVector& patch, const std::vector<EmbeddingVector>& class_embeddings,
                                 int mixtures, double sigma_mix, RngStream& rng) {
  std::vector<double> base;
  base.reserve(class_embeddings.size() + 2);
  for (const auto& t : class_embeddings) base.push_back(kScoreScale * dot(patch, t));
  base.push_back(0.0);  // background
  base.push_back(0.0);  // unknown
  std::vector<std::vector<double>> logits(static_cast<std::size_t>(mixtures), base);
  std::vector<double> scores(static_cast<std::size_t>(mixtures), 0.0);
  for (int j = 0; j < mixtures; ++j) {
    for (double& z : logits[static_cast<std::size_t>(j)]) z += sigma_mix * rng.normal();
    scores[static_cast<std::size_t>(j)] = sigma_mix * rng.normal();
  }
  return MixtureOutput::from_logits(scores, logits);
}

CameraObservation camera_observe(const ScenarioSpec& s, const SensorModel& model, const Pose& pose, RngStream& rng) {
  if (!s.map.contains(pose.position())) throw DomainError("camera pose outside map");
  const HyperParams& hp = s.hyperparams;
  CameraObservation obs{pose, {}};

  auto emit = [&](const std::string& id, ClassLabel label, const Sighting& sg, const EmbeddingVector& canonical) {
    DetectionRecord d;
    d.source_object = id;
    d.label = label;
    d.bbox = sg.bbox;
    d.range = sg.range;
    d.bearing = sg.bearing;
    d.patch_embedding = noisy_patch(canonical, hp.sigma_emb, rng);
    d.mixture = synthesize_mixture(d.patch_embedding, model.class_embeddings, hp.mixtures, hp.sigma_mix, rng);
    obs.detections.push_back(std::move(d));
  };
  auto missed = [&] { return hp.p_miss > 0.0 && rng.uniform() < hp.p_miss; };

  for (std::size_t i = 0; i < s.landmarks.size(); ++i) {
    const auto& l = s.landmarks[i];
    auto sg = sight_landmark(s, l, pose);
    if (!sg || missed()) continue;
    const int cls = model.landmark_class[i];
    emit(l.id, cls >= 0 ? ClassLabel::known(cls) : ClassLabel::unknown(), *sg, model.landmark_embeddings[i]);
  }
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    const auto& o = s.objects[i];
    auto sg = sight_object(s, o, pose);
    if (!sg || missed()) continue;
    emit(o.id, ClassLabel::unknown(), *sg, model.object_embeddings[i]);
  }
  for (int k = 0; k < hp.clutter_per_scan; ++k) {
    const std::size_t dim = model.class_embeddings.empty() ? model.object_embeddings.front().dim()
                                                           : model.class_embeddings.front().dim();
    std::vector<double> raw(dim);
    for (double& x : raw) x = rng.normal();
    const double bearing = rng.uniform(-0.5 * hp.fov, 0.5 * hp.fov);
    const double range = rng.uniform(0.3, hp.cam_range);
    const double radius = rng.uniform(0.05, 0.5);
    Sighting sg{range, bearing, project_bbox(bearing, range, radius, hp.fov)};
    DetectionRecord d;
    d.label = ClassLabel::unknown();
    d.bbox = sg.bbox;
    d.range = range;
    d.bearing = bearing;
    d.patch_embedding = EmbeddingVector::normalized(std::move(raw));
    d.mixture = synthesize_mixture(d.patch_embedding, model.class_embeddings, hp.mixtures, hp.sigma_mix, rng);
    obs.detections.push_back(std::move(d));
  }
  return obs;
}

Vec2 project_detection(const DetectionRecord& det, const Pose& pose) {
  const double a = pose.theta + det.bearing;
  return {pose.x + det.range * std::cos(a), pose.y + det.range * std::sin(a)};
}

}  // namespace vsearch
