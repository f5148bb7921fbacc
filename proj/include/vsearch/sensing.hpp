#pragma once

#include <optional>
#include <vector>

#include "vsearch/detection.hpp"
#include "vsearch/embedding.hpp"
#include "vsearch/rng.hpp"
#include "vsearch/world.hpp"

namespace vsearch {

/// Robot-side occupancy estimate; starts all Unknown.
class BeliefMap : public OccupancyGrid {
 public:
  explicit BeliefMap(const OccupancyGrid& shape)
      : OccupancyGrid(shape.width(), shape.height(), shape.resolution(), CellState::Unknown) {}
  friend bool operator==(const BeliefMap&, const BeliefMap&) = default;
};

/// Casts `rays` evenly spaced rays from pose: traversed cells become Free,
/// the first Occupied cell becomes Occupied. Known cells never revert.
/// Throws DomainError when the pose is outside the map.
BeliefMap lidar_update(BeliefMap belief, const GridMap& world, const Pose& pose, int rays, double max_range);

/// Canonical embeddings of every scenario entity plus the known-class text
/// embeddings used for mixture synthesis.
struct SensorModel {
  std::vector<EmbeddingVector> landmark_embeddings;  // parallel to scenario.landmarks
  std::vector<int> landmark_class;                   // known-class index or -1
  std::vector<EmbeddingVector> object_embeddings;    // parallel to scenario.objects
  std::vector<EmbeddingVector> class_embeddings;     // parallel to vocabulary.known_classes

  static SensorModel build(const ScenarioSpec& scenario, const TextEmbeddingStore& text);
};

struct CameraObservation {
  Pose pose;
  std::vector<DetectionRecord> detections;
};

/// Square box from the angular projection model: center column linear in
/// bearing across the FOV, width 2 atan(radius / range) / fov * W clamped to [4, W].
BBox project_bbox(double bearing, double range, double radius, double fov);

/// True when nothing but the entity itself blocks the ray to its center.
bool landmark_visible(const GridMap& map, Vec2 from, const LandmarkSpec& landmark, double max_range);
bool object_visible(const GridMap& map, Vec2 from, const ObjectSpec& object, double max_range);

/// Range, bearing (relative to pose.theta) and apparent box of an entity
/// center when it is inside the camera cone and unoccluded.
struct Sighting {
  double range = 0.0;
  double bearing = 0.0;
  BBox bbox;
};
std::optional<Sighting> sight_landmark(const ScenarioSpec& s, const LandmarkSpec& l, const Pose& pose);
std::optional<Sighting> sight_object(const ScenarioSpec& s, const ObjectSpec& o, const Pose& pose);

/// Mixture head output: logits 100 * (patch . class text) for each known
/// class plus zero background and unknown logits, each perturbed by
/// sigma_mix noise; mixture weights are the softmax of sigma_mix noise.
MixtureOutput synthesize_mixture(const EmbeddingVector& patch, const std::vector<EmbeddingVector>& class_embeddings,
                                 int mixtures, double sigma_mix, RngStream& rng);

/// Patch embedding = normalize(canonical + sigma * N(0, I)).
EmbeddingVector noisy_patch(const EmbeddingVector& canonical, double sigma, RngStream& rng);

/// Synthesizes the open-set detector output for every visible landmark and
/// object (landmarks first, scenario order), then clutter.
CameraObservation camera_observe(const ScenarioSpec& scenario, const SensorModel& model, const Pose& pose,
                                 RngStream& rng);

/// World position of a detection seen from pose.
Vec2 project_detection(const DetectionRecord& det, const Pose& pose);

}  // namespace vsearch
