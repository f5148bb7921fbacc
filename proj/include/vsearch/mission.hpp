#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vsearch/knowledge.hpp"
#include "vsearch/metrics.hpp"
#include "vsearch/mln.hpp"
#include "vsearch/planning.hpp"
#include "vsearch/sensing.hpp"
#include "vsearch/trace.hpp"
#include "vsearch/world.hpp"

namespace vsearch {

enum class Phase { Scanning, Visiting, Exploring, Done };

const char* phase_name(Phase p);

/// A patch matched to the target phrase above m_t.
struct CandidatePatch {
  DetectionRecord detection;
  double score = 0.0;
  Vec2 position;
  Pose observed_from;  // camera pose of the observation
};

/// One entry of the robot's landmark registry.
struct LandmarkEntry {
  std::size_t id = 0;  // discovery order
  std::string name;
  bool known = false;
  Vec2 position;
  double cooccur = 0.0;
  bool cooccur_fallback = false;
  double sem_uncert = 0.0;
  DetectionRecord detection;
  bool skipped = false;
};

struct EpisodeState {
  Pose pose;
  BeliefMap belief;
  std::vector<LandmarkEntry> landmarks;
  std::set<std::size_t> visited;
  std::vector<CandidatePatch> candidates;
  std::size_t confirmed_upto = 0;  // candidates[0, confirmed_upto) were already asked about
  std::optional<std::size_t> confirmed;
  double traveled = 0.0;
  Phase phase = Phase::Scanning;
  std::uint64_t seed = 0;
  std::uint64_t observations = 0;  // camera calls so far; keys the per-call rng stream
  std::size_t waypoints_visited = 0;
  std::vector<std::size_t> visit_order;
  Trace trace;
};

struct EpisodeResult {
  bool success = false;
  std::string reason;
  double traveled = 0.0;
  std::optional<double> shortest;  // absent when no cell can confirm the target
  std::size_t waypoints_visited = 0;
  std::vector<CandidatePatch> candidates;
  std::optional<std::size_t> confirmed;
  std::vector<std::size_t> visit_order;
  Trace trace;

  EpisodeMetrics metrics() const { return {success, traveled, shortest.value_or(0.0), waypoints_visited}; }
};

/// Decides whether a candidate shows the target; defaults to the IoU/IoA oracle.
using ConfirmFn = std::function<bool(const CandidatePatch&)>;

/// Shared read-only inputs for one episode.
struct MissionAssets {
  const WordVectorStore* words = nullptr;
  const GenerationTable* generations = nullptr;
};

/// Automated stand-in for the human query: a candidate is confirmed when its
/// box overlaps the ground-truth target box re-projected from the same camera
/// pose with IoU > 0.3 or IoA > 0.5.
std::vector<bool> oracle_confirm(std::span<const CandidatePatch> candidates, const ScenarioSpec& world);

/// Shortest ground-truth path from the start to any cell that sees the target.
std::optional<double> shortest_confirming_path(const ScenarioSpec& world);

/// One search episode: scan, plan, visit, confirm, explore.
class Mission {
 public:
  /// Throws LookupError when a scenario phrase is out of vocabulary.
  Mission(const ScenarioSpec& scenario, MissionAssets assets, ConfirmFn confirm = {});

  EpisodeState begin() const;
  void initial_scan(EpisodeState& state) const;
  /// Navigates to the viewpoint and looks around; false when no path exists.
  bool visit_waypoint(EpisodeState& state, const Viewpoint& vp) const;
  /// Asks about every candidate not yet asked; true once one is confirmed.
  bool confirm_pending(EpisodeState& state) const;
  /// Fresh viewpoints for registry entries not yet visited or skipped.
  std::vector<Viewpoint> candidate_viewpoints(const EpisodeState& state) const;
  EpisodeResult run() const;

  const TextEmbeddingStore& text() const { return text_; }
  const std::optional<UncertaintyStats>& calibration() const { return calibration_; }

 private:
  CameraObservation observe(EpisodeState& state, double heading) const;
  void match_target(EpisodeState& state, const CameraObservation& obs) const;
  void register_landmarks(EpisodeState& state, const CameraObservation& obs) const;
  bool navigate(EpisodeState& state, Cell goal, std::optional<Pose> arrival) const;

  const ScenarioSpec* scenario_;
  MissionAssets assets_;
  ConfirmFn confirm_;
  TextEmbeddingStore text_;
  SensorModel sensors_;
  std::optional<UncertaintyStats> calibration_;
};

/// Convenience wrapper around Mission::run.
EpisodeResult run_episode(const ScenarioSpec& scenario, MissionAssets assets, ConfirmFn confirm = {});

}  // namespace vsearch
