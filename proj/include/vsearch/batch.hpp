#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vsearch/assets.hpp"
#include "vsearch/suite.hpp"
#include "vsearch/world.hpp"

namespace vsearch {

enum class Preset { Full, NearestPoint, NoCooccurrence, NoUncertainty, WebTable };

/// Throws ValidationError for an unrecognized name.
Preset parse_preset(std::string_view name);
const char* preset_name(Preset p);

/// Planner settings for the preset. Ablations that zero a cost term also turn
/// off the skip threshold tied to that term.
void apply_preset(HyperParams& hp, Preset p);

/// Generation table the preset scores co-occurrence against.
const GenerationTable& preset_table(const Assets& assets, Preset p);

struct RunConfig {
  std::vector<std::filesystem::path> scenarios;  // episode i runs scenarios[i % n]
  std::optional<SuiteParams> suite;              // used when scenarios is empty
  std::uint64_t suite_seed = 0;
  Preset preset = Preset::Full;
  std::size_t episodes = 1;
  std::uint64_t seed_base = 0;
  int parallelism = 1;
  std::filesystem::path output;  // directory for records and reports; empty writes nothing
};

/// A batch file may list several presets; each yields one RunConfig sharing
/// everything else. Relative paths resolve against the file's directory.
std::vector<RunConfig> load_batch_config(const std::filesystem::path& path);
std::vector<RunConfig> parse_batch_config(std::string_view source, const std::filesystem::path& base_dir);

struct EpisodeRecord {
  std::size_t episode = 0;
  std::string scenario;
  std::string preset;
  std::uint64_t seed = 0;
  bool success = false;
  std::string reason;
  double traveled = 0.0;
  std::optional<double> shortest;
  std::size_t waypoints = 0;
  std::vector<std::size_t> visit_order;

  nlohmann::ordered_json to_json() const;
  static EpisodeRecord from_json(const nlohmann::json& j);
  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

struct AggregateReport {
  std::string preset;
  std::size_t episodes = 0;
  double sr = 0.0;   // percent
  double spl = 0.0;  // [0, 1]
  double mean_waypoints = 0.0;
  std::vector<EpisodeRecord> records;
};

/// Scenarios the config refers to, loaded or generated up front.
std::vector<ScenarioSpec> materialize_scenarios(const RunConfig& config, const Assets& assets,
                                                std::vector<std::string>* labels = nullptr);

/// Runs config.episodes episodes on a pool of config.parallelism workers.
/// Episode i uses seed seed_base + i; records come back sorted by index.
AggregateReport run_batch(const RunConfig& config, const Assets& assets);

/// Aggregates records that share a preset (SR, SPL, mean waypoints).
AggregateReport aggregate(std::string preset, std::vector<EpisodeRecord> records);

/// Groups by preset in order of first appearance.
std::vector<AggregateReport> score_records(const std::vector<EpisodeRecord>& records);

std::string records_jsonl(const std::vector<EpisodeRecord>& records);
std::vector<EpisodeRecord> parse_records_jsonl(std::string_view text);

nlohmann::ordered_json report_json(const std::vector<AggregateReport>& reports);
/// Fixed-width table with one row per preset: method, SR (%), SPL, #.
std::string report_table(const std::vector<AggregateReport>& reports);

/// Writes records.jsonl, report.json and report.txt into dir.
void write_batch_outputs(const std::filesystem::path& dir, const std::vector<AggregateReport>& reports);

}  // namespace vsearch
