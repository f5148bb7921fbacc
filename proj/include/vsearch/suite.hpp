#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vsearch/assets.hpp"
#include "vsearch/world.hpp"

namespace vsearch {

/// Inclusive integer or real range; a scalar in the params file sets lo = hi.
template <class T>
struct Range {
  T lo{};
  T hi{};
  friend bool operator==(const Range&, const Range&) = default;
};

struct SuiteParams {
  std::size_t count = 10;
  Range<int> rooms{1, 4};
  Range<int> landmarks{3, 8};
  Range<double> map_size{8.0, 14.0};  // side length, meters
  double resolution = 0.1;
  /// Target phrases drawn uniformly; empty means every entry of the generation table.
  std::vector<std::string> targets;
  /// Landmark-name weights for target placement. Empty means each landmark of the
  /// scenario is weighted by its co-occurrence score with the target.
  std::map<std::string, double> weights;
  /// Exponent applied to every placement weight before normalizing.
  double weight_power = 1.0;
  int distractors = 2;
  /// Walls the target in so that no free cell sees it.
  bool enclose_target = false;
  HyperParams hyperparams;
  Vocabulary vocabulary;
  int max_retries = 200;
};

/// Parses a suite-parameter document; throws ParseError or ValidationError.
SuiteParams parse_suite_params(std::string_view source);
SuiteParams load_suite_params(const std::filesystem::path& path);

/// Procedurally generated scenarios, scenario i seeded from mix_seed(seed, i).
/// Every scenario passes validation. Throws GenerationError naming the
/// constraint that could not be met.
std::vector<ScenarioSpec> generate_suite(const SuiteParams& params, std::uint64_t seed, const Assets& assets);

/// Footprint size (width along the wall, depth away from it) used for a landmark name.
std::pair<double, double> landmark_extent(std::string_view name);

}  // namespace vsearch
