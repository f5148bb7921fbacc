#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vsearch/detection.hpp"
#include "vsearch/embedding.hpp"

namespace vsearch {

inline constexpr double kScoreScale = 100.0;
inline constexpr double kObjectnessThreshold = 0.9;

/// 100 * (patch . text). Throws DomainError unless both are unit-norm.
double matching_score(const EmbeddingVector& text, const EmbeddingVector& patch);

/// The fourteen "a photo of ..." prompts; the first three describe background.
struct PromptSet {
  std::vector<std::string> prompts;
  std::size_t background = 3;

  static PromptSet standard();
};

enum class ObjectnessMode {
  Softmax,       // softmax over 100 * cosine across all prompts
  LiteralRatio,  // raw dot products divided by their sum
};

/// One minus the normalized similarity mass on the background prompts.
/// Throws LookupError when a prompt has no embedding.
double clip_objectness(const EmbeddingVector& patch, const PromptSet& prompts, const TextEmbeddingStore& store,
                       ObjectnessMode mode = ObjectnessMode::Softmax);

/// floor(3 * iter / max_iter) + 1. Throws DomainError for max_iter == 0 or iter > max_iter.
std::size_t pseudo_annotation_count(std::size_t iter, std::size_t max_iter);

struct ObjectnessCandidate {
  EmbeddingVector patch;
  double objectness = 0.0;
};

/// Indices of the top-k candidates with objectness above 0.9, best first;
/// equal scores keep input order.
std::vector<std::size_t> select_pseudo_annotations(std::span<const ObjectnessCandidate> candidates,
                                                   std::size_t iter, std::size_t max_iter);

/// Temperature softmax of matching scores against each name.
std::vector<double> landmark_probability(const EmbeddingVector& patch, std::span<const std::string> names,
                                         const TextEmbeddingStore& store, double temperature);

/// Entropy (nats) of a probability vector. Throws DomainError for an invalid distribution.
double semantic_uncertainty(std::span<const double> prob);

struct NameMatch {
  std::size_t index = 0;
  std::string name;
  double score = 0.0;
};

/// Highest-scoring name; the first one wins ties.
NameMatch best_name_match(const EmbeddingVector& patch, std::span<const std::string> names,
                          const TextEmbeddingStore& store);

/// Names an Unknown-labeled detection by text-image matching.
std::string identify_unknown_landmark(const DetectionRecord& det, std::span<const std::string> names,
                                      const TextEmbeddingStore& store);

}  // namespace vsearch
