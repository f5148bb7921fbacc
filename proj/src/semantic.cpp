#include "vsearch/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vsearch/errors.hpp"
#include "vsearch/mln.hpp"

namespace vsearch {

double matching_score(const EmbeddingVector& text, const EmbeddingVector& patch) {
  if (!text.is_unit() || !patch.is_unit()) throw DomainError("matching_score expects unit-norm embeddings");
  return kScoreScale * dot(patch, text);
}

PromptSet PromptSet::standard() {
  static const char* const kCategories[] = {
      "background", "road scene", "house scene", "animal",    "fashion accessory", "transport",
      "traffic sign", "home appliance", "food",  "sport equipment", "furniture",   "office supplies",
      "electronics", "kitchenware"};
  PromptSet set;
  for (const char* c : kCategories) set.prompts.push_back(std::string("a photo of ") + c);
  set.background = 3;
  return set;
}

double clip_objectness(const EmbeddingVector& patch, const PromptSet& prompts, const TextEmbeddingStore& store,
                       ObjectnessMode mode) {
  if (prompts.prompts.size() < prompts.background || prompts.prompts.empty())
    throw DomainError("prompt set smaller than its background count");
  std::vector<double> sims;
  sims.reserve(prompts.prompts.size());
  for (const auto& p : prompts.prompts) sims.push_back(dot(patch, store.lookup(p)));

  std::vector<double> weights;
  if (mode == ObjectnessMode::Softmax) {
    for (double& s : sims) s *= kScoreScale;
    weights = softmax(sims);
  } else {
    const double total = std::accumulate(sims.begin(), sims.end(), 0.0);
    if (total == 0.0) throw DomainError("literal objectness ratio has a zero denominator");
    for (double s : sims) weights.push_back(s / total);
  }
  double background = 0.0;
  for (std::size_t i = 0; i < prompts.background; ++i) background += weights[i];
  return 1.0 - background;
}

std::size_t pseudo_annotation_count(std::size_t iter, std::size_t max_iter) {
  if (max_iter == 0) throw DomainError("max_iter must be positive");
  if (iter > max_iter) throw DomainError("iter exceeds max_iter");
  return 3 * iter / max_iter + 1;
}

std::vector<std::size_t> select_pseudo_annotations(std::span<const ObjectnessCandidate> candidates,
                                                   std::size_t iter, std::size_t max_iter) {
  const std::size_t k = pseudo_annotation_count(iter, max_iter);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (candidates[i].objectness > kObjectnessThreshold) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].objectness > candidates[b].objectness;
  });
  if (order.size() > k) order.resize(k);
  return order;
}

std::vector<double> landmark_probability(const EmbeddingVector& patch, std::span<const std::string> names,
                                         const TextEmbeddingStore& store, double temperature) {
  if (names.empty()) throw DomainError("landmark_probability needs at least one name");
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  std::vector<double> logits;
  logits.reserve(names.size());
  for (const auto& n : names) logits.push_back(matching_score(store.lookup(n), patch) / temperature);
  return softmax(logits);
}

double semantic_uncertainty(std::span<const double> prob) {
  if (prob.empty()) throw DomainError("empty distribution");
  double sum = 0.0;
  double h = 0.0;
  for (double p : prob) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("distribution has a negative or non-finite entry");
    sum += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("distribution does not sum to 1");
  return std::max(0.0, h);
}

NameMatch best_name_match(const EmbeddingVector& patch, std::span<const std::string> names,
                          const TextEmbeddingStore& store) {
  if (names.empty()) throw DomainError("no landmark names to match against");
  NameMatch best;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double s = matching_score(store.lookup(names[i]), patch);
    if (i == 0 || s > best.score) best = {i, names[i], s};
  }
  return best;
}

std::string identify_unknown_landmark(const DetectionRecord& det, std::span<const std::string> names,
                                      const TextEmbeddingStore& store) {
  if (!det.label.is_unknown()) throw DomainError("identify_unknown_landmark expects an Unknown-labeled detection");
  return best_name_match(det.patch_embedding, names, store).name;
}

}  // namespace vsearch
