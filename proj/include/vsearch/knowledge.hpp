#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsearch/embedding.hpp"

namespace vsearch {

/// word -> fixed-dimension real vector.
class WordVectorStore {
 public:
  void insert(const std::string& word, std::vector<double> values);
  /// nullptr when absent.
  const std::vector<double>* find(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }

  /// Lines "word v1 ... vD"; blank lines and '#' comments are skipped.
  static WordVectorStore parse(std::string_view text);
  static WordVectorStore load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::vector<double>, std::less<>> words_;
  std::size_t dim_ = 0;
};

/// Lower-cased tokens split on whitespace, '_' and '-'.
std::vector<std::string> tokenize(std::string_view phrase);

/// Unit-normalized mean of the in-vocabulary word vectors. Throws LookupError
/// when no word is in the vocabulary.
std::vector<double> phrase_vector(std::string_view phrase, const WordVectorStore& store);

double cosine(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kMaxGenerations = 20;

/// target phrase -> generated location phrases.
class GenerationTable {
 public:
  /// Throws DomainError unless 1 <= |generations| <= 20.
  void insert(const std::string& target, std::vector<std::string> generations);
  /// nullptr when the target is not listed.
  const std::vector<std::string>* find(std::string_view target) const;
  std::size_t size() const { return entries_.size(); }
  /// Listed target phrases in lexicographic order.
  std::vector<std::string> targets() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

  /// JSON object mapping each target phrase to an array of phrases.
  static GenerationTable parse(std::string_view text);
  static GenerationTable load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct CooccurrenceScore {
  double score = 0.0;
  bool fallback = false;  // target missing from the table
};

/// Maximum cosine between the landmark phrase and the target's generations.
/// Generations entirely outside the vocabulary are ignored; if none remain the
/// fallback applies. Throws LookupError for an out-of-vocabulary landmark.
CooccurrenceScore cooccurrence(std::string_view target, std::string_view landmark, const GenerationTable& table,
                               const WordVectorStore& store, double fallback = 0.5);

/// Text embeddings for the given phrases derived via phrase_vector, so text
/// and patch share one space.
TextEmbeddingStore text_store_from_words(const WordVectorStore& words, std::span<const std::string> phrases);

}  // namespace vsearch
