#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vsearch {

inline constexpr double kUnitNormTolerance = 1e-6;

/// Dense embedding in the shared text/image space.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}

  /// Scales to unit L2 norm. Throws DomainError for a zero or non-finite vector.
  static EmbeddingVector normalized(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double norm() const;
  bool is_unit() const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

double dot(const EmbeddingVector& a, const EmbeddingVector& b);

/// Phrase -> unit embedding (the text encoder).
class TextEmbeddingStore {
 public:
  /// Normalizes on insert; replaces an existing entry.
  void insert(const std::string& phrase, std::vector<double> values);
  bool contains(const std::string& phrase) const { return entries_.count(phrase) != 0; }
  /// Throws LookupError when the phrase is absent.
  const EmbeddingVector& lookup(const std::string& phrase) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t dim() const { return dim_; }

  /// Format: one entry per line, a double-quoted phrase followed by D
  /// whitespace-separated decimals. Blank lines and '#' comments are skipped.
  static TextEmbeddingStore parse(std::string_view text);
  static TextEmbeddingStore load(const std::filesystem::path& path);

 private:
  std::map<std::string, EmbeddingVector, std::less<>> entries_;
  std::size_t dim_ = 0;
};

}  // namespace vsearch
