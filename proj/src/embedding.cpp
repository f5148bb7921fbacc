#include "vsearch/embedding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vsearch/errors.hpp"

namespace vsearch {

EmbeddingVector EmbeddingVector::normalized(std::vector<double> values) {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  const double n = std::sqrt(sq);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite vector");
  for (double& v : values) v /= n;
  return EmbeddingVector(std::move(values));
}

double EmbeddingVector::norm() const {
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

bool EmbeddingVector::is_unit() const {
  return !values_.empty() && std::abs(norm() - 1.0) <= kUnitNormTolerance;
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw DomainError("embedding dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

void TextEmbeddingStore::insert(const std::string& phrase, std::vector<double> values) {
  if (values.empty()) throw DomainError("empty embedding for '" + phrase + "'");
  if (dim_ == 0) dim_ = values.size();
  if (values.size() != dim_) throw DomainError("embedding for '" + phrase + "' has wrong dimension");
  entries_.insert_or_assign(phrase, EmbeddingVector::normalized(std::move(values)));
}

const EmbeddingVector& TextEmbeddingStore::lookup(const std::string& phrase) const {
  auto it = entries_.find(phrase);
  if (it == entries_.end()) throw LookupError("no text embedding for '" + phrase + "'");
  return it->second;
}

TextEmbeddingStore TextEmbeddingStore::parse(std::string_view text) {
  TextEmbeddingStore store;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto where = [&] { return "embedding store line " + std::to_string(lineno); };
    if (line[first] != '"') throw AssetError(where() + ": phrase must be double-quoted");
    const auto close = line.find('"', first + 1);
    if (close == std::string::npos) throw AssetError(where() + ": unterminated phrase");
    std::string phrase = line.substr(first + 1, close - first - 1);
    std::istringstream nums(line.substr(close + 1));
    std::vector<double> values;
    std::string tok;
    while (nums >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw AssetError(where() + ": bad number '" + tok + "'");
      }
    }
    try {
      store.insert(phrase, std::move(values));
    } catch (const DomainError& e) {
      throw AssetError(where() + ": " + e.what());
    }
  }
  return store;
}

TextEmbeddingStore TextEmbeddingStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw AssetError("cannot open embedding store " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace vsearch
