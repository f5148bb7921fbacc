#include "vsearch/knowledge.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vsearch/errors.hpp"

namespace vsearch {

namespace {

std::string slurp(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw AssetError(std::string("cannot open ") + what + " " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void WordVectorStore::insert(const std::string& word, std::vector<double> values) {
  if (values.empty()) throw DomainError("empty word vector for '" + word + "'");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("non-finite word vector for '" + word + "'");
  if (dim_ == 0) dim_ = values.size();
  if (values.size() != dim_) throw DomainError("word vector for '" + word + "' has wrong dimension");
  words_.insert_or_assign(word, std::move(values));
}

const std::vector<double>* WordVectorStore::find(std::string_view word) const {
  auto it = words_.find(word);
  return it == words_.end() ? nullptr : &it->second;
}

WordVectorStore WordVectorStore::parse(std::string_view text) {
  WordVectorStore store;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word) || word[0] == '#') continue;
    std::vector<double> values;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw AssetError("word vectors line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
    try {
      store.insert(word, std::move(values));
    } catch (const DomainError& e) {
      throw AssetError("word vectors line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return store;
}

WordVectorStore WordVectorStore::load(const std::filesystem::path& path) {
  return parse(slurp(path, "word-vector file"));
}

std::vector<std::string> tokenize(std::string_view phrase) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : phrase) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<double> phrase_vector(std::string_view phrase, const WordVectorStore& store) {
  std::vector<double> sum;
  std::size_t found = 0;
  for (const auto& w : tokenize(phrase)) {
    const auto* v = store.find(w);
    if (!v) continue;
    if (sum.empty()) sum.assign(v->size(), 0.0);
    for (std::size_t i = 0; i < v->size(); ++i) sum[i] += (*v)[i];
    ++found;
  }
  if (found == 0) throw LookupError("no word of '" + std::string(phrase) + "' is in the vocabulary");
  double sq = 0.0;
  for (double& x : sum) {
    x /= static_cast<double>(found);
    sq += x * x;
  }
  const double n = std::sqrt(sq);
  if (!(n > 0.0)) throw LookupError("phrase '" + std::string(phrase) + "' has a zero mean vector");
  for (double& x : sum) x /= n;
  return sum;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("cosine of vectors with different dimensions");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) throw DomainError("cosine of a zero vector");
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

void GenerationTable::insert(const std::string& target, std::vector<std::string> generations) {
  if (generations.empty() || generations.size() > kMaxGenerations)
    throw DomainError("generation list for '" + target + "' must hold 1 to 20 phrases");
  entries_.insert_or_assign(target, std::move(generations));
}

const std::vector<std::string>* GenerationTable::find(std::string_view target) const {
  auto it = entries_.find(target);
  return it == entries_.end() ? nullptr : &it->second;
}

GenerationTable GenerationTable::parse(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw AssetError(std::string("generation table is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw AssetError("generation table must be a JSON object");
  GenerationTable table;
  for (const auto& [target, list] : doc.items()) {
    if (!list.is_array()) throw AssetError("generations for '" + target + "' must be an array");
    std::vector<std::string> gens;
    for (const auto& g : list) {
      if (!g.is_string()) throw AssetError("generations for '" + target + "' must be strings");
      gens.push_back(g.get<std::string>());
    }
    try {
      table.insert(target, std::move(gens));
    } catch (const DomainError& e) {
      throw AssetError(e.what());
    }
  }
  return table;
}

GenerationTable GenerationTable::load(const std::filesystem::path& path) {
  return parse(slurp(path, "generation table"));
}

CooccurrenceScore cooccurrence(std::string_view target, std::string_view landmark, const GenerationTable& table,
                               const WordVectorStore& store, double fallback) {
  const std::vector<double> lv = phrase_vector(landmark, store);
  const auto* gens = table.find(target);
  if (!gens) return {fallback, true};
  bool any = false;
  double best = -1.0;
  for (const auto& g : *gens) {
    std::vector<double> gv;
    try {
      gv = phrase_vector(g, store);
    } catch (const LookupError&) {
      continue;
    }
    best = std::max(best, cosine(lv, gv));
    any = true;
  }
  if (!any) return {fallback, true};
  return {best, false};
}

TextEmbeddingStore text_store_from_words(const WordVectorStore& words, std::span<const std::string> phrases) {
  TextEmbeddingStore store;
  for (const auto& p : phrases)
    if (!store.contains(p)) store.insert(p, phrase_vector(p, words));
  return store;
}

}  // namespace vsearch
