#include "vsearch/assets.hpp"

#include <cstdlib>

namespace vsearch {

std::filesystem::path asset_root() {
  if (const char* env = std::getenv(kAssetRootEnv); env && *env) return env;
  return VSEARCH_DEFAULT_ASSET_ROOT;
}

Assets load_assets(const std::filesystem::path& root) {
  Assets a;
  a.words = WordVectorStore::load(root / "wordvecs.txt");
  a.generations = GenerationTable::load(root / "generations.json");
  a.web_generations = GenerationTable::load(root / "generations_web.json");
  return a;
}

}  // namespace vsearch
