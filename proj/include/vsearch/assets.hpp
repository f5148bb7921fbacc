#pragma once

#include <filesystem>

#include "vsearch/knowledge.hpp"

namespace vsearch {

inline constexpr const char* kAssetRootEnv = "VSEARCH_ASSET_ROOT";

/// Knowledge-prior assets shared read-only by every episode.
struct Assets {
  WordVectorStore words;
  GenerationTable generations;      // default co-occurrence table
  GenerationTable web_generations;  // alternative table for the web_table preset
};

/// $VSEARCH_ASSET_ROOT when set, else the source tree's assets/ directory.
std::filesystem::path asset_root();

/// Loads wordvecs.txt, generations.json and generations_web.json; throws AssetError.
Assets load_assets(const std::filesystem::path& root = asset_root());

}  // namespace vsearch
