// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "nl2sva/config.hpp"

namespace nl2sva {

struct SeedReport {
  std::string store_dir;
  std::string mock_dir;
  std::size_t document_count = 0;
  std::size_t chunk_count = 0;
  std::size_t fixture_count = 0;
};

/// Builds the offline demo collateral: chunks the bundled documentation
/// corpus into config.store_dir (dynamic split, fallback embeddings) and
/// installs a scripted mock exchange for every record of the bundled dataset
/// under config.mock_dir, covering the llm and ragsvag modes including the
/// rechecking rounds. Idempotent and fully deterministic.
SeedReport seed_demo(const AppConfig& config, const std::string& fixtures_root);

} // namespace nl2sva
