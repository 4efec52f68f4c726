#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>

#include "nba/sandbox/world.hpp"

namespace nba::sandbox {

struct RegenerateOptions {
  std::filesystem::path config_dir;  // plans, prompts, models.json ...
  std::filesystem::path out_dir;     // receives geneturing.json, fixtures/, transcripts/, index.json
  std::uint64_t seed = kDefaultWorldSeed;
  // One worker: the ManualClock is shared, so parallel sleeps would add up
  // against every question's time budget.
  std::size_t workers = 1;
};

/// Rebuilds the committed offline data from the synthetic world: the
/// dataset, the embedding index, NCBI fixtures for every plan and for the
/// GeneGPT-style runner, and model transcripts for every method. All
/// traffic goes through the production clients against in-process mocks.
/// Replaces fixtures/ and transcripts/ under out_dir.
void regenerate(const RegenerateOptions& options, std::ostream& log);

}  // namespace nba::sandbox
