#pragma once

// Persistence of retained draws: one directory per chain holding a
// little-endian float64 file per parameter block plus manifest.json.
// Within a file, draws follow one another; each draw is stored column-major.

#include <filesystem>

#include "sjsdm/model.hpp"

namespace sjsdm::cli {

void write_draws(const std::filesystem::path& dir, const PosteriorDraws& draws);
[[nodiscard]] PosteriorDraws read_draws(const std::filesystem::path& dir);

/// Reads every chain_* directory below `root` in numeric order and pools them.
[[nodiscard]] PosteriorDraws read_all_chains(const std::filesystem::path& root);

[[nodiscard]] std::filesystem::path chain_dir(const std::filesystem::path& root, int chain);

}  // namespace sjsdm::cli
