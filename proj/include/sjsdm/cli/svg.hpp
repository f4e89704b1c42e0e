#pragma once

// Standalone SVG figures: site maps coloured by a value, trace plots and
// box plots. No external dependencies; output is deterministic text.

#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace sjsdm::cli {

/// Points at (x, y) coloured on a blue-white-red scale symmetric about 0.
void svg_site_map(const std::filesystem::path& path, const std::string& title,
                  const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& values);

void svg_trace(const std::filesystem::path& path, const std::string& title,
               const std::vector<double>& values, double reference = std::numeric_limits<double>::quiet_NaN());

/// One box (quartiles, whiskers at 1.5 IQR) per named group.
void svg_boxplot(const std::filesystem::path& path, const std::string& title,
                 const std::vector<std::pair<std::string, std::vector<double>>>& groups);

}  // namespace sjsdm::cli
