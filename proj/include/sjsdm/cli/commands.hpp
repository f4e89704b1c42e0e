#pragma once

// The five CLI workflows. Each returns a small JSON record describing what
// was written; failures are thrown as sjsdm::Error.

#include <filesystem>
#include <optional>
#include <string>

#include "sjsdm/cli/config.hpp"

namespace sjsdm::cli {

struct Options {
    std::filesystem::path config;
    std::filesystem::path data;  ///< directory with sites/covariates/response CSVs
    std::filesystem::path out;
    std::filesystem::path fit;   ///< output directory of a previous fit
    std::optional<std::uint64_t> seed;
    std::optional<int> chains;
    std::optional<std::string> variant;
    std::optional<std::string> kind;
    std::optional<std::string> mode;
    std::optional<double> holdout_frac;
    std::optional<int> min_presence;
    std::optional<long> n_iter;
    std::optional<long> burn_in;
    std::vector<std::string> species;  ///< diagnose: species to map
    bool quiet = false;
};

/// Config file (if any) with command-line overrides applied.
[[nodiscard]] RunConfig resolve_config(const Options& opts);

Json cmd_simulate(const Options& opts);
Json cmd_fit(const Options& opts);
Json cmd_predict(const Options& opts);
Json cmd_evaluate(const Options& opts);
Json cmd_diagnose(const Options& opts);

/// Machine-readable error record for standard error.
[[nodiscard]] Json error_json(const std::exception& e);

}  // namespace sjsdm::cli
