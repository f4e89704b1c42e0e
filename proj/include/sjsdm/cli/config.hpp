#pragma once

// Run configuration: a single JSON document whose sections mirror the
// library types. Unknown keys are rejected so that typos fail loudly.
//
//   {
//     "data":     {"dir": "...", "sites": "...", "covariates": "...", "response": "...",
//                  "kind": "continuous|binary", "coords": "auto|xy|lonlat", "min_presence": 5},
//     "model":    {"r": 5, "N": 150, "alpha": 1, ..., "variant": "spatial|independent"},
//     "mcmc":     {"n_iter": 2000, "burn_in": 1000, "thin": 1, "seed": 1, ...},
//     "chains":   1,
//     "holdout":  {"fraction": 0.2, "seed": 7} | {"site_ids": [...]},
//     "predict":  {"mode": "marginal|sampled"},
//     "evaluate": {"pairs": [["target", "conditioner"], ...]},
//     "simulate": {"n": 100, "S": 40, ...}
//   }

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sjsdm/model.hpp"
#include "sjsdm/predict.hpp"
#include "sjsdm/simulate.hpp"

namespace sjsdm::cli {

using Json = nlohmann::ordered_json;

enum class CoordKind { automatic, xy, lonlat };

struct DataPaths {
    std::filesystem::path sites;
    std::filesystem::path covariates;
    std::filesystem::path response;
    ResponseKind kind = ResponseKind::continuous;
    CoordKind coords = CoordKind::automatic;
    int min_presence = 5;
};

struct HoldoutSpec {
    std::optional<double> fraction;
    std::uint64_t seed = 1;
    std::vector<std::string> site_ids;

    [[nodiscard]] bool empty() const { return !fraction && site_ids.empty(); }
};

struct RunConfig {
    std::optional<DataPaths> data;
    Hyperparams hyper;
    int chains = 1;
    HoldoutSpec holdout;
    PredictOptions predict;
    std::vector<std::pair<std::string, std::string>> pairs;
    SimConfig sim;
};

/// Parses a config document; relative data paths resolve against `base`.
[[nodiscard]] RunConfig parse_config(const Json& doc, const std::filesystem::path& base);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved form (every default written out), suitable for re-loading.
[[nodiscard]] Json to_json(const RunConfig& cfg);

[[nodiscard]] Json hyper_to_json(const Hyperparams& h);
[[nodiscard]] Json sim_to_json(const SimConfig& s);

/// Points the three data files at dir/sites.csv, dir/covariates.csv, dir/response.csv.
[[nodiscard]] DataPaths data_in_dir(const std::filesystem::path& dir, DataPaths base = {});

[[nodiscard]] Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace sjsdm::cli
