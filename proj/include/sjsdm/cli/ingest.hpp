#pragma once

// CSV ingestion into a Dataset and the matching writers.
//
// sites.csv       id,x,y    or id,lon,lat (degrees)
// covariates.csv  id,<p covariate columns>
// response.csv    id,<S species columns>
//
// Rows are matched by site id and ordered as in sites.csv. Lon/lat are
// projected equirectangularly about their centroid; all coordinates end up
// in units of 100 km. Covariates are standardized and the transform kept.

#include <filesystem>
#include <string>
#include <vector>

#include "sjsdm/cli/config.hpp"
#include "sjsdm/model.hpp"

namespace sjsdm::cli {

struct CovariateTransform {
    std::vector<std::string> names;
    std::vector<double> mean;
    std::vector<double> sd;
};

struct Ingested {
    Dataset data;
    CovariateTransform transform;
    std::vector<std::string> dropped_species;
    bool lonlat = false;
    std::size_t presences = 0;  ///< binary only, after filtering
};

[[nodiscard]] Ingested ingest(const DataPaths& paths);

/// Holdout mask from a fraction (seeded) or an explicit id list.
[[nodiscard]] std::vector<bool> make_holdout(const Dataset& data, const HoldoutSpec& spec);

[[nodiscard]] Json transform_to_json(const CovariateTransform& t);

/// Writes sites.csv, covariates.csv and response.csv (x/y coordinates).
void write_dataset(const std::filesystem::path& dir, const Dataset& data);

}  // namespace sjsdm::cli
