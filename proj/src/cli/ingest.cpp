#include "sjsdm/cli/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "sjsdm/cli/csv.hpp"
#include "sjsdm/error.hpp"

namespace sjsdm::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kUnitKm = 100.0;

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::unordered_map<std::string, std::size_t> index_rows(const CsvTable& t, const std::string& file) {
    std::unordered_map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (!idx.emplace(t.rows[i][0], i).second)
            throw InvalidArgument(file + ": duplicate site id '" + t.rows[i][0] + "'");
    return idx;
}

}  // namespace

Ingested ingest(const DataPaths& paths) {
    Ingested out;
    Dataset& d = out.data;
    d.kind = paths.kind;

    const CsvTable sites = read_csv(paths.sites);
    if (sites.header.size() != 3) throw InvalidArgument("sites.csv must have columns id,x,y or id,lon,lat");
    const std::string h1 = lower(sites.header[1]);
    bool lonlat = paths.coords == CoordKind::lonlat;
    if (paths.coords == CoordKind::automatic) lonlat = h1 == "lon" || h1 == "longitude" || h1 == "long";
    out.lonlat = lonlat;
    std::vector<double> a, b;
    for (std::size_t i = 0; i < sites.rows.size(); ++i) {
        const std::string where = "sites.csv row " + std::to_string(i + 2);
        d.sites.ids.push_back(sites.rows[i][0]);
        a.push_back(parse_number(sites.rows[i][1], where));
        b.push_back(parse_number(sites.rows[i][2], where));
    }
    if (lonlat) {
        double lon0 = 0.0, lat0 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            lon0 += a[i];
            lat0 += b[i];
        }
        lon0 /= static_cast<double>(a.size());
        lat0 /= static_cast<double>(a.size());
        const double deg = std::numbers::pi / 180.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            d.sites.x.push_back(kEarthRadiusKm * (a[i] - lon0) * deg * std::cos(lat0 * deg) / kUnitKm);
            d.sites.y.push_back(kEarthRadiusKm * (b[i] - lat0) * deg / kUnitKm);
        }
    } else {
        d.sites.x = std::move(a);
        d.sites.y = std::move(b);
    }
    d.sites.validate();
    const auto n = static_cast<Index>(d.sites.size());

    const CsvTable cov = read_csv(paths.covariates);
    const CsvTable resp = read_csv(paths.response);
    const auto cov_idx = index_rows(cov, "covariates.csv");
    const auto resp_idx = index_rows(resp, "response.csv");
    if (cov.rows.size() != d.sites.size() || resp.rows.size() != d.sites.size())
        throw DimensionMismatch("sites, covariates and response files list different numbers of sites");

    const auto p = static_cast<Index>(cov.header.size()) - 1;
    if (p < 1) throw InvalidArgument("covariates.csv has no covariate columns");
    d.X.resize(n, p);
    Matrix Y(n, static_cast<Index>(resp.header.size()) - 1);
    if (Y.cols() < 1) throw InvalidArgument("response.csv has no species columns");
    for (Index i = 0; i < n; ++i) {
        const std::string& id = d.sites.ids[static_cast<std::size_t>(i)];
        const auto ci = cov_idx.find(id);
        const auto ri = resp_idx.find(id);
        if (ci == cov_idx.end()) throw InvalidArgument("covariates.csv has no row for site '" + id + "'");
        if (ri == resp_idx.end()) throw InvalidArgument("response.csv has no row for site '" + id + "'");
        for (Index c = 0; c < p; ++c)
            d.X(i, c) = parse_number(cov.rows[ci->second][static_cast<std::size_t>(c + 1)],
                                     "covariates.csv site '" + id + "' column '" +
                                         cov.header[static_cast<std::size_t>(c + 1)] + "'");
        for (Index l = 0; l < Y.cols(); ++l)
            Y(i, l) = parse_number(resp.rows[ri->second][static_cast<std::size_t>(l + 1)],
                                   "response.csv site '" + id + "' column '" +
                                       resp.header[static_cast<std::size_t>(l + 1)] + "'");
    }
    for (const auto& [id, row] : cov_idx)
        if (std::find(d.sites.ids.begin(), d.sites.ids.end(), id) == d.sites.ids.end())
            throw InvalidArgument("covariates.csv lists unknown site '" + id + "'");
    for (const auto& [id, row] : resp_idx)
        if (std::find(d.sites.ids.begin(), d.sites.ids.end(), id) == d.sites.ids.end())
            throw InvalidArgument("response.csv lists unknown site '" + id + "'");

    out.transform.names.assign(cov.header.begin() + 1, cov.header.end());
    for (Index c = 0; c < p; ++c) {
        const double mean = d.X.col(c).mean();
        const double sd = n > 1 ? std::sqrt((d.X.col(c).array() - mean).square().sum() / double(n - 1)) : 0.0;
        if (!(sd > 0.0))
            throw InvalidArgument("covariate '" + out.transform.names[static_cast<std::size_t>(c)] +
                                  "' is constant and cannot be standardized");
        d.X.col(c) = (d.X.col(c).array() - mean) / sd;
        out.transform.mean.push_back(mean);
        out.transform.sd.push_back(sd);
    }

    std::vector<Index> keep;
    for (Index l = 0; l < Y.cols(); ++l) {
        const std::string& name = resp.header[static_cast<std::size_t>(l + 1)];
        if (paths.kind == ResponseKind::binary) {
            for (Index i = 0; i < n; ++i)
                if (Y(i, l) != 0.0 && Y(i, l) != 1.0)
                    throw InvalidArgument("binary response for species '" + name + "' contains " +
                                          std::to_string(Y(i, l)));
            if (Y.col(l).sum() <= static_cast<double>(paths.min_presence)) {
                out.dropped_species.push_back(name);
                continue;
            }
        }
        keep.push_back(l);
    }
    if (keep.empty()) throw InvalidArgument("every species was dropped by the min_presence filter");
    d.Y.resize(n, static_cast<Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        d.Y.col(static_cast<Index>(j)) = Y.col(keep[j]);
        d.species_ids.push_back(resp.header[static_cast<std::size_t>(keep[j] + 1)]);
    }
    if (paths.kind == ResponseKind::binary) out.presences = static_cast<std::size_t>(d.Y.sum());
    d.validate(true);
    return out;
}

std::vector<bool> make_holdout(const Dataset& data, const HoldoutSpec& spec) {
    const std::size_t n = data.sites.size();
    if (spec.fraction) {
        RngStream rng(spec.seed, 0x401d07);
        return random_holdout(n, *spec.fraction, rng);
    }
    std::vector<bool> mask(spec.site_ids.empty() ? 0 : n, false);
    for (const auto& id : spec.site_ids) {
        const auto it = std::find(data.sites.ids.begin(), data.sites.ids.end(), id);
        if (it == data.sites.ids.end()) throw InvalidArgument("holdout lists unknown site '" + id + "'");
        mask[static_cast<std::size_t>(it - data.sites.ids.begin())] = true;
    }
    return mask;
}

Json transform_to_json(const CovariateTransform& t) {
    Json j = Json::array();
    for (std::size_t c = 0; c < t.names.size(); ++c)
        j.push_back({{"name", t.names[c]}, {"mean", t.mean[c]}, {"sd", t.sd[c]}});
    return j;
}

void write_dataset(const fs::path& dir, const Dataset& data) {
    fs::create_directories(dir);
    Matrix xy(static_cast<Index>(data.sites.size()), 2);
    for (std::size_t i = 0; i < data.sites.size(); ++i) {
        xy(static_cast<Index>(i), 0) = data.sites.x[i];
        xy(static_cast<Index>(i), 1) = data.sites.y[i];
    }
    write_matrix_csv(dir / "sites.csv", "id", data.sites.ids, {"x", "y"}, xy);
    std::vector<std::string> cov_names;
    for (Index c = 0; c < data.n_covariates(); ++c) cov_names.push_back("x" + std::to_string(c + 1));
    write_matrix_csv(dir / "covariates.csv", "id", data.sites.ids, cov_names, data.X);
    write_matrix_csv(dir / "response.csv", "id", data.sites.ids, data.species_ids, data.Y);
}

}  // namespace sjsdm::cli
