#include "sjsdm/cli/config.hpp"

#include <fstream>
#include <set>

#include "sjsdm/error.hpp"

namespace sjsdm::cli {

namespace fs = std::filesystem;

namespace {

void check_keys(const Json& obj, const std::string& section, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw InvalidArgument("config section '" + section + "' must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw InvalidArgument("unknown key '" + key + "' in config section '" + section + "'");
}

template <class T>
void read_if(const Json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
    }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
    return p.is_absolute() ? p : fs::absolute(base / p).lexically_normal();
}

std::string coord_name(CoordKind c) {
    switch (c) {
        case CoordKind::xy: return "xy";
        case CoordKind::lonlat: return "lonlat";
        case CoordKind::automatic: break;
    }
    return "auto";
}

CoordKind parse_coord(const std::string& s) {
    if (s == "auto") return CoordKind::automatic;
    if (s == "xy") return CoordKind::xy;
    if (s == "lonlat") return CoordKind::lonlat;
    throw InvalidArgument("unknown coordinate kind '" + s + "' (expected auto|xy|lonlat)");
}

StickVariant parse_stick(const std::string& s) {
    if (s == "printed") return StickVariant::printed;
    if (s == "standard") return StickVariant::standard;
    throw InvalidArgument("unknown stick_variant '" + s + "' (expected printed|standard)");
}

}  // namespace

DataPaths data_in_dir(const fs::path& dir, DataPaths base) {
    base.sites = dir / "sites.csv";
    base.covariates = dir / "covariates.csv";
    base.response = dir / "response.csv";
    return base;
}

RunConfig parse_config(const Json& doc, const fs::path& base) {
    RunConfig cfg;
    check_keys(doc, "root", {"data", "model", "mcmc", "chains", "holdout", "predict", "evaluate", "simulate"});

    if (doc.contains("data")) {
        const Json& d = doc["data"];
        check_keys(d, "data", {"dir", "sites", "covariates", "response", "kind", "coords", "min_presence"});
        DataPaths paths;
        if (d.contains("dir")) paths = data_in_dir(resolve(base, d["dir"].get<std::string>()));
        for (auto [key, target] : {std::pair{"sites", &paths.sites}, std::pair{"covariates", &paths.covariates},
                                   std::pair{"response", &paths.response}})
            if (d.contains(key)) *target = resolve(base, d[key].get<std::string>());
        std::string kind = to_string(paths.kind), coords = coord_name(paths.coords);
        read_if(d, "kind", kind);
        read_if(d, "coords", coords);
        read_if(d, "min_presence", paths.min_presence);
        paths.kind = parse_response_kind(kind);
        paths.coords = parse_coord(coords);
        if (paths.min_presence < 0) throw InvalidArgument("min_presence must be >= 0");
        cfg.data = paths;
    }

    Hyperparams& h = cfg.hyper;
    if (doc.contains("model")) {
        const Json& m = doc["model"];
        check_keys(m, "model", {"r", "N", "alpha", "a", "b", "c", "phi_min", "phi_max", "eta_shape",
                                "eta_rate", "iw_nu", "sigma2_fixed", "stick_variant", "orthant_sweeps",
                                "jitter", "variant"});
        read_if(m, "r", h.r);
        read_if(m, "N", h.N);
        read_if(m, "alpha", h.alpha);
        read_if(m, "a", h.a);
        read_if(m, "b", h.b);
        read_if(m, "c", h.c);
        if (m.contains("phi_min") && !m["phi_min"].is_null()) read_if(m, "phi_min", h.phi_min);
        if (m.contains("phi_max") && !m["phi_max"].is_null()) read_if(m, "phi_max", h.phi_max);
        read_if(m, "eta_shape", h.eta_shape);
        read_if(m, "eta_rate", h.eta_rate);
        read_if(m, "iw_nu", h.iw_nu);
        if (m.contains("sigma2_fixed") && !m["sigma2_fixed"].is_null()) {
            double v = 0.0;
            read_if(m, "sigma2_fixed", v);
            h.sigma2_fixed = v;
        }
        if (m.contains("stick_variant")) h.stick = parse_stick(m["stick_variant"].get<std::string>());
        read_if(m, "orthant_sweeps", h.orthant_sweeps);
        read_if(m, "jitter", h.jitter);
        if (m.contains("variant")) h.factors = parse_factor_model(m["variant"].get<std::string>());
    }
    if (doc.contains("mcmc")) {
        const Json& m = doc["mcmc"];
        check_keys(m, "mcmc", {"n_iter", "burn_in", "thin", "mh_step_phi", "adapt_phi", "seed", "progress_every"});
        read_if(m, "n_iter", h.mcmc.n_iter);
        read_if(m, "burn_in", h.mcmc.burn_in);
        read_if(m, "thin", h.mcmc.thin);
        read_if(m, "mh_step_phi", h.mcmc.mh_step_phi);
        read_if(m, "adapt_phi", h.mcmc.adapt_phi);
        read_if(m, "seed", h.mcmc.seed);
        read_if(m, "progress_every", h.mcmc.progress_every);
    }
    read_if(doc, "chains", cfg.chains);
    if (cfg.chains < 1) throw InvalidArgument("chains must be >= 1");

    if (doc.contains("holdout")) {
        const Json& hd = doc["holdout"];
        check_keys(hd, "holdout", {"fraction", "seed", "site_ids"});
        if (hd.contains("fraction") && !hd["fraction"].is_null()) {
            double f = 0.0;
            read_if(hd, "fraction", f);
            if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("holdout fraction must lie in (0, 1)");
            cfg.holdout.fraction = f;
        }
        read_if(hd, "seed", cfg.holdout.seed);
        read_if(hd, "site_ids", cfg.holdout.site_ids);
        if (cfg.holdout.fraction && !cfg.holdout.site_ids.empty())
            throw InvalidArgument("holdout takes either a fraction or explicit site ids, not both");
    }
    if (doc.contains("predict")) {
        const Json& p = doc["predict"];
        check_keys(p, "predict", {"mode", "seed"});
        if (p.contains("mode")) cfg.predict.mode = parse_predict_mode(p["mode"].get<std::string>());
        read_if(p, "seed", cfg.predict.seed);
    }
    if (doc.contains("evaluate")) {
        const Json& e = doc["evaluate"];
        check_keys(e, "evaluate", {"pairs"});
        if (e.contains("pairs")) {
            for (const auto& pr : e["pairs"]) {
                if (!pr.is_array() || pr.size() != 2)
                    throw InvalidArgument("evaluate.pairs entries must be [target, conditioner]");
                cfg.pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
            }
        }
    }
    if (doc.contains("simulate")) {
        const Json& s = doc["simulate"];
        SimConfig& sc = cfg.sim;
        check_keys(s, "simulate", {"n", "S", "p", "q", "K_true", "phi_true", "sigma2_true", "kind", "seed",
                                   "atom_value_set", "first_atom_value", "domain_side", "min_hamming"});
        read_if(s, "n", sc.n);
        read_if(s, "S", sc.S);
        read_if(s, "p", sc.p);
        read_if(s, "q", sc.q);
        read_if(s, "K_true", sc.K_true);
        read_if(s, "phi_true", sc.phi_true);
        read_if(s, "sigma2_true", sc.sigma2_true);
        if (s.contains("kind")) sc.kind = parse_response_kind(s["kind"].get<std::string>());
        read_if(s, "seed", sc.seed);
        read_if(s, "atom_value_set", sc.atom_value_set);
        read_if(s, "first_atom_value", sc.first_atom_value);
        read_if(s, "domain_side", sc.domain_side);
        read_if(s, "min_hamming", sc.min_hamming);
    }
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    return parse_config(read_json(path), fs::absolute(path).parent_path());
}

Json hyper_to_json(const Hyperparams& h) {
    Json m;
    m["r"] = h.r;
    m["N"] = h.N;
    m["alpha"] = h.alpha;
    m["a"] = h.a;
    m["b"] = h.b;
    m["c"] = h.c;
    m["phi_min"] = std::isnan(h.phi_min) ? Json(nullptr) : Json(h.phi_min);
    m["phi_max"] = std::isnan(h.phi_max) ? Json(nullptr) : Json(h.phi_max);
    m["eta_shape"] = h.eta_shape;
    m["eta_rate"] = h.eta_rate;
    m["iw_nu"] = h.iw_nu;
    m["sigma2_fixed"] = h.sigma2_fixed ? Json(*h.sigma2_fixed) : Json(nullptr);
    m["stick_variant"] = h.stick == StickVariant::printed ? "printed" : "standard";
    m["orthant_sweeps"] = h.orthant_sweeps;
    m["jitter"] = h.jitter;
    m["variant"] = to_string(h.factors);
    return m;
}

Json sim_to_json(const SimConfig& s) {
    Json j;
    j["n"] = s.n;
    j["S"] = s.S;
    j["p"] = s.p;
    j["q"] = s.q;
    j["K_true"] = s.K_true;
    j["phi_true"] = s.phi_true;
    j["sigma2_true"] = s.sigma2_true;
    j["kind"] = to_string(s.kind);
    j["seed"] = s.seed;
    j["atom_value_set"] = s.atom_value_set;
    j["first_atom_value"] = s.first_atom_value;
    j["domain_side"] = s.domain_side;
    j["min_hamming"] = s.min_hamming;
    return j;
}

Json to_json(const RunConfig& cfg) {
    Json doc;
    if (cfg.data) {
        const DataPaths& d = *cfg.data;
        doc["data"] = {{"sites", d.sites.string()},
                       {"covariates", d.covariates.string()},
                       {"response", d.response.string()},
                       {"kind", to_string(d.kind)},
                       {"coords", coord_name(d.coords)},
                       {"min_presence", d.min_presence}};
    }
    doc["model"] = hyper_to_json(cfg.hyper);
    const McmcSchedule& m = cfg.hyper.mcmc;
    doc["mcmc"] = {{"n_iter", m.n_iter},       {"burn_in", m.burn_in},     {"thin", m.thin},
                   {"mh_step_phi", m.mh_step_phi}, {"adapt_phi", m.adapt_phi}, {"seed", m.seed},
                   {"progress_every", m.progress_every}};
    doc["chains"] = cfg.chains;
    Json hd;
    if (cfg.holdout.fraction) hd["fraction"] = *cfg.holdout.fraction;
    hd["seed"] = cfg.holdout.seed;
    if (!cfg.holdout.site_ids.empty()) hd["site_ids"] = cfg.holdout.site_ids;
    doc["holdout"] = hd;
    doc["predict"] = {{"mode", to_string(cfg.predict.mode)}, {"seed", cfg.predict.seed}};
    Json pairs = Json::array();
    for (const auto& [t, c] : cfg.pairs) pairs.push_back({t, c});
    doc["evaluate"] = {{"pairs", pairs}};
    doc["simulate"] = sim_to_json(cfg.sim);
    return doc;
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

void write_json(const fs::path& path, const Json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace sjsdm::cli
