#include "sjsdm/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>
#include <map>
#include <thread>

#include "sjsdm/cli/csv.hpp"
#include "sjsdm/cli/draws_io.hpp"
#include "sjsdm/cli/ingest.hpp"
#include "sjsdm/cli/svg.hpp"
#include "sjsdm/error.hpp"
#include "sjsdm/gibbs.hpp"
#include "sjsdm/metrics.hpp"
#include "sjsdm/predict.hpp"
#include "sjsdm/simulate.hpp"

namespace sjsdm::cli {

namespace fs = std::filesystem;

namespace {

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json summary_json(const std::vector<double>& v) {
    const ScalarSummary s = summarize(v);
    return {{"mean", s.mean}, {"sd", s.sd}, {"ci95", {s.ci95.lower, s.ci95.upper}}};
}

Json optional_if(const std::vector<double>& trace) {
    try {
        return inefficiency_factor(trace);
    } catch (const InvalidArgument&) {
        return nullptr;
    }
}

std::vector<double> column(const Matrix& m, Index c) {
    return {m.col(c).data(), m.col(c).data() + m.rows()};
}

void require_dir(const fs::path& p, const char* what) {
    if (p.empty()) throw InvalidArgument(std::string("missing --") + what + " directory");
}

struct Loaded {
    RunConfig cfg;
    Ingested ing;
    Dataset train;
    Dataset test;
    PosteriorDraws draws;
};

Loaded load_fit(const fs::path& fit_dir) {
    require_dir(fit_dir, "fit");
    const fs::path rc = fit_dir / "run_config.json";
    if (!fs::exists(rc)) throw IoError("'" + fit_dir.string() + "' holds no run_config.json; run fit first");
    Loaded out;
    out.cfg = parse_config(read_json(rc), fit_dir);
    if (!out.cfg.data) throw InvalidArgument("run_config.json lacks a data section");
    out.ing = ingest(*out.cfg.data);
    out.ing.data.holdout = make_holdout(out.ing.data, out.cfg.holdout);
    out.train = out.ing.data.train();
    out.test = out.ing.data.test();
    out.draws = read_all_chains(fit_dir / "draws");
    if (out.draws.train_site_ids != out.train.sites.ids || out.draws.species_ids != out.train.species_ids)
        throw DimensionMismatch("stored draws do not match the re-ingested training data");
    return out;
}

Json if_table(const PosteriorDraws& d) {
    Json t;
    t["phi"] = d.factors == FactorModel::spatial ? optional_if(d.phi_trace()) : Json(nullptr);
    t["sigma2"] = optional_if(d.sigma2_trace());
    if (d.empty()) return t;
    std::vector<double> b_ifs;
    const Index S = d.states.front().B.rows(), p = d.states.front().B.cols();
    for (Index l = 0; l < S; ++l)
        for (Index c = 0; c < p; ++c) {
            const Json v = optional_if(d.b_trace(l, c));
            if (!v.is_null()) b_ifs.push_back(v.get<double>());
        }
    if (!b_ifs.empty())
        t["B"] = {{"min", *std::min_element(b_ifs.begin(), b_ifs.end())},
                  {"median", empirical_quantile(b_ifs, 0.5)},
                  {"max", *std::max_element(b_ifs.begin(), b_ifs.end())}};
    return t;
}

void progress_line(const std::string& msg, bool quiet) {
    if (!quiet) std::cerr << msg << '\n';
}

}  // namespace

RunConfig resolve_config(const Options& opts) {
    RunConfig cfg = opts.config.empty() ? parse_config(Json::object(), fs::current_path())
                                        : load_config(opts.config);
    if (!opts.data.empty()) cfg.data = data_in_dir(fs::absolute(opts.data), cfg.data.value_or(DataPaths{}));
    if (opts.seed) {
        cfg.hyper.mcmc.seed = *opts.seed;
        cfg.sim.seed = *opts.seed;
    }
    if (opts.chains) {
        if (*opts.chains < 1) throw InvalidArgument("--chains must be >= 1");
        cfg.chains = *opts.chains;
    }
    if (opts.variant) cfg.hyper.factors = parse_factor_model(*opts.variant);
    if (opts.kind) {
        const ResponseKind k = parse_response_kind(*opts.kind);
        cfg.sim.kind = k;
        if (cfg.data) cfg.data->kind = k;
    }
    if (opts.mode) cfg.predict.mode = parse_predict_mode(*opts.mode);
    if (opts.holdout_frac) {
        if (!(*opts.holdout_frac > 0.0 && *opts.holdout_frac < 1.0))
            throw InvalidArgument("--holdout-frac must lie in (0, 1)");
        cfg.holdout.fraction = *opts.holdout_frac;
        cfg.holdout.site_ids.clear();
    }
    if (opts.min_presence) {
        if (!cfg.data) throw InvalidArgument("--min-presence needs a data set");
        cfg.data->min_presence = *opts.min_presence;
    }
    if (opts.n_iter) cfg.hyper.mcmc.n_iter = *opts.n_iter;
    if (opts.burn_in) cfg.hyper.mcmc.burn_in = *opts.burn_in;
    return cfg;
}

Json cmd_simulate(const Options& opts) {
    require_dir(opts.out, "out");
    const RunConfig cfg = resolve_config(opts);
    const Simulated sim = simulate(cfg.sim);
    const fs::path dir = opts.out;
    write_dataset(dir, sim.data);
    const SimTruth& t = sim.truth;
    std::vector<std::string> cov_names, factor_names, atom_names;
    for (Index c = 0; c < t.B.cols(); ++c) cov_names.push_back("x" + std::to_string(c + 1));
    for (Index h = 0; h < t.W.cols(); ++h) factor_names.push_back("f" + std::to_string(h + 1));
    for (Index j = 0; j < t.Z.rows(); ++j) atom_names.push_back("atom" + std::to_string(j));
    const auto& sp = sim.data.species_ids;
    write_matrix_csv(dir / "truth_B.csv", "species", sp, cov_names, t.B);
    write_matrix_csv(dir / "truth_Z.csv", "atom", atom_names, factor_names, t.Z);
    write_matrix_csv(dir / "truth_W.csv", "id", sim.data.sites.ids, factor_names, t.W);
    write_matrix_csv(dir / "truth_U.csv", "id", sim.data.sites.ids, sp, t.U);
    write_matrix_csv(dir / "truth_Sigma_star.csv", "species", sp, sp, t.Sigma_star);
    Json truth;
    truth["phi"] = t.phi;
    truth["sigma2"] = t.sigma2;
    truth["k"] = t.k;
    truth["species_ids"] = sp;
    truth["covariates_simulated"] = true;
    truth["config"] = sim_to_json(cfg.sim);
    write_json(dir / "truth.json", truth);
    return {{"command", "simulate"}, {"out", dir.string()}, {"n", sim.data.n_sites()},
            {"S", sim.data.n_species()}, {"kind", to_string(sim.data.kind)}};
}

Json cmd_fit(const Options& opts) {
    require_dir(opts.out, "out");
    RunConfig cfg = resolve_config(opts);
    if (!cfg.data) throw InvalidArgument("fit needs data: pass --data or a config data section");
    Ingested ing = ingest(*cfg.data);
    Dataset& data = ing.data;
    data.holdout = make_holdout(data, cfg.holdout);
    const Dataset train = data.train();
    if (train.n_sites() < 2) throw InvalidArgument("fewer than two training sites remain after the holdout");
    const Hyperparams hyper = resolve_hyperparams(cfg.hyper, train);
    const auto warnings = hyper.validate(train.n_species());
    for (const auto& w : warnings) progress_line("warning: " + w, opts.quiet);

    const fs::path out = opts.out;
    fs::create_directories(out / "draws");
    RunConfig stored = cfg;
    stored.holdout = HoldoutSpec{};
    stored.holdout.seed = cfg.holdout.seed;
    for (auto i : data.test_rows()) stored.holdout.site_ids.push_back(data.sites.ids[i]);
    write_json(out / "run_config.json", to_json(stored));
    Json ingest_info;
    ingest_info["coordinates"] = ing.lonlat ? "lonlat" : "xy";
    ingest_info["covariate_transform"] = transform_to_json(ing.transform);
    ingest_info["dropped_species"] = ing.dropped_species;
    ingest_info["n_sites"] = data.n_sites();
    ingest_info["n_species"] = data.n_species();
    ingest_info["n_train"] = train.n_sites();
    ingest_info["n_test"] = data.n_sites() - train.n_sites();
    if (data.kind == ResponseKind::binary) {
        ingest_info["presences"] = ing.presences;
        ingest_info["presence_rate"] = static_cast<double>(ing.presences) / static_cast<double>(data.Y.size());
    }
    write_json(out / "ingest.json", ingest_info);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<PosteriorDraws> chains(static_cast<std::size_t>(cfg.chains));
    std::vector<std::exception_ptr> errors(chains.size());
    std::vector<std::thread> workers;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        workers.emplace_back([&, c] {
            try {
                ChainOptions co;
                co.stream_id = c;
                co.record_log_joint = true;
                if (!opts.quiet) co.progress = stderr_progress(c);
                chains[c] = run_chain(train, hyper, co);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    PosteriorDraws pooled;
    Json acceptance = Json::array(), steps = Json::array();
    for (std::size_t c = 0; c < chains.size(); ++c) {
        write_draws(chain_dir(out / "draws", static_cast<int>(c)), chains[c]);
        acceptance.push_back(chains[c].mh_acceptance);
        steps.push_back(chains[c].final_mh_step);
        if (c == 0) {
            pooled = chains[c];
        } else {
            pooled.append(chains[c]);
        }
    }

    Json summary;
    summary["variant"] = to_string(hyper.factors);
    summary["kind"] = to_string(data.kind);
    summary["n_train"] = train.n_sites();
    summary["S"] = train.n_species();
    summary["p"] = train.n_covariates();
    summary["r"] = hyper.r;
    summary["N"] = hyper.N;
    summary["phi_bounds"] = {hyper.phi_min, hyper.phi_max};
    summary["chains"] = cfg.chains;
    summary["n_draws"] = pooled.size();
    summary["warnings"] = warnings;
    if (!pooled.empty()) {
        if (hyper.factors == FactorModel::spatial) {
            summary["phi"] = summary_json(pooled.phi_trace());
            std::vector<double> range;
            for (double phi : pooled.phi_trace()) range.push_back(effective_range(phi));
            summary["effective_range"] = summary_json(range);
        }
        summary["sigma2"] = summary_json(pooled.sigma2_trace());
        summary["mh_acceptance"] = acceptance;
        summary["final_mh_step"] = steps;
        const auto occ = pooled.occupied_trace();
        std::map<int, double> dist;
        for (double v : occ) dist[static_cast<int>(v)] += 1.0 / static_cast<double>(occ.size());
        Json dj = Json::object();
        for (const auto& [k, prob] : dist) dj[std::to_string(k)] = prob;
        const auto [labels, freq] = pooled.max_posterior_labels();
        Json lj = Json::object();
        for (std::size_t l = 0; l < labels.size(); ++l) lj[train.species_ids[l]] = labels[l];
        int distinct = 0;
        for (int v : labels) distinct = std::max(distinct, v + 1);
        summary["clusters"] = {{"occupied", summary_json(occ)},
                               {"occupied_distribution", dj},
                               {"max_posterior_labels", lj},
                               {"max_posterior_probability", freq},
                               {"distinct_labels", distinct}};
        const Index p = train.n_covariates(), S = train.n_species();
        Matrix lower(S, p), upper(S, p);
        for (Index l = 0; l < S; ++l)
            for (Index c = 0; c < p; ++c) {
                const Interval ci = credible_interval(pooled.b_trace(l, c));
                lower(l, c) = ci.lower;
                upper(l, c) = ci.upper;
            }
        summary["B"] = {{"species", train.species_ids}, {"covariates", ing.transform.names},
                        {"mean", matrix_json(pooled.mean_B())}, {"lower", matrix_json(lower)},
                        {"upper", matrix_json(upper)}};
        summary["inefficiency_factors"] = if_table(pooled);
        bool finite = true;
        for (double v : pooled.log_joint) finite = finite && std::isfinite(v);
        summary["log_joint_finite"] = finite;

        const Matrix sig = pooled.sigma_star_hat();
        write_matrix_csv(out / "sigma_star_hat.csv", "species", train.species_ids, train.species_ids, sig);
        write_matrix_csv(out / "correlation_hat.csv", "species", train.species_ids, train.species_ids,
                         correlation_of(sig));
        fs::create_directories(out / "plots");
        const Matrix wbar = pooled.mean_W();
        for (Index h = 0; h < wbar.cols(); ++h)
            svg_site_map(out / "plots" / ("factor_" + std::to_string(h + 1) + ".svg"),
                         "Posterior mean factor " + std::to_string(h + 1), train.sites.x, train.sites.y,
                         column(wbar, h));
        if (hyper.factors == FactorModel::spatial)
            svg_trace(out / "plots" / "trace_phi.svg", "phi", pooled.phi_trace());
        svg_trace(out / "plots" / "trace_sigma2.svg", "sigma^2", pooled.sigma2_trace());
        svg_trace(out / "plots" / "trace_occupied.svg", "occupied clusters", occ);
    }
    write_json(out / "summary.json", summary);
    write_json(out / "timing.json", {{"wall_seconds", seconds},
                                     {"seconds_per_sweep", hyper.mcmc.n_iter > 0
                                                               ? seconds / static_cast<double>(hyper.mcmc.n_iter)
                                                               : 0.0}});
    return {{"command", "fit"}, {"out", out.string()}, {"n_draws", pooled.size()}, {"wall_seconds", seconds}};
}

namespace {

PredictionResult run_prediction(const Loaded& L) {
    PredictOptions po = L.cfg.predict;
    po.jitter = L.cfg.hyper.jitter;
    return predict_heldout(L.draws, L.train, L.test, po);
}

}  // namespace

Json cmd_predict(const Options& opts) {
    Loaded L = load_fit(opts.fit);
    if (opts.mode) L.cfg.predict.mode = parse_predict_mode(*opts.mode);
    if (opts.seed) L.cfg.predict.seed = *opts.seed;
    const fs::path out = opts.out.empty() ? opts.fit : opts.out;
    fs::create_directories(out);
    Json info;
    info["mode"] = to_string(L.cfg.predict.mode);
    info["n_test"] = L.test.n_sites();
    info["n_draws"] = L.draws.size();
    info["kind"] = to_string(L.draws.kind);
    if (L.test.n_sites() == 0) {
        info["warning"] = "no held-out sites; predictions are empty";
        progress_line("warning: no held-out sites; predictions are empty", opts.quiet);
        write_matrix_csv(out / "predictions.csv", "id", {}, L.train.species_ids, Matrix(0, L.train.n_species()));
        write_json(out / "prediction_summary.json", info);
        return {{"command", "predict"}, {"out", out.string()}, {"n_test", 0}};
    }
    const PredictionResult pr = run_prediction(L);
    write_matrix_csv(out / "predictions.csv", "id", pr.site_ids, pr.species_ids, pr.mean);
    Json per = Json::object();
    for (Index l = 0; l < pr.mean.cols(); ++l)
        per[pr.species_ids[static_cast<std::size_t>(l)]] = {{"mean", pr.mean.col(l).mean()},
                                                           {"min", pr.mean.col(l).minCoeff()},
                                                           {"max", pr.mean.col(l).maxCoeff()}};
    info["per_species"] = per;
    write_json(out / "prediction_summary.json", info);
    return {{"command", "predict"}, {"out", out.string()}, {"n_test", L.test.n_sites()}};
}

Json cmd_evaluate(const Options& opts) {
    Loaded L = load_fit(opts.fit);
    const fs::path out = opts.out.empty() ? opts.fit : opts.out;
    fs::create_directories(out);
    Json m;
    m["kind"] = to_string(L.draws.kind);
    m["variant"] = to_string(L.draws.factors);
    m["n_test"] = L.test.n_sites();
    m["n_draws"] = L.draws.size();
    if (L.test.n_sites() > 0) {
        Matrix pred;
        const fs::path pcsv = opts.fit / "predictions.csv";
        if (fs::exists(pcsv)) {
            const LabeledMatrix lm = read_matrix_csv(pcsv);
            if (lm.ids != L.test.sites.ids || lm.cols != L.test.species_ids)
                throw DimensionMismatch("predictions.csv does not match the held-out sites and species");
            pred = lm.values;
        } else {
            pred = run_prediction(L).mean;
        }
        if (L.draws.kind == ResponseKind::continuous) {
            m["pmse"] = pmse(L.test.Y, pred);
            Json per = Json::object();
            for (Index l = 0; l < pred.cols(); ++l)
                per[L.test.species_ids[static_cast<std::size_t>(l)]] =
                    pmse(Matrix(L.test.Y.col(l)), Matrix(pred.col(l)));
            m["pmse_per_species"] = per;
        } else {
            const TjurResult tr = tjur_r(L.test.Y, pred);
            m["tjur_r"] = tr.mean;
            m["tjur_excluded"] = tr.n_excluded;
            Json per = Json::object();
            for (std::size_t l = 0; l < tr.per_species.size(); ++l)
                per[L.test.species_ids[l]] =
                    std::isnan(tr.per_species[l]) ? Json(nullptr) : Json(tr.per_species[l]);
            m["tjur_per_species"] = per;
            svg_boxplot(out / "tjur_boxplot.svg", "Tjur R per species",
                        {{to_string(L.draws.factors), tr.per_species}});
            Json pairs = Json::array();
            for (const auto& [target, cond] : L.cfg.pairs) {
                auto index_of = [&](const std::string& id) {
                    const auto it = std::find(L.test.species_ids.begin(), L.test.species_ids.end(), id);
                    if (it == L.test.species_ids.end())
                        throw InvalidArgument("species '" + id + "' is not in the fitted model");
                    return static_cast<Index>(it - L.test.species_ids.begin());
                };
                const ConditionalTjur ct = conditional_tjur(L.draws, L.train, L.test, index_of(target),
                                                            index_of(cond), L.cfg.hyper.jitter);
                auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
                pairs.push_back({{"target", target},
                                 {"condition", cond},
                                 {"given_present", opt(ct.given_present)},
                                 {"given_absent", opt(ct.given_absent)},
                                 {"counts", {{"target1_cond1", ct.counts[1][1]},
                                             {"target1_cond0", ct.counts[1][0]},
                                             {"target0_cond1", ct.counts[0][1]},
                                             {"target0_cond0", ct.counts[0][0]}}}});
            }
            m["conditional_tjur"] = pairs;
        }
    } else if (!L.cfg.pairs.empty()) {
        throw InvalidArgument("conditional Tjur R needs held-out sites");
    }

    const fs::path data_dir = L.cfg.data->response.parent_path();
    const fs::path truth_sigma = data_dir / "truth_Sigma_star.csv";
    if (fs::exists(truth_sigma)) {
        const LabeledMatrix ts = read_matrix_csv(truth_sigma);
        const auto& ids = L.train.species_ids;
        std::vector<Index> pos;
        for (const auto& id : ids) {
            const auto it = std::find(ts.ids.begin(), ts.ids.end(), id);
            if (it == ts.ids.end()) throw InvalidArgument("truth lacks species '" + id + "'");
            pos.push_back(static_cast<Index>(it - ts.ids.begin()));
        }
        Matrix truth(static_cast<Index>(pos.size()), static_cast<Index>(pos.size()));
        for (std::size_t a = 0; a < pos.size(); ++a)
            for (std::size_t b = 0; b < pos.size(); ++b)
                truth(static_cast<Index>(a), static_cast<Index>(b)) = ts.values(pos[a], pos[b]);
        m["frobenius_gap"] = frobenius_gap(truth, L.draws.sigma_star_hat());
        const fs::path tj = data_dir / "truth.json";
        if (fs::exists(tj)) {
            const Json t = read_json(tj);
            const auto k_all = t.at("k").get<std::vector<int>>();
            const auto sp_all = t.at("species_ids").get<std::vector<std::string>>();
            std::vector<int> k_true;
            for (const auto& id : ids)
                k_true.push_back(k_all[static_cast<std::size_t>(std::find(sp_all.begin(), sp_all.end(), id) - sp_all.begin())]);
            m["label_ari"] = adjusted_rand_index(L.draws.max_posterior_labels().first, k_true);
            if (L.draws.factors == FactorModel::spatial) {
                const Interval ci = credible_interval(L.draws.phi_trace());
                const double phi = t.at("phi").get<double>();
                m["phi_covered"] = ci.lower <= phi && phi <= ci.upper;
            }
            if (L.draws.kind == ResponseKind::continuous) {
                const Interval ci = credible_interval(L.draws.sigma2_trace());
                const double s2 = t.at("sigma2").get<double>();
                m["sigma2_covered"] = ci.lower <= s2 && s2 <= ci.upper;
            }
        }
    }
    m["inefficiency_factors"] = if_table(L.draws);
    write_json(out / "metrics.json", m);
    return {{"command", "evaluate"}, {"out", out.string()}};
}

Json cmd_diagnose(const Options& opts) {
    Loaded L = load_fit(opts.fit);
    const fs::path out = opts.out.empty() ? opts.fit : opts.out;
    fs::create_directories(out / "plots");
    if (L.draws.empty()) throw InvalidArgument("no retained draws to diagnose");
    Json d;
    d["n_draws"] = L.draws.size();
    d["inefficiency_factors"] = if_table(L.draws);
    d["mh_acceptance"] = L.draws.mh_acceptance;
    bool finite = true;
    for (double v : L.draws.log_joint) finite = finite && std::isfinite(v);
    d["log_joint_finite"] = finite;
    const Orthogonalized o = orthogonalize(L.draws, L.train);
    d["orthogonality_max_error"] = o.max_orthogonality_error;
    d["decomposition_max_error"] = o.max_decomposition_error;
    d["B_star"] = {{"species", L.train.species_ids}, {"mean", matrix_json(o.B_star_mean)},
                   {"lower", matrix_json(o.B_star_lower)}, {"upper", matrix_json(o.B_star_upper)}};
    std::vector<std::string> species = opts.species;
    if (species.empty()) species.push_back(L.train.species_ids.front());
    for (const auto& id : species) {
        const auto it = std::find(L.train.species_ids.begin(), L.train.species_ids.end(), id);
        if (it == L.train.species_ids.end()) throw InvalidArgument("species '" + id + "' is not in the fitted model");
        const auto l = static_cast<Index>(it - L.train.species_ids.begin());
        svg_site_map(out / "plots" / ("xb_star_" + id + ".svg"), "X B* for " + id, L.train.sites.x,
                     L.train.sites.y, column(o.XB_star_mean, l));
        svg_site_map(out / "plots" / ("wl_star_" + id + ".svg"), "W* Lambda for " + id, L.train.sites.x,
                     L.train.sites.y, column(o.WL_star_mean, l));
    }
    for (Index h = 0; h < o.W_star_mean.cols(); ++h)
        svg_site_map(out / "plots" / ("w_star_" + std::to_string(h + 1) + ".svg"),
                     "Orthogonalized factor " + std::to_string(h + 1), L.train.sites.x, L.train.sites.y,
                     column(o.W_star_mean, h));
    write_json(out / "diagnostics.json", d);
    return {{"command", "diagnose"}, {"out", out.string()}};
}

Json error_json(const std::exception& e) {
    Json err;
    if (const auto* se = dynamic_cast<const SamplerError*>(&e)) {
        err = {{"kind", se->kind()}, {"message", se->what()}, {"block", se->block()}, {"iteration", se->iteration()}};
    } else if (const auto* ee = dynamic_cast<const Error*>(&e)) {
        err = {{"kind", ee->kind()}, {"message", ee->what()}};
    } else if (dynamic_cast<const fs::filesystem_error*>(&e)) {
        err = {{"kind", "io_error"}, {"message", e.what()}};
    } else if (dynamic_cast<const nlohmann::json::exception*>(&e)) {
        err = {{"kind", "invalid_argument"}, {"message", e.what()}};
    } else {
        err = {{"kind", "internal"}, {"message", e.what()}};
    }
    return {{"error", err}};
}

}  // namespace sjsdm::cli
