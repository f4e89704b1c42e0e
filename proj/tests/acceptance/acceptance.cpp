// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Optional arguments select criteria by number (e.g. `acceptance 3 5`).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "sjsdm/gibbs.hpp"
#include "sjsdm/kernels.hpp"
#include "sjsdm/metrics.hpp"
#include "sjsdm/predict.hpp"
#include "sjsdm/simulate.hpp"

#ifndef SJSDM_CLI_PATH
#error "SJSDM_CLI_PATH must name the command-line binary"
#endif

using namespace sjsdm;
namespace fs = std::filesystem;

namespace {

constexpr int kReplicates = 10;
constexpr long kBurnIn = 4000;
constexpr long kDraws = 4000;

struct Outcome {
    bool pass = false;
    std::string summary;
    std::vector<std::string> details;
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

SimConfig desk_config(ResponseKind kind, int rep) {
    SimConfig cfg;  // n=100, S=40, p=3, q=3, K_true=4, phi=2, sigma2=1
    cfg.kind = kind;
    cfg.seed = (kind == ResponseKind::continuous ? 1000 : 2000) + static_cast<std::uint64_t>(rep);
    return cfg;
}

Hyperparams desk_hyper(FactorModel factors, std::uint64_t seed) {
    Hyperparams h;
    h.r = 3;
    h.N = 20;
    h.factors = factors;
    h.mcmc.burn_in = kBurnIn;
    h.mcmc.n_iter = kBurnIn + kDraws;
    h.mcmc.seed = seed;
    return h;
}

bool covers(const std::vector<double>& trace, double value) {
    const Interval ci = credible_interval(trace);
    return ci.lower <= value && value <= ci.upper;
}

std::string interval_text(const std::vector<double>& trace) {
    const Interval ci = credible_interval(trace);
    return "[" + fmt(ci.lower) + ", " + fmt(ci.upper) + "]";
}

Outcome from_checks(const std::vector<testing::CheckResult>& checks) {
    Outcome o;
    int passed = 0;
    for (const auto& c : checks) {
        passed += c.pass() ? 1 : 0;
        o.details.push_back(std::string(c.pass() ? "ok   " : "FAIL ") + c.name + ": " + fmt(c.discrepancy) +
                            " (tol " + fmt(c.tolerance) + ")" + (c.detail.empty() ? "" : "; " + c.detail));
    }
    o.pass = passed == static_cast<int>(checks.size());
    o.summary = std::to_string(passed) + "/" + std::to_string(checks.size()) + " oracles agree";
    return o;
}

Outcome conditional_oracles() { return from_checks(testing::all_conditional_checks(100000, 20240601)); }

Outcome geweke_test() {
    auto checks = testing::geweke(100000, 20240602, 5);
    for (auto& c : testing::geweke(100000, 20240603, 5, ResponseKind::binary)) checks.push_back(std::move(c));
    return from_checks(checks);
}

// Desk-scale recovery fits are reused by the exact-numeric criterion.
PosteriorDraws g_first_fit;
Dataset g_first_data;

Outcome continuous_recovery() {
    Outcome o;
    int phi_ok = 0, s2_ok = 0, ari_ok = 0;
    for (int rep = 0; rep < kReplicates; ++rep) {
        const Simulated sim = gen_continuous(desk_config(ResponseKind::continuous, rep));
        const PosteriorDraws d = run_chain(sim.data, desk_hyper(FactorModel::spatial, 500 + rep));
        const bool pc = covers(d.phi_trace(), sim.truth.phi);
        const bool sc = covers(d.sigma2_trace(), sim.truth.sigma2);
        const double ari = adjusted_rand_index(d.max_posterior_labels().first, sim.truth.k);
        phi_ok += pc;
        s2_ok += sc;
        ari_ok += ari >= 0.95;
        o.details.push_back("rep " + std::to_string(rep) + ": phi CI " + interval_text(d.phi_trace()) +
                            (pc ? " covers" : " misses") + ", sigma2 CI " + interval_text(d.sigma2_trace()) +
                            (sc ? " covers" : " misses") + ", ARI " + fmt(ari));
        if (rep == 0) {
            g_first_fit = d;
            g_first_data = sim.data;
        }
    }
    o.pass = phi_ok >= 8 && s2_ok >= 8 && ari_ok >= 8;
    o.summary = "phi covered " + std::to_string(phi_ok) + "/10, sigma2 covered " + std::to_string(s2_ok) +
                "/10, ARI >= 0.95 in " + std::to_string(ari_ok) + "/10";
    return o;
}

Outcome binary_recovery() {
    Outcome o;
    int phi_ok = 0;
    for (int rep = 0; rep < kReplicates; ++rep) {
        const Simulated sim = gen_binary(desk_config(ResponseKind::binary, rep));
        const PosteriorDraws d = run_chain(sim.data, desk_hyper(FactorModel::spatial, 600 + rep));
        const bool pc = covers(d.phi_trace(), 2.0);
        phi_ok += pc;
        o.details.push_back("rep " + std::to_string(rep) + ": phi mean " + fmt(summarize(d.phi_trace()).mean) +
                            ", CI " + interval_text(d.phi_trace()) + (pc ? " covers 2" : " misses 2"));
    }
    o.pass = phi_ok >= 7;
    o.summary = "phi covered " + std::to_string(phi_ok) + "/10";
    return o;
}

struct DirectionRep {
    double score_spatial;
    double score_independent;
    double frob_spatial;
    double frob_independent;
};

DirectionRep direction_replicate(ResponseKind kind, int rep) {
    SimConfig cfg = desk_config(kind, rep);
    cfg.seed += 500;
    Simulated sim = simulate(cfg);
    RngStream split(cfg.seed, 77);
    sim.data.holdout = random_holdout(static_cast<std::size_t>(cfg.n), 0.2, split);
    const Dataset train = sim.data.train(), test = sim.data.test();
    DirectionRep out{};
    for (FactorModel fm : {FactorModel::spatial, FactorModel::independent}) {
        const PosteriorDraws d = run_chain(train, desk_hyper(fm, 700 + rep));
        const PredictionResult pr = predict_heldout(d, train, test);
        const double score = kind == ResponseKind::continuous ? pmse(test.Y, pr.mean) : tjur_r(test.Y, pr.mean).mean;
        const double frob = frobenius_gap(sim.truth.Sigma_star, d.sigma_star_hat());
        if (fm == FactorModel::spatial) {
            out.score_spatial = score;
            out.frob_spatial = frob;
        } else {
            out.score_independent = score;
            out.frob_independent = frob;
        }
    }
    return out;
}

Outcome direction_tests() {
    Outcome o;
    int pmse_wins = 0, tr_wins = 0, frob_c = 0, frob_b = 0;
    for (int rep = 0; rep < kReplicates; ++rep) {
        const DirectionRep c = direction_replicate(ResponseKind::continuous, rep);
        pmse_wins += c.score_spatial < c.score_independent;
        frob_c += c.frob_spatial < c.frob_independent;
        o.details.push_back("continuous rep " + std::to_string(rep) + ": PMSE " + fmt(c.score_spatial) + " vs " +
                            fmt(c.score_independent) + ", Frobenius " + fmt(c.frob_spatial) + " vs " +
                            fmt(c.frob_independent));
        const DirectionRep b = direction_replicate(ResponseKind::binary, rep);
        tr_wins += b.score_spatial > b.score_independent;
        frob_b += b.frob_spatial < b.frob_independent;
        o.details.push_back("binary rep " + std::to_string(rep) + ": TR " + fmt(b.score_spatial) + " vs " +
                            fmt(b.score_independent) + ", Frobenius " + fmt(b.frob_spatial) + " vs " +
                            fmt(b.frob_independent));
    }
    o.pass = pmse_wins >= 9 && tr_wins >= 9 && frob_c >= 9 && frob_b >= 9;
    o.summary = "spatial better: PMSE " + std::to_string(pmse_wins) + "/10, TR " + std::to_string(tr_wins) +
                "/10, Frobenius " + std::to_string(frob_c) + "/10 continuous, " + std::to_string(frob_b) +
                "/10 binary";
    return o;
}

Outcome exact_numeric() {
    Outcome o;
    bool ok = true;
    auto note = [&](bool pass, const std::string& what) {
        ok = ok && pass;
        o.details.push_back(std::string(pass ? "ok   " : "FAIL ") + what);
    };

    const PhiBounds b = phi_bounds_from_distances(0.0001, 3.292);
    const double rel_min = std::abs(b.phi_min - 0.909) / 0.909;
    const double rel_max = std::abs(b.phi_max - 46052.0) / 46052.0;
    note(rel_min <= 0.001, "phi_min from d_max=3.292: " + fmt(b.phi_min, 6) + " vs 0.909 (relative " +
                               fmt(rel_min, 3) + ", tol 0.001)");
    note(rel_max <= 0.001, "phi_max from d_min=0.0001: " + fmt(b.phi_max, 8) + " vs 46052 (relative " +
                               fmt(rel_max, 3) + ", tol 0.001)");

    Matrix truth(2, 3);
    truth << 1, 2, 3, 4, 5, 6;
    note(pmse(truth, truth) == 0.0, "PMSE of exact predictions is 0");
    note(std::abs(pmse(truth, truth.array() + 1.0) - 1.0) <= 1e-12, "PMSE of a unit offset is 1");
    Matrix y(4, 2);
    y << 1, 0, 0, 1, 1, 1, 0, 0;
    const TjurResult perfect = tjur_r(y, y);
    note(std::abs(perfect.per_species[0] - 1.0) <= 1e-12 && std::abs(perfect.per_species[1] - 1.0) <= 1e-12,
         "TR of perfect probabilities is 1");
    note(std::abs(tjur_r(y, Matrix::Constant(4, 2, 0.37)).mean) <= 1e-12, "TR of constant probabilities is 0");
    const Matrix a = Matrix::Random(6, 6);
    note(frobenius_gap(a, a) == 0.0, "Frobenius gap of identical matrices is 0");
    note(std::abs(frobenius_gap(a, a + Matrix::Identity(6, 6)) - std::sqrt(6.0)) <= 1e-12,
         "Frobenius gap of an identity difference is sqrt(S)");

    if (g_first_fit.empty()) {
        const Simulated sim = gen_continuous(desk_config(ResponseKind::continuous, 0));
        g_first_fit = run_chain(sim.data, desk_hyper(FactorModel::spatial, 500));
        g_first_data = sim.data;
    }
    const Orthogonalized orth = orthogonalize(g_first_fit, g_first_data);
    note(orth.max_orthogonality_error <= 1e-10,
         "max |X'W*| over " + std::to_string(g_first_fit.size()) + " draws: " + fmt(orth.max_orthogonality_error, 3));
    note(orth.max_decomposition_error <= 1e-10,
         "max decomposition error over draws: " + fmt(orth.max_decomposition_error, 3));
    o.pass = ok;
    int failed = 0;
    for (const auto& d : o.details) failed += d.rfind("FAIL", 0) == 0;
    o.summary = std::to_string(o.details.size() - static_cast<std::size_t>(failed)) + "/" +
                std::to_string(o.details.size()) + " checks hold";
    return o;
}

Outcome ar1_inefficiency() {
    RngStream g(424242);
    std::vector<double> trace(100000);
    double x = 0.0;
    for (auto& v : trace) {
        x = 0.5 * x + std::sqrt(0.75) * g.normal();
        v = x;
    }
    const double f = inefficiency_factor(trace);
    Outcome o;
    o.pass = std::abs(f - 3.0) <= 0.3;
    o.summary = "IF " + fmt(f) + " vs 3 (tol 10%)";
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return rc;
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "sjsdm_acceptance_determinism";
    const fs::path work = root / "work";
    const std::string cli = SJSDM_CLI_PATH;
    std::vector<fs::path> runs;
    for (int attempt = 0; attempt < 2; ++attempt) {
        fs::remove_all(work);
        fs::create_directories(work);
        const std::string w = work.string();
        int rc = 0;
        rc |= run(cli + " simulate --kind binary --seed 11 --out " + w + "/sim --quiet");
        rc |= run(cli + " fit --data " + w + "/sim --kind binary --out " + w +
                  "/fit --seed 12 --chains 2 --holdout-frac 0.2 --min-presence 0 --iterations 600 --burn-in 300 --quiet");
        rc |= run(cli + " predict --fit " + w + "/fit --quiet");
        rc |= run(cli + " evaluate --fit " + w + "/fit --quiet");
        if (rc != 0) {
            o.summary = "pipeline command failed on run " + std::to_string(attempt + 1);
            return o;
        }
        const fs::path kept = root / ("run" + std::to_string(attempt));
        fs::remove_all(kept);
        fs::rename(work, kept);
        runs.push_back(kept);
    }
    std::size_t compared = 0, differing = 0;
    for (const auto& e : fs::recursive_directory_iterator(runs[0])) {
        if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
        const fs::path rel = fs::relative(e.path(), runs[0]);
        ++compared;
        if (!fs::exists(runs[1] / rel) || slurp(e.path()) != slurp(runs[1] / rel)) {
            ++differing;
            o.details.push_back("differs: " + rel.string());
        }
    }
    o.pass = compared > 20 && differing == 0;
    o.summary = std::to_string(compared) + " files compared, " + std::to_string(differing) + " differ";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"conditional-density oracles for every Gibbs block", conditional_oracles},
        {"joint correctness (Geweke, n=3 S=2 r=1 N=2)", geweke_test},
        {"desk-scale continuous recovery", continuous_recovery},
        {"desk-scale binary recovery", binary_recovery},
        {"direction tests, spatial vs independent, 20% holdout", direction_tests},
        {"exact numeric checks", exact_numeric},
        {"inefficiency factor of AR(1), rho=0.5", ar1_inefficiency},
        {"determinism of simulate -> fit -> predict -> evaluate", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    std::cout << "kernel ISA: " << kernels::isa_name(kernels::active_isa()) << "\n";
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << criteria[i].first << ": " << o.summary
                  << " (" << fmt(secs, 3) << " s)\n";
        for (const auto& d : o.details) std::cout << "    " << d << "\n";
        std::cout.flush();
    }
    return failures == 0 ? 0 : 1;
}
