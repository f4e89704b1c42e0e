#include <iostream>

#include <CLI11.hpp>

#include "sjsdm/cli/commands.hpp"
#include "sjsdm/kernels.hpp"

namespace cli = sjsdm::cli;

int main(int argc, char** argv) {
    CLI::App app{"Spatial joint species distribution model: simulate, fit, predict, evaluate, diagnose"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sjsdm 0.1.0");

    cli::Options opts;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", opts.seed, "Master seed (overrides the config)");
        sub->add_flag("--quiet", opts.quiet, "Suppress progress lines");
    };

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic data set with known truth");
    common(sim);
    sim->add_option("--out", opts.out, "Output directory")->required();
    sim->add_option("--kind", opts.kind, "continuous|binary");

    auto* fit = app.add_subcommand("fit", "Run the MCMC sampler and store draws and summaries");
    common(fit);
    fit->add_option("--data", opts.data, "Directory with sites.csv, covariates.csv, response.csv");
    fit->add_option("--out", opts.out, "Output directory")->required();
    fit->add_option("--chains", opts.chains, "Number of independent chains");
    fit->add_option("--variant", opts.variant, "spatial|independent");
    fit->add_option("--kind", opts.kind, "continuous|binary");
    fit->add_option("--holdout-frac", opts.holdout_frac, "Fraction of sites held out for prediction");
    fit->add_option("--min-presence", opts.min_presence, "Drop binary species with at most this many presences");
    fit->add_option("--iterations", opts.n_iter, "Total sweeps per chain");
    fit->add_option("--burn-in", opts.burn_in, "Discarded sweeps per chain");

    auto* pred = app.add_subcommand("predict", "Predict the held-out sites of a fit");
    pred->add_option("--fit", opts.fit, "Fit output directory")->required();
    pred->add_option("--out", opts.out, "Output directory (default: the fit directory)");
    pred->add_option("--mode", opts.mode, "marginal|sampled");
    pred->add_option("--seed", opts.seed, "Seed for the sampled mode");
    pred->add_flag("--quiet", opts.quiet, "Suppress warnings");

    auto* eval = app.add_subcommand("evaluate", "Compute predictive and recovery metrics for a fit");
    eval->add_option("--fit", opts.fit, "Fit output directory")->required();
    eval->add_option("--out", opts.out, "Output directory (default: the fit directory)");
    eval->add_flag("--quiet", opts.quiet, "Suppress warnings");

    auto* diag = app.add_subcommand("diagnose", "Chain diagnostics and orthogonalized surfaces");
    diag->add_option("--fit", opts.fit, "Fit output directory")->required();
    diag->add_option("--out", opts.out, "Output directory (default: the fit directory)");
    diag->add_option("--species", opts.species, "Species to map");
    diag->add_flag("--quiet", opts.quiet, "Suppress warnings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << cli::Json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << '\n';
        return 2;
    }

    try {
        cli::Json result;
        if (*sim) result = cli::cmd_simulate(opts);
        else if (*fit) result = cli::cmd_fit(opts);
        else if (*pred) result = cli::cmd_predict(opts);
        else if (*eval) result = cli::cmd_evaluate(opts);
        else result = cli::cmd_diagnose(opts);
        result["isa"] = std::string(sjsdm::kernels::isa_name(sjsdm::kernels::active_isa()));
        std::cout << result.dump() << '\n';
    } catch (const std::exception& e) {
        std::cerr << cli::error_json(e).dump() << '\n';
        return 1;
    }
    return 0;
}
