#pragma once

// Data, hyperparameters, sampler state and the deterministic quantities
// derived from them (loadings, species covariance, scaled coefficients).
//
// Labels are 0-based throughout the library: atom 0 is the constrained atom
// with strictly positive entries and species 0 is pinned to it.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sjsdm/gp_kernel.hpp"
#include "sjsdm/rng.hpp"
#include "sjsdm/types.hpp"

namespace sjsdm {

enum class ResponseKind { continuous, binary };
enum class FactorModel { spatial, independent };

[[nodiscard]] std::string to_string(ResponseKind kind);
[[nodiscard]] std::string to_string(FactorModel model);
[[nodiscard]] ResponseKind parse_response_kind(const std::string& s);
[[nodiscard]] FactorModel parse_factor_model(const std::string& s);

struct Dataset {
    SiteSet sites;
    Matrix X;  ///< n x p, standardized columns
    Matrix Y;  ///< n x S
    ResponseKind kind = ResponseKind::continuous;
    std::vector<std::string> species_ids;
    std::vector<bool> holdout;  ///< true = held-out test site; empty = no holdout

    [[nodiscard]] Index n_sites() const noexcept { return Y.rows(); }
    [[nodiscard]] Index n_species() const noexcept { return Y.cols(); }
    [[nodiscard]] Index n_covariates() const noexcept { return X.cols(); }

    /// Throws on shape mismatches, non-binary binary responses, non-finite
    /// values and (when requested) covariate columns that are not
    /// standardized to mean 0 / sd 1 within `tol`.
    void validate(bool check_standardized = true, double tol = 1e-6) const;

    [[nodiscard]] std::vector<std::size_t> train_rows() const;
    [[nodiscard]] std::vector<std::size_t> test_rows() const;
    [[nodiscard]] Dataset rows_subset(const std::vector<std::size_t>& rows) const;
    [[nodiscard]] Dataset train() const { return rows_subset(train_rows()); }
    [[nodiscard]] Dataset test() const { return rows_subset(test_rows()); }
};

/// Mask with round(frac * n) randomly chosen sites set to true.
[[nodiscard]] std::vector<bool> random_holdout(std::size_t n, double frac, RngStream& rng);

struct McmcSchedule {
    long n_iter = 2000;
    long burn_in = 1000;
    long thin = 1;
    double mh_step_phi = 0.1;  ///< sd of the log-phi random walk
    bool adapt_phi = true;     ///< tune the step during burn-in only
    std::uint64_t seed = 1;
    long progress_every = 0;   ///< 0 disables progress lines

    [[nodiscard]] long retained() const noexcept {
        return n_iter > burn_in ? (n_iter - burn_in) / thin : 0;
    }
};

struct Hyperparams {
    int r = 5;           ///< number of latent factors
    int N = 150;         ///< DP truncation level (number of atoms)
    double alpha = 1.0;  ///< DP precision
    double a = 2.0;      ///< sigma^2 ~ IG(a/2, b/2)
    double b = 0.1;
    double c = 100.0;    ///< coefficient prior variance
    double phi_min = std::numeric_limits<double>::quiet_NaN();
    double phi_max = std::numeric_limits<double>::quiet_NaN();
    double eta_shape = 0.5;  ///< eta_h ~ IG(eta_shape, eta_rate)
    double eta_rate = 1e-4;
    double iw_nu = 2.0;      ///< D_Z ~ IW(nu + r - 1, 2 nu diag(1/eta))
    FactorModel factors = FactorModel::spatial;
    std::optional<double> sigma2_fixed;
    StickVariant stick = StickVariant::printed;
    int orthant_sweeps = 10;
    double jitter = 0.0;
    McmcSchedule mcmc;

    /// Throws InvalidArgument when a constraint is violated; returns
    /// non-fatal warnings (e.g. N > S).
    std::vector<std::string> validate(Index n_species) const;

    [[nodiscard]] double iw_df() const noexcept { return iw_nu + r - 1.0; }
};

/// Fills phi bounds from the training sites (when unset) and fixes
/// sigma^2 = 1 for binary responses (when unset).
[[nodiscard]] Hyperparams resolve_hyperparams(Hyperparams h, const Dataset& train);

struct ModelState {
    Matrix B;             ///< S x p
    Matrix Z;             ///< N x r atoms
    std::vector<int> k;   ///< S labels in [0, N)
    Vector p;             ///< N stick weights
    Matrix W;             ///< n x r factors at training sites
    double sigma2 = 1.0;
    double phi = 1.0;
    Matrix DZ;            ///< r x r
    Vector eta;           ///< r
    Matrix U;             ///< n x S latent responses (binary) or the data (continuous)

    /// Throws InvalidArgument naming the first violated invariant.
    void check_invariants(const Dataset& data, const Hyperparams& hyper) const;
};

[[nodiscard]] ModelState initial_state(const Dataset& train, const Hyperparams& hyper,
                                       RngStream& rng);

/// Row l of the result is row k[l] of Z.
[[nodiscard]] Matrix lambda_of(const Matrix& Z, const std::vector<int>& k);
/// Lambda Lambda' + sigma2 I
[[nodiscard]] Matrix sigma_star(const Matrix& lambda, double sigma2);
/// Row l divided by sqrt(Sigma*_ll).
[[nodiscard]] Matrix scaled_coefficients(const Matrix& b_tilde, const Matrix& sigma_star);
[[nodiscard]] Matrix correlation_of(const Matrix& sigma_star);

/// Per-atom occupancy counts for labels in [0, n_atoms).
[[nodiscard]] std::vector<int> atom_counts(const std::vector<int>& k, int n_atoms);
/// Labels renumbered by first appearance (0, 1, ...); equal iff same partition.
[[nodiscard]] std::vector<int> canonical_labels(const std::vector<int>& k);

struct Interval {
    double lower;
    double upper;
};

/// Empirical quantile with linear interpolation between order statistics.
[[nodiscard]] double empirical_quantile(std::vector<double> values, double q);
[[nodiscard]] Interval credible_interval(const std::vector<double>& values, double level = 0.95);

struct ScalarSummary {
    double mean;
    double sd;
    Interval ci95;
};
[[nodiscard]] ScalarSummary summarize(const std::vector<double>& values);

/// Retained post-burn-in states of one or more chains.
struct PosteriorDraws {
    std::vector<ModelState> states;  ///< U is not retained
    FactorModel factors = FactorModel::spatial;
    ResponseKind kind = ResponseKind::continuous;
    std::vector<std::string> train_site_ids;
    std::vector<std::string> species_ids;
    double mh_acceptance = 0.0;    ///< post-burn-in acceptance rate of the phi step
    double final_mh_step = 0.0;
    std::vector<double> log_joint;  ///< optional diagnostic trace

    [[nodiscard]] std::size_t size() const noexcept { return states.size(); }
    [[nodiscard]] bool empty() const noexcept { return states.empty(); }

    [[nodiscard]] std::vector<double> phi_trace() const;
    [[nodiscard]] std::vector<double> sigma2_trace() const;
    [[nodiscard]] std::vector<double> b_trace(Index species, Index covariate) const;
    [[nodiscard]] std::vector<double> occupied_trace() const;

    [[nodiscard]] Matrix mean_B() const;
    [[nodiscard]] Matrix mean_lambda() const;
    [[nodiscard]] Matrix mean_W() const;
    [[nodiscard]] double mean_sigma2() const;
    /// Sigma-hat built from posterior means of Lambda and sigma^2.
    [[nodiscard]] Matrix sigma_star_hat() const;

    /// Most frequent partition among retained draws, in canonical labels,
    /// with its posterior frequency.
    [[nodiscard]] std::pair<std::vector<int>, double> max_posterior_labels() const;
    /// Fraction of draws in which species l and l' share an atom.
    [[nodiscard]] Matrix label_cooccurrence() const;

    void append(const PosteriorDraws& other);
};

}  // namespace sjsdm
