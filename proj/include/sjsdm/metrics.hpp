#pragma once

// Predictive and recovery metrics, chain diagnostics and the
// covariate/factor orthogonalization used for interpretation.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sjsdm/model.hpp"
#include "sjsdm/predict.hpp"

namespace sjsdm {

/// Mean squared prediction error over all m x S entries.
[[nodiscard]] double pmse(const Matrix& truth, const Matrix& pred);

struct TjurResult {
    std::vector<double> per_species;  ///< NaN where the species lacks ones or zeros
    double mean = 0.0;                ///< over defined species
    std::size_t n_excluded = 0;
};

/// Mean predicted probability at observed presences minus at absences.
[[nodiscard]] TjurResult tjur_r(const Matrix& y, const Matrix& pi_hat);

struct ConditionalTjur {
    std::optional<double> given_present;  ///< TR of the target among sites where the conditioner is 1
    std::optional<double> given_absent;
    /// counts[target][conditioner] over test sites
    std::array<std::array<std::size_t, 2>, 2> counts{};
    std::vector<double> probability;  ///< per test site, given the observed conditioner state
};

/// Presence probability of `target` at each test site given the observed
/// state of `condition`, averaged over draws, then the Tjur contrast inside
/// each conditioning stratum.
[[nodiscard]] ConditionalTjur conditional_tjur(const PosteriorDraws& draws, const Dataset& train,
                                               const Dataset& test, Index target, Index condition,
                                               double jitter = 0.0);

[[nodiscard]] double frobenius_gap(const Matrix& truth, const Matrix& estimate);

/// 1 + 2 sum of autocorrelations, truncated at the first lag with rho < 0.01
/// or at length / 10.
[[nodiscard]] double inefficiency_factor(const std::vector<double>& trace);

[[nodiscard]] double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

struct Orthogonalized {
    Matrix B_star_mean;   ///< S x p
    Matrix B_star_lower;  ///< 2.5% quantile
    Matrix B_star_upper;  ///< 97.5% quantile
    Matrix W_star_mean;   ///< n x r
    Matrix XB_star_mean;  ///< n x S, covariate surface X B*_l'
    Matrix WL_star_mean;  ///< n x S, residual spatial surface W* Lambda_l'
    double max_orthogonality_error = 0.0;   ///< max |X' W*| over draws
    double max_decomposition_error = 0.0;   ///< max |X B*' + W* Lambda' - X B' - W Lambda'|
};

/// Projects each draw's factors off the column space of X.
[[nodiscard]] Orthogonalized orthogonalize(const PosteriorDraws& draws, const Dataset& train);

}  // namespace sjsdm
