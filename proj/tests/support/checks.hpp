#pragma once

// Statistical checks of the samplers against independent oracles. Each
// returns the observed discrepancy next to its tolerance so that both the
// unit tests and the acceptance report can print and assert on them.

#include <cstdint>
#include <string>
#include <vector>

#include "sjsdm/model.hpp"

namespace sjsdm::testing {

struct CheckResult {
    std::string name;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    std::string detail;

    [[nodiscard]] bool pass() const { return discrepancy <= tolerance; }
};

// distributions
CheckResult check_orthant_independent(std::size_t draws, std::uint64_t seed);
CheckResult check_orthant_correlated(std::size_t draws, std::uint64_t seed);
CheckResult check_inv_gamma_mean(std::size_t draws, std::uint64_t seed);
CheckResult check_inv_gamma_reciprocal_ks(std::size_t draws, std::uint64_t seed);
CheckResult check_inv_wishart_mean(std::size_t draws, std::uint64_t seed);
CheckResult check_inv_wishart_1d(std::size_t draws, std::uint64_t seed);         
CheckResult check_stick_beta_mean(std::size_t draws, std::uint64_t seed);
CheckResult check_stick_concentration(std::size_t draws, std::uint64_t seed);
CheckResult check_half_normal(std::size_t draws, std::uint64_t seed);
CheckResult check_far_tail(std::size_t draws, std::uint64_t seed);

// Gibbs blocks
CheckResult check_step_B(std::size_t draws, std::uint64_t seed);
CheckResult check_step_Z_occupied(std::size_t draws, std::uint64_t seed);
CheckResult check_step_Z_unoccupied(std::size_t draws, std::uint64_t seed);
CheckResult check_step_Z_first_atom(std::size_t draws, std::uint64_t seed);
CheckResult check_step_W(std::size_t draws, std::uint64_t seed, bool spatial);
CheckResult check_step_phi(std::size_t draws, std::uint64_t seed);
CheckResult check_step_k(std::size_t draws, std::uint64_t seed);
CheckResult check_step_sigma2(std::size_t draws, std::uint64_t seed);
CheckResult check_step_DZ_mean(std::size_t draws, std::uint64_t seed);
CheckResult check_step_DZ_eta_quadrature(std::size_t draws, std::uint64_t seed);
CheckResult check_step_U(std::size_t draws, std::uint64_t seed);

/// Every check above at `draws` samples.
std::vector<CheckResult> all_conditional_checks(std::size_t draws, std::uint64_t seed);

/// Marginal-conditional versus successive-conditional simulation on the
/// n=3, S=2, r=1, N=2, p=1 instance; one result per monitored quantity.
/// Binary runs fix sigma^2 = 1 and regenerate Y = 1(U > 0) with U.
std::vector<CheckResult> geweke(std::size_t samples, std::uint64_t seed, std::size_t thin = 1,
                                ResponseKind kind = ResponseKind::continuous);

}  // namespace sjsdm::testing
