#pragma once

// Synthetic datasets from the model's own generating process: clustered
// loadings on a small value grid, GP factors with a known decay, Gaussian
// noise, and (for binary data) thresholding of the latent responses at 0.

#include <optional>
#include <vector>

#include "sjsdm/model.hpp"

namespace sjsdm {

struct SimConfig {
    Index n = 100;
    Index S = 40;
    Index p = 3;
    Index q = 3;  ///< true factor count
    int K_true = 4;
    double phi_true = 2.0;
    double sigma2_true = 1.0;
    ResponseKind kind = ResponseKind::continuous;
    std::uint64_t seed = 1;
    std::vector<double> atom_value_set{-1.0, -0.5, 0.0, 0.5, 1.0};
    double first_atom_value = 0.5;  ///< every entry of the first true atom
    double domain_side = 2.0;       ///< sites uniform on [0, side]^2 when none are given
    int min_hamming = 1;            ///< minimum number of differing entries between atoms
    std::optional<SiteSet> sites;

    void validate() const;
};

struct SimTruth {
    Matrix B;              ///< S x p
    Matrix Z;              ///< K_true x q
    std::vector<int> k;    ///< 0-based, k[0] = 0
    Matrix W;              ///< n x q
    Matrix Sigma_star;     ///< Lambda Lambda' + sigma2 I
    Matrix U;              ///< n x S latent responses
    double phi = 0.0;
    double sigma2 = 0.0;
};

struct Simulated {
    Dataset data;
    SimTruth truth;
};

/// Continuous responses Y = U. Deterministic given cfg.seed and `stream_id`.
[[nodiscard]] Simulated gen_continuous(const SimConfig& cfg, std::uint64_t stream_id = 0);
/// Binary responses Y = 1(U > 0); the latent U is kept in the truth.
[[nodiscard]] Simulated gen_binary(const SimConfig& cfg, std::uint64_t stream_id = 0);
/// Dispatches on cfg.kind.
[[nodiscard]] Simulated simulate(const SimConfig& cfg, std::uint64_t stream_id = 0);

}  // namespace sjsdm
