#pragma once

// Seeded random streams and the variate generators needed by the sampler.

#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "sjsdm/types.hpp"

namespace sjsdm {

/// A reproducible stream: identical (seed, stream_id) pairs produce identical
/// sequences; distinct stream ids give independently seeded engines.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Gamma with the given shape and rate (mean shape / rate).
    double gamma(double shape, double rate);
    /// log of a Gamma(shape, 1) variate; stays finite for very small shapes.
    double log_gamma(double shape);
    double beta(double a, double b);
    /// Index drawn with probability proportional to exp(log_weights[j]).
    /// Entries equal to -inf have zero probability.
    std::size_t categorical_from_log(std::span<const double> log_weights);
    std::size_t uniform_index(std::size_t n);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::gamma_distribution<double> gamma_;
};

enum class TruncSide { above0, below0 };

enum class StickVariant {
    printed,   ///< second beta shape (N-1)/N * alpha for every j
    standard,  ///< second beta shape (N-j)/N * alpha
};

/// mean + L z with z standard normal.
[[nodiscard]] Vector sample_mvn_chol(const Vector& mean, const Matrix& chol_lower, RngStream& rng);

/// Standard normal conditioned on Z > lower (robust far into either tail).
[[nodiscard]] double sample_std_normal_above(double lower, RngStream& rng);

/// N(mean, sd^2) restricted to (0, inf) or (-inf, 0].
[[nodiscard]] double sample_truncnorm_uni(double mean, double sd, TruncSide side, RngStream& rng);

struct OrthantOptions {
    int sweeps = 10;
    /// Starting point (all coordinates > 0). Passing the previous draw turns
    /// repeated calls into a Markov chain that leaves the target invariant.
    std::optional<Vector> start;
};

/// N(mean, cov) restricted to the positive orthant, via coordinate-wise Gibbs
/// sub-sweeps over the univariate truncated conditionals. One dimension is
/// sampled exactly.
[[nodiscard]] Vector sample_truncnorm_orthant(const Vector& mean, const Matrix& cov,
                                              RngStream& rng, const OrthantOptions& opts = {});

/// Density proportional to x^{-shape-1} exp(-rate / x).
[[nodiscard]] double sample_inv_gamma(double shape, double rate, RngStream& rng);

/// Inverse-Wishart with mean scale / (df - dim - 1); Bartlett construction.
[[nodiscard]] Matrix sample_inv_wishart(double df, const Matrix& scale, RngStream& rng);

/// Truncated stick-breaking weights given atom occupancy counts:
/// xi_j ~ Beta(alpha/N + c_j, b_j + sum_{s>j} c_s), p_N closes the simplex.
[[nodiscard]] Vector sample_gd_stick(double alpha, std::span<const int> counts, RngStream& rng,
                                     StickVariant variant = StickVariant::printed);

/// First and second beta shapes of xi_j (j is 0-based) for the stick sampler.
struct BetaShapes {
    double a;
    double b;
};
[[nodiscard]] BetaShapes gd_stick_shapes(double alpha, std::span<const int> counts, std::size_t j,
                                         StickVariant variant);

}  // namespace sjsdm
