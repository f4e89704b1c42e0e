#include "sjsdm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sjsdm/error.hpp"

namespace sjsdm {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
    return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(stream),
                         static_cast<std::uint32_t>(stream >> 32), 0x5eedu};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    auto seq = make_seed_seq(seed, stream_id);
    engine_.seed(seq);
}

double RngStream::uniform() {
    for (;;) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::gamma(double shape, double rate) {
    using P = std::gamma_distribution<double>::param_type;
    return gamma_(engine_, P(shape, 1.0)) / rate;
}

double RngStream::log_gamma(double shape) {
    using P = std::gamma_distribution<double>::param_type;
    if (shape >= 1.0) return std::log(gamma_(engine_, P(shape, 1.0)));
    // G(shape) = G(shape + 1) * U^{1/shape}
    const double g = gamma_(engine_, P(shape + 1.0, 1.0));
    return std::log(g) + std::log(uniform()) / shape;
}

double RngStream::beta(double a, double b) {
    const double la = log_gamma(a);
    const double lb = log_gamma(b);
    return 1.0 / (1.0 + std::exp(lb - la));
}

std::size_t RngStream::categorical_from_log(std::span<const double> log_weights) {
    if (log_weights.empty()) throw InvalidArgument("categorical draw over zero categories");
    const double mx = *std::max_element(log_weights.begin(), log_weights.end());
    if (!std::isfinite(mx)) throw InvalidArgument("categorical weights are all zero or non-finite");
    double total = 0.0;
    for (double lw : log_weights) total += std::exp(lw - mx);
    const double target = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < log_weights.size(); ++j) {
        const double w = std::exp(log_weights[j] - mx);
        if (w > 0.0) last_positive = j;
        acc += w;
        if (target < acc) return j;
    }
    return last_positive;
}

std::size_t RngStream::uniform_index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(engine_);
}

Vector sample_mvn_chol(const Vector& mean, const Matrix& chol_lower, RngStream& rng) {
    if (chol_lower.rows() != mean.size() || chol_lower.cols() != mean.size())
        throw DimensionMismatch("mean and Cholesky factor dimensions differ");
    Vector z(mean.size());
    for (Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return mean + chol_lower.triangularView<Eigen::Lower>() * z;
}

double sample_std_normal_above(double lower, RngStream& rng) {
    if (lower < 0.25) {
        // Plain rejection: acceptance probability >= 0.4.
        for (;;) {
            const double z = rng.normal();
            if (z > lower) return z;
        }
    }
    // Exponential proposal with the optimal rate (Robert, 1995).
    const double lambda = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
    for (;;) {
        const double z = lower - std::log(rng.uniform()) / lambda;
        const double d = z - lambda;
        if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
    }
}

double sample_truncnorm_uni(double mean, double sd, TruncSide side, RngStream& rng) {
    if (!(sd > 0.0)) throw InvalidArgument("truncated normal needs sd > 0");
    for (;;) {
        if (side == TruncSide::above0) {
            const double x = mean + sd * sample_std_normal_above(-mean / sd, rng);
            if (x > 0.0 && std::isfinite(x)) return x;
        } else {
            const double x = mean - sd * sample_std_normal_above(mean / sd, rng);
            if (x <= 0.0 && std::isfinite(x)) return x;
        }
    }
}

Vector sample_truncnorm_orthant(const Vector& mean, const Matrix& cov, RngStream& rng,
                                const OrthantOptions& opts) {
    const Index r = mean.size();
    if (cov.rows() != r || cov.cols() != r)
        throw DimensionMismatch("orthant sampler: mean and covariance dimensions differ");
    if (r == 1) {
        if (!(cov(0, 0) > 0.0)) throw DegenerateCovariance("orthant sampler: variance not positive");
        Vector out(1);
        out[0] = sample_truncnorm_uni(mean[0], std::sqrt(cov(0, 0)), TruncSide::above0, rng);
        return out;
    }
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success)
        throw DegenerateCovariance("orthant sampler: covariance is not positive definite");
    const Matrix prec = llt.solve(Matrix::Identity(r, r));

    Vector x(r);
    if (opts.start) {
        if (opts.start->size() != r) throw DimensionMismatch("orthant sampler: start has wrong size");
        x = *opts.start;
        for (Index i = 0; i < r; ++i) {
            if (!(x[i] > 0.0)) throw InvalidArgument("orthant sampler: start must be positive");
        }
    } else {
        for (Index i = 0; i < r; ++i) x[i] = std::max(mean[i], 0.0) + std::sqrt(cov(i, i));
    }
    const int sweeps = std::max(opts.sweeps, 1);
    for (int s = 0; s < sweeps; ++s) {
        for (Index i = 0; i < r; ++i) {
            const double qii = prec(i, i);
            double acc = 0.0;
            for (Index j = 0; j < r; ++j) {
                if (j != i) acc += prec(i, j) * (x[j] - mean[j]);
            }
            const double m = mean[i] - acc / qii;
            x[i] = sample_truncnorm_uni(m, std::sqrt(1.0 / qii), TruncSide::above0, rng);
        }
    }
    return x;
}

double sample_inv_gamma(double shape, double rate, RngStream& rng) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw InvalidArgument("inverse gamma needs positive shape and rate");
    for (;;) {
        const double g = rng.gamma(shape, rate);
        if (g > 0.0) return 1.0 / g;
    }
}

Matrix sample_inv_wishart(double df, const Matrix& scale, RngStream& rng) {
    const Index d = scale.rows();
    if (scale.cols() != d) throw DimensionMismatch("inverse Wishart scale must be square");
    if (!(df > static_cast<double>(d) - 1.0))
        throw InvalidArgument("inverse Wishart needs df > dim - 1");
    Eigen::LLT<Matrix> llt(scale);
    if (llt.info() != Eigen::Success)
        throw DegenerateCovariance("inverse Wishart scale is not positive definite");
    const Matrix lpsi = llt.matrixL();

    // Bartlett factor A of a Wishart(df, I) draw.
    Matrix a = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
        a(i, i) = std::sqrt(rng.gamma(0.5 * (df - static_cast<double>(i)), 0.5));
        for (Index j = 0; j < i; ++j) a(i, j) = rng.normal();
    }
    // D = (L_psi A^{-T}) (L_psi A^{-T})'
    const Matrix t = a.triangularView<Eigen::Lower>()
                         .solve(lpsi.transpose())
                         .transpose();  // L_psi A^{-T}
    Matrix out = t * t.transpose();
    return 0.5 * (out + out.transpose());
}

BetaShapes gd_stick_shapes(double alpha, std::span<const int> counts, std::size_t j,
                           StickVariant variant) {
    const auto n_atoms = static_cast<double>(counts.size());
    double tail = 0.0;
    for (std::size_t s = j + 1; s < counts.size(); ++s) tail += counts[s];
    const double b0 = variant == StickVariant::printed
                          ? (n_atoms - 1.0) / n_atoms * alpha
                          : (n_atoms - static_cast<double>(j + 1)) / n_atoms * alpha;
    return BetaShapes{alpha / n_atoms + counts[j], b0 + tail};
}

Vector sample_gd_stick(double alpha, std::span<const int> counts, RngStream& rng,
                       StickVariant variant) {
    const std::size_t n = counts.size();
    if (n < 2) throw InvalidArgument("stick-breaking needs at least two atoms");
    if (!(alpha > 0.0)) throw InvalidArgument("DP precision alpha must be positive");
    for (int c : counts) {
        if (c < 0) throw InvalidArgument("atom counts must be nonnegative");
    }
    Vector p(static_cast<Index>(n));
    double remaining = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const auto [a, b] = gd_stick_shapes(alpha, counts, j, variant);
        const double xi = rng.beta(a, b);
        const double pj = std::min(remaining, xi * remaining);
        p[static_cast<Index>(j)] = pj;
        remaining = std::max(remaining - pj, 0.0);
    }
    p[static_cast<Index>(n - 1)] = remaining;
    return p;
}

}  // namespace sjsdm
