#include "sjsdm/simulate.hpp"

#include <cmath>

#include "sjsdm/error.hpp"

namespace sjsdm {

void SimConfig::validate() const {
    if (n < 2 || S < 1 || p < 1 || q < 1) throw InvalidArgument("simulation needs n >= 2 and S, p, q >= 1");
    if (K_true < 1 || K_true > S) throw InvalidArgument("K_true must lie in [1, S]");
    if (!(phi_true > 0.0)) throw InvalidArgument("phi_true must be positive");
    if (!(sigma2_true >= 0.0)) throw InvalidArgument("sigma2_true must be nonnegative");
    if (atom_value_set.empty()) throw InvalidArgument("atom value set is empty");
    if (!(domain_side > 0.0)) throw InvalidArgument("domain_side must be positive");
    if (min_hamming < 1 || min_hamming > q) throw InvalidArgument("min_hamming must lie in [1, q]");
    if (sites && static_cast<Index>(sites->size()) != n)
        throw DimensionMismatch("supplied sites do not match n");
}

namespace {

int hamming(const Matrix& Z, Index a, Index b) {
    int d = 0;
    for (Index h = 0; h < Z.cols(); ++h) d += Z(a, h) != Z(b, h) ? 1 : 0;
    return d;
}

Matrix draw_atoms(const SimConfig& cfg, RngStream& rng) {
    Matrix Z(cfg.K_true, cfg.q);
    Z.row(0).setConstant(cfg.first_atom_value);
    for (Index j = 1; j < cfg.K_true; ++j) {
        bool ok = false;
        for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
            for (Index h = 0; h < cfg.q; ++h)
                Z(j, h) = cfg.atom_value_set[rng.uniform_index(cfg.atom_value_set.size())];
            ok = true;
            for (Index i = 0; i < j && ok; ++i) ok = hamming(Z, i, j) >= cfg.min_hamming;
        }
        if (!ok) throw InvalidArgument("could not draw distinct atoms after 10000 attempts");
    }
    return Z;
}

void standardize_columns(Matrix& X) {
    const double n = static_cast<double>(X.rows());
    for (Index c = 0; c < X.cols(); ++c) {
        const double mean = X.col(c).mean();
        X.col(c).array() -= mean;
        const double sd = std::sqrt(X.col(c).squaredNorm() / (n - 1.0));
        if (sd > 0.0) X.col(c) /= sd;
    }
}

}  // namespace

Simulated gen_continuous(const SimConfig& cfg, std::uint64_t stream_id) {
    cfg.validate();
    RngStream rng(cfg.seed, stream_id);
    Simulated out;
    Dataset& d = out.data;
    SimTruth& t = out.truth;

    if (cfg.sites) {
        d.sites = *cfg.sites;
    } else {
        std::vector<double> x(static_cast<std::size_t>(cfg.n)), y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = cfg.domain_side * rng.uniform();
            y[i] = cfg.domain_side * rng.uniform();
        }
        d.sites = SiteSet::from_coords(std::move(x), std::move(y));
    }
    d.X.resize(cfg.n, cfg.p);
    for (Index c = 0; c < cfg.p; ++c)
        for (Index i = 0; i < cfg.n; ++i) d.X(i, c) = rng.normal();
    standardize_columns(d.X);

    t.B.resize(cfg.S, cfg.p);
    for (Index l = 0; l < cfg.S; ++l)
        for (Index c = 0; c < cfg.p; ++c) t.B(l, c) = rng.normal();
    t.Z = draw_atoms(cfg, rng);
    t.k.assign(static_cast<std::size_t>(cfg.S), 0);
    for (std::size_t l = 1; l < t.k.size(); ++l)
        t.k[l] = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(cfg.K_true)));

    const SpatialCovariance cov = build_exp_cov(d.sites, cfg.phi_true);
    t.W.resize(cfg.n, cfg.q);
    for (Index h = 0; h < cfg.q; ++h) {
        Vector z(cfg.n);
        for (Index i = 0; i < cfg.n; ++i) z[i] = rng.normal();
        t.W.col(h) = cov.chol() * z;
    }
    const Matrix lambda = lambda_of(t.Z, t.k);
    t.U = d.X * t.B.transpose() + t.W * lambda.transpose();
    const double sd = std::sqrt(cfg.sigma2_true);
    for (Index l = 0; l < cfg.S; ++l)
        for (Index i = 0; i < cfg.n; ++i) t.U(i, l) += sd * rng.normal();
    t.phi = cfg.phi_true;
    t.sigma2 = cfg.sigma2_true;
    t.Sigma_star = lambda * lambda.transpose();
    t.Sigma_star.diagonal().array() += cfg.sigma2_true;

    d.kind = ResponseKind::continuous;
    d.Y = t.U;
    d.species_ids.reserve(static_cast<std::size_t>(cfg.S));
    for (Index l = 0; l < cfg.S; ++l) d.species_ids.push_back("sp" + std::to_string(l + 1));
    return out;
}

Simulated gen_binary(const SimConfig& cfg, std::uint64_t stream_id) {
    Simulated out = gen_continuous(cfg, stream_id);
    out.data.kind = ResponseKind::binary;
    out.data.Y = out.truth.U.unaryExpr([](double u) { return u > 0.0 ? 1.0 : 0.0; });
    return out;
}

Simulated simulate(const SimConfig& cfg, std::uint64_t stream_id) {
    return cfg.kind == ResponseKind::binary ? gen_binary(cfg, stream_id)
                                            : gen_continuous(cfg, stream_id);
}

}  // namespace sjsdm
