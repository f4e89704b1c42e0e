#include <cmath>

#include "doctest.h"
#include "sjsdm/error.hpp"
#include "sjsdm/gibbs.hpp"
#include "sjsdm/metrics.hpp"
#include "sjsdm/normal.hpp"
#include "sjsdm/simulate.hpp"

using namespace sjsdm;

TEST_CASE("pmse") {
    Matrix t(2, 3);
    t << 1, 2, 3, 4, 5, 6;
    CHECK(pmse(t, t) == 0.0);
    CHECK(pmse(t, t.array() + 1.0) == 1.0);
    Matrix p = t;
    p(1, 2) += 3.0;
    CHECK(std::abs(pmse(t, p) - 9.0 / 6.0) < 1e-12);
    CHECK_THROWS_AS((void)pmse(t, Matrix::Zero(3, 2)), DimensionMismatch);
}

TEST_CASE("tjur r") {
    Matrix y(4, 3);
    y << 1, 0, 1, 0, 0, 1, 1, 1, 1, 0, 1, 1;
    const TjurResult perfect = tjur_r(y, y);
    CHECK(perfect.per_species[0] == 1.0);
    CHECK(perfect.per_species[1] == 1.0);
    CHECK(std::isnan(perfect.per_species[2]));
    CHECK(perfect.n_excluded == 1);
    CHECK(perfect.mean == 1.0);
    CHECK(tjur_r(y, Matrix::Constant(4, 3, 0.3)).per_species[0] == 0.0);
    Matrix pi(4, 3);
    pi << 0.9, 0.2, 0.5, 0.4, 0.1, 0.5, 0.7, 0.6, 0.5, 0.2, 0.8, 0.5;
    const TjurResult r = tjur_r(y, pi);
    CHECK(std::abs(r.per_species[0] - ((0.9 + 0.7) / 2 - (0.4 + 0.2) / 2)) < 1e-12);
    CHECK(std::abs(r.per_species[1] - ((0.6 + 0.8) / 2 - (0.2 + 0.1) / 2)) < 1e-12);
    CHECK(std::abs(r.mean - (r.per_species[0] + r.per_species[1]) / 2) < 1e-12);
}

TEST_CASE("frobenius gap") {
    const Matrix a = Matrix::Random(5, 5);
    CHECK(frobenius_gap(a, a) == 0.0);
    CHECK(std::abs(frobenius_gap(a, a + Matrix::Identity(5, 5)) - std::sqrt(5.0)) < 1e-12);
    Matrix b = a;
    b(0, 1) += 3;
    b(2, 2) -= 4;
    CHECK(std::abs(frobenius_gap(a, b) - 5.0) < 1e-12);
}

TEST_CASE("adjusted rand index") {
    CHECK(adjusted_rand_index({0, 0, 1, 1}, {5, 5, 2, 2}) == 1.0);
    CHECK(adjusted_rand_index({0, 0, 1, 1, 2, 2}, {0, 0, 1, 1, 2, 2}) == 1.0);
    // Hand-computed: contingency [[2,1],[0,2]] on five items.
    CHECK(std::abs(adjusted_rand_index({0, 0, 0, 1, 1}, {0, 0, 1, 1, 1}) - (2.0 - 1.6) / (4.0 - 1.6)) < 1e-12);
}

TEST_CASE("inefficiency factor") {
    RngStream g(3);
    std::vector<double> iid(100000), ar(100000);
    double x = 0.0;
    for (std::size_t t = 0; t < ar.size(); ++t) {
        iid[t] = g.normal();
        x = 0.5 * x + std::sqrt(0.75) * g.normal();
        ar[t] = x;
    }
    CHECK(std::abs(inefficiency_factor(iid) - 1.0) < 0.1);
    CHECK(std::abs(inefficiency_factor(ar) - 3.0) < 0.3);
    CHECK_THROWS_AS((void)inefficiency_factor(std::vector<double>(50, 1.0)), InvalidArgument);
    CHECK_THROWS_AS((void)inefficiency_factor(std::vector<double>(500, 1.0)), InvalidArgument);
}

namespace {

/// Binary test data with handcrafted draws; factors are independent so the
/// kriging variance is 1 everywhere.
struct PairCase {
    Dataset train, test;
    PosteriorDraws draws;
};

PairCase pair_case(const Matrix& Z, const std::vector<int>& k, double sigma2) {
    PairCase c;
    c.train.sites = SiteSet::from_coords({0, 1, 2}, {0, 0, 0});
    c.train.X = Matrix::Zero(3, 1);
    c.train.Y = Matrix::Zero(3, 2);
    c.train.kind = ResponseKind::binary;
    c.train.species_ids = {"a", "b"};
    c.test.sites = SiteSet::from_coords({5, 6, 7, 8}, {0, 0, 0, 0});
    c.test.X = Matrix(4, 1);
    c.test.X << -1, 0.5, 1, 2;
    c.test.Y = Matrix(4, 2);
    c.test.Y << 1, 1, 0, 1, 1, 0, 0, 0;
    c.test.kind = ResponseKind::binary;
    c.test.species_ids = {"a", "b"};
    c.draws.kind = ResponseKind::binary;
    c.draws.factors = FactorModel::independent;
    ModelState st;
    st.B = Matrix(2, 1);
    st.B << 0.4, -0.3;
    st.Z = Z;
    st.k = k;
    st.W = Matrix::Zero(3, Z.cols());
    st.sigma2 = sigma2;
    st.phi = 1.0;
    c.draws.states.push_back(st);
    return c;
}

}  // namespace

TEST_CASE("conditional tjur reduces to the marginal under zero correlation") {
    Matrix Z(2, 2);
    Z << 1.0, 0.0, 0.0, 1.0;
    const PairCase c = pair_case(Z, {0, 1}, 1.0);
    const ConditionalTjur r = conditional_tjur(c.draws, c.train, c.test, 0, 1);
    for (Index i = 0; i < 4; ++i) {
        const double mt = c.test.X(i, 0) * 0.4;
        CHECK(std::abs(r.probability[std::size_t(i)] - norm_cdf(mt / std::sqrt(2.0))) < 1e-12);
    }
    CHECK(r.counts[1][1] == 1);
    CHECK(r.counts[0][1] == 1);
    CHECK(r.counts[1][0] == 1);
    CHECK(r.counts[0][0] == 1);
    REQUIRE(r.given_present.has_value());
    CHECK(std::abs(*r.given_present - (r.probability[0] - r.probability[1])) < 1e-12);
}

TEST_CASE("conditional tjur with comonotone species") {
    Matrix Z(2, 1);
    Z << 1.0, 0.5;
    PairCase c = pair_case(Z, {0, 0}, 1e-12);
    c.draws.states[0].B.setZero();
    const ConditionalTjur r = conditional_tjur(c.draws, c.train, c.test, 0, 1);
    CHECK(r.probability[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.probability[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.probability[3] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK_THROWS_AS((void)conditional_tjur(c.draws, c.train, c.test, 0, 0), InvalidArgument);
}

TEST_CASE("orthogonalization identities on a short fit") {
    SimConfig cfg;
    cfg.n = 25;
    cfg.S = 6;
    cfg.q = 2;
    cfg.K_true = 2;
    const Simulated s = simulate(cfg);
    Hyperparams h;
    h.r = 2;
    h.N = 5;
    h.mcmc.n_iter = 60;
    h.mcmc.burn_in = 20;
    const PosteriorDraws d = run_chain(s.data, h);
    const Orthogonalized o = orthogonalize(d, s.data);
    CHECK(o.max_orthogonality_error < 1e-10);
    CHECK(o.max_decomposition_error < 1e-10);
    CHECK((o.B_star_lower.array() <= o.B_star_upper.array()).all());

    PosteriorDraws zero = d;
    for (ModelState& st : zero.states) st.W.setZero();
    const Orthogonalized z = orthogonalize(zero, s.data);
    CHECK((z.B_star_mean - zero.mean_B()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(z.W_star_mean.cwiseAbs().maxCoeff() < 1e-12);
}
