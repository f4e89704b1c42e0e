#include <cmath>

#include "doctest.h"
#include "sjsdm/error.hpp"
#include "sjsdm/model.hpp"
#include "sjsdm/rng.hpp"

using namespace sjsdm;

namespace {

Matrix random_matrix(Index r, Index c, RngStream& g) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = g.normal();
    return m;
}

Dataset small_dataset(Index n, Index S, Index p, std::uint64_t seed) {
    RngStream g(seed);
    std::vector<double> x, y;
    for (Index i = 0; i < n; ++i) {
        x.push_back(g.uniform());
        y.push_back(g.uniform());
    }
    Dataset d;
    d.sites = SiteSet::from_coords(x, y);
    d.X = random_matrix(n, p, g);
    for (Index c = 0; c < p; ++c) {
        d.X.col(c).array() -= d.X.col(c).mean();
        d.X.col(c) /= std::sqrt(d.X.col(c).squaredNorm() / double(n - 1));
    }
    d.Y = random_matrix(n, S, g);
    for (Index l = 0; l < S; ++l) d.species_ids.push_back("sp" + std::to_string(l));
    return d;
}

}  // namespace

TEST_CASE("lambda_of gathers atom rows") {
    RngStream g(1);
    const Matrix Z = random_matrix(4, 2, g);
    const Matrix single = lambda_of(Z, std::vector<int>(5, 0));
    for (Index l = 0; l < 5; ++l) CHECK(single.row(l) == Z.row(0));
    CHECK(lambda_of(Z, {0, 1, 2, 3}) == Z);
    const std::vector<int> k{0, 3, 1, 1, 2, 3};
    Matrix Q = Matrix::Zero(6, 4);
    for (Index l = 0; l < 6; ++l) Q(l, k[std::size_t(l)]) = 1.0;
    CHECK((lambda_of(Z, k) - Q * Z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sigma_star") {
    CHECK(sigma_star(Matrix::Zero(3, 2), 0.4) == 0.4 * Matrix::Identity(3, 3));
    const Matrix s = sigma_star(Matrix::Ones(3, 1), 1.0);
    CHECK(s(0, 1) == 1.0);
    CHECK(s(2, 2) == 2.0);
    RngStream g(2);
    const Matrix L = random_matrix(5, 3, g);
    const Matrix S = sigma_star(L, 0.7);
    double worst = 0.0;
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) {
            double v = (i == j) ? 0.7 : 0.0;
            for (Index h = 0; h < 3; ++h) v += L(i, h) * L(j, h);
            worst = std::max(worst, std::abs(S(i, j) - v));
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("scaled coefficients and correlation") {
    RngStream g(3);
    const Matrix B = random_matrix(4, 2, g);
    CHECK(scaled_coefficients(B, Matrix::Identity(4, 4)) == B);
    CHECK((scaled_coefficients(B, 4.0 * Matrix::Identity(4, 4)) - B / 2.0).cwiseAbs().maxCoeff() < 1e-15);
    const Matrix A = random_matrix(4, 4, g);
    const Matrix spd = A * A.transpose() + Matrix::Identity(4, 4);
    const Matrix sc = scaled_coefficients(B, spd);
    for (Index l = 0; l < 4; ++l)
        for (Index c = 0; c < 2; ++c) CHECK(std::abs(sc(l, c) - B(l, c) / std::sqrt(spd(l, l))) < 1e-14);

    CHECK(correlation_of(Vector::Constant(3, 2.5).asDiagonal().toDenseMatrix()) == Matrix::Identity(3, 3));
    Matrix two(2, 2);
    two << 2, 1, 1, 2;
    CHECK(correlation_of(two)(0, 1) == doctest::Approx(0.5));
    const Matrix cor = correlation_of(spd);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j)
            CHECK(std::abs(cor(i, j) - spd(i, j) / std::sqrt(spd(i, i) * spd(j, j))) < 1e-12);
}

TEST_CASE("labels") {
    CHECK(atom_counts({0, 2, 2, 1, 2}, 4) == std::vector<int>{1, 1, 3, 0});
    CHECK(canonical_labels({3, 3, 1, 0, 1}) == std::vector<int>{0, 0, 1, 2, 1});
}

TEST_CASE("quantiles and summaries") {
    CHECK(empirical_quantile({1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(empirical_quantile({1, 2}, 0.25) == doctest::Approx(1.25));
    const Interval ci = credible_interval({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(ci.lower == doctest::Approx(0.25));
    CHECK(ci.upper == doctest::Approx(9.75));
    const ScalarSummary s = summarize({2, 4, 6});
    CHECK(s.mean == 4.0);
    CHECK(s.sd == doctest::Approx(2.0));
}

TEST_CASE("dataset validation and splits") {
    Dataset d = small_dataset(10, 3, 2, 4);
    CHECK_NOTHROW(d.validate());
    Dataset raw = d;
    raw.X.col(0).array() += 1.0;
    CHECK_THROWS_AS(raw.validate(), InvalidArgument);
    CHECK_NOTHROW(raw.validate(false));
    Dataset bin = d;
    bin.kind = ResponseKind::binary;
    CHECK_THROWS_AS(bin.validate(), InvalidArgument);
    Dataset shape = d;
    shape.species_ids.pop_back();
    CHECK_THROWS_AS(shape.validate(), DimensionMismatch);

    RngStream g(5);
    d.holdout = random_holdout(10, 0.2, g);
    CHECK(std::count(d.holdout.begin(), d.holdout.end(), true) == 2);
    CHECK(d.train().n_sites() == 8);
    CHECK(d.test().n_sites() == 2);
    CHECK_THROWS_AS((void)random_holdout(10, 1.0, g), InvalidArgument);
}

TEST_CASE("hyperparameter validation and resolution") {
    Hyperparams h;
    h.r = 2;
    h.N = 5;
    h.phi_min = 0.5;
    h.phi_max = 10.0;
    CHECK(h.validate(40).empty());
    CHECK(!h.validate(3).empty());
    Hyperparams bad = h;
    bad.N = 2;
    CHECK_THROWS_AS((void)bad.validate(10), InvalidArgument);
    bad = h;
    bad.mcmc.burn_in = bad.mcmc.n_iter + 1;
    CHECK_THROWS_AS((void)bad.validate(10), InvalidArgument);

    Dataset d = small_dataset(10, 3, 2, 6);
    d.kind = ResponseKind::binary;
    d.Y = (d.Y.array() > 0.0).cast<double>();
    const Hyperparams r = resolve_hyperparams(Hyperparams{}, d);
    REQUIRE(r.sigma2_fixed.has_value());
    CHECK(*r.sigma2_fixed == 1.0);
    const PhiBounds b = phi_bounds(d.sites);
    CHECK(r.phi_min == b.phi_min);
    CHECK(r.phi_max == b.phi_max);
}

TEST_CASE("initial state satisfies the invariants") {
    Dataset d = small_dataset(12, 6, 2, 7);
    Hyperparams h = resolve_hyperparams(Hyperparams{}, d);
    h.r = 2;
    h.N = 8;
    RngStream g(7);
    const ModelState st = initial_state(d, h, g);
    CHECK_NOTHROW(st.check_invariants(d, h));
    CHECK(st.k[0] == 0);
    ModelState broken = st;
    broken.Z(0, 0) = -1.0;
    CHECK_THROWS_AS(broken.check_invariants(d, h), InvalidArgument);
}

TEST_CASE("posterior draw summaries") {
    PosteriorDraws d;
    for (int t = 0; t < 4; ++t) {
        ModelState s;
        s.B = Matrix::Constant(2, 1, t);
        s.Z = Matrix::Constant(3, 1, 1.0 + t);
        s.k = t < 3 ? std::vector<int>{0, 0} : std::vector<int>{0, 2};
        s.W = Matrix::Zero(1, 1);
        s.sigma2 = 1.0 + t;
        s.phi = 2.0;
        d.states.push_back(s);
    }
    CHECK(d.mean_B()(0, 0) == doctest::Approx(1.5));
    CHECK(d.mean_sigma2() == doctest::Approx(2.5));
    const auto [labels, freq] = d.max_posterior_labels();
    CHECK(labels == std::vector<int>{0, 0});
    CHECK(freq == doctest::Approx(0.75));
    CHECK(d.label_cooccurrence()(0, 1) == doctest::Approx(0.75));
    CHECK(d.occupied_trace() == std::vector<double>{1, 1, 1, 2});
    const Matrix lam = d.mean_lambda();
    CHECK(lam(0, 0) == doctest::Approx(2.5));
    CHECK(d.sigma_star_hat()(0, 0) == doctest::Approx(2.5 * 2.5 + 2.5));
}
