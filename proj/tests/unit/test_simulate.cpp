#include <cmath>
#include <set>

#include "doctest.h"
#include "sjsdm/error.hpp"
#include "sjsdm/normal.hpp"
#include "sjsdm/simulate.hpp"

using namespace sjsdm;

TEST_CASE("continuous simulation structure") {
    SimConfig cfg;
    const Simulated s = gen_continuous(cfg);
    CHECK_NOTHROW(s.data.validate());
    CHECK(s.data.n_sites() == 100);
    CHECK(s.data.n_species() == 40);
    CHECK(s.truth.k[0] == 0);
    CHECK(s.truth.Z.rows() == 4);
    CHECK((s.truth.Z.row(0).array() == 0.5).all());
    CHECK(std::set<int>(s.truth.k.begin(), s.truth.k.end()).size() <= 4);
    CHECK(s.data.Y == s.truth.U);
    CHECK((s.truth.Sigma_star - sigma_star(lambda_of(s.truth.Z, s.truth.k), 1.0)).cwiseAbs().maxCoeff() < 1e-15);
    for (Index i = 0; i < 4; ++i)
        for (Index j = i + 1; j < 4; ++j) CHECK((s.truth.Z.row(i) - s.truth.Z.row(j)).cwiseAbs().maxCoeff() > 0.0);
    for (double x : s.data.sites.x) {
        CHECK(x >= 0.0);
        CHECK(x <= 2.0);
    }
}

TEST_CASE("simulation is deterministic in seed and stream") {
    SimConfig cfg;
    cfg.n = 20;
    cfg.S = 5;
    CHECK(gen_continuous(cfg).data.Y == gen_continuous(cfg).data.Y);
    CHECK(gen_continuous(cfg, 1).data.Y != gen_continuous(cfg).data.Y);
    SimConfig other = cfg;
    other.seed = 2;
    CHECK(gen_continuous(other).data.Y != gen_continuous(cfg).data.Y);
}

TEST_CASE("noiseless regression limit") {
    SimConfig cfg;
    cfg.n = 30;
    cfg.S = 4;
    cfg.sigma2_true = 1e-300;
    cfg.atom_value_set = {0.0};
    cfg.first_atom_value = 1e-300;
    cfg.K_true = 1;
    const Simulated s = gen_continuous(cfg);
    CHECK((s.data.Y - s.data.X * s.truth.B.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("residual covariance approaches Sigma*") {
    SimConfig cfg;
    cfg.n = 2000;
    cfg.S = 6;
    cfg.q = 2;
    cfg.K_true = 3;
    cfg.phi_true = 50.0;  // nearly independent sites
    cfg.domain_side = 40.0;
    const Simulated s = gen_continuous(cfg);
    const Matrix R = s.data.Y - s.data.X * s.truth.B.transpose();
    const Matrix emp = R.transpose() * R / double(cfg.n);
    CHECK((emp - s.truth.Sigma_star).cwiseAbs().maxCoeff() < 0.25);
}

TEST_CASE("binary simulation thresholds the latent responses") {
    SimConfig cfg;
    cfg.kind = ResponseKind::binary;
    cfg.n = 400;
    cfg.S = 8;
    const Simulated s = simulate(cfg);
    CHECK_NOTHROW(s.data.validate());
    CHECK(((s.truth.U.array() > 0.0).cast<double>() == s.data.Y.array()).all());
    CHECK(s.truth.sigma2 == 1.0);

    // Monte Carlo presence rate given the mean surface.
    const Matrix mean = s.data.X * s.truth.B.transpose() + s.truth.W * lambda_of(s.truth.Z, s.truth.k).transpose();
    double pooled = 0.0;
    for (Index l = 0; l < cfg.S; ++l) {
        double expect = 0.0;
        for (Index i = 0; i < cfg.n; ++i) expect += norm_cdf(mean(i, l));
        expect /= double(cfg.n);
        pooled += expect / double(cfg.S);
        CHECK(std::abs(s.data.Y.col(l).mean() - expect) < 0.08);
    }
    CHECK(std::abs(s.data.Y.mean() - pooled) < 0.02);
}

TEST_CASE("configuration errors") {
    SimConfig cfg;
    cfg.K_true = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = SimConfig{};
    cfg.atom_value_set = {0.0};
    cfg.K_true = 4;
    CHECK_THROWS((void)gen_continuous(cfg));
}
