#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sjsdm/error.hpp"
#include "sjsdm/gibbs.hpp"
#include "sjsdm/normal.hpp"
#include "sjsdm/predict.hpp"
#include "sjsdm/simulate.hpp"

using namespace sjsdm;
using namespace sjsdm::testing;

namespace {

struct Fitted {
    Dataset data;
    PosteriorDraws draws;
};

Fitted fit_small(ResponseKind kind, FactorModel factors, std::uint64_t seed) {
    SimConfig cfg;
    cfg.n = 12;
    cfg.S = 4;
    cfg.p = 2;
    cfg.q = 2;
    cfg.K_true = 2;
    cfg.kind = kind;
    cfg.seed = seed;
    Fitted f;
    f.data = simulate(cfg).data;
    RngStream g(seed, 5);
    f.data.holdout = random_holdout(12, 0.25, g);
    Hyperparams h;
    h.r = 2;
    h.N = 4;
    h.factors = factors;
    h.mcmc.n_iter = 40;
    h.mcmc.burn_in = 30;
    h.mcmc.seed = seed;
    f.draws = run_chain(f.data.train(), h);
    return f;
}

/// Per draw, conditions the joint normal of (W_train, W_test, U_test) on W_train.
Matrix oracle_prediction(const Fitted& f) {
    const Dataset tr = f.data.train(), te = f.data.test();
    const Index n = tr.n_sites(), m = te.n_sites(), S = tr.n_species();
    SiteSet all = tr.sites;
    for (std::size_t i = 0; i < te.sites.size(); ++i) {
        all.x.push_back(te.sites.x[i]);
        all.y.push_back(te.sites.y[i]);
        all.ids.push_back(te.sites.ids[i]);
    }
    Matrix mean = Matrix::Zero(m, S);
    for (const ModelState& st : f.draws.states) {
        const Matrix K = f.draws.factors == FactorModel::spatial ? cross_exp_cov(all, all, st.phi)
                                                                  : Matrix(Matrix::Identity(n + m, n + m));
        const Matrix lam = lambda_of(st.Z, st.k);
        std::vector<Index> a, b;
        for (Index i = 0; i < m; ++i) a.push_back(n + i);
        for (Index i = 0; i < n; ++i) b.push_back(i);
        Matrix pred(m, S);
        for (Index l = 0; l < S; ++l) {
            Vector mu = te.X * st.B.row(l).transpose();
            Vector var = Vector::Constant(m, st.sigma2);
            for (Index h = 0; h < lam.cols(); ++h) {
                const Conditional c = condition_gaussian(Vector::Zero(n + m), K, a, b, st.W.col(h));
                mu += lam(l, h) * c.mean;
                var += lam(l, h) * lam(l, h) * c.cov.diagonal();
            }
            for (Index i = 0; i < m; ++i)
                pred(i, l) = f.draws.kind == ResponseKind::binary ? norm_cdf(mu(i) / std::sqrt(var(i))) : mu(i);
        }
        mean += pred;
    }
    return mean / static_cast<double>(f.draws.size());
}

}  // namespace

TEST_CASE("marginal prediction matches the dense joint-normal predictor") {
    for (ResponseKind kind : {ResponseKind::continuous, ResponseKind::binary})
        for (FactorModel fm : {FactorModel::spatial, FactorModel::independent}) {
            const Fitted f = fit_small(kind, fm, 17);
            const PredictionResult pr = predict_heldout(f.draws, f.data);
            REQUIRE(pr.mean.rows() == 3);
            CHECK((pr.mean - oracle_prediction(f)).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(pr.n_draws == f.draws.size());
        }
}

TEST_CASE("test sites on training sites and far away") {
    Fitted f = fit_small(ResponseKind::continuous, FactorModel::spatial, 18);
    const Dataset tr = f.data.train();
    Dataset te = tr.rows_subset({0});
    const PredictionResult same = predict_heldout(f.draws, tr, te);
    Vector expect = Vector::Zero(tr.n_species());
    for (const ModelState& st : f.draws.states)
        expect += (tr.X.row(0) * st.B.transpose() + st.W.row(0) * lambda_of(st.Z, st.k).transpose()).transpose();
    expect /= double(f.draws.size());
    CHECK((same.mean.row(0).transpose() - expect).cwiseAbs().maxCoeff() < 1e-8);

    te.sites.x[0] += 1e4;
    const PredictionResult far = predict_heldout(f.draws, tr, te);
    const Vector xb = (te.X.row(0) * f.draws.mean_B().transpose()).transpose();
    CHECK((far.mean.row(0).transpose() - xb).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sampled mode is reproducible and near the marginal mode") {
    const Fitted f = fit_small(ResponseKind::binary, FactorModel::spatial, 19);
    PredictOptions o;
    o.mode = PredictMode::sampled;
    o.keep_draws = true;
    const PredictionResult a = predict_heldout(f.draws, f.data, o);
    const PredictionResult b = predict_heldout(f.draws, f.data, o);
    CHECK(a.mean == b.mean);
    CHECK(a.per_draw.size() == f.draws.size());
    CHECK((a.mean.array() >= 0.0).all());
    CHECK((a.mean.array() <= 1.0).all());
    CHECK((a.mean - predict_heldout(f.draws, f.data).mean).cwiseAbs().maxCoeff() < 0.35);
}

TEST_CASE("prediction argument errors") {
    const Fitted f = fit_small(ResponseKind::continuous, FactorModel::spatial, 20);
    CHECK_THROWS_AS((void)predict_heldout(PosteriorDraws{}, f.data), InvalidArgument);
    Dataset te = f.data.test();
    te.X.conservativeResize(Eigen::NoChange, 1);
    CHECK_THROWS_AS((void)predict_heldout(f.draws, f.data.train(), te), DimensionMismatch);
    CHECK(parse_predict_mode("sampled") == PredictMode::sampled);
    CHECK_THROWS_AS((void)parse_predict_mode("mean"), InvalidArgument);
}
