#include "sjsdm/predict.hpp"

#include <cmath>

#include "sjsdm/error.hpp"
#include "sjsdm/normal.hpp"
#include "sjsdm/rng.hpp"

namespace sjsdm {

std::string to_string(PredictMode mode) {
    return mode == PredictMode::sampled ? "sampled" : "marginal";
}

PredictMode parse_predict_mode(const std::string& s) {
    if (s == "marginal") return PredictMode::marginal;
    if (s == "sampled") return PredictMode::sampled;
    throw InvalidArgument("unknown prediction mode '" + s + "' (expected marginal|sampled)");
}

FactorKriging::FactorKriging(const SiteSet& train, const SiteSet& test, FactorModel model,
                             double jitter)
    : train_(&train), test_(&test), model_(model), jitter_(jitter) {
    if (model_ == FactorModel::independent) {
        const auto m = static_cast<Index>(test.size());
        identity_ = Matrix::Identity(m, m);
    }
}

FactorKriging::Moments FactorKriging::at(double phi, const Matrix& w_train) {
    Moments out;
    const auto m = static_cast<Index>(test_->size());
    if (model_ == FactorModel::independent) {
        out.mean = Matrix::Zero(m, w_train.cols());
        out.var = Vector::Ones(m);
        out.factor = &identity_;
        return out;
    }
    if (!cond_ || cond_->phi() != phi)
        cond_ = std::make_unique<GpConditioner>(*train_, *test_, phi, jitter_);
    out.mean = cond_->mean(w_train);
    out.var = cond_->variances();
    out.factor = &cond_->factor();
    return out;
}

PredictionResult predict_heldout(const PosteriorDraws& draws, const Dataset& train,
                                 const Dataset& test, const PredictOptions& opts) {
    if (draws.empty()) throw InvalidArgument("no retained draws to predict from");
    if (test.n_covariates() != train.n_covariates() || test.n_species() != train.n_species())
        throw DimensionMismatch("training and test data disagree on p or S");
    const Index m = test.n_sites();
    const Index S = test.n_species();

    PredictionResult out;
    out.kind = draws.kind;
    out.mode = opts.mode;
    out.site_ids = test.sites.ids;
    out.species_ids = test.species_ids;
    out.n_draws = draws.size();
    out.mean = Matrix::Zero(m, S);
    if (m == 0) return out;

    FactorKriging kriging(train.sites, test.sites, draws.factors, opts.jitter);
    RngStream rng(opts.seed, 0x9e3779b9ULL);
    const bool binary = draws.kind == ResponseKind::binary;

    for (const ModelState& st : draws.states) {
        if (st.W.rows() != train.n_sites())
            throw DimensionMismatch("draw factors do not match the training sites");
        const Matrix lambda = lambda_of(st.Z, st.k);
        const auto mom = kriging.at(st.phi, st.W);
        Matrix latent = test.X * st.B.transpose();
        Matrix pred(m, S);
        if (opts.mode == PredictMode::marginal) {
            latent.noalias() += mom.mean * lambda.transpose();
            if (binary) {
                const Vector load2 = lambda.rowwise().squaredNorm();
                for (Index l = 0; l < S; ++l)
                    for (Index i = 0; i < m; ++i)
                        pred(i, l) = norm_cdf(latent(i, l) / std::sqrt(st.sigma2 + mom.var[i] * load2[l]));
            } else {
                pred = latent;
            }
        } else {
            Matrix z(m, mom.mean.cols());
            for (Index h = 0; h < z.cols(); ++h)
                for (Index i = 0; i < m; ++i) z(i, h) = rng.normal();
            const Matrix w = mom.mean + (*mom.factor) * z;
            latent.noalias() += w * lambda.transpose();
            if (binary) {
                const double sd = std::sqrt(st.sigma2);
                pred = latent.unaryExpr([sd](double v) { return norm_cdf(v / sd); });
            } else {
                pred = latent;
            }
        }
        out.mean += pred;
        if (opts.keep_draws) out.per_draw.push_back(std::move(pred));
    }
    out.mean /= static_cast<double>(draws.size());
    return out;
}

PredictionResult predict_heldout(const PosteriorDraws& draws, const Dataset& data,
                                 const PredictOptions& opts) {
    return predict_heldout(draws, data.train(), data.test(), opts);
}

}  // namespace sjsdm
