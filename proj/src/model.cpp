#include "sjsdm/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sjsdm/error.hpp"

namespace sjsdm {

std::string to_string(ResponseKind kind) {
    return kind == ResponseKind::binary ? "binary" : "continuous";
}

std::string to_string(FactorModel model) {
    return model == FactorModel::spatial ? "spatial" : "independent";
}

ResponseKind parse_response_kind(const std::string& s) {
    if (s == "binary") return ResponseKind::binary;
    if (s == "continuous") return ResponseKind::continuous;
    throw InvalidArgument("unknown response kind '" + s + "' (expected continuous|binary)");
}

FactorModel parse_factor_model(const std::string& s) {
    if (s == "spatial") return FactorModel::spatial;
    if (s == "independent") return FactorModel::independent;
    throw InvalidArgument("unknown variant '" + s + "' (expected spatial|independent)");
}

void Dataset::validate(bool check_standardized, double tol) const {
    sites.validate();
    const Index n = Y.rows();
    if (n < 1 || Y.cols() < 1) throw InvalidArgument("dataset needs at least one site and species");
    if (static_cast<Index>(sites.size()) != n || X.rows() != n)
        throw DimensionMismatch("sites, covariates and responses disagree on the number of sites");
    if (static_cast<Index>(species_ids.size()) != Y.cols())
        throw DimensionMismatch("species id count does not match the response columns");
    if (!holdout.empty() && static_cast<Index>(holdout.size()) != n)
        throw DimensionMismatch("holdout mask length does not match the number of sites");
    if (!X.allFinite()) throw InvalidArgument("covariates contain missing or non-finite values");
    if (!Y.allFinite()) throw InvalidArgument("responses contain missing or non-finite values");
    if (kind == ResponseKind::binary) {
        for (Index j = 0; j < Y.cols(); ++j)
            for (Index i = 0; i < n; ++i)
                if (Y(i, j) != 0.0 && Y(i, j) != 1.0)
                    throw InvalidArgument("binary response contains a value other than 0/1 (species '" +
                                          species_ids[static_cast<std::size_t>(j)] + "')");
    }
    if (check_standardized && n > 1) {
        for (Index c = 0; c < X.cols(); ++c) {
            const double mean = X.col(c).mean();
            const double sd = std::sqrt((X.col(c).array() - mean).square().sum() / double(n - 1));
            if (std::abs(mean) > tol || std::abs(sd - 1.0) > tol)
                throw InvalidArgument("covariate column " + std::to_string(c) +
                                      " is not standardized (mean 0, sd 1)");
        }
    }
}

std::vector<std::size_t> Dataset::train_rows() const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_sites()); ++i)
        if (holdout.empty() || !holdout[i]) rows.push_back(i);
    return rows;
}

std::vector<std::size_t> Dataset::test_rows() const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < holdout.size(); ++i)
        if (holdout[i]) rows.push_back(i);
    return rows;
}

Dataset Dataset::rows_subset(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.sites = sites.subset(rows);
    out.kind = kind;
    out.species_ids = species_ids;
    const auto m = static_cast<Index>(rows.size());
    out.X.resize(m, X.cols());
    out.Y.resize(m, Y.cols());
    for (Index i = 0; i < m; ++i) {
        out.X.row(i) = X.row(static_cast<Index>(rows[static_cast<std::size_t>(i)]));
        out.Y.row(i) = Y.row(static_cast<Index>(rows[static_cast<std::size_t>(i)]));
    }
    return out;
}

std::vector<bool> random_holdout(std::size_t n, double frac, RngStream& rng) {
    if (!(frac > 0.0 && frac < 1.0)) throw InvalidArgument("holdout fraction must lie in (0, 1)");
    const auto m = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) std::swap(order[i], order[i + rng.uniform_index(n - i)]);
    std::vector<bool> mask(n, false);
    for (std::size_t i = 0; i < m; ++i) mask[order[i]] = true;
    return mask;
}

std::vector<std::string> Hyperparams::validate(Index n_species) const {
    std::vector<std::string> warnings;
    if (r < 1) throw InvalidArgument("factor count r must be >= 1");
    if (N < 2 || N <= r) throw InvalidArgument("DP truncation N must exceed r (and be >= 2)");
    if (!(alpha > 0.0)) throw InvalidArgument("DP precision alpha must be positive");
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("sigma^2 prior constants a, b must be positive");
    if (!(c > 0.0)) throw InvalidArgument("coefficient prior variance c must be positive");
    if (!(eta_shape > 0.0) || !(eta_rate > 0.0)) throw InvalidArgument("eta prior must be proper");
    if (!(iw_nu > 0.0)) throw InvalidArgument("iw_nu must be positive");
    if (factors == FactorModel::spatial) {
        if (!(phi_min > 0.0) || !(phi_max > phi_min))
            throw InvalidArgument("phi bounds must satisfy 0 < phi_min < phi_max");
    }
    if (sigma2_fixed && !(*sigma2_fixed > 0.0)) throw InvalidArgument("fixed sigma^2 must be positive");
    if (orthant_sweeps < 1) throw InvalidArgument("orthant_sweeps must be >= 1");
    if (jitter < 0.0 || jitter > 1e-8) throw InvalidArgument("jitter must lie in [0, 1e-8]");
    if (mcmc.n_iter < 0 || mcmc.burn_in < 0 || mcmc.burn_in > mcmc.n_iter)
        throw InvalidArgument("MCMC schedule needs 0 <= burn_in <= n_iter");
    if (mcmc.thin < 1) throw InvalidArgument("thin must be >= 1");
    if (!(mcmc.mh_step_phi > 0.0)) throw InvalidArgument("mh_step_phi must be positive");
    if (N > n_species)
        warnings.push_back("truncation level N=" + std::to_string(N) +
                           " exceeds the number of species S=" + std::to_string(n_species));
    return warnings;
}

Hyperparams resolve_hyperparams(Hyperparams h, const Dataset& train) {
    if (h.factors == FactorModel::spatial && (std::isnan(h.phi_min) || std::isnan(h.phi_max))) {
        const PhiBounds pb = phi_bounds(train.sites);
        if (std::isnan(h.phi_min)) h.phi_min = pb.phi_min;
        if (std::isnan(h.phi_max)) h.phi_max = pb.phi_max;
    }
    if (train.kind == ResponseKind::binary && !h.sigma2_fixed) h.sigma2_fixed = 1.0;
    return h;
}

void ModelState::check_invariants(const Dataset& data, const Hyperparams& hyper) const {
    const Index S = data.n_species();
    if (static_cast<Index>(k.size()) != S) throw InvalidArgument("label vector has wrong length");
    if (k.empty() || k[0] != 0) throw InvalidArgument("species 0 must be assigned to atom 0");
    for (int label : k)
        if (label < 0 || label >= Z.rows()) throw InvalidArgument("label out of range");
    for (Index h = 0; h < Z.cols(); ++h)
        if (!(Z(0, h) > 0.0)) throw InvalidArgument("atom 0 must be strictly positive");
    if (p.size() != Z.rows() || (p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-9)
        throw InvalidArgument("stick weights are not on the simplex");
    if (!(sigma2 > 0.0)) throw InvalidArgument("sigma^2 must be positive");
    if (hyper.factors == FactorModel::spatial && !(phi >= hyper.phi_min && phi <= hyper.phi_max))
        throw InvalidArgument("phi outside its prior bounds");
    if (Eigen::LLT<Matrix>(DZ).info() != Eigen::Success)
        throw InvalidArgument("D_Z is not positive definite");
    if (data.kind == ResponseKind::binary) {
        for (Index j = 0; j < S; ++j)
            for (Index i = 0; i < data.n_sites(); ++i)
                if ((U(i, j) > 0.0) != (data.Y(i, j) == 1.0))
                    throw InvalidArgument("latent sign disagrees with the binary response");
    }
}

ModelState initial_state(const Dataset& train, const Hyperparams& hyper, RngStream& rng) {
    const Index n = train.n_sites();
    const Index S = train.n_species();
    const Index p = train.n_covariates();
    ModelState st;
    if (train.kind == ResponseKind::continuous) {
        const Matrix prec = train.X.transpose() * train.X +
                            Matrix::Identity(p, p) / hyper.c;
        st.B = prec.llt().solve(train.X.transpose() * train.Y).transpose();
    } else {
        st.B = Matrix::Zero(S, p);
    }
    st.k.assign(static_cast<std::size_t>(S), 0);
    st.DZ = Matrix::Identity(hyper.r, hyper.r);
    st.eta = Vector::Ones(hyper.r);
    st.Z.resize(hyper.N, hyper.r);
    for (Index j = 0; j < hyper.N; ++j)
        for (Index h = 0; h < hyper.r; ++h) st.Z(j, h) = rng.normal();
    for (Index h = 0; h < hyper.r; ++h) st.Z(0, h) = std::max(std::abs(st.Z(0, h)), 1e-3);
    st.p = Vector::Constant(hyper.N, 1.0 / hyper.N);
    st.W = Matrix::Zero(n, hyper.r);
    st.sigma2 = hyper.sigma2_fixed.value_or(1.0);
    if (hyper.factors == FactorModel::spatial) {
        const double upper = std::min(hyper.phi_max, -std::log(0.05) / median_distance(train.sites));
        st.phi = std::clamp(std::sqrt(hyper.phi_min * std::max(upper, hyper.phi_min)),
                            hyper.phi_min, hyper.phi_max);
    } else {
        st.phi = std::isnan(hyper.phi_min) ? 1.0 : hyper.phi_min;
    }
    if (train.kind == ResponseKind::binary) {
        st.U = train.Y.unaryExpr([](double y) { return y == 1.0 ? 0.5 : -0.5; });
    } else {
        st.U = train.Y;
    }
    return st;
}

Matrix lambda_of(const Matrix& Z, const std::vector<int>& k) {
    Matrix out(static_cast<Index>(k.size()), Z.cols());
    for (std::size_t l = 0; l < k.size(); ++l) {
        if (k[l] < 0 || k[l] >= Z.rows()) throw InvalidArgument("label out of range in lambda_of");
        out.row(static_cast<Index>(l)) = Z.row(k[l]);
    }
    return out;
}

Matrix sigma_star(const Matrix& lambda, double sigma2) {
    if (!(sigma2 > 0.0)) throw InvalidArgument("sigma^2 must be positive");
    Matrix out = lambda * lambda.transpose();
    out.diagonal().array() += sigma2;
    return out;
}

namespace {

Vector inv_sqrt_diag(const Matrix& sigma) {
    if (sigma.rows() != sigma.cols()) throw DimensionMismatch("covariance must be square");
    Vector d = sigma.diagonal();
    if ((d.array() <= 0.0).any()) throw InvalidArgument("covariance diagonal must be positive");
    return d.array().sqrt().inverse();
}

}  // namespace

Matrix scaled_coefficients(const Matrix& b_tilde, const Matrix& sigma) {
    if (b_tilde.rows() != sigma.rows())
        throw DimensionMismatch("coefficients and covariance disagree on S");
    return inv_sqrt_diag(sigma).asDiagonal() * b_tilde;
}

Matrix correlation_of(const Matrix& sigma) {
    const Vector s = inv_sqrt_diag(sigma);
    Matrix out = s.asDiagonal() * sigma * s.asDiagonal();
    out.diagonal().setOnes();
    return out;
}

std::vector<int> atom_counts(const std::vector<int>& k, int n_atoms) {
    std::vector<int> counts(static_cast<std::size_t>(n_atoms), 0);
    for (int label : k) counts.at(static_cast<std::size_t>(label))++;
    return counts;
}

std::vector<int> canonical_labels(const std::vector<int>& k) {
    std::map<int, int> remap;
    std::vector<int> out;
    out.reserve(k.size());
    for (int label : k) {
        auto [it, inserted] = remap.try_emplace(label, static_cast<int>(remap.size()));
        out.push_back(it->second);
    }
    return out;
}

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

Interval credible_interval(const std::vector<double>& values, double level) {
    const double tail = 0.5 * (1.0 - level);
    return Interval{empirical_quantile(values, tail), empirical_quantile(values, 1.0 - tail)};
}

ScalarSummary summarize(const std::vector<double>& values) {
    if (values.empty()) throw InvalidArgument("summary of an empty sample");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return ScalarSummary{mean, sd, credible_interval(values)};
}

std::vector<double> PosteriorDraws::phi_trace() const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.phi);
    return out;
}

std::vector<double> PosteriorDraws::sigma2_trace() const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.sigma2);
    return out;
}

std::vector<double> PosteriorDraws::b_trace(Index species, Index covariate) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.B(species, covariate));
    return out;
}

std::vector<double> PosteriorDraws::occupied_trace() const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) {
        std::vector<int> k = s.k;
        std::sort(k.begin(), k.end());
        out.push_back(static_cast<double>(std::unique(k.begin(), k.end()) - k.begin()));
    }
    return out;
}

namespace {

template <class F>
Matrix mean_of(const std::vector<ModelState>& states, F&& get) {
    if (states.empty()) throw InvalidArgument("posterior summary over zero draws");
    Matrix acc = get(states.front());
    for (std::size_t t = 1; t < states.size(); ++t) acc += get(states[t]);
    return acc / static_cast<double>(states.size());
}

}  // namespace

Matrix PosteriorDraws::mean_B() const {
    return mean_of(states, [](const ModelState& s) { return s.B; });
}

Matrix PosteriorDraws::mean_lambda() const {
    return mean_of(states, [](const ModelState& s) { return lambda_of(s.Z, s.k); });
}

Matrix PosteriorDraws::mean_W() const {
    return mean_of(states, [](const ModelState& s) { return s.W; });
}

double PosteriorDraws::mean_sigma2() const {
    const auto t = sigma2_trace();
    if (t.empty()) throw InvalidArgument("posterior summary over zero draws");
    return std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
}

Matrix PosteriorDraws::sigma_star_hat() const { return sigma_star(mean_lambda(), mean_sigma2()); }

std::pair<std::vector<int>, double> PosteriorDraws::max_posterior_labels() const {
    if (states.empty()) throw InvalidArgument("label summary over zero draws");
    std::map<std::vector<int>, std::size_t> freq;
    for (const auto& s : states) freq[canonical_labels(s.k)]++;
    auto best = freq.begin();
    for (auto it = freq.begin(); it != freq.end(); ++it)
        if (it->second > best->second) best = it;
    return {best->first, static_cast<double>(best->second) / static_cast<double>(states.size())};
}

Matrix PosteriorDraws::label_cooccurrence() const {
    if (states.empty()) throw InvalidArgument("label summary over zero draws");
    const auto S = static_cast<Index>(states.front().k.size());
    Matrix out = Matrix::Zero(S, S);
    for (const auto& s : states)
        for (Index l = 0; l < S; ++l)
            for (Index m = 0; m < S; ++m)
                if (s.k[static_cast<std::size_t>(l)] == s.k[static_cast<std::size_t>(m)]) out(l, m) += 1.0;
    return out / static_cast<double>(states.size());
}

void PosteriorDraws::append(const PosteriorDraws& other) {
    const double n0 = static_cast<double>(states.size());
    const double n1 = static_cast<double>(other.states.size());
    if (n0 + n1 > 0) mh_acceptance = (mh_acceptance * n0 + other.mh_acceptance * n1) / (n0 + n1);
    states.insert(states.end(), other.states.begin(), other.states.end());
    log_joint.insert(log_joint.end(), other.log_joint.begin(), other.log_joint.end());
}

}  // namespace sjsdm
