#include "sjsdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sjsdm/error.hpp"
#include "sjsdm/normal.hpp"

namespace sjsdm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(std::string(what) + ": shapes differ");
}

}  // namespace

double pmse(const Matrix& truth, const Matrix& pred) {
    require_same_shape(truth, pred, "pmse");
    if (truth.size() == 0) throw InvalidArgument("pmse of an empty matrix");
    return (truth - pred).squaredNorm() / static_cast<double>(truth.size());
}

TjurResult tjur_r(const Matrix& y, const Matrix& pi_hat) {
    require_same_shape(y, pi_hat, "tjur_r");
    TjurResult out;
    out.per_species.assign(static_cast<std::size_t>(y.cols()), std::numeric_limits<double>::quiet_NaN());
    double total = 0.0;
    std::size_t defined = 0;
    for (Index l = 0; l < y.cols(); ++l) {
        double s1 = 0.0, s0 = 0.0;
        std::size_t n1 = 0, n0 = 0;
        for (Index i = 0; i < y.rows(); ++i) {
            if (y(i, l) == 1.0) {
                s1 += pi_hat(i, l);
                ++n1;
            } else {
                s0 += pi_hat(i, l);
                ++n0;
            }
        }
        if (n1 == 0 || n0 == 0) {
            ++out.n_excluded;
            continue;
        }
        const double tr = s1 / static_cast<double>(n1) - s0 / static_cast<double>(n0);
        out.per_species[static_cast<std::size_t>(l)] = tr;
        total += tr;
        ++defined;
    }
    if (defined == 0) throw InvalidArgument("Tjur R is undefined for every species");
    out.mean = total / static_cast<double>(defined);
    return out;
}

ConditionalTjur conditional_tjur(const PosteriorDraws& draws, const Dataset& train,
                                 const Dataset& test, Index target, Index condition, double jitter) {
    if (draws.kind != ResponseKind::binary)
        throw InvalidArgument("conditional Tjur R needs binary responses");
    if (draws.empty()) throw InvalidArgument("no retained draws");
    const Index S = test.n_species();
    if (target < 0 || target >= S || condition < 0 || condition >= S || target == condition)
        throw InvalidArgument("conditional Tjur R needs two distinct valid species");
    const Index m = test.n_sites();
    ConditionalTjur out;
    out.probability.assign(static_cast<std::size_t>(m), 0.0);
    FactorKriging kriging(train.sites, test.sites, draws.factors, jitter);

    for (const ModelState& st : draws.states) {
        const Matrix lambda = lambda_of(st.Z, st.k);
        const auto mom = kriging.at(st.phi, st.W);
        const auto lt = lambda.row(target);
        const auto lc = lambda.row(condition);
        const double dot_tc = lt.dot(lc);
        const double tt = lt.squaredNorm();
        const double cc = lc.squaredNorm();
        for (Index i = 0; i < m; ++i) {
            const double mt = test.X.row(i).dot(st.B.row(target)) + mom.mean.row(i).dot(lt);
            const double mc = test.X.row(i).dot(st.B.row(condition)) + mom.mean.row(i).dot(lc);
            const double v = mom.var[i];
            const double sd_t = std::sqrt(st.sigma2 + v * tt);
            const double sd_c = std::sqrt(st.sigma2 + v * cc);
            const double rho = std::clamp(v * dot_tc / (sd_t * sd_c), -1.0, 1.0);
            const double a = mt / sd_t;
            const double b = mc / sd_c;
            const double both = bvn_cdf(a, b, rho);
            double prob;
            if (test.Y(i, condition) == 1.0) {
                const double pc = norm_cdf(b);
                prob = pc > 0.0 ? both / pc : norm_cdf(a);
            } else {
                const double qc = norm_cdf(-b);
                prob = qc > 0.0 ? (norm_cdf(a) - both) / qc : norm_cdf(a);
            }
            out.probability[static_cast<std::size_t>(i)] += std::clamp(prob, 0.0, 1.0);
        }
    }
    for (double& p : out.probability) p /= static_cast<double>(draws.size());

    std::array<std::array<double, 2>, 2> sums{};
    for (Index i = 0; i < m; ++i) {
        const int yt = test.Y(i, target) == 1.0 ? 1 : 0;
        const int yc = test.Y(i, condition) == 1.0 ? 1 : 0;
        out.counts[yt][yc]++;
        sums[yt][yc] += out.probability[static_cast<std::size_t>(i)];
    }
    auto contrast = [&](int yc) -> std::optional<double> {
        if (out.counts[1][yc] == 0 || out.counts[0][yc] == 0) return std::nullopt;
        return sums[1][yc] / static_cast<double>(out.counts[1][yc]) -
               sums[0][yc] / static_cast<double>(out.counts[0][yc]);
    };
    out.given_present = contrast(1);
    out.given_absent = contrast(0);
    return out;
}

double frobenius_gap(const Matrix& truth, const Matrix& estimate) {
    require_same_shape(truth, estimate, "frobenius_gap");
    return (truth - estimate).norm();
}

double inefficiency_factor(const std::vector<double>& trace) {
    const std::size_t n = trace.size();
    if (n < 100) throw InvalidArgument("inefficiency factor needs a trace of length >= 100");
    double mean = 0.0;
    for (double v : trace) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : trace) c0 += (v - mean) * (v - mean);
    if (!(c0 > 0.0)) throw InvalidArgument("inefficiency factor of a constant trace is undefined");
    const std::size_t max_lag = n / 10;
    double sum = 0.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) c += (trace[t] - mean) * (trace[t + lag] - mean);
        const double rho = c / c0;
        if (rho < 0.01) break;
        sum += rho;
    }
    return 1.0 + 2.0 * sum;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("label vectors differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> ra, rb;
    for (std::size_t i = 0; i < n; ++i) {
        joint[{a[i], b[i]}] += 1.0;
        ra[a[i]] += 1.0;
        rb[b[i]] += 1.0;
    }
    auto c2 = [](double x) { return 0.5 * x * (x - 1.0); };
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, v] : joint) sum_ij += c2(v);
    for (const auto& [key, v] : ra) sum_a += c2(v);
    for (const auto& [key, v] : rb) sum_b += c2(v);
    const double expected = sum_a * sum_b / c2(static_cast<double>(n));
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (max_index - expected);
}

Orthogonalized orthogonalize(const PosteriorDraws& draws, const Dataset& train) {
    if (draws.empty()) throw InvalidArgument("no retained draws");
    const Matrix& X = train.X;
    const Index n = X.rows();
    const Index p = X.cols();
    Eigen::LDLT<Matrix> xtx(X.transpose() * X);
    const Eigen::JacobiSVD<Matrix> svd(X);
    if (svd.rank() < p || xtx.info() != Eigen::Success)
        throw InvalidArgument("covariate matrix is rank deficient");
    const Index S = draws.states.front().B.rows();
    const Index r = draws.states.front().W.cols();
    const auto T = static_cast<double>(draws.size());

    Orthogonalized out;
    out.B_star_mean = Matrix::Zero(S, p);
    out.W_star_mean = Matrix::Zero(n, r);
    out.XB_star_mean = Matrix::Zero(n, S);
    out.WL_star_mean = Matrix::Zero(n, S);
    std::vector<std::vector<double>> bstar(static_cast<std::size_t>(S * p));
    for (const ModelState& st : draws.states) {
        if (st.W.rows() != n) throw DimensionMismatch("draw factors do not match the training sites");
        const Matrix lambda = lambda_of(st.Z, st.k);
        const Matrix coef = xtx.solve(X.transpose() * st.W);  // (X'X)^{-1} X' W
        const Matrix w_star = st.W - X * coef;
        const Matrix b_star = st.B + lambda * coef.transpose();
        const Matrix xb = X * b_star.transpose();
        const Matrix wl = w_star * lambda.transpose();
        out.max_orthogonality_error =
            std::max(out.max_orthogonality_error, (X.transpose() * w_star).cwiseAbs().maxCoeff());
        const Matrix total = X * st.B.transpose() + st.W * lambda.transpose();
        out.max_decomposition_error =
            std::max(out.max_decomposition_error, (xb + wl - total).cwiseAbs().maxCoeff());
        out.B_star_mean += b_star;
        out.W_star_mean += w_star;
        out.XB_star_mean += xb;
        out.WL_star_mean += wl;
        for (Index c = 0; c < p; ++c)
            for (Index l = 0; l < S; ++l) bstar[static_cast<std::size_t>(c * S + l)].push_back(b_star(l, c));
    }
    out.B_star_mean /= T;
    out.W_star_mean /= T;
    out.XB_star_mean /= T;
    out.WL_star_mean /= T;
    out.B_star_lower.resize(S, p);
    out.B_star_upper.resize(S, p);
    for (Index c = 0; c < p; ++c)
        for (Index l = 0; l < S; ++l) {
            const Interval ci = credible_interval(bstar[static_cast<std::size_t>(c * S + l)]);
            out.B_star_lower(l, c) = ci.lower;
            out.B_star_upper(l, c) = ci.upper;
        }
    return out;
}

}  // namespace sjsdm
