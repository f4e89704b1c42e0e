#include "sjsdm/gp_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "sjsdm/error.hpp"
#include "sjsdm/kernels.hpp"

namespace sjsdm {

void SiteSet::validate() const {
    if (x.size() != y.size() || ids.size() != x.size())
        throw DimensionMismatch("site ids and coordinates have different lengths");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw InvalidArgument("non-finite coordinate at site '" + ids[i] + "'");
    }
    std::unordered_set<std::string> seen;
    seen.reserve(ids.size());
    for (const auto& id : ids) {
        if (!seen.insert(id).second) throw InvalidArgument("duplicate site id '" + id + "'");
    }
}

SiteSet SiteSet::subset(const std::vector<std::size_t>& rows) const {
    SiteSet out;
    out.ids.reserve(rows.size());
    out.x.reserve(rows.size());
    out.y.reserve(rows.size());
    for (auto r : rows) {
        out.ids.push_back(ids.at(r));
        out.x.push_back(x.at(r));
        out.y.push_back(y.at(r));
    }
    return out;
}

SiteSet SiteSet::from_coords(std::vector<double> x, std::vector<double> y) {
    SiteSet s;
    s.ids.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s.ids.push_back("s" + std::to_string(i + 1));
    s.x = std::move(x);
    s.y = std::move(y);
    return s;
}

SpatialCovariance::SpatialCovariance(double phi, Matrix matrix, Matrix chol)
    : phi_(phi), matrix_(std::move(matrix)), chol_(std::move(chol)) {
    log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

Vector SpatialCovariance::solve(const Vector& v) const {
    Vector z = chol_.triangularView<Eigen::Lower>().solve(v);
    return chol_.transpose().triangularView<Eigen::Upper>().solve(z);
}

double SpatialCovariance::quad_form(const Vector& v) const {
    return chol_.triangularView<Eigen::Lower>().solve(v).squaredNorm();
}

namespace {

void check_phi(double phi) {
    if (!(phi > 0.0) || !std::isfinite(phi))
        throw InvalidArgument("decay parameter phi must be positive and finite");
}

// Lower Cholesky factor, rejecting pivots that are not safely positive.
Matrix checked_cholesky(const Matrix& m, const char* what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw DegenerateCovariance(std::string(what) + ": Cholesky factorization failed");
    Matrix l = llt.matrixL();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon();
    for (Index i = 0; i < l.rows(); ++i) {
        const double d = l(i, i);
        if (!std::isfinite(d) || d * d <= floor)
            throw DegenerateCovariance(std::string(what) +
                                       ": matrix is numerically singular (coincident sites?)");
    }
    return l;
}

}  // namespace

SpatialCovariance build_exp_cov(const SiteSet& sites, double phi, double jitter) {
    check_phi(phi);
    sites.validate();
    if (sites.size() < 2) throw InvalidArgument("a spatial covariance needs at least two sites");
    if (jitter < 0.0) throw InvalidArgument("jitter must be nonnegative");
    const auto n = static_cast<Index>(sites.size());
    const auto& kt = kernels::active();
    Matrix c(n, n);
    // Fill the lower triangle column by column (contiguous), then mirror.
    for (Index i = 0; i < n; ++i) {
        kt.exp_decay_row(sites.x.data() + i, sites.y.data() + i, sites.x[i], sites.y[i], phi,
                         &c(i, i), static_cast<std::size_t>(n - i));
        c(i, i) = 1.0 + jitter;
    }
    c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
    Matrix l = checked_cholesky(c, "exponential covariance");
    return SpatialCovariance(phi, std::move(c), std::move(l));
}

Matrix cross_exp_cov(const SiteSet& rows, const SiteSet& cols, double phi) {
    check_phi(phi);
    const auto& kt = kernels::active();
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    // Column j holds exp(-phi d(rows_i, cols_j)) for all i.
    for (Index j = 0; j < out.cols(); ++j) {
        kt.exp_decay_row(rows.x.data(), rows.y.data(), cols.x[j], cols.y[j], phi, &out(0, j),
                         rows.size());
    }
    return out;
}

SpatialSpectrum spectrum_of(const SpatialCovariance& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov.matrix());
    if (es.info() != Eigen::Success) throw DegenerateCovariance("eigendecomposition failed");
    SpatialSpectrum out{es.eigenvectors(), es.eigenvalues().cwiseMax(0.0)};
    return out;
}

PhiBounds phi_bounds_from_distances(double d_min, double d_max) {
    if (!(d_min > 0.0) || !(d_max >= d_min) || !std::isfinite(d_max))
        throw InvalidArgument("phi bounds need 0 < d_min <= d_max");
    return PhiBounds{-std::log(0.05) / d_max, -std::log(0.01) / d_min, d_min, d_max};
}

PhiBounds phi_bounds(const SiteSet& sites) {
    sites.validate();
    const std::size_t n = sites.size();
    if (n < 2) throw InvalidArgument("phi bounds need at least two sites");
    const auto& kt = kernels::active();
    std::vector<double> row(n);
    double d_min = std::numeric_limits<double>::infinity();
    double d_max = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t len = n - i - 1;
        kt.distance_row(sites.x.data() + i + 1, sites.y.data() + i + 1, sites.x[i], sites.y[i],
                        row.data(), len);
        for (std::size_t j = 0; j < len; ++j) {
            const double d = row[j];
            if (d > 0.0) d_min = std::min(d_min, d);
            d_max = std::max(d_max, d);
        }
    }
    if (!(d_max > 0.0)) throw InvalidArgument("all sites coincide; minimum distance undefined");
    return phi_bounds_from_distances(d_min, d_max);
}

double effective_range(double phi, double threshold) {
    check_phi(phi);
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InvalidArgument("effective-range threshold must lie in (0, 1)");
    return -std::log(threshold) / phi;
}

double median_distance(const SiteSet& sites) {
    const std::size_t n = sites.size();
    if (n < 2) throw InvalidArgument("median distance needs at least two sites");
    const auto& kt = kernels::active();
    std::vector<double> all;
    all.reserve(n * (n - 1) / 2);
    std::vector<double> row(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t len = n - i - 1;
        kt.distance_row(sites.x.data() + i + 1, sites.y.data() + i + 1, sites.x[i], sites.y[i],
                        row.data(), len);
        all.insert(all.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(len));
    }
    auto mid = all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2);
    std::nth_element(all.begin(), mid, all.end());
    return *mid;
}

GpConditioner::GpConditioner(const SiteSet& train, const SiteSet& test, double phi, double jitter)
    : phi_(phi) {
    const SpatialCovariance ctt = build_exp_cov(train, phi, jitter);
    const Matrix cpt = cross_exp_cov(test, train, phi);  // m x n
    const auto m = static_cast<Index>(test.size());
    // weights' = C_tt^{-1} C_pt'
    Matrix tmp = ctt.chol().triangularView<Eigen::Lower>().solve(cpt.transpose());
    weights_ = ctt.chol().transpose().triangularView<Eigen::Upper>().solve(tmp).transpose();

    Matrix cpp = m > 0 ? cross_exp_cov(test, test, phi) : Matrix(0, 0);
    Matrix c = cpp - tmp.transpose() * tmp;
    c = 0.5 * (c + c.transpose()).eval();
    if (m > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(c);
        const Vector lambda = es.eigenvalues().cwiseMax(0.0);
        cov_ = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
        factor_ = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
    } else {
        cov_ = Matrix(0, 0);
        factor_ = Matrix(0, 0);
    }
    var_ = cov_.diagonal().cwiseMax(0.0).cwiseMin(1.0);
}

Vector GpConditioner::mean(const Vector& w_train) const {
    if (w_train.size() != weights_.cols())
        throw DimensionMismatch("training GP values do not match the training sites");
    return weights_ * w_train;
}

Matrix GpConditioner::mean(const Matrix& w_train) const {
    if (w_train.rows() != weights_.cols())
        throw DimensionMismatch("training GP values do not match the training sites");
    return weights_ * w_train;
}

GpConditional gp_conditional(const SiteSet& train, const SiteSet& test, double phi,
                             const Vector& w_train, double jitter) {
    GpConditioner g(train, test, phi, jitter);
    return GpConditional{g.mean(w_train), g.cov()};
}

}  // namespace sjsdm
