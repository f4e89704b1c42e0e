#pragma once

// Exponential-kernel spatial covariances C_phi = [exp(-phi * ||s_i - s_j||)],
// their factorizations, and Gaussian-process conditioning at new sites.
//
// Coordinates are planar easting/northing already expressed in analysis units
// (100 km for the shipped workflows); no rescaling happens here.

#include <string>
#include <vector>

#include "sjsdm/types.hpp"

namespace sjsdm {

struct SiteSet {
    std::vector<std::string> ids;
    std::vector<double> x;
    std::vector<double> y;

    [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
    [[nodiscard]] bool empty() const noexcept { return x.empty(); }

    /// Throws InvalidArgument on ragged fields, non-finite coordinates or
    /// repeated ids.
    void validate() const;

    [[nodiscard]] SiteSet subset(const std::vector<std::size_t>& rows) const;

    /// Sites with generated ids "s1", "s2", ...
    static SiteSet from_coords(std::vector<double> x, std::vector<double> y);
};

/// C_phi for one decay value together with its lower Cholesky factor.
class SpatialCovariance {
public:
    SpatialCovariance(double phi, Matrix matrix, Matrix chol);

    [[nodiscard]] double phi() const noexcept { return phi_; }
    [[nodiscard]] Index size() const noexcept { return matrix_.rows(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] const Matrix& chol() const noexcept { return chol_; }
    [[nodiscard]] double log_det() const noexcept { return log_det_; }

    /// C^{-1} v
    [[nodiscard]] Vector solve(const Vector& v) const;
    /// v' C^{-1} v
    [[nodiscard]] double quad_form(const Vector& v) const;

private:
    double phi_;
    Matrix matrix_;
    Matrix chol_;
    double log_det_;
};

/// Eigendecomposition C = V diag(values) V' with eigenvalues floored at 0.
struct SpatialSpectrum {
    Matrix vectors;
    Vector values;
};

/// Builds and factorizes C_phi (plus `jitter` on the diagonal). Throws
/// InvalidArgument for phi <= 0 or invalid sites and DegenerateCovariance
/// when the Cholesky factorization breaks down (coincident sites).
[[nodiscard]] SpatialCovariance build_exp_cov(const SiteSet& sites, double phi,
                                              double jitter = 0.0);

/// Dense exp(-phi * d) matrix between two site sets (rows: `rows`, cols: `cols`).
[[nodiscard]] Matrix cross_exp_cov(const SiteSet& rows, const SiteSet& cols, double phi);

[[nodiscard]] SpatialSpectrum spectrum_of(const SpatialCovariance& cov);

struct PhiBounds {
    double phi_min;
    double phi_max;
    double d_min;
    double d_max;
};

/// phi_max = -log(0.01)/d_min, phi_min = -log(0.05)/d_max. d_min is the
/// smallest strictly positive pairwise distance; exact duplicates are ignored.
[[nodiscard]] PhiBounds phi_bounds_from_distances(double d_min, double d_max);
[[nodiscard]] PhiBounds phi_bounds(const SiteSet& sites);

/// Distance at which exp(-phi d) falls to `threshold`.
[[nodiscard]] double effective_range(double phi, double threshold = 0.05);

/// Median pairwise distance (used for the default initial decay).
[[nodiscard]] double median_distance(const SiteSet& sites);

/// Conditional law of a zero-mean unit-variance GP at `test` sites given its
/// values at `train` sites. The conditional covariance does not depend on the
/// observed values, so one conditioner serves all factor columns of a draw.
class GpConditioner {
public:
    GpConditioner(const SiteSet& train, const SiteSet& test, double phi, double jitter = 0.0);

    [[nodiscard]] double phi() const noexcept { return phi_; }
    [[nodiscard]] Vector mean(const Vector& w_train) const;
    [[nodiscard]] Matrix mean(const Matrix& w_train) const;
    /// Symmetrized, eigenvalue-floored conditional covariance.
    [[nodiscard]] const Matrix& cov() const noexcept { return cov_; }
    /// Diagonal of cov(), clamped into [0, 1].
    [[nodiscard]] const Vector& variances() const noexcept { return var_; }
    /// F with F F' = cov(); used to draw conditional realizations.
    [[nodiscard]] const Matrix& factor() const noexcept { return factor_; }

private:
    double phi_;
    Matrix weights_;  // C_pt C_tt^{-1}
    Matrix cov_;
    Vector var_;
    Matrix factor_;
};

struct GpConditional {
    Vector mean;
    Matrix cov;
};

[[nodiscard]] GpConditional gp_conditional(const SiteSet& train, const SiteSet& test, double phi,
                                           const Vector& w_train, double jitter = 0.0);

}  // namespace sjsdm
