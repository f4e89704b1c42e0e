#pragma once

namespace sjsdm {

[[nodiscard]] double norm_pdf(double x);
/// Standard normal CDF, accurate in both tails (erfc based).
[[nodiscard]] double norm_cdf(double x);

/// P(X < a, Y < b) for a standard bivariate normal with correlation rho.
/// Drezner-Wesolowsky style Gauss-Legendre integration (Genz's BVND
/// variant); absolute error below 1e-14 for |rho| < 0.925 and below 1e-10
/// elsewhere.
[[nodiscard]] double bvn_cdf(double a, double b, double rho);

/// P(X > h, Y > k) for a standard bivariate normal with correlation rho.
[[nodiscard]] double bvn_upper(double h, double k, double rho);

}  // namespace sjsdm
