#include "sjsdm/kernels.hpp"

#include <cmath>

namespace sjsdm::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void distance_row(const double* xs, const double* ys, double x0, double y0, double* out,
                  std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        const double dx = xs[j] - x0;
        const double dy = ys[j] - y0;
        out[j] = std::sqrt(dx * dx + dy * dy);
    }
}

void exp_decay_row(const double* xs, const double* ys, double x0, double y0, double phi,
                   double* out, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        const double dx = xs[j] - x0;
        const double dy = ys[j] - y0;
        out[j] = std::exp(-phi * std::sqrt(dx * dx + dy * dy));
    }
}

}  // namespace sjsdm::kernels::scalar
