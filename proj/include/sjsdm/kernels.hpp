#pragma once

// Data-parallel inner loops used by the sampler and the kernel builders.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds,
// an AVX2/FMA variant. The variant is chosen once at startup from CPUID and
// can be forced back to scalar with SJSDM_FORCE_SCALAR=1 in the environment.
// Results agree with the scalar reference to within a few ulps; they are not
// bit-identical because the vector variants reassociate sums.

#include <cstddef>
#include <span>
#include <string_view>

namespace sjsdm::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// sum_i (a_i - b_i)^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// out_j = sqrt((xs_j - x0)^2 + (ys_j - y0)^2)
    void (*distance_row)(const double* xs, const double* ys, double x0, double y0,
                         double* out, std::size_t n);
    /// out_j = exp(-phi * sqrt((xs_j - x0)^2 + (ys_j - y0)^2))
    void (*exp_decay_row)(const double* xs, const double* ys, double x0, double y0,
                          double phi, double* out, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void distance_row(const double* xs, const double* ys, double x0, double y0, double* out,
                  std::size_t n);
void exp_decay_row(const double* xs, const double* ys, double x0, double y0, double phi,
                   double* out, std::size_t n);
}  // namespace scalar

[[nodiscard]] bool isa_supported(Isa isa) noexcept;
[[nodiscard]] const KernelTable& table(Isa isa);
[[nodiscard]] Isa active_isa() noexcept;
[[nodiscard]] const KernelTable& active() noexcept;
[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

// Span conveniences over the active table.

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    return active().sum_sq_diff(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace sjsdm::kernels
