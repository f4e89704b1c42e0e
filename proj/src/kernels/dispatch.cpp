#include "sjsdm/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "sjsdm/error.hpp"

namespace sjsdm::kernels {

#ifdef SJSDM_BUILD_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void distance_row(const double* xs, const double* ys, double x0, double y0, double* out,
                  std::size_t n);
void exp_decay_row(const double* xs, const double* ys, double x0, double y0, double phi,
                   double* out, std::size_t n);
}  // namespace avx2
#endif

namespace {

constexpr KernelTable scalar_table{&scalar::dot, &scalar::sum_sq_diff, &scalar::axpy,
                                   &scalar::distance_row, &scalar::exp_decay_row};

#ifdef SJSDM_BUILD_AVX2
constexpr KernelTable avx2_table{&avx2::dot, &avx2::sum_sq_diff, &avx2::axpy,
                                 &avx2::distance_row, &avx2::exp_decay_row};
#endif

bool force_scalar() {
    const char* env = std::getenv("SJSDM_FORCE_SCALAR");
    return env != nullptr && std::strcmp(env, "0") != 0 && env[0] != '\0';
}

Isa detect() {
    if (force_scalar()) return Isa::scalar;
    if (isa_supported(Isa::avx2)) return Isa::avx2;
    return Isa::scalar;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(SJSDM_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_supported(isa)) throw InvalidArgument("kernel ISA not supported on this CPU/build");
#ifdef SJSDM_BUILD_AVX2
    if (isa == Isa::avx2) return avx2_table;
#endif
    return scalar_table;
}

Isa active_isa() noexcept {
    static const Isa isa = detect();
    return isa;
}

const KernelTable& active() noexcept {
    static const KernelTable& t = table(active_isa());
    return t;
}

std::string_view isa_name(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace sjsdm::kernels
