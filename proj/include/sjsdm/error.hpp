#pragma once

#include <stdexcept>
#include <string>

namespace sjsdm {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI when reporting failures as JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error("dimension_mismatch", what) {}
};

/// A covariance (or precision) matrix failed its Cholesky factorization.
struct DegenerateCovariance : Error {
    explicit DegenerateCovariance(const std::string& what) : Error("degenerate_covariance", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io_error", what) {}
};

/// Raised by the chain driver; names the Gibbs block and the iteration that failed.
struct SamplerError : Error {
    SamplerError(std::string block, long iteration, const std::string& what)
        : Error("sampler_error", what), block_(std::move(block)), iteration_(iteration) {}

    [[nodiscard]] const std::string& block() const noexcept { return block_; }
    [[nodiscard]] long iteration() const noexcept { return iteration_; }

private:
    std::string block_;
    long iteration_;
};

}  // namespace sjsdm
