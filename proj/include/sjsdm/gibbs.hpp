#pragma once

// Full-conditional updates for every block of the model and the chain
// driver. Each step mutates only its own block of ModelState.
//
// Sweep order: U (binary only), B, Z, k, p, W, phi (spatial only),
// sigma^2 (unless fixed), D_Z / eta.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include "sjsdm/gp_kernel.hpp"
#include "sjsdm/model.hpp"
#include "sjsdm/rng.hpp"

namespace sjsdm {

/// C_phi (and its spectrum) at the chain's current phi. Shared by the W and
/// phi steps so that each accepted phi is factorized once.
class FactorCovariance {
public:
    FactorCovariance(const SiteSet& sites, FactorModel model, double jitter = 0.0);

    [[nodiscard]] FactorModel model() const noexcept { return model_; }
    [[nodiscard]] const SiteSet& sites() const noexcept { return *sites_; }

    /// Factorized C_phi; rebuilt only when phi differs from the cached value.
    const SpatialCovariance& at(double phi);
    /// Eigendecomposition of C_phi, computed lazily per phi.
    const SpatialSpectrum& spectrum(double phi);
    /// Factorize C_phi without touching the cache (MH proposals).
    [[nodiscard]] SpatialCovariance build(double phi) const;
    /// Install an already-factorized covariance (an accepted proposal).
    void adopt(SpatialCovariance cov);

private:
    const SiteSet* sites_;
    FactorModel model_;
    double jitter_;
    std::optional<SpatialCovariance> cov_;
    std::optional<SpatialSpectrum> spectrum_;
};

void step_B(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng);
void step_Z(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng);
void step_W(ModelState& st, const Dataset& data, const Hyperparams& hyper, FactorCovariance& cov,
            RngStream& rng);
/// Random-walk Metropolis on log(phi); returns whether the proposal was accepted.
bool step_phi(ModelState& st, const Hyperparams& hyper, FactorCovariance& cov, double step_sd,
              RngStream& rng);
void step_k(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng);
void step_p(ModelState& st, const Hyperparams& hyper, RngStream& rng);
void step_sigma2(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng);
void step_DZ_eta(ModelState& st, const Hyperparams& hyper, RngStream& rng);
void step_U_probit(ModelState& st, const Dataset& data, RngStream& rng);

/// Log posterior density of the phi step's target (GP density of all factor
/// columns, uniform prior) up to a constant; -inf outside the bounds.
[[nodiscard]] double log_phi_target(const ModelState& st, const Hyperparams& hyper,
                                    const SpatialCovariance& cov);

/// U - X B' - W Lambda'
[[nodiscard]] Matrix residual(const ModelState& st, const Dataset& data);

/// Unnormalized log joint density of (U, B, Z, k, W, sigma^2, phi, D_Z, eta)
/// excluding the stick-weight prior. Diagnostic only.
[[nodiscard]] double log_joint(const ModelState& st, const Dataset& data, const Hyperparams& hyper,
                               FactorCovariance& cov);

enum class Block : std::size_t { U, B, Z, k, p, W, phi, sigma2, DZ_eta, count };
[[nodiscard]] std::string_view block_name(Block b) noexcept;

struct SweepReport {
    bool mh_phi_accepted = false;
    std::optional<double> log_joint;
    std::array<double, static_cast<std::size_t>(Block::count)> seconds{};
};

struct ProgressInfo {
    long iteration;
    double phi;
    double sigma2;
    int occupied;
    double mh_acceptance;
};

using ProgressSink = std::function<void(const ProgressInfo&)>;

/// One chain over a training dataset. Deterministic given (seed, stream_id).
class GibbsSampler {
public:
    GibbsSampler(const Dataset& train, Hyperparams hyper, std::uint64_t stream_id = 0);

    /// One sweep; the phi proposal scale adapts while `iteration` is inside
    /// burn-in and is frozen afterwards.
    SweepReport sweep(long iteration, bool compute_log_joint = false);

    [[nodiscard]] ModelState& state() noexcept { return state_; }
    [[nodiscard]] const ModelState& state() const noexcept { return state_; }
    [[nodiscard]] const Hyperparams& hyper() const noexcept { return hyper_; }
    [[nodiscard]] const Dataset& data() const noexcept { return *data_; }
    [[nodiscard]] RngStream& rng() noexcept { return rng_; }
    [[nodiscard]] FactorCovariance& covariance() noexcept { return cov_; }
    [[nodiscard]] double mh_step() const noexcept { return mh_step_; }
    [[nodiscard]] long accepted() const noexcept { return accepted_; }
    [[nodiscard]] long proposed() const noexcept { return proposed_; }

private:
    const Dataset* data_;
    Hyperparams hyper_;
    RngStream rng_;
    ModelState state_;
    FactorCovariance cov_;
    double mh_step_;
    long accepted_ = 0;
    long proposed_ = 0;
    long window_accepted_ = 0;
    long window_proposed_ = 0;
};

struct ChainOptions {
    std::uint64_t stream_id = 0;
    bool record_log_joint = false;
    ProgressSink progress;  ///< called every mcmc.progress_every iterations
};

/// Runs n_iter sweeps and keeps every thin-th state after burn-in.
/// Throws SamplerError naming the failing block and iteration.
[[nodiscard]] PosteriorDraws run_chain(const Dataset& train, const Hyperparams& hyper,
                                       const ChainOptions& opts = {});

/// Progress line printer for standard error.
[[nodiscard]] ProgressSink stderr_progress(std::uint64_t chain);

}  // namespace sjsdm
