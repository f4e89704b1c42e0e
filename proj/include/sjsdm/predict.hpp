#pragma once

// Prediction at held-out sites from retained draws.
//
// For each draw the training factors are kriged to the test sites. In the
// default marginal mode the test-site factors are integrated out
// analytically: continuous predictions average B x + Lambda E[w], binary
// ones average P(U > 0) = Phi(mean / sd) with the kriging variance folded
// into sd. The sampled mode instead draws w at the test sites once per draw.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sjsdm/model.hpp"

namespace sjsdm {

enum class PredictMode { marginal, sampled };

[[nodiscard]] std::string to_string(PredictMode mode);
[[nodiscard]] PredictMode parse_predict_mode(const std::string& s);

struct PredictOptions {
    PredictMode mode = PredictMode::marginal;
    std::uint64_t seed = 1;  ///< used by the sampled mode only
    bool keep_draws = false;
    double jitter = 0.0;
};

struct PredictionResult {
    ResponseKind kind = ResponseKind::continuous;
    PredictMode mode = PredictMode::marginal;
    Matrix mean;  ///< m x S: predicted U (continuous) or presence probabilities (binary)
    std::vector<Matrix> per_draw;  ///< filled when keep_draws is set
    std::vector<std::string> site_ids;
    std::vector<std::string> species_ids;
    std::size_t n_draws = 0;
};

/// Kriging of the training factors to a fixed set of test sites, reusing the
/// conditioner while consecutive draws share phi.
class FactorKriging {
public:
    FactorKriging(const SiteSet& train, const SiteSet& test, FactorModel model,
                  double jitter = 0.0);

    struct Moments {
        Matrix mean;     ///< m x r
        Vector var;      ///< m, shared by all factor columns
        const Matrix* factor = nullptr;  ///< m x m square root of the covariance (spatial only)
    };

    /// Conditional moments of the test-site factors given W at the training sites.
    Moments at(double phi, const Matrix& w_train);

private:
    const SiteSet* train_;
    const SiteSet* test_;
    FactorModel model_;
    double jitter_;
    std::unique_ptr<GpConditioner> cond_;
    Matrix identity_;
};

[[nodiscard]] PredictionResult predict_heldout(const PosteriorDraws& draws, const Dataset& train,
                                               const Dataset& test, const PredictOptions& opts = {});

/// Splits `data` by its holdout mask and predicts the held-out rows.
[[nodiscard]] PredictionResult predict_heldout(const PosteriorDraws& draws, const Dataset& data,
                                               const PredictOptions& opts = {});

}  // namespace sjsdm
