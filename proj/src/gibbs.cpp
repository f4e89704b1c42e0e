#include "sjsdm/gibbs.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sjsdm/error.hpp"
#include "sjsdm/kernels.hpp"

namespace sjsdm {

FactorCovariance::FactorCovariance(const SiteSet& sites, FactorModel model, double jitter)
    : sites_(&sites), model_(model), jitter_(jitter) {}

SpatialCovariance FactorCovariance::build(double phi) const {
    return build_exp_cov(*sites_, phi, jitter_);
}

const SpatialCovariance& FactorCovariance::at(double phi) {
    if (!cov_ || cov_->phi() != phi) {
        cov_.emplace(build(phi));
        spectrum_.reset();
    }
    return *cov_;
}

const SpatialSpectrum& FactorCovariance::spectrum(double phi) {
    const SpatialCovariance& c = at(phi);
    if (!spectrum_) spectrum_.emplace(spectrum_of(c));
    return *spectrum_;
}

void FactorCovariance::adopt(SpatialCovariance cov) {
    cov_.emplace(std::move(cov));
    spectrum_.reset();
}

namespace {

Matrix chol_lower_or_throw(const Matrix& m, const char* what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw DegenerateCovariance(std::string(what) + " is not positive definite");
    return llt.matrixL();
}

Matrix spd_inverse(const Matrix& m, const char* what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw DegenerateCovariance(std::string(what) + " is not positive definite");
    return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

double total_sigma2(const ModelState& st) { return st.sigma2; }

}  // namespace

Matrix residual(const ModelState& st, const Dataset& data) {
    return st.U - data.X * st.B.transpose() - st.W * lambda_of(st.Z, st.k).transpose();
}

void step_B(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng) {
    const Index p = data.n_covariates();
    const Index S = data.n_species();
    const double s2 = total_sigma2(st);
    Matrix prec = data.X.transpose() * data.X / s2;
    prec.diagonal().array() += 1.0 / hyper.c;
    Eigen::LLT<Matrix> llt(prec);
    if (llt.info() != Eigen::Success) throw DegenerateCovariance("coefficient precision");
    const Matrix target = st.U - st.W * lambda_of(st.Z, st.k).transpose();  // n x S
    Matrix mean = llt.solve(data.X.transpose() * target / s2);              // p x S
    Matrix z(p, S);
    for (Index l = 0; l < S; ++l)
        for (Index j = 0; j < p; ++j) z(j, l) = rng.normal();
    // cov = prec^{-1} = L^{-T} L^{-1}
    mean += Matrix(llt.matrixU().solve(z));
    st.B = mean.transpose();
}

void step_Z(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng) {
    const Index n_atoms = st.Z.rows();
    const Index r = st.Z.cols();
    const double s2 = total_sigma2(st);
    const Matrix dz_inv = spd_inverse(st.DZ, "D_Z");
    const Matrix dz_chol = chol_lower_or_throw(st.DZ, "D_Z");
    const Matrix R = st.U - data.X * st.B.transpose();  // n x S
    const Matrix wtw = st.W.transpose() * st.W;

    std::vector<int> counts(static_cast<std::size_t>(n_atoms), 0);
    Matrix sums = Matrix::Zero(R.rows(), n_atoms);  // summed residual columns per atom
    for (std::size_t l = 0; l < st.k.size(); ++l) {
        counts[static_cast<std::size_t>(st.k[l])]++;
        sums.col(st.k[l]) += R.col(static_cast<Index>(l));
    }
    const Matrix wt_sums = st.W.transpose() * sums;  // r x N

    for (Index j = 0; j < n_atoms; ++j) {
        const int cj = counts[static_cast<std::size_t>(j)];
        if (cj == 0 && j != 0) {
            Vector z(r);
            for (Index h = 0; h < r; ++h) z[h] = rng.normal();
            st.Z.row(j) = (dz_chol * z).transpose();
            continue;
        }
        Matrix prec = static_cast<double>(cj) / s2 * wtw + dz_inv;
        Eigen::LLT<Matrix> llt(prec);
        if (llt.info() != Eigen::Success) throw DegenerateCovariance("atom precision");
        const Vector mean = llt.solve(Vector(wt_sums.col(j) / s2));
        if (j == 0) {
            const Matrix cov = llt.solve(Matrix::Identity(r, r));
            OrthantOptions opts;
            opts.sweeps = hyper.orthant_sweeps;
            opts.start = Vector(st.Z.row(0).transpose());
            st.Z.row(0) = sample_truncnorm_orthant(mean, 0.5 * (cov + cov.transpose()), rng, opts)
                              .transpose();
        } else {
            Vector z(r);
            for (Index h = 0; h < r; ++h) z[h] = rng.normal();
            st.Z.row(j) = (mean + Vector(llt.matrixU().solve(z))).transpose();
        }
    }
}

void step_W(ModelState& st, const Dataset& data, const Hyperparams& hyper, FactorCovariance& cov,
            RngStream& rng) {
    (void)hyper;
    const Index n = st.W.rows();
    const Index r = st.W.cols();
    const double s2 = total_sigma2(st);
    const Matrix lambda = lambda_of(st.Z, st.k);
    Matrix E = residual(st, data);  // n x S, kept current across columns

    const SpatialSpectrum* spec = nullptr;
    if (cov.model() == FactorModel::spatial) spec = &cov.spectrum(st.phi);

    Vector z(n);
    for (Index h = 0; h < r; ++h) {
        const Vector lam_h = lambda.col(h);
        const double load2 = lam_h.squaredNorm();
        const double a = load2 / s2;
        const Vector w_old = st.W.col(h);
        // (E + w_h lam_h') lam_h / s2
        const Vector b = (E * lam_h + w_old * load2) / s2;
        for (Index i = 0; i < n; ++i) z[i] = rng.normal();
        Vector w_new(n);
        if (spec) {
            const Vector g = spec->values.array() / (1.0 + a * spec->values.array());
            const Vector proj = spec->vectors.transpose() * b;
            w_new = spec->vectors *
                    (g.cwiseProduct(proj) + g.cwiseSqrt().cwiseProduct(z)).eval();
        } else {
            const double g = 1.0 / (1.0 + a);
            w_new = g * b + std::sqrt(g) * z;
        }
        st.W.col(h) = w_new;
        E.noalias() += (w_old - w_new) * lam_h.transpose();
    }
}

double log_phi_target(const ModelState& st, const Hyperparams& hyper, const SpatialCovariance& c) {
    const double phi = c.phi();
    if (!(phi > hyper.phi_min && phi < hyper.phi_max)) return -std::numeric_limits<double>::infinity();
    const Index r = st.W.cols();
    double quad = 0.0;
    for (Index h = 0; h < r; ++h) quad += c.quad_form(st.W.col(h));
    return -0.5 * static_cast<double>(r) * c.log_det() - 0.5 * quad;
}

bool step_phi(ModelState& st, const Hyperparams& hyper, FactorCovariance& cov, double step_sd,
              RngStream& rng) {
    const double log_phi = std::log(st.phi);
    const double proposal = std::exp(log_phi + step_sd * rng.normal());
    const double log_u = std::log(rng.uniform());
    if (!(proposal > hyper.phi_min && proposal < hyper.phi_max)) return false;
    if (proposal == st.phi) return true;
    SpatialCovariance cand = cov.build(proposal);
    const double current = log_phi_target(st, hyper, cov.at(st.phi));
    // Target on the log scale carries the Jacobian phi.
    const double log_ratio =
        log_phi_target(st, hyper, cand) + std::log(proposal) - current - log_phi;
    if (log_u < log_ratio) {
        st.phi = proposal;
        cov.adopt(std::move(cand));
        return true;
    }
    return false;
}

void step_k(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng) {
    (void)hyper;
    const Index n = st.U.rows();
    const Index n_atoms = st.Z.rows();
    const double s2 = total_sigma2(st);
    const Matrix R = st.U - data.X * st.B.transpose();  // n x S
    const Matrix M = st.W * st.Z.transpose();           // n x N
    const auto& kt = kernels::active();
    std::vector<double> log_p(static_cast<std::size_t>(n_atoms));
    for (Index j = 0; j < n_atoms; ++j)
        log_p[static_cast<std::size_t>(j)] = st.p[j] > 0.0 ? std::log(st.p[j])
                                                           : -std::numeric_limits<double>::infinity();
    std::vector<double> logw(static_cast<std::size_t>(n_atoms));
    for (std::size_t l = 1; l < st.k.size(); ++l) {
        const double* rl = R.col(static_cast<Index>(l)).data();
        for (Index j = 0; j < n_atoms; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (std::isinf(log_p[ju])) {
                logw[ju] = log_p[ju];
                continue;
            }
            const double ss = kt.sum_sq_diff(rl, M.col(j).data(), static_cast<std::size_t>(n));
            logw[ju] = log_p[ju] - 0.5 * ss / s2;
        }
        st.k[l] = static_cast<int>(rng.categorical_from_log(logw));
    }
    st.k[0] = 0;
}

void step_p(ModelState& st, const Hyperparams& hyper, RngStream& rng) {
    const auto counts = atom_counts(st.k, static_cast<int>(st.Z.rows()));
    st.p = sample_gd_stick(hyper.alpha, counts, rng, hyper.stick);
}

void step_sigma2(ModelState& st, const Dataset& data, const Hyperparams& hyper, RngStream& rng) {
    if (hyper.sigma2_fixed) {
        st.sigma2 = *hyper.sigma2_fixed;
        return;
    }
    const double ss = residual(st, data).squaredNorm();
    const double count = static_cast<double>(st.U.rows() * st.U.cols());
    st.sigma2 = sample_inv_gamma(0.5 * (count + hyper.a), 0.5 * (ss + hyper.b), rng);
}

void step_DZ_eta(ModelState& st, const Hyperparams& hyper, RngStream& rng) {
    const Index r = st.Z.cols();
    Matrix scale = st.Z.transpose() * st.Z;
    for (Index h = 0; h < r; ++h) scale(h, h) += 2.0 * hyper.iw_nu / st.eta[h];
    st.DZ = sample_inv_wishart(hyper.iw_df() + static_cast<double>(st.Z.rows()), scale, rng);
    const Matrix dz_inv = spd_inverse(st.DZ, "D_Z");
    const double shape = 0.5 * hyper.iw_df() + hyper.eta_shape;
    for (Index h = 0; h < r; ++h)
        st.eta[h] = sample_inv_gamma(shape, hyper.iw_nu * dz_inv(h, h) + hyper.eta_rate, rng);
}

void step_U_probit(ModelState& st, const Dataset& data, RngStream& rng) {
    if (data.kind != ResponseKind::binary) throw InvalidArgument("probit step needs binary data");
    const Matrix mean = data.X * st.B.transpose() + st.W * lambda_of(st.Z, st.k).transpose();
    const double sd = std::sqrt(st.sigma2);
    for (Index l = 0; l < mean.cols(); ++l)
        for (Index i = 0; i < mean.rows(); ++i)
            st.U(i, l) = sample_truncnorm_uni(
                mean(i, l), sd, data.Y(i, l) == 1.0 ? TruncSide::above0 : TruncSide::below0, rng);
}

namespace {

double log_inv_gamma_density(double x, double shape, double rate) {
    return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

double log_mvgamma(double a, Index d) {
    double out = 0.25 * static_cast<double>(d * (d - 1)) * std::log(std::numbers::pi);
    for (Index j = 0; j < d; ++j) out += std::lgamma(a - 0.5 * static_cast<double>(j));
    return out;
}

double log_inv_wishart_density(const Matrix& x, double df, const Matrix& scale) {
    const Index d = x.rows();
    Eigen::LLT<Matrix> lx(x), ls(scale);
    const double logdet_x = 2.0 * Matrix(lx.matrixL()).diagonal().array().log().sum();
    const double logdet_s = 2.0 * Matrix(ls.matrixL()).diagonal().array().log().sum();
    const double tr = (scale * lx.solve(Matrix::Identity(d, d))).trace();
    return 0.5 * df * logdet_s - 0.5 * df * static_cast<double>(d) * std::numbers::ln2 -
           log_mvgamma(0.5 * df, d) - 0.5 * (df + static_cast<double>(d) + 1.0) * logdet_x -
           0.5 * tr;
}

}  // namespace

double log_joint(const ModelState& st, const Dataset& data, const Hyperparams& hyper,
                 FactorCovariance& cov) {
    const double log2pi = std::log(2.0 * std::numbers::pi);
    const Index n = st.U.rows();
    const Index S = st.U.cols();
    const Index r = st.W.cols();
    const Index N = st.Z.rows();
    double out = 0.0;
    const double ss = residual(st, data).squaredNorm();
    out += -0.5 * static_cast<double>(n * S) * (log2pi + std::log(st.sigma2)) - 0.5 * ss / st.sigma2;
    if (cov.model() == FactorModel::spatial) {
        const SpatialCovariance& c = cov.at(st.phi);
        out += log_phi_target(st, hyper, c) - 0.5 * static_cast<double>(n * r) * log2pi;
    } else {
        out += -0.5 * st.W.squaredNorm() - 0.5 * static_cast<double>(n * r) * log2pi;
    }
    if (!hyper.sigma2_fixed) out += log_inv_gamma_density(st.sigma2, 0.5 * hyper.a, 0.5 * hyper.b);
    out += -0.5 * st.B.squaredNorm() / hyper.c -
           0.5 * static_cast<double>(st.B.size()) * std::log(2.0 * std::numbers::pi * hyper.c);
    Eigen::LLT<Matrix> ld(st.DZ);
    const double logdet_dz = 2.0 * Matrix(ld.matrixL()).diagonal().array().log().sum();
    const Matrix zt = ld.matrixL().solve(st.Z.transpose());
    out += -0.5 * static_cast<double>(N) * logdet_dz - 0.5 * zt.squaredNorm() -
           0.5 * static_cast<double>(N * r) * log2pi;
    for (int label : st.k) out += std::log(st.p[label]);
    Matrix scale = Matrix::Zero(r, r);
    for (Index h = 0; h < r; ++h) scale(h, h) = 2.0 * hyper.iw_nu / st.eta[h];
    out += log_inv_wishart_density(st.DZ, hyper.iw_df(), scale);
    for (Index h = 0; h < r; ++h)
        out += log_inv_gamma_density(st.eta[h], hyper.eta_shape, hyper.eta_rate);
    return out;
}

std::string_view block_name(Block b) noexcept {
    switch (b) {
        case Block::U: return "U";
        case Block::B: return "B";
        case Block::Z: return "Z";
        case Block::k: return "k";
        case Block::p: return "p";
        case Block::W: return "W";
        case Block::phi: return "phi";
        case Block::sigma2: return "sigma2";
        case Block::DZ_eta: return "DZ_eta";
        case Block::count: break;
    }
    return "?";
}

GibbsSampler::GibbsSampler(const Dataset& train, Hyperparams hyper, std::uint64_t stream_id)
    : data_(&train),
      hyper_(resolve_hyperparams(std::move(hyper), train)),
      rng_(hyper_.mcmc.seed, stream_id),
      cov_(train.sites, hyper_.factors, hyper_.jitter),
      mh_step_(hyper_.mcmc.mh_step_phi) {
    (void)hyper_.validate(train.n_species());
    state_ = initial_state(train, hyper_, rng_);
}

SweepReport GibbsSampler::sweep(long iteration, bool compute_log_joint) {
    SweepReport report;
    using clock = std::chrono::steady_clock;
    auto run = [&](Block b, auto&& fn) {
        const auto t0 = clock::now();
        try {
            fn();
        } catch (const SamplerError&) {
            throw;
        } catch (const std::exception& e) {
            throw SamplerError(std::string(block_name(b)), iteration,
                               "block " + std::string(block_name(b)) + " failed at iteration " +
                                   std::to_string(iteration) + ": " + e.what());
        }
        report.seconds[static_cast<std::size_t>(b)] =
            std::chrono::duration<double>(clock::now() - t0).count();
    };
    const Dataset& data = *data_;
    if (data.kind == ResponseKind::binary) run(Block::U, [&] { step_U_probit(state_, data, rng_); });
    run(Block::B, [&] { step_B(state_, data, hyper_, rng_); });
    run(Block::Z, [&] { step_Z(state_, data, hyper_, rng_); });
    run(Block::k, [&] { step_k(state_, data, hyper_, rng_); });
    run(Block::p, [&] { step_p(state_, hyper_, rng_); });
    run(Block::W, [&] { step_W(state_, data, hyper_, cov_, rng_); });
    if (hyper_.factors == FactorModel::spatial) {
        run(Block::phi, [&] {
            report.mh_phi_accepted = step_phi(state_, hyper_, cov_, mh_step_, rng_);
        });
        ++proposed_;
        ++window_proposed_;
        if (report.mh_phi_accepted) {
            ++accepted_;
            ++window_accepted_;
        }
        const bool in_burn_in = iteration < hyper_.mcmc.burn_in;
        if (in_burn_in && hyper_.mcmc.adapt_phi && window_proposed_ == 50) {
            const double rate = static_cast<double>(window_accepted_) / 50.0;
            if (rate < 0.25) mh_step_ *= 0.8;
            if (rate > 0.45) mh_step_ *= 1.25;
            window_accepted_ = 0;
            window_proposed_ = 0;
        }
        if (!in_burn_in && iteration == hyper_.mcmc.burn_in) {
            accepted_ = report.mh_phi_accepted ? 1 : 0;
            proposed_ = 1;
        }
    }
    run(Block::sigma2, [&] { step_sigma2(state_, data, hyper_, rng_); });
    run(Block::DZ_eta, [&] { step_DZ_eta(state_, hyper_, rng_); });
    if (compute_log_joint) report.log_joint = log_joint(state_, data, hyper_, cov_);
    return report;
}

PosteriorDraws run_chain(const Dataset& train, const Hyperparams& hyper, const ChainOptions& opts) {
    GibbsSampler sampler(train, hyper, opts.stream_id);
    const Hyperparams& h = sampler.hyper();
    PosteriorDraws draws;
    draws.factors = h.factors;
    draws.kind = train.kind;
    draws.train_site_ids = train.sites.ids;
    draws.species_ids = train.species_ids;
    draws.states.reserve(static_cast<std::size_t>(h.mcmc.retained()));
    for (long it = 0; it < h.mcmc.n_iter; ++it) {
        const bool keep = it >= h.mcmc.burn_in && (it - h.mcmc.burn_in + 1) % h.mcmc.thin == 0;
        const SweepReport rep = sampler.sweep(it, keep && opts.record_log_joint);
        if (keep) {
            ModelState snap = sampler.state();
            snap.U.resize(0, 0);
            draws.states.push_back(std::move(snap));
            if (rep.log_joint) draws.log_joint.push_back(*rep.log_joint);
        }
        if (opts.progress && h.mcmc.progress_every > 0 && (it + 1) % h.mcmc.progress_every == 0) {
            auto k = sampler.state().k;
            std::sort(k.begin(), k.end());
            const int occupied = static_cast<int>(std::unique(k.begin(), k.end()) - k.begin());
            const double acc = sampler.proposed() > 0
                                   ? static_cast<double>(sampler.accepted()) / sampler.proposed()
                                   : 0.0;
            opts.progress(ProgressInfo{it + 1, sampler.state().phi, sampler.state().sigma2,
                                       occupied, acc});
        }
    }
    if (h.factors == FactorModel::spatial && sampler.proposed() > 0 && h.mcmc.n_iter > h.mcmc.burn_in)
        draws.mh_acceptance = static_cast<double>(sampler.accepted()) / sampler.proposed();
    draws.final_mh_step = sampler.mh_step();
    return draws;
}

ProgressSink stderr_progress(std::uint64_t chain) {
    return [chain](const ProgressInfo& p) {
        std::fprintf(stderr,
                     "chain %llu iter %ld phi %.4f sigma2 %.4f clusters %d mh_accept %.3f\n",
                     static_cast<unsigned long long>(chain), p.iteration, p.phi, p.sigma2,
                     p.occupied, p.mh_acceptance);
    };
}

}  // namespace sjsdm
