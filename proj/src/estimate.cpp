#include "missnet/estimate.hpp"

#include <cmath>

namespace missnet {

namespace {

double condition_number(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (hi <= 0.0) return std::numeric_limits<double>::infinity();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

// Inverse with an eigenvalue floor; used both for Newton steps on noisy
// information estimates and for SE reporting on near-non-PD matrices.
Eigen::MatrixXd floored_inverse(const Eigen::MatrixXd& m, double floor_val) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    for (int k = 0; k < ev.size(); ++k) ev[k] = 1.0 / std::max(ev[k], floor_val);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd se_from_info(const Eigen::MatrixXd& info) {
    Eigen::MatrixXd inv = floored_inverse(info, 1e-8);
    Eigen::VectorXd se(info.rows());
    for (int k = 0; k < info.rows(); ++k) se[k] = std::sqrt(std::max(0.0, inv(k, k)));
    return se;
}

void fill_info_diag(Diagnostics& diag, const Eigen::MatrixXd& info) {
    diag.min_info_diag = info.diagonal().minCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
    diag.min_info_eig = es.eigenvalues().minCoeff();
}

}  // namespace

std::string to_string(FailureKind f) {
    switch (f) {
        case FailureKind::EssNotReached: return "ess-not-reached";
        case FailureKind::ExcessiveCorrelation: return "excessive-correlation";
        case FailureKind::NonPositiveDefiniteInfo: return "non-positive-definite-info";
        case FailureKind::NonFiniteMle: return "non-finite-mle";
    }
    return "unknown";
}

std::optional<FailureKind> classify_failure(const Diagnostics& diag) {
    // (c): negative diagonal or non-positive spectrum in the information.
    if (diag.min_info_diag < 0.0 || diag.min_info_eig <= 0.0)
        return FailureKind::NonPositiveDefiniteInfo;
    // (b): excessive correlation between model terms.
    if (diag.cov_condition > 1e8) return FailureKind::ExcessiveCorrelation;
    // (a): desired effective sample size not reached, or no convergence.
    if (diag.min_ess < diag.ess_target) return FailureKind::EssNotReached;
    if (!diag.moment_converged) return FailureKind::EssNotReached;
    return std::nullopt;
}

EstimationResult mple(const ModelSpec& spec, const Graph& g, const NodeData* data) {
    spec.validate(g.n(), data);
    const int n = g.n();
    const int K = spec.size();
    const std::size_t N = dyad_count(n);
    StatEngine engine(spec, n, data);

    Eigen::MatrixXd X(N, K);
    Eigen::VectorXd y(N);
    {
        Eigen::VectorXd row(K);
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++k) {
                engine.change_stat(g, i, j, row.data());
                X.row(k) = row;
                y[k] = g.has_edge(i, j) ? 1.0 : 0.0;
            }
    }

    EstimationResult res;
    res.theta_hat = Eigen::VectorXd::Zero(K);
    res.se = Eigen::VectorXd::Constant(K, std::numeric_limits<double>::quiet_NaN());
    res.info_matrix = Eigen::MatrixXd::Zero(K, K);
    res.diagnostics.ess_target = 0.0;
    res.diagnostics.min_ess = std::numeric_limits<double>::infinity();

    // Degenerate response: the pseudo-likelihood is maximised at infinity.
    double ybar = y.mean();
    if (ybar == 0.0 || ybar == 1.0) {
        res.failure = FailureKind::NonFiniteMle;
        return res;
    }

    // Collinear design columns.
    Eigen::MatrixXd gram = X.transpose() * X / static_cast<double>(N);
    if (condition_number(gram) > 1e10) {
        res.failure = FailureKind::ExcessiveCorrelation;
        res.diagnostics.cov_condition = condition_number(gram);
        return res;
    }

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd p(N), w(N);
    Eigen::MatrixXd H(K, K);
    bool converged = false;
    int iter = 0;
    for (; iter < 100; ++iter) {
        for (std::size_t k = 0; k < N; ++k) {
            double eta = X.row(k).dot(theta);
            p[k] = 1.0 / (1.0 + std::exp(-eta));
            w[k] = std::max(p[k] * (1.0 - p[k]), 1e-12);
        }
        Eigen::VectorXd grad = X.transpose() * (y - p);
        if (grad.norm() < 1e-8) {
            converged = true;
            break;
        }
        H = X.transpose() * w.asDiagonal() * X;
        Eigen::VectorXd step = H.ldlt().solve(grad);
        if (!step.allFinite()) break;
        // step halving against overshoot
        double lim = step.lpNorm<Eigen::Infinity>();
        if (lim > 5.0) step *= 5.0 / lim;
        theta += step;
        if (theta.lpNorm<Eigen::Infinity>() > 30.0) break;
    }

    res.theta_hat = theta;
    res.n_iterations = iter;
    for (std::size_t k = 0; k < N; ++k) {
        double eta = X.row(k).dot(theta);
        p[k] = 1.0 / (1.0 + std::exp(-eta));
        w[k] = std::max(p[k] * (1.0 - p[k]), 1e-12);
    }
    res.info_matrix = X.transpose() * w.asDiagonal() * X;
    fill_info_diag(res.diagnostics, res.info_matrix);
    res.diagnostics.cov_condition = condition_number(res.info_matrix);

    // Separation: fitted values perfectly split the dyads, so the
    // pseudo-likelihood is maximised only at infinity (a saturated fit can
    // drive the gradient below tolerance, hence checked on either path).
    bool perfect = true;
    for (std::size_t k = 0; k < N && perfect; ++k)
        perfect = (y[k] == 1.0) ? (p[k] > 0.99) : (p[k] < 0.01);
    if (!converged || perfect) {
        // With several terms this is a collinearity-type degeneracy of the
        // design; with a single term the MLE simply does not exist.
        res.failure = (perfect && K >= 2) ? FailureKind::ExcessiveCorrelation
                                          : FailureKind::NonFiniteMle;
        return res;
    }

    res.converged = true;
    res.diagnostics.moment_converged = true;
    res.se = se_from_info(res.info_matrix);
    return res;
}

namespace {

struct MomentBatch {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    Eigen::VectorXd ess;
};

MomentBatch summarise(const SampleBatch& batch) {
    return {batch.mean(), batch.cov(), batch.ess};
}

// Shared Newton-on-moments loop for the complete-data and face-value cases.
// sample(theta, iter) returns the free-chain moments and, via the optional
// second element, the conditional-chain moments (complete data passes the
// observed statistic with zero covariance).
template <typename Sampler>
EstimationResult solve_moments(const ModelSpec& spec, const Eigen::VectorXd& theta0,
                               const MleConfig& cfg, Sampler&& sample) {
    const int K = spec.size();
    EstimationResult res;
    res.diagnostics.ess_target = cfg.ess_target;

    Eigen::VectorXd theta = theta0;
    double scale = 1.0;
    Eigen::VectorXd best_theta = theta0;
    double best_disc = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(K, K);
    Eigen::VectorXd final_t = Eigen::VectorXd::Zero(K);
    double cov_cond = std::numeric_limits<double>::quiet_NaN();
    double min_ess = std::numeric_limits<double>::quiet_NaN();
    bool moment_ok = false;

    int iter = 0;
    int draws_mult = 1;
    for (; iter < cfg.max_outer; ++iter) {
        auto [free, cond] = sample(theta, iter, draws_mult);

        // A frozen free chain (every draw identical) is a non-mixing chain in
        // a degenerate region, not evidence about the moment condition:
        // shrink toward the origin, where the chain always mixes.
        if (free.cov.trace() <= 0.0) {
            theta *= 0.7;
            scale = std::max(0.5 * scale, 1.0 / 64.0);
            continue;
        }

        // Mean-value t-ratios: moment gap in units of the per-draw SD of the
        // statistics (Snijders convention), not of the MC error of the mean.
        Eigen::VectorXd gap = free.mean - cond.mean;
        Eigen::VectorXd t(K);
        for (int k = 0; k < K; ++k) {
            double sd = std::sqrt(std::max(free.cov(k, k) + cond.cov(k, k), 1e-300));
            t[k] = gap[k] / sd;
        }
        double disc = t.lpNorm<Eigen::Infinity>();

        info = free.cov - cond.cov;
        final_t = t;
        cov_cond = condition_number(free.cov);
        min_ess = std::min(free.ess.minCoeff(), cond.ess.minCoeff());

        if (disc < cfg.t_tol) {
            if (min_ess >= cfg.ess_target || draws_mult >= 4) {
                moment_ok = true;
                // One-step Newton refinement from the final batch: removes
                // the first-order moment error left by the stopping rule.
                Eigen::LLT<Eigen::MatrixXd> llt(info);
                if (info.diagonal().minCoeff() > 0.0 && llt.info() == Eigen::Success) {
                    Eigen::VectorXd refine = llt.solve(-gap);
                    if (refine.lpNorm<Eigen::Infinity>() < 0.5) theta += refine;
                }
                ++iter;
                break;
            }
            // Moment condition met but the chains are too short to certify
            // it: escalate the chain length and re-evaluate.
            draws_mult *= 2;
            continue;
        }

        if (disc > 1.3 * best_disc) {
            // The last step clearly increased the moment discrepancy: back
            // off to the best point seen and retry with halved damping.
            theta = best_theta;
            scale = std::max(0.5 * scale, 1.0 / 64.0);
            continue;
        }
        if (disc < best_disc) {
            best_disc = disc;
            best_theta = theta;
        }
        scale = std::min(1.0, 1.5 * scale);

        // Newton step on the estimated information when it is numerically
        // positive definite; otherwise precondition with the free-chain
        // covariance (PD by construction), inflated by the estimated
        // information shrinkage so the step length stays Newton-like.
        Eigen::VectorXd step;
        Eigen::LLT<Eigen::MatrixXd> llt(info);
        if (info.diagonal().minCoeff() > 0.0 && llt.info() == Eigen::Success) {
            step = llt.solve(-gap);
        } else {
            Eigen::MatrixXd precond = free.cov;
            precond.diagonal().array() += 1e-8 + 1e-6 * precond.trace() / K;
            double shrink = std::clamp(free.cov.trace() / std::max(info.trace(), 1e-12), 1.0, 4.0);
            step = shrink * precond.llt().solve(-gap);
        }
        double lim = step.lpNorm<Eigen::Infinity>();
        if (lim > 1.0) step *= 1.0 / lim;
        theta += scale * step;
        if (theta.lpNorm<Eigen::Infinity>() > cfg.param_bound) {
            theta = theta.cwiseMax(-cfg.param_bound).cwiseMin(cfg.param_bound);
        }
    }

    res.theta_hat = theta;
    res.n_iterations = iter;
    res.info_matrix = info;
    res.se = se_from_info(info);
    res.diagnostics.t_ratios = final_t;
    res.diagnostics.max_t_ratio = final_t.lpNorm<Eigen::Infinity>();
    res.diagnostics.min_ess = min_ess;
    res.diagnostics.cov_condition = cov_cond;
    res.diagnostics.moment_converged = moment_ok;
    fill_info_diag(res.diagnostics, info);

    res.failure = classify_failure(res.diagnostics);
    res.converged = !res.failure.has_value();
    return res;
}

}  // namespace

EstimationResult mcmcmle(const ModelSpec& spec, const Graph& g, const MleConfig& cfg,
                         const NodeData* data, const std::optional<Eigen::VectorXd>& init) {
    spec.validate(g.n(), data);
    Eigen::VectorXd theta0;
    if (init) {
        theta0 = *init;
    } else {
        EstimationResult pl = mple(spec, g, data);
        if (!pl.failure) {
            theta0 = pl.theta_hat;
        } else if (g.edge_count() == 0 || g.edge_count() == g.n_dyads()) {
            return pl;  // observed statistics on the hull boundary: no MLE
        } else {
            // MPLE separation does not preclude a finite MLE; start the
            // moment iteration from the origin instead.
            theta0 = Eigen::VectorXd::Zero(spec.size());
        }
    }

    // The right-hand side of the moment equation is the observed statistic:
    // exact, so it contributes no Monte Carlo error.
    const Eigen::VectorXd s_obs = stat_vector(spec, g, data);
    MomentBatch observed;
    observed.mean = s_obs;
    observed.cov = Eigen::MatrixXd::Zero(spec.size(), spec.size());
    observed.ess = Eigen::VectorXd::Constant(spec.size(), std::numeric_limits<double>::infinity());

    auto sampler = [&](const Eigen::VectorXd& theta, int iter, int draws_mult) {
        ModelSpec cur = spec.with_theta(theta);
        SamplerConfig scfg = cfg.sampler;
        scfg.seed = derive_seed(cfg.sampler.seed, 2 * iter);
        scfg.n_draws = cfg.sampler.n_draws * draws_mult;
        SampleBatch batch = sample_free(cur, g.n(), scfg, data, g);
        return std::pair<MomentBatch, MomentBatch>(summarise(batch), observed);
    };
    return solve_moments(spec, theta0, cfg, sampler);
}

EstimationResult mcmcmle_mar(const ModelSpec& spec, const PartialGraph& p, const MleConfig& cfg,
                             const NodeData* data, const std::optional<Eigen::VectorXd>& init) {
    spec.validate(p.n(), data);

    // No observed dyads: the face-value likelihood is identically flat
    // (the conditional chain IS the free chain), so the information is zero
    // by construction.
    if (p.n_observed() == 0) {
        EstimationResult res;
        const int K = spec.size();
        res.theta_hat = init ? *init : Eigen::VectorXd::Zero(K);
        res.se = Eigen::VectorXd::Constant(K, std::numeric_limits<double>::quiet_NaN());
        res.info_matrix = Eigen::MatrixXd::Zero(K, K);
        res.diagnostics.ess_target = cfg.ess_target;
        res.diagnostics.min_info_diag = 0.0;
        res.diagnostics.min_info_eig = 0.0;
        res.failure = FailureKind::NonPositiveDefiniteInfo;
        return res;
    }

    Graph imputed = zero_impute(p);
    Eigen::VectorXd theta0;
    if (init) {
        theta0 = *init;
    } else {
        // Initialiser: MPLE on the zero-imputed graph (a documented bias
        // source, it only seeds the moment iteration). If the imputed graph
        // is separated, start from zero and let the moment loop classify.
        EstimationResult pl = mple(spec, imputed, data);
        theta0 = pl.failure ? Eigen::VectorXd::Zero(spec.size()) : pl.theta_hat;
    }

    auto sampler = [&](const Eigen::VectorXd& theta, int iter, int draws_mult) {
        ModelSpec cur = spec.with_theta(theta);
        SamplerConfig free_cfg = cfg.sampler;
        free_cfg.seed = derive_seed(cfg.sampler.seed, 2 * iter);
        free_cfg.n_draws = cfg.sampler.n_draws * draws_mult;
        SamplerConfig cond_cfg = free_cfg;
        cond_cfg.seed = derive_seed(cfg.sampler.seed, 2 * iter + 1);
        SampleBatch free = sample_free(cur, p.n(), free_cfg, data, imputed);
        SampleBatch cond = sample_conditional(cur, p, cond_cfg, data);
        return std::pair<MomentBatch, MomentBatch>(summarise(free), summarise(cond));
    };
    return solve_moments(spec, theta0, cfg, sampler);
}

}  // namespace missnet
