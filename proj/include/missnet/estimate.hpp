#ifndef MISSNET_ESTIMATE_HPP
#define MISSNET_ESTIMATE_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "missnet/graph.hpp"
#include "missnet/sampler.hpp"
#include "missnet/stats.hpp"

namespace missnet {

// Estimation failure taxonomy. The first three mirror the standard software
// errors for partially observed ERGMs: (a) chains that cannot reach the
// requested effective sample size, (b) excessive correlation between model
// terms, (c) an information matrix with negative diagonal elements (the
// face-value Hessian is not negative definite). NonFiniteMle covers
// pseudo-likelihood separation, where the MLE lies at infinity.
enum class FailureKind { EssNotReached, ExcessiveCorrelation, NonPositiveDefiniteInfo, NonFiniteMle };

std::string to_string(FailureKind f);

struct Diagnostics {
    Eigen::VectorXd t_ratios;      // mean-value t-ratios at the final iteration
    double max_t_ratio = std::numeric_limits<double>::quiet_NaN();
    double min_ess = std::numeric_limits<double>::quiet_NaN();
    double ess_target = 0.0;
    double cov_condition = std::numeric_limits<double>::quiet_NaN();
    double min_info_diag = std::numeric_limits<double>::quiet_NaN();
    double min_info_eig = std::numeric_limits<double>::quiet_NaN();
    bool moment_converged = false;
};

// Precedence (c) > (b) > (a); no failure when the moment condition holds and
// nothing trips.
std::optional<FailureKind> classify_failure(const Diagnostics& diag);

struct EstimationResult {
    Eigen::VectorXd theta_hat;
    Eigen::VectorXd se;
    Eigen::MatrixXd info_matrix;
    int n_iterations = 0;
    bool converged = false;
    std::optional<FailureKind> failure;
    Diagnostics diagnostics;
};

struct MleConfig {
    SamplerConfig sampler;
    int max_outer = 60;
    double t_tol = 0.1;        // mean-value t-ratio convergence target
    double ess_target = 50.0;  // minimum acceptable effective sample size
    double cond_limit = 1e8;   // covariance condition number limit
    double param_bound = 25.0; // |theta| guard against separation blow-up
};

// Maximum pseudo-likelihood: logistic regression of dyad states on change
// statistics, Newton-Raphson to gradient norm < 1e-8.
EstimationResult mple(const ModelSpec& spec, const Graph& g, const NodeData* data = nullptr);

// Monte-Carlo MLE on complete data: solves E_theta[s(Y)] = s(g) by iterated
// Newton steps on sampled moments (log-normal approximation).
EstimationResult mcmcmle(const ModelSpec& spec, const Graph& g, const MleConfig& cfg,
                         const NodeData* data = nullptr,
                         const std::optional<Eigen::VectorXd>& init = std::nullopt);

// Face-value MLE on partially observed data: solves
// E_theta[s(Y)] = E_theta[s(Y) | X_obs] with a free and a conditional chain;
// information matrix Cov[s] - Cov[s | X_obs].
EstimationResult mcmcmle_mar(const ModelSpec& spec, const PartialGraph& p, const MleConfig& cfg,
                             const NodeData* data = nullptr,
                             const std::optional<Eigen::VectorXd>& init = std::nullopt);

}  // namespace missnet

#endif
