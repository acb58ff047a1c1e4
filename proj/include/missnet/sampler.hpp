#ifndef MISSNET_SAMPLER_HPP
#define MISSNET_SAMPLER_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "missnet/graph.hpp"
#include "missnet/rng.hpp"
#include "missnet/stats.hpp"

namespace missnet {

enum class ProposalKind { Toggle, Swap };

struct SamplerConfig {
    long burn_in = 10000;  // proposals discarded before retention
    long thin = 0;         // proposals between retained draws; 0 means one sweep (N)
    int n_draws = 1000;
    std::uint64_t seed = 0;
    ProposalKind proposal = ProposalKind::Toggle;
    bool keep_graphs = false;

    void validate() const;
    long effective_thin(std::size_t n_dyads) const {
        return thin > 0 ? thin : static_cast<long>(n_dyads);
    }
};

struct SampleBatch {
    Eigen::MatrixXd stats;  // n_draws x n_terms, one row per retained draw
    std::vector<Graph> graphs;
    double acceptance_rate = 0.0;
    Eigen::VectorXd ess;

    Eigen::VectorXd mean() const;
    Eigen::MatrixXd cov() const;
    // Monte Carlo SE of the mean: sqrt(var_k / ess_k).
    Eigen::VectorXd mc_se() const;
};

// Effective sample size via Geyer's initial positive sequence.
double geyer_ess(const Eigen::VectorXd& series);

// Metropolis-Hastings over graph space with uniform dyad toggles; stationary
// distribution proportional to exp(theta' z(g)).
SampleBatch sample_free(const ModelSpec& spec, int n, const SamplerConfig& cfg,
                        const NodeData* data = nullptr,
                        const std::optional<Graph>& init = std::nullopt);

// Chain restricted to the m-edge slice of graph space via uniform
// (edge, non-edge) swap proposals; every retained draw has edge_count == m.
SampleBatch sample_fixed_count(const ModelSpec& spec, int n, std::size_t m,
                               const SamplerConfig& cfg, const NodeData* data = nullptr,
                               const std::optional<Graph>& init = std::nullopt);

// Conditional chain for X_mis | X_obs: toggles restricted to the NA dyads of
// p, observed dyads never change.
SampleBatch sample_conditional(const ModelSpec& spec, const PartialGraph& p,
                               const SamplerConfig& cfg, const NodeData* data = nullptr);

struct ExactMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double log_kappa = 0.0;
};

// Exact moments and normalising constant by full summation over all 2^N
// graphs; refuses n > 5. Oracle for desk-scale tests.
ExactMoments enumerate_exact(const ModelSpec& spec, int n, const NodeData* data = nullptr);

}  // namespace missnet

#endif
