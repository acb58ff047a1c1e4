#ifndef MISSNET_MISSMODELS_HPP
#define MISSNET_MISSMODELS_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "missnet/graph.hpp"
#include "missnet/sampler.hpp"
#include "missnet/stats.hpp"

namespace missnet {

// Missingness assumption taxonomy. The MCAR value is the coarse label for
// either MCAR subtype.
enum class MissAssumption { HomogeneousMCAR, HeterogeneousMCAR, MCAR, MAR, MNAR };

inline bool is_mcar(MissAssumption a) {
    return a == MissAssumption::MCAR || a == MissAssumption::HomogeneousMCAR ||
           a == MissAssumption::HeterogeneousMCAR;
}
std::string to_string(MissAssumption a);

// Every d_ij i.i.d. with one probability.
struct HomBernoulli {
    double p = 0.0;
};

// logit(p_ij) = intercept + sum coef*(c_i + c_j) + sum coef*w_ij over
// exogenous covariates; dyad-independent given the covariates.
struct CovariateLogit {
    double intercept = 0.0;
    std::vector<std::pair<std::string, double>> node_coefs;
    std::vector<std::pair<std::shared_ptr<const Graph>, double>> dyad_coefs;
};

// p_ij = logistic(beta_i + beta_j); per-node propensity to be unobserved.
struct BetaModel {
    std::vector<double> beta;
};

// p_ij = logistic(alpha + gamma * ||u_i - u_j||) over latent positions u in
// R^dim; empty positions are generated i.i.d. standard normal from the seed.
struct LatentSpace {
    int dim = 2;
    std::vector<std::vector<double>> positions;
    double intercept = 0.0;
    double dist_coef = 1.0;
};

// Block-structured dyad probabilities: p_within inside a block, p_between
// across blocks.
struct BlockStructure {
    std::vector<int> partition;
    double p_within = 0.0;
    double p_between = 0.0;
};

// Full ERGM for D, optionally conditioned on a network X through
// EdgeCov/DegreeCovSum terms bound to `conditioning`.
struct ErgmMiss {
    ModelSpec spec;
    std::shared_ptr<const Graph> conditioning;
};

using MissModel =
    std::variant<HomBernoulli, CovariateLogit, BetaModel, LatentSpace, BlockStructure, ErgmMiss>;

// Per-dyad missingness probabilities (canonical dyad order) for the
// dyad-independent families.
std::vector<double> dyad_probabilities(const MissModel& model, int n, std::uint64_t seed,
                                       const NodeData* data = nullptr);

// One indicator draw from a dyad-independent family. With target_fraction the
// mask has exactly round(f*N) missing dyads, chosen by weighted successive
// sampling without replacement with weights proportional to p_ij.
MissMask gen_independent(const MissModel& model, int n, std::uint64_t seed,
                         std::optional<double> target_fraction = std::nullopt,
                         const NodeData* data = nullptr);

// One indicator draw from the ERGM family; with a fraction the chain runs on
// the exact-count slice m = round(f*N), otherwise free.
MissMask gen_ergm_miss(const ErgmMiss& model, int n, std::optional<double> fraction,
                       const SamplerConfig& cfg, const NodeData* data = nullptr);

// Dispatches to gen_independent or gen_ergm_miss.
MissMask draw_mask(const MissModel& model, int n, std::optional<double> fraction,
                   std::uint64_t seed, const SamplerConfig& ergm_cfg,
                   const NodeData* data = nullptr);

// Parameter-group classifier: network-dependent terms nonzero -> MNAR;
// covariate terms nonzero -> MAR; non-edge endogenous terms nonzero ->
// heterogeneous MCAR; otherwise homogeneous MCAR.
MissAssumption classify_assumption(const MissModel& model);

// ERGM presets: psi2 = 2 GWDegree(log 2), psi3 = 2 GWESP(log 2).
ErgmMiss ergm_mcar_preset();
// psi2 = 0.4, psi3 = 0.5, theta1 = 0.8 entrainment, theta2 = 0.2 degree
// covariate, both bound to the conditioning network.
ErgmMiss ergm_mnar_preset(std::shared_ptr<const Graph> x);

// Named presets addressable from configs: hbern, beta, latent, block,
// ergm_mcar_t3, ergm_mnar_t3.
MissModel preset_by_name(const std::string& name, int n, std::shared_ptr<const Graph> x,
                         std::uint64_t seed);

}  // namespace missnet

#endif
