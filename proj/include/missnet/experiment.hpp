#ifndef MISSNET_EXPERIMENT_HPP
#define MISSNET_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "missnet/estimate.hpp"
#include "missnet/graph.hpp"
#include "missnet/missmodels.hpp"
#include "missnet/stats.hpp"

namespace missnet {

// How missingness is represented before re-estimation: kept as NA and fitted
// with the face-value likelihood, or zero-imputed and fitted as complete.
enum class Representation { Miss, Zero };

std::string to_string(Representation r);

struct NamedMissModel {
    std::string name;
    MissModel model;
};

struct ExperimentPlan {
    std::string network_id = "net";
    ModelSpec spec;
    std::vector<NamedMissModel> models;
    std::vector<double> fractions{0.10, 0.35, 0.60};
    std::vector<Representation> representations{Representation::Miss, Representation::Zero};
    int replicates = 50;
    std::uint64_t base_seed = 0;
    MleConfig mle;
    SamplerConfig mask_sampler;  // chain settings for ERGM mask draws

    void validate() const;
    std::size_t n_records() const {
        return models.size() * fractions.size() * representations.size() *
               static_cast<std::size_t>(replicates);
    }
};

// One replicate of the degrade -> re-estimate pipeline, reproducible from its
// coordinates plus the base seed.
struct RunRecord {
    std::string network_id;
    std::string model_name;
    double fraction = 0.0;
    Representation representation = Representation::Miss;
    int replicate = 0;
    std::uint64_t seed = 0;

    std::size_t n_missing = 0;
    std::size_t observed_present = 0;
    EstimationResult estimate;
    Eigen::VectorXd observed_stats;  // statistics of the zero-imputed graph
    double centralisation = 0.0;     // of the zero-imputed graph
    double wall_ms = 0.0;            // in-memory only, never serialized
};

// Complete-data fit used as the reference eta for rBias/rSE.
EstimationResult run_baseline(const ModelSpec& spec, const Graph& g, const MleConfig& cfg,
                              const NodeData* data = nullptr);

// Full plan execution: every (model, fraction, representation, replicate)
// yields exactly one record; estimation failures are records too. Replicates
// run on a bounded worker pool; output order is by coordinates regardless of
// scheduling.
std::vector<RunRecord> run_replicates(const ExperimentPlan& plan, const Graph& x,
                                      const NodeData* data = nullptr, int threads = 1);

struct FailureRateRow {
    std::string key;
    int n_failed = 0;
    int n_total = 0;
    double rate = 0.0;
};

// failures / total per group; group_by is a subset of
// {"model", "fraction", "representation"}.
std::vector<FailureRateRow> failure_rate(const std::vector<RunRecord>& records,
                                         const std::vector<std::string>& group_by);

struct RelativeMetrics {
    Eigen::VectorXd r_bias;      // (eta~ - eta) / eta
    Eigen::VectorXd r_se;        // SE(eta~) / SE(eta)
    std::vector<bool> defined;   // false where a zero denominator was flagged
};

RelativeMetrics relative_metrics(const EstimationResult& record, const EstimationResult& baseline);

// Statistics of the zero-imputed graph (mean-value parameters under zero).
Eigen::VectorXd mean_value_zero(const ModelSpec& spec, const PartialGraph& p,
                                const NodeData* data = nullptr);

enum class SweepParameter { Entrainment, DegreeCov };

std::string to_string(SweepParameter p);

struct SweepPlan {
    SweepParameter parameter = SweepParameter::Entrainment;
    std::vector<double> levels{-1.0, -0.5, 0.0, 0.5, 1.0};
    double fraction = 0.35;
    int replicates = 50;
    std::uint64_t base_seed = 0;
    MleConfig mle;
    SamplerConfig mask_sampler;

    void validate() const;
};

// Per-level aggregates: mean and empirical 2.5/97.5 percentiles of the
// re-estimated parameters (converged runs) and of the zero-imputed
// statistics and centralisation (all runs).
struct SweepLevel {
    double level = 0.0;
    int n_converged = 0;
    int n_failed = 0;
    Eigen::VectorXd est_mean, est_lo, est_hi;
    Eigen::VectorXd stat_mean, stat_lo, stat_hi;
    double centr_mean = 0.0, centr_lo = 0.0, centr_hi = 0.0;
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::Entrainment;
    double fraction = 0.0;
    int replicates = 0;
    std::vector<std::string> term_names;
    std::vector<SweepLevel> levels;
    EstimationResult baseline;
    Eigen::VectorXd baseline_stats;
    double baseline_centralisation = 0.0;
};

// The MNAR inspection: sweep one network-dependent parameter with everything
// else zero, missingness fixed to `fraction` by exact count, re-estimate
// under the Miss representation and track the zero-imputed mean values.
SweepResult mnar_sweep(const SweepPlan& plan, const Graph& x, const ModelSpec& spec,
                       const NodeData* data = nullptr, int threads = 1);

// Empirical percentile with linear interpolation between order statistics.
double percentile(std::vector<double> values, double p);

// Spearman rank correlation; ties get average ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Seeded synthetic stand-in networks ("default", "sparse", "dense").
Graph synthetic_network(const std::string& kind, std::uint64_t seed);

}  // namespace missnet

#endif
