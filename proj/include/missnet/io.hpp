#ifndef MISSNET_IO_HPP
#define MISSNET_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "missnet/experiment.hpp"

namespace missnet {

// Data-file problem (malformed rows, unknown nodes): CLI exit code 3.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, int line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

// Configuration problem (schema violations, unknown keys): CLI exit code 2.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadedNetwork {
    Graph graph;
    NodeData data;
    std::vector<std::string> labels;  // canonical 0-based order (sorted)
};

// Edge list CSV ("source,target", undirected, duplicates collapse) plus an
// optional attribute CSV ("node,<col>,..."; numeric columns are those whose
// every cell parses as a number, the rest are categorical). Attr-only rows
// add isolates; an edge-file node absent from the attr file is an error.
LoadedNetwork load_network(const std::string& edge_path, const std::string& attr_path = "");

void save_network(const Graph& g, const std::vector<std::string>& labels,
                  const std::string& path);
void save_attributes(const NodeData& data, const std::vector<std::string>& labels,
                     const std::string& path);
// "source,target,state" rows for present (1) and missing (NA) dyads.
void save_partial(const PartialGraph& p, const std::vector<std::string>& labels,
                  const std::string& path);
// Sidecar map from canonical 0-based index to external label.
void save_labels(const std::vector<std::string>& labels, const std::string& path);
void save_mask(const MissMask& d, const std::vector<std::string>& labels,
               const std::string& path);

// Experiment configuration: JSON document, schema-validated with unknown
// keys rejected.
struct Config {
    std::string network_id = "net";
    std::string edges_path;      // empty when synthetic
    std::string attrs_path;
    std::string synthetic_kind;  // "default"/"sparse"/"dense" when set
    std::uint64_t synthetic_seed = 11;

    std::vector<Term> terms;     // estimation model (term parameters only)
    std::vector<std::string> model_names;
    std::vector<double> fractions{0.10, 0.35, 0.60};
    std::vector<Representation> representations{Representation::Miss, Representation::Zero};
    int replicates = 50;

    SweepParameter sweep_parameter = SweepParameter::Entrainment;
    std::vector<double> sweep_levels{-1.0, -0.5, 0.0, 0.5, 1.0};
    double sweep_fraction = 0.35;
    int sweep_replicates = 50;

    MleConfig mle;
    SamplerConfig mask_sampler;

    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = "out";

    std::uint64_t config_hash = 0;  // FNV-1a of the canonical JSON dump
};

Config load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

// Builds the estimation spec (theta = 0) and resolves covariate terms
// against the loaded network.
ModelSpec estimation_spec(const Config& cfg, int n, const NodeData* data);

// Resolves the network named by the config (file-backed or synthetic).
LoadedNetwork resolve_network(const Config& cfg);

// Named missingness models from the config presets.
std::vector<NamedMissModel> resolve_models(const Config& cfg, const LoadedNetwork& net);

// CSV emission. Every file starts with a provenance comment line carrying
// the config hash and base seed; record rows follow a fixed, documented
// column order. Wall-clock fields never reach the files.
void write_records_csv(const std::string& path, const std::vector<RunRecord>& records,
                       const std::vector<std::string>& term_names, std::uint64_t config_hash,
                       std::uint64_t seed);
void write_failure_rates_csv(const std::string& path, const std::vector<FailureRateRow>& rows,
                             std::uint64_t config_hash, std::uint64_t seed);
void write_baseline_csv(const std::string& path, const EstimationResult& baseline,
                        const std::vector<std::string>& term_names, std::uint64_t config_hash,
                        std::uint64_t seed);
void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     std::uint64_t config_hash, std::uint64_t seed);

// Line/band SVG plots for a sweep: per-term estimate plots, per-term
// zero-imputed statistic plots, and a centralisation plot, each with the
// mean line, the 95% band, and a horizontal baseline reference.
std::vector<std::string> write_sweep_plots(const std::string& dir_prefix, const SweepResult& sweep,
                                           std::uint64_t config_hash, std::uint64_t seed);

int run_cli(int argc, char** argv);

}  // namespace missnet

#endif
