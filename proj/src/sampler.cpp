#include "missnet/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace missnet {

void SamplerConfig::validate() const {
    if (burn_in < 0) throw std::invalid_argument("SamplerConfig: burn_in must be >= 0");
    if (thin < 0) throw std::invalid_argument("SamplerConfig: thin must be >= 0");
    if (n_draws < 1) throw std::invalid_argument("SamplerConfig: n_draws must be >= 1");
}

Eigen::VectorXd SampleBatch::mean() const { return stats.colwise().mean(); }

Eigen::MatrixXd SampleBatch::cov() const {
    Eigen::MatrixXd centered = stats.rowwise() - stats.colwise().mean();
    return centered.transpose() * centered / static_cast<double>(stats.rows());
}

Eigen::VectorXd SampleBatch::mc_se() const {
    Eigen::MatrixXd c = cov();
    Eigen::VectorXd out(c.rows());
    for (int k = 0; k < c.rows(); ++k) out[k] = std::sqrt(std::max(0.0, c(k, k)) / ess[k]);
    return out;
}

double geyer_ess(const Eigen::VectorXd& series) {
    const int n = static_cast<int>(series.size());
    if (n < 4) return n;
    double m = series.mean();
    Eigen::VectorXd x = series.array() - m;
    double gamma0 = x.squaredNorm() / n;
    if (gamma0 <= 1e-300) return n;  // constant series

    auto gamma = [&](int t) {
        double acc = 0.0;
        for (int i = 0; i + t < n; ++i) acc += x[i] * x[i + t];
        return acc / n;
    };

    // sigma^2 = -gamma_0 + 2 * sum of initial positive pair sums.
    double sigma2 = -gamma0;
    for (int t = 0; 2 * t + 1 < n; ++t) {
        double pair = gamma(2 * t) + gamma(2 * t + 1);
        if (pair <= 0.0) break;
        sigma2 += 2.0 * pair;
    }
    if (sigma2 <= gamma0) return n;  // anti-correlated chain, cap at n
    double ess = n * gamma0 / sigma2;
    return std::min(static_cast<double>(n), std::max(1.0, ess));
}

namespace {

Eigen::VectorXd batch_ess(const Eigen::MatrixXd& stats) {
    Eigen::VectorXd out(stats.cols());
    for (int k = 0; k < stats.cols(); ++k) out[k] = geyer_ess(stats.col(k));
    return out;
}

struct Chain {
    StatEngine engine;
    Graph g;
    Eigen::VectorXd z;
    Eigen::VectorXd delta;
    const Eigen::VectorXd& theta;
    Rng rng;
    long accepted = 0;
    long proposed = 0;

    Chain(const ModelSpec& spec, Graph init, const NodeData* data, std::uint64_t seed)
        : engine(spec, init.n(), data),
          g(std::move(init)),
          z(engine.stat_vector(g)),
          delta(engine.n_terms()),
          theta(spec.theta),
          rng(seed) {}

    // Uniform-dyad toggle step over the supplied dyad list.
    void toggle_step(const std::vector<std::pair<int, int>>& dyads) {
        ++proposed;
        const auto& [i, j] = dyads[rng.uniform_int(dyads.size())];
        bool adding = !g.has_edge(i, j);
        engine.change_stat(g, i, j, delta.data());
        double logr = (adding ? 1.0 : -1.0) * theta.dot(delta);
        if (logr >= 0.0 || std::log(rng.uniform()) < logr) {
            g.set_edge(i, j, adding);
            z += (adding ? 1.0 : -1.0) * delta;
            ++accepted;
        }
    }
};

std::vector<std::pair<int, int>> all_dyads(int n) {
    std::vector<std::pair<int, int>> out;
    out.reserve(dyad_count(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return out;
}

SampleBatch run_toggle_chain(const ModelSpec& spec, Graph init, const SamplerConfig& cfg,
                             const NodeData* data, const std::vector<std::pair<int, int>>& dyads) {
    Chain chain(spec, std::move(init), data, cfg.seed);
    SampleBatch batch;
    batch.stats.resize(cfg.n_draws, chain.engine.n_terms());
    if (cfg.keep_graphs) batch.graphs.reserve(cfg.n_draws);

    if (dyads.empty()) {
        // Nothing to vary: every draw is the initial state.
        for (int d = 0; d < cfg.n_draws; ++d) batch.stats.row(d) = chain.z;
        if (cfg.keep_graphs) batch.graphs.assign(cfg.n_draws, chain.g);
        batch.acceptance_rate = 0.0;
        batch.ess = Eigen::VectorXd::Constant(chain.engine.n_terms(), cfg.n_draws);
        return batch;
    }

    const long thin = cfg.effective_thin(dyads.size());
    for (long s = 0; s < cfg.burn_in; ++s) chain.toggle_step(dyads);
    for (int d = 0; d < cfg.n_draws; ++d) {
        for (long s = 0; s < thin; ++s) chain.toggle_step(dyads);
        batch.stats.row(d) = chain.z;
        if (cfg.keep_graphs) batch.graphs.push_back(chain.g);
    }
    batch.acceptance_rate = static_cast<double>(chain.accepted) / chain.proposed;
    batch.ess = batch_ess(batch.stats);
    return batch;
}

}  // namespace

SampleBatch sample_free(const ModelSpec& spec, int n, const SamplerConfig& cfg,
                        const NodeData* data, const std::optional<Graph>& init) {
    cfg.validate();
    spec.validate(n, data);
    Graph start(n);
    if (init) {
        if (init->n() != n) throw std::invalid_argument("sample_free: init dimension mismatch");
        start = *init;
    } else {
        Rng seed_rng(derive_seed(cfg.seed, 0xA11));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (seed_rng.bernoulli(0.5)) start.set_edge(i, j, true);
    }
    return run_toggle_chain(spec, std::move(start), cfg, data, all_dyads(n));
}

SampleBatch sample_conditional(const ModelSpec& spec, const PartialGraph& p,
                               const SamplerConfig& cfg, const NodeData* data) {
    cfg.validate();
    spec.validate(p.n(), data);
    // Zero-filled completion as the deterministic starting point.
    Graph start = zero_impute(p);
    return run_toggle_chain(spec, std::move(start), cfg, data, p.missing_dyads());
}

SampleBatch sample_fixed_count(const ModelSpec& spec, int n, std::size_t m,
                               const SamplerConfig& cfg, const NodeData* data,
                               const std::optional<Graph>& init) {
    cfg.validate();
    spec.validate(n, data);
    const std::size_t N = dyad_count(n);
    if (m > N) throw std::invalid_argument("sample_fixed_count: m out of range");

    Graph start(n);
    Rng rng(derive_seed(cfg.seed, 0xF1C));
    if (init) {
        if (init->n() != n) throw std::invalid_argument("sample_fixed_count: init dimension mismatch");
        if (init->edge_count() != m)
            throw std::invalid_argument("sample_fixed_count: init edge count != m");
        start = *init;
    } else {
        // Random m-subset of dyads by partial Fisher-Yates over dyad indices.
        std::vector<std::size_t> idx(N);
        for (std::size_t k = 0; k < N; ++k) idx[k] = k;
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t pick = k + rng.uniform_int(N - k);
            std::swap(idx[k], idx[pick]);
            auto [i, j] = dyad_from_index(idx[k], n);
            start.set_edge(i, j, true);
        }
    }

    Chain chain(spec, std::move(start), data, cfg.seed);
    SampleBatch batch;
    batch.stats.resize(cfg.n_draws, chain.engine.n_terms());
    if (cfg.keep_graphs) batch.graphs.reserve(cfg.n_draws);

    if (m == 0 || m == N) {
        // The slice has a single state.
        for (int d = 0; d < cfg.n_draws; ++d) batch.stats.row(d) = chain.z;
        if (cfg.keep_graphs) batch.graphs.assign(cfg.n_draws, chain.g);
        batch.acceptance_rate = 0.0;
        batch.ess = Eigen::VectorXd::Constant(chain.engine.n_terms(), cfg.n_draws);
        return batch;
    }

    // Edge and non-edge dyad lists; an accepted swap exchanges one slot.
    std::vector<std::size_t> edges, nonedges;
    edges.reserve(m);
    nonedges.reserve(N - m);
    for (std::size_t k = 0; k < N; ++k) {
        auto [i, j] = dyad_from_index(k, n);
        (chain.g.has_edge(i, j) ? edges : nonedges).push_back(k);
    }

    Eigen::VectorXd delta_add(chain.engine.n_terms());
    auto swap_step = [&]() {
        ++chain.proposed;
        std::size_t ei = chain.rng.uniform_int(edges.size());
        std::size_t fi = chain.rng.uniform_int(nonedges.size());
        std::size_t e = edges[ei], f = nonedges[fi];
        auto [ei1, ej1] = dyad_from_index(e, n);
        auto [fi1, fj1] = dyad_from_index(f, n);

        chain.engine.change_stat(chain.g, ei1, ej1, chain.delta.data());
        chain.g.set_edge(ei1, ej1, false);
        chain.engine.change_stat(chain.g, fi1, fj1, delta_add.data());
        double logr = chain.theta.dot(delta_add - chain.delta);
        if (logr >= 0.0 || std::log(chain.rng.uniform()) < logr) {
            chain.g.set_edge(fi1, fj1, true);
            chain.z += delta_add - chain.delta;
            std::swap(edges[ei], nonedges[fi]);
            ++chain.accepted;
        } else {
            chain.g.set_edge(ei1, ej1, true);
        }
    };

    const long thin = cfg.effective_thin(N);
    for (long s = 0; s < cfg.burn_in; ++s) swap_step();
    for (int d = 0; d < cfg.n_draws; ++d) {
        for (long s = 0; s < thin; ++s) swap_step();
        batch.stats.row(d) = chain.z;
        if (cfg.keep_graphs) batch.graphs.push_back(chain.g);
    }
    batch.acceptance_rate = static_cast<double>(chain.accepted) / chain.proposed;
    batch.ess = batch_ess(batch.stats);
    return batch;
}

ExactMoments enumerate_exact(const ModelSpec& spec, int n, const NodeData* data) {
    if (n > 5) throw std::invalid_argument("enumerate_exact: n > 5 refused (combinatorial blow-up)");
    if (n < 1) throw std::invalid_argument("enumerate_exact: need n >= 1");
    spec.validate(n, data);
    StatEngine engine(spec, n, data);
    const std::size_t N = dyad_count(n);
    const std::uint64_t total = std::uint64_t{1} << N;
    const int K = engine.n_terms();

    // Two passes with log-sum-exp for a stable normalising constant.
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::uint64_t code = 0; code < total; ++code) {
        Graph g = Graph::from_dyad_code(n, code);
        max_logw = std::max(max_logw, spec.theta.dot(engine.stat_vector(g)));
    }
    double wsum = 0.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(K);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(K, K);
    for (std::uint64_t code = 0; code < total; ++code) {
        Graph g = Graph::from_dyad_code(n, code);
        Eigen::VectorXd z = engine.stat_vector(g);
        double w = std::exp(spec.theta.dot(z) - max_logw);
        wsum += w;
        mean += w * z;
        second += w * z * z.transpose();
    }
    mean /= wsum;
    second /= wsum;

    ExactMoments out;
    out.mean = mean;
    out.cov = second - mean * mean.transpose();
    out.log_kappa = max_logw + std::log(wsum);
    return out;
}

}  // namespace missnet
