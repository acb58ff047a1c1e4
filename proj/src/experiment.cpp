#include "missnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace missnet {

std::string to_string(Representation r) {
    return r == Representation::Miss ? "miss" : "zero";
}

std::string to_string(SweepParameter p) {
    return p == SweepParameter::Entrainment ? "theta1_entrainment" : "theta2_degreecov";
}

void ExperimentPlan::validate() const {
    if (replicates < 1) throw std::invalid_argument("ExperimentPlan: replicates must be >= 1");
    if (models.empty()) throw std::invalid_argument("ExperimentPlan: no missingness models");
    if (representations.empty()) throw std::invalid_argument("ExperimentPlan: no representations");
    for (double f : fractions)
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("ExperimentPlan: fractions must lie in (0,1)");
}

void SweepPlan::validate() const {
    if (levels.empty()) throw std::invalid_argument("SweepPlan: no levels");
    if (replicates < 1) throw std::invalid_argument("SweepPlan: replicates must be >= 1");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("SweepPlan: fraction must lie in (0,1)");
}

EstimationResult run_baseline(const ModelSpec& spec, const Graph& g, const MleConfig& cfg,
                              const NodeData* data) {
    return mcmcmle(spec, g, cfg, data);
}

namespace {

// Bounded worker pool over a task index; each task writes only its own slot,
// so the merged result is independent of scheduling.
void parallel_for(std::size_t n_tasks, int threads, const std::function<void(std::size_t)>& task) {
    threads = std::max(1, threads);
    if (threads == 1 || n_tasks <= 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) task(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int n_workers = std::min<std::size_t>(threads, n_tasks);
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t t = next.fetch_add(1);
                if (t >= n_tasks) return;
                task(t);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<RunRecord> run_replicates(const ExperimentPlan& plan, const Graph& x,
                                      const NodeData* data, int threads) {
    plan.validate();
    plan.spec.validate(x.n(), data);

    struct Coord {
        std::size_t model, fraction, representation;
        int replicate;
    };
    std::vector<Coord> coords;
    coords.reserve(plan.n_records());
    for (std::size_t mi = 0; mi < plan.models.size(); ++mi)
        for (std::size_t fi = 0; fi < plan.fractions.size(); ++fi)
            for (std::size_t pi = 0; pi < plan.representations.size(); ++pi)
                for (int r = 0; r < plan.replicates; ++r) coords.push_back({mi, fi, pi, r});

    std::vector<RunRecord> records(coords.size());
    parallel_for(coords.size(), threads, [&](std::size_t t) {
        const Coord& c = coords[t];
        RunRecord& rec = records[t];
        auto start = std::chrono::steady_clock::now();

        rec.network_id = plan.network_id;
        rec.model_name = plan.models[c.model].name;
        rec.fraction = plan.fractions[c.fraction];
        rec.representation = plan.representations[c.representation];
        rec.replicate = c.replicate;
        // Record seed from coordinates, not execution order.
        rec.seed = derive_seed(plan.base_seed, t);

        MissMask mask = draw_mask(plan.models[c.model].model, x.n(), rec.fraction,
                                  derive_seed(rec.seed, 1), plan.mask_sampler, data);
        PartialGraph p = apply_mask(x, mask);
        rec.n_missing = p.n_missing();
        rec.observed_present = p.observed_present();

        Graph imputed = zero_impute(p);
        rec.observed_stats = stat_vector(plan.spec, imputed, data);
        rec.centralisation = x.n() >= 3 ? degree_centralisation(imputed) : 0.0;

        MleConfig mle = plan.mle;
        mle.sampler.seed = derive_seed(rec.seed, 2);
        if (rec.representation == Representation::Miss) {
            rec.estimate = mcmcmle_mar(plan.spec, p, mle, data);
        } else {
            rec.estimate = mcmcmle(plan.spec, imputed, mle, data);
        }

        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    });
    return records;
}

namespace {

std::string group_key(const RunRecord& rec, const std::vector<std::string>& group_by) {
    std::string key;
    for (const auto& g : group_by) {
        if (!key.empty()) key += "/";
        if (g == "model") {
            key += rec.model_name;
        } else if (g == "fraction") {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%g", rec.fraction);
            key += buf;
        } else if (g == "representation") {
            key += to_string(rec.representation);
        } else {
            throw std::invalid_argument("failure_rate: unknown group key '" + g + "'");
        }
    }
    return key.empty() ? "all" : key;
}

}  // namespace

std::vector<FailureRateRow> failure_rate(const std::vector<RunRecord>& records,
                                         const std::vector<std::string>& group_by) {
    if (records.empty()) throw std::invalid_argument("failure_rate: no records");
    std::map<std::string, FailureRateRow> groups;
    for (const auto& rec : records) {
        std::string key = group_key(rec, group_by);
        FailureRateRow& row = groups[key];
        row.key = key;
        row.n_total += 1;
        if (!rec.estimate.converged) row.n_failed += 1;
    }
    std::vector<FailureRateRow> out;
    out.reserve(groups.size());
    for (auto& [_, row] : groups) {
        row.rate = static_cast<double>(row.n_failed) / row.n_total;
        out.push_back(row);
    }
    return out;
}

RelativeMetrics relative_metrics(const EstimationResult& record, const EstimationResult& baseline) {
    if (!baseline.converged) throw std::invalid_argument("relative_metrics: baseline not converged");
    if (!record.converged) throw std::invalid_argument("relative_metrics: record not converged");
    const int K = static_cast<int>(baseline.theta_hat.size());
    RelativeMetrics out;
    out.r_bias = Eigen::VectorXd::Constant(K, std::numeric_limits<double>::quiet_NaN());
    out.r_se = Eigen::VectorXd::Constant(K, std::numeric_limits<double>::quiet_NaN());
    out.defined.assign(K, false);
    for (int k = 0; k < K; ++k) {
        if (baseline.theta_hat[k] == 0.0 || baseline.se[k] == 0.0) continue;
        out.r_bias[k] = (record.theta_hat[k] - baseline.theta_hat[k]) / baseline.theta_hat[k];
        out.r_se[k] = record.se[k] / baseline.se[k];
        out.defined[k] = true;
    }
    return out;
}

Eigen::VectorXd mean_value_zero(const ModelSpec& spec, const PartialGraph& p,
                                const NodeData* data) {
    return stat_vector(spec, zero_impute(p), data);
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    double pos = p * (static_cast<double>(values.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(values.size() - 1, lo + 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("spearman: need two equal-length series");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < idx.size()) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j));
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    std::vector<double> ra = ranks(a), rb = ranks(b);
    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t k = 0; k < ra.size(); ++k) {
        num += (ra[k] - ma) * (rb[k] - mb);
        va += (ra[k] - ma) * (ra[k] - ma);
        vb += (rb[k] - mb) * (rb[k] - mb);
    }
    return num / std::sqrt(va * vb);
}

SweepResult mnar_sweep(const SweepPlan& plan, const Graph& x, const ModelSpec& spec,
                       const NodeData* data, int threads) {
    plan.validate();
    spec.validate(x.n(), data);

    SweepResult out;
    out.parameter = plan.parameter;
    out.fraction = plan.fraction;
    out.replicates = plan.replicates;
    for (const Term& t : spec.terms) out.term_names.push_back(t.name());

    MleConfig base_cfg = plan.mle;
    base_cfg.sampler.seed = derive_seed(plan.base_seed, 0xBA5E);
    out.baseline = run_baseline(spec, x, base_cfg, data);
    out.baseline_stats = stat_vector(spec, x, data);
    out.baseline_centralisation = degree_centralisation(x);

    auto xs = std::make_shared<const Graph>(x);
    const int K = spec.size();
    const std::size_t R = static_cast<std::size_t>(plan.replicates);

    struct Cell {
        EstimationResult est;
        Eigen::VectorXd stats;
        double centr = 0.0;
    };
    std::vector<Cell> cells(plan.levels.size() * R);

    parallel_for(cells.size(), threads, [&](std::size_t t) {
        std::size_t li = t / R;
        std::uint64_t rec_seed = derive_seed(plan.base_seed, t + 1);

        // Only the swept network-dependent parameter is nonzero.
        ErgmMiss miss;
        miss.conditioning = xs;
        Term term = plan.parameter == SweepParameter::Entrainment ? Term::edge_cov(xs)
                                                                  : Term::degree_cov_sum(xs);
        miss.spec = ModelSpec({term});
        miss.spec.theta << plan.levels[li];

        SamplerConfig mask_cfg = plan.mask_sampler;
        mask_cfg.seed = derive_seed(rec_seed, 1);
        MissMask mask = gen_ergm_miss(miss, x.n(), plan.fraction, mask_cfg, data);
        PartialGraph p = apply_mask(x, mask);

        Cell& cell = cells[t];
        Graph imputed = zero_impute(p);
        cell.stats = stat_vector(spec, imputed, data);
        cell.centr = degree_centralisation(imputed);

        MleConfig mle = plan.mle;
        mle.sampler.seed = derive_seed(rec_seed, 2);
        cell.est = mcmcmle_mar(spec, p, mle, data);
    });

    for (std::size_t li = 0; li < plan.levels.size(); ++li) {
        SweepLevel level;
        level.level = plan.levels[li];
        level.est_mean = Eigen::VectorXd::Zero(K);
        level.est_lo = Eigen::VectorXd::Zero(K);
        level.est_hi = Eigen::VectorXd::Zero(K);
        level.stat_mean = Eigen::VectorXd::Zero(K);
        level.stat_lo = Eigen::VectorXd::Zero(K);
        level.stat_hi = Eigen::VectorXd::Zero(K);

        std::vector<double> centr;
        std::vector<std::vector<double>> est(K), stats(K);
        for (std::size_t r = 0; r < R; ++r) {
            const Cell& cell = cells[li * R + r];
            centr.push_back(cell.centr);
            for (int k = 0; k < K; ++k) stats[k].push_back(cell.stats[k]);
            if (cell.est.converged) {
                level.n_converged += 1;
                for (int k = 0; k < K; ++k) est[k].push_back(cell.est.theta_hat[k]);
            } else {
                level.n_failed += 1;
            }
        }
        for (int k = 0; k < K; ++k) {
            level.stat_mean[k] =
                std::accumulate(stats[k].begin(), stats[k].end(), 0.0) / stats[k].size();
            level.stat_lo[k] = percentile(stats[k], 0.025);
            level.stat_hi[k] = percentile(stats[k], 0.975);
            if (!est[k].empty()) {
                level.est_mean[k] =
                    std::accumulate(est[k].begin(), est[k].end(), 0.0) / est[k].size();
                level.est_lo[k] = percentile(est[k], 0.025);
                level.est_hi[k] = percentile(est[k], 0.975);
            } else {
                level.est_mean[k] = level.est_lo[k] = level.est_hi[k] =
                    std::numeric_limits<double>::quiet_NaN();
            }
        }
        level.centr_mean = std::accumulate(centr.begin(), centr.end(), 0.0) / centr.size();
        level.centr_lo = percentile(centr, 0.025);
        level.centr_hi = percentile(centr, 0.975);
        out.levels.push_back(std::move(level));
    }
    return out;
}

Graph synthetic_network(const std::string& kind, std::uint64_t seed) {
    // Seeded ERGM draws: a moderately clustered default, a sparse low-degree
    // fixture, and a near-complete dense fixture whose draw sits in the
    // high-density mode with maximum-degree hubs.
    int n = 30;
    ModelSpec spec({Term::edges(), Term::alt_k_star(2.0), Term::gwesp(std::log(2.0))});
    if (kind == "default") {
        spec.theta << -1.8, -0.5, 0.9;
    } else if (kind == "sparse") {
        n = 25;
        spec.theta << -1.55, -0.5, 0.95;
    } else if (kind == "dense") {
        n = 25;
        spec.theta << -1.2, 0.6, 0.3;
    } else {
        throw std::invalid_argument("synthetic_network: unknown kind '" + kind + "'");
    }
    SamplerConfig cfg;
    cfg.burn_in = 400000;
    cfg.thin = 1;
    cfg.n_draws = 1;
    cfg.seed = seed;
    cfg.keep_graphs = true;
    return sample_free(spec, n, cfg).graphs.front();
}

}  // namespace missnet
