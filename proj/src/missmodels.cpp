#include "missnet/missmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace missnet {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<std::vector<double>> latent_positions(const LatentSpace& m, int n, std::uint64_t seed) {
    if (!m.positions.empty()) {
        if (static_cast<int>(m.positions.size()) != n)
            throw std::invalid_argument("LatentSpace: positions length != n");
        return m.positions;
    }
    Rng rng(derive_seed(seed, 0x1A7E));
    std::vector<std::vector<double>> u(n, std::vector<double>(m.dim));
    for (auto& row : u)
        for (auto& v : row) v = rng.normal();
    return u;
}

std::vector<double> latent_distances(const std::vector<std::vector<double>>& u, int n) {
    std::vector<double> dist(dyad_count(n));
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) {
            double s = 0.0;
            for (std::size_t l = 0; l < u[i].size(); ++l) {
                double d = u[i][l] - u[j][l];
                s += d * d;
            }
            dist[k] = std::sqrt(s);
        }
    return dist;
}

void check_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

}  // namespace

std::string to_string(MissAssumption a) {
    switch (a) {
        case MissAssumption::HomogeneousMCAR: return "homogeneous-MCAR";
        case MissAssumption::HeterogeneousMCAR: return "heterogeneous-MCAR";
        case MissAssumption::MCAR: return "MCAR";
        case MissAssumption::MAR: return "MAR";
        case MissAssumption::MNAR: return "MNAR";
    }
    return "unknown";
}

std::vector<double> dyad_probabilities(const MissModel& model, int n, std::uint64_t seed,
                                       const NodeData* data) {
    const std::size_t N = dyad_count(n);
    std::vector<double> p(N, 0.0);

    if (const auto* hb = std::get_if<HomBernoulli>(&model)) {
        check_prob(hb->p, "HomBernoulli p");
        std::fill(p.begin(), p.end(), hb->p);
    } else if (const auto* cl = std::get_if<CovariateLogit>(&model)) {
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++k) {
                double eta = cl->intercept;
                for (const auto& [attr, coef] : cl->node_coefs) {
                    if (data == nullptr || !data->has_numeric(attr))
                        throw std::invalid_argument("CovariateLogit: unresolvable attribute " + attr);
                    const auto& c = data->numeric(attr);
                    eta += coef * (c[i] + c[j]);
                }
                for (const auto& [w, coef] : cl->dyad_coefs) {
                    if (!w || w->n() != n)
                        throw std::invalid_argument("CovariateLogit: bad dyad covariate");
                    eta += coef * (w->has_edge(i, j) ? 1.0 : 0.0);
                }
                p[k] = sigmoid(eta);
            }
    } else if (const auto* bm = std::get_if<BetaModel>(&model)) {
        if (static_cast<int>(bm->beta.size()) != n)
            throw std::invalid_argument("BetaModel: beta length != n");
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++k) p[k] = sigmoid(bm->beta[i] + bm->beta[j]);
    } else if (const auto* ls = std::get_if<LatentSpace>(&model)) {
        auto u = latent_positions(*ls, n, seed);
        auto dist = latent_distances(u, n);
        for (std::size_t k = 0; k < N; ++k) p[k] = sigmoid(ls->intercept + ls->dist_coef * dist[k]);
    } else if (const auto* bs = std::get_if<BlockStructure>(&model)) {
        if (static_cast<int>(bs->partition.size()) != n)
            throw std::invalid_argument("BlockStructure: partition must cover all nodes");
        check_prob(bs->p_within, "BlockStructure p_within");
        check_prob(bs->p_between, "BlockStructure p_between");
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++k)
                p[k] = bs->partition[i] == bs->partition[j] ? bs->p_within : bs->p_between;
    } else {
        throw std::invalid_argument("dyad_probabilities: not a dyad-independent model");
    }
    return p;
}

MissMask gen_independent(const MissModel& model, int n, std::uint64_t seed,
                         std::optional<double> target_fraction, const NodeData* data) {
    if (std::holds_alternative<ErgmMiss>(model))
        throw std::invalid_argument("gen_independent: ErgmMiss is not dyad-independent");
    const std::size_t N = dyad_count(n);
    MissMask mask(n);
    Rng rng(seed);

    if (!target_fraction) {
        auto p = dyad_probabilities(model, n, seed, data);
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++k)
                if (rng.bernoulli(p[k])) mask.set_edge(i, j, true);
        return mask;
    }

    double f = *target_fraction;
    if (!(f >= 0.0 && f <= 1.0))
        throw std::invalid_argument("gen_independent: target_fraction outside [0,1]");
    std::size_t m = static_cast<std::size_t>(std::llround(f * static_cast<double>(N)));

    // Latent intercept calibrated so the expected fraction hits the target
    // before exact-count sampling.
    std::vector<double> p;
    if (const auto* ls = std::get_if<LatentSpace>(&model)) {
        auto u = latent_positions(*ls, n, seed);
        auto dist = latent_distances(u, n);
        double lo = -40.0, hi = 40.0;
        for (int it = 0; it < 200; ++it) {
            double alpha = 0.5 * (lo + hi);
            double mean = 0.0;
            for (double d : dist) mean += sigmoid(alpha + ls->dist_coef * d);
            mean /= static_cast<double>(N);
            (mean < f ? lo : hi) = alpha;
        }
        double alpha = 0.5 * (lo + hi);
        p.resize(N);
        for (std::size_t k = 0; k < N; ++k) p[k] = sigmoid(alpha + ls->dist_coef * dist[k]);
    } else {
        p = dyad_probabilities(model, n, seed, data);
    }

    // Successive sampling without replacement, weights proportional to p_ij:
    // order dyads by log(u)/w and keep the m largest keys.
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    std::vector<std::pair<double, std::size_t>> keys(N);
    for (std::size_t k = 0; k < N; ++k) {
        double u = rng.uniform();
        double w = total > 0.0 ? p[k] : 1.0;  // degenerate all-zero weights: uniform
        double key = w > 0.0 ? std::log(std::max(u, 1e-300)) / w
                             : -std::numeric_limits<double>::infinity();
        keys[k] = {key, k};
    }
    std::partial_sort(keys.begin(), keys.begin() + m, keys.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t t = 0; t < m; ++t) {
        auto [i, j] = dyad_from_index(keys[t].second, n);
        mask.set_edge(i, j, true);
    }
    return mask;
}

MissMask gen_ergm_miss(const ErgmMiss& model, int n, std::optional<double> fraction,
                       const SamplerConfig& cfg, const NodeData* data) {
    model.spec.validate(n, data);  // catches a missing/mismatched conditioning network
    SamplerConfig draw_cfg = cfg;
    draw_cfg.n_draws = 1;
    draw_cfg.keep_graphs = true;
    if (fraction) {
        double f = *fraction;
        if (!(f >= 0.0 && f <= 1.0))
            throw std::invalid_argument("gen_ergm_miss: fraction outside [0,1]");
        std::size_t m = static_cast<std::size_t>(std::llround(f * static_cast<double>(dyad_count(n))));
        return sample_fixed_count(model.spec, n, m, draw_cfg, data).graphs.front();
    }
    return sample_free(model.spec, n, draw_cfg, data).graphs.front();
}

MissMask draw_mask(const MissModel& model, int n, std::optional<double> fraction,
                   std::uint64_t seed, const SamplerConfig& ergm_cfg, const NodeData* data) {
    if (const auto* em = std::get_if<ErgmMiss>(&model)) {
        SamplerConfig cfg = ergm_cfg;
        cfg.seed = seed;
        return gen_ergm_miss(*em, n, fraction, cfg, data);
    }
    return gen_independent(model, n, seed, fraction, data);
}

MissAssumption classify_assumption(const MissModel& model) {
    if (const auto* hb = std::get_if<HomBernoulli>(&model)) {
        (void)hb;
        return MissAssumption::HomogeneousMCAR;
    }
    if (const auto* cl = std::get_if<CovariateLogit>(&model)) {
        bool any = false;
        for (const auto& [_, coef] : cl->node_coefs) any = any || coef != 0.0;
        for (const auto& [_, coef] : cl->dyad_coefs) any = any || coef != 0.0;
        return any ? MissAssumption::MAR : MissAssumption::HomogeneousMCAR;
    }
    if (std::holds_alternative<BetaModel>(model) || std::holds_alternative<LatentSpace>(model) ||
        std::holds_alternative<BlockStructure>(model))
        return MissAssumption::HeterogeneousMCAR;

    const auto& em = std::get<ErgmMiss>(model);
    bool theta_nonzero = false;   // network-dependent terms
    bool beta_nonzero = false;    // covariate terms
    bool psi_het_nonzero = false; // endogenous, beyond the edges/homogeneity term
    for (int k = 0; k < em.spec.size(); ++k) {
        if (em.spec.theta[k] == 0.0) continue;
        switch (em.spec.terms[k].kind) {
            case TermKind::EdgeCov:
            case TermKind::DegreeCovSum: {
                // A term bound to the conditioning network depends on X;
                // any other covariate graph is exogenous.
                bool on_network = em.conditioning && em.spec.terms[k].covariate == em.conditioning;
                (on_network ? theta_nonzero : beta_nonzero) = true;
                break;
            }
            case TermKind::NodeCovSum:
            case TermKind::AbsDiff:
            case TermKind::NodeMatch:
                beta_nonzero = true;
                break;
            case TermKind::Edges:
                break;  // homogeneity parameter only
            default:
                psi_het_nonzero = true;
                break;
        }
    }
    if (theta_nonzero) return MissAssumption::MNAR;
    if (beta_nonzero) return MissAssumption::MAR;
    if (psi_het_nonzero) return MissAssumption::HeterogeneousMCAR;
    return MissAssumption::HomogeneousMCAR;
}

ErgmMiss ergm_mcar_preset() {
    ErgmMiss em;
    em.spec = ModelSpec({Term::gw_degree(std::log(2.0)), Term::gwesp(std::log(2.0))});
    em.spec.theta << 2.0, 2.0;
    return em;
}

ErgmMiss ergm_mnar_preset(std::shared_ptr<const Graph> x) {
    if (!x) throw std::invalid_argument("ergm_mnar_preset: conditioning network required");
    ErgmMiss em;
    em.conditioning = x;
    em.spec = ModelSpec({Term::gw_degree(std::log(2.0)), Term::gwesp(std::log(2.0)),
                         Term::edge_cov(x), Term::degree_cov_sum(x)});
    em.spec.theta << 0.4, 0.5, 0.8, 0.2;
    return em;
}

MissModel preset_by_name(const std::string& name, int n, std::shared_ptr<const Graph> x,
                         std::uint64_t seed) {
    if (name == "hbern") return HomBernoulli{0.35};
    if (name == "beta") {
        BetaModel bm;
        bm.beta.resize(n);
        Rng rng(derive_seed(seed, 0xBE7A));
        for (auto& b : bm.beta) b = rng.normal();
        return bm;
    }
    if (name == "latent") return LatentSpace{};
    if (name == "block") {
        BlockStructure bs;
        bs.partition.resize(n);
        for (int i = 0; i < n; ++i) bs.partition[i] = i < n / 2 ? 0 : 1;
        bs.p_within = 0.2;
        bs.p_between = 0.5;
        return bs;
    }
    if (name == "ergm_mcar_t3") return ergm_mcar_preset();
    if (name == "ergm_mnar_t3") return ergm_mnar_preset(std::move(x));
    throw std::invalid_argument("unknown missingness preset: " + name);
}

}  // namespace missnet
