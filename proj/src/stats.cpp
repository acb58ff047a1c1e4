#include "missnet/stats.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace missnet {

namespace {

std::string fmt_decay(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

std::string Term::name() const {
    switch (kind) {
        case TermKind::Edges: return "edges";
        case TermKind::AltKStar: return "altkstar(" + fmt_decay(decay) + ")";
        case TermKind::GWDegree: return "gwdegree(" + fmt_decay(decay) + ")";
        case TermKind::GWESP: return "gwesp(" + fmt_decay(decay) + ")";
        case TermKind::NodeCovSum: return "nodecov(" + attr + ")";
        case TermKind::AbsDiff: return "absdiff(" + attr + ")";
        case TermKind::NodeMatch: return "nodematch(" + attr + ")";
        case TermKind::EdgeCov: return "edgecov";
        case TermKind::DegreeCovSum: return "degcov";
    }
    return "unknown";
}

void ModelSpec::validate(int n, const NodeData* data) const {
    if (theta.size() != size()) throw std::invalid_argument("ModelSpec: theta/terms length mismatch");
    for (int k = 0; k < theta.size(); ++k)
        if (!std::isfinite(theta[k])) throw std::invalid_argument("ModelSpec: non-finite parameter");
    for (const Term& t : terms) {
        switch (t.kind) {
            case TermKind::AltKStar:
                if (!(t.decay > 1.0)) throw std::invalid_argument("AltKStar: lambda must be > 1");
                break;
            case TermKind::GWDegree:
            case TermKind::GWESP:
                if (!(t.decay > 0.0)) throw std::invalid_argument("GW term: alpha must be > 0");
                break;
            case TermKind::NodeCovSum:
            case TermKind::AbsDiff:
                if (data == nullptr || !data->has_numeric(t.attr))
                    throw std::invalid_argument("term " + t.name() + ": unresolvable attribute");
                break;
            case TermKind::NodeMatch:
                if (data == nullptr || !data->has_categorical(t.attr))
                    throw std::invalid_argument("term " + t.name() + ": unresolvable attribute");
                break;
            case TermKind::EdgeCov:
            case TermKind::DegreeCovSum:
                if (!t.covariate) throw std::invalid_argument("term " + t.name() + ": missing covariate graph");
                if (t.covariate->n() != n)
                    throw std::invalid_argument("term " + t.name() + ": covariate dimension mismatch");
                break;
            default: break;
        }
    }
}

StatEngine::StatEngine(const ModelSpec& spec, int n, const NodeData* data) : n_(n) {
    spec.validate(n, data);
    terms_.reserve(spec.terms.size());
    for (const Term& t : spec.terms) {
        BoundTerm bt;
        bt.kind = t.kind;
        bt.decay = t.decay;
        double base = 0.0;
        switch (t.kind) {
            case TermKind::AltKStar:
                bt.scale = t.decay;  // change stats carry a single lambda factor
                base = 1.0 - 1.0 / t.decay;
                break;
            case TermKind::GWDegree:
            case TermKind::GWESP:
                bt.scale = std::exp(t.decay);
                base = 1.0 - std::exp(-t.decay);
                break;
            case TermKind::NodeCovSum:
            case TermKind::AbsDiff:
                bt.numeric = &data->numeric(t.attr);
                break;
            case TermKind::NodeMatch: {
                const auto& col = data->categorical(t.attr);
                std::map<std::string, int> dict;
                bt.codes.reserve(col.size());
                for (const auto& v : col) {
                    auto [it, _] = dict.emplace(v, static_cast<int>(dict.size()));
                    bt.codes.push_back(it->second);
                }
                break;
            }
            case TermKind::EdgeCov:
            case TermKind::DegreeCovSum:
                bt.covariate = t.covariate;
                break;
            default: break;
        }
        if (base != 0.0 || bt.kind == TermKind::AltKStar || bt.kind == TermKind::GWDegree ||
            bt.kind == TermKind::GWESP) {
            bt.weights.resize(static_cast<std::size_t>(n) + 2);
            double w = 1.0;
            for (auto& entry : bt.weights) {
                entry = w;
                w *= base;
            }
        }
        terms_.push_back(std::move(bt));
    }
}

double StatEngine::term_stat(const BoundTerm& t, const Graph& g) const {
    switch (t.kind) {
        case TermKind::Edges:
            return static_cast<double>(g.edge_count());
        case TermKind::AltKStar: {
            // lambda^2 * sum_i [ (1-1/lambda)^deg_i - 1 + deg_i/lambda ]
            double lambda = t.decay, acc = 0.0;
            for (int i = 0; i < n_; ++i) {
                int d = g.degree(i);
                acc += t.weights[d] - 1.0 + d / lambda;
            }
            return lambda * lambda * acc;
        }
        case TermKind::GWDegree: {
            // e^alpha * sum_i [ 1 - (1-e^-alpha)^deg_i ]
            double acc = 0.0;
            for (int i = 0; i < n_; ++i) acc += 1.0 - t.weights[g.degree(i)];
            return t.scale * acc;
        }
        case TermKind::GWESP: {
            // e^alpha * sum over edges of [ 1 - (1-e^-alpha)^sp(edge) ]
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                for (int j : g.neighbours(i)) {
                    if (j <= i) continue;
                    acc += 1.0 - t.weights[g.common_neighbours(i, j)];
                }
            return t.scale * acc;
        }
        case TermKind::NodeCovSum: {
            const auto& c = *t.numeric;
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                for (int j : g.neighbours(i)) {
                    if (j <= i) continue;
                    acc += c[i] + c[j];
                }
            return acc;
        }
        case TermKind::AbsDiff: {
            const auto& c = *t.numeric;
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                for (int j : g.neighbours(i)) {
                    if (j <= i) continue;
                    acc += std::abs(c[i] - c[j]);
                }
            return acc;
        }
        case TermKind::NodeMatch: {
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                for (int j : g.neighbours(i)) {
                    if (j <= i) continue;
                    acc += t.codes[i] == t.codes[j] ? 1.0 : 0.0;
                }
            return acc;
        }
        case TermKind::EdgeCov: {
            const Graph& x = *t.covariate;
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                for (int j : g.neighbours(i)) {
                    if (j <= i) continue;
                    acc += x.has_edge(i, j) ? 1.0 : 0.0;
                }
            return acc;
        }
        case TermKind::DegreeCovSum: {
            const Graph& x = *t.covariate;
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                for (int j : g.neighbours(i)) {
                    if (j <= i) continue;
                    acc += x.degree(i) + x.degree(j);
                }
            return acc;
        }
    }
    return 0.0;
}

double StatEngine::term_change(const BoundTerm& t, const Graph& g, int i, int j) const {
    switch (t.kind) {
        case TermKind::Edges:
            return 1.0;
        case TermKind::AltKStar: {
            // lambda * [ 2 - (1-1/lambda)^d_i - (1-1/lambda)^d_j ], degrees
            // taken without the toggled edge.
            int present = g.has_edge(i, j) ? 1 : 0;
            int di = g.degree(i) - present, dj = g.degree(j) - present;
            return t.scale * (2.0 - t.weights[di] - t.weights[dj]);
        }
        case TermKind::GWDegree: {
            // (1-e^-alpha)^d_i + (1-e^-alpha)^d_j, degrees without the edge.
            int present = g.has_edge(i, j) ? 1 : 0;
            int di = g.degree(i) - present, dj = g.degree(j) - present;
            return t.weights[di] + t.weights[dj];
        }
        case TermKind::GWESP: {
            bool present = g.has_edge(i, j);
            int cn = g.common_neighbours(i, j);
            // the toggled edge's own shared-partner term
            double delta = t.scale * (1.0 - t.weights[cn]);
            // each common partner k: edges (i,k) and (j,k) gain one shared
            // partner; their sp counts exclude j resp. i when (i,j) is absent.
            double c = 1.0 - t.weights[1];  // e^-alpha
            const std::uint64_t* ri = g.row(i);
            const std::uint64_t* rj = g.row(j);
            for (int w = 0; w < g.row_words(); ++w) {
                std::uint64_t bits = ri[w] & rj[w];
                while (bits) {
                    int k = w * 64 + std::countr_zero(bits);
                    bits &= bits - 1;
                    int sp_ik = g.common_neighbours(i, k) - (present ? 1 : 0);
                    int sp_jk = g.common_neighbours(j, k) - (present ? 1 : 0);
                    delta += t.scale * c * (t.weights[sp_ik] + t.weights[sp_jk]);
                }
            }
            return delta;
        }
        case TermKind::NodeCovSum:
            return (*t.numeric)[i] + (*t.numeric)[j];
        case TermKind::AbsDiff:
            return std::abs((*t.numeric)[i] - (*t.numeric)[j]);
        case TermKind::NodeMatch:
            return t.codes[i] == t.codes[j] ? 1.0 : 0.0;
        case TermKind::EdgeCov:
            return t.covariate->has_edge(i, j) ? 1.0 : 0.0;
        case TermKind::DegreeCovSum:
            return t.covariate->degree(i) + t.covariate->degree(j);
    }
    return 0.0;
}

Eigen::VectorXd StatEngine::stat_vector(const Graph& g) const {
    if (g.n() != n_) throw std::invalid_argument("StatEngine: graph dimension mismatch");
    Eigen::VectorXd out(n_terms());
    for (int k = 0; k < n_terms(); ++k) out[k] = term_stat(terms_[k], g);
    return out;
}

void StatEngine::change_stat(const Graph& g, int i, int j, double* out) const {
    if (i == j) throw std::invalid_argument("change_stat: i == j");
    for (int k = 0; k < n_terms(); ++k) out[k] = term_change(terms_[k], g, i, j);
}

Eigen::VectorXd stat_vector(const ModelSpec& spec, const Graph& g, const NodeData* data) {
    return StatEngine(spec, g.n(), data).stat_vector(g);
}

Eigen::VectorXd change_stat(const ModelSpec& spec, const Graph& g, int i, int j,
                            const NodeData* data) {
    StatEngine engine(spec, g.n(), data);
    Eigen::VectorXd out(engine.n_terms());
    engine.change_stat(g, i, j, out.data());
    return out;
}

double degree_cov_stat(const MissMask& d, const Graph& x) {
    if (d.n() != x.n()) throw std::invalid_argument("degree_cov_stat: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < d.n(); ++i)
        for (int j : d.neighbours(i)) {
            if (j <= i) continue;
            acc += x.degree(i) + x.degree(j);
        }
    return acc;
}

}  // namespace missnet
