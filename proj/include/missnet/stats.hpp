#ifndef MISSNET_STATS_HPP
#define MISSNET_STATS_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "missnet/graph.hpp"

namespace missnet {

enum class TermKind {
    Edges,
    AltKStar,      // Snijders alternating k-star, lambda > 1
    GWDegree,      // geometrically weighted degree, alpha > 0
    GWESP,         // geometrically weighted edgewise shared partners, alpha > 0
    NodeCovSum,    // sum over edges of c_i + c_j
    AbsDiff,       // sum over edges of |c_i - c_j|
    NodeMatch,     // sum over edges of 1{c_i == c_j}
    EdgeCov,       // sum over edges of x_ij (entrainment when evaluated on D with x = X)
    DegreeCovSum,  // sum over edges of deg_x(i) + deg_x(j) (degree covariate)
};

struct Term {
    TermKind kind = TermKind::Edges;
    double decay = 0.0;   // lambda (AltKStar) or alpha (GWDegree/GWESP)
    std::string attr;     // NodeCovSum/AbsDiff/NodeMatch
    std::shared_ptr<const Graph> covariate;  // EdgeCov/DegreeCovSum

    static Term edges() { return make(TermKind::Edges); }
    static Term alt_k_star(double lambda) { return make(TermKind::AltKStar, lambda); }
    static Term gw_degree(double alpha) { return make(TermKind::GWDegree, alpha); }
    static Term gwesp(double alpha) { return make(TermKind::GWESP, alpha); }
    static Term node_cov_sum(std::string a) { return make(TermKind::NodeCovSum, 0.0, std::move(a)); }
    static Term abs_diff(std::string a) { return make(TermKind::AbsDiff, 0.0, std::move(a)); }
    static Term node_match(std::string a) { return make(TermKind::NodeMatch, 0.0, std::move(a)); }
    static Term edge_cov(std::shared_ptr<const Graph> x) {
        return make(TermKind::EdgeCov, 0.0, {}, std::move(x));
    }
    static Term degree_cov_sum(std::shared_ptr<const Graph> x) {
        return make(TermKind::DegreeCovSum, 0.0, {}, std::move(x));
    }

    static Term make(TermKind k, double decay = 0.0, std::string attr = {},
                     std::shared_ptr<const Graph> cov = {}) {
        Term t;
        t.kind = k;
        t.decay = decay;
        t.attr = std::move(attr);
        t.covariate = std::move(cov);
        return t;
    }

    std::string name() const;
};

// Ordered term list with parameters; serves both the data model and the
// missingness model (endogenous, covariate, and network-dependent terms).
struct ModelSpec {
    std::vector<Term> terms;
    Eigen::VectorXd theta;

    ModelSpec() = default;
    ModelSpec(std::vector<Term> t, Eigen::VectorXd th) : terms(std::move(t)), theta(std::move(th)) {}
    explicit ModelSpec(std::vector<Term> t)
        : terms(std::move(t)), theta(Eigen::VectorXd::Zero(static_cast<int>(terms.size()))) {}

    int size() const { return static_cast<int>(terms.size()); }

    // Checks parameter ranges, attribute resolution, and covariate dimensions.
    void validate(int n, const NodeData* data = nullptr) const;

    ModelSpec with_theta(const Eigen::VectorXd& th) const { return ModelSpec(terms, th); }
};

// Evaluator bound to (spec, n, data): resolves covariates once and
// precomputes the geometric weight tables used by change statistics.
class StatEngine {
public:
    StatEngine(const ModelSpec& spec, int n, const NodeData* data = nullptr);

    int n_terms() const { return static_cast<int>(terms_.size()); }
    int n() const { return n_; }

    Eigen::VectorXd stat_vector(const Graph& g) const;

    // z(g with (i,j) set) - z(g with (i,j) unset), independent of the current
    // state of the dyad. out must hold n_terms() doubles.
    void change_stat(const Graph& g, int i, int j, double* out) const;

private:
    struct BoundTerm {
        TermKind kind;
        double decay = 0.0;
        double scale = 0.0;              // e^alpha or lambda^2 prefactor
        std::vector<double> weights;     // (1-c)^k table, k = 0..n
        const std::vector<double>* numeric = nullptr;
        std::vector<int> codes;          // categorical codes for NodeMatch
        std::shared_ptr<const Graph> covariate;
    };

    double term_stat(const BoundTerm& t, const Graph& g) const;
    double term_change(const BoundTerm& t, const Graph& g, int i, int j) const;

    int n_;
    std::vector<BoundTerm> terms_;
};

Eigen::VectorXd stat_vector(const ModelSpec& spec, const Graph& g, const NodeData* data = nullptr);
Eigen::VectorXd change_stat(const ModelSpec& spec, const Graph& g, int i, int j,
                            const NodeData* data = nullptr);

// Degree covariate statistic: sum over missing dyads of deg_x(i) + deg_x(j).
double degree_cov_stat(const MissMask& d, const Graph& x);

}  // namespace missnet

#endif
