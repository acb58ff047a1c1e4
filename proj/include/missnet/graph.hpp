#ifndef MISSNET_GRAPH_HPP
#define MISSNET_GRAPH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace missnet {

// Canonical dyad order: (i<j) row-major, so (0,1),(0,2),...,(0,n-1),(1,2),...
// All dyad-indexed vectors in the project use this order.
inline std::size_t dyad_count(int n) {
    return static_cast<std::size_t>(n) * (n - 1) / 2;
}

inline std::size_t dyad_index(int i, int j, int n) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 + j - i - 1;
}

std::pair<int, int> dyad_from_index(std::size_t idx, int n);

// Undirected binary graph over a fixed vertex set, no self-loops.
// Adjacency kept as per-row bitsets so neighbourhood intersections are
// popcount loops; degrees are cached and maintained on toggle.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);

    int n() const { return n_; }
    std::size_t n_dyads() const { return dyad_count(n_); }
    std::size_t edge_count() const { return edge_count_; }

    bool has_edge(int i, int j) const {
        return (rows_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1u;
    }
    void set_edge(int i, int j, bool present);
    void toggle(int i, int j) { set_edge(i, j, !has_edge(i, j)); }

    int degree(int i) const { return degrees_[i]; }
    const std::vector<int>& degrees() const { return degrees_; }

    // Number of common neighbours of i and j (excludes i and j themselves).
    int common_neighbours(int i, int j) const;

    // Word-level access for intersection loops.
    const std::uint64_t* row(int i) const { return rows_.data() + static_cast<std::size_t>(i) * words_; }
    int row_words() const { return words_; }

    std::vector<int> neighbours(int i) const;

    // Dyad states in canonical order, 0/1.
    std::vector<std::uint8_t> dyad_vector() const;

    bool operator==(const Graph& o) const { return n_ == o.n_ && rows_ == o.rows_; }
    bool operator!=(const Graph& o) const { return !(*this == o); }

    // Packs the dyad states into an integer; only valid for n_dyads() <= 64.
    // Used by the exact-enumeration oracle and desk-scale tests.
    std::uint64_t dyad_code() const;
    static Graph from_dyad_code(int n, std::uint64_t code);

private:
    int n_ = 0;
    int words_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::uint64_t> rows_;
    std::vector<int> degrees_;
};

// The missingness indicator D is graph-shaped: square, symmetric, binary.
using MissMask = Graph;

inline std::size_t missing_count(const MissMask& d) { return d.edge_count(); }
inline double missing_fraction(const MissMask& d) {
    return d.n_dyads() == 0 ? 0.0 : static_cast<double>(d.edge_count()) / d.n_dyads();
}

// Ternary dyad state of a partially observed graph.
enum class DyadState : std::int8_t { Absent = 0, Present = 1, Missing = 2 };

// x* with states {0, 1, NA}: observed value where the mask is 0, NA where 1.
// Decomposes losslessly into (observed Graph, MissMask).
class PartialGraph {
public:
    PartialGraph() = default;
    PartialGraph(Graph observed, MissMask mask);

    int n() const { return observed_.n(); }
    std::size_t n_dyads() const { return observed_.n_dyads(); }

    DyadState state(int i, int j) const {
        if (mask_.has_edge(i, j)) return DyadState::Missing;
        return observed_.has_edge(i, j) ? DyadState::Present : DyadState::Absent;
    }

    const Graph& observed() const { return observed_; }
    const MissMask& mask() const { return mask_; }

    std::size_t n_missing() const { return mask_.edge_count(); }
    std::size_t n_observed() const { return n_dyads() - n_missing(); }
    std::size_t observed_present() const { return observed_.edge_count(); }

    // Dyads with d_ij = 1 in canonical order.
    std::vector<std::pair<int, int>> missing_dyads() const;

private:
    Graph observed_;   // NA dyads held at 0
    MissMask mask_;
};

// Per-node covariates: numeric and categorical columns, each of length n.
class NodeData {
public:
    NodeData() = default;
    explicit NodeData(int n) : n_(n) {}

    int n() const { return n_; }
    bool empty() const { return numeric_.empty() && categorical_.empty(); }

    void set_numeric(const std::string& name, std::vector<double> col);
    void set_categorical(const std::string& name, std::vector<std::string> col);

    bool has_numeric(const std::string& name) const { return numeric_.count(name) > 0; }
    bool has_categorical(const std::string& name) const { return categorical_.count(name) > 0; }

    const std::vector<double>& numeric(const std::string& name) const;
    const std::vector<std::string>& categorical(const std::string& name) const;

    std::vector<std::string> numeric_names() const;
    std::vector<std::string> categorical_names() const;

private:
    int n_ = 0;
    std::map<std::string, std::vector<double>> numeric_;
    std::map<std::string, std::vector<std::string>> categorical_;
};

std::vector<int> degree_sequence(const Graph& g);

// edge_count / N; requires n >= 2.
double density(const Graph& g);

// Freeman degree centralisation: sum_i (max_deg - deg_i) / ((n-1)(n-2)).
// 1 for a star, 0 for any regular graph; requires n >= 3.
double degree_centralisation(const Graph& g);

// x* per the indicator rule: x_ij where d_ij = 0, NA where d_ij = 1.
PartialGraph apply_mask(const Graph& x, const MissMask& d);

// NA -> 0, observed states preserved.
Graph zero_impute(const PartialGraph& p);

}  // namespace missnet

#endif
