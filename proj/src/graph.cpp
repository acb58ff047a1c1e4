#include "missnet/graph.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace missnet {

std::pair<int, int> dyad_from_index(std::size_t idx, int n) {
    // Row-major over rows i = 0..n-2 with (n-1-i) entries each.
    std::size_t offset = 0;
    for (int i = 0; i + 1 < n; ++i) {
        std::size_t row_len = static_cast<std::size_t>(n - 1 - i);
        if (idx < offset + row_len) return {i, static_cast<int>(idx - offset) + i + 1};
        offset += row_len;
    }
    throw std::out_of_range("dyad_from_index: index out of range");
}

Graph::Graph(int n) : n_(n), words_((n + 63) / 64) {
    if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
    rows_.assign(static_cast<std::size_t>(n_) * words_, 0);
    degrees_.assign(n_, 0);
}

void Graph::set_edge(int i, int j, bool present) {
    if (i == j) throw std::invalid_argument("Graph: no self-loops");
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("Graph: vertex out of range");
    bool cur = has_edge(i, j);
    if (cur == present) return;
    std::uint64_t bi = std::uint64_t{1} << (j & 63);
    std::uint64_t bj = std::uint64_t{1} << (i & 63);
    rows_[static_cast<std::size_t>(i) * words_ + (j >> 6)] ^= bi;
    rows_[static_cast<std::size_t>(j) * words_ + (i >> 6)] ^= bj;
    int delta = present ? 1 : -1;
    degrees_[i] += delta;
    degrees_[j] += delta;
    edge_count_ += delta;
}

int Graph::common_neighbours(int i, int j) const {
    // Rows carry no self bits, so neither i nor j can appear in the intersection.
    const std::uint64_t* ri = row(i);
    const std::uint64_t* rj = row(j);
    int c = 0;
    for (int w = 0; w < words_; ++w) c += std::popcount(ri[w] & rj[w]);
    return c;
}

std::vector<int> Graph::neighbours(int i) const {
    std::vector<int> out;
    out.reserve(degrees_[i]);
    const std::uint64_t* ri = row(i);
    for (int w = 0; w < words_; ++w) {
        std::uint64_t bits = ri[w];
        while (bits) {
            int b = std::countr_zero(bits);
            out.push_back(w * 64 + b);
            bits &= bits - 1;
        }
    }
    return out;
}

std::vector<std::uint8_t> Graph::dyad_vector() const {
    std::vector<std::uint8_t> out(n_dyads());
    std::size_t k = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) out[k++] = has_edge(i, j) ? 1 : 0;
    return out;
}

std::uint64_t Graph::dyad_code() const {
    if (n_dyads() > 64) throw std::invalid_argument("dyad_code: more than 64 dyads");
    std::uint64_t code = 0;
    std::size_t k = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j, ++k)
            if (has_edge(i, j)) code |= std::uint64_t{1} << k;
    return code;
}

Graph Graph::from_dyad_code(int n, std::uint64_t code) {
    Graph g(n);
    if (g.n_dyads() > 64) throw std::invalid_argument("from_dyad_code: more than 64 dyads");
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k)
            if ((code >> k) & 1u) g.set_edge(i, j, true);
    return g;
}

PartialGraph::PartialGraph(Graph observed, MissMask mask)
    : observed_(std::move(observed)), mask_(std::move(mask)) {
    if (observed_.n() != mask_.n())
        throw std::invalid_argument("PartialGraph: graph/mask dimension mismatch");
    // Keep the decomposition canonical: masked dyads carry no observed value.
    for (int i = 0; i < observed_.n(); ++i)
        for (int j = i + 1; j < observed_.n(); ++j)
            if (mask_.has_edge(i, j) && observed_.has_edge(i, j)) observed_.set_edge(i, j, false);
}

std::vector<std::pair<int, int>> PartialGraph::missing_dyads() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(mask_.edge_count());
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j)
            if (mask_.has_edge(i, j)) out.emplace_back(i, j);
    return out;
}

void NodeData::set_numeric(const std::string& name, std::vector<double> col) {
    if (static_cast<int>(col.size()) != n_)
        throw std::invalid_argument("NodeData: column '" + name + "' has wrong length");
    for (double v : col)
        if (!std::isfinite(v))
            throw std::invalid_argument("NodeData: non-finite value in column '" + name + "'");
    numeric_[name] = std::move(col);
}

void NodeData::set_categorical(const std::string& name, std::vector<std::string> col) {
    if (static_cast<int>(col.size()) != n_)
        throw std::invalid_argument("NodeData: column '" + name + "' has wrong length");
    categorical_[name] = std::move(col);
}

const std::vector<double>& NodeData::numeric(const std::string& name) const {
    auto it = numeric_.find(name);
    if (it == numeric_.end()) throw std::invalid_argument("NodeData: no numeric column '" + name + "'");
    return it->second;
}

const std::vector<std::string>& NodeData::categorical(const std::string& name) const {
    auto it = categorical_.find(name);
    if (it == categorical_.end())
        throw std::invalid_argument("NodeData: no categorical column '" + name + "'");
    return it->second;
}

std::vector<std::string> NodeData::numeric_names() const {
    std::vector<std::string> out;
    for (const auto& kv : numeric_) out.push_back(kv.first);
    return out;
}

std::vector<std::string> NodeData::categorical_names() const {
    std::vector<std::string> out;
    for (const auto& kv : categorical_) out.push_back(kv.first);
    return out;
}

std::vector<int> degree_sequence(const Graph& g) { return g.degrees(); }

double density(const Graph& g) {
    if (g.n() < 2) throw std::invalid_argument("density: need at least 2 vertices");
    return static_cast<double>(g.edge_count()) / g.n_dyads();
}

double degree_centralisation(const Graph& g) {
    if (g.n() < 3) throw std::invalid_argument("degree_centralisation: need at least 3 vertices");
    int max_deg = 0;
    for (int i = 0; i < g.n(); ++i) max_deg = std::max(max_deg, g.degree(i));
    long long sum = 0;
    for (int i = 0; i < g.n(); ++i) sum += max_deg - g.degree(i);
    double denom = static_cast<double>(g.n() - 1) * (g.n() - 2);
    return static_cast<double>(sum) / denom;
}

PartialGraph apply_mask(const Graph& x, const MissMask& d) {
    if (x.n() != d.n()) throw std::invalid_argument("apply_mask: dimension mismatch");
    Graph observed(x.n());
    for (int i = 0; i < x.n(); ++i)
        for (int j = i + 1; j < x.n(); ++j)
            if (!d.has_edge(i, j) && x.has_edge(i, j)) observed.set_edge(i, j, true);
    return PartialGraph(std::move(observed), d);
}

Graph zero_impute(const PartialGraph& p) { return p.observed(); }

}  // namespace missnet
