#include <doctest.h>

#include <stdexcept>

#include "missnet/graph.hpp"
#include "missnet/rng.hpp"

using namespace missnet;

namespace {

Graph path_graph(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.set_edge(i, i + 1, true);
    return g;
}

Graph complete_graph(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.set_edge(i, j, true);
    return g;
}

Graph star_graph(int n) {
    Graph g(n);
    for (int i = 1; i < n; ++i) g.set_edge(0, i, true);
    return g;
}

Graph random_graph(int n, double p, std::uint64_t seed) {
    Graph g(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) g.set_edge(i, j, true);
    return g;
}

}  // namespace

TEST_CASE("dyad indexing is canonical row-major and round-trips") {
    int n = 7;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) {
            CHECK(dyad_index(i, j, n) == k);
            CHECK(dyad_index(j, i, n) == k);
            auto [a, b] = dyad_from_index(k, n);
            CHECK(a == i);
            CHECK(b == j);
        }
    CHECK(k == dyad_count(n));
}

TEST_CASE("graph is symmetric with no self-loops") {
    Graph g(5);
    g.set_edge(1, 3, true);
    CHECK(g.has_edge(3, 1));
    CHECK(g.edge_count() == 1);
    g.set_edge(3, 1, false);
    CHECK(g.edge_count() == 0);
    CHECK_THROWS_AS(g.set_edge(2, 2, true), std::invalid_argument);
}

TEST_CASE("degree_sequence") {
    CHECK(degree_sequence(Graph(4)) == std::vector<int>{0, 0, 0, 0});
    CHECK(degree_sequence(complete_graph(4)) == std::vector<int>{3, 3, 3, 3});
    CHECK(degree_sequence(path_graph(3)) == std::vector<int>{1, 2, 1});
}

TEST_CASE("density") {
    CHECK(density(complete_graph(5)) == doctest::Approx(1.0));
    CHECK(density(Graph(5)) == doctest::Approx(0.0));
    Graph g(4);
    g.set_edge(0, 1, true);
    g.set_edge(1, 2, true);
    g.set_edge(2, 3, true);
    CHECK(density(g) == doctest::Approx(0.5));
    CHECK_THROWS_AS(density(Graph(1)), std::invalid_argument);
}

TEST_CASE("degree centralisation: star 1, complete 0, path 1/3") {
    CHECK(degree_centralisation(star_graph(5)) == doctest::Approx(1.0));
    CHECK(degree_centralisation(complete_graph(5)) == doctest::Approx(0.0));
    CHECK(degree_centralisation(path_graph(4)) == doctest::Approx(2.0 / 6.0));
    CHECK_THROWS_AS(degree_centralisation(Graph(2)), std::invalid_argument);
}

TEST_CASE("degree centralisation stays in [0,1] on random graphs") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Graph g = random_graph(8, 0.1 + 0.08 * (s % 10), s);
        double c = degree_centralisation(g);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
}

TEST_CASE("apply_mask realises the indicator rule") {
    Graph x(3);
    x.set_edge(0, 1, true);
    MissMask d(3);
    d.set_edge(0, 1, true);  // observed tie hidden
    PartialGraph p = apply_mask(x, d);
    CHECK(p.state(0, 1) == DyadState::Missing);
    CHECK(p.state(0, 2) == DyadState::Absent);
    CHECK(p.n_missing() == 1);

    SUBCASE("all-zero mask is the identity embedding") {
        PartialGraph q = apply_mask(x, MissMask(3));
        CHECK(q.n_missing() == 0);
        CHECK(zero_impute(q) == x);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(apply_mask(x, MissMask(4)), std::invalid_argument);
    }
}

TEST_CASE("zero_impute") {
    Graph x(3);
    x.set_edge(0, 1, true);
    x.set_edge(0, 2, true);
    MissMask d(3);
    d.set_edge(0, 2, true);
    Graph z = zero_impute(apply_mask(x, d));
    CHECK(z.has_edge(0, 1));
    CHECK_FALSE(z.has_edge(0, 2));
    CHECK(z.edge_count() == 1);

    SUBCASE("all NA gives the empty graph") {
        MissMask all(3);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) all.set_edge(i, j, true);
        CHECK(zero_impute(apply_mask(x, all)).edge_count() == 0);
    }
}

TEST_CASE("mask/impute composition equals x_ij * (1 - d_ij) dyadwise") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Graph x = random_graph(6, 0.4, 100 + s);
        MissMask d = random_graph(6, 0.3, 200 + s);
        Graph z = zero_impute(apply_mask(x, d));
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                CHECK(static_cast<int>(z.has_edge(i, j)) ==
                      static_cast<int>(x.has_edge(i, j)) * (1 - static_cast<int>(d.has_edge(i, j))));
        CHECK(apply_mask(x, d).n_observed() + missing_count(d) == dyad_count(6));
    }
}

TEST_CASE("partial graph bookkeeping: observed + missing = N") {
    Graph x = random_graph(9, 0.35, 7);
    MissMask d = random_graph(9, 0.25, 8);
    PartialGraph p = apply_mask(x, d);
    CHECK(p.n_observed() + p.n_missing() == dyad_count(9));
    CHECK(p.missing_dyads().size() == p.n_missing());
}

TEST_CASE("dyad_code round-trips at desk scale") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        Graph g = random_graph(5, 0.5, 300 + s);
        CHECK(Graph::from_dyad_code(5, g.dyad_code()) == g);
    }
}

TEST_CASE("node data validation") {
    NodeData data(3);
    data.set_numeric("age", {1.0, 2.0, 3.0});
    CHECK(data.numeric("age")[2] == 3.0);
    CHECK_THROWS_AS(data.set_numeric("bad", {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(data.set_numeric("nan", {1.0, std::nan(""), 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(data.numeric("missing"), std::invalid_argument);
}
