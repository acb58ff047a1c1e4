#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "missnet/estimate.hpp"
#include "missnet/missmodels.hpp"

using namespace missnet;

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

Graph random_graph(int n, double p, std::uint64_t seed) {
    Graph g(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) g.set_edge(i, j, true);
    return g;
}

MleConfig quick_mle(std::uint64_t seed, int draws = 1500) {
    MleConfig cfg;
    cfg.sampler.burn_in = 2000;
    cfg.sampler.thin = 0;  // one sweep
    cfg.sampler.n_draws = draws;
    cfg.sampler.seed = seed;
    return cfg;
}

// Exact-likelihood Newton oracle on enumerable graphs: solves
// E_theta[s] = s_target using the exact moments. Independent of the
// Monte Carlo estimation path.
Eigen::VectorXd exact_mle(const ModelSpec& spec, int n, const Eigen::VectorXd& s_target,
                          bool* ok = nullptr) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(spec.size());
    if (ok) *ok = false;
    for (int it = 0; it < 200; ++it) {
        ExactMoments em = enumerate_exact(spec.with_theta(theta), n);
        Eigen::VectorXd grad = s_target - em.mean;
        if (grad.lpNorm<Eigen::Infinity>() < 1e-10) {
            if (ok) *ok = true;
            return theta;
        }
        Eigen::VectorXd step = em.cov.ldlt().solve(grad);
        if (!step.allFinite()) return theta;
        double lim = step.lpNorm<Eigen::Infinity>();
        if (lim > 1.0) step *= 1.0 / lim;
        theta += step;
        if (theta.lpNorm<Eigen::Infinity>() > 12.0) return theta;
    }
    return theta;
}

}  // namespace

TEST_CASE("mple closed form: edges-only equals logit(density)") {
    ModelSpec spec({Term::edges()});
    Graph g = random_graph(9, 1.0 / 3.0, 2);
    // force exactly density 1/3: rebuild with 12 of 36 edges
    Graph h(9);
    int placed = 0;
    for (int i = 0; i < 9 && placed < 12; ++i)
        for (int j = i + 1; j < 9 && placed < 12; ++j) {
            h.set_edge(i, j, true);
            ++placed;
        }
    EstimationResult res = mple(spec, h);
    REQUIRE(res.converged);
    CHECK(res.theta_hat[0] == doctest::Approx(logit(1.0 / 3.0)).epsilon(1e-6));

    for (std::uint64_t s = 0; s < 20; ++s) {
        Graph r = random_graph(10, 0.15 + 0.03 * (s % 10), 50 + s);
        if (r.edge_count() == 0 || r.edge_count() == r.n_dyads()) continue;
        EstimationResult rr = mple(spec, r);
        REQUIRE(rr.converged);
        CHECK(std::abs(rr.theta_hat[0] - logit(density(r))) < 1e-6);
    }
}

TEST_CASE("mple separation on the empty graph is a non-finite-MLE failure") {
    EstimationResult res = mple(ModelSpec({Term::edges()}), Graph(6));
    CHECK_FALSE(res.converged);
    REQUIRE(res.failure.has_value());
    CHECK(*res.failure == FailureKind::NonFiniteMle);
}

TEST_CASE("mple with the graph as its own edge covariate degenerates as collinear") {
    Graph g = random_graph(8, 0.3, 5);
    auto self = std::make_shared<Graph>(g);
    ModelSpec spec({Term::edges(), Term::edge_cov(self)});
    EstimationResult res = mple(spec, g);
    CHECK_FALSE(res.converged);
    REQUIRE(res.failure.has_value());
    CHECK(*res.failure == FailureKind::ExcessiveCorrelation);
}

TEST_CASE("mple with duplicated terms is excessive correlation") {
    Graph g = random_graph(8, 0.3, 6);
    ModelSpec spec({Term::edges(), Term::edges()});
    EstimationResult res = mple(spec, g);
    CHECK_FALSE(res.converged);
    REQUIRE(res.failure.has_value());
    CHECK(*res.failure == FailureKind::ExcessiveCorrelation);
}

TEST_CASE("mple standard errors come from the inverse information") {
    Graph g = random_graph(10, 0.25, 8);
    NodeData data(10);
    std::vector<double> age(10);
    Rng rng(3);
    for (auto& a : age) a = rng.uniform() * 10;
    data.set_numeric("age", age);
    ModelSpec spec({Term::edges(), Term::abs_diff("age")});
    EstimationResult res = mple(spec, g, &data);
    REQUIRE(res.converged);
    Eigen::MatrixXd inv = res.info_matrix.inverse();
    for (int k = 0; k < 2; ++k)
        CHECK(res.se[k] == doctest::Approx(std::sqrt(inv(k, k))).epsilon(1e-6));
}

TEST_CASE("mcmcmle edges-only recovers logit of the density") {
    Graph g(10);
    int placed = 0;  // exactly 9 of 45 edges: density 0.2
    for (int i = 0; i < 10 && placed < 9; ++i)
        for (int j = i + 1; j < 10 && placed < 9; ++j) {
            g.set_edge(i, j, true);
            ++placed;
        }
    EstimationResult res = mcmcmle(ModelSpec({Term::edges()}), g, quick_mle(11, 2500));
    REQUIRE(res.converged);
    CHECK(std::abs(res.theta_hat[0] - logit(0.2)) < 0.05);
}

TEST_CASE("mcmcmle matches the exact-likelihood Newton solution on n=4") {
    auto cov = std::make_shared<Graph>(random_graph(4, 0.5, 77));
    std::vector<ModelSpec> specs;
    specs.push_back(ModelSpec({Term::edges(), Term::edge_cov(cov)}));
    specs.push_back(ModelSpec({Term::edges(), Term::gwesp(std::log(2.0))}));

    int tested = 0;
    for (std::uint64_t s = 0; tested < 3 && s < 40; ++s) {
        Graph g = random_graph(4, 0.5, 300 + s);
        if (g.edge_count() < 2 || g.edge_count() > 4) continue;
        const ModelSpec& spec = specs[tested % specs.size()];
        Eigen::VectorXd s_obs = stat_vector(spec, g);
        bool ok = false;
        Eigen::VectorXd exact = exact_mle(spec, 4, s_obs, &ok);
        if (!ok || exact.lpNorm<Eigen::Infinity>() > 6.0) continue;

        MleConfig cfg = quick_mle(900 + s, 4000);
        cfg.sampler.burn_in = 3000;
        cfg.t_tol = 0.05;
        EstimationResult res = mcmcmle(spec, g, cfg);
        REQUIRE(res.converged);
        CHECK((res.theta_hat - exact).lpNorm<Eigen::Infinity>() < 0.05);
        ++tested;
    }
    CHECK(tested == 3);
}

TEST_CASE("mcmcmle is deterministic given the seed") {
    Graph g = random_graph(8, 0.3, 21);
    ModelSpec spec({Term::edges(), Term::gwesp(std::log(2.0))});
    EstimationResult a = mcmcmle(spec, g, quick_mle(5, 800));
    EstimationResult b = mcmcmle(spec, g, quick_mle(5, 800));
    CHECK(a.theta_hat == b.theta_hat);
    CHECK(a.se == b.se);
    CHECK(a.n_iterations == b.n_iterations);
}

TEST_CASE("mcmcmle_mar with an empty mask reproduces mcmcmle") {
    // ring plus chords: triangles present, statistics interior
    Graph g(9);
    for (int i = 0; i < 9; ++i) g.set_edge(i, (i + 1) % 9, true);
    for (int i = 0; i < 9; i += 3) g.set_edge(i, (i + 2) % 9, true);
    ModelSpec spec({Term::edges(), Term::gwesp(std::log(2.0))});
    PartialGraph p = apply_mask(g, MissMask(9));

    EstimationResult complete = mcmcmle(spec, g, quick_mle(41, 2000));
    EstimationResult mar = mcmcmle_mar(spec, p, quick_mle(42, 2000));
    REQUIRE(complete.converged);
    REQUIRE(mar.converged);
    // combined MC tolerance from the two independent fits
    for (int k = 0; k < 2; ++k) {
        double tol = 2.0 * std::sqrt(complete.se[k] * complete.se[k] / complete.diagnostics.min_ess +
                                     mar.se[k] * mar.se[k] / mar.diagnostics.min_ess) +
                     0.12;
        CHECK(std::abs(complete.theta_hat[k] - mar.theta_hat[k]) < tol);
    }
}

TEST_CASE("mcmcmle_mar edges-only equals logit(observed edges / observed dyads)") {
    Graph g = random_graph(10, 0.35, 55);
    REQUIRE(g.edge_count() > 3);
    MissMask d(10);
    Rng rng(66);
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j)
            if (rng.bernoulli(0.3)) d.set_edge(i, j, true);
    PartialGraph p = apply_mask(g, d);
    REQUIRE(p.n_missing() > 0);
    REQUIRE(p.observed_present() > 0);

    double target = logit(static_cast<double>(p.observed_present()) / p.n_observed());
    EstimationResult res = mcmcmle_mar(ModelSpec({Term::edges()}), p, quick_mle(67, 2500));
    REQUIRE(res.converged);
    CHECK(std::abs(res.theta_hat[0] - target) < 0.08);
}

TEST_CASE("mcmcmle_mar point estimate depends on the mask only through its size (edges-only)") {
    Graph g(10);
    // regular-ish graph: ring plus chords so masks of equal size hide equal structure
    for (int i = 0; i < 10; ++i) g.set_edge(i, (i + 1) % 10, true);
    for (int i = 0; i < 10; i += 2) g.set_edge(i, (i + 3) % 10, true);

    // two different masks of the same size hiding the same number of ties
    MissMask d1(10), d2(10);
    d1.set_edge(0, 1, true);  // tie
    d1.set_edge(2, 7, true);  // non-tie
    d2.set_edge(4, 5, true);  // tie
    d2.set_edge(1, 6, true);  // non-tie
    EstimationResult r1 = mcmcmle_mar(ModelSpec({Term::edges()}), apply_mask(g, d1), quick_mle(71, 2000));
    EstimationResult r2 = mcmcmle_mar(ModelSpec({Term::edges()}), apply_mask(g, d2), quick_mle(71, 2000));
    REQUIRE(r1.converged);
    REQUIRE(r2.converged);
    CHECK(std::abs(r1.theta_hat[0] - r2.theta_hat[0]) < 0.1);
}

TEST_CASE("mcmcmle_mar with everything missing fails flat") {
    Graph g = random_graph(6, 0.4, 91);
    MissMask all(6);
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) all.set_edge(i, j, true);
    PartialGraph p = apply_mask(g, all);
    MleConfig cfg = quick_mle(92, 600);
    cfg.max_outer = 8;
    EstimationResult res = mcmcmle_mar(ModelSpec({Term::edges()}), p, cfg);
    CHECK_FALSE(res.converged);
    REQUIRE(res.failure.has_value());
    CHECK(*res.failure == FailureKind::NonPositiveDefiniteInfo);
}

TEST_CASE("classify_failure precedence and triggers") {
    Diagnostics d;
    d.moment_converged = true;
    d.min_ess = 500;
    d.ess_target = 200;
    d.cov_condition = 10.0;
    d.min_info_diag = 0.5;
    d.min_info_eig = 0.2;
    CHECK_FALSE(classify_failure(d).has_value());

    SUBCASE("(c) negative info diagonal") {
        d.min_info_diag = -0.3;
        REQUIRE(classify_failure(d).has_value());
        CHECK(*classify_failure(d) == FailureKind::NonPositiveDefiniteInfo);
    }
    SUBCASE("(b) huge condition number") {
        d.cov_condition = 1e10;
        REQUIRE(classify_failure(d).has_value());
        CHECK(*classify_failure(d) == FailureKind::ExcessiveCorrelation);
    }
    SUBCASE("(a) ess below target") {
        d.min_ess = 40;
        REQUIRE(classify_failure(d).has_value());
        CHECK(*classify_failure(d) == FailureKind::EssNotReached);
    }
    SUBCASE("precedence (c) over (b) over (a)") {
        d.min_info_diag = -1.0;
        d.cov_condition = 1e10;
        d.min_ess = 40;
        CHECK(*classify_failure(d) == FailureKind::NonPositiveDefiniteInfo);
        d.min_info_diag = 0.5;
        CHECK(*classify_failure(d) == FailureKind::ExcessiveCorrelation);
        d.cov_condition = 10.0;
        CHECK(*classify_failure(d) == FailureKind::EssNotReached);
    }
    SUBCASE("non-convergence alone maps to (a)") {
        d.moment_converged = false;
        CHECK(*classify_failure(d) == FailureKind::EssNotReached);
    }
}

TEST_CASE("mcmcmle calibration: true zero parameters are covered by 3 SE") {
    ModelSpec spec({Term::edges()});
    int covered = 0, total = 0;
    for (int rep = 0; rep < 60; ++rep) {
        Graph g(8);
        Rng rng(derive_seed(1234, rep));
        for (int i = 0; i < 8; ++i)
            for (int j = i + 1; j < 8; ++j)
                if (rng.bernoulli(0.5)) g.set_edge(i, j, true);
        if (g.edge_count() == 0 || g.edge_count() == g.n_dyads()) continue;
        EstimationResult res = mcmcmle(spec, g, quick_mle(derive_seed(5678, rep), 600));
        if (!res.converged) continue;
        ++total;
        if (std::abs(res.theta_hat[0]) <= 3.0 * res.se[0]) ++covered;
    }
    REQUIRE(total >= 55);
    CHECK(static_cast<double>(covered) / total >= 0.95);
}
