#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "missnet/io.hpp"
#include "missnet/marlab.hpp"

namespace missnet {

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--seed", opts.seed, "override the config base seed");
    cmd->add_option("--threads", opts.threads, "override the worker-pool width");
    cmd->add_option("--out", opts.out, "override the output directory");
}

Config effective_config(const CommonOpts& opts) {
    Config cfg = load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.threads) cfg.threads = *opts.threads;
    if (opts.out) cfg.out_dir = *opts.out;
    return cfg;
}

std::string out_path(const Config& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::vector<std::string> term_names(const ModelSpec& spec) {
    std::vector<std::string> names;
    for (const Term& t : spec.terms) names.push_back(t.name());
    return names;
}

void print_estimate(const ModelSpec& spec, const EstimationResult& res) {
    std::printf("converged=%s failure=%s iterations=%d\n", res.converged ? "yes" : "no",
                res.failure ? to_string(*res.failure).c_str() : "none", res.n_iterations);
    for (int k = 0; k < spec.size(); ++k)
        std::printf("  %-22s % .4f  (se %.4f)\n", spec.terms[k].name().c_str(), res.theta_hat[k],
                    res.se[k]);
}

int cmd_fit(const CommonOpts& opts) {
    Config cfg = effective_config(opts);
    LoadedNetwork net = resolve_network(cfg);
    ModelSpec spec = estimation_spec(cfg, net.graph.n(), &net.data);
    MleConfig mle = cfg.mle;
    mle.sampler.seed = derive_seed(cfg.seed, 0xF17);

    EstimationResult baseline = run_baseline(spec, net.graph, mle, &net.data);
    print_estimate(spec, baseline);
    write_baseline_csv(out_path(cfg, "baseline.csv"), baseline, term_names(spec),
                       cfg.config_hash, cfg.seed);
    save_network(net.graph, net.labels, out_path(cfg, "network.csv"));
    save_labels(net.labels, out_path(cfg, "labels.csv"));
    std::printf("wrote %s\n", out_path(cfg, "baseline.csv").c_str());
    return 0;
}

int cmd_degrade(const CommonOpts& opts) {
    Config cfg = effective_config(opts);
    LoadedNetwork net = resolve_network(cfg);
    auto models = resolve_models(cfg, net);

    save_labels(net.labels, out_path(cfg, "labels.csv"));
    std::size_t written = 1;
    std::size_t t = 0;
    for (const auto& nm : models)
        for (double f : cfg.fractions)
            for (int r = 0; r < cfg.replicates; ++r, ++t) {
                std::uint64_t rec_seed = derive_seed(cfg.seed, t);
                MissMask mask = draw_mask(nm.model, net.graph.n(), f, derive_seed(rec_seed, 1),
                                          cfg.mask_sampler, &net.data);
                PartialGraph p = apply_mask(net.graph, mask);
                char frac[16];
                std::snprintf(frac, sizeof(frac), "%02d", static_cast<int>(std::lround(f * 100)));
                std::string stem = nm.name + "_f" + frac + "_r" + std::to_string(r);
                save_mask(mask, net.labels, out_path(cfg, "mask_" + stem + ".csv"));
                save_partial(p, net.labels, out_path(cfg, "partial_" + stem + ".csv"));
                written += 2;
            }
    std::printf("wrote %zu files under %s\n", written, cfg.out_dir.c_str());
    return 0;
}

int cmd_experiment(const CommonOpts& opts) {
    Config cfg = effective_config(opts);
    LoadedNetwork net = resolve_network(cfg);
    ModelSpec spec = estimation_spec(cfg, net.graph.n(), &net.data);

    ExperimentPlan plan;
    plan.network_id = cfg.network_id;
    plan.spec = spec;
    plan.models = resolve_models(cfg, net);
    plan.fractions = cfg.fractions;
    plan.representations = cfg.representations;
    plan.replicates = cfg.replicates;
    plan.base_seed = cfg.seed;
    plan.mle = cfg.mle;
    plan.mask_sampler = cfg.mask_sampler;

    MleConfig base_mle = cfg.mle;
    base_mle.sampler.seed = derive_seed(cfg.seed, 0xF17);
    EstimationResult baseline = run_baseline(spec, net.graph, base_mle, &net.data);
    std::printf("baseline:\n");
    print_estimate(spec, baseline);

    auto records = run_replicates(plan, net.graph, &net.data, cfg.threads);
    write_records_csv(out_path(cfg, "records.csv"), records, term_names(spec), cfg.config_hash,
                      cfg.seed);
    write_baseline_csv(out_path(cfg, "baseline.csv"), baseline, term_names(spec), cfg.config_hash,
                       cfg.seed);
    auto rates = failure_rate(records, {"model", "fraction", "representation"});
    write_failure_rates_csv(out_path(cfg, "failure_rates.csv"), rates, cfg.config_hash, cfg.seed);

    int failed = 0;
    for (const auto& rec : records)
        if (!rec.estimate.converged) ++failed;
    std::printf("%zu records (%d estimation failures) -> %s\n", records.size(), failed,
                out_path(cfg, "records.csv").c_str());
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& param_flag,
              const std::vector<double>& levels_flag) {
    Config cfg = effective_config(opts);
    LoadedNetwork net = resolve_network(cfg);
    ModelSpec spec = estimation_spec(cfg, net.graph.n(), &net.data);

    SweepPlan plan;
    plan.parameter = cfg.sweep_parameter;
    plan.levels = cfg.sweep_levels;
    plan.fraction = cfg.sweep_fraction;
    plan.replicates = cfg.sweep_replicates;
    plan.base_seed = cfg.seed;
    plan.mle = cfg.mle;
    plan.mask_sampler = cfg.mask_sampler;
    if (!param_flag.empty()) {
        if (param_flag == "theta1" || param_flag == "theta1_entrainment")
            plan.parameter = SweepParameter::Entrainment;
        else if (param_flag == "theta2" || param_flag == "theta2_degreecov")
            plan.parameter = SweepParameter::DegreeCov;
        else
            throw ConfigError("unknown --param '" + param_flag + "'");
    }
    if (!levels_flag.empty()) plan.levels = levels_flag;

    SweepResult sweep = mnar_sweep(plan, net.graph, spec, &net.data, cfg.threads);
    std::string csv = out_path(cfg, "sweep_" + to_string(plan.parameter) + ".csv");
    write_sweep_csv(csv, sweep, cfg.config_hash, cfg.seed);
    auto plots = write_sweep_plots(out_path(cfg, ""), sweep, cfg.config_hash, cfg.seed);
    std::printf("sweep %s over %zu levels, R=%d -> %s (+%zu plots)\n",
                to_string(plan.parameter).c_str(), plan.levels.size(), plan.replicates,
                csv.c_str(), plots.size());
    for (const auto& lv : sweep.levels)
        std::printf("  level % .2f: converged %d/%d\n", lv.level, lv.n_converged,
                    lv.n_converged + lv.n_failed);
    return 0;
}

void print_mechanism(const PairMechanism& mech) {
    std::printf("  cell (x_ij,x_ik) |   g00     g01     g10     g11\n");
    for (int x_ij = 0; x_ij < 2; ++x_ij)
        for (int x_ik = 0; x_ik < 2; ++x_ik)
            std::printf("        (%d,%d)     | %.4f  %.4f  %.4f  %.4f\n", x_ij, x_ik,
                        mech.prob(x_ij, x_ik, 0, 0), mech.prob(x_ij, x_ik, 0, 1),
                        mech.prob(x_ij, x_ik, 1, 0), mech.prob(x_ij, x_ik, 1, 1));
    PairMarginals marg = marginals(mech);
    std::printf("  marginals g1+ = [%.4f %.4f %.4f %.4f], g+1 = [%.4f %.4f %.4f %.4f]\n",
                marg.g1plus[0], marg.g1plus[1], marg.g1plus[2], marg.g1plus[3], marg.gplus1[0],
                marg.gplus1[1], marg.gplus1[2], marg.gplus1[3]);
    std::printf("  classification: %s\n", to_string(check_mar(mech)).c_str());
}

int cmd_marlab(const std::vector<double>& g10, const std::vector<double>& g01, double g11,
               const std::vector<double>& g1plus, const std::vector<double>& gplus1) {
    if (g10.size() != 2 || g01.size() != 2)
        throw ConfigError("--g10 and --g01 each need two values (for x = 0 and x = 1)");
    if (g1plus.size() != 2 || gplus1.size() != 2)
        throw ConfigError("--g1plus and --gplus1 each need two values");

    std::printf("MAR pair construction: g10(x_ik) = [%.3f %.3f], g01(x_ij) = [%.3f %.3f], "
                "g11 = %.3f\n",
                g10[0], g10[1], g01[0], g01[1], g11);
    PairMechanism mar = build_mar_pair({g10[0], g10[1]}, {g01[0], g01[1]}, g11);
    print_mechanism(mar);

    std::printf("\nindependent per-variable construction: g1+(x_ij) = [%.3f %.3f], "
                "g+1(x_ik) = [%.3f %.3f]\n",
                g1plus[0], g1plus[1], gplus1[0], gplus1[1]);
    PairMechanism ind = build_independent_pair({g1plus[0], g1plus[1]}, {gplus1[0], gplus1[1]});
    print_mechanism(ind);
    return 0;
}

int cmd_enumerate(const CommonOpts& opts, int n, const std::vector<double>& theta) {
    ModelSpec spec({Term::edges()});
    if (!opts.config_path.empty()) {
        Config cfg = load_config(opts.config_path);
        spec = ModelSpec(cfg.terms);
    }
    if (!theta.empty()) {
        if (static_cast<int>(theta.size()) != spec.size())
            throw ConfigError("--theta needs one value per estimation term");
        for (int k = 0; k < spec.size(); ++k) spec.theta[k] = theta[k];
    }
    ExactMoments em;
    try {
        em = enumerate_exact(spec, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::printf("n=%d  2^%zu graphs  log_kappa=%.10g\n", n, dyad_count(n),
                em.log_kappa);
    for (int k = 0; k < spec.size(); ++k)
        std::printf("  E[%-20s] = %.10g\n", spec.terms[k].name().c_str(), em.mean[k]);
    std::printf("covariance:\n");
    for (int i = 0; i < spec.size(); ++i) {
        std::printf("  ");
        for (int j = 0; j < spec.size(); ++j) std::printf("% .10g ", em.cov(i, j));
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"missingness-model simulation and inference engine for undirected binary networks"};
    app.require_subcommand(1);

    CommonOpts fit_opts, degrade_opts, exp_opts, sweep_opts, enum_opts;

    CLI::App* fit = app.add_subcommand("fit", "estimate the baseline model on complete data");
    add_common(fit, fit_opts);

    CLI::App* degrade = app.add_subcommand("degrade", "draw masks and write degraded networks");
    add_common(degrade, degrade_opts);

    CLI::App* experiment =
        app.add_subcommand("experiment", "run the degrade -> re-estimate replicate pipeline");
    add_common(experiment, exp_opts);

    CLI::App* sweep = app.add_subcommand("sweep", "sweep a network-dependent missingness parameter");
    add_common(sweep, sweep_opts);
    std::string sweep_param;
    std::vector<double> sweep_levels;
    sweep->add_option("--param", sweep_param, "theta1_entrainment | theta2_degreecov");
    sweep->add_option("--levels", sweep_levels, "sweep levels")->delimiter(',');

    CLI::App* marlab = app.add_subcommand("marlab", "print pair-mechanism tables and classes");
    std::vector<double> g10{0.1, 0.3}, g01{0.1, 0.1}, g1plus{0.1, 0.45}, gplus1{0.2, 0.3};
    double g11 = 0.05;
    marlab->add_option("--g10", g10, "g10 for x_ik = 0,1")->delimiter(',')->expected(2);
    marlab->add_option("--g01", g01, "g01 for x_ij = 0,1")->delimiter(',')->expected(2);
    marlab->add_option("--g11", g11, "constant g11");
    marlab->add_option("--g1plus", g1plus, "g1+ for x_ij = 0,1")->delimiter(',')->expected(2);
    marlab->add_option("--gplus1", gplus1, "g+1 for x_ik = 0,1")->delimiter(',')->expected(2);

    CLI::App* enumerate = app.add_subcommand("enumerate", "exact moments by full summation (n <= 5)");
    int enum_n = 4;
    std::vector<double> enum_theta;
    enumerate->add_option("--n", enum_n, "vertex count")->required();
    enumerate->add_option("--theta", enum_theta, "parameter vector")->delimiter(',');
    add_common(enumerate, enum_opts, /*config_required=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_opts);
        if (degrade->parsed()) return cmd_degrade(degrade_opts);
        if (experiment->parsed()) return cmd_experiment(exp_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_param, sweep_levels);
        if (marlab->parsed()) return cmd_marlab(g10, g01, g11, g1plus, gplus1);
        if (enumerate->parsed()) return cmd_enumerate(enum_opts, enum_n, enum_theta);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

}  // namespace missnet
