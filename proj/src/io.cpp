#include "missnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace missnet {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::string provenance(std::uint64_t config_hash, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash));
    return std::string("# missnet config=") + buf + " seed=" + std::to_string(seed);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

LoadedNetwork load_network(const std::string& edge_path, const std::string& attr_path) {
    std::ifstream in(edge_path);
    if (!in) throw ParseError(edge_path, 0, "cannot open file");

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError(edge_path, 1, "empty file");
    ++lineno;
    {
        auto header = split_csv_row(line);
        if (header.size() != 2 || header[0] != "source" || header[1] != "target")
            throw ParseError(edge_path, 1, "expected header 'source,target'");
    }

    std::vector<std::pair<std::string, std::string>> edge_rows;
    std::set<std::string> label_set;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_csv_row(line);
        if (cells.size() != 2) throw ParseError(edge_path, lineno, "expected 2 fields");
        if (cells[0].empty() || cells[1].empty())
            throw ParseError(edge_path, lineno, "empty node label");
        if (cells[0] == cells[1])
            throw ParseError(edge_path, lineno, "self-loop on node '" + cells[0] + "'");
        edge_rows.emplace_back(cells[0], cells[1]);
        label_set.insert(cells[0]);
        label_set.insert(cells[1]);
    }

    // Attribute file first pass: labels (attr-only rows become isolates).
    std::vector<std::vector<std::string>> attr_rows;
    std::vector<std::string> attr_header;
    if (!attr_path.empty()) {
        std::ifstream ain(attr_path);
        if (!ain) throw ParseError(attr_path, 0, "cannot open file");
        int alineno = 0;
        if (!std::getline(ain, line)) throw ParseError(attr_path, 1, "empty file");
        ++alineno;
        attr_header = split_csv_row(line);
        if (attr_header.size() < 2 || attr_header[0] != "node")
            throw ParseError(attr_path, 1, "expected header 'node,<col>,...'");
        std::set<std::string> seen;
        while (std::getline(ain, line)) {
            ++alineno;
            if (trim(line).empty()) continue;
            auto cells = split_csv_row(line);
            if (cells.size() != attr_header.size())
                throw ParseError(attr_path, alineno, "ragged row: expected " +
                                                         std::to_string(attr_header.size()) +
                                                         " fields");
            if (cells[0].empty()) throw ParseError(attr_path, alineno, "empty node label");
            if (!seen.insert(cells[0]).second)
                throw ParseError(attr_path, alineno, "duplicate row for node '" + cells[0] + "'");
            for (std::size_t c = 1; c < cells.size(); ++c)
                if (cells[c].empty())
                    throw ParseError(attr_path, alineno,
                                     "missing value in column '" + attr_header[c] + "'");
            attr_rows.push_back(cells);
            label_set.insert(cells[0]);
        }
        // every edge-file node needs a row
        for (const auto& label : label_set) {
            bool in_attr = false;
            for (const auto& row : attr_rows)
                if (row[0] == label) {
                    in_attr = true;
                    break;
                }
            if (!in_attr) throw ParseError(attr_path, 0, "no attribute row for node '" + label + "'");
        }
    }

    LoadedNetwork net;
    net.labels.assign(label_set.begin(), label_set.end());  // sorted by set order
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < net.labels.size(); ++i) index[net.labels[i]] = static_cast<int>(i);

    net.graph = Graph(static_cast<int>(net.labels.size()));
    for (const auto& [a, b] : edge_rows) net.graph.set_edge(index[a], index[b], true);

    net.data = NodeData(net.graph.n());
    if (!attr_rows.empty()) {
        for (std::size_t c = 1; c < attr_header.size(); ++c) {
            bool numeric = true;
            double tmp;
            for (const auto& row : attr_rows)
                if (!parse_double(row[c], tmp)) {
                    numeric = false;
                    break;
                }
            if (numeric) {
                std::vector<double> col(net.graph.n(), 0.0);
                for (const auto& row : attr_rows) {
                    parse_double(row[c], tmp);
                    col[index[row[0]]] = tmp;
                }
                net.data.set_numeric(attr_header[c], std::move(col));
            } else {
                std::vector<std::string> col(net.graph.n());
                for (const auto& row : attr_rows) col[index[row[0]]] = row[c];
                net.data.set_categorical(attr_header[c], std::move(col));
            }
        }
    }
    return net;
}

void save_network(const Graph& g, const std::vector<std::string>& labels,
                  const std::string& path) {
    auto out = open_out(path);
    out << "source,target\n";
    for (int i = 0; i < g.n(); ++i)
        for (int j = i + 1; j < g.n(); ++j)
            if (g.has_edge(i, j)) out << labels[i] << "," << labels[j] << "\n";
}

void save_attributes(const NodeData& data, const std::vector<std::string>& labels,
                     const std::string& path) {
    auto out = open_out(path);
    auto num_names = data.numeric_names();
    auto cat_names = data.categorical_names();
    out << "node";
    for (const auto& c : num_names) out << "," << c;
    for (const auto& c : cat_names) out << "," << c;
    out << "\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << labels[i];
        for (const auto& c : num_names) out << "," << fmt_exact(data.numeric(c)[i]);
        for (const auto& c : cat_names) out << "," << data.categorical(c)[i];
        out << "\n";
    }
}

void save_partial(const PartialGraph& p, const std::vector<std::string>& labels,
                  const std::string& path) {
    auto out = open_out(path);
    out << "source,target,state\n";
    for (int i = 0; i < p.n(); ++i)
        for (int j = i + 1; j < p.n(); ++j) {
            DyadState s = p.state(i, j);
            if (s == DyadState::Absent) continue;
            out << labels[i] << "," << labels[j] << ","
                << (s == DyadState::Present ? "1" : "NA") << "\n";
        }
}

void save_mask(const MissMask& d, const std::vector<std::string>& labels,
               const std::string& path) {
    save_network(d, labels, path);
}

void save_labels(const std::vector<std::string>& labels, const std::string& path) {
    auto out = open_out(path);
    out << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << "," << labels[i] << "\n";
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

Term parse_term(const json& jt) {
    require_keys(jt, "estimation term", {"kind", "lambda", "alpha", "attr"});
    std::string kind = jt.at("kind").get<std::string>();
    if (kind == "edges") return Term::edges();
    if (kind == "altkstar") return Term::alt_k_star(jt.value("lambda", 2.0));
    if (kind == "gwdegree") return Term::gw_degree(jt.value("alpha", std::log(2.0)));
    if (kind == "gwesp") return Term::gwesp(jt.value("alpha", std::log(2.0)));
    if (kind == "nodecov") return Term::node_cov_sum(jt.at("attr").get<std::string>());
    if (kind == "absdiff") return Term::abs_diff(jt.at("attr").get<std::string>());
    if (kind == "nodematch") return Term::node_match(jt.at("attr").get<std::string>());
    throw ConfigError("unknown estimation term kind '" + kind + "'");
}

Representation parse_representation(const std::string& s) {
    if (s == "miss") return Representation::Miss;
    if (s == "zero") return Representation::Zero;
    throw ConfigError("unknown representation '" + s + "' (expected miss|zero)");
}

}  // namespace

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    Config cfg;
    require_keys(doc, "config root",
                 {"network", "estimation", "missingness", "sweep", "sampler", "mle", "seed",
                  "threads", "out"});

    if (doc.contains("network")) {
        const json& net = doc["network"];
        require_keys(net, "network", {"id", "edges", "attrs", "synthetic", "synthetic_seed"});
        cfg.network_id = net.value("id", std::string("net"));
        cfg.edges_path = net.value("edges", std::string());
        cfg.attrs_path = net.value("attrs", std::string());
        cfg.synthetic_kind = net.value("synthetic", std::string());
        cfg.synthetic_seed = net.value("synthetic_seed", std::uint64_t{11});
        if (cfg.edges_path.empty() && cfg.synthetic_kind.empty())
            throw ConfigError("network: need either 'edges' or 'synthetic'");
        if (!cfg.edges_path.empty() && !cfg.synthetic_kind.empty())
            throw ConfigError("network: 'edges' and 'synthetic' are mutually exclusive");
    } else {
        throw ConfigError("config missing 'network' section");
    }

    if (doc.contains("estimation")) {
        const json& est = doc["estimation"];
        require_keys(est, "estimation", {"terms"});
        if (!est.contains("terms") || !est["terms"].is_array() || est["terms"].empty())
            throw ConfigError("estimation.terms must be a nonempty array");
        for (const auto& jt : est["terms"]) cfg.terms.push_back(parse_term(jt));
    } else {
        cfg.terms = {Term::edges(), Term::alt_k_star(2.0), Term::gwesp(std::log(2.0))};
    }

    if (doc.contains("missingness")) {
        const json& miss = doc["missingness"];
        require_keys(miss, "missingness", {"models", "fractions", "representations", "replicates"});
        if (miss.contains("models")) {
            cfg.model_names.clear();
            for (const auto& m : miss["models"]) cfg.model_names.push_back(m.get<std::string>());
        }
        if (miss.contains("fractions")) {
            cfg.fractions.clear();
            for (const auto& f : miss["fractions"]) {
                double v = f.get<double>();
                if (!(v > 0.0 && v < 1.0)) throw ConfigError("missingness.fractions must lie in (0,1)");
                cfg.fractions.push_back(v);
            }
        }
        if (miss.contains("representations")) {
            cfg.representations.clear();
            for (const auto& r : miss["representations"])
                cfg.representations.push_back(parse_representation(r.get<std::string>()));
        }
        cfg.replicates = miss.value("replicates", 50);
        if (cfg.replicates < 1) throw ConfigError("missingness.replicates must be >= 1");
    }
    if (cfg.model_names.empty())
        cfg.model_names = {"hbern", "latent", "ergm_mcar_t3", "ergm_mnar_t3"};

    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        require_keys(sw, "sweep", {"parameter", "levels", "fraction", "replicates"});
        std::string p = sw.value("parameter", std::string("theta1_entrainment"));
        if (p == "theta1_entrainment" || p == "theta1") {
            cfg.sweep_parameter = SweepParameter::Entrainment;
        } else if (p == "theta2_degreecov" || p == "theta2") {
            cfg.sweep_parameter = SweepParameter::DegreeCov;
        } else {
            throw ConfigError("unknown sweep.parameter '" + p + "'");
        }
        if (sw.contains("levels")) {
            cfg.sweep_levels.clear();
            for (const auto& l : sw["levels"]) cfg.sweep_levels.push_back(l.get<double>());
            if (cfg.sweep_levels.empty()) throw ConfigError("sweep.levels must be nonempty");
        }
        cfg.sweep_fraction = sw.value("fraction", 0.35);
        cfg.sweep_replicates = sw.value("replicates", 50);
    }

    if (doc.contains("sampler")) {
        const json& sa = doc["sampler"];
        require_keys(sa, "sampler", {"burn_in", "thin", "draws"});
        cfg.mask_sampler.burn_in = sa.value("burn_in", cfg.mask_sampler.burn_in);
        cfg.mask_sampler.thin = sa.value("thin", cfg.mask_sampler.thin);
        cfg.mask_sampler.n_draws = sa.value("draws", cfg.mask_sampler.n_draws);
    }

    cfg.mle.sampler.burn_in = 5000;
    cfg.mle.sampler.n_draws = 1200;
    if (doc.contains("mle")) {
        const json& ml = doc["mle"];
        require_keys(ml, "mle",
                     {"burn_in", "thin", "draws", "max_outer", "t_tol", "ess_target"});
        cfg.mle.sampler.burn_in = ml.value("burn_in", cfg.mle.sampler.burn_in);
        cfg.mle.sampler.thin = ml.value("thin", cfg.mle.sampler.thin);
        cfg.mle.sampler.n_draws = ml.value("draws", cfg.mle.sampler.n_draws);
        cfg.mle.max_outer = ml.value("max_outer", cfg.mle.max_outer);
        cfg.mle.t_tol = ml.value("t_tol", cfg.mle.t_tol);
        cfg.mle.ess_target = ml.value("ess_target", cfg.mle.ess_target);
    }

    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.threads = doc.value("threads", 1);
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    cfg.out_dir = doc.value("out", std::string("out"));

    cfg.config_hash = fnv1a64(doc.dump());
    return cfg;
}

LoadedNetwork resolve_network(const Config& cfg) {
    if (!cfg.synthetic_kind.empty()) {
        LoadedNetwork net;
        net.graph = synthetic_network(cfg.synthetic_kind, cfg.synthetic_seed);
        net.data = NodeData(net.graph.n());
        net.labels.reserve(net.graph.n());
        for (int i = 0; i < net.graph.n(); ++i) net.labels.push_back("v" + std::to_string(i));
        return net;
    }
    return load_network(cfg.edges_path, cfg.attrs_path);
}

ModelSpec estimation_spec(const Config& cfg, int n, const NodeData* data) {
    ModelSpec spec(cfg.terms);
    try {
        spec.validate(n, data);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("estimation spec invalid for this network: ") + e.what());
    }
    return spec;
}

std::vector<NamedMissModel> resolve_models(const Config& cfg, const LoadedNetwork& net) {
    std::vector<NamedMissModel> out;
    auto x = std::make_shared<const Graph>(net.graph);
    for (const auto& name : cfg.model_names) {
        try {
            out.push_back({name, preset_by_name(name, net.graph.n(), x, cfg.seed)});
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

void write_records_csv(const std::string& path, const std::vector<RunRecord>& records,
                       const std::vector<std::string>& term_names, std::uint64_t config_hash,
                       std::uint64_t seed) {
    auto out = open_out(path);
    out << provenance(config_hash, seed) << "\n";
    out << "network,model,fraction,representation,replicate,seed,n_missing,observed_present,"
           "converged,failure,n_iterations";
    for (const auto& t : term_names) out << ",theta_" << t;
    for (const auto& t : term_names) out << ",se_" << t;
    for (const auto& t : term_names) out << ",stat_" << t;
    out << ",centralisation\n";
    for (const auto& rec : records) {
        out << rec.network_id << "," << rec.model_name << "," << fmt(rec.fraction) << ","
            << to_string(rec.representation) << "," << rec.replicate << "," << rec.seed << ","
            << rec.n_missing << "," << rec.observed_present << ","
            << (rec.estimate.converged ? 1 : 0) << ","
            << (rec.estimate.failure ? to_string(*rec.estimate.failure) : "none") << ","
            << rec.estimate.n_iterations;
        for (int k = 0; k < rec.observed_stats.size(); ++k)
            out << ","
                << (rec.estimate.theta_hat.size() > k ? fmt(rec.estimate.theta_hat[k]) : "nan");
        for (int k = 0; k < rec.observed_stats.size(); ++k)
            out << "," << (rec.estimate.se.size() > k ? fmt(rec.estimate.se[k]) : "nan");
        for (int k = 0; k < rec.observed_stats.size(); ++k) out << "," << fmt(rec.observed_stats[k]);
        out << "," << fmt(rec.centralisation) << "\n";
    }
}

void write_failure_rates_csv(const std::string& path, const std::vector<FailureRateRow>& rows,
                             std::uint64_t config_hash, std::uint64_t seed) {
    auto out = open_out(path);
    out << provenance(config_hash, seed) << "\n";
    out << "group,n_failed,n_total,failure_rate,n_success\n";
    for (const auto& row : rows)
        out << row.key << "," << row.n_failed << "," << row.n_total << "," << fmt(row.rate) << ","
            << (row.n_total - row.n_failed) << "\n";
}

void write_baseline_csv(const std::string& path, const EstimationResult& baseline,
                        const std::vector<std::string>& term_names, std::uint64_t config_hash,
                        std::uint64_t seed) {
    auto out = open_out(path);
    out << provenance(config_hash, seed) << "\n";
    out << "term,theta,se,converged,failure,n_iterations\n";
    for (std::size_t k = 0; k < term_names.size(); ++k) {
        out << term_names[k] << "," << fmt(baseline.theta_hat[k]) << "," << fmt(baseline.se[k])
            << "," << (baseline.converged ? 1 : 0) << ","
            << (baseline.failure ? to_string(*baseline.failure) : "none") << ","
            << baseline.n_iterations << "\n";
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     std::uint64_t config_hash, std::uint64_t seed) {
    auto out = open_out(path);
    out << provenance(config_hash, seed) << "\n";
    out << "parameter,level,component,kind,mean,lo95,hi95,baseline,n_converged,n_failed\n";
    const std::string param = to_string(sweep.parameter);
    for (const auto& lv : sweep.levels) {
        for (std::size_t k = 0; k < sweep.term_names.size(); ++k) {
            out << param << "," << fmt(lv.level) << "," << sweep.term_names[k] << ",estimate,"
                << fmt(lv.est_mean[k]) << "," << fmt(lv.est_lo[k]) << "," << fmt(lv.est_hi[k])
                << "," << fmt(sweep.baseline.theta_hat[k]) << "," << lv.n_converged << ","
                << lv.n_failed << "\n";
        }
        for (std::size_t k = 0; k < sweep.term_names.size(); ++k) {
            out << param << "," << fmt(lv.level) << "," << sweep.term_names[k] << ",stat_zero,"
                << fmt(lv.stat_mean[k]) << "," << fmt(lv.stat_lo[k]) << "," << fmt(lv.stat_hi[k])
                << "," << fmt(sweep.baseline_stats[k]) << "," << lv.n_converged << ","
                << lv.n_failed << "\n";
        }
        out << param << "," << fmt(lv.level) << ",centralisation,metric," << fmt(lv.centr_mean)
            << "," << fmt(lv.centr_lo) << "," << fmt(lv.centr_hi) << ","
            << fmt(sweep.baseline_centralisation) << "," << lv.n_converged << "," << lv.n_failed
            << "\n";
    }
}

namespace {

struct Series {
    std::vector<double> x, mean, lo, hi;
    double baseline = 0.0;
    std::string title;
};

// Minimal line/band chart. Vector output keeps figures diffable.
void write_svg(const std::string& path, const Series& s, std::uint64_t config_hash,
               std::uint64_t seed) {
    const double W = 560, H = 380, ML = 70, MR = 20, MT = 40, MB = 50;
    double xmin = *std::min_element(s.x.begin(), s.x.end());
    double xmax = *std::max_element(s.x.begin(), s.x.end());
    double ymin = s.baseline, ymax = s.baseline;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (std::isfinite(s.lo[i])) ymin = std::min(ymin, s.lo[i]);
        if (std::isfinite(s.hi[i])) ymax = std::max(ymax, s.hi[i]);
        if (std::isfinite(s.mean[i])) {
            ymin = std::min(ymin, s.mean[i]);
            ymax = std::max(ymax, s.mean[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    double ypad = 0.06 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double v) { return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ymin) / (ymax - ymin) * (H - MT - MB); };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<!-- " << provenance(config_hash, seed).substr(2) << " -->\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // band polygon over finite points
    std::string band;
    for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.lo[i]) && std::isfinite(s.hi[i]))
            band += fmt(px(s.x[i])) + "," + fmt(py(s.hi[i])) + " ";
    for (std::size_t i = s.x.size(); i-- > 0;)
        if (std::isfinite(s.lo[i]) && std::isfinite(s.hi[i]))
            band += fmt(px(s.x[i])) + "," + fmt(py(s.lo[i])) + " ";
    if (!band.empty())
        out << "<polygon points=\"" << band << "\" fill=\"#9ecae1\" fill-opacity=\"0.5\"/>\n";

    // baseline reference
    out << "<line x1=\"" << fmt(px(xmin)) << "\" y1=\"" << fmt(py(s.baseline)) << "\" x2=\""
        << fmt(px(xmax)) << "\" y2=\"" << fmt(py(s.baseline))
        << "\" stroke=\"#08306b\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>\n";

    // mean line + points
    std::string linepts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.mean[i])) linepts += fmt(px(s.x[i])) + "," + fmt(py(s.mean[i])) + " ";
    out << "<polyline points=\"" << linepts
        << "\" fill=\"none\" stroke=\"#e6550d\" stroke-width=\"2\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.mean[i]))
            out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.mean[i]))
                << "\" r=\"3\" fill=\"#e6550d\"/>\n";

    // axes
    out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
        << "\" stroke=\"black\"/>\n";
    for (double v : s.x) {
        out << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << H - MB << "\" x2=\"" << fmt(px(v))
            << "\" y2=\"" << H - MB + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(px(v)) << "\" y=\"" << H - MB + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    for (int t = 0; t <= 4; ++t) {
        double v = ymin + (ymax - ymin) * t / 4.0;
        out << "<line x1=\"" << ML - 5 << "\" y1=\"" << fmt(py(v)) << "\" x2=\"" << ML
            << "\" y2=\"" << fmt(py(v)) << "\" stroke=\"black\"/>\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", v);
        out << "<text x=\"" << ML - 8 << "\" y=\"" << fmt(py(v) + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
    }
    out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">level</text>\n";
    out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << MT - 14
        << "\" font-size=\"14\" text-anchor=\"middle\">" << s.title << "</text>\n";
    out << "</svg>\n";
}

}  // namespace

std::vector<std::string> write_sweep_plots(const std::string& dir_prefix, const SweepResult& sweep,
                                           std::uint64_t config_hash, std::uint64_t seed) {
    std::vector<std::string> written;
    const std::string param = to_string(sweep.parameter);
    auto sanitize = [](std::string s) {
        for (auto& c : s)
            if (c == '(' || c == ')' || c == '.' || c == ',') c = '_';
        return s;
    };

    for (std::size_t k = 0; k < sweep.term_names.size(); ++k) {
        Series est, stat;
        est.title = "estimate: " + sweep.term_names[k];
        stat.title = "zero-imputed statistic: " + sweep.term_names[k];
        est.baseline = sweep.baseline.theta_hat[k];
        stat.baseline = sweep.baseline_stats[k];
        for (const auto& lv : sweep.levels) {
            est.x.push_back(lv.level);
            est.mean.push_back(lv.est_mean[k]);
            est.lo.push_back(lv.est_lo[k]);
            est.hi.push_back(lv.est_hi[k]);
            stat.x.push_back(lv.level);
            stat.mean.push_back(lv.stat_mean[k]);
            stat.lo.push_back(lv.stat_lo[k]);
            stat.hi.push_back(lv.stat_hi[k]);
        }
        std::string f1 = dir_prefix + "sweep_" + param + "_est_" + sanitize(sweep.term_names[k]) + ".svg";
        std::string f2 = dir_prefix + "sweep_" + param + "_stat_" + sanitize(sweep.term_names[k]) + ".svg";
        write_svg(f1, est, config_hash, seed);
        write_svg(f2, stat, config_hash, seed);
        written.push_back(f1);
        written.push_back(f2);
    }

    Series centr;
    centr.title = "degree centralisation";
    centr.baseline = sweep.baseline_centralisation;
    for (const auto& lv : sweep.levels) {
        centr.x.push_back(lv.level);
        centr.mean.push_back(lv.centr_mean);
        centr.lo.push_back(lv.centr_lo);
        centr.hi.push_back(lv.centr_hi);
    }
    std::string f3 = dir_prefix + "sweep_" + param + "_centralisation.svg";
    write_svg(f3, centr, config_hash, seed);
    written.push_back(f3);
    return written;
}

}  // namespace missnet
