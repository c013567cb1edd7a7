#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "locattr/locattr.hpp"

using namespace locattr;

namespace {

constexpr int exit_input = 2;
constexpr int exit_numerical = 3;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        auto t = std::string(io::detail::trim(item));
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw config_error(what + ": '" + s + "' is not a number");
    return v;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
    std::vector<double> v;
    for (const auto& x : split_list(s)) v.push_back(parse_double(x, what));
    if (v.empty()) throw config_error(what + ": empty list");
    return v;
}

std::vector<std::size_t> parse_sizes(const std::string& s, const std::string& what) {
    std::vector<std::size_t> v;
    for (double d : parse_doubles(s, what)) {
        if (!(d >= 0.0) || d != std::floor(d)) throw config_error(what + ": expected non-negative integers");
        v.push_back(static_cast<std::size_t>(d));
    }
    return v;
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw input_error("failed writing '" + path + "'");
}

void warn(std::vector<std::string>& sink, const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
    sink.push_back(msg);
}

std::string csv_number(double v) { return std::isnan(v) ? "nan" : io::format_double(v); }

/// Turns a JSON object into "--key value" tokens; flags on the real command
/// line come later and win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw input_error(path + ": " + e.what());
    }
    if (!j.is_object()) throw input_error(path + ": config must be a JSON object");
    std::vector<std::string> tokens;
    for (const auto& [key, value] : j.items()) {
        if (key == "config") throw input_error(path + ": nested config is not supported");
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
            continue;
        }
        std::string text;
        auto scalar = [&](const json& v) -> std::string {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number()) return v.dump();
            throw input_error(path + ": unsupported value for '" + key + "'");
        };
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + scalar(value[i]);
        } else {
            text = scalar(value);
        }
        tokens.push_back(flag);
        tokens.push_back(text);
    }
    return tokens;
}

struct Common {
    std::string config;
    std::uint64_t seed = 0;
    std::size_t jobs = 0;
    std::size_t resolved_jobs() const { return jobs ? jobs : default_jobs(); }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON file of option defaults; explicit flags override it");
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--jobs", c.jobs, "Worker threads (default: LOCATTR_JOBS or hardware concurrency)");
}

std::shared_ptr<const WaveletBasis> load_basis(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open basis '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw input_error(path + ": " + e.what());
    }
    auto b = std::make_shared<const WaveletBasis>(basis_from_json(j));
    if (b->num_nodes != g.num_nodes() || b->graph_hash != graph_hash(g))
        throw input_error(path + ": basis was built for a different graph");
    return b;
}

// ---- build-knn

struct KnnArgs {
    Common common;
    std::string points, out, attribute_out;
    std::size_t k = 10;
    std::optional<double> threshold;
};

void run_build_knn(const KnnArgs& a) {
    const auto rows = io::read_points_csv(a.points);
    std::vector<Point> pts;
    for (const auto& r : rows) pts.push_back(r.point);
    const Graph g = knn_graph(pts, a.k);
    std::ostringstream edges;
    io::write_edge_list(edges, g);
    write_output(a.out, edges.str());
    if (a.threshold) {
        if (a.attribute_out.empty()) throw config_error("--threshold needs --attribute-out");
        std::vector<std::uint8_t> v(rows.size(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].value) throw input_error(a.points + ": point " + std::to_string(rows[i].point.id) +
                                                  " has no value to threshold");
            v[i] = *rows[i].value > *a.threshold;
        }
        std::ostringstream attr;
        io::write_attribute(attr, Attribute(v));
        write_output(a.attribute_out, attr.str());
    }
}

// ---- detect

struct DetectArgs {
    Common common;
    std::string graph, attribute, method = "wavelet", out = "-", basis, t_grid;
    std::optional<double> rho;
    double delta = 0.05;
    std::size_t null_trials = 0;
    bool include_x = false;
};

void run_detect(const DetectArgs& a) {
    const Detector method = detector_from_string(a.method);
    if (method == Detector::modularity || method == Detector::cut)
        throw config_error("detect: method must be wavelet, lgss, cgss or naive");
    check_delta(a.delta);
    const Graph g = io::read_edge_list(a.graph);
    const Attribute y = io::read_attribute(a.attribute, g.num_nodes());
    const std::size_t jobs = a.common.resolved_jobs();
    std::vector<std::string> warnings;

    json report;
    report["format"] = "locattr-report/1";
    report["method"] = a.method;
    report["num_nodes"] = g.num_nodes();
    report["num_edges"] = g.num_edges();
    report["graph_hash"] = hash_hex(graph_hash(g));
    report["activated"] = y.count();
    report["delta"] = a.delta;
    report["seed"] = a.common.seed;

    ScanConfig sc;
    sc.delta = a.delta;
    if (!a.t_grid.empty()) sc.t_grid = parse_doubles(a.t_grid, "--t-grid");
    std::shared_ptr<const WaveletBasis> basis;
    double observed = 0.0;
    bool analytic_reject = false;

    switch (method) {
    case Detector::wavelet: {
        if (!a.basis.empty()) {
            basis = load_basis(a.basis, g);
            if (basis->seed != a.common.seed)
                warn(warnings, "basis file was built with seed " + std::to_string(basis->seed));
        } else {
            basis = BasisCache::global().get(g, a.common.seed);
        }
        const auto r = detect_wavelet(*basis, y, a.delta);
        observed = r.statistic;
        analytic_reject = r.reject;
        report["result"] = to_json(r, *basis);
        break;
    }
    case Detector::lgss:
    case Detector::cgss: {
        if (a.rho) {
            sc.rho = *a.rho;
        } else {
            sc.rho = total_variation(g, y, Norm::l1);
            warn(warnings, "--rho not set; using TV1 of the attribute, " + io::format_double(sc.rho));
        }
        sc.annealing.seed = a.common.seed;
        const auto r = scan(method == Detector::lgss ? ScanVariant::lgss : ScanVariant::cgss, g, y, sc);
        if (r.no_feasible_candidate) warn(warnings, "no nonempty feasible candidate; statistic is 0");
        observed = r.statistic;
        analytic_reject = r.reject;
        report["result"] = to_json(r, sc.rho, a.include_x);
        break;
    }
    default: {
        const auto r = naive_statistic(y);
        observed = r.count;
        report["result"] = {{"variant", "naive"}, {"statistic", r.count}, {"mean", r.mean}, {"reject", false}};
        warn(warnings, "the naive statistic has no analytic threshold; use --null-trials for a p-value");
        break;
    }
    }

    if (a.null_trials > 0) {
        const auto nulls = scattered_null_scores(method, g, y, basis.get(), sc, a.null_trials,
                                                 derive_seed(a.common.seed, streams::null_trials), jobs);
        const double p = empirical_pvalue(observed, nulls);
        report["empirical"] = {
            {"null_model", "scattered"}, {"null_trials", a.null_trials}, {"p_value", p}, {"reject", p <= a.delta}};
    }
    report["reject"] = a.null_trials > 0 ? report["empirical"]["reject"].get<bool>() : analytic_reject;
    report["warnings"] = warnings;
    write_output(a.out, report.dump(2) + "\n");
}

// ---- simulate

struct SimulateArgs {
    Common common;
    std::string graph, out = "-", mu, eps, radius = "3,6", methods = "wavelet", t_grid;
    std::size_t rows = 20, cols = 20, trials = 100;
    std::optional<double> rho;
    double delta = 0.05;
};

void run_simulate(const SimulateArgs& a) {
    const Graph g = a.graph.empty() ? grid_graph(a.rows, a.cols) : io::read_edge_list(a.graph);
    SweepConfig cfg;
    cfg.mu = a.mu.empty() ? default_rate_axis() : parse_doubles(a.mu, "--mu");
    cfg.eps = a.eps.empty() ? default_rate_axis() : parse_doubles(a.eps, "--eps");
    cfg.radii = parse_sizes(a.radius, "--radius");
    cfg.methods.clear();
    for (const auto& m : split_list(a.methods)) cfg.methods.push_back(detector_from_string(m));
    cfg.trials = a.trials;
    cfg.seed = a.common.seed;
    cfg.rho = a.rho;
    cfg.scan.delta = a.delta;
    cfg.scan.annealing.seed = a.common.seed;
    if (!a.t_grid.empty()) cfg.scan.t_grid = parse_doubles(a.t_grid, "--t-grid");
    cfg.jobs = a.common.resolved_jobs();
    if (cfg.trials == 0) throw config_error("--trials must be at least 1");
    validate(cfg.scan, g.num_nodes());

    std::ostringstream csv;
    csv << "mu,eps,radius,method,auc,trials,seed\n";
    for (const auto& r : run_sweep(g, cfg))
        csv << io::format_double(r.mu) << ',' << io::format_double(r.eps) << ',' << r.radius << ','
            << to_string(r.method) << ',' << csv_number(r.auc) << ',' << r.trials << ',' << r.seed << '\n';
    write_output(a.out, csv.str());
}

// ---- rank

struct RankArgs {
    Common common;
    std::string graph, attributes, methods = "wavelet", out = "-", truth, spearman_out;
    std::optional<double> rho;
};

void run_rank(const RankArgs& a) {
    const Graph g = io::read_edge_list(a.graph);
    const auto attrs = io::read_attribute_pairs(a.attributes, g.num_nodes());
    std::vector<RankMethod> methods;
    for (const auto& m : split_list(a.methods)) methods.push_back(rank_method_from_string(m));
    if (methods.empty()) throw config_error("--methods: empty list");
    std::vector<TruthScore> truth;
    if (!a.truth.empty()) truth = io::read_truth(a.truth);

    RankOptions opt;
    opt.seed = a.common.seed;
    opt.rho = a.rho;
    opt.scan.annealing.seed = a.common.seed;
    opt.jobs = a.common.resolved_jobs();
    if (!a.rho && std::find(methods.begin(), methods.end(), RankMethod::lgss) != methods.end())
        std::cerr << "warning: --rho not set; lgss uses TV1 of each attribute\n";
    const auto out = rank_attributes(g, attrs, methods, opt);
    for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';

    std::ostringstream csv;
    csv << "attribute_id,method,statistic,rank\n";
    for (const auto& r : out.results)
        for (const auto& e : r.entries)
            csv << e.id << ',' << to_string(r.method) << ',' << csv_number(e.statistic) << ',' << e.rank << '\n';
    write_output(a.out, csv.str());

    if (!truth.empty()) {
        json s;
        for (const auto& r : out.results) s["spearman"][to_string(r.method)] = spearman_vs_truth(r, truth);
        write_output(a.spearman_out.empty() ? "-" : a.spearman_out, s.dump(2) + "\n");
    }
}

// ---- basis-cache

struct BasisArgs {
    Common common;
    std::string graph, out = "-", basis;
};

void run_basis_build(const BasisArgs& a) {
    const Graph g = io::read_edge_list(a.graph);
    write_output(a.out, basis_to_json(build_basis(g, a.common.seed)).dump() + "\n");
}

void run_basis_inspect(const BasisArgs& a) {
    std::ifstream in(a.basis);
    if (!in) throw input_error("cannot open basis '" + a.basis + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw input_error(a.basis + ": " + e.what());
    }
    const auto b = basis_from_json(j);
    json s;
    s["num_nodes"] = b.num_nodes;
    s["graph_hash"] = hash_hex(b.graph_hash);
    s["seed"] = b.seed;
    s["level"] = b.level;
    s["components"] = b.components.size();
    s["vectors"] = b.vectors.size();
    if (!a.graph.empty()) {
        const Graph g = io::read_edge_list(a.graph);
        s["matches_graph"] = b.num_nodes == g.num_nodes() && b.graph_hash == graph_hash(g);
    }
    write_output(a.out, s.dump(2) + "\n");
}

std::vector<std::string> with_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
        if (path.empty()) continue;
        auto tokens = config_tokens(path);
        // ahead of every explicit flag, after the subcommand names
        std::size_t at = 0;
        while (at < args.size() && args[at].rfind("-", 0) != 0) ++at;
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), tokens.begin(), tokens.end());
        break;
    }
    std::reverse(args.begin(), args.end()); // CLI11 consumes the vector from the back
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tests whether a binary node attribute is localized on a graph."};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    KnnArgs knn;
    auto* c_knn = app.add_subcommand("build-knn", "k-nearest-neighbor graph from a points CSV");
    add_common(c_knn, knn.common);
    c_knn->add_option("--points", knn.points, "CSV with header id,x,y[,value]")->required();
    c_knn->add_option("--out", knn.out, "Edge list output")->required();
    c_knn->add_option("--k", knn.k, "Neighbors per point")->capture_default_str();
    c_knn->add_option("--threshold", knn.threshold, "Binarize value > threshold into an attribute");
    c_knn->add_option("--attribute-out", knn.attribute_out, "Attribute output for --threshold");

    DetectArgs det;
    auto* c_det = app.add_subcommand("detect", "Run one detector on a graph attribute");
    add_common(c_det, det.common);
    c_det->add_option("--graph", det.graph, "Edge list")->required();
    c_det->add_option("--attribute", det.attribute, "Attribute file")->required();
    c_det->add_option("--method", det.method, "wavelet, lgss, cgss or naive")->capture_default_str();
    c_det->add_option("--rho", det.rho, "Scan TV budget (default: TV1 of the attribute)");
    c_det->add_option("--delta", det.delta, "Significance level")->capture_default_str();
    c_det->add_option("--t-grid", det.t_grid, "Comma-separated scan budgets");
    c_det->add_option("--null-trials", det.null_trials, "Scattered-null trials for an empirical p-value");
    c_det->add_option("--basis", det.basis, "Basis file from basis-cache build");
    c_det->add_flag("--include-x", det.include_x, "Include the scan solution vector");
    c_det->add_option("--out", det.out, "Report JSON ('-' for stdout)")->capture_default_str();

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Planted-ball AUC sweep");
    add_common(c_sim, sim.common);
    c_sim->add_option("--graph", sim.graph, "Edge list (default: a rows x cols grid)");
    c_sim->add_option("--rows", sim.rows)->capture_default_str();
    c_sim->add_option("--cols", sim.cols)->capture_default_str();
    c_sim->add_option("--mu", sim.mu, "Comma-separated in-cluster rates (default 0.05..0.95)");
    c_sim->add_option("--eps", sim.eps, "Comma-separated background rates (default 0.05..0.95)");
    c_sim->add_option("--radius", sim.radius, "Comma-separated ball radii")->capture_default_str();
    c_sim->add_option("--methods", sim.methods, "Comma-separated detectors")->capture_default_str();
    c_sim->add_option("--trials", sim.trials, "Paired trials per cell")->capture_default_str();
    c_sim->add_option("--rho", sim.rho, "Scan TV budget (default: TV1 of the planted ball)");
    c_sim->add_option("--delta", sim.delta)->capture_default_str();
    c_sim->add_option("--t-grid", sim.t_grid, "Comma-separated scan budgets");
    c_sim->add_option("--out", sim.out, "CSV output ('-' for stdout)")->capture_default_str();

    RankArgs rk;
    auto* c_rank = app.add_subcommand("rank", "Rank attributes by localization");
    add_common(c_rank, rk.common);
    c_rank->add_option("--graph", rk.graph, "Edge list")->required();
    c_rank->add_option("--attributes", rk.attributes, "Pairs file 'attr_id node_id'")->required();
    c_rank->add_option("--methods", rk.methods,
                       "Comma-separated: wavelet, lgss, modularity, cut, avg_modularity, avg_cut, naive")
        ->capture_default_str();
    c_rank->add_option("--rho", rk.rho, "lgss TV budget (default: TV1 of each attribute)");
    c_rank->add_option("--truth", rk.truth, "Ground-truth scores 'attr_id score'");
    c_rank->add_option("--spearman-out", rk.spearman_out, "Spearman JSON output (default stdout)");
    c_rank->add_option("--out", rk.out, "Ranking CSV ('-' for stdout)")->capture_default_str();

    BasisArgs bb, bi;
    auto* c_basis = app.add_subcommand("basis-cache", "Build or inspect a serialized wavelet basis");
    c_basis->require_subcommand(1);
    auto* c_bb = c_basis->add_subcommand("build", "Build a basis for a graph");
    add_common(c_bb, bb.common);
    c_bb->add_option("--graph", bb.graph, "Edge list")->required();
    c_bb->add_option("--out", bb.out, "Basis JSON ('-' for stdout)")->capture_default_str();
    auto* c_bi = c_basis->add_subcommand("inspect", "Summarize a basis file");
    add_common(c_bi, bi.common);
    c_bi->add_option("--basis", bi.basis, "Basis JSON")->required();
    c_bi->add_option("--graph", bi.graph, "Edge list to check the basis against");
    c_bi->add_option("--out", bi.out)->capture_default_str();

    try {
        auto args = with_config(argc, argv);
        app.parse(args);
        if (*c_knn) run_build_knn(knn);
        if (*c_det) run_detect(det);
        if (*c_sim) run_simulate(sim);
        if (*c_rank) run_rank(rk);
        if (*c_bb) run_basis_build(bb);
        if (*c_bi) run_basis_inspect(bi);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
