#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locattr/evaluation.hpp"
#include "locattr/parallel.hpp"
#include "locattr/scan.hpp"
#include "locattr/simulation.hpp"
#include "locattr/wavelet.hpp"

namespace locattr {

enum class Detector { wavelet, lgss, cgss, naive, modularity, cut };

inline const char* to_string(Detector d) {
    switch (d) {
    case Detector::wavelet: return "wavelet";
    case Detector::lgss: return "lgss";
    case Detector::cgss: return "cgss";
    case Detector::naive: return "naive";
    case Detector::modularity: return "modularity";
    case Detector::cut: return "cut";
    }
    return "?";
}

inline Detector detector_from_string(const std::string& s) {
    for (auto d : {Detector::wavelet, Detector::lgss, Detector::cgss, Detector::naive, Detector::modularity,
                   Detector::cut})
        if (s == to_string(d)) return d;
    throw config_error("unknown method '" + s + "'");
}

/// Scalar score of one attribute, larger meaning "more localized" for every
/// detector except cut, where smaller is.
inline double detector_statistic(Detector d, const Graph& g, const Attribute& y, const WaveletBasis* basis,
                                 const ScanConfig& scan_cfg) {
    switch (d) {
    case Detector::wavelet: return wavelet_statistic(*basis, y);
    case Detector::lgss: return lgss(g, y, scan_cfg).statistic;
    case Detector::cgss: return cgss(g, y, scan_cfg).statistic;
    case Detector::naive: return double(y.count());
    case Detector::modularity: return modularity(g, y);
    case Detector::cut: return cut_cost(g, y);
    }
    return 0.0;
}

/// Paired H1/H0 scores for one (radius, mu, eps) cell. Trial i uses the same
/// head and the same per-node uniforms in every cell (common random numbers),
/// so cells differ only through mu, eps and the radius.
struct PairedScores {
    std::vector<std::vector<double>> h1; // [method][trial]
    std::vector<std::vector<double>> h0;
};

struct TrialConfig {
    std::size_t radius = 3;
    double mu = 0.95;
    double eps = 0.05;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::optional<double> rho; // scan budget; TV1 of the planted ball when unset
    ScanConfig scan;
    std::size_t jobs = 1;
};

inline PairedScores paired_trials(const Graph& g, std::span<const Detector> methods, const TrialConfig& cfg) {
    if (cfg.trials == 0) throw config_error("trials must be at least 1");
    std::shared_ptr<const WaveletBasis> basis;
    if (std::find(methods.begin(), methods.end(), Detector::wavelet) != methods.end())
        basis = BasisCache::global().get(g, cfg.seed);
    PairedScores out;
    out.h1.assign(methods.size(), std::vector<double>(cfg.trials));
    out.h0.assign(methods.size(), std::vector<double>(cfg.trials));
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t i) {
        const node_id head = random_head(g, derive_seed(cfg.seed, streams::head, i));
        auto model = planted_ball(g, cfg.radius, cfg.mu, cfg.eps, derive_seed(cfg.seed, streams::h1, i), head);
        const Attribute y1 = draw_h1(g, model);
        model.seed = derive_seed(cfg.seed, streams::h0, i);
        const Attribute y0 = draw_h0(g, model);
        ScanConfig sc = cfg.scan;
        sc.rho = cfg.rho ? *cfg.rho : total_variation(g, Attribute::indicator(model.c, g.num_nodes()), Norm::l1);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            out.h1[m][i] = detector_statistic(methods[m], g, y1, basis.get(), sc);
            out.h0[m][i] = detector_statistic(methods[m], g, y0, basis.get(), sc);
        }
    });
    return out;
}

/// Separation AUC of a detector, oriented so that 1 means H1 scores look
/// more localized.
inline double separation_auc(Detector d, std::span<const double> h1, std::span<const double> h0) {
    return d == Detector::cut ? auc(h0, h1) : auc(h1, h0);
}

struct SweepConfig {
    std::vector<double> mu;
    std::vector<double> eps;
    std::vector<std::size_t> radii{3, 6};
    std::vector<Detector> methods{Detector::wavelet};
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::optional<double> rho;
    ScanConfig scan;
    std::size_t jobs = 1;
};

struct SweepRow {
    double mu;
    double eps;
    std::size_t radius;
    Detector method;
    double auc;
    std::size_t trials; // 0 for cells with mu <= eps, whose AUC is set to 0
    std::uint64_t seed;
};

/// Default mu/eps axis: 0.05, 0.15, ..., 0.95.
inline std::vector<double> default_rate_axis() {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) v.push_back(double(2 * i + 1) / 20.0);
    return v;
}

inline std::vector<SweepRow> run_sweep(const Graph& g, const SweepConfig& cfg) {
    if (cfg.trials == 0) throw config_error("trials must be at least 1");
    if (cfg.mu.empty() || cfg.eps.empty() || cfg.radii.empty() || cfg.methods.empty())
        throw config_error("sweep: mu, eps, radius and method lists must be non-empty");
    for (double v : cfg.mu)
        if (!(v > 0.0 && v <= 1.0)) throw config_error("sweep: mu values must lie in (0, 1]");
    for (double v : cfg.eps)
        if (!(v >= 0.0 && v < 1.0)) throw config_error("sweep: eps values must lie in [0, 1)");
    std::vector<SweepRow> rows;
    for (auto radius : cfg.radii)
        for (double mu : cfg.mu)
            for (double eps : cfg.eps) {
                if (mu <= eps) {
                    for (auto m : cfg.methods) rows.push_back({mu, eps, radius, m, 0.0, 0, cfg.seed});
                    continue;
                }
                TrialConfig tc{radius, mu, eps, cfg.trials, cfg.seed, cfg.rho, cfg.scan, cfg.jobs};
                const auto s = paired_trials(g, cfg.methods, tc);
                for (std::size_t m = 0; m < cfg.methods.size(); ++m)
                    rows.push_back({mu, eps, radius, cfg.methods[m],
                                    separation_auc(cfg.methods[m], s.h1[m], s.h0[m]), cfg.trials, cfg.seed});
            }
    return rows;
}

/// Statistic of y against `trials` scattered nulls with the same activation
/// count, for an empirical p-value.
inline std::vector<double> scattered_null_scores(Detector d, const Graph& g, const Attribute& y,
                                                 const WaveletBasis* basis, const ScanConfig& scan_cfg,
                                                 std::size_t trials, std::uint64_t seed, std::size_t jobs) {
    std::vector<double> out(trials);
    const std::size_t k = y.count();
    parallel_for(trials, jobs, [&](std::size_t i) {
        const auto y0 = scattered_null(g, k, derive_seed(seed, streams::null_trials, i));
        out[i] = detector_statistic(d, g, y0, basis, scan_cfg);
    });
    return out;
}

} // namespace locattr
