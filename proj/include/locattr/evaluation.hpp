#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locattr/errors.hpp"
#include "locattr/graph.hpp"
#include "locattr/parallel.hpp"
#include "locattr/scan.hpp"
#include "locattr/wavelet.hpp"

namespace locattr {

/// 1-based ranks, ties get the average of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

/// Mann-Whitney AUC: P(h1 > h0) + P(tie) / 2.
inline double auc(std::span<const double> scores_h1, std::span<const double> scores_h0) {
    if (scores_h1.empty() || scores_h0.empty()) throw input_error("auc: score lists must be nonempty");
    std::vector<double> all;
    all.reserve(scores_h1.size() + scores_h0.size());
    for (double s : scores_h1) {
        if (!std::isfinite(s)) throw input_error("auc: non-finite score");
        all.push_back(s);
    }
    for (double s : scores_h0) {
        if (!std::isfinite(s)) throw input_error("auc: non-finite score");
        all.push_back(s);
    }
    const auto ranks = average_ranks(all);
    double sum = 0.0;
    for (std::size_t i = 0; i < scores_h1.size(); ++i) sum += ranks[i];
    const double n1 = double(scores_h1.size()), n0 = double(scores_h0.size());
    return (sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n0);
}

/// Sum over ordered activated pairs (i, j), diagonal included, of A_ij - d_i d_j / M
/// with M the total weighted degree.
inline double modularity(const Graph& g, const Attribute& c) {
    require_length(g, c.size(), "modularity");
    const double m = 2.0 * g.total_weight();
    if (!(m > 0.0)) throw degenerate_background_error("modularity: graph has no edges");
    double inside = 0.0;
    for (const auto& e : g.edges())
        if (c[e.u] && c[e.v]) inside += 2.0 * e.w;
    double deg = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) deg += g.weighted_degree(static_cast<node_id>(i));
    return inside - deg * deg / m;
}

/// Number of edges crossing the boundary of the activated set.
inline double cut_cost(const Graph& g, const Attribute& c) { return total_variation(g, c, Norm::l0); }

struct NaiveStatistic {
    double count = 0.0;
    double mean = 0.0;
};

inline NaiveStatistic naive_statistic(const Attribute& y) { return {double(y.count()), y.mean()}; }

/// Harmonic mean of precision |a & b| / |b| and recall |a & b| / |a|.
inline double f1_score(const LocalSet& a, const LocalSet& b) {
    if (a.empty() || b.empty()) return 0.0;
    std::size_t common = 0;
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++common;
            ++i;
            ++j;
        }
    }
    if (common == 0) return 0.0;
    return 2.0 * double(common) / double(a.size() + b.size());
}

/// Symmetric best-match F1 between ground-truth and induced communities.
inline double average_f1(std::span<const LocalSet> truth, std::span<const LocalSet> induced) {
    if (truth.empty() || induced.empty()) throw input_error("average_f1: community sets must be nonempty");
    auto directional = [](std::span<const LocalSet> from, std::span<const LocalSet> to) {
        double sum = 0.0;
        for (const auto& a : from) {
            double best = 0.0;
            for (const auto& b : to) best = std::max(best, f1_score(a, b));
            sum += best;
        }
        return sum / double(from.size());
    };
    return 0.5 * directional(truth, induced) + 0.5 * directional(induced, truth);
}

/// 1 - 6 sum d^2 / (K (K^2 - 1)).
inline double spearman(std::span<const double> rank_a, std::span<const double> rank_b) {
    if (rank_a.size() != rank_b.size()) throw dimension_error("spearman: rankings differ in length");
    const double k = double(rank_a.size());
    if (rank_a.size() < 2) throw input_error("spearman: need at least two ranked items");
    double d2 = 0.0;
    for (std::size_t i = 0; i < rank_a.size(); ++i) {
        const double d = rank_a[i] - rank_b[i];
        d2 += d * d;
    }
    return 1.0 - 6.0 * d2 / (k * (k * k - 1.0));
}

/// Add-one permutation p-value (1 + #{null >= observed}) / (1 + #null).
inline double empirical_pvalue(double observed, std::span<const double> null_scores) {
    if (null_scores.empty()) throw input_error("empirical_pvalue: null scores must be nonempty");
    const auto ge = std::count_if(null_scores.begin(), null_scores.end(), [&](double s) { return s >= observed; });
    return (1.0 + double(ge)) / (1.0 + double(null_scores.size()));
}

// ---------------------------------------------------------------------------
// Attribute ranking

enum class RankMethod { wavelet, lgss, modularity, cut, avg_modularity, avg_cut, naive };

inline constexpr RankMethod all_rank_methods[] = {RankMethod::wavelet,        RankMethod::lgss,    RankMethod::modularity,
                                                  RankMethod::cut,            RankMethod::avg_modularity,
                                                  RankMethod::avg_cut,        RankMethod::naive};

inline const char* to_string(RankMethod m) {
    switch (m) {
    case RankMethod::wavelet: return "wavelet";
    case RankMethod::lgss: return "lgss";
    case RankMethod::modularity: return "modularity";
    case RankMethod::cut: return "cut";
    case RankMethod::avg_modularity: return "avg-modularity";
    case RankMethod::avg_cut: return "avg-cut";
    case RankMethod::naive: return "naive";
    }
    return "?";
}

inline RankMethod rank_method_from_string(const std::string& s) {
    for (auto m : all_rank_methods)
        if (s == to_string(m)) return m;
    throw config_error("unknown ranking method '" + s + "'");
}

inline bool ascending(RankMethod m) { return m == RankMethod::cut || m == RankMethod::avg_cut; }

struct NamedAttribute {
    std::string id;
    Attribute values;
};

struct RankedAttribute {
    std::string id;
    double statistic = 0.0; // NaN for attributes that cannot be scored
    std::size_t rank = 0;
};

struct RankingResult {
    RankMethod method = RankMethod::wavelet;
    std::vector<RankedAttribute> entries; // in rank order
};

struct RankingOutput {
    std::vector<RankingResult> results;
    std::vector<std::string> warnings;
};

struct RankOptions {
    std::uint64_t seed = 0;
    std::optional<double> rho; // lgss budget; TV1 of each attribute when unset
    ScanConfig scan;
    std::size_t jobs = 1;
};

/// Numeric ids compare as numbers, anything else lexicographically, numbers first.
inline bool natural_id_less(const std::string& a, const std::string& b) {
    auto as_number = [](const std::string& s) -> std::optional<long long> {
        long long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
        return v;
    };
    const auto na = as_number(a), nb = as_number(b);
    if (na && nb) return *na != *nb ? *na < *nb : a < b;
    if (na.has_value() != nb.has_value()) return na.has_value();
    return a < b;
}

inline double attribute_score(RankMethod m, const Graph& g, const Attribute& y, const WaveletBasis* basis,
                              const RankOptions& opt) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const double count = double(y.count());
    if (count == 0.0) return nan;
    switch (m) {
    case RankMethod::wavelet: return wavelet_statistic(*basis, y);
    case RankMethod::lgss: {
        if (count == double(y.size())) return nan;
        ScanConfig cfg = opt.scan;
        cfg.rho = opt.rho ? *opt.rho : total_variation(g, y, Norm::l1);
        return lgss(g, y, cfg).statistic;
    }
    case RankMethod::modularity: return modularity(g, y);
    case RankMethod::cut: return cut_cost(g, y);
    case RankMethod::avg_modularity: return modularity(g, y) / count;
    case RankMethod::avg_cut: return cut_cost(g, y) / count;
    case RankMethod::naive: return count;
    }
    return nan;
}

/// One ranking per method. Statistic methods sort descending, cut methods
/// ascending; unscorable attributes (no activations, or all activated for
/// lgss) get NaN and rank last; ties break by id.
inline RankingOutput rank_attributes(const Graph& g, std::span<const NamedAttribute> attrs,
                                     std::span<const RankMethod> methods, const RankOptions& opt = {}) {
    if (attrs.empty()) throw input_error("rank_attributes: no attributes");
    RankingOutput out;
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (attrs[i].values.size() != g.num_nodes())
            out.warnings.push_back("attribute '" + attrs[i].id + "' has length " +
                                   std::to_string(attrs[i].values.size()) + ", expected " +
                                   std::to_string(g.num_nodes()) + "; skipped");
        else
            usable.push_back(i);
    }
    if (usable.empty()) throw dimension_error("rank_attributes: no attribute matches the graph size");

    std::shared_ptr<const WaveletBasis> basis;
    if (std::find(methods.begin(), methods.end(), RankMethod::wavelet) != methods.end())
        basis = BasisCache::global().get(g, opt.seed);

    for (auto m : methods) {
        std::vector<double> score(usable.size());
        parallel_for(usable.size(), opt.jobs,
                     [&](std::size_t k) { score[k] = attribute_score(m, g, attrs[usable[k]].values, basis.get(), opt); });
        std::vector<std::size_t> order(usable.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        const bool asc = ascending(m);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const bool na = std::isnan(score[a]), nb = std::isnan(score[b]);
            if (na != nb) return nb;
            if (!na && score[a] != score[b]) return asc ? score[a] < score[b] : score[a] > score[b];
            return natural_id_less(attrs[usable[a]].id, attrs[usable[b]].id);
        });
        RankingResult r;
        r.method = m;
        for (std::size_t pos = 0; pos < order.size(); ++pos)
            r.entries.push_back({attrs[usable[order[pos]]].id, score[order[pos]], pos + 1});
        out.results.push_back(std::move(r));
    }
    return out;
}

struct TruthScore {
    std::string id;
    double score; // higher is better
};

/// Spearman correlation between a method ranking and a ground-truth scoring,
/// over the attributes present in both. Ties on either side get average ranks.
inline double spearman_vs_truth(const RankingResult& r, std::span<const TruthScore> truth) {
    std::map<std::string, double> truth_score;
    for (const auto& t : truth) truth_score[t.id] = t.score;
    std::vector<double> a, b;
    for (const auto& e : r.entries) {
        auto it = truth_score.find(e.id);
        if (it == truth_score.end()) continue;
        // larger = better on both sides before ranking
        double s = e.statistic;
        if (std::isnan(s))
            s = -std::numeric_limits<double>::infinity();
        else if (ascending(r.method))
            s = -s;
        a.push_back(s);
        b.push_back(it->second);
    }
    if (a.size() < 2) throw input_error("spearman: fewer than two attributes shared with the truth ranking");
    return spearman(average_ranks(a), average_ranks(b));
}

} // namespace locattr
