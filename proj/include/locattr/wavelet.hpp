#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "locattr/errors.hpp"
#include "locattr/graph.hpp"
#include "locattr/rng.hpp"

namespace locattr {

/// One high-frequency basis vector. The two child sets are contiguous ranges
/// of WaveletBasis::order: set_a = order[begin, split), set_b = order[split, end).
/// The vector is scale * (1_a/|a| - 1_b/|b|) with scale = sqrt(|a||b|/(|a|+|b|)).
struct WaveletVector {
    std::uint32_t begin;
    std::uint32_t split;
    std::uint32_t end;
    std::uint32_t depth;  // number of partitions above this one
    std::int64_t parent;  // index of the vector whose child range this split, -1 at a root
    double scale;

    std::size_t size_a() const noexcept { return split - begin; }
    std::size_t size_b() const noexcept { return end - split; }
};

inline double wavelet_scale(std::size_t a, std::size_t b) {
    return std::sqrt(double(a) * double(b) / double(a + b));
}

/// Local-set graph wavelet basis. Constant columns (one per connected
/// component, 1_comp / sqrt|comp|) come first, followed by the high-frequency
/// vectors. Column order among the high-frequency vectors is unspecified.
struct WaveletBasis {
    std::size_t num_nodes = 0;
    std::uint64_t graph_hash = 0;
    std::uint64_t seed = 0;
    std::vector<node_id> order;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> components;
    std::vector<WaveletVector> vectors;
    std::size_t level = 0;

    LocalSet set_a(std::size_t i) const {
        const auto& w = vectors.at(i);
        return LocalSet({order.begin() + w.begin, order.begin() + w.split});
    }
    LocalSet set_b(std::size_t i) const {
        const auto& w = vectors.at(i);
        return LocalSet({order.begin() + w.split, order.begin() + w.end});
    }

    std::vector<double> prefix_sums(std::span<const std::uint8_t> y) const {
        std::vector<double> p(order.size() + 1, 0.0);
        for (std::size_t k = 0; k < order.size(); ++k) p[k + 1] = p[k] + y[order[k]];
        return p;
    }

    /// All N coefficients W^T y: constant components first.
    std::vector<double> coefficients(const Attribute& y) const {
        if (y.size() != num_nodes) throw dimension_error("wavelet: attribute length does not match basis");
        const auto p = prefix_sums(y.values());
        std::vector<double> c;
        c.reserve(components.size() + vectors.size());
        for (auto [b, e] : components) c.push_back((p[e] - p[b]) / std::sqrt(double(e - b)));
        for (const auto& w : vectors)
            c.push_back(w.scale * ((p[w.split] - p[w.begin]) / double(w.size_a()) -
                                   (p[w.end] - p[w.split]) / double(w.size_b())));
        return c;
    }

    /// Dense N x N matrix, column-major (columns[k][i]). Test and diagnostic use only.
    std::vector<std::vector<double>> dense() const {
        std::vector<std::vector<double>> cols;
        for (auto [b, e] : components) {
            std::vector<double> col(num_nodes, 0.0);
            for (auto k = b; k < e; ++k) col[order[k]] = 1.0 / std::sqrt(double(e - b));
            cols.push_back(std::move(col));
        }
        for (const auto& w : vectors) {
            std::vector<double> col(num_nodes, 0.0);
            for (auto k = w.begin; k < w.split; ++k) col[order[k]] = w.scale / double(w.size_a());
            for (auto k = w.split; k < w.end; ++k) col[order[k]] = -w.scale / double(w.size_b());
            cols.push_back(std::move(col));
        }
        return cols;
    }
};

namespace detail {

// Largest set for which the head pair is found by exact all-pairs BFS.
inline constexpr std::size_t exact_diameter_limit = 4096;
inline constexpr int max_two_means_rounds = 20;
// Head-recomputation candidates per cluster above the exact limit.
inline constexpr std::size_t large_median_candidates = 32;

/// Splits one node set; owns scratch buffers sized to the graph so repeated
/// calls during basis construction do not reallocate.
class Bisector {
public:
    explicit Bisector(const Graph& g) : g_(g), local_(g.num_nodes(), -1) {}

    /// members must be sorted ascending and hold at least two nodes. Returns
    /// the two children, each sorted; the first one holds the smallest member.
    std::pair<std::vector<node_id>, std::vector<node_id>> split(std::span<const node_id> members,
                                                                SplitMix64& rng) {
        const std::size_t m = members.size();
        for (std::size_t i = 0; i < m; ++i) local_[members[i]] = static_cast<std::int32_t>(i);
        std::vector<std::uint8_t> side;
        if (auto comps = components(members); comps.size() > 1)
            side = pack_components(comps, m);
        else if (m <= exact_diameter_limit)
            side = two_means_exact(members);
        else
            side = two_means_large(members, rng);
        for (auto v : members) local_[v] = -1;

        std::pair<std::vector<node_id>, std::vector<node_id>> out;
        const std::uint8_t first = side[0];
        for (std::size_t i = 0; i < m; ++i) (side[i] == first ? out.first : out.second).push_back(members[i]);
        return out;
    }

private:
    template <class F>
    void for_local_neighbors(node_id v, F&& f) const {
        for (const auto& nb : g_.neighbors(v))
            if (const auto j = local_[nb.node]; j >= 0) f(static_cast<std::size_t>(j));
    }

    std::vector<std::vector<std::size_t>> components(std::span<const node_id> members) const {
        const std::size_t m = members.size();
        std::vector<std::uint8_t> seen(m, 0);
        std::vector<std::vector<std::size_t>> comps;
        for (std::size_t s = 0; s < m; ++s) {
            if (seen[s]) continue;
            std::vector<std::size_t> comp{s};
            seen[s] = 1;
            for (std::size_t h = 0; h < comp.size(); ++h)
                for_local_neighbors(members[comp[h]], [&](std::size_t j) {
                    if (!seen[j]) {
                        seen[j] = 1;
                        comp.push_back(j);
                    }
                });
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        return comps;
    }

    // First-fit decreasing: largest components first, each to the lighter group.
    static std::vector<std::uint8_t> pack_components(std::vector<std::vector<std::size_t>>& comps, std::size_t m) {
        std::stable_sort(comps.begin(), comps.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
        std::vector<std::uint8_t> side(m, 0);
        std::size_t load[2] = {0, 0};
        for (const auto& c : comps) {
            const std::uint8_t g = load[1] < load[0] ? 1 : 0;
            load[g] += c.size();
            for (auto i : c) side[i] = g;
        }
        return side;
    }

    std::vector<std::uint32_t> bfs_local(std::span<const node_id> members, std::size_t source) {
        constexpr auto unreached = std::numeric_limits<std::uint32_t>::max();
        std::vector<std::uint32_t> dist(members.size(), unreached);
        queue_.assign(1, source);
        dist[source] = 0;
        for (std::size_t h = 0; h < queue_.size(); ++h) {
            const auto i = queue_[h];
            for_local_neighbors(members[i], [&](std::size_t j) {
                if (dist[j] == unreached) {
                    dist[j] = dist[i] + 1;
                    queue_.push_back(j);
                }
            });
        }
        return dist;
    }

    // Nearest-head assignment over local indices in increasing order. Ties go
    // to the head whose cluster is currently smaller, then to the lower id.
    template <class DistA, class DistB>
    static std::vector<std::uint8_t> assign(std::size_t m, std::size_t ha, std::size_t hb, DistA&& da, DistB&& db) {
        std::vector<std::uint8_t> side(m, 0);
        std::size_t size[2] = {1, 1};
        side[hb] = 1;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == ha || i == hb) continue;
            const auto a = da(i), b = db(i);
            std::uint8_t g;
            if (a != b)
                g = a < b ? 0 : 1;
            else if (size[0] != size[1])
                g = size[0] < size[1] ? 0 : 1;
            else
                g = ha < hb ? 0 : 1; // local order follows node id order
            side[i] = g;
            ++size[g];
        }
        return side;
    }

    std::vector<std::uint8_t> two_means_exact(std::span<const node_id> members) {
        const std::size_t m = members.size();
        std::vector<std::uint16_t> dist(m * m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto row = bfs_local(members, i);
            for (std::size_t j = 0; j < m; ++j) dist[i * m + j] = static_cast<std::uint16_t>(row[j]);
        }
        auto d = [&](std::size_t i, std::size_t j) { return dist[i * m + j]; };

        std::size_t ha = 0, hb = 1;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (d(i, j) > d(ha, hb)) ha = i, hb = j;

        std::vector<std::uint8_t> side;
        std::vector<std::size_t> cluster;
        for (int round = 0; round < max_two_means_rounds; ++round) {
            side = assign(m, ha, hb, [&](std::size_t i) { return d(i, ha); }, [&](std::size_t i) { return d(i, hb); });
            std::size_t heads[2] = {ha, hb};
            for (std::uint8_t g = 0; g < 2; ++g) {
                cluster.clear();
                for (std::size_t i = 0; i < m; ++i)
                    if (side[i] == g) cluster.push_back(i);
                std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
                for (auto i : cluster) {
                    std::uint64_t sum = 0;
                    for (auto j : cluster) sum += d(i, j);
                    if (sum < best) best = sum, heads[g] = i;
                }
            }
            if (heads[0] == ha && heads[1] == hb) break;
            ha = heads[0];
            hb = heads[1];
        }
        return side;
    }

    std::vector<std::uint8_t> two_means_large(std::span<const node_id> members, SplitMix64& rng) {
        const std::size_t m = members.size();
        auto farthest = [](const std::vector<std::uint32_t>& dist) {
            std::size_t arg = 0;
            for (std::size_t i = 1; i < dist.size(); ++i)
                if (dist[i] > dist[arg]) arg = i;
            return arg;
        };
        const std::size_t u = farthest(bfs_local(members, rng.below(m)));
        const std::size_t v = farthest(bfs_local(members, u));
        std::size_t ha = std::min(u, v), hb = std::max(u, v);

        std::vector<std::uint8_t> side;
        for (int round = 0; round < max_two_means_rounds; ++round) {
            const auto da = bfs_local(members, ha), db = bfs_local(members, hb);
            side = assign(m, ha, hb, [&](std::size_t i) { return da[i]; }, [&](std::size_t i) { return db[i]; });
            std::size_t heads[2] = {ha, hb};
            const std::vector<std::uint32_t>* from_head[2] = {&da, &db};
            for (std::uint8_t g = 0; g < 2; ++g) {
                // candidates: cluster members closest to the current head
                std::vector<std::pair<std::uint32_t, std::size_t>> cand;
                for (std::size_t i = 0; i < m; ++i)
                    if (side[i] == g) cand.emplace_back((*from_head[g])[i], i);
                const auto keep = std::min(cand.size(), large_median_candidates);
                std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end());
                std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
                for (std::size_t c = 0; c < keep; ++c) {
                    const auto dist = bfs_local(members, cand[c].second);
                    std::uint64_t sum = 0;
                    for (std::size_t i = 0; i < m; ++i)
                        if (side[i] == g) sum += dist[i];
                    if (sum < best || (sum == best && cand[c].second < heads[g])) best = sum, heads[g] = cand[c].second;
                }
            }
            if (heads[0] == ha && heads[1] == hb) break;
            ha = heads[0];
            hb = heads[1];
        }
        return side;
    }

    const Graph& g_;
    std::vector<std::int32_t> local_;
    std::vector<std::size_t> queue_;
};

} // namespace detail

/// Splits s into two disjoint nonempty sets whose union is s, by geodesic
/// (hop) 2-means on the subgraph induced by s. Disconnected induced subgraphs
/// are split by packing whole components into two groups of balanced size.
inline std::pair<LocalSet, LocalSet> partition_2means(const Graph& g, const LocalSet& s, std::uint64_t seed = 0) {
    if (s.size() < 2) throw precondition_error("partition_2means: set must hold at least two nodes");
    if (s.members().back() >= g.num_nodes()) throw input_error("partition_2means: node outside graph");
    detail::Bisector bisector(g);
    SplitMix64 rng(seed);
    auto [a, b] = bisector.split(s.members(), rng);
    return {LocalSet(std::move(a)), LocalSet(std::move(b))};
}

/// Recursive 2-means decomposition of every connected component down to
/// singletons. One high-frequency vector per split; level is the maximum
/// number of splits from a root to any singleton.
inline WaveletBasis build_basis(const Graph& g, std::uint64_t seed = 0) {
    WaveletBasis basis;
    basis.num_nodes = g.num_nodes();
    basis.graph_hash = graph_hash(g);
    basis.seed = seed;
    basis.order.reserve(g.num_nodes());

    struct Task {
        std::uint32_t begin, end, depth;
        std::int64_t parent;
    };
    std::vector<Task> stack;
    for (const auto& comp : connected_components(g)) {
        const auto b = static_cast<std::uint32_t>(basis.order.size());
        basis.order.insert(basis.order.end(), comp.begin(), comp.end());
        const auto e = static_cast<std::uint32_t>(basis.order.size());
        basis.components.emplace_back(b, e);
        if (e - b >= 2) stack.push_back({b, e, 0, -1});
    }
    std::reverse(stack.begin(), stack.end());

    detail::Bisector bisector(g);
    SplitMix64 rng(seed);
    while (!stack.empty()) {
        const Task task = stack.back();
        stack.pop_back();
        std::span<const node_id> members(basis.order.data() + task.begin, task.end - task.begin);
        auto [a, b] = bisector.split(members, rng);
        std::copy(a.begin(), a.end(), basis.order.begin() + task.begin);
        std::copy(b.begin(), b.end(), basis.order.begin() + task.begin + static_cast<std::ptrdiff_t>(a.size()));
        const auto split = static_cast<std::uint32_t>(task.begin + a.size());
        const auto index = static_cast<std::int64_t>(basis.vectors.size());
        basis.vectors.push_back({task.begin, split, task.end, task.depth, task.parent, wavelet_scale(a.size(), b.size())});
        basis.level = std::max<std::size_t>(basis.level, task.depth + 1);
        if (task.end - split >= 2) stack.push_back({split, task.end, task.depth + 1, index});
        if (split - task.begin >= 2) stack.push_back({task.begin, split, task.depth + 1, index});
    }
    return basis;
}

struct WaveletStatistic {
    double value = 0.0;
    std::size_t argmax = 0; // index into WaveletBasis::vectors
};

/// Max absolute high-frequency coefficient, O(N) per attribute via prefix sums.
inline WaveletStatistic wavelet_statistic_detail(const WaveletBasis& basis, const Attribute& y) {
    if (y.size() != basis.num_nodes) throw dimension_error("wavelet_statistic: attribute length does not match basis");
    const auto p = basis.prefix_sums(y.values());
    WaveletStatistic best;
    for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
        const auto& w = basis.vectors[k];
        const double c = std::abs(w.scale * ((p[w.split] - p[w.begin]) / double(w.size_a()) -
                                             (p[w.end] - p[w.split]) / double(w.size_b())));
        if (c > best.value) best = {c, k};
    }
    return best;
}

inline double wavelet_statistic(const WaveletBasis& basis, const Attribute& y) {
    return wavelet_statistic_detail(basis, y).value;
}

inline void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw config_error("delta must lie in (0, 1)");
}

/// Rejection threshold sqrt(log n) + sqrt(2 log(2/delta)); type-1 error <= delta.
inline double wavelet_threshold(double n, double delta) {
    if (!(n >= 2.0)) throw precondition_error("wavelet_threshold: n must be at least 2");
    check_delta(delta);
    return std::sqrt(std::log(n)) + std::sqrt(2.0 * std::log(2.0 / delta));
}

/// Sub-Gaussian upper bound on the p-value, exp(-(stat - sqrt(log n))^2 / 2),
/// reported as 1 at or below sqrt(log n).
inline double wavelet_pvalue_bound(double stat, double n) {
    if (!(n >= 2.0)) throw precondition_error("wavelet_pvalue_bound: n must be at least 2");
    const double centre = std::sqrt(std::log(n));
    if (!(stat > centre)) return 1.0;
    const double d = stat - centre;
    return std::min(1.0, std::exp(-0.5 * d * d));
}

struct DetectabilityCheck {
    double strength; // left-hand side
    double required; // right-hand side
    bool satisfied;
};

/// Sufficient signal-strength condition under which both error types of the
/// wavelet test are bounded (type-1 <= delta1, type-2 <= 1 - (1 - delta2)^4).
/// Needs the unknown truth (|C|, mu, eps), so it is a planning aid only.
inline DetectabilityCheck wavelet_detectability(double cluster_size, double n, double mu, double eps, double rho,
                                                double delta1, double delta2) {
    check_delta(delta1);
    check_delta(delta2);
    const double lhs = std::sqrt(cluster_size * (1.0 - cluster_size / n)) * (mu - eps);
    const double rhs = std::sqrt(1.0 + rho * std::log(n)) *
                       (std::sqrt(std::log(n)) + std::sqrt(2.0 * std::log(2.0 / delta1)) +
                        std::sqrt(2.0 * std::log(2.0 / delta2)));
    return {lhs, rhs, lhs >= rhs};
}

struct WaveletReport {
    double statistic = 0.0;
    double threshold = 0.0;
    double p_value_bound = 1.0;
    bool reject = false;
    std::size_t argmax_vector = 0;
};

inline WaveletReport detect_wavelet(const WaveletBasis& basis, const Attribute& y, double delta) {
    const auto stat = wavelet_statistic_detail(basis, y);
    WaveletReport r;
    r.statistic = stat.value;
    r.argmax_vector = stat.argmax;
    r.threshold = wavelet_threshold(double(basis.num_nodes), delta);
    r.p_value_bound = wavelet_pvalue_bound(stat.value, double(basis.num_nodes));
    r.reject = r.statistic > r.threshold;
    return r;
}

/// Process-wide basis cache keyed by (graph hash, seed); the basis depends on
/// the graph only, so it is built once and shared by every attribute.
class BasisCache {
public:
    std::shared_ptr<const WaveletBasis> get(const Graph& g, std::uint64_t seed) {
        const auto key = std::make_pair(graph_hash(g), seed);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end() && it->second->num_nodes == g.num_nodes())
                return it->second;
        }
        auto basis = std::make_shared<const WaveletBasis>(build_basis(g, seed));
        std::lock_guard lock(mutex_);
        return cache_.try_emplace(key, std::move(basis)).first->second;
    }

    void put(std::shared_ptr<const WaveletBasis> basis) {
        std::lock_guard lock(mutex_);
        cache_[{basis->graph_hash, basis->seed}] = std::move(basis);
    }

    void clear() {
        std::lock_guard lock(mutex_);
        cache_.clear();
    }

    static BasisCache& global() {
        static BasisCache instance;
        return instance;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const WaveletBasis>> cache_;
};

inline WaveletReport detect_wavelet(const Graph& g, const Attribute& y, double delta, std::uint64_t seed = 0) {
    require_length(g, y.size(), "detect_wavelet");
    check_delta(delta);
    return detect_wavelet(*BasisCache::global().get(g, seed), y, delta);
}

} // namespace locattr
