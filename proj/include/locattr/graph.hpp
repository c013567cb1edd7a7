#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locattr/errors.hpp"

namespace locattr {

using node_id = std::uint32_t;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Edge {
    node_id u;
    node_id v;
    double w = 1.0;
};

struct Neighbor {
    node_id node;
    double weight;
    std::uint32_t edge;
};

/// Weighted undirected graph. Edges are stored once with u < v; a CSR
/// neighbor index gives O(deg) traversal. Immutable after construction.
class Graph {
public:
    Graph() = default;

    Graph(std::size_t num_nodes, std::vector<Edge> edges) : n_(num_nodes), edges_(std::move(edges)) {
        if (num_nodes > std::numeric_limits<node_id>::max())
            throw input_error("graph: too many nodes");
        for (auto& e : edges_) {
            if (e.u >= n_ || e.v >= n_)
                throw input_error("graph: edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") references a node outside [0, " + std::to_string(n_) + ")");
            if (e.u == e.v) throw input_error("graph: self-loop at node " + std::to_string(e.u));
            if (!(e.w > 0.0) || !std::isfinite(e.w))
                throw input_error("graph: edge weight must be positive and finite");
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return a.u != b.u ? a.u < b.u : a.v < b.v;
        });
        for (std::size_t i = 1; i < edges_.size(); ++i)
            if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
                throw input_error("graph: duplicate edge (" + std::to_string(edges_[i].u) + ", " +
                                  std::to_string(edges_[i].v) + ")");

        offsets_.assign(n_ + 1, 0);
        for (const auto& e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        adjacency_.resize(2 * edges_.size());
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            adjacency_[cursor[e.u]++] = {e.v, e.w, i};
            adjacency_[cursor[e.v]++] = {e.u, e.w, i};
        }
    }

    std::size_t num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const Neighbor> neighbors(node_id v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    std::size_t degree(node_id v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    double weighted_degree(node_id v) const noexcept {
        double d = 0.0;
        for (const auto& nb : neighbors(v)) d += nb.weight;
        return d;
    }

    double total_weight() const noexcept {
        double s = 0.0;
        for (const auto& e : edges_) s += e.w;
        return s;
    }

    bool unit_weights() const noexcept {
        return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w == 1.0; });
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
};

/// Sorted, duplicate-free set of node ids.
class LocalSet {
public:
    LocalSet() = default;

    explicit LocalSet(std::vector<node_id> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
            throw input_error("local set: duplicate node id");
    }

    LocalSet(std::vector<node_id> members, std::size_t num_nodes) : LocalSet(std::move(members)) {
        if (!members_.empty() && members_.back() >= num_nodes)
            throw input_error("local set: node id " + std::to_string(members_.back()) + " out of range");
    }

    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(node_id v) const noexcept { return std::binary_search(members_.begin(), members_.end(), v); }
    std::span<const node_id> members() const noexcept { return members_; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    friend bool operator==(const LocalSet&, const LocalSet&) = default;

private:
    std::vector<node_id> members_;
};

/// Binary node-indexed vector: an observed attribute y or an indicator 1_C.
class Attribute {
public:
    Attribute() = default;

    explicit Attribute(std::vector<std::uint8_t> values) : values_(std::move(values)) {
        for (auto v : values_)
            if (v > 1) throw input_error("attribute: entries must be 0 or 1");
    }

    static Attribute zeros(std::size_t n) { return Attribute(std::vector<std::uint8_t>(n, 0)); }
    static Attribute ones(std::size_t n) { return Attribute(std::vector<std::uint8_t>(n, 1)); }

    static Attribute indicator(const LocalSet& c, std::size_t n) {
        std::vector<std::uint8_t> v(n, 0);
        for (auto id : c) {
            if (id >= n) throw input_error("attribute: set member outside graph");
            v[id] = 1;
        }
        return Attribute(std::move(v));
    }

    std::size_t size() const noexcept { return values_.size(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const std::uint8_t> values() const noexcept { return values_; }

    std::size_t count() const noexcept {
        return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
    }

    double mean() const noexcept { return values_.empty() ? 0.0 : double(count()) / double(size()); }

    Attribute complement() const {
        std::vector<std::uint8_t> v(values_.size());
        std::transform(values_.begin(), values_.end(), v.begin(), [](std::uint8_t b) { return std::uint8_t(1 - b); });
        return Attribute(std::move(v));
    }

    std::vector<double> as_real() const { return {values_.begin(), values_.end()}; }

    LocalSet support() const {
        std::vector<node_id> s;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i]) s.push_back(static_cast<node_id>(i));
        return LocalSet(std::move(s));
    }

    friend bool operator==(const Attribute&, const Attribute&) = default;

private:
    std::vector<std::uint8_t> values_;
};

inline void require_length(const Graph& g, std::size_t len, const char* what) {
    if (len != g.num_nodes())
        throw dimension_error(std::string(what) + ": length " + std::to_string(len) +
                              " does not match graph size " + std::to_string(g.num_nodes()));
}

/// Applies the edge-by-node incidence operator: out_e = w_e (x_u - x_v), u < v.
inline std::vector<double> incidence_apply(const Graph& g, std::span<const double> x) {
    require_length(g, x.size(), "incidence_apply");
    std::vector<double> out;
    out.reserve(g.num_edges());
    for (const auto& e : g.edges()) out.push_back(e.w * (x[e.u] - x[e.v]));
    return out;
}

enum class Norm { l0 = 0, l1 = 1 };

inline Norm norm_from_int(int p) {
    if (p == 0) return Norm::l0;
    if (p == 1) return Norm::l1;
    throw config_error("total_variation: unsupported norm p=" + std::to_string(p) + " (expected 0 or 1)");
}

/// ||Delta x||_p. For p = 0 counts edges with a nonzero difference; for p = 1
/// sums weighted absolute differences.
inline double total_variation(const Graph& g, std::span<const double> x, Norm p) {
    require_length(g, x.size(), "total_variation");
    double tv = 0.0;
    for (const auto& e : g.edges()) {
        const double d = e.w * (x[e.u] - x[e.v]);
        if (p == Norm::l0)
            tv += d != 0.0 ? 1.0 : 0.0;
        else
            tv += std::abs(d);
    }
    return tv;
}

inline double total_variation(const Graph& g, std::span<const double> x, int p) {
    return total_variation(g, x, norm_from_int(p));
}

inline double total_variation(const Graph& g, const Attribute& a, Norm p) {
    require_length(g, a.size(), "total_variation");
    double tv = 0.0;
    for (const auto& e : g.edges())
        if (a[e.u] != a[e.v]) tv += p == Norm::l0 ? 1.0 : e.w;
    return tv;
}

inline double total_variation(const Graph& g, const Attribute& a, int p) {
    return total_variation(g, a, norm_from_int(p));
}

enum class Distance { hop, weighted };

/// Single-source shortest paths. Hop mode is BFS; weighted mode uses edge
/// length 1/w so strong ties are short. Unreachable nodes get +infinity.
inline std::vector<double> geodesic_distances(const Graph& g, node_id source, Distance mode = Distance::hop) {
    if (source >= g.num_nodes()) throw input_error("geodesic_distances: source out of range");
    std::vector<double> dist(g.num_nodes(), infinity);
    dist[source] = 0.0;
    if (mode == Distance::hop) {
        std::vector<node_id> queue{source};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const node_id v = queue[head];
            for (const auto& nb : g.neighbors(v))
                if (dist[nb.node] == infinity) {
                    dist[nb.node] = dist[v] + 1.0;
                    queue.push_back(nb.node);
                }
        }
        return dist;
    }
    using item = std::pair<double, node_id>;
    std::priority_queue<item, std::vector<item>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (const auto& nb : g.neighbors(v)) {
            const double nd = d + 1.0 / nb.weight;
            if (nd < dist[nb.node]) {
                dist[nb.node] = nd;
                heap.emplace(nd, nb.node);
            }
        }
    }
    return dist;
}

/// All nodes within k hops of head.
inline LocalSet ball(const Graph& g, node_id head, std::size_t k) {
    if (head >= g.num_nodes()) throw input_error("ball: head out of range");
    std::vector<std::size_t> dist(g.num_nodes(), std::numeric_limits<std::size_t>::max());
    std::vector<node_id> members{head};
    dist[head] = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const node_id v = members[i];
        if (dist[v] == k) continue;
        for (const auto& nb : g.neighbors(v))
            if (dist[nb.node] == std::numeric_limits<std::size_t>::max()) {
                dist[nb.node] = dist[v] + 1;
                members.push_back(nb.node);
            }
    }
    return LocalSet(std::move(members));
}

/// Component label per node, labels numbered in order of smallest member.
inline std::vector<std::uint32_t> component_labels(const Graph& g, std::size_t* count = nullptr) {
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(g.num_nodes(), unset);
    std::uint32_t next = 0;
    std::vector<node_id> stack;
    for (node_id s = 0; s < g.num_nodes(); ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.assign(1, s);
        while (!stack.empty()) {
            const node_id v = stack.back();
            stack.pop_back();
            for (const auto& nb : g.neighbors(v))
                if (label[nb.node] == unset) {
                    label[nb.node] = next;
                    stack.push_back(nb.node);
                }
        }
        ++next;
    }
    if (count) *count = next;
    return label;
}

inline std::vector<LocalSet> connected_components(const Graph& g) {
    std::size_t count = 0;
    const auto label = component_labels(g, &count);
    std::vector<std::vector<node_id>> groups(count);
    for (node_id v = 0; v < g.num_nodes(); ++v) groups[label[v]].push_back(v);
    std::vector<LocalSet> out;
    out.reserve(count);
    for (auto& grp : groups) out.emplace_back(std::move(grp));
    return out;
}

inline bool is_connected(const Graph& g) {
    std::size_t count = 0;
    component_labels(g, &count);
    return count <= 1;
}

/// FNV-1a over the node count and canonical edge list (weights by bit pattern).
inline std::uint64_t graph_hash(const Graph& g) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    feed(g.num_nodes());
    feed(g.num_edges());
    for (const auto& e : g.edges()) {
        feed(e.u);
        feed(e.v);
        feed(std::bit_cast<std::uint64_t>(e.w));
    }
    return h;
}

struct Point {
    std::int64_t id;
    double x;
    double y;
};

/// k-nearest-neighbor graph with union symmetrization and unit weights.
/// Node i is the i-th point in ascending id order; distance ties go to the
/// lower id.
inline Graph knn_graph(std::span<const Point> points, std::size_t k) {
    if (k < 1) throw config_error("knn_graph: k must be at least 1");
    if (points.size() < 2) throw input_error("knn_graph: need at least two points");
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!std::isfinite(pts[i].x) || !std::isfinite(pts[i].y))
            throw input_error("knn_graph: non-finite coordinate for id " + std::to_string(pts[i].id));
        if (i > 0 && pts[i].id == pts[i - 1].id)
            throw input_error("knn_graph: duplicate point id " + std::to_string(pts[i].id));
    }
    const std::size_t n = pts.size();
    const std::size_t kk = std::min(k, n - 1);
    std::vector<std::pair<node_id, node_id>> pairs;
    pairs.reserve(n * kk);
    std::vector<std::pair<double, node_id>> cand(n - 1);
    for (node_id i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (node_id j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
            cand[c++] = {dx * dx + dy * dy, j};
        }
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk), cand.end());
        for (std::size_t r = 0; r < kk; ++r) {
            const node_id j = cand[r].second;
            pairs.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
    return Graph(n, std::move(edges));
}

/// 2-D lattice graph, row-major ids, unit weights.
inline Graph grid_graph(std::size_t rows, std::size_t cols) {
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const auto v = static_cast<node_id>(r * cols + c);
            if (c + 1 < cols) edges.push_back({v, v + 1, 1.0});
            if (r + 1 < rows) edges.push_back({v, static_cast<node_id>(v + cols), 1.0});
        }
    return Graph(rows * cols, std::move(edges));
}

} // namespace locattr
