#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "locattr/errors.hpp"
#include "locattr/graph.hpp"

namespace locattr {

/// Directed network for s-t max-flow. Each arc may carry a capacity in the
/// reverse direction too; an undirected edge is one arc with equal forward and
/// reverse capacity.
class FlowNetwork {
public:
    struct Arc {
        node_id from;
        node_id to;
        double capacity;
        double reverse_capacity;
    };

    FlowNetwork(std::size_t num_nodes, node_id source, node_id sink)
        : num_nodes_(num_nodes), source_(source), sink_(sink) {
        if (source >= num_nodes || sink >= num_nodes) throw input_error("flow network: terminal out of range");
        if (source == sink) throw input_error("flow network: source equals sink");
    }

    std::size_t add_arc(node_id from, node_id to, double capacity, double reverse_capacity = 0.0) {
        if (from >= num_nodes_ || to >= num_nodes_) throw input_error("flow network: arc endpoint out of range");
        check_capacity(capacity);
        check_capacity(reverse_capacity);
        arcs_.push_back({from, to, capacity, reverse_capacity});
        return arcs_.size() - 1;
    }

    void set_capacity(std::size_t arc, double capacity, double reverse_capacity = 0.0) {
        check_capacity(capacity);
        check_capacity(reverse_capacity);
        arcs_[arc].capacity = capacity;
        arcs_[arc].reverse_capacity = reverse_capacity;
    }

    std::size_t num_nodes() const noexcept { return num_nodes_; }
    node_id source() const noexcept { return source_; }
    node_id sink() const noexcept { return sink_; }
    std::span<const Arc> arcs() const noexcept { return arcs_; }

private:
    static void check_capacity(double c) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw input_error("flow network: capacity must be finite and >= 0");
    }

    std::size_t num_nodes_;
    node_id source_;
    node_id sink_;
    std::vector<Arc> arcs_;
};

struct CutResult {
    double value = 0.0;
    std::vector<node_id> source_side; // terminals excluded
};

/// Dinic's blocking-flow max-flow over a fixed topology. Capacities can be
/// updated between solves without rebuilding the adjacency structure.
class DinicMaxFlow {
public:
    explicit DinicMaxFlow(const FlowNetwork& net)
        : n_(net.num_nodes()), s_(net.source()), t_(net.sink()), m_(net.arcs().size()) {
        head_.assign(2 * m_, 0);
        base_.assign(2 * m_, 0.0);
        offsets_.assign(n_ + 1, 0);
        for (const auto& a : net.arcs()) {
            ++offsets_[a.from + 1];
            ++offsets_[a.to + 1];
        }
        for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
        out_.resize(2 * m_);
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t k = 0; k < m_; ++k) {
            const auto& a = net.arcs()[k];
            head_[2 * k] = a.to;
            head_[2 * k + 1] = a.from;
            base_[2 * k] = a.capacity;
            base_[2 * k + 1] = a.reverse_capacity;
            out_[cursor[a.from]++] = static_cast<std::uint32_t>(2 * k);
            out_[cursor[a.to]++] = static_cast<std::uint32_t>(2 * k + 1);
        }
        residual_.resize(2 * m_);
        level_.resize(n_);
        cursor_.resize(n_);
        queue_.reserve(n_);
        path_.reserve(n_);
    }

    void set_capacity(std::size_t arc, double capacity, double reverse_capacity = 0.0) noexcept {
        base_[2 * arc] = capacity;
        base_[2 * arc + 1] = reverse_capacity;
    }

    std::size_t num_nodes() const noexcept { return n_; }

    CutResult solve() {
        residual_ = base_;
        double maxcap = 0.0;
        for (double c : base_) maxcap = std::max(maxcap, c);
        eps_ = 1e-12 * (1.0 + maxcap);

        double flow = 0.0;
        while (build_levels()) {
            for (std::size_t v = 0; v < n_; ++v) cursor_[v] = offsets_[v];
            flow += blocking_flow();
        }

        CutResult cut;
        cut.value = flow;
        // build_levels left level_ >= 0 exactly on the residual-reachable set
        double crossing = 0.0;
        for (std::size_t k = 0; k < m_; ++k) {
            const node_id from = head_[2 * k + 1], to = head_[2 * k];
            const bool fs = level_[from] >= 0, ts = level_[to] >= 0;
            if (fs && !ts) crossing += base_[2 * k];
            if (ts && !fs) crossing += base_[2 * k + 1];
        }
        if (std::abs(crossing - flow) > 1e-9 * (1.0 + flow))
            throw numerical_error("min_cut: flow value " + std::to_string(flow) +
                                  " disagrees with cut capacity " + std::to_string(crossing));
        for (std::size_t v = 0; v < n_; ++v)
            if (level_[v] >= 0 && v != s_ && v != t_) cut.source_side.push_back(static_cast<node_id>(v));
        return cut;
    }

    /// Residual-reachability of node v after the last solve().
    bool on_source_side(node_id v) const noexcept { return level_[v] >= 0; }

private:
    bool build_levels() {
        std::fill(level_.begin(), level_.end(), -1);
        queue_.clear();
        queue_.push_back(static_cast<node_id>(s_));
        level_[s_] = 0;
        for (std::size_t i = 0; i < queue_.size(); ++i) {
            const node_id v = queue_[i];
            for (std::size_t p = offsets_[v]; p < offsets_[v + 1]; ++p) {
                const auto a = out_[p];
                const node_id w = head_[a];
                if (level_[w] < 0 && residual_[a] > eps_) {
                    level_[w] = level_[v] + 1;
                    queue_.push_back(w);
                }
            }
        }
        return level_[t_] >= 0;
    }

    double blocking_flow() {
        double total = 0.0;
        path_.clear();
        node_id v = static_cast<node_id>(s_);
        for (;;) {
            if (v == t_) {
                double bottleneck = std::numeric_limits<double>::infinity();
                for (auto a : path_) bottleneck = std::min(bottleneck, residual_[a]);
                std::size_t cut_at = path_.size();
                for (std::size_t i = 0; i < path_.size(); ++i) {
                    const auto a = path_[i];
                    residual_[a] -= bottleneck;
                    residual_[a ^ 1U] += bottleneck;
                    if (residual_[a] <= eps_ && cut_at == path_.size()) cut_at = i;
                }
                total += bottleneck;
                path_.resize(cut_at);
                v = path_.empty() ? static_cast<node_id>(s_) : head_[path_.back()];
                continue;
            }
            bool advanced = false;
            for (auto& p = cursor_[v]; p < offsets_[v + 1]; ++p) {
                const auto a = out_[p];
                const node_id w = head_[a];
                if (residual_[a] > eps_ && level_[w] == level_[v] + 1) {
                    path_.push_back(a);
                    v = w;
                    advanced = true;
                    break;
                }
            }
            if (advanced) continue;
            if (v == s_) break;
            level_[v] = -2; // dead end for this phase
            const auto a = path_.back();
            path_.pop_back();
            v = head_[a ^ 1U];
            ++cursor_[v];
        }
        return total;
    }

    std::size_t n_, s_, t_, m_;
    std::vector<node_id> head_;
    std::vector<double> base_;
    std::vector<double> residual_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> out_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
    std::vector<node_id> queue_;
    std::vector<std::uint32_t> path_;
    double eps_ = 0.0;
};


/// Boykov-Kolmogorov augmenting-path max-flow with reused search trees.
/// Same interface and same (minimal) source side as DinicMaxFlow; usually
/// several times faster on the short-path, grid-like networks built from
/// graph-cut energies.
class BkMaxFlow {
public:
    explicit BkMaxFlow(const FlowNetwork& net)
        : n_(net.num_nodes()), s_(net.source()), t_(net.sink()), m_(net.arcs().size()) {
        base_fwd_.resize(m_);
        base_rev_.resize(m_);
        arc_slot_.assign(m_, none);
        from_.resize(m_);
        to_.resize(m_);
        offsets_.assign(n_ + 1, 0);
        for (std::size_t k = 0; k < m_; ++k) {
            const auto& a = net.arcs()[k];
            from_[k] = a.from;
            to_[k] = a.to;
            base_fwd_[k] = a.capacity;
            base_rev_[k] = a.reverse_capacity;
            if (!terminal(a.from) && !terminal(a.to) && a.from != a.to) {
                ++offsets_[a.from + 1];
                ++offsets_[a.to + 1];
            }
        }
        for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
        const std::size_t slots = offsets_[n_];
        head_.resize(slots);
        rcap_.resize(slots);
        sister_.resize(slots);
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t k = 0; k < m_; ++k) {
            if (terminal(from_[k]) || terminal(to_[k]) || from_[k] == to_[k]) continue;
            const auto p = static_cast<std::uint32_t>(cursor[from_[k]]++);
            const auto q = static_cast<std::uint32_t>(cursor[to_[k]]++);
            head_[p] = to_[k];
            head_[q] = from_[k];
            arc_slot_[k] = p;
            sister_[p] = q;
            sister_[q] = p;
        }
        tr_cap_.resize(n_);
        src_.resize(n_);
        snk_.resize(n_);
        parent_.resize(n_);
        is_sink_.resize(n_);
        ts_.resize(n_);
        dist_.resize(n_);
        in_queue_.resize(n_);
        source_side_.resize(n_);
    }

    void set_capacity(std::size_t arc, double capacity, double reverse_capacity = 0.0) noexcept {
        base_fwd_[arc] = capacity;
        base_rev_[arc] = reverse_capacity;
    }

    std::size_t num_nodes() const noexcept { return n_; }

    CutResult solve() {
        double maxcap = 0.0;
        for (std::size_t k = 0; k < m_; ++k) maxcap = std::max({maxcap, base_fwd_[k], base_rev_[k]});
        eps_ = 1e-12 * (1.0 + maxcap);

        double flow = 0.0;
        auto& src = src_;
        auto& snk = snk_;
        std::fill(src.begin(), src.end(), 0.0);
        std::fill(snk.begin(), snk.end(), 0.0);
        for (std::size_t k = 0; k < m_; ++k) {
            const node_id u = from_[k], v = to_[k];
            if (arc_slot_[k] != none) {
                rcap_[arc_slot_[k]] = base_fwd_[k];
                rcap_[sister_[arc_slot_[k]]] = base_rev_[k];
                continue;
            }
            if (u == s_ && v == t_) flow += base_fwd_[k];
            else if (u == t_ && v == s_) flow += base_rev_[k];
            else if (u == s_ && !terminal(v)) src[v] += base_fwd_[k];
            else if (v == s_ && !terminal(u)) src[u] += base_rev_[k];
            else if (v == t_ && !terminal(u)) snk[u] += base_fwd_[k];
            else if (u == t_ && !terminal(v)) snk[v] += base_rev_[k];
        }

        queue_.clear();
        qhead_ = 0;
        orphans_.clear();
        time_ = 0;
        for (std::size_t v = 0; v < n_; ++v) {
            in_queue_[v] = 0;
            ts_[v] = 0;
            if (terminal(static_cast<node_id>(v))) {
                parent_[v] = free_node;
                tr_cap_[v] = 0.0;
                continue;
            }
            flow += std::min(src[v], snk[v]);
            tr_cap_[v] = src[v] - snk[v];
            if (tr_cap_[v] > eps_ || tr_cap_[v] < -eps_) {
                is_sink_[v] = tr_cap_[v] < 0.0;
                parent_[v] = terminal_parent;
                dist_[v] = 1;
                activate(static_cast<node_id>(v));
            } else {
                tr_cap_[v] = 0.0;
                parent_[v] = free_node;
            }
        }
        flow += run();

        CutResult cut;
        cut.value = flow;
        for (std::size_t v = 0; v < n_; ++v)
            source_side_[v] = v == s_ || (!terminal(static_cast<node_id>(v)) && parent_[v] != free_node && !is_sink_[v]);
        double crossing = 0.0;
        for (std::size_t k = 0; k < m_; ++k) {
            const bool fs = source_side_[from_[k]], ts = source_side_[to_[k]];
            if (fs && !ts) crossing += base_fwd_[k];
            if (ts && !fs) crossing += base_rev_[k];
        }
        if (std::abs(crossing - flow) > 1e-9 * (1.0 + flow))
            throw numerical_error("min_cut: flow value " + std::to_string(flow) +
                                  " disagrees with cut capacity " + std::to_string(crossing));
        for (std::size_t v = 0; v < n_; ++v)
            if (source_side_[v] && v != s_) cut.source_side.push_back(static_cast<node_id>(v));
        return cut;
    }

    bool on_source_side(node_id v) const noexcept { return source_side_[v]; }

private:
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    static constexpr std::uint32_t free_node = none;
    static constexpr std::uint32_t terminal_parent = none - 1;
    static constexpr std::uint32_t orphan = none - 2;
    static constexpr std::uint32_t far = std::numeric_limits<std::uint32_t>::max();

    bool terminal(node_id v) const noexcept { return v == s_ || v == t_; }

    void activate(node_id v) {
        if (in_queue_[v]) return;
        in_queue_[v] = 1;
        queue_.push_back(v);
    }

    node_id next_active() {
        while (qhead_ < queue_.size()) {
            const node_id v = queue_[qhead_++];
            in_queue_[v] = 0;
            if (qhead_ == queue_.size()) {
                queue_.clear();
                qhead_ = 0;
            }
            if (parent_[v] != free_node) return v;
        }
        return static_cast<node_id>(none);
    }

    // Parent arcs point from a node towards its parent.
    double run() {
        double flow = 0.0;
        node_id current = static_cast<node_id>(none);
        for (;;) {
            node_id i = current;
            if (i != none) {
                in_queue_[i] = 0;
                if (parent_[i] == free_node) i = static_cast<node_id>(none);
            }
            if (i == none) {
                i = next_active();
                if (i == none) break;
            }
            std::uint32_t bridge = none; // arc from an S-tree node to a T-tree node
            if (!is_sink_[i]) {
                for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
                    if (rcap_[p] <= eps_) continue;
                    const node_id j = head_[p];
                    if (parent_[j] == free_node) {
                        is_sink_[j] = 0;
                        parent_[j] = sister_[p];
                        ts_[j] = ts_[i];
                        dist_[j] = dist_[i] + 1;
                        activate(j);
                    } else if (is_sink_[j]) {
                        bridge = static_cast<std::uint32_t>(p);
                        break;
                    } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
                        parent_[j] = sister_[p];
                        ts_[j] = ts_[i];
                        dist_[j] = dist_[i] + 1;
                    }
                }
            } else {
                for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
                    const auto q = sister_[p];
                    if (rcap_[q] <= eps_) continue;
                    const node_id j = head_[p];
                    if (parent_[j] == free_node) {
                        is_sink_[j] = 1;
                        parent_[j] = q;
                        ts_[j] = ts_[i];
                        dist_[j] = dist_[i] + 1;
                        activate(j);
                    } else if (!is_sink_[j]) {
                        bridge = q;
                        break;
                    } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
                        parent_[j] = q;
                        ts_[j] = ts_[i];
                        dist_[j] = dist_[i] + 1;
                    }
                }
            }
            ++time_;
            if (bridge != none) {
                in_queue_[i] = 1; // keep i current; nobody else may enqueue it
                current = i;
                flow += augment(bridge);
                adopt_orphans();
            } else {
                current = static_cast<node_id>(none);
            }
        }
        return flow;
    }

    double augment(std::uint32_t bridge) {
        double b = rcap_[bridge];
        node_id i = head_[sister_[bridge]];
        for (std::uint32_t a; (a = parent_[i]) != terminal_parent; i = head_[a]) b = std::min(b, rcap_[sister_[a]]);
        b = std::min(b, tr_cap_[i]);
        i = head_[bridge];
        for (std::uint32_t a; (a = parent_[i]) != terminal_parent; i = head_[a]) b = std::min(b, rcap_[a]);
        b = std::min(b, -tr_cap_[i]);

        rcap_[sister_[bridge]] += b;
        rcap_[bridge] -= b;
        for (i = head_[sister_[bridge]];;) {
            const std::uint32_t a = parent_[i];
            if (a == terminal_parent) {
                tr_cap_[i] -= b;
                if (tr_cap_[i] <= eps_) {
                    tr_cap_[i] = 0.0;
                    make_orphan(i);
                }
                break;
            }
            rcap_[a] += b;
            rcap_[sister_[a]] -= b;
            const node_id up = head_[a];
            if (rcap_[sister_[a]] <= eps_) make_orphan(i);
            i = up;
        }
        for (i = head_[bridge];;) {
            const std::uint32_t a = parent_[i];
            if (a == terminal_parent) {
                tr_cap_[i] += b;
                if (tr_cap_[i] >= -eps_) {
                    tr_cap_[i] = 0.0;
                    make_orphan(i);
                }
                break;
            }
            rcap_[sister_[a]] += b;
            rcap_[a] -= b;
            const node_id up = head_[a];
            if (rcap_[a] <= eps_) make_orphan(i);
            i = up;
        }
        return b;
    }

    void make_orphan(node_id i) {
        parent_[i] = orphan;
        orphans_.push_back(i);
    }

    void adopt_orphans() {
        for (std::size_t k = 0; k < orphans_.size(); ++k) {
            const node_id i = orphans_[k];
            const bool sink_tree = is_sink_[i];
            std::uint32_t best = none;
            std::uint32_t best_d = far;
            for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
                // residual towards i for the source tree, away from i for the sink tree
                const double r = sink_tree ? rcap_[p] : rcap_[sister_[p]];
                if (r <= eps_) continue;
                node_id j = head_[p];
                if (bool(is_sink_[j]) != sink_tree || parent_[j] == free_node) continue;
                std::uint32_t d = 0;
                for (;;) {
                    if (ts_[j] == time_) {
                        d += dist_[j];
                        break;
                    }
                    const std::uint32_t a = parent_[j];
                    ++d;
                    if (a == terminal_parent) {
                        ts_[j] = time_;
                        dist_[j] = 1;
                        break;
                    }
                    if (a == orphan) {
                        d = far;
                        break;
                    }
                    j = head_[a];
                }
                if (d == far) continue;
                if (d < best_d) {
                    best = static_cast<std::uint32_t>(p);
                    best_d = d;
                }
                for (j = head_[p]; ts_[j] != time_; j = head_[parent_[j]]) {
                    ts_[j] = time_;
                    dist_[j] = d--;
                }
            }
            if (best != none) {
                parent_[i] = best;
                ts_[i] = time_;
                dist_[i] = best_d + 1;
                continue;
            }
            parent_[i] = free_node;
            for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
                const node_id j = head_[p];
                const std::uint32_t a = parent_[j];
                if (bool(is_sink_[j]) != sink_tree || a == free_node) continue;
                const double r = sink_tree ? rcap_[p] : rcap_[sister_[p]];
                if (r > eps_) activate(j);
                if (a != terminal_parent && a != orphan && head_[a] == i) make_orphan(j);
            }
        }
        orphans_.clear();
    }

    std::size_t n_, s_, t_, m_;
    std::vector<node_id> from_, to_;
    std::vector<double> base_fwd_, base_rev_;
    std::vector<std::uint32_t> arc_slot_;
    std::vector<std::size_t> offsets_;
    std::vector<node_id> head_;
    std::vector<std::uint32_t> sister_;
    std::vector<double> rcap_;
    std::vector<double> tr_cap_;
    std::vector<double> src_, snk_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> is_sink_;
    std::vector<std::uint32_t> ts_;
    std::vector<std::uint32_t> dist_;
    std::vector<std::uint8_t> in_queue_;
    std::vector<std::uint8_t> source_side_;
    std::vector<node_id> queue_;
    std::size_t qhead_ = 0;
    std::vector<node_id> orphans_;
    std::uint32_t time_ = 0;
    double eps_ = 0.0;
};

using MaxFlowSolver = BkMaxFlow;

/// Exact max-flow value and the canonical minimum cut (nodes reachable from
/// the source in the final residual graph).
inline CutResult min_cut(const FlowNetwork& net) {
    MaxFlowSolver solver(net);
    return solver.solve();
}

inline CutResult min_cut_dinic(const FlowNetwork& net) {
    DinicMaxFlow solver(net);
    return solver.solve();
}

struct PseudoBooleanResult {
    std::vector<std::uint8_t> x;
    double objective = 0.0;
};

/// Objective sum_i unary_i x_i + pair_weight * sum_e w_e |x_u - x_v|.
inline double pseudo_boolean_objective(const Graph& g, std::span<const double> unary, double pair_weight,
                                       std::span<const std::uint8_t> x) {
    double obj = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) obj += unary[i];
    if (pair_weight != 0.0)
        for (const auto& e : g.edges())
            if (x[e.u] != x[e.v]) obj += pair_weight * e.w;
    return obj;
}

/// Reusable graph-cut minimizer of sum_i unary_i x_i + eta2 * TV1(x) over
/// binary x on a fixed graph. x_i = 1 iff node i lies on the source side.
class PseudoBooleanSolver {
public:
    explicit PseudoBooleanSolver(const Graph& g) : g_(&g), solver_(make_network(g)) {}

    PseudoBooleanResult solve(std::span<const double> unary, double pair_weight) {
        require_length(*g_, unary.size(), "pseudo_boolean_min");
        if (!(pair_weight >= 0.0) || !std::isfinite(pair_weight))
            throw precondition_error("pseudo_boolean_min: pair weight must be >= 0 (submodular)");
        const std::size_t n = g_->num_nodes();
        for (std::size_t k = 0; k < g_->num_edges(); ++k) {
            const double c = pair_weight * g_->edges()[k].w;
            solver_.set_capacity(k, c, c);
        }
        const std::size_t base = g_->num_edges();
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(unary[i])) throw input_error("pseudo_boolean_min: non-finite unary cost");
            solver_.set_capacity(base + 2 * i, std::max(0.0, -unary[i]));
            solver_.set_capacity(base + 2 * i + 1, std::max(0.0, unary[i]));
        }
        solver_.solve();
        PseudoBooleanResult out;
        out.x.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.x[i] = solver_.on_source_side(static_cast<node_id>(i)) ? 1 : 0;
        out.objective = pseudo_boolean_objective(*g_, unary, pair_weight, out.x);
        return out;
    }

private:
    static FlowNetwork make_network(const Graph& g) {
        const std::size_t n = g.num_nodes();
        FlowNetwork net(n + 2, static_cast<node_id>(n), static_cast<node_id>(n + 1));
        for (const auto& e : g.edges()) net.add_arc(e.u, e.v, 0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            net.add_arc(static_cast<node_id>(n), static_cast<node_id>(i), 0.0);
            net.add_arc(static_cast<node_id>(i), static_cast<node_id>(n + 1), 0.0);
        }
        return net;
    }

    const Graph* g_;
    MaxFlowSolver solver_;
};

/// Exact minimizer of sum_i unary_i x_i + pair_weight * sum_e w_e |x_u - x_v|.
inline PseudoBooleanResult pseudo_boolean_min(const Graph& g, std::span<const double> unary, double pair_weight) {
    PseudoBooleanSolver solver(g);
    return solver.solve(unary, pair_weight);
}

/// Reads a DIMACS max-flow problem ("p max N M", "n id s|t", "a u v cap";
/// 1-based ids).
inline FlowNetwork read_dimacs(std::istream& in) {
    std::string line;
    std::size_t n = 0, lineno = 0;
    long long source = -1, sink = -1;
    struct Pending {
        long long u, v;
        double c;
    };
    std::vector<Pending> arcs;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ss(line);
        char kind = 0;
        ss >> kind;
        auto fail = [&](const std::string& why) {
            throw input_error("dimacs line " + std::to_string(lineno) + ": " + why);
        };
        if (kind == 'p') {
            std::string what;
            std::size_t m = 0;
            if (!(ss >> what >> n >> m) || what != "max") fail("expected 'p max N M'");
        } else if (kind == 'n') {
            long long id = 0;
            char role = 0;
            if (!(ss >> id >> role)) fail("expected 'n id s|t'");
            if (role == 's') source = id - 1;
            else if (role == 't') sink = id - 1;
            else fail("terminal role must be s or t");
        } else if (kind == 'a') {
            Pending p{};
            if (!(ss >> p.u >> p.v >> p.c)) fail("expected 'a u v capacity'");
            arcs.push_back({p.u - 1, p.v - 1, p.c});
        } else {
            fail("unknown record");
        }
    }
    if (n == 0 || source < 0 || sink < 0) throw input_error("dimacs: missing problem or terminal line");
    FlowNetwork net(n, static_cast<node_id>(source), static_cast<node_id>(sink));
    for (const auto& a : arcs) {
        if (a.u < 0 || a.v < 0) throw input_error("dimacs: arc endpoint out of range");
        net.add_arc(static_cast<node_id>(a.u), static_cast<node_id>(a.v), a.c);
    }
    return net;
}

} // namespace locattr
