#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locattr/detail/simplex.hpp"
#include "locattr/errors.hpp"
#include "locattr/graph.hpp"
#include "locattr/maxflow.hpp"
#include "locattr/rng.hpp"
#include "locattr/wavelet.hpp"

namespace locattr {

/// KL divergence between Bernoulli(a) and Bernoulli(b), natural log, 0 log 0 = 0.
inline double bernoulli_kl(double a, double b) {
    if (!(b > 0.0 && b < 1.0))
        throw degenerate_background_error("bernoulli_kl: background rate must lie strictly inside (0, 1)");
    if (!(a >= 0.0 && a <= 1.0)) throw precondition_error("bernoulli_kl: first argument must lie in [0, 1]");
    double kl = 0.0;
    if (a > 0.0) kl += a * std::log(a / b);
    if (a < 1.0) kl += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
    return std::max(0.0, kl);
}

inline double background_rate(const Attribute& y) {
    const double ybar = y.mean();
    if (!(ybar > 0.0 && ybar < 1.0))
        throw degenerate_background_error("scan statistic: attribute is all-zeros or all-ones");
    return ybar;
}

/// t KL(x'y/t || 1'y/N) when the candidate mean x'y/t exceeds the background
/// mean, 0 otherwise (only elevated activation counts as evidence).
inline double scan_objective(const Attribute& y, std::span<const double> x, double t) {
    if (x.size() != y.size()) throw dimension_error("scan_objective: x and y lengths differ");
    if (!(t >= 1.0)) throw precondition_error("scan_objective: t must be at least 1");
    const double ybar = background_rate(y);
    double xy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i]) xy += x[i];
    const double a = xy / t;
    if (!(a > ybar)) return 0.0;
    return t * bernoulli_kl(std::min(1.0, a), ybar);
}

struct AnnealingSchedule {
    double initial_temperature = 1.0;
    double cooling = 0.95;
    std::size_t steps = 300;
    double proposal_scale = 0.3;
    std::uint64_t seed = 0;
    std::optional<double> initial_eta1; // defaults to the background rate
    double initial_eta2 = 1.0;
};

struct ScanConfig {
    double rho = 0.0;
    std::vector<double> t_grid; // empty: default_t_grid
    AnnealingSchedule annealing;
    double lp_tolerance = 1e-7;
    double delta = 0.05;
};

/// Powers of two up to N/2, plus the observed activation count.
inline std::vector<double> default_t_grid(std::size_t n, std::size_t activated) {
    std::vector<double> grid;
    for (std::size_t t = 1; t <= std::max<std::size_t>(1, n / 2); t *= 2) grid.push_back(double(t));
    if (activated >= 1 && activated <= n) grid.push_back(double(activated));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline void validate(const ScanConfig& cfg, std::size_t n) {
    if (!(cfg.rho >= 0.0) || !std::isfinite(cfg.rho)) throw config_error("scan: rho must be finite and >= 0");
    for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
        const double t = cfg.t_grid[i];
        if (!(t >= 1.0 && t <= double(n))) throw config_error("scan: t_grid entries must lie in [1, N]");
        if (i > 0 && !(t > cfg.t_grid[i - 1])) throw config_error("scan: t_grid must be strictly increasing");
    }
    const auto& a = cfg.annealing;
    if (!(a.cooling > 0.0 && a.cooling < 1.0)) throw config_error("scan: cooling ratio must lie in (0, 1)");
    if (!(a.initial_temperature > 0.0)) throw config_error("scan: initial temperature must be positive");
    if (!(a.proposal_scale > 0.0)) throw config_error("scan: proposal scale must be positive");
    if (a.initial_eta1 && !(*a.initial_eta1 > 0.0)) throw config_error("scan: initial eta1 must be positive");
    if (!(a.initial_eta2 > 0.0)) throw config_error("scan: initial eta2 must be positive");
    if (!(cfg.lp_tolerance > 0.0)) throw config_error("scan: lp tolerance must be positive");
    check_delta(cfg.delta);
}

enum class ScanVariant { lgss, cgss };

inline const char* to_string(ScanVariant v) { return v == ScanVariant::lgss ? "lgss" : "cgss"; }

struct ScanSolution {
    std::vector<double> x;
    double t = 0.0;
    double objective = 0.0;
    bool feasible = true;
};

struct ScanReport {
    ScanVariant variant = ScanVariant::lgss;
    double statistic = 0.0;
    double threshold = 0.0;
    double p_value_bound = 1.0;
    bool reject = false;
    ScanSolution solution;
    bool no_feasible_candidate = false; // only the empty set was feasible
    double dual_value = 0.0;            // best Lagrangian dual seen at solution.t (lgss)
    std::size_t inner_solves = 0;
};

/// Feasibility of x for the scan constraints TV1(x) <= rho and 1'x <= t.
inline bool scan_feasible(const Graph& g, std::span<const double> x, double rho, double t, double tol = 1e-6) {
    double mass = 0.0;
    for (double v : x) {
        if (v < -tol || v > 1.0 + tol) return false;
        mass += v;
    }
    return mass <= t + tol && total_variation(g, x, Norm::l1) <= rho + tol;
}

// ---------------------------------------------------------------------------
// LGSS

struct LgssInnerResult {
    std::vector<std::uint8_t> x;
    double q = 0.0; // min_x  -x'y + eta1 1'x + eta2 TV1(x)
};

/// Lagrangian inner problem, solved exactly by one s-t min cut.
class LgssInnerSolver {
public:
    LgssInnerSolver(const Graph& g, const Attribute& y) : y_(&y), solver_(g), unary_(g.num_nodes()) {
        require_length(g, y.size(), "lgss_inner");
    }

    LgssInnerResult solve(double eta1, double eta2) {
        if (!(eta1 >= 0.0) || !(eta2 >= 0.0)) throw precondition_error("lgss_inner: multipliers must be >= 0");
        for (std::size_t i = 0; i < unary_.size(); ++i) unary_[i] = eta1 - double((*y_)[i]);
        auto r = solver_.solve(unary_, eta2);
        return {std::move(r.x), r.objective};
    }

private:
    const Attribute* y_;
    PseudoBooleanSolver solver_;
    std::vector<double> unary_;
};

inline LgssInnerResult lgss_inner(const Graph& g, const Attribute& y, double eta1, double eta2) {
    LgssInnerSolver solver(g, y);
    return solver.solve(eta1, eta2);
}

namespace detail {

// Best witness so far. Ties on the objective go to the smaller cut, then the
// smaller t, then the candidate found first.
struct Incumbent {
    ScanSolution best;
    double best_tv = 0.0;
    bool nonempty = false;

    void offer(double objective, double tv, double t, std::span<const double> x, bool nonempty_x) {
        const bool tv_less = tv < best_tv - 1e-12, tv_equal = !tv_less && tv <= best_tv + 1e-12;
        const bool better =
            objective > best.objective ||
            (objective == best.objective &&
             (tv_less || (tv_equal && t < best.t)));
        if (best.x.empty() || better) {
            best.objective = objective;
            best_tv = tv;
            best.t = t;
            best.x.assign(x.begin(), x.end());
        }
        nonempty = nonempty || nonempty_x;
    }
};

/// Drops nodes from x until TV1(x) <= rho, each time the one whose removal
/// cuts the most boundary (inactive nodes first on ties).
inline void peel(const Graph& g, const Attribute& y, double rho, std::vector<std::uint8_t>& x) {
    double tv = 0.0;
    for (const auto& e : g.edges())
        if (x[e.u] != x[e.v]) tv += e.w;
    std::vector<node_id> members;
    for (node_id v = 0; v < x.size(); ++v)
        if (x[v]) members.push_back(v);
    while (tv > rho + 1e-9 && !members.empty()) {
        std::size_t pick = 0;
        double pick_dtv = infinity;
        for (std::size_t k = 0; k < members.size(); ++k) {
            const node_id v = members[k];
            double dtv = 0.0;
            for (const auto& nb : g.neighbors(v)) dtv += x[nb.node] ? nb.weight : -nb.weight;
            if (dtv < pick_dtv - 1e-12 || (dtv < pick_dtv + 1e-12 && y[v] < y[members[pick]])) {
                pick = k;
                pick_dtv = dtv;
            }
        }
        x[members[pick]] = 0;
        tv += pick_dtv;
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(pick));
    }
}

/// Best-improvement single-node flips within the feasible region, starting
/// from x. Objective: t KL(x'y/t || ybar) at the smallest grid t >= 1'x.
inline void polish(const Graph& g, const Attribute& y, double rho, std::span<const double> grid, double ybar,
                   std::vector<std::uint8_t> x, Incumbent& inc) {
    const std::size_t n = g.num_nodes();
    auto value = [&](double mass, double xy, double tv) {
        if (mass == 0.0 || tv > rho + 1e-9) return std::make_pair(-1.0, 0.0);
        const auto it = std::lower_bound(grid.begin(), grid.end(), mass - 1e-9);
        if (it == grid.end()) return std::make_pair(-1.0, 0.0);
        const double a = xy / *it;
        return std::make_pair(a > ybar ? *it * bernoulli_kl(std::min(1.0, a), ybar) : 0.0, *it);
    };
    double mass = 0.0, xy = 0.0, tv = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (x[i]) {
            mass += 1.0;
            xy += y[i];
        }
    for (const auto& e : g.edges())
        if (x[e.u] != x[e.v]) tv += e.w;
    auto [cur, t_cur] = value(mass, xy, tv);
    for (std::size_t iter = 0; iter < 4 * n; ++iter) {
        double best = cur;
        std::size_t pick = n;
        double pick_tv = tv;
        for (node_id v = 0; v < n; ++v) {
            double dtv = 0.0;
            for (const auto& nb : g.neighbors(v)) dtv += x[nb.node] == x[v] ? nb.weight : -nb.weight;
            const double sign = x[v] ? -1.0 : 1.0;
            const auto [val, t] = value(mass + sign, xy + sign * y[v], tv + dtv);
            (void)t;
            const double new_tv = tv + dtv;
            if (val > best + 1e-12 || (val >= best - 1e-12 && val >= 0.0 && new_tv < pick_tv - 1e-12)) {
                best = std::max(best, val);
                pick = v;
                pick_tv = new_tv;
            }
        }
        if (pick == n) break;
        const double sign = x[pick] ? -1.0 : 1.0;
        x[pick] ^= 1;
        mass += sign;
        xy += sign * y[pick];
        tv = pick_tv;
        std::tie(cur, t_cur) = value(mass, xy, tv);
    }
    if (cur < 0.0) return;
    std::vector<double> xr(x.begin(), x.end());
    inc.offer(cur, tv, t_cur, xr, true);
}

inline std::vector<double> resolve_grid(const ScanConfig& cfg, const Attribute& y) {
    return cfg.t_grid.empty() ? default_t_grid(y.size(), y.count()) : cfg.t_grid;
}

} // namespace detail

/// Rejection threshold for the scan statistic; type-1 error <= 1 - (1 - delta)^2.
namespace detail {
inline double lgss_threshold_formula(double n, double rho, double delta) {
    const double inner = (std::sqrt(rho) + std::sqrt(0.5 * std::log(n))) * std::sqrt(2.0 * std::log(n - 1.0)) +
                         std::sqrt(2.0 * std::log(2.0)) + std::sqrt(4.5 * std::log(2.0 / delta));
    return 8.0 * inner * inner;
}

inline double cgss_threshold_formula(double n, double rho, double delta) {
    const double root = std::sqrt(rho) + std::sqrt(0.5 * std::log(n));
    const double k = std::sqrt(root * root * std::log(n));
    const double inner = (std::log(2.0 * n) + 1.0) / k + std::sqrt(2.0 * std::log(2.0)) + 2.0 * k +
                         std::sqrt(4.5 * std::log(2.0 / delta));
    return 8.0 * inner * inner;
}
} // namespace detail

inline double lgss_threshold(double n, double rho, double delta) {
    if (!(n >= 3.0)) throw precondition_error("lgss_threshold: n must be at least 3");
    if (!(rho >= 0.0)) throw config_error("lgss_threshold: rho must be >= 0");
    check_delta(delta);
    return detail::lgss_threshold_formula(n, rho, delta);
}

inline double cgss_threshold(double n, double rho, double delta) {
    if (!(n >= 3.0)) throw precondition_error("cgss_threshold: n must be at least 3");
    if (!(rho >= 0.0)) throw config_error("cgss_threshold: rho must be >= 0");
    check_delta(delta);
    return detail::cgss_threshold_formula(n, rho, delta);
}

/// 2 exp(-(sqrt 2 / 3) (sqrt(stat/8) - 2 log 2 - (sqrt rho + sqrt(log(n)/2)) sqrt(2 log(n-1)))^2),
/// clamped to [0, 1] and reported as 1 when the bracket is not positive.
inline double scan_pvalue_bound(double stat, double n, double rho) {
    if (!(n >= 3.0)) throw precondition_error("scan_pvalue_bound: n must be at least 3");
    if (!(stat >= 0.0)) return 1.0;
    const double bracket = std::sqrt(stat / 8.0) - 2.0 * std::log(2.0) -
                           (std::sqrt(rho) + std::sqrt(0.5 * std::log(n))) * std::sqrt(2.0 * std::log(n - 1.0));
    if (!(bracket > 0.0)) return 1.0;
    return std::min(1.0, 2.0 * std::exp(-(std::sqrt(2.0) / 3.0) * bracket * bracket));
}

/// Sufficient strength condition for the scan statistic (type-1 <= 1-(1-delta1)^2,
/// type-2 <= 1-(1-delta2)^3). Planning aid; needs the unknown truth.
inline DetectabilityCheck scan_detectability(double cluster_size, double n, double mu, double eps, double rho,
                                             double delta1, double delta2) {
    check_delta(delta1);
    check_delta(delta2);
    const double lhs = (1.0 - cluster_size / n) * std::sqrt(cluster_size) * (mu - eps);
    const double rhs = 4.0 * std::sqrt(std::log(2.0)) + 6.0 * std::sqrt(std::log(2.0 / delta1)) +
                       4.0 * (std::sqrt(rho) + std::sqrt(0.5 * std::log(n))) * std::sqrt(std::log(n - 1.0)) +
                       (std::sqrt(0.5) + std::sqrt(cluster_size / (2.0 * n))) * std::sqrt(std::log(2.0 / delta2));
    return {lhs, rhs, lhs >= rhs};
}

/// Same for the convex relaxation.
inline DetectabilityCheck convex_scan_detectability(double cluster_size, double n, double mu, double eps, double rho,
                                                    double delta1, double delta2) {
    check_delta(delta1);
    check_delta(delta2);
    const double root = std::sqrt(rho) + std::sqrt(0.5 * std::log(n));
    const double k2 = root * root * std::log(n);
    const double lhs = (1.0 - cluster_size / n) * std::sqrt(cluster_size) * (mu - eps);
    const double rhs = 4.0 * std::sqrt(std::log(2.0)) + 6.0 * std::sqrt(std::log(2.0 / delta1)) +
                       2.0 * std::sqrt(2.0) * (std::log(2.0 * n) + 1.0) / std::sqrt(k2) + 4.0 * std::sqrt(2.0 * k2) +
                       (std::sqrt(0.5) + std::sqrt(cluster_size / (2.0 * n))) * std::sqrt(std::log(2.0 / delta2));
    return {lhs, rhs, lhs >= rhs};
}

/// Local graph scan statistic. For every t in the grid, simulated annealing
/// walks the multipliers (eta1, eta2) maximizing the dual
/// Q = q(eta1, eta2) - eta1 t - eta2 rho; every inner minimizer visited is
/// tested for primal feasibility and scored, along with its connected
/// pieces. The minimizer at the best dual value of each t is peeled down to
/// feasibility, and it and the best feasible set are polished by single-node flips. The
/// statistic is the best feasible primal value; a feasible x is scored at the
/// smallest grid budget that admits it, where t KL(x'y/t || ybar) is largest.
inline ScanReport lgss(const Graph& g, const Attribute& y, const ScanConfig& cfg) {
    require_length(g, y.size(), "lgss");
    validate(cfg, g.num_nodes());
    const double ybar = background_rate(y);
    const auto grid = detail::resolve_grid(cfg, y);
    const auto& sched = cfg.annealing;

    LgssInnerSolver inner(g, y);
    detail::Incumbent inc;
    inc.offer(0.0, 0.0, grid.front(), std::vector<double>(g.num_nodes(), 0.0), false);
    std::vector<double> best_dual(grid.size(), -std::numeric_limits<double>::infinity());
    std::vector<std::vector<std::uint8_t>> dual_x(grid.size());
    std::vector<double> xr(g.num_nodes());
    std::size_t solves = 0;

    // Connected pieces of an inner minimizer: each cuts no more than the
    // whole, so they are scored as candidates of their own.
    const std::size_t n_nodes = g.num_nodes();
    std::vector<std::uint32_t> comp(n_nodes);
    std::vector<node_id> stack;
    struct Piece {
        double mass = 0.0, xy = 0.0, tv = 0.0;
    };
    std::vector<Piece> pieces;

    auto consider = [&](const Piece& p, const std::vector<std::uint8_t>& x, std::uint32_t label) {
        if (p.mass == 0.0 || p.tv > cfg.rho + 1e-9) return;
        const auto it = std::lower_bound(grid.begin(), grid.end(), p.mass - 1e-9);
        if (it == grid.end()) return;
        const double t = *it;
        const double a = p.xy / t;
        const double obj = a > ybar ? t * bernoulli_kl(std::min(1.0, a), ybar) : 0.0;
        if (obj < inc.best.objective) {
            inc.nonempty = true;
            return;
        }
        for (std::size_t i = 0; i < n_nodes; ++i)
            xr[i] = x[i] && (label == 0 || comp[i] == label) ? 1.0 : 0.0;
        inc.offer(obj, p.tv, t, xr, true);
    };

    auto score = [&](const LgssInnerResult& r) {
        std::fill(comp.begin(), comp.end(), 0);
        pieces.assign(1, Piece{});
        for (node_id s = 0; s < n_nodes; ++s) {
            if (!r.x[s] || comp[s]) continue;
            const auto label = static_cast<std::uint32_t>(pieces.size());
            pieces.push_back({});
            comp[s] = label;
            stack.assign(1, s);
            while (!stack.empty()) {
                const node_id u = stack.back();
                stack.pop_back();
                pieces[label].mass += 1.0;
                pieces[label].xy += y[u];
                for (const auto& nb : g.neighbors(u))
                    if (r.x[nb.node] && !comp[nb.node]) {
                        comp[nb.node] = label;
                        stack.push_back(nb.node);
                    }
            }
        }
        for (const auto& e : g.edges())
            if (r.x[e.u] != r.x[e.v]) pieces[r.x[e.u] ? comp[e.u] : comp[e.v]].tv += e.w;
        Piece whole;
        for (std::size_t k = 1; k < pieces.size(); ++k) {
            whole.mass += pieces[k].mass;
            whole.xy += pieces[k].xy;
            whole.tv += pieces[k].tv;
        }
        consider(whole, r.x, 0);
        if (pieces.size() > 2)
            for (std::size_t k = 1; k < pieces.size(); ++k) consider(pieces[k], r.x, static_cast<std::uint32_t>(k));
    };

    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        SplitMix64 rng(derive_seed(sched.seed, 1, j));
        double eta1 = sched.initial_eta1.value_or(ybar), eta2 = sched.initial_eta2;
        auto current = inner.solve(eta1, eta2);
        ++solves;
        score(current);
        double q_cur = current.q - eta1 * t - eta2 * cfg.rho;
        best_dual[j] = q_cur;
        dual_x[j] = current.x;
        double temperature = sched.initial_temperature;
        for (std::size_t step = 0; step < sched.steps; ++step) {
            const double p1 = eta1 * std::exp(sched.proposal_scale * rng.normal());
            const double p2 = eta2 * std::exp(sched.proposal_scale * rng.normal());
            auto cand = inner.solve(p1, p2);
            ++solves;
            score(cand);
            const double q_new = cand.q - p1 * t - p2 * cfg.rho;
            if (q_new > best_dual[j]) {
                best_dual[j] = q_new;
                dual_x[j] = cand.x;
            }
            const double u = rng.uniform();
            if (q_new >= q_cur || u < std::exp((q_new - q_cur) / temperature)) {
                eta1 = p1;
                eta2 = p2;
                q_cur = q_new;
            }
            temperature *= sched.cooling;
        }
    }

    for (auto& x : dual_x) {
        detail::peel(g, y, cfg.rho, x);
        detail::polish(g, y, cfg.rho, grid, ybar, std::move(x), inc);
    }
    std::vector<std::uint8_t> start(inc.best.x.begin(), inc.best.x.end());
    const bool from_empty = std::none_of(start.begin(), start.end(), [](std::uint8_t b) { return b != 0; });
    detail::polish(g, y, cfg.rho, grid, ybar, std::move(start), inc);
    if (!from_empty) detail::polish(g, y, cfg.rho, grid, ybar, std::vector<std::uint8_t>(g.num_nodes(), 0), inc);

    ScanReport rep;
    rep.variant = ScanVariant::lgss;
    rep.solution = std::move(inc.best);
    rep.solution.feasible = true;
    rep.statistic = rep.solution.objective;
    rep.no_feasible_candidate = !inc.nonempty;
    rep.inner_solves = solves;
    const auto jt = std::find(grid.begin(), grid.end(), rep.solution.t);
    rep.dual_value = jt == grid.end() ? 0.0 : best_dual[static_cast<std::size_t>(jt - grid.begin())];
    const double n = double(g.num_nodes());
    rep.threshold = n >= 3.0 ? lgss_threshold(n, cfg.rho, cfg.delta) : std::numeric_limits<double>::infinity();
    rep.p_value_bound = n >= 3.0 ? scan_pvalue_bound(rep.statistic, n, cfg.rho) : 1.0;
    rep.reject = rep.statistic > rep.threshold;
    return rep;
}

// ---------------------------------------------------------------------------
// CGSS

struct CgssInnerResult {
    std::vector<double> x;
    double objective = 0.0;   // x'y of the returned x
    double upper_bound = 0.0; // best Lagrangian bound on the LP optimum
    std::size_t iterations = 0;
};

/// max x'y  s.t.  x in [0,1]^N, TV1(x) <= rho, 1'x <= t.
///
/// Every fractional x is the integral over s in [0,1) of its level sets
/// 1{x > s}, and size, cut weight and x'y all integrate the same way, so the
/// LP optimum equals the best mixture of binary sets. Column generation over
/// that mixture: the 3-row master (budget, cut, convexity) is solved by a
/// dense simplex, its duals (eta1, eta2) price a new set by one graph cut, and
/// the Lagrangian bound from the same cut certifies the gap.
inline CgssInnerResult cgss_inner(const Graph& g, const Attribute& y, double t, double rho, double tol = 1e-7,
                                  std::size_t max_iterations = 20000) {
    require_length(g, y.size(), "cgss_inner");
    if (!(t >= 1.0)) throw precondition_error("cgss_inner: t must be at least 1");
    if (!(rho >= 0.0)) throw config_error("cgss_inner: rho must be >= 0");
    if (!(tol > 0.0)) throw config_error("cgss_inner: tolerance must be positive");

    LgssInnerSolver pricing(g, y);
    std::vector<std::vector<std::uint8_t>> columns;
    std::vector<std::vector<double>> A(3);
    std::vector<double> gain;
    const std::vector<double> b{t, rho, 1.0};
    double best_bound = std::numeric_limits<double>::infinity();
    detail::SimplexResult master{{}, {0.0, 0.0, 0.0}, 0.0};

    CgssInnerResult out;
    for (std::size_t it = 0;; ++it) {
        if (it >= max_iterations)
            throw numerical_error("cgss_inner: no convergence after " + std::to_string(it) +
                                  " iterations (master " + std::to_string(master.objective) + ", bound " +
                                  std::to_string(best_bound) + ")");
        const double eta1 = master.duals[0], eta2 = master.duals[1], sigma = master.duals[2];
        auto priced = pricing.solve(eta1, eta2);
        const double bound = -priced.q + eta1 * t + eta2 * rho;
        best_bound = std::min(best_bound, bound);
        out.iterations = it + 1;
        const double reduced = -priced.q - sigma;
        if (best_bound - master.objective <= tol || reduced <= tol * 1e-3) break;

        double mass = 0.0, cut = 0.0, xy = 0.0;
        for (std::size_t i = 0; i < priced.x.size(); ++i)
            if (priced.x[i]) {
                mass += 1.0;
                xy += y[i];
            }
        for (const auto& e : g.edges())
            if (priced.x[e.u] != priced.x[e.v]) cut += e.w;
        A[0].push_back(mass);
        A[1].push_back(cut);
        A[2].push_back(1.0);
        gain.push_back(xy);
        columns.push_back(std::move(priced.x));
        master = detail::simplex_max(A, b, gain);
    }

    out.x.assign(g.num_nodes(), 0.0);
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const double lambda = master.x[k];
        if (lambda <= 0.0) continue;
        for (std::size_t i = 0; i < columns[k].size(); ++i)
            if (columns[k][i]) out.x[i] += lambda;
    }
    for (auto& v : out.x) v = std::clamp(v, 0.0, 1.0);
    double xy = 0.0;
    for (std::size_t i = 0; i < out.x.size(); ++i)
        if (y[i]) xy += out.x[i];
    out.objective = xy;
    out.upper_bound = std::max(best_bound, xy);
    return out;
}

/// Convex graph scan statistic: the LP relaxation solved for every grid budget,
/// each optimum scored by t KL(x'y/t || ybar), the best one reported. Entries of
/// the returned x are confidences in [0, 1].
inline ScanReport cgss(const Graph& g, const Attribute& y, const ScanConfig& cfg) {
    require_length(g, y.size(), "cgss");
    validate(cfg, g.num_nodes());
    background_rate(y);
    const auto grid = detail::resolve_grid(cfg, y);

    detail::Incumbent inc;
    std::size_t solves = 0;
    for (double t : grid) {
        auto r = cgss_inner(g, y, t, cfg.rho, cfg.lp_tolerance);
        solves += r.iterations;
        const double obj = scan_objective(y, r.x, t);
        double mass = 0.0;
        for (double v : r.x) mass += v;
        inc.offer(obj, total_variation(g, r.x, Norm::l1), t, r.x, mass > 0.0);
    }

    ScanReport rep;
    rep.variant = ScanVariant::cgss;
    rep.solution = std::move(inc.best);
    rep.solution.feasible = scan_feasible(g, rep.solution.x, cfg.rho, rep.solution.t);
    rep.statistic = rep.solution.objective;
    rep.no_feasible_candidate = !inc.nonempty;
    rep.inner_solves = solves;
    const double n = double(g.num_nodes());
    rep.threshold = n >= 3.0 ? cgss_threshold(n, cfg.rho, cfg.delta) : std::numeric_limits<double>::infinity();
    rep.p_value_bound = n >= 3.0 ? scan_pvalue_bound(rep.statistic, n, cfg.rho) : 1.0;
    rep.reject = rep.statistic > rep.threshold;
    return rep;
}

inline ScanReport scan(ScanVariant v, const Graph& g, const Attribute& y, const ScanConfig& cfg) {
    return v == ScanVariant::lgss ? lgss(g, y, cfg) : cgss(g, y, cfg);
}

} // namespace locattr
