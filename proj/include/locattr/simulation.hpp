#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "locattr/errors.hpp"
#include "locattr/graph.hpp"
#include "locattr/rng.hpp"

namespace locattr {

// Stream identifiers for derive_seed; fixed so simulations are reproducible.
namespace streams {
inline constexpr std::uint64_t annealing = 1;
inline constexpr std::uint64_t head = 2;
inline constexpr std::uint64_t h1 = 3;
inline constexpr std::uint64_t h0 = 4;
inline constexpr std::uint64_t scattered = 5;
inline constexpr std::uint64_t null_trials = 6;
inline constexpr std::uint64_t sweep = 7;
} // namespace streams

struct PlantedModel {
    double mu = 0.95;
    double eps = 0.05;
    LocalSet c;
    std::uint64_t seed = 0;

    void validate(std::size_t n) const {
        if (!(mu > 0.0 && mu <= 1.0)) throw config_error("planted model: mu must lie in (0, 1]");
        if (!(eps >= 0.0 && eps < 1.0)) throw config_error("planted model: eps must lie in [0, 1)");
        if (!(eps <= mu)) throw config_error("planted model: eps must not exceed mu");
        if (c.size() == 0) throw config_error("planted model: activated set is empty");
        for (auto v : c.members())
            if (v >= n) throw dimension_error("planted model: activated set exceeds the graph");
    }

    /// H0 rate with the same expected activation count as H1.
    double matched_rate(std::size_t n) const {
        const double k = double(c.size());
        return (mu * k + eps * (double(n) - k)) / double(n);
    }
};

/// Bernoulli(mu) inside C, Bernoulli(eps) outside.
inline Attribute draw_h1(const Graph& g, const PlantedModel& m) {
    m.validate(g.num_nodes());
    SplitMix64 rng(m.seed);
    std::vector<std::uint8_t> v(g.num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double p = m.c.contains(static_cast<node_id>(i)) ? m.mu : m.eps;
        v[i] = rng.uniform() < p ? 1 : 0;
    }
    return Attribute(std::move(v));
}

/// i.i.d. Bernoulli at the matched rate. With mu == eps this is the same draw as draw_h1.
inline Attribute draw_h0(const Graph& g, const PlantedModel& m) {
    m.validate(g.num_nodes());
    const double p = m.mu == m.eps ? m.mu : m.matched_rate(g.num_nodes());
    SplitMix64 rng(m.seed);
    std::vector<std::uint8_t> v(g.num_nodes());
    for (auto& b : v) b = rng.uniform() < p ? 1 : 0;
    return Attribute(std::move(v));
}

/// Uniformly random k-subset activated.
inline Attribute scattered_null(const Graph& g, std::size_t k, std::uint64_t seed) {
    const std::size_t n = g.num_nodes();
    if (k > n) throw input_error("scattered_null: more activations than nodes");
    std::vector<node_id> perm(n);
    std::iota(perm.begin(), perm.end(), node_id{0});
    SplitMix64 rng(seed);
    std::vector<std::uint8_t> v(n, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm[i], perm[j]);
        v[perm[i]] = 1;
    }
    return Attribute(std::move(v));
}

inline node_id random_head(const Graph& g, std::uint64_t seed) {
    if (g.num_nodes() == 0) throw input_error("random_head: empty graph");
    SplitMix64 rng(seed);
    return static_cast<node_id>(rng.below(g.num_nodes()));
}

/// Planted ball of the given radius around a seeded head.
inline PlantedModel planted_ball(const Graph& g, std::size_t radius, double mu, double eps, std::uint64_t seed,
                                 node_id head) {
    PlantedModel m;
    m.mu = mu;
    m.eps = eps;
    m.c = ball(g, head, radius);
    m.seed = seed;
    m.validate(g.num_nodes());
    return m;
}

} // namespace locattr
