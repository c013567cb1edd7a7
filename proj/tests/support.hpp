#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "locattr/graph.hpp"
#include "locattr/rng.hpp"

namespace testing_support {

using namespace locattr;

// Random connected graph: a random spanning tree plus extra edges.
inline Graph random_connected_graph(std::size_t n, double extra_density, std::uint64_t seed,
                                    bool integer_weights = false) {
    SplitMix64 rng(seed);
    std::vector<node_id> perm(n);
    std::iota(perm.begin(), perm.end(), node_id{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    std::vector<Edge> edges;
    auto weight = [&] { return integer_weights ? double(1 + rng.below(4)) : 1.0; };
    for (std::size_t i = 1; i < n; ++i) {
        const node_id u = perm[i], v = perm[rng.below(i)];
        used[u][v] = used[v][u] = true;
        edges.push_back({u, v, weight()});
    }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (!used[u][v] && rng.uniform() < extra_density) {
                used[u][v] = used[v][u] = true;
                edges.push_back({node_id(u), node_id(v), weight()});
            }
    return Graph(n, std::move(edges));
}

inline Graph path_graph(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({node_id(i), node_id(i + 1), 1.0});
    return Graph(n, std::move(e));
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back({node_id(i), node_id((i + 1) % n), 1.0});
    return Graph(n, std::move(e));
}

inline Attribute random_attribute(std::size_t n, double p, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = rng.uniform() < p ? 1 : 0;
    return Attribute(std::move(v));
}

// Attribute with both values present.
inline Attribute random_nondegenerate(std::size_t n, double p, std::uint64_t seed) {
    for (std::uint64_t k = 0;; ++k) {
        auto a = random_attribute(n, p, seed * 7919 + k);
        if (a.count() > 0 && a.count() < n) return a;
    }
}

inline std::vector<std::uint8_t> bits(std::uint64_t mask, std::size_t n) {
    std::vector<std::uint8_t> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1U;
    return x;
}

} // namespace testing_support
