#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "locattr/errors.hpp"
#include "locattr/graph.hpp"
#include "locattr/scan.hpp"
#include "locattr/wavelet.hpp"

namespace locattr {

using json = nlohmann::ordered_json;

inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::uint64_t parse_hash_hex(const std::string& s) {
    if (s.size() != 16 || s.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw input_error("basis: graph_hash must be 16 lowercase hex digits");
    return std::stoull(s, nullptr, 16);
}

inline json basis_to_json(const WaveletBasis& b) {
    json j;
    j["format"] = "locattr-basis/1";
    j["num_nodes"] = b.num_nodes;
    j["graph_hash"] = hash_hex(b.graph_hash);
    j["seed"] = b.seed;
    j["level"] = b.level;
    j["order"] = b.order;
    json comps = json::array();
    for (const auto& [lo, hi] : b.components) comps.push_back({lo, hi});
    j["components"] = std::move(comps);
    json vecs = json::array();
    for (const auto& v : b.vectors) vecs.push_back({v.begin, v.split, v.end, v.depth, v.parent});
    j["vectors"] = std::move(vecs);
    return j;
}

/// Inverse of basis_to_json; checks that the ranges describe a valid split tree.
inline WaveletBasis basis_from_json(const json& j) {
    try {
        if (j.at("format") != "locattr-basis/1") throw input_error("basis: unsupported format");
        WaveletBasis b;
        b.num_nodes = j.at("num_nodes").get<std::size_t>();
        b.graph_hash = parse_hash_hex(j.at("graph_hash").get<std::string>());
        b.seed = j.at("seed").get<std::uint64_t>();
        b.level = j.at("level").get<std::size_t>();
        b.order = j.at("order").get<std::vector<node_id>>();
        if (b.order.size() != b.num_nodes) throw input_error("basis: order length differs from num_nodes");
        std::vector<bool> seen(b.num_nodes, false);
        for (auto v : b.order) {
            if (v >= b.num_nodes || seen[v]) throw input_error("basis: order is not a permutation");
            seen[v] = true;
        }
        std::size_t covered = 0;
        for (const auto& c : j.at("components")) {
            const auto lo = c.at(0).get<std::uint32_t>(), hi = c.at(1).get<std::uint32_t>();
            if (lo != covered || hi <= lo || hi > b.num_nodes) throw input_error("basis: components must tile the order");
            covered = hi;
            b.components.emplace_back(lo, hi);
        }
        if (covered != b.num_nodes) throw input_error("basis: components must tile the order");
        for (const auto& v : j.at("vectors")) {
            WaveletVector w{};
            w.begin = v.at(0).get<std::uint32_t>();
            w.split = v.at(1).get<std::uint32_t>();
            w.end = v.at(2).get<std::uint32_t>();
            w.depth = v.at(3).get<std::uint32_t>();
            w.parent = v.at(4).get<std::int64_t>();
            if (!(w.begin < w.split && w.split < w.end && w.end <= b.num_nodes))
                throw input_error("basis: vector ranges out of order");
            if (w.parent >= static_cast<std::int64_t>(b.vectors.size()))
                throw input_error("basis: parent must precede its children");
            w.scale = wavelet_scale(w.size_a(), w.size_b());
            b.vectors.push_back(w);
        }
        std::size_t expected = 0;
        for (const auto& [lo, hi] : b.components) expected += hi - lo - 1;
        if (b.vectors.size() != expected) throw input_error("basis: wrong number of vectors");
        return b;
    } catch (const json::exception& e) {
        throw input_error(std::string("basis: malformed JSON: ") + e.what());
    }
}

inline json to_json(const WaveletReport& r, const WaveletBasis& basis) {
    json j;
    j["variant"] = "wavelet";
    j["statistic"] = r.statistic;
    j["threshold"] = r.threshold;
    j["p_value_bound"] = r.p_value_bound;
    j["reject"] = r.reject;
    if (!basis.vectors.empty()) {
        const auto a = basis.set_a(r.argmax_vector), b = basis.set_b(r.argmax_vector);
        j["argmax"] = {{"vector", r.argmax_vector},
                       {"set_a", std::vector<node_id>(a.begin(), a.end())},
                       {"set_b", std::vector<node_id>(b.begin(), b.end())}};
    }
    return j;
}

inline json to_json(const ScanReport& r, double rho, bool include_x = false) {
    json j;
    j["variant"] = to_string(r.variant);
    j["statistic"] = r.statistic;
    j["threshold"] = r.threshold;
    j["p_value_bound"] = r.p_value_bound;
    j["reject"] = r.reject;
    j["rho"] = rho;
    j["t"] = r.solution.t;
    std::vector<node_id> support;
    for (std::size_t i = 0; i < r.solution.x.size(); ++i)
        if (r.solution.x[i] > 0.5) support.push_back(static_cast<node_id>(i));
    j["support"] = support;
    if (include_x) j["x"] = r.solution.x;
    if (r.variant == ScanVariant::lgss) j["dual_value"] = r.dual_value;
    j["inner_solves"] = r.inner_solves;
    if (r.no_feasible_candidate) j["warning"] = "no nonempty feasible candidate; statistic is 0";
    return j;
}

} // namespace locattr
