#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "locattr/errors.hpp"
#include "locattr/evaluation.hpp"
#include "locattr/graph.hpp"

namespace locattr::io {

namespace detail {

inline std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> fields(std::string_view s, char sep = 0) {
    std::vector<std::string_view> out;
    if (sep) {
        std::size_t start = 0;
        for (;;) {
            const auto p = s.find(sep, start);
            out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
            if (p == std::string_view::npos) break;
            start = p + 1;
        }
        return out;
    }
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    T v{};
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [p, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

// Strips '#' comments; false for lines that are blank afterwards.
inline bool content(std::string& line) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    return !trim(line).empty();
}

inline std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return in;
}

} // namespace detail

/// Whitespace-separated "u v [w]" lines, '#' starts a comment. Node ids are
/// 0-based integers; the node count is max id + 1 unless given.
inline Graph read_edge_list(std::istream& in, const std::string& source = "<edges>",
                            std::optional<std::size_t> num_nodes = std::nullopt) {
    std::vector<Edge> edges;
    std::set<std::pair<node_id, node_id>> seen;
    std::string line;
    std::size_t lineno = 0, max_id = 0;
    bool any = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::content(line)) continue;
        const auto f = detail::fields(line);
        if (f.size() < 2 || f.size() > 3)
            throw input_error(detail::where(source, lineno) + "expected 'u v [w]'");
        const auto u = detail::parse_number<std::uint32_t>(f[0]);
        const auto v = detail::parse_number<std::uint32_t>(f[1]);
        if (!u || !v) throw input_error(detail::where(source, lineno) + "node ids must be nonnegative integers");
        double w = 1.0;
        if (f.size() == 3) {
            const auto pw = detail::parse_number<double>(f[2]);
            if (!pw || !std::isfinite(*pw) || *pw <= 0.0)
                throw input_error(detail::where(source, lineno) + "weight must be a positive finite number");
            w = *pw;
        }
        if (*u == *v) throw input_error(detail::where(source, lineno) + "self-loop on node " + std::to_string(*u));
        const auto key = std::minmax(*u, *v);
        if (!seen.insert(key).second)
            throw input_error(detail::where(source, lineno) + "duplicate edge " + std::to_string(key.first) + " " +
                              std::to_string(key.second));
        max_id = std::max<std::size_t>(max_id, std::max(*u, *v));
        any = true;
        edges.push_back({*u, *v, w});
    }
    std::size_t n = any ? max_id + 1 : 0;
    if (num_nodes) {
        if (*num_nodes < n) throw input_error(source + ": edge list references node " + std::to_string(max_id) +
                                              " but only " + std::to_string(*num_nodes) + " nodes were declared");
        n = *num_nodes;
    }
    if (n == 0) throw input_error(source + ": graph has no nodes");
    return Graph(n, std::move(edges));
}

inline Graph read_edge_list(const std::string& path, std::optional<std::size_t> num_nodes = std::nullopt) {
    auto in = detail::open(path);
    return read_edge_list(in, path, num_nodes);
}

inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << '\n';
    for (const auto& e : g.edges()) {
        out << e.u << ' ' << e.v;
        if (e.w != 1.0) out << ' ' << format_double(e.w);
        out << '\n';
    }
}

/// Either one 0/1 value per line (node i on the i-th value line) or
/// "node value" pairs with unlisted nodes 0. The two forms cannot be mixed.
inline Attribute read_attribute(std::istream& in, std::size_t n, const std::string& source = "<attribute>") {
    std::vector<std::uint8_t> dense;
    std::vector<std::uint8_t> sparse(n, 0);
    std::vector<bool> assigned(n, false);
    enum class Form { unknown, dense, pairs } form = Form::unknown;
    std::string line;
    std::size_t lineno = 0;
    auto bit = [&](std::string_view s) -> std::uint8_t {
        if (s == "0") return 0;
        if (s == "1") return 1;
        throw input_error(detail::where(source, lineno) + "attribute values must be 0 or 1, got '" + std::string(s) + "'");
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::content(line)) continue;
        const auto f = detail::fields(line);
        const Form here = f.size() == 1 ? Form::dense : f.size() == 2 ? Form::pairs : Form::unknown;
        if (here == Form::unknown) throw input_error(detail::where(source, lineno) + "expected 'value' or 'node value'");
        if (form != Form::unknown && form != here)
            throw input_error(detail::where(source, lineno) + "mixes single-value and 'node value' lines");
        form = here;
        if (here == Form::dense) {
            dense.push_back(bit(f[0]));
        } else {
            const auto id = detail::parse_number<std::uint32_t>(f[0]);
            if (!id) throw input_error(detail::where(source, lineno) + "node id must be a nonnegative integer");
            if (*id >= n)
                throw input_error(detail::where(source, lineno) + "node " + std::to_string(*id) + " outside graph of " +
                                  std::to_string(n) + " nodes");
            if (assigned[*id]) throw input_error(detail::where(source, lineno) + "node " + std::to_string(*id) + " listed twice");
            assigned[*id] = true;
            sparse[*id] = bit(f[1]);
        }
    }
    if (form == Form::pairs) return Attribute(std::move(sparse));
    if (dense.size() != n)
        throw dimension_error(source + ": attribute has " + std::to_string(dense.size()) + " values, graph has " +
                              std::to_string(n) + " nodes");
    return Attribute(std::move(dense));
}

inline Attribute read_attribute(const std::string& path, std::size_t n) {
    auto in = detail::open(path);
    return read_attribute(in, n, path);
}

inline void write_attribute(std::ostream& out, const Attribute& a) {
    for (std::size_t i = 0; i < a.size(); ++i) out << int(a[i]) << '\n';
}

struct PointRecord {
    Point point;
    std::optional<double> value;
};

/// CSV with header "id,x,y[,value]". Rows are returned sorted by id, which is
/// also the node index order of knn_graph.
inline std::vector<PointRecord> read_points_csv(std::istream& in, const std::string& source = "<points>") {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++lineno;
        if (!detail::content(line)) continue;
        for (auto f : detail::fields(line, ',')) header.emplace_back(f);
    }
    if (header.empty()) throw input_error(source + ": missing header");
    auto col = [&](const char* name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };
    const auto cid = col("id"), cx = col("x"), cy = col("y"), cv = col("value");
    if (!cid || !cx || !cy) throw input_error(detail::where(source, lineno) + "header must name columns id, x, y");

    std::vector<PointRecord> rows;
    std::set<std::int64_t> ids;
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::content(line)) continue;
        const auto f = detail::fields(line, ',');
        if (f.size() != header.size())
            throw input_error(detail::where(source, lineno) + "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(f.size()));
        const auto id = detail::parse_number<std::int64_t>(f[*cid]);
        const auto x = detail::parse_number<double>(f[*cx]);
        const auto y = detail::parse_number<double>(f[*cy]);
        if (!id) throw input_error(detail::where(source, lineno) + "id must be an integer");
        if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y))
            throw input_error(detail::where(source, lineno) + "coordinates must be finite numbers");
        if (!ids.insert(*id).second) throw input_error(detail::where(source, lineno) + "duplicate id " + std::to_string(*id));
        PointRecord r{{*id, *x, *y}, std::nullopt};
        if (cv) {
            const auto v = detail::parse_number<double>(f[*cv]);
            if (!v || std::isnan(*v)) throw input_error(detail::where(source, lineno) + "value must be a number");
            r.value = *v;
        }
        rows.push_back(r);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.point.id < b.point.id; });
    return rows;
}

inline std::vector<PointRecord> read_points_csv(const std::string& path) {
    auto in = detail::open(path);
    return read_points_csv(in, path);
}

/// Sparse "attr_id node_id" pairs. Attributes come back in natural id order.
inline std::vector<NamedAttribute> read_attribute_pairs(std::istream& in, std::size_t n,
                                                        const std::string& source = "<attributes>") {
    std::map<std::string, std::vector<std::uint8_t>> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::content(line)) continue;
        const auto f = detail::fields(line);
        if (f.size() != 2) throw input_error(detail::where(source, lineno) + "expected 'attr_id node_id'");
        const auto node = detail::parse_number<std::uint32_t>(f[1]);
        if (!node) throw input_error(detail::where(source, lineno) + "node id must be a nonnegative integer");
        if (*node >= n)
            throw input_error(detail::where(source, lineno) + "node " + std::to_string(*node) + " outside graph of " +
                              std::to_string(n) + " nodes");
        auto& v = table[std::string(f[0])];
        if (v.empty()) v.assign(n, 0);
        v[*node] = 1;
    }
    if (table.empty()) throw input_error(source + ": no attribute pairs");
    std::vector<NamedAttribute> out;
    for (auto& [id, v] : table) out.push_back({id, Attribute(std::move(v))});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_id_less(a.id, b.id); });
    return out;
}

inline std::vector<NamedAttribute> read_attribute_pairs(const std::string& path, std::size_t n) {
    auto in = detail::open(path);
    return read_attribute_pairs(in, n, path);
}

/// "attr_id score" lines, higher score = better (for example a per-attribute F1).
inline std::vector<TruthScore> read_truth(std::istream& in, const std::string& source = "<truth>") {
    std::vector<TruthScore> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::content(line)) continue;
        const auto f = detail::fields(line);
        if (f.size() != 2) throw input_error(detail::where(source, lineno) + "expected 'attr_id score'");
        const auto s = detail::parse_number<double>(f[1]);
        if (!s || !std::isfinite(*s)) throw input_error(detail::where(source, lineno) + "score must be a finite number");
        if (!seen.insert(std::string(f[0])).second)
            throw input_error(detail::where(source, lineno) + "attribute '" + std::string(f[0]) + "' listed twice");
        out.push_back({std::string(f[0]), *s});
    }
    if (out.empty()) throw input_error(source + ": empty truth ranking");
    return out;
}

inline std::vector<TruthScore> read_truth(const std::string& path) {
    auto in = detail::open(path);
    return read_truth(in, path);
}

} // namespace locattr::io
