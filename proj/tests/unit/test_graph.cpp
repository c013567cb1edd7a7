#include <gtest/gtest.h>

#include <cmath>

#include "locattr/graph.hpp"
#include "support.hpp"

using namespace locattr;
using testing_support::cycle_graph;
using testing_support::path_graph;

TEST(Graph, CanonicalEdgesAndNeighbors) {
    Graph g(4, {{2, 1, 1.0}, {0, 3, 2.0}, {1, 0, 1.0}});
    ASSERT_EQ(g.num_edges(), 3u);
    for (const auto& e : g.edges()) EXPECT_LT(e.u, e.v);
    EXPECT_EQ(g.edges()[0].u, 0u);
    EXPECT_EQ(g.edges()[0].v, 1u);
    EXPECT_DOUBLE_EQ(g.weighted_degree(0), 3.0);
    EXPECT_EQ(g.degree(1), 2u);
    // every edge appears exactly once in each endpoint's neighbor list
    std::size_t total = 0;
    for (node_id v = 0; v < 4; ++v)
        for (const auto& nb : g.neighbors(v)) {
            const auto& e = g.edges()[nb.edge];
            EXPECT_TRUE((e.u == v && e.v == nb.node) || (e.v == v && e.u == nb.node));
            EXPECT_EQ(e.w, nb.weight);
            ++total;
        }
    EXPECT_EQ(total, 2 * g.num_edges());
}

TEST(Graph, RejectsBadInput) {
    EXPECT_THROW(Graph(2, {{0, 0, 1.0}}), input_error);
    EXPECT_THROW(Graph(2, {{0, 2, 1.0}}), input_error);
    EXPECT_THROW(Graph(2, {{0, 1, 0.0}}), input_error);
    EXPECT_THROW(Graph(2, {{0, 1, -1.0}}), input_error);
    EXPECT_THROW(Graph(2, {{0, 1, NAN}}), input_error);
    EXPECT_THROW(Graph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), input_error);
}

TEST(Graph, LocalSetAndAttribute) {
    EXPECT_THROW(LocalSet({1, 1}), input_error);
    EXPECT_THROW(LocalSet({0, 5}, 3), input_error);
    LocalSet s({3, 1});
    EXPECT_EQ(s.members()[0], 1u);
    EXPECT_TRUE(s.contains(3));
    EXPECT_THROW(Attribute({0, 2}), input_error);
    auto a = Attribute::indicator(s, 5);
    EXPECT_EQ(a.count(), 2u);
    EXPECT_EQ(a.complement().count(), 3u);
    EXPECT_EQ(a.support(), s);
}

TEST(IncidenceApply, Examples) {
    auto g = path_graph(3);
    std::vector<double> x{1, 1, 0};
    auto d = incidence_apply(g, x);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0], 0.0);
    EXPECT_EQ(d[1], 1.0);

    std::vector<double> ones(3, 1.0);
    for (double v : incidence_apply(g, ones)) EXPECT_EQ(v, 0.0);

    Graph g2(2, {{0, 1, 2.0}});
    std::vector<double> x2{1, 0};
    EXPECT_EQ(incidence_apply(g2, x2)[0], 2.0);

    std::vector<double> bad{1, 0};
    EXPECT_THROW(incidence_apply(g, bad), dimension_error);
}

TEST(IncidenceApply, Linearity) {
    auto g = testing_support::random_connected_graph(20, 0.2, 3, true);
    SplitMix64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(20), y(20), z(20);
        const double a = rng.normal(), b = rng.normal();
        for (std::size_t i = 0; i < 20; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
            z[i] = a * x[i] + b * y[i];
        }
        auto fx = incidence_apply(g, x), fy = incidence_apply(g, y), fz = incidence_apply(g, z);
        for (std::size_t e = 0; e < fz.size(); ++e) EXPECT_NEAR(fz[e], a * fx[e] + b * fy[e], 1e-12);
    }
}

TEST(TotalVariation, Examples) {
    auto g = path_graph(3);
    auto c = Attribute({1, 1, 0});
    EXPECT_EQ(total_variation(g, c, 0), 1.0);
    Graph gw(3, {{0, 1, 1.0}, {1, 2, 2.0}});
    EXPECT_EQ(total_variation(gw, c, 1), 2.0);
    EXPECT_EQ(total_variation(g, Attribute::zeros(3), 0), 0.0);
    EXPECT_EQ(total_variation(g, Attribute::zeros(3), 1), 0.0);
    EXPECT_THROW(total_variation(g, c, 2), config_error);
}

TEST(TotalVariation, Properties) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = testing_support::random_connected_graph(15, 0.25, seed);
        auto gw = testing_support::random_connected_graph(15, 0.25, seed, true);
        auto y = testing_support::random_attribute(15, 0.4, seed + 100);
        EXPECT_EQ(total_variation(g, y, 0), total_variation(g, y, 1));
        EXPECT_EQ(total_variation(gw, y, 1), total_variation(gw, y.complement(), 1));
        EXPECT_EQ(total_variation(gw, y, 0), total_variation(gw, y.complement(), 0));
        auto yr = y.as_real();
        EXPECT_EQ(total_variation(gw, yr, Norm::l1), total_variation(gw, y, Norm::l1));
    }
}

TEST(Geodesic, Examples) {
    auto d = geodesic_distances(path_graph(3), 0);
    EXPECT_EQ(d, (std::vector<double>{0, 1, 2}));
    Graph pair(2, {});
    auto d2 = geodesic_distances(pair, 0);
    EXPECT_EQ(d2[0], 0.0);
    EXPECT_TRUE(std::isinf(d2[1]));
    EXPECT_EQ(geodesic_distances(cycle_graph(4), 0), (std::vector<double>{0, 1, 2, 1}));
}

TEST(Geodesic, WeightedUsesInverseWeight) {
    Graph g(3, {{0, 1, 4.0}, {1, 2, 4.0}, {0, 2, 1.0}});
    auto d = geodesic_distances(g, 0, Distance::weighted);
    EXPECT_DOUBLE_EQ(d[1], 0.25);
    EXPECT_DOUBLE_EQ(d[2], 0.5);
}

TEST(Knn, Examples) {
    std::vector<Point> line{{0, 0, 0}, {1, 1, 0}, {2, 2.5, 0}};
    auto g = knn_graph(line, 1);
    EXPECT_EQ(g.degree(1), 2u);
    EXPECT_EQ(g.degree(0), 1u);
    EXPECT_EQ(g.degree(2), 1u);

    std::vector<Point> square{{10, 0, 0}, {11, 1, 0}, {12, 1, 1}, {13, 0, 1}};
    auto sq = knn_graph(square, 2);
    EXPECT_EQ(sq.num_edges(), 4u);
    for (node_id v = 0; v < 4; ++v) EXPECT_EQ(sq.degree(v), 2u);
    EXPECT_TRUE(sq.unit_weights());

    auto complete = knn_graph(square, 5);
    EXPECT_EQ(complete.num_edges(), 6u);

    std::vector<Point> dup{{1, 0, 0}, {1, 1, 1}};
    EXPECT_THROW(knn_graph(dup, 1), input_error);
}

TEST(Knn, DegreeAtLeastK) {
    SplitMix64 rng(5);
    std::vector<Point> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({i, rng.uniform(), rng.uniform()});
    auto g = knn_graph(pts, 4);
    for (node_id v = 0; v < 60; ++v) EXPECT_GE(g.degree(v), 4u);
}

TEST(Ball, Examples) {
    auto g = cycle_graph(4);
    EXPECT_EQ(ball(g, 2, 0), LocalSet({2}));
    EXPECT_EQ(ball(path_graph(5), 2, 1).size(), 3u);
    EXPECT_EQ(ball(g, 0, 2).size(), 4u);
}

TEST(Components, DisconnectedGraph) {
    Graph g(5, {{0, 1, 1.0}, {3, 4, 1.0}});
    std::size_t count = 0;
    auto labels = component_labels(g, &count);
    EXPECT_EQ(count, 3u);
    EXPECT_EQ(labels[0], labels[1]);
    EXPECT_NE(labels[1], labels[2]);
    EXPECT_FALSE(is_connected(g));
    EXPECT_EQ(connected_components(g).size(), 3u);
    EXPECT_TRUE(is_connected(path_graph(4)));
}

TEST(GraphHash, SensitiveToStructureAndWeights) {
    auto a = path_graph(4);
    Graph b(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 2.0}});
    Graph c(4, {{2, 3, 1.0}, {0, 1, 1.0}, {1, 2, 1.0}});
    EXPECT_NE(graph_hash(a), graph_hash(b));
    EXPECT_EQ(graph_hash(a), graph_hash(c));
}

TEST(Grid, Shape) {
    auto g = grid_graph(20, 20);
    EXPECT_EQ(g.num_nodes(), 400u);
    EXPECT_EQ(g.num_edges(), 2u * 20u * 19u);
    EXPECT_EQ(ball(g, 210, 3).size(), 25u);
}
