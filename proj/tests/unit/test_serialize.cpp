#include <gtest/gtest.h>

#include "locattr/serialize.hpp"
#include "support.hpp"

using namespace locattr;

TEST(BasisJson, RoundTrip) {
    auto g = testing_support::random_connected_graph(30, 0.1, 2);
    Graph h(33, std::vector<Edge>(g.edges().begin(), g.edges().end()));
    auto b = build_basis(h, 5);
    const auto text = basis_to_json(b).dump();
    auto back = basis_from_json(json::parse(text));
    EXPECT_EQ(back.order, b.order);
    EXPECT_EQ(back.graph_hash, b.graph_hash);
    EXPECT_EQ(back.level, b.level);
    EXPECT_EQ(back.components, b.components);
    auto y = testing_support::random_attribute(33, 0.4, 1);
    EXPECT_EQ(back.coefficients(y), b.coefficients(y));
    EXPECT_EQ(basis_to_json(back).dump(), text);
}

TEST(BasisJson, RejectsCorruption) {
    auto b = build_basis(testing_support::path_graph(6));
    auto j = basis_to_json(b);
    auto bad = j;
    bad["order"][0] = bad["order"][1];
    EXPECT_THROW(basis_from_json(bad), input_error);
    bad = j;
    bad["vectors"].erase(0);
    EXPECT_THROW(basis_from_json(bad), input_error);
    bad = j;
    bad["graph_hash"] = "xyz";
    EXPECT_THROW(basis_from_json(bad), input_error);
    bad = j;
    bad.erase("order");
    EXPECT_THROW(basis_from_json(bad), input_error);
}

TEST(ReportJson, ScanFields) {
    ScanReport r;
    r.variant = ScanVariant::cgss;
    r.statistic = 3.0;
    r.solution.x = {0.9, 0.2, 0.6};
    r.solution.t = 2.0;
    auto j = to_json(r, 1.5, true);
    EXPECT_EQ(j["variant"], "cgss");
    EXPECT_EQ(j["support"], (std::vector<int>{0, 2}));
    EXPECT_EQ(j["x"].size(), 3u);
    EXPECT_FALSE(to_json(r, 1.5).contains("x"));
}

TEST(ReportJson, WaveletArgmaxSets) {
    auto g = testing_support::path_graph(4);
    auto b = build_basis(g);
    auto r = detect_wavelet(b, Attribute({1, 1, 0, 0}), 0.05);
    auto j = to_json(r, b);
    EXPECT_EQ(j["argmax"]["set_a"], (std::vector<int>{0, 1}));
    EXPECT_EQ(j["argmax"]["set_b"], (std::vector<int>{2, 3}));
}
