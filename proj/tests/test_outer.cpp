#include <gtest/gtest.h>

#include "msd/outer.hpp"

using namespace msd;

namespace {

std::vector<Direction> dirs(std::initializer_list<const char*> names) {
  std::vector<Direction> out;
  for (const char* n : names) out.push_back(Direction::parse(n));
  return out;
}

}  // namespace

TEST(GridCode, SquareVerticalHorizontal) {
  auto c = grid_code({11, 11}, dirs({"vertical", "horizontal"}));
  EXPECT_EQ(c.n_out(), 121);
  EXPECT_EQ(c.n_check(), 22);
  auto [nl, no] = lonely_and_once(c);
  EXPECT_EQ(nl, 11);
  EXPECT_EQ(no, 11);  // each vertical qubit meets exactly one later check
  EXPECT_EQ(c_out(c, 4, 0), 3025u);
  EXPECT_TRUE(first_check_not_lonely(c));
  auto rep = verify_distance_sensitivity(c, 4);
  EXPECT_TRUE(rep.distance_ok);
  EXPECT_TRUE(rep.sensitivity_ok);
  EXPECT_EQ(outer_distance(c, 6), 4);
  EXPECT_EQ(rep.girth, 8);
  EXPECT_TRUE(rep.four_cycle_free);
}

TEST(GridCode, Rectangle) {
  auto c = grid_code({21, 11}, dirs({"vertical", "horizontal"}));
  EXPECT_EQ(c.n_out(), 231);
  EXPECT_EQ(c.checks()[0].size(), 21u);
  EXPECT_EQ(c_out(c, 4, 0), 11550u);
  auto [nl, no] = lonely_and_once(c);
  EXPECT_EQ(nl, 21);
}

TEST(GridCode, ThreeDirections) {
  auto c = grid_code({27, 27}, dirs({"vertical", "horizontal", "diag_down"}));
  EXPECT_EQ(c.n_out(), 729);
  EXPECT_EQ(c.n_check(), 81);
  // Closed form k²(k-1)(k-2)/6, checked against naive enumeration below.
  EXPECT_EQ(c_out(c, 6, 0), 27u * 27u * 26u * 25u / 6u);
  auto rep = verify_distance_sensitivity(c, 6);
  EXPECT_TRUE(rep.distance_ok);
  EXPECT_TRUE(rep.sensitivity_ok);
  EXPECT_EQ(rep.n_lonely, 27);
  EXPECT_EQ(rep.n_once, 27);
  EXPECT_GE(rep.girth, 6);
  EXPECT_THROW(grid_code({27, 26}, dirs({"vertical", "diag_up"})), std::invalid_argument);
}

TEST(GridCode, SingleCheck) {
  auto c = grid_code({45, 1}, dirs({"vertical"}));
  EXPECT_EQ(c.n_check(), 1);
  auto rep = verify_distance_sensitivity(c, 2);
  EXPECT_TRUE(rep.distance_ok);
  EXPECT_EQ(rep.n_lonely, 1);
  EXPECT_EQ(outer_distance(c, 3), 2);
  EXPECT_FALSE(first_check_not_lonely(c));
  auto rep3 = verify_distance_sensitivity(c, 3);
  EXPECT_FALSE(rep3.distance_ok);
  ASSERT_TRUE(rep3.witness.has_value());
}

TEST(GridCode, OrderReversedStillFirstCheckNotLonely) {
  EXPECT_TRUE(first_check_not_lonely(grid_code({7, 7}, dirs({"horizontal", "vertical"}))));
}

TEST(GridCode, SimpleGridDistanceIsPowerOfTwo) {
  EXPECT_EQ(outer_distance(grid_code({3, 4}, dirs({"vertical", "horizontal"})), 8), 4);
  auto c3 = grid_code({3, 3, 3}, dirs({"axis0", "axis1", "axis2"}));
  EXPECT_EQ(outer_distance(c3, 8), 8);
  // Oracle: all subsets of the 27 qubits below weight 8.
  for (int u = 1; u < 8; ++u) EXPECT_EQ(c_out_naive(c3, u, 0), 0u) << u;
  EXPECT_GT(c_out_naive(c3, 8, 0), 0u);
}

TEST(GridCode, CensusMatchesNaiveEnumeration) {
  for (auto c : {grid_code({5, 6}, dirs({"vertical", "horizontal"})),
                 grid_code({5, 5}, dirs({"vertical", "horizontal", "diag_up"}))}) {
    for (int u = 1; u <= 5; ++u)
      for (int v = 0; u + 2 * v <= 8; ++v) EXPECT_EQ(c_out(c, u, v), c_out_naive(c, u, v)) << u << "," << v;
  }
}

TEST(GridCode, RectangleClosedForm) {
  for (auto [a, b] : {std::pair{4, 7}, std::pair{9, 5}, std::pair{13, 13}}) {
    auto c = grid_code({a, b}, dirs({"vertical", "horizontal"}));
    EXPECT_EQ(c_out(c, 4, 0), binomial(a, 2) * binomial(b, 2));
    EXPECT_EQ(c_out(c, 1, 2), static_cast<std::uint64_t>(a * b));
  }
}

TEST(GraphCode, Petersen) {
  int nv = 0;
  auto e = named_graph("petersen", &nv);
  auto c = graph_code(nv, e, 5);
  EXPECT_EQ(c.n_out(), 15);
  EXPECT_EQ(c.n_check(), 10);
  EXPECT_EQ(graph_girth(nv, e), 5);
  EXPECT_EQ(count_5_cycles(nv, e), 12u);
  EXPECT_EQ(tanner_girth(c), 10);
}

TEST(GraphCode, HoffmanSingleton) {
  auto e = hoffman_singleton_edges();
  auto c = graph_code(50, e, 5);
  EXPECT_EQ(c.n_out(), 175);
  EXPECT_EQ(c.n_check(), 50);
  for (const auto& ch : c.checks()) EXPECT_EQ(ch.size(), 7u);
  EXPECT_EQ(count_5_cycles(50, e), 1260u);
}

TEST(GraphCode, RejectionsAndUnavailable) {
  std::vector<Edge> k3{{0, 1}, {1, 2}, {2, 0}};
  EXPECT_THROW(graph_code(3, k3, 5), std::invalid_argument);
  EXPECT_NO_THROW(graph_code(3, k3, 3));
  int nv;
  EXPECT_THROW(named_graph("degree9_96", &nv), std::runtime_error);
}

TEST(OuterCodeValue, ValidationAndRoundTrip) {
  EXPECT_THROW(OuterCode(4, {{0, 1, 1}}, {{0}}), std::invalid_argument);
  EXPECT_THROW(OuterCode(4, {{0, 1}}, {}), std::invalid_argument);
  EXPECT_THROW(OuterCode(4, {{0, 1}}, {{0}, {0}}), std::invalid_argument);
  auto c = grid_code({3, 5}, dirs({"vertical", "horizontal"}));
  auto back = OuterCode::parse(c.str());
  EXPECT_EQ(back.checks(), c.checks());
  EXPECT_EQ(back.schedule(), c.schedule());
  EXPECT_TRUE(back.transitive);
}

TEST(ScheduleScan, ParallelChecksAreAllLonely) {
  OuterCode c(4, {{0, 1}, {2, 3}, {1, 2}}, {{0, 1, 2}});
  auto [nl, no] = lonely_and_once(c);
  EXPECT_EQ(nl, 3);
  EXPECT_EQ(no, 0);
}

TEST(GridCode, ThreeDirectionHexagonsMatchNaive) {
  for (int k : {5, 7, 9}) {
    auto c = grid_code({k, k}, dirs({"vertical", "horizontal", "diag_down"}));
    const auto naive = c_out_naive(c, 6, 0);
    EXPECT_EQ(c_out(c, 6, 0), naive) << k;
    EXPECT_EQ(naive, static_cast<std::uint64_t>(k * k * (k - 1) * (k - 2) / 6)) << k;
  }
}
