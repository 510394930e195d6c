#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "msd/montecarlo.hpp"

using namespace msd;

namespace {

ProtocolSpec grid_spec(std::vector<int> dims, std::vector<std::string> dirs, std::vector<std::string> inner,
                       double eps_check, double eps_in, int m) {
  ProtocolSpec s;
  std::vector<Direction> d;
  for (auto& x : dirs) d.push_back(Direction::parse(x));
  s.outer = grid_code(dims, d);
  for (auto& name : inner) s.rounds.push_back({name, eps_check, m, Policy::ParallelThenTerminate, "raw"});
  s.eps_input = eps_in;
  return s;
}

int hw() { return std::max(1u, std::thread::hardware_concurrency()); }

BitVector unit(int n, int i) { return BitVector::from_support({i}, static_cast<std::size_t>(n)); }

}  // namespace

TEST(SimulateCheck, SameQubitPairFlipsWithoutSyndrome) {
  const auto& c = catalog_code("31-11-5");
  const auto& b = analysis_basis("31-11-5", 1);
  auto out = simulate_check(c, b, unit(31, 4), unit(31, 4), false, 1);
  EXPECT_FALSE(out.inner_syndrome_nontrivial);
  EXPECT_TRUE(out.measured_parity_flip);
  EXPECT_FALSE(out.logical_action_applied.any());
}

TEST(SimulateCheck, LogicalCodewordAndMovedError) {
  const auto& c = catalog_code("31-11-5");
  const auto& b = analysis_basis("31-11-5", 1);
  auto words = logical_words(c, 5);
  ASSERT_FALSE(words.empty());
  const BitVector L = BitVector::from_word(words.front(), 31);
  const BitVector zero(31);
  auto out = simulate_check(c, b, L, zero, false, 1);
  EXPECT_FALSE(out.inner_syndrome_nontrivial);
  EXPECT_FALSE(out.measured_parity_flip);
  EXPECT_EQ(out.logical_action_applied, logical_action(c, b, L));

  const int pos = L.support().front();
  BitVector e1 = L;
  e1.flip(static_cast<std::size_t>(pos));
  auto moved = simulate_check(c, b, e1, unit(31, pos), false, 1);
  EXPECT_FALSE(moved.inner_syndrome_nontrivial);
  EXPECT_TRUE(moved.measured_parity_flip);
  EXPECT_EQ(moved.logical_action_applied, out.logical_action_applied);
}

TEST(SimulateCheck, DeterministicAndNoCorrectionAtOrderZero) {
  const auto& c = catalog_code("31-21-3");
  const auto& b = analysis_basis("31-21-3", 1);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    BitVector e1 = BitVector::from_word(rng() & rng() & rng() & 0x7fffffffULL, 31);
    BitVector e2 = BitVector::from_word(rng() & rng() & rng() & 0x7fffffffULL, 31);
    auto x = simulate_check(c, b, e1, e2, t & 1, 0);
    auto y = simulate_check(c, b, e1, e2, t & 1, 0);
    EXPECT_FALSE(x.corrected);
    EXPECT_EQ(x.inner_syndrome_nontrivial, y.inner_syndrome_nontrivial);
    EXPECT_EQ(x.measured_parity_flip, y.measured_parity_flip);
    EXPECT_EQ(x.logical_action_applied, y.logical_action_applied);
  }
}

TEST(SimulateCheck, SingleErrorCorrectedAtOrderOne) {
  const auto& c = catalog_code("31-11-5");
  const auto& b = analysis_basis("31-11-5", 1);
  auto out = simulate_check(c, b, unit(31, 7), BitVector(31), false, 1);
  EXPECT_TRUE(out.inner_syndrome_nontrivial);
  EXPECT_TRUE(out.corrected);
  EXPECT_FALSE(out.logical_action_applied.any());
}

TEST(SimulateCheck, ActionMatchesLogicalActionOnRandomDualWords) {
  const auto& c = catalog_code("63-27-7");
  const auto& b = analysis_basis("63-27-7", 1);
  const auto& gens = c.dual.generators();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10000; ++t) {
    BitVector v(63);
    for (const auto& g : gens)
      if (rng() & 1) v ^= g;
    auto out = simulate_check(c, b, v, BitVector(63), false, 0);
    ASSERT_FALSE(out.inner_syndrome_nontrivial);
    ASSERT_EQ(out.logical_action_applied, logical_action(c, b, v));
  }
}

TEST(Simulate, ZeroRates) {
  auto s = grid_spec({11, 11}, {"vertical", "horizontal"}, {"31-11-5", "31-11-5"}, 0, 0, 1);
  auto t = simulate_protocol(s, 1000, 3, 2);
  EXPECT_EQ(t.trials, 1000u);
  EXPECT_EQ(t.accepted, 1000u);
  EXPECT_EQ(t.output_errors, 0u);
  EXPECT_EQ(t.output_states, 121000u);
  EXPECT_DOUBLE_EQ(t.t_gates, 1000.0 * (121 + 22 * 62));
  auto rep = compare(s, 1000, 3, 2);
  EXPECT_TRUE(rep.agree());
  for (const auto& r : rep.rows) EXPECT_EQ(r.empirical, r.analytic) << r.quantity;
}

TEST(Simulate, ThreadCountDoesNotChangeResults) {
  auto s = grid_spec({11, 11}, {"vertical", "horizontal"}, {"31-11-5", "31-11-5"}, 1e-2, 1e-2, 1);
  auto a = simulate_protocol(s, 20000, 77, 1);
  auto b = simulate_protocol(s, 20000, 77, 5);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.output_states, b.output_states);
  EXPECT_EQ(a.output_errors, b.output_errors);
  EXPECT_DOUBLE_EQ(a.t_gates, b.t_gates);
}

TEST(Simulate, SingleCheck63_27_7Acceptance) {
  auto s = grid_spec({27}, {"vertical"}, {"63-27-7"}, 1e-3, 0, 1);
  const auto ex = exact_check_rates(catalog_code("63-27-7"), 1e-3, 1);
  EXPECT_NEAR(ex.pass_even, 0.991, 1e-3);
  const std::uint64_t N = 200000;
  auto t = simulate_protocol(s, N, 21, hw());
  const double se = std::sqrt(ex.pass_even * (1 - ex.pass_even) / N);
  EXPECT_LT(std::abs(t.acceptance() - ex.pass_even), 3 * se);
}

TEST(Simulate, GridAcceptanceFormula) {
  auto s = grid_spec({11, 11}, {"vertical", "horizontal"}, {"31-11-5", "31-11-5"}, 1e-2, 1e-2, 1);
  const auto ex = exact_check_rates(catalog_code("31-11-5"), 1e-2, 1);
  const double formula = std::pow(ex.pass_even, 22) * std::pow(1 - 1e-2, 121);
  const std::uint64_t N = 1000000;
  auto t = simulate_protocol(s, N, 8, hw());
  EXPECT_LT(std::abs(t.acceptance() - formula), 3 * std::sqrt(formula * (1 - formula) / N));
}

TEST(Compare, SingleVerticalAtTwoPercent) {
  auto s = grid_spec({21}, {"vertical"}, {"31-21-3"}, 0.02, 0.02, 0);
  auto rep = compare(s, 1000000, 2024, hw());
  for (const auto& r : rep.rows) EXPECT_TRUE(r.agree) << r.quantity << " " << r.sigmas;
}

TEST(Compare, InflatedGridAgrees) {
  auto s = grid_spec({11, 11}, {"vertical", "horizontal"}, {"31-11-5", "31-11-5"}, 1e-2, 1e-2, 1);
  auto rep = compare(s, 1000000, 99, hw());
  for (const auto& r : rep.rows) EXPECT_TRUE(r.agree) << r.quantity << " " << r.sigmas;
}

TEST(Compare, WrongCorrectionOrderIsFlagged) {
  auto sim = grid_spec({11, 11}, {"vertical", "horizontal"}, {"31-11-5", "31-11-5"}, 1e-2, 1e-2, 1);
  auto wrong = sim;
  for (auto& r : wrong.rounds) r.m = 0;
  auto rep = compare(sim, wrong, 200000, 5, hw());
  EXPECT_FALSE(rep.agree());
}
