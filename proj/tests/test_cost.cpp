#include <gtest/gtest.h>

#include <cmath>

#include "msd/cost.hpp"

using namespace msd;

TEST(StageError, Maps) {
  EXPECT_NEAR(stage_error(Stage::mek(), 1e-3), 9e-6, 1e-18);
  EXPECT_NEAR(stage_error(Stage::bk15(), 1e-3), 35e-9, 1e-20);
  EXPECT_NEAR(stage_error(Stage::bh(6), 1e-3), 19e-6, 1e-18);
  EXPECT_THROW(stage_error(Stage::mek(), 0.0), std::domain_error);
  EXPECT_THROW(stage_error(Stage::mek(), 0.06), std::domain_error);
  EXPECT_THROW(Stage::bh(7), std::invalid_argument);
}

TEST(Chain, ParseAndPrint) {
  auto c = Chain::parse("6-22-54");
  ASSERT_EQ(c.stages.size(), 3u);
  EXPECT_EQ(c.stages[0].kind, Stage::BH);
  EXPECT_EQ(c.stages[2].k, 54);
  EXPECT_EQ(c.str(), "6-22-54");
  EXPECT_EQ(Chain::parse("15-5").stages[1].kind, Stage::MEK);
  EXPECT_THROW(Chain::parse("6-x"), std::invalid_argument);
  EXPECT_THROW(Chain::parse("7"), std::invalid_argument);
}

TEST(ChainCost, SixTwentyTwoFiftyFour) {
  auto c = chain_cost(Chain::parse("6-22-54"));
  // 19e-6 -> 67 (19e-6)^2 -> 163 (...)^2
  const double e1 = 19e-6, e2 = 67 * e1 * e1, e3 = 163 * e2 * e2;
  EXPECT_NEAR(c.marginal_error, e3, 1e-27);
  const double t = 26.0 / 6 / (1 - 26e-3) * 74.0 / 22 / (1 - 74 * e1) * 170.0 / 54 / (1 - 170 * e2);
  EXPECT_NEAR(c.t_per_output, t, 1e-9);
  EXPECT_DOUBLE_EQ(c.space, 26.0 * 74 * 170);
  EXPECT_EQ(c.n_out, 7128);
}

TEST(ChainCost, SingleMek) {
  auto c = chain_cost(Chain::parse("5"));
  EXPECT_NEAR(c.marginal_error, 9e-6, 1e-18);
  EXPECT_NEAR(c.t_per_output, 5 / (1 - 10e-3), 1e-12);
  EXPECT_DOUBLE_EQ(c.space, 10);
}

TEST(ChainCost, ReferenceRows) {
  for (const auto& row : reference_cost_table()) {
    auto c = chain_cost(Chain::parse(row.name));
    const double ratio = c.marginal_error / row.marginal_error;
    const double tol = row.name == "22-46-54-54" ? 1.3 : 1.05;
    EXPECT_LT(std::max(ratio, 1 / ratio), tol) << row.name << " " << c.marginal_error;
    EXPECT_LT(std::abs(c.t_per_output - row.t_per_output) / row.t_per_output, 0.05) << row.name;
    // Space values are printed to two significant figures.
    EXPECT_LT(std::abs(c.space - row.space) / row.space, 0.05) << row.name;
  }
}

TEST(ChainCost, AppendingNeverIncreasesError) {
  auto menu = stage_menu({"mek", "bk", "bh"});
  for (const auto& a : menu)
    for (const auto& b : menu) {
      Chain one{{a}, 1e-3}, two{{a, b}, 1e-3};
      EXPECT_LE(chain_cost(two).marginal_error, chain_cost(one).marginal_error);
    }
}

TEST(BestChain, FullMenuAtOneETMinus13) {
  auto c = best_chain(1e-13, stage_menu({"bh", "mek", "bk"}));
  auto cost = chain_cost(c);
  EXPECT_LE(cost.marginal_error, 1e-13);
  EXPECT_LE(cost.t_per_output, chain_cost(Chain::parse("6-22-54")).t_per_output);
}

TEST(BestChain, MekAndBkOnly) {
  // 15-5 reaches 1.1025e-14, so a target just above it selects it.
  auto c = best_chain(1.2e-14, stage_menu({"mek", "bk"}));
  EXPECT_EQ(c.str(), "15-5");
  EXPECT_NEAR(chain_cost(c).t_per_output, 76, 0.5);
  EXPECT_EQ(best_chain(1e-14, stage_menu({"mek", "bk"})).str(), "5-5-5");
}

TEST(BestChain, LooseTargetPicksCheapestStage) {
  auto c = best_chain(0.5, stage_menu({"mek", "bk", "bh"}));
  ASSERT_EQ(c.stages.size(), 1u);
  double best = 1e9;
  for (const auto& s : stage_menu({"mek", "bk", "bh"})) best = std::min(best, chain_cost(Chain{{s}, 1e-3}).t_per_output);
  EXPECT_DOUBLE_EQ(chain_cost(c).t_per_output, best);
}

TEST(BestChain, UnreachableTargetNamesBest) {
  try {
    best_chain(1e-40, stage_menu({"mek"}), 1e-3, 2);
    FAIL();
  } catch (const NoChain& e) {
    EXPECT_NE(std::string(e.what()).find("best error"), std::string::npos);
  }
}
