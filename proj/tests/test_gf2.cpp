#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "msd/gf2.hpp"

using namespace msd;

namespace {

Poly2 xn1(int n) { return Poly2::monomial(n) + Poly2::monomial(0); }

BinaryCode table_code(int n, const char* h) {
  return cyclic_code(poly_quotient(xn1(n), Poly2::parse(h)), n);
}

// Independent oracle: test every vector of the ambient space against the generators' dual.
std::uint64_t brute_count(const BinaryCode& code, int w) {
  const int n = static_cast<int>(code.length());
  BinaryCode d = dual_code(code);
  std::uint64_t c = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    if (std::popcount(x) != w) continue;
    bool ok = true;
    for (const auto& r : d.generators())
      if (std::popcount(x & r.to_word()) & 1) ok = false;
    c += ok;
  }
  return c;
}

BinaryCode random_code(std::mt19937_64& rng, int n, int k) {
  std::vector<BitVector> rows;
  for (int i = 0; i < k; ++i) rows.push_back(BitVector::from_word(rng(), static_cast<std::size_t>(n)));
  return BinaryCode(static_cast<std::size_t>(n), rows);
}

}  // namespace

TEST(Poly2, ParsePrintRoundTrip) {
  auto p = Poly2::parse("x^5+x^2+1");
  EXPECT_EQ(p.degree(), 5);
  EXPECT_EQ(p.str(), "x^5+x^2+1");
  EXPECT_EQ(Poly2::parse("x + 1").str(), "x+1");
  EXPECT_THROW(Poly2::parse("x^^2"), std::invalid_argument);
}

TEST(Poly2, ExactQuotients) {
  auto h = Poly2::parse("x^5+x^2+1");
  auto q = poly_quotient(xn1(31), h);
  EXPECT_EQ(q.degree(), 26);
  EXPECT_EQ(q * h, xn1(31));
  EXPECT_EQ(poly_quotient(Poly2::parse("x+1"), Poly2::parse("x+1")).str(), "1");
  auto q63 = poly_quotient(xn1(63), Poly2::parse("x^9+x^7+x^6+x+1"));
  EXPECT_EQ(q63.degree(), 54);
  EXPECT_THROW(poly_quotient(xn1(31), Poly2::parse("x^2+1")), std::invalid_argument);
}

TEST(Poly2, ProductRoundTripRandom) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint8_t> a(1 + rng() % 20), b(1 + rng() % 20);
    for (auto& x : a) x = rng() & 1;
    for (auto& x : b) x = rng() & 1;
    a.back() = b.back() = 1;
    Poly2 g(a), h(b);
    EXPECT_EQ(poly_quotient(g * h, h), g);
  }
}

TEST(BinaryCode, CyclicDimensions) {
  EXPECT_EQ(table_code(31, "x^5+x^2+1").dimension(), 5);
  EXPECT_EQ(table_code(63, "x^18+x^15+x^13+x^11+x^9+x^5+x^4+x+1").dimension(), 18);
  EXPECT_EQ(cyclic_code(Poly2::parse("1"), 9).dimension(), 9);
  EXPECT_THROW(cyclic_code(Poly2::parse("x^2+1"), 31), std::invalid_argument);
}

TEST(BinaryCode, DualProperties) {
  EXPECT_EQ(dual_code(BinaryCode::full_space(7)).dimension(), 0);
  auto c = table_code(31, "x^5+x^2+1");
  auto d = dual_code(c);
  EXPECT_EQ(d.dimension(), 26);
  for (const auto& a : c.generators())
    for (const auto& b : d.generators()) EXPECT_FALSE(a.dot(b));
  auto c63 = table_code(63, "x^9+x^7+x^6+x+1");
  EXPECT_EQ(dual_code(dual_code(c63)), c63);
}

TEST(BinaryCode, CanonicalFormMakesEqualityStructural) {
  auto c = table_code(31, "x^5+x^2+1");
  std::vector<BitVector> rows = c.generators();
  rows[0] ^= rows[1];
  std::swap(rows[2], rows[4]);
  EXPECT_EQ(BinaryCode(31, rows), c);
  auto piv = c.pivots();
  EXPECT_TRUE(std::is_sorted(piv.begin(), piv.end()));
}

TEST(BinaryCode, MatrixTextRoundTrip) {
  auto c = table_code(31, "x^10+x^7+x^5+x^4+x^2+x+1");
  EXPECT_EQ(BinaryCode::parse(c.str(), 31), c);
}

TEST(CountWeight, SmallExamples) {
  EXPECT_EQ(count_weight(BinaryCode::full_space(5), 2), 10u);
  EXPECT_EQ(count_weight(BinaryCode::zero_code(5), 0), 1u);
  auto d = dual_code(table_code(31, "x^5+x^2+1"));
  EXPECT_EQ(count_weight(d, 3), 155u);
}

TEST(CountWeight, SumsToCodeSize) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const int n = 8 + static_cast<int>(rng() % 12);
    const int k = 1 + static_cast<int>(rng() % 10);
    auto c = random_code(rng, n, k);
    std::uint64_t total = 0;
    for (int w = 0; w <= n; ++w) total += count_weight(c, w, WeightStrategy::Codewords);
    EXPECT_EQ(total, std::uint64_t{1} << c.dimension());
  }
}

TEST(CountWeight, StrategiesMatchBruteForce) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 15; ++t) {
    const int n = 10 + static_cast<int>(rng() % 8);
    auto c = random_code(rng, n, 3 + static_cast<int>(rng() % 8));
    for (int w = 0; w <= 6; ++w) {
      const auto oracle = brute_count(c, w);
      EXPECT_EQ(count_weight(c, w, WeightStrategy::Codewords), oracle);
      EXPECT_EQ(count_weight(c, w, WeightStrategy::Supports), oracle);
    }
  }
}

TEST(CountWeight, CyclicOrbitPathBitExactAtLength31) {
  const char* hs[] = {"x^5+x^2+1", "x^10+x^7+x^5+x^4+x^2+x+1"};
  for (const char* h : hs) {
    auto c = table_code(31, h);
    auto d = dual_code(c);
    for (int w = 0; w <= 8; ++w) {
      const auto naive = count_weight(d, w, WeightStrategy::Supports);
      EXPECT_EQ(count_weight(d, w, WeightStrategy::SupportsCyclic), naive) << h << " w=" << w;
      if (d.dimension() <= 28) {
        EXPECT_EQ(count_weight(d, w, WeightStrategy::Codewords), naive);
      }
      EXPECT_EQ(count_weight(c, w, WeightStrategy::SupportsCyclic), count_weight(c, w, WeightStrategy::Codewords));
    }
  }
}

TEST(CountWeight, ShardsSumToWhole) {
  auto d = dual_code(table_code(31, "x^10+x^7+x^5+x^4+x^2+x+1"));
  for (auto s : {WeightStrategy::Supports, WeightStrategy::Codewords}) {
    const auto whole = count_weight(d, 5, s);
    const auto ext = shard_extent(d, 5, s);
    std::uint64_t sum = 0;
    const std::uint64_t step = ext / 3 + 1;
    for (std::uint64_t b = 0; b < ext; b += step) sum += count_weight(d, 5, s, Shard{b, b + step});
    EXPECT_EQ(sum, whole);
  }
  EXPECT_THROW(count_weight(d, 5, WeightStrategy::SupportsCyclic, Shard{0, 4}), std::invalid_argument);
}

TEST(CountWeight, TooLargeIsRefused) {
  auto d = dual_code(table_code(63, "x^18+x^15+x^13+x^11+x^9+x^5+x^4+x+1"));
  EXPECT_THROW(count_weight(d, 9), std::runtime_error);
}

TEST(MinWeight, Examples) {
  EXPECT_FALSE(min_weight(BinaryCode::zero_code(9), 10).has_value());
  auto c = table_code(31, "x^5+x^2+1");
  EXPECT_FALSE(min_weight(c, 10).has_value());
  auto d = dual_code(table_code(63, "x^18+x^15+x^13+x^11+x^9+x^5+x^4+x+1"));
  EXPECT_EQ(min_weight(d, 8), 7);
}

TEST(WordVisitor, MatchesCount) {
  auto d = dual_code(table_code(31, "x^10+x^7+x^5+x^4+x^2+x+1"));
  std::uint64_t seen = 0;
  for_each_weight_word(d, 5, [&](std::uint64_t v) {
    EXPECT_EQ(std::popcount(v), 5);
    EXPECT_TRUE(d.contains(BitVector::from_word(v, 31)));
    ++seen;
  });
  EXPECT_EQ(seen, count_weight(d, 5));
}
