#include "common.hpp"
#include "oracle.hpp"

using namespace kt;

namespace {

MonoidPtr n2() { return a2().monoid(); }

TruncatedMonoidSeries series(std::initializer_list<std::pair<LatticeVector, int>> terms, std::int64_t k) {
  TruncatedMonoidSeries s(n2(), v2(0, 0), k);
  for (auto& [e, c] : terms) s.add_term(e, c);
  return s;
}

}  // namespace

TEST(Series, MultiplyTruncates) {
  auto a = series({{v2(0, 0), 1}, {v2(1, 0), 1}}, 2);
  auto sq = a * a * a;
  EXPECT_EQ(sq.coefficient(v2(0, 0)), 1);
  EXPECT_EQ(sq.coefficient(v2(1, 0)), 3);
  EXPECT_EQ(sq.coefficient(v2(2, 0)), 3);
  EXPECT_EQ(sq.coefficient(v2(3, 0)), 0);
}

TEST(Series, OffsetsOutsideMonoidRejected) {
  TruncatedMonoidSeries s(n2(), v2(0, 0), 3);
  EXPECT_ANY_THROW(s.add_term(v2(-1, 0), 1));
}

TEST(Series, HighDegreeDropped) {
  TruncatedMonoidSeries s(n2(), v2(0, 0), 1);
  s.add_term(v2(1, 1), 5);
  EXPECT_TRUE(s.is_zero());
}

TEST(Series, NegativePowerIsInverse) {
  auto f = series({{v2(0, 0), 1}, {v2(1, 1), 1}}, 6);
  auto inv = power(f, -1);
  EXPECT_EQ(f * inv, TruncatedMonoidSeries::one(n2(), 6));
  EXPECT_EQ(inv.coefficient(v2(3, 3)), -1);
  auto inv4 = power(series({{v2(0, 0), 1}, {v2(1, 0), -1}}, 6), -4);
  for (int j = 0; j <= 6; ++j) EXPECT_EQ(inv4.coefficient(v2(j, 0)), Integer(oracle::negative_binomial(4, j))) << j;
}

TEST(Series, OrderCoherence) {
  auto f = series({{v2(0, 0), 1}, {v2(1, 0), 2}, {v2(0, 1), 3}}, 5);
  EXPECT_EQ(power(f, 4).truncated(3), power(f.truncated(3), 4));
}

TEST(WallFunction, BinomialAndPower) {
  Monoid m(2, {0, 1});
  auto w = WallFunction::binomial(v2(1, 1), 6, m);
  EXPECT_EQ(w.direction_degree(), 2);
  EXPECT_EQ(w.max_power(), 3u);
  EXPECT_EQ(w.coefficient(0), 1);
  EXPECT_EQ(w.coefficient(1), 1);
  EXPECT_EQ(w.coefficient(2), 0);
  EXPECT_TRUE(w.all_coefficients_nonnegative());
  auto sq = w.times(w);
  EXPECT_EQ(sq.coefficient(2), 1);
  EXPECT_EQ(sq.coefficient(1), 2);
  EXPECT_EQ(w.to_string(), "1 + z^(1,1)");
}
