#include "common.hpp"
#include "oracle.hpp"

using namespace kt;

namespace {

// Compare a completed diagram with the brute-force oracle: every primitive
// direction carries the same coefficient list, zero tails ignored.
void expect_matches_oracle(const ScatteringDiagram& d, int s, int k) {
  auto expected = oracle::scatter_rank2(s, k);
  std::map<oracle::Exp, std::vector<Integer>> actual;
  for (const auto& w : d.walls()) {
    oracle::Exp e{int(w.direction()[0]), int(w.direction()[1])};
    auto& c = actual[e];
    std::vector<Integer> coeffs(w.function.coeffs().begin(), w.function.coeffs().end());
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    if (c.empty()) c = coeffs;
    else EXPECT_EQ(c, coeffs) << "initial line split into different functions";
  }
  ASSERT_EQ(actual.size(), expected.size());
  for (auto& [e, c] : expected) {
    std::vector<Integer> want(c.begin(), c.end());
    while (!want.empty() && want.back() == 0) want.pop_back();
    EXPECT_EQ(actual[e], want) << e[0] << "," << e[1];
  }
}

}  // namespace

TEST(Complete, A2Pentagon) {
  const auto& d = completed(1, 8);
  ASSERT_EQ(d.walls().size(), 3u);
  const Wall* g = find_wall(d, v2(1, 1), false);
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->support, Cone::ray(v2(-1, -1)));
  EXPECT_EQ(g->function, WallFunction::binomial(v2(1, 1), 8, *d.monoid()));
  EXPECT_TRUE(loop_is_identity(d, generic_loop(d)));
}

TEST(Complete, MatchesOracle) {
  expect_matches_oracle(completed(1, 6), 1, 6);
  expect_matches_oracle(completed(2, 6), 2, 6);
  expect_matches_oracle(completed(3, 5), 3, 5);
}

TEST(Complete, KroneckerTwoCentralWall) {
  // (1 - t)^-2 on the primitive functional; squared by the content-2 pairing
  // this is the classical (1 - t)^-4.
  const auto& d = completed(2, 6);
  const Wall* w = find_wall(d, v2(1, 1), false);
  ASSERT_NE(w, nullptr);
  for (std::size_t j = 1; j <= 3; ++j) EXPECT_EQ(w->function.coefficient(j), Integer(oracle::negative_binomial(2, int(j))));
}

TEST(Complete, KroneckerThreeFrozen) {
  const auto& d = completed(3, 4);
  const Wall* w = find_wall(d, v2(1, 1), false);
  ASSERT_NE(w, nullptr);
  EXPECT_EQ(w->function.coefficient(1), 3);
  EXPECT_EQ(w->function.coefficient(2), 15);
  EXPECT_EQ(d.walls().size(), 7u);
}

TEST(Complete, EmptySeed) {
  Seed s(SkewForm(2, {0, 1, -1, 0}), {});
  auto d = complete(s, 5);
  EXPECT_TRUE(d.walls().empty());
}

TEST(Complete, OrderZeroKeepsInitial) {
  auto d = complete(a2(), 0);
  for (const auto& w : d.walls()) EXPECT_TRUE(w.is_initial());
}

TEST(Complete, RankThreeUnsupported) {
  Seed s(SkewForm(3, {0, 1, 0, -1, 0, 1, 0, -1, 0}), {0, 1, 2});
  EXPECT_CODE(complete(s, 2), ErrorCode::UnsupportedRank);
}

TEST(Complete, OrderCoherent) {
  EXPECT_EQ(completed(2, 6).truncated(4), complete(kronecker(2), 4));
}

TEST(Walls, IncomingOutgoing) {
  const auto& d = completed(1, 4);
  for (const auto& w : d.walls()) EXPECT_EQ(is_incoming(w), w.is_initial());
  EXPECT_CODE(make_wall(a2(), Cone::ray(v2(1, 0)), WallFunction::binomial(v2(1, 1), 4, *a2().monoid()), WallOrigin::Generated),
              ErrorCode::InvalidArgument);
}

TEST(Walls, CWallConfinement) {
  for (int s : {1, 2, 3}) {
    const auto& d = completed(s, s == 3 ? 4 : 6);
    auto cw = cwall_supports(d.seed(), d.order());
    for (const auto& w : d.walls()) {
      if (w.is_initial()) continue;
      bool inside = false;
      for (const auto& c : cw)
        if (c.monomial.primitive() == w.direction() && w.support.is_subset_of(c.support)) inside = true;
      EXPECT_TRUE(inside) << w.direction();
    }
  }
}

TEST(Loops, CorruptedDiagramFails) {
  auto d = completed(1, 4);
  for (auto& w : d.mutable_walls())
    if (!w.is_initial()) w.function.add_to_coefficient(1, 1);
  EXPECT_FALSE(loop_is_identity(d, generic_loop(d)));
}

TEST(Loops, GenericLoopsAgree) {
  const auto& d = completed(2, 5);
  for (std::size_t attempt = 0; attempt < 6; ++attempt) EXPECT_TRUE(loop_is_identity(d, generic_loop(d, attempt)));
}

TEST(Crossing, BinomialSigns) {
  // leaving x > 0 the signed normal is +<e2,.> up to sign chosen positive there
  const auto& d = completed(1, 4);
  auto path = StraightPath::segment(q2("1,1/3"), q2("-1,1/3"));
  auto ev = crossings(d, path);
  ASSERT_EQ(ev.size(), 1u);
  auto x = TruncatedMonoidSeries(d.monoid(), v2(1, 0), 4);
  x.add_term(v2(0, 0), 1);
  auto y = cross(ev[0], x);
  EXPECT_EQ(y.coefficient(v2(0, 0)), 1);
  EXPECT_EQ(y.coefficient(v2(0, 1)), 1);
  EXPECT_EQ(y.coefficient(v2(0, 2)), 0);
}

TEST(Crossing, NonTransversal) {
  const auto& d = completed(1, 4);
  EXPECT_CODE(crossings(d, StraightPath::segment(q2("-1,0"), q2("1,0"))), ErrorCode::NonTransversalPath);
  EXPECT_CODE(crossings(d, StraightPath::segment(q2("-1,1"), q2("1,-1"))), ErrorCode::NonTransversalPath);
}

TEST(AngleOrder, Counterclockwise) {
  EXPECT_LT(compare_angle(v2(1, 0), v2(1, 1)), 0);
  EXPECT_LT(compare_angle(v2(0, 1), v2(-1, -1)), 0);
  EXPECT_EQ(compare_angle(v2(2, 2), v2(1, 1)), 0);
  EXPECT_GT(compare_angle(v2(1, -1), v2(-1, 0)), 0);
}
