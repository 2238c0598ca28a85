#include "common.hpp"

using namespace kt;

namespace {

std::map<LatticeVector, Integer> absolute_terms(const ThetaFunction& t) {
  std::map<LatticeVector, Integer> out;
  for (const auto& [off, c] : t.table.terms()) out[t.table.base() + off] = c;
  return out;
}

RationalPoint auto_point(const ScatteringDiagram& d, const LatticeVector& m, std::int64_t k, std::size_t attempt = 0) {
  return generic_point(d.rank(), std::nullopt, basepoint_conditions(d, m, k), attempt).point;
}

}  // namespace

TEST(BrokenLines, EmptyDiagramStraightLine) {
  ScatteringDiagram d(Seed(SkewForm(2, {0, 1, -1, 0}), {}), 4);
  auto lines = enumerate_broken_lines(d, v2(2, -1), q2("1/3,2/7"), 4);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].bends(), 0u);
  EXPECT_EQ(lines[0].final_segment().exponent, v2(2, -1));
  auto t = theta(d, v2(2, -1), q2("1/3,2/7"), 4);
  EXPECT_EQ(absolute_terms(t), (std::map<LatticeVector, Integer>{{v2(2, -1), 1}}));
}

TEST(BrokenLines, ZeroExponentIsUnit) {
  const auto& d = completed(1, 5);
  auto q = auto_point(d, v2(0, 0), 5);
  auto lines = enumerate_broken_lines(d, v2(0, 0), q, 5);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(absolute_terms(theta(d, v2(0, 0), q, 5)), (std::map<LatticeVector, Integer>{{v2(0, 0), 1}}));
}

TEST(BrokenLines, A2ClusterVariablesInPositiveChamber) {
  // theta_g at a point of the positive chamber is the cluster variable
  // with g-vector g: (1 + x2)/x1 at g = (-1,0), (1 + x1 + x2)/(x1 x2) at
  // (-1,-1), (1 + x1)/x2 at (0,-1).
  const auto& d = completed(1, 6);
  auto q = q2("5/7,3/11");
  using M = std::map<LatticeVector, Integer>;
  EXPECT_EQ(absolute_terms(theta(d, v2(-1, 0), q, 6)), (M{{v2(-1, 0), 1}, {v2(-1, 1), 1}}));
  EXPECT_EQ(absolute_terms(theta(d, v2(-1, -1), q, 6)), (M{{v2(-1, -1), 1}, {v2(0, -1), 1}, {v2(-1, 0), 1}}));
  EXPECT_EQ(absolute_terms(theta(d, v2(0, -1), q, 6)), (M{{v2(0, -1), 1}, {v2(1, -1), 1}}));
  EXPECT_EQ(absolute_terms(theta(d, v2(1, 1), q, 6)), (M{{v2(1, 1), 1}}));
}

TEST(BrokenLines, A2ThetaAcrossChambers) {
  // m = e1 + e2 in the third quadrant chamber picks up the generated wall.
  const auto& d = completed(1, 4);
  auto t = theta(d, v2(1, 1), q2("-5/7,-3/11"), 4);
  for (const auto& [e, c] : absolute_terms(t)) EXPECT_GT(c, 0) << e;
  EXPECT_EQ(t.table.coefficient(v2(0, 0)), 1);
}

TEST(BrokenLines, LinesRevalidate) {
  const auto& d = completed(2, 5);
  for (const auto& m : {v2(1, 0), v2(-1, 0), v2(0, -1), v2(-1, -1), v2(2, -3)}) {
    auto q = auto_point(d, m, 5, 2);
    for (const auto& l : enumerate_broken_lines(d, m, q, 5)) {
      EXPECT_FALSE(validate_broken_line(d, l, 5).has_value());
      EXPECT_EQ(l.segments.front().exponent, m);
      EXPECT_EQ(l.segments.front().coefficient, 1);
      auto inc = l.final_segment().exponent - m;
      EXPECT_TRUE(d.monoid()->contains(inc));
    }
  }
}

TEST(BrokenLines, NonGenericEndpointRejected) {
  const auto& d = completed(1, 4);
  EXPECT_CODE(theta(d, v2(1, 0), q2("0,1/3"), 4), ErrorCode::NonGenericEndpoint);
  EXPECT_CODE(theta(d, v2(1, 0), q2("-1/2,-1/2"), 4), ErrorCode::NonGenericEndpoint);
}

TEST(ThetaConsistency, EveryWallA2AndKronecker) {
  for (int s : {1, 2}) {
    const auto& d = completed(s, 6);
    for (const auto& w : d.walls())
      for (const auto& m : {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1), v2(1, 1)})
        EXPECT_TRUE(theta_consistency_check(d, m, w, 6)) << "s=" << s << " m=" << m << " wall " << w.direction();
  }
}

TEST(ThetaConsistency, CorruptedWallDetected) {
  auto d = completed(1, 4);
  for (auto& w : d.mutable_walls())
    if (!w.is_initial()) w.function.add_to_coefficient(1, 1);
  bool any_false = false;
  for (const auto& w : d.walls())
    for (const auto& m : {v2(1, 0), v2(-1, 0), v2(0, -1)}) any_false |= !theta_consistency_check(d, m, w, 4);
  EXPECT_TRUE(any_false);
}

TEST(Theta, ChamberIndependence) {
  const auto& d = completed(2, 5);
  for (const auto& m : {v2(-1, 0), v2(-2, 1), v2(1, -1)}) {
    auto cond = basepoint_conditions(d, m, 5);
    auto a = generic_point(2, std::nullopt, cond, 0).point;
    for (std::size_t i = 1; i < 12; ++i) {
      auto b = generic_point(2, std::nullopt, cond, i).point;
      if (chamber_signature(d, a) != chamber_signature(d, b)) continue;
      EXPECT_EQ(theta(d, m, a, 5).table, theta(d, m, b, 5).table);
    }
  }
}

TEST(Theta, OrderCoherence) {
  const auto& d = completed(2, 6);
  auto q = q2("-5/7,-3/11");
  for (const auto& m : {v2(1, 0), v2(0, 1), v2(1, 1)})
    EXPECT_EQ(theta(d, m, q, 6).table.truncated(4), theta(d, m, q, 4).table);
}
