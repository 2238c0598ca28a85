#include "common.hpp"
#include "oracle.hpp"

using namespace kt;

namespace {

std::vector<oracle::Exp> plain_rays(const Fan& f) {
  std::vector<oracle::Exp> out;
  for (const auto& r : f.rays()) out.push_back({int(r[0]), int(r[1])});
  return out;
}

std::vector<Fan> builtin_fans() { return {Fan::projective_plane(), Fan::p1_times_p1(), Fan::blown_up_plane()}; }

}  // namespace

TEST(Fan, Builtins) {
  auto p2 = Fan::projective_plane();
  EXPECT_EQ(p2.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(p2.self_intersection(i), 1);
  auto bl = Fan::blown_up_plane();
  std::vector<std::int64_t> self;
  for (std::size_t i = 0; i < bl.size(); ++i) self.push_back(bl.self_intersection(i));
  std::sort(self.begin(), self.end());
  EXPECT_EQ(self, (std::vector<std::int64_t>{-1, 0, 0, 1}));
}

TEST(Fan, Validation) {
  EXPECT_CODE((Fan({v2(1, 0), v2(0, 1), v2(-1, -1), v2(2, 0)})), ErrorCode::InvalidFan);
  EXPECT_CODE((Fan({v2(1, 0), v2(1, 2), v2(-1, -1)})), ErrorCode::InvalidFan);
  EXPECT_CODE((Fan({v2(2, 0), v2(0, 1), v2(-1, -1)})), ErrorCode::InvalidFan);
  EXPECT_CODE((Fan({LatticeVector{1, 0, 0}, LatticeVector{0, 1, 0}})), ErrorCode::UnsupportedRank);
}

TEST(Kinks, FrozenValues) {
  auto p2 = build_phi(Fan::projective_plane());
  for (const auto& k : p2.kinks) EXPECT_EQ(k, (CurveClass{1, 1, 1}));
  auto p1 = build_phi(Fan::p1_times_p1());
  EXPECT_EQ(p1.kinks[0], (CurveClass{0, 1, 0, 1}));
  EXPECT_EQ(p1.kinks[1], (CurveClass{1, 0, 1, 0}));
}

TEST(Kinks, InconsistentCycleRejected) {
  auto fan = Fan::projective_plane();
  EXPECT_CODE((build_phi_with_kinks(fan, {{1, 1, 1}, {1, 1, 1}, {2, 2, 2}})), ErrorCode::InconsistentFan);
}

TEST(Product, P2LineClass) {
  auto fan = Fan::projective_plane();
  auto p = toric_product(fan, build_phi(fan), v2(1, 0), v2(-1, 0));
  EXPECT_EQ(p.q, v2(0, 0));
  EXPECT_EQ(p.gamma, (CurveClass{1, 1, 1}));
}

TEST(Product, MatchesHatFunctionOracle) {
  for (const auto& fan : builtin_fans()) {
    auto phi = build_phi(fan);
    auto rays = plain_rays(fan);
    for (int a0 = -2; a0 <= 2; ++a0)
      for (int a1 = -2; a1 <= 2; ++a1)
        for (int b0 = -2; b0 <= 2; ++b0)
          for (int b1 = -2; b1 <= 2; ++b1) {
            auto p = toric_product(fan, phi, v2(a0, a1), v2(b0, b1));
            auto want = oracle::toric_gamma(rays, {a0, a1}, {b0, b1});
            EXPECT_EQ(p.gamma, CurveClass(want.begin(), want.end()))
                << a0 << "," << a1 << " * " << b0 << "," << b1;
            EXPECT_TRUE(fan.in_kernel(p.gamma));
          }
  }
}

TEST(Product, VanishesIffSharedCone) {
  for (const auto& fan : builtin_fans()) {
    auto phi = build_phi(fan);
    for (int a0 = -2; a0 <= 2; ++a0)
      for (int b1 = -2; b1 <= 2; ++b1) {
        auto a = v2(a0, 1), b = v2(-1, b1);
        EXPECT_EQ(is_zero(toric_product(fan, phi, a, b).gamma), fan.share_cone(a, b)) << a << b;
      }
  }
}

TEST(Product, StanleyReisner) {
  auto fan = Fan::projective_plane();
  EXPECT_EQ(stanley_reisner_product(fan, v2(1, 0), v2(0, 1)), v2(1, 1));
  EXPECT_FALSE(stanley_reisner_product(fan, v2(1, 0), v2(-1, 0)).has_value());
}

TEST(Weights, IdentityOnP1xP1) {
  auto fan = Fan::p1_times_p1();
  auto phi = build_phi(fan);
  auto a = v2(1, -1), b = v2(-2, 1);
  auto p = toric_product(fan, phi, a, b);
  auto lhs = weight(fan, a);
  auto rb = weight(fan, b);
  auto rs = weight(fan, a + b);
  auto rg = weight_class(p.gamma);
  for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_EQ(lhs[i] + rb[i], rs[i] + rg[i]);
}

TEST(Segments, LineAcrossP2) {
  auto fan = Fan::projective_plane();
  auto phi = build_phi(fan);
  AffineSegment l{q2("0,3/10"), v2(1, 0), std::nullopt, std::nullopt};
  auto both = segment_class_both(fan, phi, l);
  EXPECT_TRUE(both.agree());
  EXPECT_EQ(both.kink_sum, (CurveClass{1, 1, 1}));
}

TEST(Segments, FiniteSegmentAgree) {
  auto fan = Fan::blown_up_plane();
  auto phi = build_phi(fan);
  AffineSegment l{q2("1/3,-2/7"), v2(-2, 3), Rational(-1), Rational(2)};
  EXPECT_TRUE(segment_class_both(fan, phi, l).agree());
}

TEST(Segments, ThroughOriginRejected) {
  auto fan = Fan::projective_plane();
  auto phi = build_phi(fan);
  AffineSegment l{q2("0,0"), v2(1, 2), Rational(-1), Rational(1)};
  EXPECT_ANY_THROW(segment_class(fan, phi, l));
}

TEST(Spines, TripodBalancedAndRootIndependent) {
  auto fan = Fan::projective_plane();
  auto phi = build_phi(fan);
  auto q = tripod_root(fan, v2(1, 0), v2(-1, 0));
  auto s = tripod(v2(1, 0), v2(-1, 0), q);
  EXPECT_TRUE(unbalanced_vertices(s).empty());
  auto c0 = tree_class(fan, phi, s, 0);
  for (std::size_t r = 1; r < s.vertices.size(); ++r) EXPECT_EQ(tree_class(fan, phi, s, r), c0);
  EXPECT_EQ(c0, (CurveClass{1, 1, 1}));
}

TEST(Nef, PairingNonnegative) {
  for (const auto& fan : builtin_fans()) {
    auto phi = build_phi(fan);
    auto nef = fan.nef_sample();
    EXPECT_FALSE(nef.empty());
    auto g = toric_product(fan, phi, v2(2, -1), v2(-1, 2)).gamma;
    for (const auto& dvs : nef) EXPECT_GE(fan.intersect(dvs, g), 0);
  }
}

TEST(Kernel, BasisCoordinatesRoundTrip) {
  for (const auto& fan : builtin_fans()) {
    auto basis = fan.kernel_basis();
    EXPECT_EQ(basis.size(), fan.size() - 2);
    CurveClass c(fan.size(), 0);
    for (std::size_t i = 0; i < basis.size(); ++i) c += std::int64_t(i + 2) * basis[i];
    auto coords = fan.kernel_coordinates(c);
    for (std::size_t i = 0; i < coords.size(); ++i) EXPECT_EQ(coords[i], std::int64_t(i + 2));
  }
}
