#pragma once

// Independent reference computations used by the test suites. Nothing here
// calls into the library's scattering, broken-line or toric code; inputs and
// outputs are plain integers so results can be compared and frozen.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Exp = std::array<int, 2>;

// Rank-2 completion of the diagram with two initial lines 1 + x, 1 + y and
// skew pairing <e1,e2> = s, by brute-force loop products on dense bivariate
// series. Returns primitive direction -> coefficients c_1..c_J of
// f = 1 + sum c_j t^j, t = x^a y^b (initial lines included).
std::map<Exp, std::vector<mpz_class>> scatter_rank2(int s, int order);

// Coefficient of t^j in (1 - t)^(-n).
mpz_class negative_binomial(int n, int j);

// Toric curve class of theta_a * theta_b on a smooth complete rank-2 fan,
// as intersection numbers with the boundary divisors. Uses the hat
// functions psi_j (1 on ray j, 0 on the other rays, linear on cones):
// D_j . gamma = psi_j(a) + psi_j(b) - psi_j(a + b). Rays in counterclockwise
// order.
std::vector<std::int64_t> toric_gamma(const std::vector<Exp>& rays, Exp a, Exp b);

// psi_j(v) on the fan; exposed for tests.
std::int64_t hat(const std::vector<Exp>& rays, std::size_t j, Exp v);

// A2 cluster variables x3, x4, x5 as exponent -> coefficient, x_i written
// over the common monomial denominator: value = numerator / (x1^d1 x2^d2).
struct Fraction {
  std::map<Exp, int> numerator;
  Exp denominator;
};
std::vector<Fraction> a2_cluster_variables();

}  // namespace oracle
