#include "kscatter/verify.hpp"

#include <algorithm>
#include <sstream>

namespace kscatter {

std::uint64_t SplitMix::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t SplitMix::uniform(std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

namespace {

CheckResult result(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

std::string str(std::size_t n) { return std::to_string(n); }

LatticeVector random_point(SplitMix& rng, std::size_t rank, std::int64_t radius) {
  LatticeVector v(rank);
  for (std::size_t i = 0; i < rank; ++i) v[i] = rng.uniform(-radius, radius);
  return v;
}

LatticeVector sum_of(const std::vector<LatticeVector>& ps, std::size_t rank) {
  LatticeVector s(rank);
  for (const auto& p : ps) s += p;
  return s;
}

}  // namespace

// ---------------------------------------------------------------- diagram checks

CheckResult check_consistency(const ScatteringDiagram& d, std::size_t loops, SplitMix& rng) {
  std::size_t bad = 0;
  std::string first;
  for (std::size_t i = 0; i < loops; ++i) {
    auto attempt = static_cast<std::size_t>(rng.uniform(0, 999));
    if (!loop_is_identity(d, generic_loop(d, attempt))) {
      if (!bad) first = " (first failure: loop " + str(attempt) + ")";
      ++bad;
    }
  }
  return result("consistency", bad == 0,
                str(loops - bad) + "/" + str(loops) + " generic loops are the identity mod J^" +
                    std::to_string(d.order() + 1) + first);
}

CheckResult check_wall_form(const ScatteringDiagram& d) {
  const auto& seed = d.seed();
  for (const auto& w : d.walls()) {
    const auto& n = w.direction();
    auto deg = seed.monoid()->degree(n);
    if (!deg || *deg == 0 || !n.is_primitive())
      return result("wall_form", false, "wall direction " + n.to_string() + " is not a primitive element of P");
    if (w.functional != seed.form().functional(n).primitive() && w.functional != seed.form().functional(n))
      return result("wall_form", false, "wall " + n.to_string() + " has a foreign normal");
    for (const auto& g : w.support.generators())
      if (dot(w.functional, g) != 0) return result("wall_form", false, "support leaves the hyperplane of " + n.to_string());
    if (!w.function.all_coefficients_nonnegative())
      return result("wall_form", false, "wall " + n.to_string() + " has a negative coefficient: " + w.function.to_string());
  }
  return result("wall_form", true,
                str(d.walls().size()) + " walls of the form 1 + sum c_j z^(j n0) with c_j >= 0");
}

CheckResult check_cwall_confinement(const ScatteringDiagram& d) {
  if (d.rank() != 2) return result("cwall_confinement", false, "rank 2 only");
  auto cwalls = cwall_supports(d.seed(), d.order());
  std::size_t generated = 0;
  for (const auto& w : d.walls()) {
    if (w.is_initial()) continue;
    ++generated;
    if (is_incoming(w)) return result("cwall_confinement", false, "generated wall " + w.direction().to_string() + " is incoming");
    bool inside = std::any_of(cwalls.begin(), cwalls.end(), [&](const CWall& c) {
      return c.monomial.primitive() == w.direction() && w.support.is_subset_of(c.support);
    });
    if (!inside)
      return result("cwall_confinement", false, "generated wall " + w.direction().to_string() + " lies in no C-wall");
  }
  return result("cwall_confinement", true,
                str(generated) + " generated walls inside " + str(cwalls.size()) + " C-walls, none incoming");
}

CheckResult check_theta_consistency(const ScatteringDiagram& d, const std::vector<LatticeVector>& ms, std::int64_t k) {
  std::size_t checks = 0;
  for (const auto& w : d.walls()) {
    for (const auto& m : ms) {
      ++checks;
      if (!theta_consistency_check(d, m, w, k)) {
        return result("theta_consistency", false,
                      "theta_" + m.to_string() + " jumps across wall " + w.direction().to_string());
      }
    }
  }
  return result("theta_consistency", true, str(checks) + " wall/exponent pairs at order " + std::to_string(k));
}

AlgebraChecks check_algebra(const MirrorAlgebra& algebra, std::int64_t k, std::size_t triples, std::size_t tuples,
                            SplitMix& rng) {
  const auto& d = algebra.diagram();
  const auto& monoid = *d.monoid();
  const std::size_t r = d.rank();
  AlgebraChecks out;
  std::size_t tables = 0, negative = 0, nonconvex = 0, theta_tables = 0;
  std::string neg_detail, conv_detail;

  auto screen = [&](const std::vector<LatticeVector>& ps, const StructureConstantTable& t) {
    ++tables;
    LatticeVector s = sum_of(ps, r);
    for (const auto& [q, c] : t.entries) {
      if (sgn(c) < 0 && !negative++) neg_detail = "negative constant at q=" + q.to_string();
      auto deg = monoid.degree(q - s);
      if ((!deg || *deg > k) && !nonconvex++) conv_detail = "q=" + q.to_string() + " outside sum + P<=k";
    }
    for (const auto& p : ps) {
      ++theta_tables;
      if (!algebra.theta_table(p, t.basepoint, k).all_coefficients_nonnegative() && !negative++)
        neg_detail = "negative theta coefficient in theta_" + p.to_string();
    }
  };
  auto table = [&](const std::vector<LatticeVector>& ps, std::int64_t order) {
    auto t = algebra.structure_constants(ps, order);
    screen(ps, t);
    return t;
  };
  auto basis = [&](const LatticeVector& p) { return ThetaExpansion::basis(d.monoid(), p, k); };

  // commutativity, associativity
  std::size_t comm_bad = 0, assoc_bad = 0;
  std::string comm_detail, assoc_detail;
  for (std::size_t i = 0; i < triples; ++i) {
    LatticeVector a = random_point(rng, r, 2), b = random_point(rng, r, 2), c = random_point(rng, r, 2);
    auto ab = table({a, b}, k), ba = table({b, a}, k);
    auto abc = table({a, b, c}, k), cab = table({c, a, b}, k), bca = table({b, c, a}, k);
    if (ab.entries != ba.entries || abc.entries != cab.entries || abc.entries != bca.entries) {
      if (!comm_bad++) comm_detail = " (first failure at " + a.to_string() + b.to_string() + c.to_string() + ")";
    }
    auto left = algebra.multiply(algebra.multiply(basis(a), basis(b)), basis(c));
    auto right = algebra.multiply(basis(a), algebra.multiply(basis(b), basis(c)));
    ThetaExpansion direct(d.monoid(), a + b + c, k);
    for (const auto& [q, v] : abc.entries) direct.add(q, v);
    if (!(left == right) || !(left == direct)) {
      if (!assoc_bad++) assoc_detail = " (first failure at " + a.to_string() + b.to_string() + c.to_string() + ")";
    }
  }
  out.commutativity = result("commutativity", comm_bad == 0,
                             str(triples - comm_bad) + "/" + str(triples) + " input permutations agree" + comm_detail);
  out.associativity = result("associativity", assoc_bad == 0,
                             str(triples - assoc_bad) + "/" + str(triples) +
                                 " triples with (ab)c = a(bc) = three-fold table" + assoc_detail);

  // unit law
  std::size_t unit_bad = 0;
  const LatticeVector zero(r);
  for (std::size_t i = 0; i < triples; ++i) {
    LatticeVector a = random_point(rng, r, 2);
    auto t = table({zero, a}, k);
    if (t.entries != std::map<LatticeVector, Integer>{{a, Integer(1)}}) ++unit_bad;
  }
  out.unit = result("unit", unit_bad == 0, str(triples - unit_bad) + "/" + str(triples) + " products theta_0 theta_a = theta_a");

  // Frobenius
  std::size_t frob_bad = 0;
  std::string frob_detail;
  for (std::size_t i = 0; i < tuples; ++i) {
    auto n = static_cast<std::size_t>(rng.uniform(2, 4));
    std::vector<ThetaExpansion> as;
    for (std::size_t j = 0; j < n; ++j) {
      LatticeVector p = random_point(rng, r, 2);
      ThetaExpansion e = ThetaExpansion::basis(d.monoid(), p, k, Integer(rng.uniform(1, 3)));
      if (rng.uniform(0, 1)) {
        auto gen = monoid.generators()[static_cast<std::size_t>(rng.uniform(0, monoid.generators().size() - 1))];
        e.add(p + LatticeVector::unit(r, gen), Integer(rng.uniform(-2, 2)));
      }
      as.push_back(std::move(e));
    }
    Integer lhs = algebra.pairing_direct(as), rhs = algebra.pairing(as);
    if (lhs != rhs && !frob_bad++) frob_detail = " (first failure: " + lhs.get_str() + " vs " + rhs.get_str() + ")";
  }
  out.frobenius = result("frobenius", frob_bad == 0,
                         str(tuples - frob_bad) + "/" + str(tuples) + " tuples with pairing = trace of product" + frob_detail);

  // basepoint independence: five points in one cell, then one per chamber
  std::size_t indep_bad = 0, indep_points = 0;
  for (std::size_t i = 0; i < std::max<std::size_t>(2, triples / 4); ++i) {
    std::vector<LatticeVector> ps{random_point(rng, r, 2), random_point(rng, r, 2)};
    auto ref = table(ps, k);
    for (const auto& z : algebra.basepoints_in_cell(ps, k, ref.basepoint, 5)) {
      ++indep_points;
      auto t = algebra.structure_constants(ps, k, z);
      screen(ps, t);
      if (t.entries != ref.entries) ++indep_bad;
    }
    for (const auto& z : chamber_points(d, algebra.table_conditions(ps, k))) {
      ++indep_points;
      auto t = algebra.structure_constants(ps, k, z);
      screen(ps, t);
      if (t.entries != ref.entries) ++indep_bad;
    }
  }
  out.basepoint_independence =
      result("basepoint_independence", indep_bad == 0,
             str(indep_points - indep_bad) + "/" + str(indep_points) + " basepoints reproduce the reference table");

  out.positivity = result("positivity", negative == 0,
                          negative ? neg_detail
                                   : str(tables) + " tables and " + str(theta_tables) + " theta tables nonnegative");
  out.convexity = result("convexity", nonconvex == 0,
                         nonconvex ? conv_detail : "every q - sum p lies in P with degree <= " + std::to_string(k));
  return out;
}

CheckResult check_exchange(const ScatteringDiagram& d, std::int64_t k) {
  auto report = compare_exchange(d, ClusterSeed::from_seed(d.seed()), k);
  std::size_t ok = 0;
  std::string first;
  for (const auto& rel : report.relations) {
    if (rel.matched) {
      ++ok;
    } else if (first.empty()) {
      first = " (relation " + str(rel.step) + " mismatched)";
    }
  }
  std::size_t dict = 0;
  for (const auto& e : report.dictionary) dict += e.matched;
  return result("exchange_relations", report.all_matched(),
                str(ok) + "/" + str(report.relations.size()) + " exchange relations and " + str(dict) + "/" +
                    str(report.dictionary.size()) + " cluster variables matched" + first);
}

VerifyReport verify_diagram(const ScatteringDiagram& d, const VerifyOptions& options) {
  if (d.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "the verification battery is rank 2 only");
  VerifyReport report;
  std::ostringstream target;
  target << "diagram rank " << d.rank() << " order " << d.order() << " walls " << d.walls().size();
  report.target = target.str();
  SplitMix rng(options.rng_seed);
  const std::int64_t ka = options.algebra_order.value_or(std::min<std::int64_t>(d.order(), 5));
  const std::int64_t kt = options.theta_order.value_or(std::min<std::int64_t>(d.order(), 6));
  if (ka > d.order() || kt > d.order()) throw Error(ErrorCode::OrderMismatch, "check order exceeds the diagram order");

  report.checks.push_back(check_consistency(d, options.full ? 64 : 8, rng));
  report.checks.push_back(check_wall_form(d));
  report.checks.push_back(check_cwall_confinement(d));
  std::vector<LatticeVector> ms;
  for (auto i : d.seed().unfrozen()) {
    ms.push_back(d.seed().basis(i));
    ms.push_back(-d.seed().basis(i));
  }
  if (!d.seed().unfrozen().empty()) {
    LatticeVector s(d.rank());
    for (auto i : d.seed().unfrozen()) s += d.seed().basis(i);
    ms.push_back(s);
  }
  report.checks.push_back(check_theta_consistency(d, ms, kt));
  MirrorAlgebra algebra(d);
  auto a = check_algebra(algebra, ka, options.full ? 20 : 4, options.full ? 20 : 4, rng);
  for (auto* c : {&a.commutativity, &a.associativity, &a.unit, &a.frobenius, &a.positivity, &a.convexity,
                  &a.basepoint_independence})
    report.checks.push_back(std::move(*c));
  const auto& seed = d.seed();
  if (seed.unfrozen().size() == 2 && seed.unfrozen_functionals_primitive())
    report.checks.push_back(check_exchange(d, std::min<std::int64_t>(d.order(), 4)));
  return report;
}

// ---------------------------------------------------------------- toric

VerifyReport verify_toric(const Fan& fan, const VerifyOptions& options) {
  VerifyReport report;
  std::ostringstream target;
  target << "fan with " << fan.size() << " rays";
  report.target = target.str();
  SplitMix rng(options.rng_seed);
  const std::size_t samples = options.full ? 100 : 20;
  auto phi = build_phi(fan);
  auto gamma = [&](const LatticeVector& a, const LatticeVector& b) { return toric_product(fan, phi, a, b).gamma; };
  std::vector<CurveClass> produced;

  std::size_t weight_bad = 0, root_bad = 0, vanish_bad = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    LatticeVector a = random_point(rng, 2, 4), b = random_point(rng, 2, 4);
    auto p = toric_product(fan, phi, a, b);
    produced.push_back(p.gamma);
    if (weight(fan, a) + weight(fan, b) != weight(fan, a + b) + weight_class(p.gamma)) ++weight_bad;
    if (toric_product(fan, phi, a, b, 7).gamma != p.gamma) ++root_bad;
    if (is_zero(p.gamma) != fan.share_cone(a, b)) ++vanish_bad;
  }
  report.checks.push_back(result("weight_identity", weight_bad == 0,
                                 str(samples - weight_bad) + "/" + str(samples) + " pairs with w(a)+w(b) = w(a+b)+w(gamma)"));
  report.checks.push_back(result("root_independence", root_bad == 0,
                                 str(samples - root_bad) + "/" + str(samples) + " classes unchanged under a new root"));

  std::size_t cocycle_bad = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    LatticeVector a = random_point(rng, 2, 3), b = random_point(rng, 2, 3), c = random_point(rng, 2, 3);
    auto ab = gamma(a, b), ab_c = gamma(a + b, c), a_bc = gamma(a, b + c), bc = gamma(b, c);
    for (const auto* g : {&ab, &ab_c, &a_bc, &bc}) produced.push_back(*g);
    if (ab + ab_c != a_bc + bc) ++cocycle_bad;
  }
  report.checks.push_back(result("cocycle", cocycle_bad == 0,
                                 str(samples - cocycle_bad) + "/" + str(samples) +
                                     " triples with gamma(a,b)+gamma(a+b,c) = gamma(a,b+c)+gamma(b,c)"));
  report.checks.push_back(result("vanishing", vanish_bad == 0,
                                 str(samples - vanish_bad) + "/" + str(samples) + " pairs with gamma = 0 iff a, b share a cone"));

  std::size_t seg_ok = 0, seg_bad = 0, seg_tries = 0;
  while (seg_ok + seg_bad < samples) {
    if (++seg_tries > 100 * samples) break;
    RationalPoint anchor(std::vector<Rational>{Rational(rng.uniform(-20, 20), rng.uniform(1, 7)),
                                               Rational(rng.uniform(-20, 20), rng.uniform(1, 7))});
    anchor[0].canonicalize();
    anchor[1].canonicalize();
    LatticeVector v = random_point(rng, 2, 3);
    if (v.is_zero()) continue;
    AffineSegment l{anchor, v, std::nullopt, std::nullopt};
    auto kind = rng.uniform(0, 3);
    if (kind & 1) l.t_start = Rational(rng.uniform(-8, 0), rng.uniform(1, 3));
    if (kind & 2) l.t_end = Rational(rng.uniform(1, 8), rng.uniform(1, 3));
    if (l.t_start) l.t_start->canonicalize();
    if (l.t_end) l.t_end->canonicalize();
    try {
      auto both = segment_class_both(fan, phi, l);
      produced.push_back(both.kink_sum);
      (both.agree() && fan.in_kernel(both.kink_sum) ? seg_ok : seg_bad)++;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonTransversalPath && e.code() != ErrorCode::NonGenericEndpoint) throw;
    }
  }
  report.checks.push_back(result("segment_formulas", seg_bad == 0 && seg_ok == samples,
                                 str(seg_ok) + "/" + str(samples) + " segments with kink sum = endpoint difference"));

  auto nef = fan.nef_sample();
  std::size_t nef_bad = 0;
  for (const auto& g : produced)
    for (const auto& f : nef)
      if (fan.intersect(f, g) < 0) ++nef_bad;
  report.checks.push_back(result("nef_pairing", nef_bad == 0,
                                 str(produced.size()) + " classes against " + str(nef.size()) + " nef divisors, " +
                                     str(nef_bad) + " negative pairings"));

  std::size_t sr_bad = 0, sr_total = 0;
  for (std::int64_t ax = -2; ax <= 2; ++ax)
    for (std::int64_t ay = -2; ay <= 2; ++ay)
      for (std::int64_t bx = -2; bx <= 2; ++bx)
        for (std::int64_t by = -2; by <= 2; ++by) {
          LatticeVector a{ax, ay}, b{bx, by};
          ++sr_total;
          auto g = gamma(a, b);
          std::optional<LatticeVector> degenerate;
          if (is_zero(g)) degenerate = a + b;
          if (degenerate != stanley_reisner_product(fan, a, b)) ++sr_bad;
        }
  report.checks.push_back(result("stanley_reisner", sr_bad == 0,
                                 str(sr_total - sr_bad) + "/" + str(sr_total) + " products agree with the degenerate rule"));
  return report;
}

}  // namespace kscatter
