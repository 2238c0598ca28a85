#include "kscatter/broken_lines.hpp"

#include <algorithm>

namespace kscatter {

namespace {

LatticeVector normalized(const LatticeVector& f) {
  LatticeVector p = f.primitive();
  for (std::size_t i = 0; i < p.rank(); ++i)
    if (p[i] != 0) return p[i] < 0 ? -p : p;
  return p;
}

struct RayHit {
  Rational s;
  RationalPoint point;
  std::vector<std::size_t> walls;
};

// Walls met by x + s*e for s > 0, grouped by parameter. `current` is the
// hyperplane the walk is leaving (if any).
std::vector<RayHit> ray_hits(const ScatteringDiagram& d, const RationalPoint& x, const LatticeVector& e,
                             const std::optional<LatticeVector>& current) {
  std::vector<RayHit> hits;
  const RationalPoint dir(e);
  const auto& walls = d.walls();
  for (std::size_t wi = 0; wi < walls.size(); ++wi) {
    const Wall& w = walls[wi];
    Rational hx = dot(w.functional, x);
    std::int64_t he = dot(w.functional, e);
    if (he == 0) {
      if (sgn(hx) == 0 && w.support.contains(x)) {
        throw Error(ErrorCode::NonGenericEndpoint, "broken line runs inside wall " + std::to_string(wi));
      }
      continue;
    }
    Rational s = -hx / Rational(static_cast<long>(he));
    if (sgn(s) == 0) {
      bool leaving = current && normalized(*current) == normalized(w.functional);
      if (!leaving && w.support.contains(x)) {
        throw Error(ErrorCode::NonGenericEndpoint, "bend point " + x.to_string() + " meets a second wall");
      }
      continue;
    }
    if (sgn(s) < 0) continue;
    RationalPoint p = x + s * dir;
    auto loc = w.support.locate(p);
    if (loc == ConeLocation::Outside) continue;
    if (loc == ConeLocation::Boundary) {
      throw Error(ErrorCode::NonGenericEndpoint, "broken line meets the boundary of wall " + std::to_string(wi) +
                                                     " at " + p.to_string());
    }
    auto it = std::find_if(hits.begin(), hits.end(), [&](const RayHit& h) { return h.s == s; });
    if (it == hits.end()) {
      hits.push_back({s, std::move(p), {wi}});
    } else {
      if (normalized(walls[it->walls.front()].functional) != normalized(w.functional)) {
        throw Error(ErrorCode::NonGenericEndpoint, "two walls meet a broken line at " + it->point.to_string());
      }
      it->walls.push_back(wi);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) { return a.s < b.s; });
  return hits;
}

// Product of f_w^{|<n_w, e>|} over the walls of a crossing group, offsets of degree <= budget.
TruncatedMonoidSeries crossing_factor(const ScatteringDiagram& d, const std::vector<std::size_t>& group,
                                      const LatticeVector& e, std::int64_t budget) {
  TruncatedMonoidSeries g = TruncatedMonoidSeries::one(d.monoid(), budget);
  for (auto wi : group) {
    const Wall& w = d.walls()[wi];
    std::int64_t a = dot(w.functional, e);
    if (a < 0) a = -a;
    auto poly = w.function.power(a, w.function.order() - budget);
    TruncatedMonoidSeries f(d.monoid(), LatticeVector(d.rank()), budget);
    LatticeVector q(d.rank());
    for (std::size_t j = 0; j < poly.size(); ++j) {
      if (j) q += w.direction();
      f.add_term(q, poly[j]);
    }
    g = g * f;
  }
  return g;
}

struct Enumerator {
  const ScatteringDiagram& d;
  const LatticeVector& m;
  const RationalPoint& q;
  std::vector<BrokenLineSegment> reversed;
  std::vector<BrokenLine> out;

  void finish() {
    BrokenLine line{m, q, {reversed.rbegin(), reversed.rend()}};
    out.push_back(std::move(line));
  }

  // The walk is at x heading backwards in time; the newest entry of
  // `reversed` carries z^e and, for now, the coefficient of the bend that
  // created it.
  void explore(const RationalPoint& x, const LatticeVector& e, const std::optional<LatticeVector>& current) {
    if (e == m) {
      reversed.back().start.reset();
      finish();
      return;
    }
    const auto& monoid = *d.monoid();
    std::int64_t budget = *monoid.degree(e - m);
    for (auto& hit : ray_hits(d, x, e, current)) {
      auto factor = crossing_factor(d, hit.walls, e, budget);
      for (const auto& [p, c] : factor.terms()) {
        if (p.is_zero()) continue;
        LatticeVector prev = e - p;
        if (!monoid.contains(prev - m)) continue;
        reversed.back().start = hit.point;
        reversed.push_back({prev, c, std::nullopt, hit.point});
        explore(hit.point, prev, d.walls()[hit.walls.front()].functional);
        reversed.pop_back();
      }
    }
    reversed.back().start.reset();
  }
};

}  // namespace

std::vector<LatticeVector> basepoint_conditions(const ScatteringDiagram& d, const LatticeVector& m, std::int64_t k) {
  auto out = d.wall_functionals();
  if (d.rank() == 2) {
    for (const auto& p : d.monoid()->elements_up_to(k)) {
      LatticeVector e = m + p;
      if (!e.is_zero()) out.push_back(normalized(LatticeVector{-e[1], e[0]}));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void certify_basepoint(const ScatteringDiagram& d, const LatticeVector& m, const RationalPoint& q, std::int64_t k) {
  if (q.rank() != d.rank()) throw Error(ErrorCode::DimensionMismatch, "basepoint rank differs from diagram rank");
  for (const auto& f : basepoint_conditions(d, m, k)) {
    if (sgn(dot(f, q)) == 0) {
      throw Error(ErrorCode::NonGenericEndpoint, "basepoint " + q.to_string() + " lies on the hyperplane " +
                                                     f.to_string() + " . x = 0");
    }
  }
}

std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& d, const LatticeVector& m,
                                               const RationalPoint& q, std::int64_t k) {
  if (m.rank() != d.rank()) throw Error(ErrorCode::DimensionMismatch, "exponent rank differs from diagram rank");
  if (k < 0 || k > d.order()) {
    throw Error(ErrorCode::OrderMismatch, "order " + std::to_string(k) + " exceeds diagram order " +
                                              std::to_string(d.order()));
  }
  certify_basepoint(d, m, q, k);
  Enumerator en{d, m, q, {}, {}};
  for (const auto& p : d.monoid()->elements_up_to(k)) {
    en.reversed.push_back({m + p, 1, std::nullopt, q});
    en.explore(q, m + p, std::nullopt);
    en.reversed.pop_back();
  }
  for (auto& line : en.out) {
    // each segment holds the coefficient of the bend that ends it; turn
    // these into running products
    Integer c = 1;
    for (auto& seg : line.segments) {
      Integer bend = seg.coefficient;
      seg.coefficient = c;
      c *= bend;
    }
  }
  for (const auto& line : en.out) {
    if (auto why = validate_broken_line(d, line, k)) throw Error(ErrorCode::Internal, "enumerated broken line invalid: " + *why);
  }
  return en.out;
}

std::optional<std::string> validate_broken_line(const ScatteringDiagram& d, const BrokenLine& line, std::int64_t k) {
  const auto& monoid = *d.monoid();
  const auto& segs = line.segments;
  if (segs.empty()) return "no segments";
  if (segs.front().exponent != line.m) return "first exponent differs from m";
  if (segs.front().coefficient != 1) return "first coefficient is not 1";
  if (segs.front().start) return "first segment is bounded";
  if (!(segs.back().end == line.endpoint)) return "line does not end at the basepoint";
  auto total = monoid.degree(segs.back().exponent - line.m);
  if (!total || *total > k) return "final exponent outside m + P of degree <= k";
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const auto& prev = segs[i - 1];
    const auto& seg = segs[i];
    if (!seg.start) return "bounded segment without a start";
    if (!(*seg.start == prev.end)) return "segments do not join";
    LatticeVector inc = seg.exponent - prev.exponent;
    auto dinc = monoid.degree(inc);
    if (!dinc || *dinc == 0) return "exponent increment not in P \\ 0";
    std::vector<std::size_t> group;
    for (std::size_t wi = 0; wi < d.walls().size(); ++wi) {
      const Wall& w = d.walls()[wi];
      if (sgn(dot(w.functional, *seg.start)) != 0) continue;
      auto loc = w.support.locate(*seg.start);
      if (loc == ConeLocation::Boundary) return "bend on a wall boundary";
      if (loc == ConeLocation::RelativeInterior) group.push_back(wi);
    }
    if (group.empty()) return "bend away from every wall";
    auto factor = crossing_factor(d, group, prev.exponent, *total);
    if (sgn(prev.coefficient) == 0 || seg.coefficient != prev.coefficient * factor.coefficient(inc)) {
      return "bend coefficient does not match the wall function";
    }
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (!segs[i].start) continue;
    RationalPoint delta = segs[i].end - *segs[i].start;
    // delta must be a positive multiple of -exponent
    RationalPoint v(-segs[i].exponent);
    std::optional<Rational> ratio;
    for (std::size_t j = 0; j < v.rank(); ++j) {
      if (sgn(v[j]) == 0) {
        if (sgn(delta[j]) != 0) return "segment not parallel to its velocity";
        continue;
      }
      Rational r = delta[j] / v[j];
      if (ratio && *ratio != r) return "segment not parallel to its velocity";
      ratio = r;
    }
    if (!ratio || sgn(*ratio) <= 0) return "segment runs against its velocity";
  }
  return std::nullopt;
}

ThetaFunction theta(const ScatteringDiagram& d, const LatticeVector& m, const RationalPoint& q, std::int64_t k) {
  auto lines = enumerate_broken_lines(d, m, q, k);
  TruncatedMonoidSeries table(d.monoid(), m, k);
  for (const auto& line : lines) table.add_term(line.final_segment().exponent - m, line.final_segment().coefficient);
  return {m, q, std::move(table)};
}

bool theta_consistency_check(const ScatteringDiagram& d, const LatticeVector& m, const Wall& wall, std::int64_t k) {
  const auto own = wall.functional.is_zero() ? wall.functional : normalized(wall.functional);
  auto conditions = basepoint_conditions(d, m, k);
  std::vector<LatticeVector> others;
  for (const auto& f : conditions)
    if (f != own) others.push_back(f);
  const auto& gens = wall.support.generators();
  if (gens.empty()) throw Error(ErrorCode::InvalidArgument, "wall with empty support");

  for (std::size_t attempt = 0; attempt < 64; ++attempt) {
    Rational t(static_cast<long>(attempt + 3), static_cast<long>(2 * attempt + 7));
    RationalPoint x(d.rank());
    Rational w = t;
    for (const auto& g : gens) {
      x += w * RationalPoint(g);
      w *= t;
    }
    if (!wall.support.in_relative_interior(x)) continue;
    if (std::any_of(others.begin(), others.end(), [&](const LatticeVector& f) { return sgn(dot(f, x)) == 0; })) continue;
    RationalPoint v = generic_point(d.rank(), std::nullopt, {wall.functional}, attempt).point;
    Rational delta = 1;
    for (const auto& f : others) {
      Rational fv = dot(f, v);
      if (sgn(fv) == 0) continue;
      Rational bound = abs(dot(f, x)) / (2 * abs(fv));
      if (bound < delta) delta = bound;
    }
    RationalPoint a = x + delta * v;
    RationalPoint b = x - delta * v;
    try {
      auto ta = theta(d, m, a, k);
      auto tb = theta(d, m, b, k);
      auto image = path_ordered_product(d, StraightPath::segment(a, b), ta.table);
      return image == tb.table;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonGenericEndpoint && e.code() != ErrorCode::NonTransversalPath) throw;
    }
  }
  throw Error(ErrorCode::NonGenericEndpoint, "no generic point found on the wall");
}

namespace {

int half_plane(const RationalPoint& v) {
  if (sgn(v[1]) > 0 || (sgn(v[1]) == 0 && sgn(v[0]) > 0)) return 0;
  return 1;
}

int compare_angle_q(const RationalPoint& a, const RationalPoint& b) {
  int ha = half_plane(a), hb = half_plane(b);
  if (ha != hb) return ha < hb ? -1 : 1;
  int s = sgn(a[0] * b[1] - a[1] * b[0]);
  return -s;
}

// x strictly inside the counterclockwise sector from a to b
bool in_sector(const RationalPoint& x, const RationalPoint& a, const RationalPoint& b) {
  int xa = compare_angle_q(x, a), xb = compare_angle_q(x, b);
  if (xa == 0 || xb == 0) return false;
  int ab = compare_angle_q(a, b);
  if (ab < 0) return xa > 0 && xb < 0;
  return xa > 0 || xb < 0;
}

}  // namespace

std::vector<RationalPoint> chamber_points(const ScatteringDiagram& d, const std::vector<LatticeVector>& extra_avoid) {
  if (d.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "chambers are enumerated in rank 2");
  std::vector<LatticeVector> rays;
  for (const auto& w : d.walls())
    for (const auto& g : w.support.generators()) rays.push_back(g);
  std::sort(rays.begin(), rays.end(), [](const LatticeVector& a, const LatticeVector& b) { return compare_angle(a, b) < 0; });
  rays.erase(std::unique(rays.begin(), rays.end(), [](const LatticeVector& a, const LatticeVector& b) { return compare_angle(a, b) == 0; }),
             rays.end());
  auto avoid = d.wall_functionals();
  avoid.insert(avoid.end(), extra_avoid.begin(), extra_avoid.end());

  auto pick = [&](const RationalPoint& seed, auto inside) {
    RationalPoint rot(std::vector<Rational>{-seed[1], seed[0]});
    for (long a = 0; a < 4096; ++a) {
      Rational t(1, 2 * a + 5);
      RationalPoint x = seed + t * rot;
      if (!inside(x)) continue;
      if (std::any_of(avoid.begin(), avoid.end(), [&](const LatticeVector& f) { return sgn(dot(f, x)) == 0; })) continue;
      return x;
    }
    throw Error(ErrorCode::Internal, "no generic point in chamber");
  };

  std::vector<RationalPoint> out;
  if (rays.empty()) {
    out.push_back(generic_point(2, std::nullopt, avoid).point);
    return out;
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    RationalPoint a(rays[i]);
    RationalPoint b(rays[(i + 1) % rays.size()]);
    RationalPoint seed;
    if (rays.size() == 1) {
      seed = Rational(-1) * a;
    } else if (sgn(a[0] * b[1] - a[1] * b[0]) > 0) {
      seed = a + b;
    } else {
      seed = RationalPoint(std::vector<Rational>{-a[1], a[0]});
    }
    out.push_back(pick(seed, [&](const RationalPoint& x) { return rays.size() == 1 ? compare_angle_q(x, a) != 0 : in_sector(x, a, b); }));
  }
  return out;
}

std::vector<int> chamber_signature(const ScatteringDiagram& d, const RationalPoint& x) {
  std::vector<int> sig;
  for (const auto& f : d.wall_functionals()) sig.push_back(sgn(dot(f, x)));
  return sig;
}

ThetaFunction theta_in_chamber(const ScatteringDiagram& d, const LatticeVector& m, std::size_t chamber, std::int64_t k) {
  auto points = chamber_points(d, basepoint_conditions(d, m, k));
  if (chamber >= points.size()) throw Error(ErrorCode::InvalidArgument, "chamber index out of range");
  return theta(d, m, points[chamber], k);
}

}  // namespace kscatter
