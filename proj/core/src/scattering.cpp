#include "kscatter/scattering.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kscatter {

namespace {

LatticeVector normalized_functional(const LatticeVector& f) {
  LatticeVector p = f.primitive();
  for (std::size_t i = 0; i < p.rank(); ++i) {
    if (p[i] != 0) return p[i] < 0 ? -p : p;
  }
  return p;
}

bool same_hyperplane(const LatticeVector& a, const LatticeVector& b) {
  return normalized_functional(a) == normalized_functional(b);
}

// generator of a rank-2 support used as its angular sort key
LatticeVector angle_key(const Cone& c) {
  const auto& g = c.generators();
  if (g.empty()) return LatticeVector(c.rank());
  LatticeVector best = g.front();
  for (const auto& v : g)
    if (compare_angle(v, best) < 0) best = v;
  return best;
}

int half_plane(const LatticeVector& v) {
  // 0 for angles in [0, pi), 1 for [pi, 2pi)
  if (v[1] > 0 || (v[1] == 0 && v[0] > 0)) return 0;
  return 1;
}

}  // namespace

int compare_angle(const LatticeVector& a, const LatticeVector& b) {
  int ha = half_plane(a), hb = half_plane(b);
  if (ha != hb) return ha < hb ? -1 : 1;
  auto d = det2(a, b);
  if (d > 0) return -1;
  if (d < 0) return 1;
  return 0;
}

Wall make_wall(const Seed& seed, Cone support, WallFunction function, WallOrigin origin) {
  if (support.rank() != seed.rank() || function.direction().rank() != seed.rank())
    throw Error(ErrorCode::DimensionMismatch, "wall rank differs from seed rank");
  LatticeVector f = seed.form().functional(function.direction());
  if (f.is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "wall direction " + function.direction().to_string() +
                                                " pairs to zero with everything");
  }
  for (const auto& g : support.generators()) {
    if (dot(f, g) != 0) {
      throw Error(ErrorCode::InvalidArgument, "support generator " + g.to_string() + " is not orthogonal to " +
                                                  function.direction().to_string());
    }
  }
  return Wall{std::move(support), std::move(function), origin, f};
}

bool is_incoming(const Wall& wall) { return wall.support.contains(wall.direction()); }

bool is_incoming(const CWall& wall) { return wall.support.contains(wall.monomial); }

ScatteringDiagram::ScatteringDiagram(Seed seed, std::int64_t order) : seed_(std::move(seed)), order_(order) {
  if (order_ < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
}

void ScatteringDiagram::add_wall(Wall wall) {
  if (wall.function.order() != order_) throw Error(ErrorCode::OrderMismatch, "wall order differs from diagram order");
  for (auto& w : walls_) {
    if (w.support == wall.support && w.direction() == wall.direction()) {
      w.function = w.function.times(wall.function);
      return;
    }
  }
  walls_.push_back(std::move(wall));
}

void ScatteringDiagram::sort_walls() {
  const bool planar = rank() == 2;
  std::stable_sort(walls_.begin(), walls_.end(), [&](const Wall& a, const Wall& b) {
    if (planar) {
      int c = compare_angle(angle_key(a.support), angle_key(b.support));
      if (c != 0) return c < 0;
      if (a.support.generators().size() != b.support.generators().size())
        return a.support.generators().size() < b.support.generators().size();
    } else if (a.support.generators() != b.support.generators()) {
      return a.support.generators() < b.support.generators();
    }
    if (a.direction() != b.direction()) return a.direction() < b.direction();
    return a.origin < b.origin;
  });
}

ScatteringDiagram ScatteringDiagram::truncated(std::int64_t new_order) const {
  if (new_order > order_) throw Error(ErrorCode::OrderMismatch, "cannot raise the order of a diagram");
  ScatteringDiagram d(seed_, new_order);
  for (const auto& w : walls_) {
    Wall t = w;
    t.function = w.function.truncated(new_order);
    if (t.is_initial() || !t.function.is_trivial()) d.walls_.push_back(std::move(t));
  }
  return d;
}

std::vector<LatticeVector> ScatteringDiagram::wall_functionals() const {
  std::vector<LatticeVector> out;
  for (const auto& w : walls_) out.push_back(normalized_functional(w.functional));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ScatteringDiagram initial_diagram(const Seed& seed, std::int64_t order) {
  ScatteringDiagram d(seed, order);
  for (auto e : seed.unfrozen()) {
    LatticeVector dir = seed.basis(e);
    LatticeVector f = seed.form().functional(dir);
    d.add_wall(make_wall(seed, Cone::hyperplane(f), WallFunction::binomial(dir, order, *seed.monoid()),
                         WallOrigin::Initial));
  }
  d.sort_walls();
  return d;
}

TruncatedMonoidSeries cross(const Wall& wall, const LatticeVector& signed_normal, const TruncatedMonoidSeries& s) {
  if (s.order() > wall.function.order()) throw Error(ErrorCode::OrderMismatch, "series order exceeds wall order");
  const auto& monoid = *s.monoid();
  TruncatedMonoidSeries out(s.monoid(), s.base(), s.order());
  const LatticeVector& n0 = wall.direction();
  const std::int64_t shift = wall.function.order() - s.order();
  for (const auto& [p, c] : s.terms()) {
    std::int64_t e = dot(signed_normal, s.base() + p);
    if (e == 0) {
      out.add_term(p, c);
      continue;
    }
    auto poly = wall.function.power(e, *monoid.degree(p) + shift);
    LatticeVector q = p;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      if (j) q += n0;
      if (sgn(poly[j]) != 0) out.add_term(q, c * poly[j]);
    }
  }
  return out;
}

TruncatedMonoidSeries cross(const CrossingEvent& event, const TruncatedMonoidSeries& s) {
  return cross(*event.wall, event.signed_normal, s);
}

StraightPath StraightPath::loop(std::vector<RationalPoint> polygon) {
  if (polygon.size() < 3) throw Error(ErrorCode::InvalidArgument, "a loop needs at least three vertices");
  polygon.push_back(polygon.front());
  return {std::move(polygon)};
}

std::vector<CrossingEvent> crossings(const ScatteringDiagram& d, const StraightPath& path) {
  std::vector<CrossingEvent> all;
  const auto& walls = d.walls();
  for (const auto& v : path.vertices)
    if (v.rank() != d.rank()) throw Error(ErrorCode::DimensionMismatch, "path rank differs from diagram rank");
  for (std::size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    const RationalPoint& a = path.vertices[s];
    const RationalPoint& b = path.vertices[s + 1];
    std::vector<CrossingEvent> seg;
    for (std::size_t wi = 0; wi < walls.size(); ++wi) {
      const Wall& w = walls[wi];
      Rational ha = dot(w.functional, a);
      Rational hb = dot(w.functional, b);
      int sa = sgn(ha), sb = sgn(hb);
      if (sa == 0 && sb == 0) {
        throw Error(ErrorCode::NonTransversalPath, "segment " + std::to_string(s) + " lies in the hyperplane of wall " +
                                                       std::to_string(wi));
      }
      if (sa == 0 || sb == 0) {
        const RationalPoint& on = sa == 0 ? a : b;
        if (w.support.contains(on)) {
          throw Error(ErrorCode::NonTransversalPath, "path vertex " + on.to_string() + " lies on wall " +
                                                         std::to_string(wi));
        }
        continue;
      }
      if (sa == sb) continue;
      Rational t = ha / (ha - hb);
      RationalPoint x = a + t * (b - a);
      auto loc = w.support.locate(x);
      if (loc == ConeLocation::Outside) continue;
      if (loc == ConeLocation::Boundary) {
        throw Error(ErrorCode::NonTransversalPath, "path meets the boundary of wall " + std::to_string(wi) + " at " +
                                                       x.to_string());
      }
      CrossingEvent ev;
      ev.wall_index = wi;
      ev.wall = &w;
      ev.point = std::move(x);
      ev.signed_normal = sa > 0 ? w.functional : -w.functional;
      ev.parameter = t;
      ev.segment = s;
      seg.push_back(std::move(ev));
    }
    std::stable_sort(seg.begin(), seg.end(),
                     [](const CrossingEvent& x, const CrossingEvent& y) { return x.parameter < y.parameter; });
    for (std::size_t i = 1; i < seg.size(); ++i) {
      if (seg[i].parameter == seg[i - 1].parameter &&
          !same_hyperplane(seg[i].wall->functional, seg[i - 1].wall->functional)) {
        throw Error(ErrorCode::NonTransversalPath, "two walls are crossed at the same point " + seg[i].point.to_string());
      }
    }
    for (auto& ev : seg) all.push_back(std::move(ev));
  }
  return all;
}

TruncatedMonoidSeries path_ordered_product(const ScatteringDiagram& d, const StraightPath& path,
                                           const TruncatedMonoidSeries& s) {
  TruncatedMonoidSeries cur = s;
  for (const auto& ev : crossings(d, path)) cur = cross(ev, cur);
  return cur;
}

StraightPath generic_loop(const std::vector<LatticeVector>& avoid, std::size_t attempt) {
  static const std::int64_t dirs[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  for (const auto& f : avoid)
    if (f.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "generic loops are planar");
  for (std::size_t a = attempt; a < attempt + 4096; ++a) {
    Rational t(1, static_cast<long>(2 * a + 7));
    std::vector<RationalPoint> poly;
    bool ok = true;
    for (const auto& dir : dirs) {
      RationalPoint v(std::vector<Rational>{Rational(static_cast<long>(dir[0])) - t * static_cast<long>(dir[1]),
                                            Rational(static_cast<long>(dir[1])) + t * static_cast<long>(dir[0])});
      for (const auto& f : avoid)
        if (sgn(dot(f, v)) == 0) ok = false;
      poly.push_back(std::move(v));
    }
    if (ok) return StraightPath::loop(std::move(poly));
  }
  throw Error(ErrorCode::Internal, "no generic loop found");
}

StraightPath generic_loop(const ScatteringDiagram& d, std::size_t attempt) {
  if (d.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "generic loops are planar");
  auto avoid = d.wall_functionals();
  for (const auto& n : d.monoid()->elements_up_to(d.order()))
    if (!n.is_zero()) avoid.push_back(LatticeVector{-n[1], n[0]});
  return generic_loop(avoid, attempt);
}

bool loop_is_identity(const ScatteringDiagram& d, const StraightPath& loop) {
  for (std::size_t i = 0; i < d.rank(); ++i) {
    auto z = TruncatedMonoidSeries::monomial(d.monoid(), d.seed().basis(i), d.order());
    if (!(path_ordered_product(d, loop, z) == z)) return false;
  }
  return true;
}

ScatteringDiagram complete(const Seed& seed, std::int64_t order) {
  if (seed.rank() > 2) {
    throw Error(ErrorCode::UnsupportedRank, "completion is implemented for rank 2, got rank " +
                                                std::to_string(seed.rank()));
  }
  ScatteringDiagram d = initial_diagram(seed, order);
  if (seed.rank() < 2 || seed.unfrozen().size() < 2) return d;

  const auto& monoid = *seed.monoid();
  const StraightPath loop = generic_loop(d);

  for (std::int64_t level = 1; level <= order; ++level) {
    ScatteringDiagram dl = d.truncated(level);
    std::map<LatticeVector, std::vector<Integer>> defect;
    for (std::size_t i = 0; i < seed.rank(); ++i) {
      auto z = TruncatedMonoidSeries::monomial(seed.monoid(), seed.basis(i), level);
      auto img = path_ordered_product(dl, loop, z);
      for (const auto& [p, c] : img.terms()) {
        if (p.is_zero()) {
          if (c != 1) throw Error(ErrorCode::Internal, "loop changes the leading coefficient");
          continue;
        }
        if (*monoid.degree(p) < level) {
          throw Error(ErrorCode::Internal, "loop defect below order " + std::to_string(level) + " at " + p.to_string());
        }
        auto& row = defect[p];
        row.resize(seed.rank());
        row[i] = c;
      }
    }

    for (auto& [p, row] : defect) {
      row.resize(seed.rank());
      LatticeVector n0 = p.primitive();
      auto j = static_cast<std::size_t>(p.content());
      LatticeVector f = seed.form().functional(n0);
      LatticeVector ray = -n0;
      // the loop turns counterclockwise, so it departs from the clockwise side
      int eps = sgn(dot(f, RationalPoint(LatticeVector{ray[1], -ray[0]})));
      if (eps == 0) throw Error(ErrorCode::Internal, "defect direction " + p.to_string() + " on its own hyperplane");
      std::optional<Integer> coeff;
      for (std::size_t i = 0; i < seed.rank(); ++i) {
        if (f[i] == 0) {
          if (sgn(row[i]) != 0)
            throw Error(ErrorCode::Internal, "loop defect at " + p.to_string() + " is not a wall-crossing term");
          continue;
        }
        Integer denom = Integer(static_cast<long>(eps)) * static_cast<long>(f[i]);
        Integer num = -row[i];
        if (!mpz_divisible_p(num.get_mpz_t(), denom.get_mpz_t())) {
          throw Error(ErrorCode::IntegralityFailure, "wall coefficient " + num.get_str() + "/" + denom.get_str() +
                                                         " at " + p.to_string() + " is not an integer");
        }
        Integer c = num / denom;
        if (coeff && *coeff != c)
          throw Error(ErrorCode::Internal, "loop defect at " + p.to_string() + " is not a wall-crossing term");
        coeff = c;
      }
      Cone support = Cone::ray(ray);
      Wall* target = nullptr;
      for (auto& w : d.mutable_walls())
        if (w.support == support && w.direction() == n0) target = &w;
      if (!target) {
        d.add_wall(make_wall(seed, support, WallFunction(n0, {}, order, monoid), WallOrigin::Generated));
        target = &d.mutable_walls().back();
      }
      target->function.add_to_coefficient(j, *coeff);
    }

    if (!defect.empty() && !loop_is_identity(d.truncated(level), loop)) {
      throw Error(ErrorCode::Internal, "completion failed to cancel the loop defect at order " + std::to_string(level));
    }
  }

  auto& walls = d.mutable_walls();
  walls.erase(std::remove_if(walls.begin(), walls.end(),
                             [](const Wall& w) { return !w.is_initial() && w.function.is_trivial(); }),
              walls.end());
  d.sort_walls();
  return d;
}

std::vector<CWall> cwall_supports(const Seed& seed, std::int64_t d) {
  if (seed.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "C-wall saturation is implemented for rank 2");
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "C-wall degree bound must be positive");
  const auto& monoid = *seed.monoid();
  const auto& form = seed.form();

  // 1-dimensional cones on the line R u: bit 0 = contains +u, bit 1 = contains -u
  auto mask_of = [](const CWall& w) {
    LatticeVector u = w.monomial.primitive();
    int m = 0;
    for (const auto& g : w.support.generators()) m |= (g == u) ? 1 : 2;
    return m;
  };
  auto cone_of = [](const LatticeVector& u, int mask) {
    std::vector<LatticeVector> gens;
    if (mask & 1) gens.push_back(u);
    if (mask & 2) gens.push_back(-u);
    return Cone(2, std::move(gens));
  };

  std::set<CWall> walls;
  for (auto e : seed.unfrozen()) {
    LatticeVector b = seed.basis(e);
    Cone line = Cone::hyperplane(form.functional(b));
    for (std::int64_t j = 1; j <= d; ++j) walls.insert(CWall{line, j * b});
  }
  for (;;) {
    std::vector<CWall> current(walls.begin(), walls.end());
    std::size_t before = walls.size();
    for (const auto& w1 : current) {
      for (const auto& w2 : current) {
        LatticeVector n = w1.monomial + w2.monomial;
        auto deg = monoid.degree(n);
        if (!deg || *deg > d) continue;
        LatticeVector u = n.primitive();
        if (pair(form, w1.monomial, w2.monomial) != 0) {
          walls.insert(CWall{Cone::ray(-u), n});
        } else if (w1.monomial.primitive() == w2.monomial.primitive()) {
          int inter = mask_of(w1) & mask_of(w2);
          int mask = (inter & 1) ? 3 : 2;
          walls.insert(CWall{cone_of(u, mask), n});
        }
      }
    }
    if (walls.size() == before) break;
  }
  return {walls.begin(), walls.end()};
}

}  // namespace kscatter
