#include "kscatter/toric.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "kscatter/scattering.hpp"

namespace kscatter {

CurveClass& operator+=(CurveClass& a, const CurveClass& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "curve classes of different length");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

CurveClass operator+(CurveClass a, const CurveClass& b) { return a += b; }

CurveClass operator-(CurveClass a, const CurveClass& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "curve classes of different length");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

CurveClass operator*(std::int64_t s, CurveClass a) {
  for (auto& x : a) x *= s;
  return a;
}

bool is_zero(const CurveClass& c) {
  return std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x == 0; });
}

std::string class_to_string(const CurveClass& c) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------- Fan

Fan::Fan(std::vector<LatticeVector> rays, std::vector<std::pair<std::size_t, std::size_t>> cones) {
  const std::size_t n = rays.size();
  for (const auto& r : rays)
    if (r.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "toric mode supports rank 2 fans only");
  if (n < 3) throw Error(ErrorCode::InvalidFan, "a complete planar fan needs at least 3 rays");
  for (const auto& r : rays) {
    if (r.is_zero() || !r.is_primitive())
      throw Error(ErrorCode::InvalidFan, "ray " + r.to_string() + " is not primitive");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return compare_angle(rays[a], rays[b]) < 0; });
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (rays[order[i]] == rays[order[i + 1]])
      throw Error(ErrorCode::InvalidFan, "duplicate ray " + rays[order[i]].to_string());
  }
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) {
    rays_.push_back(rays[order[i]]);
    position[order[i]] = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto d = det2(rays_[i], rays_[(i + 1) % n]);
    if (d != 1) {
      throw Error(ErrorCode::InvalidFan, "adjacent rays " + rays_[i].to_string() + " and " +
                                             rays_[(i + 1) % n].to_string() + " have determinant " +
                                             std::to_string(d) + " (fan not complete and smooth)");
    }
  }
  if (!cones.empty()) {
    std::set<std::pair<std::size_t, std::size_t>> want, got;
    for (std::size_t i = 0; i < n; ++i) want.insert(std::minmax(i, (i + 1) % n));
    for (auto [a, b] : cones) {
      if (a >= n || b >= n) throw Error(ErrorCode::InvalidFan, "cone refers to a missing ray");
      got.insert(std::minmax(position[a], position[b]));
    }
    if (got != want || got.size() != cones.size())
      throw Error(ErrorCode::InvalidFan, "maximal cones must be exactly the pairs of angularly adjacent rays");
  }
}

Fan Fan::projective_plane() { return Fan({{1, 0}, {0, 1}, {-1, -1}}); }
Fan Fan::p1_times_p1() { return Fan({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }
Fan Fan::blown_up_plane() { return Fan({{1, 0}, {1, 1}, {0, 1}, {-1, -1}}); }

std::int64_t Fan::self_intersection(std::size_t i) const {
  const std::size_t n = size();
  LatticeVector s = ray(i + n - 1) + ray(i + 1);
  const auto& v = ray(i);
  // s = a v with v primitive, and D.D = -a
  std::int64_t a = v[0] != 0 ? s[0] / v[0] : s[1] / v[1];
  if (a * v != s) throw Error(ErrorCode::Internal, "neighbours of a ray do not sum to a multiple of it");
  return -a;
}

CurveClass Fan::boundary_class(std::size_t i) const {
  const std::size_t n = size();
  i %= n;
  CurveClass c(n, 0);
  c[(i + n - 1) % n] += 1;
  c[(i + 1) % n] += 1;
  c[i] = self_intersection(i);
  return c;
}

bool Fan::in_kernel(const CurveClass& c) const {
  if (c.size() != size()) return false;
  std::int64_t x = 0, y = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    x += c[i] * rays_[i][0];
    y += c[i] * rays_[i][1];
  }
  return x == 0 && y == 0;
}

std::size_t Fan::cone_containing(const RationalPoint& x) const {
  if (x.is_zero()) throw Error(ErrorCode::NonGenericEndpoint, "the origin lies in every cone");
  for (std::size_t i = 0; i < size(); ++i) {
    if (sign(det2(ray(i), x)) >= 0 && sign(det2(ray(i + 1), x)) < 0) return i;
  }
  throw Error(ErrorCode::Internal, "no cone contains " + x.to_string());
}

std::optional<std::size_t> Fan::ray_through(const RationalPoint& x) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (sign(det2(ray(i), x)) == 0 && sign(dot(ray(i), x)) > 0) return i;
  }
  return std::nullopt;
}

bool Fan::share_cone(const LatticeVector& a, const LatticeVector& b) const {
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& u = ray(i);
    const auto& v = ray(i + 1);
    auto inside = [&](const LatticeVector& p) { return det2(p, v) >= 0 && det2(u, p) >= 0; };
    if (inside(a) && inside(b)) return true;
  }
  return false;
}

std::vector<CurveClass> Fan::kernel_basis() const {
  std::vector<CurveClass> basis;
  for (std::size_t j = 2; j < size(); ++j) {
    CurveClass k(size(), 0);
    k[j] = 1;
    k[0] = -det2(rays_[j], rays_[1]);
    k[1] = -det2(rays_[0], rays_[j]);
    basis.push_back(std::move(k));
  }
  return basis;
}

std::vector<std::int64_t> Fan::kernel_coordinates(const CurveClass& c) const {
  if (!in_kernel(c)) throw Error(ErrorCode::InvalidArgument, class_to_string(c) + " is not a curve class");
  std::vector<std::int64_t> coords(c.begin() + 2, c.end());
  CurveClass back(size(), 0);
  auto basis = kernel_basis();
  for (std::size_t j = 0; j < basis.size(); ++j) back += coords[j] * basis[j];
  if (back != c) throw Error(ErrorCode::Internal, "kernel basis does not reproduce " + class_to_string(c));
  return coords;
}

std::int64_t Fan::intersect(const std::vector<std::int64_t>& divisor, const CurveClass& c) const {
  if (divisor.size() != size() || c.size() != size())
    throw Error(ErrorCode::DimensionMismatch, "divisor and class must be indexed by the rays");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += divisor[i] * c[i];
  return s;
}

bool Fan::is_nef(const std::vector<std::int64_t>& divisor) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (intersect(divisor, boundary_class(i)) < 0) return false;
  }
  return true;
}

std::vector<std::vector<std::int64_t>> Fan::nef_sample() const {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> c(size(), 0);
  while (true) {
    if (is_nef(c)) out.push_back(c);
    std::size_t i = 0;
    while (i < c.size() && c[i] == 2) c[i++] = 0;
    if (i == c.size()) break;
    ++c[i];
  }
  return out;
}

// ---------------------------------------------------------------- phi

CurveClass PLFunctionWithKinks::evaluate(std::size_t cone, const LatticeVector& v) const {
  return v[0] * slope_x[cone] + v[1] * slope_y[cone];
}

PLFunctionWithKinks build_phi_with_kinks(const Fan& fan, const std::vector<CurveClass>& kinks) {
  const std::size_t n = fan.size();
  if (kinks.size() != n) throw Error(ErrorCode::DimensionMismatch, "need one kink per ray");
  for (std::size_t i = 0; i < n; ++i) {
    if (!fan.in_kernel(kinks[i]))
      throw Error(ErrorCode::InconsistentFan, "kink " + class_to_string(kinks[i]) + " is not a curve class");
  }
  PLFunctionWithKinks phi;
  phi.kinks = kinks;
  phi.slope_x.assign(n, CurveClass(n, 0));
  phi.slope_y.assign(n, CurveClass(n, 0));
  // crossing ray i counterclockwise adds kinks[i] * det(v_i, .)
  CurveClass sx(n, 0), sy(n, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& v = fan.ray(i);
    sx += (-v[1]) * kinks[i % n];
    sy += v[0] * kinks[i % n];
    if (i < n) {
      phi.slope_x[i] = sx;
      phi.slope_y[i] = sy;
    }
  }
  if (!is_zero(sx) || !is_zero(sy))
    throw Error(ErrorCode::InconsistentFan, "kinks do not close up around the origin");
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t before = (i + n - 1) % n;
    const auto& v = fan.ray(i);
    const auto& u = fan.ray(i + 1);
    if (phi.evaluate(i, v) != phi.evaluate(before, v) ||
        phi.evaluate(i, u) - phi.evaluate(before, u) != kinks[i]) {
      throw Error(ErrorCode::InconsistentFan, "kink equation fails across ray " + v.to_string());
    }
  }
  return phi;
}

PLFunctionWithKinks build_phi(const Fan& fan) {
  std::vector<CurveClass> kinks;
  for (std::size_t i = 0; i < fan.size(); ++i) kinks.push_back(fan.boundary_class(i));
  return build_phi_with_kinks(fan, kinks);
}

// ---------------------------------------------------------------- weights

WeightVector weight(const Fan& fan, const LatticeVector& p) {
  if (p.rank() != 2) throw Error(ErrorCode::DimensionMismatch, "toric points have rank 2");
  WeightVector w(fan.size(), 0);
  if (p.is_zero()) return w;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    auto xi = det2(p, fan.ray(i + 1));
    auto xj = det2(fan.ray(i), p);
    if (xi >= 0 && xj >= 0) {
      w[i] = xi;
      w[(i + 1) % fan.size()] = xj;
      return w;
    }
  }
  throw Error(ErrorCode::Internal, "no cone contains " + p.to_string());
}

WeightVector weight_class(const CurveClass& c) { return c; }

// ---------------------------------------------------------------- segments

namespace {

RationalPoint at(const AffineSegment& l, const Rational& t) { return l.anchor + t * RationalPoint(l.velocity); }

// Cone that the segment occupies as t -> +inf (forward) or -inf.
std::size_t asymptotic_cone(const Fan& fan, const AffineSegment& l, bool forward) {
  LatticeVector d = forward ? l.velocity : -l.velocity;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const auto& v = fan.ray(i);
    if (det2(v, d) == 0 && dot(v, d) > 0) {
      int s = sign(det2(v, l.anchor));
      if (s == 0) throw Error(ErrorCode::NonTransversalPath, "unbounded end runs along ray " + v.to_string());
      return s > 0 ? i : (i + fan.size() - 1) % fan.size();
    }
  }
  return fan.cone_containing(RationalPoint(d));
}

std::size_t endpoint_cone(const Fan& fan, const RationalPoint& p) {
  if (p.is_zero()) throw Error(ErrorCode::NonGenericEndpoint, "segment ends at the origin");
  if (auto r = fan.ray_through(p))
    throw Error(ErrorCode::NonGenericEndpoint, "segment ends on ray " + fan.ray(*r).to_string());
  return fan.cone_containing(p);
}

bool within(const AffineSegment& l, const Rational& t) {
  return (!l.t_start || t > *l.t_start) && (!l.t_end || t < *l.t_end);
}

}  // namespace

SegmentClass segment_class_both(const Fan& fan, const PLFunctionWithKinks& phi, const AffineSegment& l) {
  const std::size_t n = fan.size();
  if (l.anchor.rank() != 2 || l.velocity.rank() != 2)
    throw Error(ErrorCode::DimensionMismatch, "toric segments live in rank 2");
  if (l.t_start && l.t_end && *l.t_start > *l.t_end)
    throw Error(ErrorCode::InvalidArgument, "segment parameters are reversed");
  SegmentClass out{CurveClass(n, 0), CurveClass(n, 0)};
  if (l.velocity.is_zero()) return out;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = fan.ray(i);
    auto d = det2(v, l.velocity);
    Rational offset = det2(v, l.anchor);
    if (d == 0) {
      if (sign(offset) != 0) continue;
      // segment on the line through v: it must stay on the far side
      const auto& far_end = dot(v, l.velocity) > 0 ? l.t_end : l.t_start;
      if (!far_end || sign(dot(v, at(l, *far_end))) >= 0) throw Error(ErrorCode::NonTransversalPath, "segment runs along ray " + v.to_string());
      continue;
    }
    Rational t = -offset / Rational(static_cast<long>(d));
    if (!within(l, t)) continue;
    int s = sign(dot(v, at(l, t)));
    if (s == 0) throw Error(ErrorCode::NonTransversalPath, "segment passes through the origin");
    if (s < 0) continue;
    out.kink_sum += std::abs(d) * phi.kinks[i];
  }

  std::size_t first = l.t_start ? endpoint_cone(fan, at(l, *l.t_start)) : asymptotic_cone(fan, l, false);
  std::size_t last = l.t_end ? endpoint_cone(fan, at(l, *l.t_end)) : asymptotic_cone(fan, l, true);
  out.endpoint_difference = phi.evaluate(last, l.velocity) - phi.evaluate(first, l.velocity);
  return out;
}

CurveClass segment_class(const Fan& fan, const PLFunctionWithKinks& phi, const AffineSegment& l) {
  auto both = segment_class_both(fan, phi, l);
  if (!both.agree()) {
    throw Error(ErrorCode::Internal, "kink sum " + class_to_string(both.kink_sum) + " differs from endpoint formula " +
                                         class_to_string(both.endpoint_difference));
  }
  return both.kink_sum;
}

// ---------------------------------------------------------------- spines

namespace {

struct OrientedEdge {
  RationalPoint start;
  LatticeVector velocity;
  std::optional<Rational> length;
};

// Parameter s > 0 with to - from = s * velocity.
Rational edge_length(const Spine& spine, const SpineEdge& e) {
  RationalPoint diff = spine.vertices[*e.to] - spine.vertices[e.from];
  if (e.velocity.is_zero()) {
    if (!diff.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero-velocity edge joins distinct points");
    return 0;
  }
  std::size_t k = e.velocity[0] != 0 ? 0 : 1;
  Rational s = diff[k] / Rational(static_cast<long>(e.velocity[k]));
  if (s * RationalPoint(e.velocity) != diff || sign(s) <= 0)
    throw Error(ErrorCode::InvalidArgument, "edge velocity does not point from its start to its end");
  return s;
}

void check_tree(const Spine& spine) {
  const std::size_t v = spine.vertices.size();
  if (v == 0) throw Error(ErrorCode::InvalidArgument, "empty spine");
  std::size_t bounded = 0;
  std::vector<std::size_t> parent(v);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : spine.edges) {
    if (e.from >= v || (e.to && *e.to >= v)) throw Error(ErrorCode::InvalidArgument, "edge refers to a missing vertex");
    if (e.velocity.rank() != 2) throw Error(ErrorCode::DimensionMismatch, "edge velocity must have rank 2");
    if (!e.to) continue;
    ++bounded;
    auto a = find(e.from), b = find(*e.to);
    if (a == b) throw Error(ErrorCode::InvalidArgument, "spine has a cycle");
    parent[a] = b;
  }
  if (bounded + 1 != v) throw Error(ErrorCode::InvalidArgument, "spine is not connected");
}

std::vector<OrientedEdge> orient(const Spine& spine, std::size_t root) {
  const std::size_t v = spine.vertices.size();
  std::vector<std::int64_t> depth(v, -1);
  std::vector<std::vector<std::size_t>> adj(v);
  for (std::size_t i = 0; i < spine.edges.size(); ++i) {
    const auto& e = spine.edges[i];
    if (!e.to) continue;
    adj[e.from].push_back(*e.to);
    adj[*e.to].push_back(e.from);
  }
  std::queue<std::size_t> q;
  depth[root] = 0;
  q.push(root);
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    for (auto y : adj[x]) {
      if (depth[y] < 0) {
        depth[y] = depth[x] + 1;
        q.push(y);
      }
    }
  }
  std::vector<OrientedEdge> out;
  for (const auto& e : spine.edges) {
    if (!e.to) {
      out.push_back({spine.vertices[e.from], e.velocity, std::nullopt});
      continue;
    }
    Rational s = edge_length(spine, e);
    if (depth[e.from] <= depth[*e.to]) {
      out.push_back({spine.vertices[e.from], e.velocity, s});
    } else {
      out.push_back({spine.vertices[*e.to], -e.velocity, s});
    }
  }
  return out;
}

CurveClass class_from_root(const Fan& fan, const PLFunctionWithKinks& phi, const Spine& spine, std::size_t root) {
  CurveClass total(fan.size(), 0);
  for (const auto& e : orient(spine, root)) {
    if (e.velocity.is_zero()) continue;
    AffineSegment l{e.start, e.velocity, Rational(0), e.length};
    total += segment_class(fan, phi, l);
  }
  return total;
}

}  // namespace

CurveClass tree_class(const Fan& fan, const PLFunctionWithKinks& phi, const Spine& spine, std::size_t root) {
  check_tree(spine);
  if (root >= spine.vertices.size()) throw Error(ErrorCode::InvalidArgument, "root is not a vertex");
  CurveClass c = class_from_root(fan, phi, spine, root);
  for (std::size_t r = 0; r < spine.vertices.size(); ++r) {
    if (r == root) continue;
    if (class_from_root(fan, phi, spine, r) != c)
      throw Error(ErrorCode::Internal, "spine class depends on the root");
  }
  return c;
}

std::vector<std::size_t> unbalanced_vertices(const Spine& spine) {
  const std::size_t v = spine.vertices.size();
  std::vector<LatticeVector> flux(v, LatticeVector(2));
  std::vector<std::size_t> valence(v, 0);
  for (const auto& e : spine.edges) {
    if (e.from >= v || (e.to && *e.to >= v)) throw Error(ErrorCode::InvalidArgument, "edge refers to a missing vertex");
    flux[e.from] += e.velocity;
    ++valence[e.from];
    if (e.to) {
      flux[*e.to] -= e.velocity;
      ++valence[*e.to];
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v; ++i) {
    if (valence[i] >= 2 && !flux[i].is_zero()) out.push_back(i);
  }
  return out;
}

int straight_count(const Fan& fan, const PLFunctionWithKinks& phi, const Spine& spine, const CurveClass& gamma) {
  if (!unbalanced_vertices(spine).empty()) return 0;
  return tree_class(fan, phi, spine) == gamma ? 1 : 0;
}

// ---------------------------------------------------------------- products

Spine tripod(const LatticeVector& a, const LatticeVector& b, const RationalPoint& q) {
  LatticeVector s = a + b;
  Spine spine;
  spine.vertices.push_back(q + RationalPoint(s));  // V
  if (!s.is_zero()) {
    spine.vertices.push_back(q);
    spine.edges.push_back({0, 1, -s});
  }
  if (!a.is_zero()) spine.edges.push_back({0, std::nullopt, a});
  if (!b.is_zero()) spine.edges.push_back({0, std::nullopt, b});
  return spine;
}

RationalPoint tripod_root(const Fan& fan, const LatticeVector& a, const LatticeVector& b, std::size_t attempt) {
  LatticeVector s = a + b;
  auto phi = build_phi(fan);
  const std::vector<LatticeVector> rays = fan.rays();
  for (std::size_t k = attempt;; ++k) {
    if (k > attempt + 256) throw Error(ErrorCode::NonGenericEndpoint, "no transversal tripod root found");
    RationalPoint offset = generic_point(2, std::nullopt, rays, k).point;
    RationalPoint q = offset;
    if (!s.is_zero()) {
      // keep the root in a closed cone that contains a + b
      Rational scale(1, static_cast<long>(4 * (k + 1)));
      q = RationalPoint(s) + scale * offset;
      auto w = weight(fan, s);
      std::size_t c;
      try {
        c = endpoint_cone(fan, q);
      } catch (const Error&) {
        continue;
      }
      if (w[c] == 0 && w[(c + 1) % fan.size()] == 0) continue;
      bool ok = true;
      for (std::size_t i = 0; i < fan.size(); ++i) {
        if (w[i] != 0 && i != c && i != (c + 1) % fan.size()) ok = false;
      }
      if (!ok) continue;
    }
    try {
      tree_class(fan, phi, tripod(a, b, q));
      return q;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonTransversalPath && e.code() != ErrorCode::NonGenericEndpoint) throw;
    }
  }
}

ToricProduct toric_product(const Fan& fan, const PLFunctionWithKinks& phi, const LatticeVector& a,
                           const LatticeVector& b, std::size_t attempt) {
  if (a.rank() != 2 || b.rank() != 2) throw Error(ErrorCode::DimensionMismatch, "toric points have rank 2");
  RationalPoint q = tripod_root(fan, a, b, attempt);
  return {a + b, tree_class(fan, phi, tripod(a, b, q)), q};
}

std::optional<LatticeVector> stanley_reisner_product(const Fan& fan, const LatticeVector& a, const LatticeVector& b) {
  if (fan.share_cone(a, b)) return a + b;
  return std::nullopt;
}

}  // namespace kscatter
