#include "kscatter/mirror.hpp"

#include <algorithm>

namespace kscatter {

namespace {

std::int64_t degree_of(const Monoid& monoid, const LatticeVector& v) {
  auto d = monoid.degree(v);
  if (!d) throw Error(ErrorCode::InvalidArgument, v.to_string() + " is not in P");
  return *d;
}

LatticeVector sum_of(const std::vector<LatticeVector>& ps) {
  LatticeVector s(ps.front().rank());
  for (const auto& p : ps) s += p;
  return s;
}

// elements of P of degree <= k, by degree then lexicographically
std::vector<LatticeVector> graded_elements(const Monoid& monoid, std::int64_t k) {
  auto els = monoid.elements_up_to(k);
  std::stable_sort(els.begin(), els.end(), [&](const LatticeVector& a, const LatticeVector& b) {
    return *monoid.degree(a) < *monoid.degree(b);
  });
  return els;
}

}  // namespace

ThetaExpansion::ThetaExpansion(MonoidPtr monoid, LatticeVector base, std::int64_t order)
    : monoid_(std::move(monoid)), base_(std::move(base)), order_(order) {
  if (order_ < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
}

ThetaExpansion ThetaExpansion::basis(MonoidPtr monoid, const LatticeVector& q, std::int64_t order, const Integer& coeff) {
  ThetaExpansion e(std::move(monoid), q, order);
  e.add(q, coeff);
  return e;
}

Integer ThetaExpansion::coefficient(const LatticeVector& q) const {
  auto it = terms_.find(q);
  return it == terms_.end() ? Integer(0) : it->second;
}

void ThetaExpansion::add(const LatticeVector& q, const Integer& c) {
  auto d = monoid_->degree(q - base_);
  if (!d) throw Error(ErrorCode::InvalidArgument, "theta_" + q.to_string() + " outside the window of " + base_.to_string());
  if (*d > order_ || sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(q, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

ThetaExpansion operator+(const ThetaExpansion& a, const ThetaExpansion& b) {
  const auto& monoid = *a.monoid_;
  LatticeVector base(a.base_.rank());
  for (std::size_t i = 0; i < base.rank(); ++i) {
    if (monoid.is_generator_index(i)) {
      base[i] = std::min(a.base_[i], b.base_[i]);
    } else {
      if (a.base_[i] != b.base_[i]) throw Error(ErrorCode::InvalidArgument, "theta expansions differ in a frozen coordinate");
      base[i] = a.base_[i];
    }
  }
  std::int64_t order = std::min(a.order_ + *monoid.degree(a.base_ - base), b.order_ + *monoid.degree(b.base_ - base));
  ThetaExpansion r(a.monoid_, base, order);
  for (const auto& [q, c] : a.terms_) r.add(q, c);
  for (const auto& [q, c] : b.terms_) r.add(q, c);
  return r;
}

ThetaExpansion operator*(const Integer& s, const ThetaExpansion& a) {
  ThetaExpansion r(a.monoid_, a.base_, a.order_);
  for (const auto& [q, c] : a.terms_) r.add(q, s * c);
  return r;
}

std::string ThetaExpansion::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [q, c] : terms_) {
    if (!first) s += sgn(c) < 0 ? " - " : " + ";
    else if (sgn(c) < 0) s += "-";
    Integer mag = abs(c);
    if (mag != 1) s += mag.get_str() + "*";
    s += "theta" + q.to_string();
    first = false;
  }
  return s;
}

Integer trace(const ThetaExpansion& a) { return a.coefficient(LatticeVector(a.base().rank())); }

std::size_t rational_rank(const std::vector<std::vector<Integer>>& rows) {
  if (rows.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rows) {
    std::vector<Rational> row;
    for (const auto& v : r) row.emplace_back(v);
    m.push_back(std::move(row));
  }
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t piv = rank;
    while (piv < m.size() && sgn(m[piv][col]) == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (sgn(m[i][col]) == 0) continue;
      Rational f = m[i][col] / m[rank][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

MirrorAlgebra::MirrorAlgebra(ScatteringDiagram diagram) : d_(std::move(diagram)) {}

std::vector<LatticeVector> MirrorAlgebra::table_conditions(const std::vector<LatticeVector>& ps, std::int64_t k) const {
  if (ps.empty()) throw Error(ErrorCode::InvalidArgument, "structure constants need at least one input");
  std::vector<LatticeVector> out;
  auto add = [&](const LatticeVector& m) {
    auto c = basepoint_conditions(d_, m, k);
    out.insert(out.end(), c.begin(), c.end());
  };
  for (const auto& p : ps) add(p);
  add(sum_of(ps));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GenericPoint MirrorAlgebra::table_basepoint(const std::vector<LatticeVector>& ps, std::int64_t k, std::size_t attempt) const {
  return generic_point(d_.rank(), std::nullopt, table_conditions(ps, k), attempt);
}

std::vector<RationalPoint> MirrorAlgebra::basepoints_in_cell(const std::vector<LatticeVector>& ps, std::int64_t k,
                                                             const RationalPoint& anchor, std::size_t count) const {
  auto conds = table_conditions(ps, k);
  for (const auto& f : conds)
    if (sgn(dot(f, anchor)) == 0) throw Error(ErrorCode::NonGenericEndpoint, "anchor is not generic");
  std::vector<RationalPoint> out{anchor};
  for (std::size_t j = 1; out.size() < count; ++j) {
    RationalPoint v = generic_point(d_.rank(), std::nullopt, {}, j).point;
    Rational delta = 1;
    for (const auto& f : conds) {
      Rational fv = dot(f, v);
      if (sgn(fv) == 0) continue;
      Rational bound = abs(dot(f, anchor)) / (2 * abs(fv));
      if (bound < delta) delta = bound;
    }
    RationalPoint z = anchor + (delta / static_cast<long>(j + 1)) * v;
    bool ok = std::all_of(conds.begin(), conds.end(), [&](const LatticeVector& f) {
      return sgn(dot(f, z)) == sgn(dot(f, anchor));
    });
    if (ok && std::find(out.begin(), out.end(), z) == out.end()) out.push_back(std::move(z));
    if (j > 4096) throw Error(ErrorCode::Internal, "could not sample basepoints in the cell");
  }
  return out;
}

TruncatedMonoidSeries MirrorAlgebra::theta_table(const LatticeVector& m, const RationalPoint& q, std::int64_t k) const {
  auto key = std::make_tuple(m, q.to_string(), k);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto t = theta(d_, m, q, k).table;
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key, t);
  return t;
}

StructureConstantTable MirrorAlgebra::structure_constants(const std::vector<LatticeVector>& ps, std::int64_t k,
                                                          const std::optional<RationalPoint>& basepoint) const {
  const auto& monoid = *d_.monoid();
  StructureConstantTable table;
  table.inputs = ps;
  table.order = k;
  table.certified_against = table_conditions(ps, k);
  table.basepoint = basepoint ? *basepoint : table_basepoint(ps, k).point;
  for (const auto& f : table.certified_against) {
    if (sgn(dot(f, table.basepoint)) == 0) {
      throw Error(ErrorCode::NonGenericEndpoint, "table basepoint " + table.basepoint.to_string() +
                                                     " lies on the hyperplane " + f.to_string() + " . x = 0");
    }
  }
  const RationalPoint& z = table.basepoint;
  const LatticeVector s = sum_of(ps);

  TruncatedMonoidSeries rest = TruncatedMonoidSeries::one(d_.monoid(), k);
  for (const auto& p : ps) rest = rest * theta_table(p, z, k);

  for (const auto& off : graded_elements(monoid, k)) {
    Integer alpha = rest.coefficient(off);
    if (sgn(alpha) == 0) continue;
    LatticeVector q = s + off;
    table.entries.emplace(q, alpha);
    std::int64_t budget = k - *monoid.degree(off);
    auto tq = theta_table(q, z, budget);
    for (const auto& [p, c] : tq.terms()) rest.add_term(off + p, -alpha * c);
  }
  if (!rest.is_zero()) throw Error(ErrorCode::Internal, "theta expansion left a remainder");
  return table;
}

std::map<LatticeVector, Integer> MirrorAlgebra::structure_constants_near_target(const std::vector<LatticeVector>& ps,
                                                                                std::int64_t k) const {
  const auto& monoid = *d_.monoid();
  auto conds = table_conditions(ps, k);
  const LatticeVector s = sum_of(ps);
  std::map<LatticeVector, Integer> out;
  for (const auto& off : graded_elements(monoid, k)) {
    LatticeVector q = s + off;
    RationalPoint z;
    if (q.is_zero()) {
      z = table_basepoint(ps, k).point;
    } else {
      RationalPoint qp(q);
      std::vector<LatticeVector> through;
      for (const auto& f : conds)
        if (sgn(dot(f, qp)) == 0) through.push_back(f);
      RationalPoint v = generic_point(d_.rank(), std::nullopt, through).point;
      Rational delta = 1;
      for (const auto& f : conds) {
        Rational fq = dot(f, qp);
        Rational fv = dot(f, v);
        if (sgn(fq) == 0 || sgn(fv) == 0) continue;
        Rational bound = abs(fq) / (2 * abs(fv));
        if (bound < delta) delta = bound;
      }
      z = qp + delta * v;
    }
    TruncatedMonoidSeries prod = TruncatedMonoidSeries::one(d_.monoid(), k);
    for (const auto& p : ps) prod = prod * theta_table(p, z, k);
    Integer c = prod.coefficient(off);
    if (sgn(c) != 0) out.emplace(q, c);
  }
  return out;
}

ThetaExpansion MirrorAlgebra::multiply(const ThetaExpansion& a, const ThetaExpansion& b) const {
  if (a.order() != b.order()) {
    throw Error(ErrorCode::OrderMismatch, "multiplying theta expansions of orders " + std::to_string(a.order()) +
                                              " and " + std::to_string(b.order()));
  }
  const auto& monoid = *d_.monoid();
  const std::int64_t k = a.order();
  ThetaExpansion r(d_.monoid(), a.base() + b.base(), k);
  for (const auto& [p, cp] : a.terms()) {
    std::int64_t dp = degree_of(monoid, p - a.base());
    for (const auto& [q, cq] : b.terms()) {
      std::int64_t budget = k - dp - degree_of(monoid, q - b.base());
      if (budget < 0) continue;
      auto table = structure_constants({p, q}, budget);
      for (const auto& [t, alpha] : table.entries) r.add(t, cp * cq * alpha);
    }
  }
  return r;
}

ThetaExpansion MirrorAlgebra::multiply_all(const std::vector<ThetaExpansion>& as) const {
  if (as.empty()) throw Error(ErrorCode::InvalidArgument, "empty product");
  ThetaExpansion acc = as.front();
  for (std::size_t i = 1; i < as.size(); ++i) acc = multiply(acc, as[i]);
  return acc;
}

Integer MirrorAlgebra::pairing(const std::vector<ThetaExpansion>& as) const {
  if (as.size() < 2) throw Error(ErrorCode::InvalidArgument, "pairing needs at least two arguments");
  return trace(multiply_all(as));
}

Integer MirrorAlgebra::pairing_direct(const std::vector<ThetaExpansion>& as) const {
  if (as.size() < 2) throw Error(ErrorCode::InvalidArgument, "pairing needs at least two arguments");
  const auto& monoid = *d_.monoid();
  const std::int64_t k = as.front().order();
  for (const auto& a : as)
    if (a.order() != k) throw Error(ErrorCode::OrderMismatch, "pairing arguments of different orders");
  Integer total = 0;
  std::vector<LatticeVector> choice;
  auto rec = [&](auto&& self, std::size_t i, std::int64_t budget, const Integer& coeff) -> void {
    if (i == as.size()) {
      auto table = structure_constants(choice, budget);
      total += coeff * table.entry(LatticeVector(d_.rank()));
      return;
    }
    for (const auto& [q, c] : as[i].terms()) {
      std::int64_t dq = degree_of(monoid, q - as[i].base());
      if (dq > budget) continue;
      choice.push_back(q);
      self(self, i + 1, budget - dq, coeff * c);
      choice.pop_back();
    }
  };
  rec(rec, 0, k, Integer(1));
  return total;
}

GramMatrix MirrorAlgebra::gram_matrix(const std::vector<LatticeVector>& points, std::int64_t k) const {
  GramMatrix g;
  g.points = points;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (points[i] == points[j]) throw Error(ErrorCode::InvalidArgument, "gram points must be distinct");
  g.entries.assign(points.size(), std::vector<Integer>(points.size(), Integer(0)));
  const LatticeVector zero(d_.rank());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (!d_.monoid()->contains(zero - points[i] - points[j])) continue;
      g.entries[i][j] = structure_constants({points[i], points[j]}, k).entry(zero);
    }
  }
  g.rank = rational_rank(g.entries);
  return g;
}

}  // namespace kscatter
