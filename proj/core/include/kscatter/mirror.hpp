#pragma once

// Structure constants of the theta basis, products of theta expansions, the
// trace and the multilinear trace pairings.

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "kscatter/broken_lines.hpp"

namespace kscatter {

/// Finite sum  sum_q c_q theta_q  with q - base in P of degree <= order.
class ThetaExpansion {
 public:
  ThetaExpansion(MonoidPtr monoid, LatticeVector base, std::int64_t order);

  static ThetaExpansion basis(MonoidPtr monoid, const LatticeVector& q, std::int64_t order, const Integer& coeff = 1);

  const MonoidPtr& monoid() const noexcept { return monoid_; }
  const LatticeVector& base() const noexcept { return base_; }
  std::int64_t order() const noexcept { return order_; }
  const std::map<LatticeVector, Integer>& terms() const noexcept { return terms_; }

  Integer coefficient(const LatticeVector& q) const;
  /// Adds c * theta_q; q outside the truncation window is dropped.
  void add(const LatticeVector& q, const Integer& c);

  /// Sum over a common base (coordinatewise minimum on the unfrozen
  /// coordinates; frozen coordinates must agree).
  friend ThetaExpansion operator+(const ThetaExpansion& a, const ThetaExpansion& b);
  friend ThetaExpansion operator*(const Integer& s, const ThetaExpansion& a);
  friend bool operator==(const ThetaExpansion& a, const ThetaExpansion& b) {
    return a.order_ == b.order_ && a.base_ == b.base_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  MonoidPtr monoid_;
  LatticeVector base_;
  std::int64_t order_;
  std::map<LatticeVector, Integer> terms_;
};

struct StructureConstantTable {
  std::vector<LatticeVector> inputs;
  std::int64_t order = 0;
  RationalPoint basepoint;
  std::vector<LatticeVector> certified_against;
  std::map<LatticeVector, Integer> entries;  // zero entries omitted

  friend bool operator==(const StructureConstantTable&, const StructureConstantTable&) = default;

  Integer entry(const LatticeVector& q) const {
    auto it = entries.find(q);
    return it == entries.end() ? Integer(0) : it->second;
  }
};

struct GramMatrix {
  std::vector<LatticeVector> points;
  std::vector<std::vector<Integer>> entries;
  std::size_t rank = 0;
};

/// Theta functions and structure constants over one diagram, with a
/// thread-safe cache of theta tables.
class MirrorAlgebra {
 public:
  explicit MirrorAlgebra(ScatteringDiagram diagram);

  const ScatteringDiagram& diagram() const noexcept { return d_; }

  /// Hyperplanes a table basepoint for inputs ps at order k must avoid.
  std::vector<LatticeVector> table_conditions(const std::vector<LatticeVector>& ps, std::int64_t k) const;
  /// Deterministic certified basepoint for the table of ps.
  GenericPoint table_basepoint(const std::vector<LatticeVector>& ps, std::int64_t k, std::size_t attempt = 0) const;
  /// `count` distinct certified basepoints in the cell of `anchor` cut out by table_conditions.
  std::vector<RationalPoint> basepoints_in_cell(const std::vector<LatticeVector>& ps, std::int64_t k,
                                                const RationalPoint& anchor, std::size_t count) const;

  TruncatedMonoidSeries theta_table(const LatticeVector& m, const RationalPoint& q, std::int64_t k) const;

  /// Product of theta_{p_i} evaluated at one basepoint and expanded in the
  /// theta basis order by order.
  StructureConstantTable structure_constants(const std::vector<LatticeVector>& ps, std::int64_t k,
                                             const std::optional<RationalPoint>& basepoint = std::nullopt) const;
  /// Independent evaluation: the coefficient of z^q in prod theta_{p_i}
  /// taken at a generic point close to q.
  std::map<LatticeVector, Integer> structure_constants_near_target(const std::vector<LatticeVector>& ps,
                                                                   std::int64_t k) const;

  ThetaExpansion multiply(const ThetaExpansion& a, const ThetaExpansion& b) const;
  ThetaExpansion multiply_all(const std::vector<ThetaExpansion>& as) const;
  /// trace(a_1 ... a_n) via iterated binary products.
  Integer pairing(const std::vector<ThetaExpansion>& as) const;
  /// Same value from n-fold structure constants at q = 0, expanded multilinearly.
  Integer pairing_direct(const std::vector<ThetaExpansion>& as) const;
  GramMatrix gram_matrix(const std::vector<LatticeVector>& points, std::int64_t k) const;

 private:
  ScatteringDiagram d_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<LatticeVector, std::string, std::int64_t>, TruncatedMonoidSeries> cache_;
};

Integer trace(const ThetaExpansion& a);

/// Exact rank over the rationals.
std::size_t rational_rank(const std::vector<std::vector<Integer>>& rows);

}  // namespace kscatter
