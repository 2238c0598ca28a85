#pragma once

// Rational polyhedral cones given by generators, with exact membership tests.

#include <optional>
#include <vector>

#include "kscatter/lattice.hpp"

namespace kscatter {

enum class ConeLocation { Outside, Boundary, RelativeInterior };

class Cone {
 public:
  Cone() = default;
  /// Generators are made primitive, deduplicated and sorted; zero generators dropped.
  Cone(std::size_t rank, std::vector<LatticeVector> generators);

  /// The full hyperplane {x : f . x = 0}, generated by +-v for a spanning set v.
  static Cone hyperplane(const LatticeVector& functional);
  static Cone ray(const LatticeVector& direction);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<LatticeVector>& generators() const noexcept { return generators_; }
  bool is_origin() const noexcept { return generators_.empty(); }
  /// Dimension of the linear span.
  std::size_t dimension() const;

  ConeLocation locate(const RationalPoint& x) const;
  bool contains(const RationalPoint& x) const { return locate(x) != ConeLocation::Outside; }
  bool contains(const LatticeVector& v) const { return contains(RationalPoint(v)); }
  bool in_relative_interior(const RationalPoint& x) const { return locate(x) == ConeLocation::RelativeInterior; }
  bool is_subset_of(const Cone& other) const;

  /// A point of the relative interior (sum of generators).
  RationalPoint interior_point() const;

  friend bool operator==(const Cone&, const Cone&) = default;

 private:
  std::size_t rank_ = 0;
  std::vector<LatticeVector> generators_;
};

/// Basis of the rational hyperplane {x : f . x = 0} (f nonzero), made of
/// primitive integer vectors.
std::vector<LatticeVector> hyperplane_basis(const LatticeVector& functional);

/// Exact rank of a list of integer vectors.
std::size_t lattice_rank(const std::vector<LatticeVector>& vectors);

/// max c.y subject to A y = b, y >= 0. Returns nullopt when infeasible and
/// throws on an unbounded objective.
std::optional<Rational> lp_maximize(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                                    const std::vector<Rational>& c);

}  // namespace kscatter
