#pragma once

// Exact lattice arithmetic: integer vectors in the seed basis, rational points,
// the skew form, the exponent monoid P and the degree filtration on it.

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kscatter/errors.hpp"

namespace kscatter {

using Integer = mpz_class;
using Rational = mpq_class;

/// Integer vector in coordinates of the fixed seed basis. Also used for
/// integer linear functionals (coefficient vectors, paired by dot()).
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t rank) : coords_(rank, 0) {}
  LatticeVector(std::initializer_list<std::int64_t> coords) : coords_(coords) {}
  explicit LatticeVector(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}

  static LatticeVector unit(std::size_t rank, std::size_t index);

  std::size_t rank() const noexcept { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<std::int64_t>& coords() const noexcept { return coords_; }

  bool is_zero() const noexcept;
  /// gcd of the absolute coordinates; 0 for the zero vector.
  std::int64_t content() const;
  bool is_primitive() const { return content() == 1; }
  /// The vector divided by its content. Requires a nonzero vector.
  LatticeVector primitive() const;

  LatticeVector& operator+=(const LatticeVector& o);
  LatticeVector& operator-=(const LatticeVector& o);
  LatticeVector operator-() const;
  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
  friend LatticeVector operator*(std::int64_t s, const LatticeVector& v);

  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
  friend auto operator<=>(const LatticeVector& a, const LatticeVector& b) {
    return a.coords_ <=> b.coords_;
  }

  std::string to_string() const;  // "(1,-2,0)"

 private:
  std::vector<std::int64_t> coords_;
};

std::ostream& operator<<(std::ostream& os, const LatticeVector& v);

/// Exact rational point of M_R.
class RationalPoint {
 public:
  RationalPoint() = default;
  explicit RationalPoint(std::size_t rank) : coords_(rank, Rational(0)) {}
  explicit RationalPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  explicit RationalPoint(const LatticeVector& v);

  std::size_t rank() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const noexcept { return coords_; }
  bool is_zero() const;

  RationalPoint& operator+=(const RationalPoint& o);
  RationalPoint& operator-=(const RationalPoint& o);
  friend RationalPoint operator+(RationalPoint a, const RationalPoint& b) { return a += b; }
  friend RationalPoint operator-(RationalPoint a, const RationalPoint& b) { return a -= b; }
  friend RationalPoint operator*(const Rational& s, const RationalPoint& p);

  friend bool operator==(const RationalPoint& a, const RationalPoint& b);

  std::string to_string() const;  // "(2/3,1/7)"

 private:
  std::vector<Rational> coords_;
};

std::ostream& operator<<(std::ostream& os, const RationalPoint& p);

Rational dot(const LatticeVector& functional, const RationalPoint& x);
std::int64_t dot(const LatticeVector& functional, const LatticeVector& v);
int sign(const Rational& q);

/// 2x2 determinant of the first two coordinates.
std::int64_t det2(const LatticeVector& a, const LatticeVector& b);
Rational det2(const LatticeVector& a, const RationalPoint& b);

/// Integer antisymmetric matrix <.,.> on M.
class SkewForm {
 public:
  SkewForm() = default;
  /// Validates antisymmetry; throws InvalidSeed otherwise.
  SkewForm(std::size_t rank, std::vector<std::int64_t> row_major);

  std::size_t rank() const noexcept { return rank_; }
  std::int64_t at(std::size_t i, std::size_t j) const { return entries_[i * rank_ + j]; }
  const std::vector<std::int64_t>& entries() const noexcept { return entries_; }

  /// Coefficient vector of the functional <u, .>.
  LatticeVector functional(const LatticeVector& u) const;
  Integer determinant() const;

  friend bool operator==(const SkewForm&, const SkewForm&) = default;

 private:
  std::size_t rank_ = 0;
  std::vector<std::int64_t> entries_;
};

std::int64_t pair(const SkewForm& form, const LatticeVector& u, const LatticeVector& v);

/// The monoid P freely generated by a sub-basis S of the seed basis, with its
/// degree function. P-membership and degree are coordinate tests.
class Monoid {
 public:
  Monoid(std::size_t rank, std::vector<std::size_t> generators);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<std::size_t>& generators() const noexcept { return generators_; }
  bool is_generator_index(std::size_t i) const { return mask_[i] != 0; }

  /// Sum of S-coordinates when the vector lies in P, nullopt otherwise.
  std::optional<std::int64_t> degree(const LatticeVector& n) const;
  bool contains(const LatticeVector& n) const { return degree(n).has_value(); }

  /// All elements of P with degree <= max_degree, in lexicographic order.
  std::vector<LatticeVector> elements_up_to(std::int64_t max_degree) const;

  friend bool operator==(const Monoid& a, const Monoid& b) {
    return a.rank_ == b.rank_ && a.generators_ == b.generators_;
  }

 private:
  std::size_t rank_;
  std::vector<std::size_t> generators_;
  std::vector<std::uint8_t> mask_;
};

using MonoidPtr = std::shared_ptr<const Monoid>;

/// A skew-symmetric seed: rank, skew form, and the unfrozen index set S
/// (0-based internally).
class Seed {
 public:
  Seed(SkewForm form, std::vector<std::size_t> unfrozen);
  Seed(std::size_t rank, std::vector<std::int64_t> row_major, std::vector<std::size_t> unfrozen)
      : Seed(SkewForm(rank, std::move(row_major)), std::move(unfrozen)) {}

  std::size_t rank() const noexcept { return form_.rank(); }
  const SkewForm& form() const noexcept { return form_; }
  const std::vector<std::size_t>& unfrozen() const noexcept { return monoid_->generators(); }
  const MonoidPtr& monoid() const noexcept { return monoid_; }
  LatticeVector basis(std::size_t i) const { return LatticeVector::unit(rank(), i); }

  /// <e, .> is primitive for every e in S.
  bool unfrozen_functionals_primitive() const;
  bool is_unimodular() const;

  friend bool operator==(const Seed& a, const Seed& b) {
    return a.form_ == b.form_ && *a.monoid_ == *b.monoid_;
  }

 private:
  SkewForm form_;
  MonoidPtr monoid_;
};

std::optional<std::int64_t> degree(const Seed& seed, const LatticeVector& n);

/// A rational point together with the finite list of hyperplanes (given by
/// integer functionals) it was verified to avoid.
struct GenericPoint {
  RationalPoint point;
  std::vector<LatticeVector> certified_against;
};

/// Deterministic rational point lying on the hyperplane {constraint . x = 0}
/// (when given) and off every hyperplane {f . x = 0} for f in `avoid`.
/// `attempt` selects a different member of the candidate family.
GenericPoint generic_point(std::size_t rank, const std::optional<LatticeVector>& constraint,
                           const std::vector<LatticeVector>& avoid, std::size_t attempt = 0);
GenericPoint generic_point(const Seed& seed, const std::optional<LatticeVector>& constraint,
                           const std::vector<LatticeVector>& avoid, std::size_t attempt = 0);

/// Parses "a,b,c" into a lattice vector.
LatticeVector parse_lattice_vector(const std::string& text);
/// Parses "p/q,r" into a rational point.
RationalPoint parse_rational_point(const std::string& text);

}  // namespace kscatter
