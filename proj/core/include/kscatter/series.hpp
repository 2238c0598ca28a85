#pragma once

// Truncated series z^m * sum_p c_p z^p with p in P, modulo J^{k+1}, and the
// single-direction wall functions 1 + sum_j c_j z^{j n0}.

#include <map>
#include <string>
#include <vector>

#include "kscatter/lattice.hpp"

namespace kscatter {

class TruncatedMonoidSeries {
 public:
  using Terms = std::map<LatticeVector, Integer>;

  TruncatedMonoidSeries(MonoidPtr monoid, LatticeVector base, std::int64_t order);

  static TruncatedMonoidSeries one(MonoidPtr monoid, std::int64_t order);
  /// coeff * z^exponent, stored with base = exponent.
  static TruncatedMonoidSeries monomial(MonoidPtr monoid, const LatticeVector& exponent, std::int64_t order,
                                        const Integer& coeff = 1);

  const MonoidPtr& monoid() const noexcept { return monoid_; }
  const LatticeVector& base() const noexcept { return base_; }
  std::int64_t order() const noexcept { return order_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t rank() const noexcept { return base_.rank(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  Integer coefficient(const LatticeVector& offset) const;
  Integer constant_term() const { return coefficient(LatticeVector(rank())); }
  bool all_coefficients_nonnegative() const;

  /// Adds coeff * z^{base + offset}; offset must lie in P. Terms beyond the
  /// order are dropped.
  void add_term(const LatticeVector& offset, const Integer& coeff);

  TruncatedMonoidSeries truncated(std::int64_t new_order) const;
  /// Same element written over a smaller base b (base - b must lie in P);
  /// offsets grow by base - b and terms past the order are dropped.
  TruncatedMonoidSeries rebased(const LatticeVector& new_base) const;

  TruncatedMonoidSeries& operator+=(const TruncatedMonoidSeries& o);
  TruncatedMonoidSeries& operator-=(const TruncatedMonoidSeries& o);
  TruncatedMonoidSeries operator-() const;
  friend TruncatedMonoidSeries operator+(TruncatedMonoidSeries a, const TruncatedMonoidSeries& b) { return a += b; }
  friend TruncatedMonoidSeries operator-(TruncatedMonoidSeries a, const TruncatedMonoidSeries& b) { return a -= b; }
  friend TruncatedMonoidSeries operator*(const Integer& s, const TruncatedMonoidSeries& a);

  friend bool operator==(const TruncatedMonoidSeries& a, const TruncatedMonoidSeries& b);

  /// "1*z^(1,0) + 1*z^(1,1)"; "0" when empty.
  std::string to_string() const;

 private:
  MonoidPtr monoid_;
  LatticeVector base_;
  std::int64_t order_;
  Terms terms_;
};

TruncatedMonoidSeries multiply(const TruncatedMonoidSeries& a, const TruncatedMonoidSeries& b);
TruncatedMonoidSeries operator*(const TruncatedMonoidSeries& a, const TruncatedMonoidSeries& b);
/// Exact truncated power. Negative exponents need a constant term of +-1 and
/// base zero.
TruncatedMonoidSeries power(const TruncatedMonoidSeries& f, std::int64_t exponent);
TruncatedMonoidSeries power(const TruncatedMonoidSeries& f, std::int64_t exponent, std::int64_t order);

/// Dense univariate polynomial truncated at a fixed length.
using UnivariatePoly = std::vector<Integer>;
/// f^e for f with f[0] = 1, truncated to `length` coefficients.
UnivariatePoly univariate_power(const UnivariatePoly& f, std::int64_t exponent, std::size_t length);

class WallFunction {
 public:
  WallFunction() = default;
  /// coeffs[j-1] is the coefficient of z^{j n0}; entries past the order are dropped.
  WallFunction(LatticeVector direction, std::vector<Integer> coeffs, std::int64_t order, const Monoid& monoid);

  static WallFunction binomial(const LatticeVector& direction, std::int64_t order, const Monoid& monoid);

  const LatticeVector& direction() const noexcept { return direction_; }
  const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
  std::int64_t order() const noexcept { return order_; }
  std::int64_t direction_degree() const noexcept { return direction_degree_; }
  /// Largest j with j * degree(n0) <= order.
  std::size_t max_power() const noexcept { return max_power_; }

  Integer coefficient(std::size_t j) const;  // j = 0 gives 1
  void set_coefficient(std::size_t j, const Integer& c);
  void add_to_coefficient(std::size_t j, const Integer& c);
  bool all_coefficients_nonnegative() const;
  bool is_trivial() const;

  UnivariatePoly as_univariate() const;
  /// f^e as a univariate polynomial in z^{n0}, good up to the order minus offset_degree.
  UnivariatePoly power(std::int64_t exponent, std::int64_t offset_degree = 0) const;
  TruncatedMonoidSeries to_series(MonoidPtr monoid) const;

  WallFunction truncated(std::int64_t new_order) const;
  WallFunction times(const WallFunction& other) const;

  friend bool operator==(const WallFunction&, const WallFunction&) = default;

  /// "1 + z^(1,1) + 2*z^(2,2)"
  std::string to_string(std::size_t max_terms = 0) const;

 private:
  void trim();

  LatticeVector direction_;
  std::vector<Integer> coeffs_;
  std::int64_t order_ = 0;
  std::int64_t direction_degree_ = 1;
  std::size_t max_power_ = 0;
};

}  // namespace kscatter
