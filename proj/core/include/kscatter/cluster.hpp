#pragma once

// Skew-symmetric cluster mutation in the initial variables, used as ground
// truth for the theta-function side.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kscatter/lattice.hpp"

namespace kscatter {

class ScatteringDiagram;

/// Finite sum of Laurent monomials x^e with integer coefficients.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  explicit LaurentPolynomial(std::size_t nvars) : nvars_(nvars) {}

  static LaurentPolynomial constant(std::size_t nvars, const Integer& c);
  static LaurentPolynomial monomial(const LatticeVector& exponent, const Integer& c = 1);
  static LaurentPolynomial variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::map<LatticeVector, Integer>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Integer coefficient(const LatticeVector& e) const;
  void add_term(const LatticeVector& e, const Integer& c);

  bool all_coefficients_positive() const;
  bool is_monomial() const { return terms_.size() == 1; }

  friend LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b);
  friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b);
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);
  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;
  friend auto operator<=>(const LaurentPolynomial& a, const LaurentPolynomial& b) { return a.terms_ <=> b.terms_; }

  LaurentPolynomial pow(std::uint64_t e) const;

  /// Canonical text, terms in increasing exponent order: "x1^-1 + x1^-1*x2".
  std::string to_string() const;

 private:
  std::size_t nvars_ = 0;
  std::map<LatticeVector, Integer> terms_;
};

/// Exact quotient a / b; throws InexactDivision when b does not divide a.
LaurentPolynomial divide_exact(const LaurentPolynomial& a, const LaurentPolynomial& b);

struct ClusterSeed {
  std::size_t rank = 0;
  std::vector<std::int64_t> b;  // row-major exchange matrix
  std::vector<bool> frozen;
  std::vector<std::string> labels;

  std::int64_t at(std::size_t i, std::size_t j) const { return b[i * rank + j]; }

  /// Exchange matrix = skew form; indices outside S frozen; labels x1..xr.
  static ClusterSeed from_seed(const Seed& seed);

  friend bool operator==(const ClusterSeed&, const ClusterSeed&) = default;
};

using Cluster = std::vector<LaurentPolynomial>;

Cluster initial_cluster(const ClusterSeed& s);
ClusterSeed mutate_matrix(const ClusterSeed& s, std::size_t k);
Cluster mutate_variable(const ClusterSeed& s, const Cluster& vars, std::size_t k);

struct MutationTrace {
  ClusterSeed initial;
  std::vector<std::size_t> sequence;
  std::vector<ClusterSeed> seeds;  // seeds[0] = initial, seeds[i] after i steps
  std::vector<Cluster> clusters;

  friend bool operator==(const MutationTrace&, const MutationTrace&) = default;
};

MutationTrace run_mutations(const ClusterSeed& s, const std::vector<std::size_t>& sequence);
/// Distinct cluster variables appearing along a trace.
std::vector<LaurentPolynomial> cluster_variables(const MutationTrace& trace);

/// Exponent g with every other exponent of p in g + P, if there is one.
std::optional<LatticeVector> minimal_exponent(const LaurentPolynomial& p, const Monoid& monoid);

struct DictionaryEntry {
  LaurentPolynomial variable;
  LatticeVector g;
  bool matched = false;  // theta_g in the positive chamber equals the variable
};

struct ExchangeCheck {
  std::size_t step = 0;
  std::size_t index = 0;  // mutated position
  LatticeVector g_old, g_new;
  std::map<LatticeVector, Integer> expected;
  std::map<LatticeVector, Integer> actual;  // at the default table basepoint
  std::size_t basepoints_checked = 0;       // one per chamber, in addition
  bool matched = false;
};

struct ExchangeReport {
  RationalPoint positive_point;
  std::vector<DictionaryEntry> dictionary;
  std::vector<ExchangeCheck> relations;

  bool all_matched() const;
};

/// Rank 2: walks the alternating mutation sequence of length `steps` and
/// compares each exchange relation with the theta structure constants of d.
ExchangeReport compare_exchange(const ScatteringDiagram& d, const ClusterSeed& s, std::int64_t k,
                                std::size_t steps = 5);

}  // namespace kscatter
