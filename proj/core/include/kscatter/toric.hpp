#pragma once

// Toric mode for complete smooth planar fans: curve classes as intersection
// vectors, the class-valued piecewise-linear function with prescribed kinks,
// classes of segments and spines, torus weights and the class-graded product.

#include <optional>
#include <string>
#include <vector>

#include "kscatter/lattice.hpp"

namespace kscatter {

/// Intersection numbers (gamma . D_i) indexed by the rays of a fan.
using CurveClass = std::vector<std::int64_t>;
using WeightVector = std::vector<std::int64_t>;

CurveClass& operator+=(CurveClass& a, const CurveClass& b);
CurveClass operator+(CurveClass a, const CurveClass& b);
CurveClass operator-(CurveClass a, const CurveClass& b);
CurveClass operator*(std::int64_t s, CurveClass a);
bool is_zero(const CurveClass& c);
std::string class_to_string(const CurveClass& c);

/// Complete smooth fan in the plane. Rays are kept in counterclockwise order
/// starting from the smallest angle; maximal cone i is spanned by rays i, i+1.
class Fan {
 public:
  /// Validates primitivity, completeness and smoothness. `cones` (pairs of
  /// ray indices into the given order) are checked against the consecutive
  /// pairs when supplied.
  Fan(std::vector<LatticeVector> rays, std::vector<std::pair<std::size_t, std::size_t>> cones = {});

  static Fan projective_plane();
  static Fan p1_times_p1();
  static Fan blown_up_plane();

  std::size_t size() const noexcept { return rays_.size(); }
  const std::vector<LatticeVector>& rays() const noexcept { return rays_; }
  const LatticeVector& ray(std::size_t i) const { return rays_[i % rays_.size()]; }
  std::pair<std::size_t, std::size_t> cone(std::size_t i) const { return {i, (i + 1) % rays_.size()}; }

  /// D_i^2 = -a_i where v_{i-1} + v_{i+1} = a_i v_i.
  std::int64_t self_intersection(std::size_t i) const;
  /// The class of the boundary curve D_i: (D_i . D_j)_j.
  CurveClass boundary_class(std::size_t i) const;
  bool in_kernel(const CurveClass& c) const;

  /// Index of the maximal cone containing x; on a ray the counterclockwise one.
  std::size_t cone_containing(const RationalPoint& x) const;
  /// Index of the ray x lies on, if any.
  std::optional<std::size_t> ray_through(const RationalPoint& x) const;
  bool share_cone(const LatticeVector& a, const LatticeVector& b) const;

  /// Kernel basis K_j = e_j - a_j e_0 - b_j e_1 (j >= 2), v_j = a_j v_0 + b_j v_1.
  std::vector<CurveClass> kernel_basis() const;
  /// Coordinates of a kernel element in kernel_basis().
  std::vector<std::int64_t> kernel_coordinates(const CurveClass& c) const;

  /// F . D_i >= 0 for all i, with F = sum c_j D_j.
  bool is_nef(const std::vector<std::int64_t>& divisor) const;
  std::int64_t intersect(const std::vector<std::int64_t>& divisor, const CurveClass& c) const;
  /// Nef divisors with coefficients in {0,1,2}.
  std::vector<std::vector<std::int64_t>> nef_sample() const;

  friend bool operator==(const Fan&, const Fan&) = default;

 private:
  std::vector<LatticeVector> rays_;
};

/// Class-valued PL function: on cone i, phi(v) = slope_x[i] * v_x + slope_y[i] * v_y.
struct PLFunctionWithKinks {
  std::vector<CurveClass> slope_x;
  std::vector<CurveClass> slope_y;
  std::vector<CurveClass> kinks;  // kink across ray i

  CurveClass evaluate(std::size_t cone, const LatticeVector& v) const;
};

/// phi with kink D_i across ray i, zero on cone 0.
PLFunctionWithKinks build_phi(const Fan& fan);
/// Same construction with caller-supplied kinks; INCONSISTENT_FAN when they
/// do not close up around the origin or leave the kernel.
PLFunctionWithKinks build_phi_with_kinks(const Fan& fan, const std::vector<CurveClass>& kinks);

/// Weight vector of P: ray coordinates of P in a cone containing it.
WeightVector weight(const Fan& fan, const LatticeVector& p);
WeightVector weight_class(const CurveClass& c);

/// l(t) = anchor + t * velocity for t in [t_start, t_end]; a missing bound is infinite.
struct AffineSegment {
  RationalPoint anchor;
  LatticeVector velocity;
  std::optional<Rational> t_start;
  std::optional<Rational> t_end;
};

struct SegmentClass {
  CurveClass kink_sum;
  CurveClass endpoint_difference;
  bool agree() const { return kink_sum == endpoint_difference; }
};

/// Both formulas for the class of a segment; throws NonTransversalPath when
/// the segment meets the origin, runs along a ray or ends on one.
SegmentClass segment_class_both(const Fan& fan, const PLFunctionWithKinks& phi, const AffineSegment& l);
CurveClass segment_class(const Fan& fan, const PLFunctionWithKinks& phi, const AffineSegment& l);

/// Tree in the plane: an edge runs from vertex `from` with the given velocity
/// either to vertex `to` or off to infinity.
struct SpineEdge {
  std::size_t from;
  std::optional<std::size_t> to;
  LatticeVector velocity;
};

struct Spine {
  std::vector<RationalPoint> vertices;
  std::vector<SpineEdge> edges;
};

/// Sum of edge classes with edges oriented away from `root`; the result is
/// recomputed from every other vertex as root and must agree.
CurveClass tree_class(const Fan& fan, const PLFunctionWithKinks& phi, const Spine& spine, std::size_t root = 0);
/// Vertices of degree >= 2 at which outgoing velocities do not sum to zero.
std::vector<std::size_t> unbalanced_vertices(const Spine& spine);
int straight_count(const Fan& fan, const PLFunctionWithKinks& phi, const Spine& spine, const CurveClass& gamma);

/// Tripod with unbounded legs of velocities a and b from V = Q + (a + b) and
/// a finite leg from V to Q.
Spine tripod(const LatticeVector& a, const LatticeVector& b, const RationalPoint& q);
/// Deterministic point Q for which the tripod is transversal to the fan.
RationalPoint tripod_root(const Fan& fan, const LatticeVector& a, const LatticeVector& b, std::size_t attempt = 0);

struct ToricProduct {
  LatticeVector q;
  CurveClass gamma;
  RationalPoint root;
};

ToricProduct toric_product(const Fan& fan, const PLFunctionWithKinks& phi, const LatticeVector& a,
                           const LatticeVector& b, std::size_t attempt = 0);

/// Degenerate product: theta_{a+b} when a and b share a cone, 0 otherwise.
std::optional<LatticeVector> stanley_reisner_product(const Fan& fan, const LatticeVector& a, const LatticeVector& b);

}  // namespace kscatter
