#pragma once

// Walls, wall-crossing automorphisms, path-ordered products and the rank-2
// order-by-order consistency completion.

#include <optional>
#include <vector>

#include "kscatter/cone.hpp"
#include "kscatter/series.hpp"

namespace kscatter {

enum class WallOrigin { Initial, Generated };

struct Wall {
  Cone support;
  WallFunction function;
  WallOrigin origin = WallOrigin::Generated;
  /// Coefficient vector of <n0, .>; the support lies in its zero set.
  LatticeVector functional;

  const LatticeVector& direction() const noexcept { return function.direction(); }
  bool is_initial() const noexcept { return origin == WallOrigin::Initial; }

  friend bool operator==(const Wall&, const Wall&) = default;
};

/// Validates that the support lies in <n0,.>^perp and that <n0,.> is nonzero.
Wall make_wall(const Seed& seed, Cone support, WallFunction function, WallOrigin origin);

/// True iff the wall's direction n0 lies in its support.
bool is_incoming(const Wall& wall);

class ScatteringDiagram {
 public:
  ScatteringDiagram(Seed seed, std::int64_t order);

  const Seed& seed() const noexcept { return seed_; }
  std::int64_t order() const noexcept { return order_; }
  const std::vector<Wall>& walls() const noexcept { return walls_; }
  const MonoidPtr& monoid() const noexcept { return seed_.monoid(); }
  std::size_t rank() const noexcept { return seed_.rank(); }

  /// Inserts a wall in normal form: a wall with the same support and
  /// direction is merged by multiplying the functions.
  void add_wall(Wall wall);
  /// Replaces the wall list wholesale (no merging); used by readers and tests.
  std::vector<Wall>& mutable_walls() noexcept { return walls_; }
  void sort_walls();

  ScatteringDiagram truncated(std::int64_t new_order) const;
  /// Distinct wall functionals (up to sign and scaling), for genericity checks.
  std::vector<LatticeVector> wall_functionals() const;

  friend bool operator==(const ScatteringDiagram& a, const ScatteringDiagram& b) {
    return a.seed_ == b.seed_ && a.order_ == b.order_ && a.walls_ == b.walls_;
  }

 private:
  Seed seed_;
  std::int64_t order_;
  std::vector<Wall> walls_;
};

ScatteringDiagram initial_diagram(const Seed& seed, std::int64_t order);

struct CrossingEvent {
  std::size_t wall_index = 0;
  const Wall* wall = nullptr;
  RationalPoint point;
  /// +-<n0,.>, positive on the side the path departs from.
  LatticeVector signed_normal;
  /// Parameter along the segment, in (0,1).
  Rational parameter;
  std::size_t segment = 0;
};

/// z^v -> z^v f^{n(v)} extended additively, mod J^{k+1}.
TruncatedMonoidSeries cross(const CrossingEvent& event, const TruncatedMonoidSeries& s);
TruncatedMonoidSeries cross(const Wall& wall, const LatticeVector& signed_normal, const TruncatedMonoidSeries& s);

/// Piecewise-straight path through the listed vertices. A loop repeats its
/// first vertex at the end.
struct StraightPath {
  std::vector<RationalPoint> vertices;

  static StraightPath segment(RationalPoint a, RationalPoint b) { return {{std::move(a), std::move(b)}}; }
  static StraightPath loop(std::vector<RationalPoint> polygon);
};

/// Crossings in traversal order; crossings sharing a parameter lie on one
/// hyperplane and commute. Throws NonTransversalPath otherwise.
std::vector<CrossingEvent> crossings(const ScatteringDiagram& d, const StraightPath& path);

TruncatedMonoidSeries path_ordered_product(const ScatteringDiagram& d, const StraightPath& path,
                                           const TruncatedMonoidSeries& s);

/// Rank-2 octagonal loop around the origin whose vertices avoid every
/// hyperplane in `avoid`; `attempt` selects a different rotation.
StraightPath generic_loop(const std::vector<LatticeVector>& avoid, std::size_t attempt = 0);
/// Loop avoiding the walls of d and every line R n with n in P of degree <= order.
StraightPath generic_loop(const ScatteringDiagram& d, std::size_t attempt = 0);

/// True iff the loop product is the identity on every z^{e_i} mod J^{k+1}.
bool loop_is_identity(const ScatteringDiagram& d, const StraightPath& loop);

ScatteringDiagram complete(const Seed& seed, std::int64_t order);

struct CWall {
  Cone support;
  LatticeVector monomial;

  friend bool operator==(const CWall&, const CWall&) = default;
  friend auto operator<=>(const CWall& a, const CWall& b) {
    if (auto c = a.monomial <=> b.monomial; c != 0) return c;
    return a.support.generators() <=> b.support.generators();
  }
};

bool is_incoming(const CWall& wall);

/// The saturated collection W_d of C-walls with monomial degree <= d (rank 2).
std::vector<CWall> cwall_supports(const Seed& seed, std::int64_t d);

/// Exact rank-2 angle order of nonzero vectors, starting at the positive
/// first axis and turning counterclockwise. Returns <0, 0, >0.
int compare_angle(const LatticeVector& a, const LatticeVector& b);

}  // namespace kscatter
