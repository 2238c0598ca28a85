#pragma once

// Broken lines with respect to a scattering diagram and the local theta
// functions they assemble into.

#include <optional>
#include <vector>

#include "kscatter/scattering.hpp"

namespace kscatter {

/// One domain of linearity. The line moves with velocity -exponent; `start`
/// is the bend where the segment begins (absent for the unbounded segment),
/// `end` the bend where it ends or the endpoint Q.
struct BrokenLineSegment {
  LatticeVector exponent;
  Integer coefficient;
  std::optional<RationalPoint> start;
  RationalPoint end;

  friend bool operator==(const BrokenLineSegment&, const BrokenLineSegment&) = default;
};

struct BrokenLine {
  LatticeVector m;
  RationalPoint endpoint;
  std::vector<BrokenLineSegment> segments;

  const BrokenLineSegment& final_segment() const { return segments.back(); }
  std::size_t bends() const { return segments.size() - 1; }
};

struct ThetaFunction {
  LatticeVector m;
  RationalPoint basepoint;
  TruncatedMonoidSeries table;
};

/// Hyperplanes a basepoint must avoid for broken lines of asymptotic
/// exponent m up to order k: the wall hyperplanes and, in rank 2, the lines
/// R e for every candidate exponent e in m + P.
std::vector<LatticeVector> basepoint_conditions(const ScatteringDiagram& d, const LatticeVector& m, std::int64_t k);

/// Throws NonGenericEndpoint when Q fails one of basepoint_conditions.
void certify_basepoint(const ScatteringDiagram& d, const LatticeVector& m, const RationalPoint& q, std::int64_t k);

std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& d, const LatticeVector& m,
                                               const RationalPoint& q, std::int64_t k);

/// Re-checks a broken line forward against the bend rule; returns an
/// explanation on failure.
std::optional<std::string> validate_broken_line(const ScatteringDiagram& d, const BrokenLine& line, std::int64_t k);

ThetaFunction theta(const ScatteringDiagram& d, const LatticeVector& m, const RationalPoint& q, std::int64_t k);

/// Compares the wall-crossing image of theta at one side of `wall` with theta
/// on the other side, near a generic point of the wall's relative interior.
bool theta_consistency_check(const ScatteringDiagram& d, const LatticeVector& m, const Wall& wall, std::int64_t k);

/// Rank 2: one certified point per open chamber of the wall arrangement, in
/// counterclockwise order starting from the positive first axis.
std::vector<RationalPoint> chamber_points(const ScatteringDiagram& d, const std::vector<LatticeVector>& extra_avoid = {});
/// Sign of every wall functional at x; equal signatures mean the same chamber.
std::vector<int> chamber_signature(const ScatteringDiagram& d, const RationalPoint& x);
ThetaFunction theta_in_chamber(const ScatteringDiagram& d, const LatticeVector& m, std::size_t chamber, std::int64_t k);

}  // namespace kscatter
