#pragma once

// Invariant batteries shared by the CLI `verify` command and the acceptance
// suite. Each check produces one named pass/fail line.

#include <cstdint>
#include <optional>

#include "kscatter/io.hpp"

namespace kscatter {

/// Small deterministic generator (splitmix64); identical streams on every platform.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform-ish integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

struct VerifyOptions {
  bool full = true;
  std::uint64_t rng_seed = 0x6b736361ULL;
  /// Order for structure constants; defaults to min(diagram order, 5).
  std::optional<std::int64_t> algebra_order;
  /// Order for theta consistency; defaults to min(diagram order, 6).
  std::optional<std::int64_t> theta_order;
};

/// Diagram battery: consistency, wall form, C-wall confinement, theta
/// consistency, commutativity, associativity, unit, Frobenius, positivity,
/// convexity, basepoint independence and (rank 2, unit skew form) the
/// exchange-relation comparison.
VerifyReport verify_diagram(const ScatteringDiagram& d, const VerifyOptions& options = {});

/// Individual diagram checks.
CheckResult check_consistency(const ScatteringDiagram& d, std::size_t loops, SplitMix& rng);
CheckResult check_wall_form(const ScatteringDiagram& d);
CheckResult check_cwall_confinement(const ScatteringDiagram& d);
CheckResult check_theta_consistency(const ScatteringDiagram& d, const std::vector<LatticeVector>& ms, std::int64_t k);

/// Mirror-algebra checks; every structure-constant table they compute is
/// also screened for positivity and convexity.
struct AlgebraChecks {
  CheckResult commutativity, associativity, unit, frobenius, positivity, convexity, basepoint_independence;
};
AlgebraChecks check_algebra(const MirrorAlgebra& algebra, std::int64_t k, std::size_t triples, std::size_t tuples,
                            SplitMix& rng);

CheckResult check_exchange(const ScatteringDiagram& d, std::int64_t k);

/// Toric battery: weight identity, root independence, cocycle, vanishing,
/// segment two-formula, nef pairing, Stanley-Reisner degeneration.
VerifyReport verify_toric(const Fan& fan, const VerifyOptions& options = {});

}  // namespace kscatter
