#pragma once

// Line-oriented text formats for seeds, diagrams, theta dumps, structure
// constant tables, fans, toric reports, mutation traces and verification
// reports; rank-2 SVG rendering; atomic file output.
//
// Every format: one record per line, `#` starts a comment, tokens separated
// by blanks, vectors written as comma lists ("1,-2", "3/7,9/49").

#include <string>
#include <vector>

#include "kscatter/broken_lines.hpp"
#include "kscatter/cluster.hpp"
#include "kscatter/mirror.hpp"
#include "kscatter/toric.hpp"

namespace kscatter {

std::string write_seed(const Seed& seed);
Seed parse_seed(const std::string& text);

std::string write_diagram(const ScatteringDiagram& d);
ScatteringDiagram parse_diagram(const std::string& text);

struct ThetaDump {
  Seed seed;
  std::int64_t order = 0;
  ThetaFunction theta;

  friend bool operator==(const ThetaDump& a, const ThetaDump& b) {
    return a.seed == b.seed && a.order == b.order && a.theta.m == b.theta.m &&
           a.theta.basepoint == b.theta.basepoint && a.theta.table == b.theta.table;
  }
};

std::string write_theta(const ThetaDump& dump);
ThetaDump parse_theta(const std::string& text);

std::string write_table(const StructureConstantTable& table);
StructureConstantTable parse_table(const std::string& text);

std::string write_fan(const Fan& fan);
Fan parse_fan(const std::string& text);

struct ToricProductRecord {
  LatticeVector a, b, q;
  CurveClass gamma;
  RationalPoint root;

  friend bool operator==(const ToricProductRecord&, const ToricProductRecord&) = default;
};

struct ToricReport {
  Fan fan;
  std::vector<CurveClass> kinks;
  std::vector<ToricProductRecord> products;
  std::vector<std::pair<LatticeVector, WeightVector>> weights;

  friend bool operator==(const ToricReport&, const ToricReport&) = default;
};

/// Includes the fan, a commented kernel basis and, per product, the
/// coordinates of gamma in that basis.
std::string write_toric(const ToricReport& report);
ToricReport parse_toric(const std::string& text);

LaurentPolynomial parse_laurent(const std::string& text, std::size_t nvars);

std::string write_trace(const MutationTrace& trace);
MutationTrace parse_trace(const std::string& text);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct VerifyReport {
  std::string target;
  std::vector<CheckResult> checks;

  bool passed() const;
  friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

std::string write_report(const VerifyReport& report);
VerifyReport parse_report(const std::string& text);

/// Rank 2 only: each wall drawn as a ray from the origin, labelled with its
/// function truncated to three terms.
std::string render_svg(const ScatteringDiagram& d);

std::string read_file(const std::string& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace kscatter
