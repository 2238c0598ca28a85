#include "kscatter/cluster.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "kscatter/broken_lines.hpp"
#include "kscatter/mirror.hpp"

namespace kscatter {

// ---------------------------------------------------------------- Laurent polynomials

LaurentPolynomial LaurentPolynomial::constant(std::size_t nvars, const Integer& c) {
  LaurentPolynomial p(nvars);
  p.add_term(LatticeVector(nvars), c);
  return p;
}

LaurentPolynomial LaurentPolynomial::monomial(const LatticeVector& exponent, const Integer& c) {
  LaurentPolynomial p(exponent.rank());
  p.add_term(exponent, c);
  return p;
}

LaurentPolynomial LaurentPolynomial::variable(std::size_t nvars, std::size_t i) {
  return monomial(LatticeVector::unit(nvars, i));
}

Integer LaurentPolynomial::coefficient(const LatticeVector& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Integer(0) : it->second;
}

void LaurentPolynomial::add_term(const LatticeVector& e, const Integer& c) {
  if (e.rank() != nvars_) throw Error(ErrorCode::DimensionMismatch, "exponent " + e.to_string() + " has wrong length");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

bool LaurentPolynomial::all_coefficients_positive() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return sgn(t.second) > 0; });
}

namespace {

void same_vars(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  if (a.nvars() != b.nvars()) throw Error(ErrorCode::DimensionMismatch, "Laurent polynomials in different rings");
}

}  // namespace

LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  same_vars(a, b);
  LaurentPolynomial r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  same_vars(a, b);
  LaurentPolynomial r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
  return r;
}

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  same_vars(a, b);
  LaurentPolynomial r(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
  return r;
}

LaurentPolynomial LaurentPolynomial::pow(std::uint64_t e) const {
  LaurentPolynomial result = constant(nvars_, 1);
  LaurentPolynomial base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::string LaurentPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += "x" + std::to_string(i + 1);
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    Integer mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    if (mono.empty()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << '*';
      os << mono;
    }
    first = false;
  }
  return os.str();
}

LaurentPolynomial divide_exact(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  same_vars(a, b);
  if (b.is_zero()) throw Error(ErrorCode::InexactDivision, "division by zero");
  const std::size_t n = a.nvars();
  LaurentPolynomial q(n);
  if (a.is_zero()) return q;
  // Newton box of the quotient: per-coordinate min/max exponents.
  auto bounds = [n](const LaurentPolynomial& p) {
    std::vector<std::int64_t> lo(n, INT64_MAX), hi(n, INT64_MIN);
    for (const auto& [e, c] : p.terms())
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = std::min(lo[i], e[i]);
        hi[i] = std::max(hi[i], e[i]);
      }
    return std::make_pair(lo, hi);
  };
  auto [alo, ahi] = bounds(a);
  auto [blo, bhi] = bounds(b);
  const auto& [lead_b, lead_c] = *b.terms().rbegin();
  LaurentPolynomial r = a;
  while (!r.is_zero()) {
    const auto& [lead_r, lead_rc] = *r.terms().rbegin();
    LatticeVector t = lead_r - lead_b;
    bool in_box = true;
    for (std::size_t i = 0; i < n; ++i)
      if (t[i] < alo[i] - blo[i] || t[i] > ahi[i] - bhi[i]) in_box = false;
    if (!in_box || !mpz_divisible_p(lead_rc.get_mpz_t(), lead_c.get_mpz_t()))
      throw Error(ErrorCode::InexactDivision, "(" + b.to_string() + ") does not divide (" + a.to_string() + ")");
    Integer c = lead_rc / lead_c;
    q.add_term(t, c);
    r = r - LaurentPolynomial::monomial(t, c) * b;
  }
  return q;
}

// ---------------------------------------------------------------- seeds and mutation

ClusterSeed ClusterSeed::from_seed(const Seed& seed) {
  ClusterSeed s;
  s.rank = seed.rank();
  s.b = seed.form().entries();
  s.frozen.assign(s.rank, true);
  for (auto i : seed.unfrozen()) s.frozen[i] = false;
  for (std::size_t i = 0; i < s.rank; ++i) s.labels.push_back("x" + std::to_string(i + 1));
  return s;
}

Cluster initial_cluster(const ClusterSeed& s) {
  Cluster c;
  for (std::size_t i = 0; i < s.rank; ++i) c.push_back(LaurentPolynomial::variable(s.rank, i));
  return c;
}

namespace {

void check_mutable(const ClusterSeed& s, std::size_t k) {
  if (k >= s.rank) throw Error(ErrorCode::InvalidArgument, "mutation index " + std::to_string(k + 1) + " out of range");
  if (s.frozen[k]) throw Error(ErrorCode::FrozenIndex, "index " + std::to_string(k + 1) + " is frozen");
}

}  // namespace

ClusterSeed mutate_matrix(const ClusterSeed& s, std::size_t k) {
  check_mutable(s, k);
  ClusterSeed r = s;
  for (std::size_t i = 0; i < s.rank; ++i) {
    for (std::size_t j = 0; j < s.rank; ++j) {
      std::int64_t& out = r.b[i * s.rank + j];
      if (i == k || j == k) {
        out = -s.at(i, j);
      } else {
        std::int64_t bik = s.at(i, k), bkj = s.at(k, j);
        std::int64_t sg = (bik > 0) - (bik < 0);
        out = s.at(i, j) + sg * std::max<std::int64_t>(bik * bkj, 0);
      }
    }
  }
  for (std::size_t i = 0; i < s.rank; ++i)
    for (std::size_t j = 0; j < s.rank; ++j)
      if (r.at(i, j) != -r.at(j, i)) throw Error(ErrorCode::Internal, "mutation broke antisymmetry");
  return r;
}

Cluster mutate_variable(const ClusterSeed& s, const Cluster& vars, std::size_t k) {
  check_mutable(s, k);
  if (vars.size() != s.rank) throw Error(ErrorCode::DimensionMismatch, "cluster size differs from seed rank");
  const std::size_t n = vars[0].nvars();
  LaurentPolynomial plus = LaurentPolynomial::constant(n, 1);
  LaurentPolynomial minus = LaurentPolynomial::constant(n, 1);
  for (std::size_t i = 0; i < s.rank; ++i) {
    std::int64_t bik = s.at(i, k);
    if (bik > 0) plus = plus * vars[i].pow(static_cast<std::uint64_t>(bik));
    if (bik < 0) minus = minus * vars[i].pow(static_cast<std::uint64_t>(-bik));
  }
  Cluster out = vars;
  out[k] = divide_exact(plus + minus, vars[k]);
  return out;
}

MutationTrace run_mutations(const ClusterSeed& s, const std::vector<std::size_t>& sequence) {
  MutationTrace t;
  t.initial = s;
  t.sequence = sequence;
  t.seeds.push_back(s);
  t.clusters.push_back(initial_cluster(s));
  for (auto k : sequence) {
    t.clusters.push_back(mutate_variable(t.seeds.back(), t.clusters.back(), k));
    t.seeds.push_back(mutate_matrix(t.seeds.back(), k));
  }
  return t;
}

std::vector<LaurentPolynomial> cluster_variables(const MutationTrace& trace) {
  std::set<LaurentPolynomial> seen;
  std::vector<LaurentPolynomial> out;
  for (const auto& c : trace.clusters)
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (trace.initial.frozen[i]) continue;
      if (seen.insert(c[i]).second) out.push_back(c[i]);
    }
  return out;
}

std::optional<LatticeVector> minimal_exponent(const LaurentPolynomial& p, const Monoid& monoid) {
  for (const auto& [g, c] : p.terms()) {
    bool ok = std::all_of(p.terms().begin(), p.terms().end(),
                          [&](const auto& t) { return monoid.contains(t.first - g); });
    if (ok) return g;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- comparison

bool ExchangeReport::all_matched() const {
  return std::all_of(dictionary.begin(), dictionary.end(), [](const auto& e) { return e.matched; }) &&
         std::all_of(relations.begin(), relations.end(), [](const auto& r) { return r.matched; });
}

namespace {

// Certified basepoint in the open positive orthant of the unfrozen coordinates.
RationalPoint positive_point(const ScatteringDiagram& d, const std::vector<LatticeVector>& ms, std::int64_t k) {
  std::vector<LatticeVector> avoid;
  for (const auto& m : ms)
    for (auto& f : basepoint_conditions(d, m, k)) avoid.push_back(std::move(f));
  for (std::size_t attempt = 0; attempt < 4096; ++attempt) {
    RationalPoint x = generic_point(d.rank(), std::nullopt, avoid, attempt).point;
    bool positive = true;
    for (auto i : d.seed().unfrozen())
      if (sgn(x[i]) <= 0) positive = false;
    if (positive) return x;
  }
  throw Error(ErrorCode::Internal, "no generic point in the positive orthant");
}

}  // namespace

ExchangeReport compare_exchange(const ScatteringDiagram& d, const ClusterSeed& s, std::int64_t k, std::size_t steps) {
  ExchangeReport report;
  std::vector<std::size_t> mutable_idx;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (!s.frozen[i]) mutable_idx.push_back(i);
  if (mutable_idx.empty()) return report;
  if (s.rank != 2 || d.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "exchange comparison is rank 2 only");
  if (k > d.order()) throw Error(ErrorCode::OrderMismatch, "comparison order exceeds the diagram order");

  const Monoid& monoid = *d.monoid();
  std::vector<std::size_t> sequence;
  for (std::size_t i = 0; i < steps; ++i) sequence.push_back(mutable_idx[i % mutable_idx.size()]);
  MutationTrace trace = run_mutations(s, sequence);

  auto variables = cluster_variables(trace);
  std::map<LaurentPolynomial, LatticeVector> g_of;
  std::vector<LatticeVector> gs;
  for (const auto& v : variables) {
    auto g = minimal_exponent(v, monoid);
    if (!g) throw Error(ErrorCode::Internal, "cluster variable " + v.to_string() + " has no minimal exponent");
    g_of.emplace(v, *g);
    gs.push_back(*g);
  }

  MirrorAlgebra algebra(d);
  report.positive_point = positive_point(d, gs, k);
  for (const auto& v : variables) {
    DictionaryEntry entry{v, g_of.at(v), true};
    auto table = algebra.theta_table(entry.g, report.positive_point, k);
    std::set<LatticeVector> seen;
    for (const auto& [e, c] : v.terms()) {
      auto deg = monoid.degree(e - entry.g);
      if (!deg) {
        entry.matched = false;
        continue;
      }
      if (*deg > k) continue;
      seen.insert(e);
      if (table.coefficient(e - entry.g) != c) entry.matched = false;
    }
    for (const auto& [off, c] : table.terms())
      if (!seen.count(entry.g + off)) entry.matched = false;
    report.dictionary.push_back(std::move(entry));
  }

  for (std::size_t step = 0; step < sequence.size(); ++step) {
    const auto& seed = trace.seeds[step];
    const auto& cluster = trace.clusters[step];
    std::size_t idx = sequence[step];
    ExchangeCheck check;
    check.step = step + 1;
    check.index = idx;
    check.g_old = g_of.at(cluster[idx]);
    check.g_new = g_of.at(trace.clusters[step + 1][idx]);
    const std::size_t n = cluster[0].nvars();
    LaurentPolynomial plus = LaurentPolynomial::constant(n, 1), minus = plus;
    for (std::size_t i = 0; i < s.rank; ++i) {
      std::int64_t b = seed.at(i, idx);
      if (b > 0) plus = plus * cluster[i].pow(static_cast<std::uint64_t>(b));
      if (b < 0) minus = minus * cluster[i].pow(static_cast<std::uint64_t>(-b));
    }
    LatticeVector base = check.g_old + check.g_new;
    for (const auto& mono : {plus, minus}) {
      auto g = minimal_exponent(mono, monoid);
      if (!g) throw Error(ErrorCode::Internal, "cluster monomial without minimal exponent");
      auto deg = monoid.degree(*g - base);
      if (!deg || *deg <= k) check.expected[*g] += 1;
    }
    std::vector<LatticeVector> ps{check.g_old, check.g_new};
    check.actual = algebra.structure_constants(ps, k).entries;
    check.matched = check.actual == check.expected;
    // the table must not depend on the chamber of the basepoint
    for (const auto& z : chamber_points(d, algebra.table_conditions(ps, k))) {
      ++check.basepoints_checked;
      if (algebra.structure_constants(ps, k, z).entries != check.expected) check.matched = false;
    }
    report.relations.push_back(std::move(check));
  }
  return report;
}

}  // namespace kscatter
