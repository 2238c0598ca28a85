#include "kscatter/cone.hpp"

#include <algorithm>

namespace kscatter {

namespace {

using Row = std::vector<Rational>;

struct Tableau {
  std::vector<Row> rows;  // constraint rows, last entry is the right-hand side
  Row z;                  // reduced costs, last entry is the objective value
  std::vector<std::size_t> basis;
  std::size_t cols = 0;   // number of variables

  void pivot(std::size_t r, std::size_t col) {
    Rational p = rows[r][col];
    for (auto& v : rows[r]) v /= p;
    auto eliminate = [&](Row& row) {
      if (sgn(row[col]) == 0) return;
      Rational f = row[col];
      for (std::size_t j = 0; j <= cols; ++j) row[j] -= f * rows[r][j];
    };
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r) eliminate(rows[i]);
    eliminate(z);
    basis[r] = col;
  }

  // Bland's rule; maximizes. Returns false when unbounded.
  bool run(std::size_t allowed_cols) {
    for (;;) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (sgn(z[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == allowed_cols) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (sgn(rows[i][enter]) <= 0) continue;
        Rational ratio = rows[i][cols] / rows[i][enter];
        if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

bool all_collinear(const std::vector<LatticeVector>& gens, LatticeVector& dir) {
  dir = gens.front();
  for (const auto& g : gens) {
    for (std::size_t i = 0; i < g.rank(); ++i)
      for (std::size_t j = i + 1; j < g.rank(); ++j)
        if (Integer(static_cast<long>(g[i])) * dir[j] != Integer(static_cast<long>(g[j])) * dir[i]) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> lp_maximize(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                                    const std::vector<Rational>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  Tableau t;
  t.cols = n + m;
  t.rows.assign(m, Row(n + m + 1, Rational(0)));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw Error(ErrorCode::DimensionMismatch, "lp row width");
    int flip = sgn(b[i]) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = flip * A[i][j];
    t.rows[i][n + i] = 1;
    t.rows[i][n + m] = flip * b[i];
    t.basis[i] = n + i;
  }
  t.z.assign(n + m + 1, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.z[j] -= t.rows[i][j];
    t.z[n + m] -= t.rows[i][n + m];
  }
  t.run(n + m);
  if (sgn(t.z[n + m]) < 0) return std::nullopt;

  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < n) {
      ++i;
      continue;
    }
    std::size_t j = 0;
    while (j < n && sgn(t.rows[i][j]) == 0) ++j;
    if (j < n) {
      t.pivot(i, j);
      ++i;
    } else {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  for (std::size_t j = 0; j <= n + m; ++j) t.z[j] = 0;
  for (std::size_t j = 0; j < n; ++j) t.z[j] = -c[j];
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const Rational& cb = c[t.basis[i]];
    if (sgn(cb) == 0) continue;
    for (std::size_t j = 0; j <= n + m; ++j) t.z[j] += cb * t.rows[i][j];
  }
  if (!t.run(n)) throw Error(ErrorCode::Internal, "unbounded linear program");
  return t.z[n + m];
}

std::size_t lattice_rank(const std::vector<LatticeVector>& vectors) {
  if (vectors.empty()) return 0;
  const std::size_t r = vectors.front().rank();
  std::vector<Row> m;
  for (const auto& v : vectors) {
    Row row(r);
    for (std::size_t j = 0; j < r; ++j) row[j] = static_cast<long>(v[j]);
    m.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < r && rank < m.size(); ++col) {
    std::size_t piv = rank;
    while (piv < m.size() && sgn(m[piv][col]) == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (sgn(m[i][col]) == 0) continue;
      Rational f = m[i][col] / m[rank][col];
      for (std::size_t j = col; j < r; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::vector<LatticeVector> hyperplane_basis(const LatticeVector& functional) {
  if (functional.is_zero()) throw Error(ErrorCode::InvalidArgument, "hyperplane of the zero functional");
  const std::size_t r = functional.rank();
  std::size_t p = 0;
  while (functional[p] == 0) ++p;
  std::vector<LatticeVector> out;
  for (std::size_t j = 0; j < r; ++j) {
    if (j == p) continue;
    LatticeVector v(r);
    v[j] = functional[p];
    v[p] = -functional[j];
    out.push_back(v.primitive());
  }
  return out;
}

Cone::Cone(std::size_t rank, std::vector<LatticeVector> generators) : rank_(rank) {
  for (auto& g : generators) {
    if (g.rank() != rank) throw Error(ErrorCode::DimensionMismatch, "cone generator rank");
    if (!g.is_zero()) generators_.push_back(g.primitive());
  }
  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
}

Cone Cone::hyperplane(const LatticeVector& functional) {
  std::vector<LatticeVector> gens;
  for (const auto& v : hyperplane_basis(functional)) {
    gens.push_back(v);
    gens.push_back(-v);
  }
  return Cone(functional.rank(), std::move(gens));
}

Cone Cone::ray(const LatticeVector& direction) { return Cone(direction.rank(), {direction}); }

std::size_t Cone::dimension() const { return lattice_rank(generators_); }

RationalPoint Cone::interior_point() const {
  RationalPoint x(rank_);
  for (const auto& g : generators_) x += RationalPoint(g);
  return x;
}

ConeLocation Cone::locate(const RationalPoint& x) const {
  if (x.rank() != rank_) throw Error(ErrorCode::DimensionMismatch, "cone membership rank");
  if (generators_.empty()) return x.is_zero() ? ConeLocation::RelativeInterior : ConeLocation::Outside;

  LatticeVector dir;
  if (all_collinear(generators_, dir)) {
    // x must be t * dir
    std::size_t p = 0;
    while (dir[p] == 0) ++p;
    Rational t = x[p] / Rational(static_cast<long>(dir[p]));
    for (std::size_t i = 0; i < rank_; ++i)
      if (x[i] != t * Rational(static_cast<long>(dir[i]))) return ConeLocation::Outside;
    bool has_pos = false, has_neg = false;
    for (const auto& g : generators_) (g == dir ? has_pos : has_neg) = true;
    if (has_pos && has_neg) return ConeLocation::RelativeInterior;
    int s = sgn(t) * (has_pos ? 1 : -1);
    if (s > 0) return ConeLocation::RelativeInterior;
    if (s == 0) return ConeLocation::Boundary;
    return ConeLocation::Outside;
  }

  // variables: lambda_1..lambda_g, mu, slack; maximize mu subject to
  // sum lambda_i g_i + mu * sum g_i = x and mu + slack = 1
  const std::size_t g = generators_.size();
  std::vector<std::vector<Rational>> A(rank_ + 1, std::vector<Rational>(g + 2, Rational(0)));
  std::vector<Rational> b(rank_ + 1);
  for (std::size_t i = 0; i < rank_; ++i) {
    Rational sum = 0;
    for (std::size_t k = 0; k < g; ++k) {
      A[i][k] = static_cast<long>(generators_[k][i]);
      sum += A[i][k];
    }
    A[i][g] = sum;
    b[i] = x[i];
  }
  A[rank_][g] = 1;
  A[rank_][g + 1] = 1;
  b[rank_] = 1;
  std::vector<Rational> c(g + 2, Rational(0));
  c[g] = 1;
  auto best = lp_maximize(A, b, c);
  if (!best) return ConeLocation::Outside;
  return sgn(*best) > 0 ? ConeLocation::RelativeInterior : ConeLocation::Boundary;
}

bool Cone::is_subset_of(const Cone& other) const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [&](const LatticeVector& v) { return other.contains(v); });
}

}  // namespace kscatter
