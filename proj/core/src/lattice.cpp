#include "kscatter/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kscatter {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Internal, "lattice coordinate overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Internal, "lattice coordinate overflow");
  return r;
}

void require_same_rank(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": rank " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tuple(const std::string& text) {
  std::string body = strip(text);
  if (body.size() >= 2 && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
  std::vector<std::string> parts;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(strip(item));
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "empty tuple '" + text + "'");
  return parts;
}

}  // namespace

LatticeVector LatticeVector::unit(std::size_t rank, std::size_t index) {
  if (index >= rank) throw Error(ErrorCode::DimensionMismatch, "basis index out of range");
  LatticeVector v(rank);
  v.coords_[index] = 1;
  return v;
}

bool LatticeVector::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

std::int64_t LatticeVector::content() const {
  std::int64_t g = 0;
  for (auto c : coords_) g = std::gcd(g, c);
  return g;
}

LatticeVector LatticeVector::primitive() const {
  auto g = content();
  if (g == 0) throw Error(ErrorCode::InvalidArgument, "primitive() of the zero vector");
  LatticeVector r = *this;
  for (auto& c : r.coords_) c /= g;
  return r;
}

LatticeVector& LatticeVector::operator+=(const LatticeVector& o) {
  require_same_rank(rank(), o.rank(), "vector addition");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_add(coords_[i], o.coords_[i]);
  return *this;
}

LatticeVector& LatticeVector::operator-=(const LatticeVector& o) {
  require_same_rank(rank(), o.rank(), "vector subtraction");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_add(coords_[i], checked_mul(-1, o.coords_[i]));
  return *this;
}

LatticeVector LatticeVector::operator-() const {
  LatticeVector r = *this;
  for (auto& c : r.coords_) c = checked_mul(-1, c);
  return r;
}

LatticeVector operator*(std::int64_t s, const LatticeVector& v) {
  LatticeVector r = v;
  for (auto& c : r.coords_) c = checked_mul(s, c);
  return r;
}

std::string LatticeVector::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

std::ostream& operator<<(std::ostream& os, const LatticeVector& v) { return os << v.to_string(); }

RationalPoint::RationalPoint(const LatticeVector& v) {
  coords_.reserve(v.rank());
  for (auto c : v.coords()) coords_.emplace_back(static_cast<long>(c));
}

bool RationalPoint::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return sgn(c) == 0; });
}

RationalPoint& RationalPoint::operator+=(const RationalPoint& o) {
  require_same_rank(rank(), o.rank(), "point addition");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

RationalPoint& RationalPoint::operator-=(const RationalPoint& o) {
  require_same_rank(rank(), o.rank(), "point subtraction");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

RationalPoint operator*(const Rational& s, const RationalPoint& p) {
  RationalPoint r = p;
  for (auto& c : r.coords_) c *= s;
  return r;
}

bool operator==(const RationalPoint& a, const RationalPoint& b) {
  if (a.rank() != b.rank()) return false;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (a.coords_[i] != b.coords_[i]) return false;
  return true;
}

std::string RationalPoint::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ',';
    s += coords_[i].get_str();
  }
  return s + ")";
}

std::ostream& operator<<(std::ostream& os, const RationalPoint& p) { return os << p.to_string(); }

Rational dot(const LatticeVector& functional, const RationalPoint& x) {
  require_same_rank(functional.rank(), x.rank(), "dot");
  Rational s = 0;
  for (std::size_t i = 0; i < x.rank(); ++i)
    if (functional[i] != 0) s += Rational(static_cast<long>(functional[i])) * x[i];
  return s;
}

std::int64_t dot(const LatticeVector& functional, const LatticeVector& v) {
  require_same_rank(functional.rank(), v.rank(), "dot");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < v.rank(); ++i) s = checked_add(s, checked_mul(functional[i], v[i]));
  return s;
}

int sign(const Rational& q) { return sgn(q); }

std::int64_t det2(const LatticeVector& a, const LatticeVector& b) {
  return checked_add(checked_mul(a[0], b[1]), checked_mul(-a[1], b[0]));
}

Rational det2(const LatticeVector& a, const RationalPoint& b) {
  return Rational(static_cast<long>(a[0])) * b[1] - Rational(static_cast<long>(a[1])) * b[0];
}

SkewForm::SkewForm(std::size_t rank, std::vector<std::int64_t> row_major)
    : rank_(rank), entries_(std::move(row_major)) {
  if (entries_.size() != rank_ * rank_) {
    throw Error(ErrorCode::InvalidSeed, "skew matrix needs " + std::to_string(rank_ * rank_) +
                                            " entries, got " + std::to_string(entries_.size()));
  }
  for (std::size_t i = 0; i < rank_; ++i)
    for (std::size_t j = 0; j < rank_; ++j)
      if (at(i, j) != -at(j, i)) {
        throw Error(ErrorCode::InvalidSeed, "matrix is not antisymmetric at (" + std::to_string(i + 1) +
                                                "," + std::to_string(j + 1) + ")");
      }
}

LatticeVector SkewForm::functional(const LatticeVector& u) const {
  require_same_rank(u.rank(), rank_, "functional");
  LatticeVector c(rank_);
  for (std::size_t j = 0; j < rank_; ++j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < rank_; ++i) s = checked_add(s, checked_mul(u[i], at(i, j)));
    c[j] = s;
  }
  return c;
}

Integer SkewForm::determinant() const {
  // fraction-free Bareiss elimination
  const std::size_t n = rank_;
  if (n == 0) return 1;
  std::vector<Integer> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = static_cast<long>(entries_[i]);
  Integer prev = 1;
  int flip = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv * n + k] == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      flip = -flip;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return flip * a[n * n - 1];
}

std::int64_t pair(const SkewForm& form, const LatticeVector& u, const LatticeVector& v) {
  require_same_rank(u.rank(), form.rank(), "pair");
  require_same_rank(v.rank(), form.rank(), "pair");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < form.rank(); ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < form.rank(); ++j)
      s = checked_add(s, checked_mul(u[i], checked_mul(form.at(i, j), v[j])));
  }
  return s;
}

Monoid::Monoid(std::size_t rank, std::vector<std::size_t> generators)
    : rank_(rank), generators_(std::move(generators)), mask_(rank, 0) {
  std::sort(generators_.begin(), generators_.end());
  if (std::adjacent_find(generators_.begin(), generators_.end()) != generators_.end())
    throw Error(ErrorCode::InvalidSeed, "repeated unfrozen index");
  for (auto g : generators_) {
    if (g >= rank_) throw Error(ErrorCode::InvalidSeed, "unfrozen index " + std::to_string(g + 1) + " out of range");
    mask_[g] = 1;
  }
}

std::optional<std::int64_t> Monoid::degree(const LatticeVector& n) const {
  require_same_rank(n.rank(), rank_, "degree");
  std::int64_t d = 0;
  for (std::size_t i = 0; i < rank_; ++i) {
    if (mask_[i]) {
      if (n[i] < 0) return std::nullopt;
      d = checked_add(d, n[i]);
    } else if (n[i] != 0) {
      return std::nullopt;
    }
  }
  return d;
}

std::vector<LatticeVector> Monoid::elements_up_to(std::int64_t max_degree) const {
  std::vector<LatticeVector> out;
  if (max_degree < 0) return out;
  LatticeVector cur(rank_);
  auto rec = [&](auto&& self, std::size_t gi, std::int64_t left) -> void {
    if (gi == generators_.size()) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t c = 0; c <= left; ++c) {
      cur[generators_[gi]] = c;
      self(self, gi + 1, left - c);
    }
    cur[generators_[gi]] = 0;
  };
  rec(rec, 0, max_degree);
  std::sort(out.begin(), out.end());
  return out;
}

Seed::Seed(SkewForm form, std::vector<std::size_t> unfrozen)
    : form_(std::move(form)), monoid_(std::make_shared<Monoid>(form_.rank(), std::move(unfrozen))) {
  if (form_.rank() == 0) throw Error(ErrorCode::InvalidSeed, "rank must be positive");
  for (auto e : monoid_->generators()) {
    if (form_.functional(basis(e)).is_zero()) {
      throw Error(ErrorCode::InvalidSeed, "functional <e" + std::to_string(e + 1) + ",.> vanishes");
    }
  }
}

bool Seed::unfrozen_functionals_primitive() const {
  return std::all_of(unfrozen().begin(), unfrozen().end(),
                     [&](std::size_t e) { return form_.functional(basis(e)).is_primitive(); });
}

bool Seed::is_unimodular() const {
  auto d = form_.determinant();
  return d == 1 || d == -1;
}

std::optional<std::int64_t> degree(const Seed& seed, const LatticeVector& n) { return seed.monoid()->degree(n); }

GenericPoint generic_point(std::size_t rank, const std::optional<LatticeVector>& constraint,
                           const std::vector<LatticeVector>& avoid, std::size_t attempt) {
  for (const auto& f : avoid) require_same_rank(f.rank(), rank, "generic_point");
  std::vector<RationalPoint> frame;
  if (constraint) {
    const auto& n = *constraint;
    require_same_rank(n.rank(), rank, "generic_point");
    if (n.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero constraint normal");
    std::size_t p = 0;
    while (n[p] == 0) ++p;
    for (std::size_t j = 0; j < rank; ++j) {
      if (j == p) continue;
      LatticeVector v(rank);
      v[j] = n[p];
      v[p] = -n[j];
      frame.emplace_back(v);
    }
    for (const auto& f : avoid) {
      bool vanishes = std::all_of(frame.begin(), frame.end(), [&](const RationalPoint& v) { return sgn(dot(f, v)) == 0; });
      if (vanishes) {
        throw Error(ErrorCode::ConstraintConflict,
                    "functional " + f.to_string() + " vanishes on the constraint hyperplane " + n.to_string());
      }
    }
  } else {
    for (std::size_t j = 0; j < rank; ++j) frame.emplace_back(LatticeVector::unit(rank, j));
    for (const auto& f : avoid)
      if (f.is_zero()) throw Error(ErrorCode::ConstraintConflict, "zero functional in avoid list");
  }
  if (frame.empty()) {
    if (!avoid.empty()) throw Error(ErrorCode::ConstraintConflict, "constraint leaves only the origin");
    return {RationalPoint(rank), {}};
  }

  constexpr std::size_t kMaxTries = 4096;
  for (std::size_t a = attempt; a < attempt + kMaxTries; ++a) {
    Rational t(static_cast<long>(a + 3), static_cast<long>(2 * a + 7));
    t.canonicalize();
    RationalPoint x(rank);
    Rational w = t;
    for (const auto& v : frame) {
      x += w * v;
      w *= t;
    }
    bool ok = std::all_of(avoid.begin(), avoid.end(), [&](const LatticeVector& f) { return sgn(dot(f, x)) != 0; });
    if (ok) return {x, avoid};
  }
  throw Error(ErrorCode::Internal, "no generic point found");
}

GenericPoint generic_point(const Seed& seed, const std::optional<LatticeVector>& constraint,
                           const std::vector<LatticeVector>& avoid, std::size_t attempt) {
  return generic_point(seed.rank(), constraint, avoid, attempt);
}

LatticeVector parse_lattice_vector(const std::string& text) {
  std::vector<std::int64_t> coords;
  for (const auto& part : split_tuple(text)) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw Error(ErrorCode::InvalidArgument, "bad integer '" + part + "'");
    coords.push_back(v);
  }
  return LatticeVector(std::move(coords));
}

RationalPoint parse_rational_point(const std::string& text) {
  std::vector<Rational> coords;
  for (const auto& part : split_tuple(text)) {
    Rational q;
    if (part.empty() || q.set_str(part, 10) != 0) throw Error(ErrorCode::InvalidArgument, "bad rational '" + part + "'");
    if (part.find('/') != std::string::npos && q.get_den() == 0)
      throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + part + "'");
    q.canonicalize();
    coords.push_back(q);
  }
  return RationalPoint(std::move(coords));
}

}  // namespace kscatter
