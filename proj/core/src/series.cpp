#include "kscatter/series.hpp"

#include <algorithm>

namespace kscatter {

namespace {

void require_compatible(const TruncatedMonoidSeries& a, const TruncatedMonoidSeries& b, const char* op) {
  if (a.order() != b.order()) {
    throw Error(ErrorCode::OrderMismatch, std::string(op) + ": orders " + std::to_string(a.order()) + " and " +
                                              std::to_string(b.order()));
  }
  if (!(*a.monoid() == *b.monoid())) throw Error(ErrorCode::DimensionMismatch, std::string(op) + ": different monoids");
}

std::string monomial_text(const Integer& c, const LatticeVector& exponent, bool first) {
  std::string s;
  Integer mag = abs(c);
  if (first) {
    if (sgn(c) < 0) s += "-";
  } else {
    s += sgn(c) < 0 ? " - " : " + ";
  }
  if (exponent.is_zero()) return s + mag.get_str();
  if (mag != 1) s += mag.get_str() + "*";
  return s + "z^" + exponent.to_string();
}

}  // namespace

TruncatedMonoidSeries::TruncatedMonoidSeries(MonoidPtr monoid, LatticeVector base, std::int64_t order)
    : monoid_(std::move(monoid)), base_(std::move(base)), order_(order) {
  if (!monoid_) throw Error(ErrorCode::InvalidArgument, "series without a monoid");
  if (order_ < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
  if (base_.rank() != monoid_->rank()) throw Error(ErrorCode::DimensionMismatch, "series base rank");
}

TruncatedMonoidSeries TruncatedMonoidSeries::one(MonoidPtr monoid, std::int64_t order) {
  auto r = monoid->rank();
  return monomial(std::move(monoid), LatticeVector(r), order);
}

TruncatedMonoidSeries TruncatedMonoidSeries::monomial(MonoidPtr monoid, const LatticeVector& exponent,
                                                      std::int64_t order, const Integer& coeff) {
  TruncatedMonoidSeries s(std::move(monoid), exponent, order);
  s.add_term(LatticeVector(exponent.rank()), coeff);
  return s;
}

Integer TruncatedMonoidSeries::coefficient(const LatticeVector& offset) const {
  auto it = terms_.find(offset);
  return it == terms_.end() ? Integer(0) : it->second;
}

bool TruncatedMonoidSeries::all_coefficients_nonnegative() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return sgn(t.second) >= 0; });
}

void TruncatedMonoidSeries::add_term(const LatticeVector& offset, const Integer& coeff) {
  auto d = monoid_->degree(offset);
  if (!d) throw Error(ErrorCode::InvalidArgument, "offset " + offset.to_string() + " is not in P");
  if (*d > order_ || sgn(coeff) == 0) return;
  auto [it, inserted] = terms_.try_emplace(offset, coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

TruncatedMonoidSeries TruncatedMonoidSeries::truncated(std::int64_t new_order) const {
  if (new_order > order_) throw Error(ErrorCode::OrderMismatch, "cannot raise the order of a truncated series");
  TruncatedMonoidSeries r(monoid_, base_, new_order);
  for (const auto& [p, c] : terms_)
    if (*monoid_->degree(p) <= new_order) r.terms_.emplace(p, c);
  return r;
}

TruncatedMonoidSeries TruncatedMonoidSeries::rebased(const LatticeVector& new_base) const {
  LatticeVector shift = base_ - new_base;
  if (!monoid_->contains(shift)) {
    throw Error(ErrorCode::InvalidArgument, "cannot rebase " + base_.to_string() + " to " + new_base.to_string());
  }
  TruncatedMonoidSeries r(monoid_, new_base, order_);
  for (const auto& [p, c] : terms_) r.add_term(p + shift, c);
  return r;
}

TruncatedMonoidSeries& TruncatedMonoidSeries::operator+=(const TruncatedMonoidSeries& o) {
  require_compatible(*this, o, "add");
  if (o.base_ != base_) throw Error(ErrorCode::InvalidArgument, "adding series with different bases");
  for (const auto& [p, c] : o.terms_) add_term(p, c);
  return *this;
}

TruncatedMonoidSeries& TruncatedMonoidSeries::operator-=(const TruncatedMonoidSeries& o) {
  require_compatible(*this, o, "subtract");
  if (o.base_ != base_) throw Error(ErrorCode::InvalidArgument, "subtracting series with different bases");
  for (const auto& [p, c] : o.terms_) add_term(p, -c);
  return *this;
}

TruncatedMonoidSeries TruncatedMonoidSeries::operator-() const {
  TruncatedMonoidSeries r = *this;
  for (auto& [p, c] : r.terms_) c = -c;
  return r;
}

TruncatedMonoidSeries operator*(const Integer& s, const TruncatedMonoidSeries& a) {
  TruncatedMonoidSeries r(a.monoid_, a.base_, a.order_);
  if (sgn(s) == 0) return r;
  for (const auto& [p, c] : a.terms_) r.terms_.emplace(p, s * c);
  return r;
}

bool operator==(const TruncatedMonoidSeries& a, const TruncatedMonoidSeries& b) {
  return a.order_ == b.order_ && a.base_ == b.base_ && *a.monoid_ == *b.monoid_ && a.terms_ == b.terms_;
}

std::string TruncatedMonoidSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    s += monomial_text(c, base_ + p, first);
    first = false;
  }
  return s;
}

TruncatedMonoidSeries multiply(const TruncatedMonoidSeries& a, const TruncatedMonoidSeries& b) {
  require_compatible(a, b, "multiply");
  const auto& monoid = *a.monoid();
  TruncatedMonoidSeries r(a.monoid(), a.base() + b.base(), a.order());
  std::vector<std::pair<std::int64_t, const std::pair<const LatticeVector, Integer>*>> bt;
  bt.reserve(b.terms().size());
  for (const auto& t : b.terms()) bt.emplace_back(*monoid.degree(t.first), &t);
  for (const auto& [p, c] : a.terms()) {
    auto dp = *monoid.degree(p);
    for (const auto& [dq, t] : bt) {
      if (dp + dq > a.order()) continue;
      r.add_term(p + t->first, c * t->second);
    }
  }
  return r;
}

TruncatedMonoidSeries operator*(const TruncatedMonoidSeries& a, const TruncatedMonoidSeries& b) {
  return multiply(a, b);
}

TruncatedMonoidSeries power(const TruncatedMonoidSeries& f, std::int64_t exponent) {
  auto one = TruncatedMonoidSeries::one(f.monoid(), f.order());
  if (exponent == 0) return one;
  TruncatedMonoidSeries x = f;
  if (exponent < 0) {
    Integer c0 = f.constant_term();
    if (c0 != 1 && c0 != -1) {
      throw Error(ErrorCode::NonUnitConstant, "cannot invert a series with constant term " + c0.get_str());
    }
    // f = z^b c0 (1 + g); f^{-1} = z^{-b} c0 sum_j (-g)^j
    TruncatedMonoidSeries neg_g(f.monoid(), LatticeVector(f.rank()), f.order());
    for (const auto& [p, c] : f.terms())
      if (!p.is_zero()) neg_g.add_term(p, -c * c0);
    TruncatedMonoidSeries inv = one;
    TruncatedMonoidSeries term = one;
    for (std::int64_t j = 1; j <= f.order() && !neg_g.is_zero(); ++j) {
      term = term * neg_g;
      if (term.is_zero()) break;
      inv += term;
    }
    x = TruncatedMonoidSeries(f.monoid(), -f.base(), f.order());
    for (const auto& [p, c] : inv.terms()) x.add_term(p, c * c0);
    exponent = -exponent;
  }
  TruncatedMonoidSeries result = one;
  while (exponent > 0) {
    if (exponent & 1) result = result * x;
    exponent >>= 1;
    if (exponent) x = x * x;
  }
  return result;
}

TruncatedMonoidSeries power(const TruncatedMonoidSeries& f, std::int64_t exponent, std::int64_t order) {
  if (order > f.order()) throw Error(ErrorCode::OrderMismatch, "power at an order above the series order");
  return power(f.truncated(order), exponent);
}

UnivariatePoly univariate_power(const UnivariatePoly& f, std::int64_t exponent, std::size_t length) {
  UnivariatePoly g(length, Integer(0));
  if (length == 0) return g;
  if (f.empty() || f[0] != 1) throw Error(ErrorCode::NonUnitConstant, "univariate power needs constant term 1");
  g[0] = 1;
  // n g_n = sum_{i=1}^n ((a+1) i - n) f_i g_{n-i}
  Integer a = static_cast<long>(exponent);
  for (std::size_t n = 1; n < length; ++n) {
    Integer acc = 0;
    for (std::size_t i = 1; i <= n && i < f.size(); ++i) {
      if (sgn(f[i]) == 0 || sgn(g[n - i]) == 0) continue;
      Integer w = (a + 1) * static_cast<long>(i) - static_cast<long>(n);
      acc += w * f[i] * g[n - i];
    }
    mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
    g[n] = acc;
  }
  return g;
}

WallFunction::WallFunction(LatticeVector direction, std::vector<Integer> coeffs, std::int64_t order,
                           const Monoid& monoid)
    : direction_(std::move(direction)), coeffs_(std::move(coeffs)), order_(order) {
  auto d = monoid.degree(direction_);
  if (!d || *d == 0) throw Error(ErrorCode::InvalidArgument, "wall direction " + direction_.to_string() + " not in P \\ 0");
  if (!direction_.is_primitive()) throw Error(ErrorCode::InvalidArgument, "wall direction " + direction_.to_string() + " not primitive");
  if (order_ < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
  direction_degree_ = *d;
  max_power_ = static_cast<std::size_t>(order_ / direction_degree_);
  trim();
}

WallFunction WallFunction::binomial(const LatticeVector& direction, std::int64_t order, const Monoid& monoid) {
  return WallFunction(direction, {Integer(1)}, order, monoid);
}

void WallFunction::trim() { coeffs_.resize(max_power_, Integer(0)); }

Integer WallFunction::coefficient(std::size_t j) const {
  if (j == 0) return 1;
  return j <= coeffs_.size() ? coeffs_[j - 1] : Integer(0);
}

void WallFunction::set_coefficient(std::size_t j, const Integer& c) {
  if (j == 0 || j > max_power_) throw Error(ErrorCode::InvalidArgument, "wall coefficient index out of range");
  coeffs_[j - 1] = c;
}

void WallFunction::add_to_coefficient(std::size_t j, const Integer& c) {
  if (j == 0 || j > max_power_) throw Error(ErrorCode::InvalidArgument, "wall coefficient index out of range");
  coeffs_[j - 1] += c;
}

bool WallFunction::all_coefficients_nonnegative() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return sgn(c) >= 0; });
}

bool WallFunction::is_trivial() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return sgn(c) == 0; });
}

UnivariatePoly WallFunction::as_univariate() const {
  UnivariatePoly f(max_power_ + 1);
  f[0] = 1;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) f[j + 1] = coeffs_[j];
  return f;
}

UnivariatePoly WallFunction::power(std::int64_t exponent, std::int64_t offset_degree) const {
  std::int64_t budget = order_ - offset_degree;
  if (budget < 0) return {};
  std::size_t length = static_cast<std::size_t>(budget / direction_degree_) + 1;
  if (exponent == 0) {
    UnivariatePoly one(length, Integer(0));
    one[0] = 1;
    return one;
  }
  return univariate_power(as_univariate(), exponent, length);
}

TruncatedMonoidSeries WallFunction::to_series(MonoidPtr monoid) const {
  TruncatedMonoidSeries s(std::move(monoid), LatticeVector(direction_.rank()), order_);
  s.add_term(LatticeVector(direction_.rank()), 1);
  for (std::size_t j = 1; j <= coeffs_.size(); ++j) s.add_term(static_cast<std::int64_t>(j) * direction_, coeffs_[j - 1]);
  return s;
}

WallFunction WallFunction::truncated(std::int64_t new_order) const {
  if (new_order > order_) throw Error(ErrorCode::OrderMismatch, "cannot raise the order of a wall function");
  WallFunction w = *this;
  w.order_ = new_order;
  w.max_power_ = static_cast<std::size_t>(new_order / direction_degree_);
  w.trim();
  return w;
}

WallFunction WallFunction::times(const WallFunction& other) const {
  if (other.direction_ != direction_) throw Error(ErrorCode::InvalidArgument, "multiplying walls with different directions");
  if (other.order_ != order_) throw Error(ErrorCode::OrderMismatch, "multiplying walls of different orders");
  auto a = as_univariate();
  auto b = other.as_univariate();
  WallFunction w = *this;
  for (std::size_t n = 1; n <= max_power_; ++n) {
    Integer s = 0;
    for (std::size_t i = 0; i <= n; ++i) s += a[i] * b[n - i];
    w.coeffs_[n - 1] = s;
  }
  return w;
}

std::string WallFunction::to_string(std::size_t max_terms) const {
  std::string s = "1";
  std::size_t shown = 1;
  for (std::size_t j = 1; j <= coeffs_.size(); ++j) {
    if (sgn(coeffs_[j - 1]) == 0) continue;
    if (max_terms && shown >= max_terms) return s + " + ...";
    s += monomial_text(coeffs_[j - 1], static_cast<std::int64_t>(j) * direction_, false);
    ++shown;
  }
  return s;
}

}  // namespace kscatter
