#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

// Series in x, y with nonnegative exponents, total degree <= K.
struct Series {
  int K = 0;
  std::map<Exp, mpz_class> c;

  Series mul(const Series& o) const {
    Series r{K, {}};
    for (auto& [e1, a] : c)
      for (auto& [e2, b] : o.c) {
        Exp e{e1[0] + e2[0], e1[1] + e2[1]};
        if (e[0] + e[1] > K) continue;
        r.c[e] += a * b;
      }
    r.clean();
    return r;
  }
  void clean() {
    for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
  }
};

Series one(int K) { return Series{K, {{{0, 0}, 1}}}; }

// f(t)^n for f = 1 + sum c_j t^j, t = x^d0 y^d1, as a bivariate series.
Series wall_power(const Exp& d, const std::vector<mpz_class>& f, long n, int K) {
  int deg = d[0] + d[1];
  int J = K / deg;
  std::vector<mpz_class> base(J + 1, 0), out(J + 1, 0);
  base[0] = 1;
  for (int j = 1; j <= J && j <= (int)f.size(); ++j) base[j] = f[j - 1];
  if (n < 0) {
    // invert the unit power series
    std::vector<mpz_class> inv(J + 1, 0);
    inv[0] = 1;
    for (int j = 1; j <= J; ++j) {
      mpz_class acc = 0;
      for (int i = 1; i <= j; ++i) acc += base[i] * inv[j - i];
      inv[j] = -acc;
    }
    base = inv;
    n = -n;
  }
  out[0] = 1;
  for (long r = 0; r < n; ++r) {
    std::vector<mpz_class> next(J + 1, 0);
    for (int i = 0; i <= J; ++i)
      for (int j = 0; i + j <= J; ++j) next[i + j] += out[i] * base[j];
    out = next;
  }
  Series s{K, {}};
  for (int j = 0; j <= J; ++j)
    if (out[j] != 0) s.c[{j * d[0], j * d[1]}] = out[j];
  return s;
}

struct Ray {
  Exp d;           // wall monomial direction (primitive, in N^2)
  Exp support;     // direction of the ray from the origin
  int eps;         // sign of the crossing when the loop passes counterclockwise
};

double angle(const Exp& v) {
  double a = std::atan2(double(v[1]), double(v[0]));
  return a < 0 ? a + 2 * M_PI : a;
}

long det(const Exp& a, const Exp& b) { return long(a[0]) * b[1] - long(a[1]) * b[0]; }

// Automorphism as (x-factor, y-factor): x -> x A, y -> y B.
struct Auto {
  Series A, B;
};

// Apply the crossing of one ray to the pair (A, B) describing the current
// composite: the images of x and y become theta(x A), theta(y B).
Auto apply(const Auto& cur, const Ray& r, const std::vector<mpz_class>& f, int s, int K) {
  auto image = [&](const Exp& v, const Series& factor) {
    // theta(z^v * sum a_q z^q) = z^v f^{k_v} * sum a_q z^q f^{k_q}
    long kv = r.eps * s * det(r.d, v);
    Series out{K, {}};
    for (auto& [q, a] : factor.c) {
      long kq = r.eps * s * det(r.d, q);
      Series term = wall_power(r.d, f, kq, K);
      for (auto& [e, b] : term.c) {
        Exp t{e[0] + q[0], e[1] + q[1]};
        if (t[0] + t[1] <= K) out.c[t] += a * b;
      }
    }
    out.clean();
    return out.mul(wall_power(r.d, f, kv, K));
  };
  return Auto{image({1, 0}, cur.A), image({0, 1}, cur.B)};
}

}  // namespace

mpz_class negative_binomial(int n, int j) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n + j - 1, j);
  return r;
}

std::map<Exp, std::vector<mpz_class>> scatter_rank2(int s, int order) {
  const int K = order;
  std::map<Exp, std::vector<mpz_class>> funcs;
  funcs[{1, 0}] = {1};
  funcs[{0, 1}] = {1};

  auto loop = [&]() {
    std::vector<Ray> rays;
    // initial lines: two rays each
    rays.push_back({{1, 0}, {1, 0}, -1});
    rays.push_back({{1, 0}, {-1, 0}, +1});
    rays.push_back({{0, 1}, {0, 1}, +1});
    rays.push_back({{0, 1}, {0, -1}, -1});
    for (auto& [d, f] : funcs) {
      if (d == Exp{1, 0} || d == Exp{0, 1}) continue;
      rays.push_back({d, {-d[0], -d[1]}, +1});
    }
    std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) { return angle(a.support) < angle(b.support); });
    for (auto& r : rays) {
      // sign from the point just before the ray on a counterclockwise loop
      Exp before{r.support[0] * 1000 + r.support[1], r.support[1] * 1000 - r.support[0]};
      long v = s * det(r.d, before);
      r.eps = v > 0 ? 1 : -1;
    }
    Auto cur{one(K), one(K)};
    for (auto& r : rays) cur = apply(cur, r, funcs[r.d], s, K);
    return cur;
  };

  for (int l = 1; l <= K; ++l) {
    Auto phi = loop();
    std::map<Exp, mpz_class> fix;
    for (auto& [e, a] : phi.A.c) {
      int deg = e[0] + e[1];
      if (deg == 0) continue;
      if (deg < l) throw std::runtime_error("oracle: lower-order defect survived");
      if (deg > l) continue;
      int g = std::gcd(e[0], e[1]);
      Exp d{e[0] / g, e[1] / g};
      long pair = s * det(d, {1, 0});  // eps = +1 for outgoing rays
      if (pair == 0) continue;
      mpz_class c = -a;
      if (c % pair != 0) throw std::runtime_error("oracle: non-integral correction");
      fix[e] = c / pair;
    }
    for (auto& [e, b] : phi.B.c) {
      int deg = e[0] + e[1];
      if (deg != l) continue;
      int g = std::gcd(e[0], e[1]);
      Exp d{e[0] / g, e[1] / g};
      long pair = s * det(d, {0, 1});
      if (pair == 0) continue;
      mpz_class c = -b;
      if (c % pair != 0) throw std::runtime_error("oracle: non-integral correction");
      mpz_class val = c / pair;
      if (fix.count(e) && fix[e] != val) throw std::runtime_error("oracle: x and y corrections disagree");
      fix[e] = val;
    }
    for (auto& [e, c] : fix) {
      int g = std::gcd(e[0], e[1]);
      Exp d{e[0] / g, e[1] / g};
      auto& f = funcs[d];
      if ((int)f.size() < g) f.resize(g, 0);
      f[g - 1] += c;
    }
  }
  Auto phi = loop();
  for (auto* s2 : {&phi.A, &phi.B})
    for (auto& [e, a] : s2->c)
      if (e != Exp{0, 0}) throw std::runtime_error("oracle: loop not closed");
  return funcs;
}

std::int64_t hat(const std::vector<Exp>& rays, std::size_t j, Exp v) {
  if (v[0] == 0 && v[1] == 0) return 0;
  std::size_t n = rays.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Exp& u = rays[i];
    const Exp& w = rays[(i + 1) % n];
    long du = det(u, v), dw = det(v, w);
    if (du >= 0 && dw >= 0 && det(u, w) > 0) {
      // v = alpha u + beta w with det(u, w) = 1
      long alpha = dw, beta = du;
      std::int64_t r = 0;
      if (i == j) r += alpha;
      if ((i + 1) % n == j) r += beta;
      return r;
    }
  }
  throw std::runtime_error("oracle: vector outside fan");
}

std::vector<std::int64_t> toric_gamma(const std::vector<Exp>& rays, Exp a, Exp b) {
  Exp s{a[0] + b[0], a[1] + b[1]};
  std::vector<std::int64_t> out;
  for (std::size_t j = 0; j < rays.size(); ++j) out.push_back(hat(rays, j, a) + hat(rays, j, b) - hat(rays, j, s));
  return out;
}

std::vector<Fraction> a2_cluster_variables() {
  return {
      {{{{0, 0}, 1}, {{0, 1}, 1}}, {1, 0}},              // (1 + x2) / x1
      {{{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}}, {1, 1}},  // (1 + x1 + x2) / (x1 x2)
      {{{{0, 0}, 1}, {{1, 0}, 1}}, {0, 1}},              // (1 + x1) / x2
  };
}

}  // namespace oracle
