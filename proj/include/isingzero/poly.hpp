#pragma once
// Dense univariate polynomials over an arbitrary coefficient ring.
// Coefficient order is ascending: c[i] multiplies x^i.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cx.hpp"
#include "mp.hpp"

namespace isingzero {

template <class T> struct Poly {
  std::vector<T> c;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
  // constant-polynomial conversions so that Poly itself models the
  // coefficient-ring concept (enables nested Poly<Poly<...>>)
  Poly(int v) : Poly(std::vector<T>{T(v)}) {}
  Poly(long long v) : Poly(std::vector<T>{T(v)}) {}
  Poly &operator+=(const Poly &o) { return *this = *this + o; }
  Poly &operator-=(const Poly &o) { return *this = *this - o; }
  Poly &operator*=(const Poly &o) { return *this = *this * o; }
  static Poly constant(T v) { return Poly(std::vector<T>{std::move(v)}); }
  static Poly monomial(T v, size_t k) {
    std::vector<T> cs(k + 1, T(0));
    cs[k] = std::move(v);
    return Poly(std::move(cs));
  }

  void trim() {
    while (!c.empty() && c.back() == T(0)) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  // degree of the zero polynomial reported as -1
  long long degree() const { return (long long)c.size() - 1; }
  T coeff(size_t i) const { return i < c.size() ? c[i] : T(0); }
  T leading() const {
    if (c.empty()) throw std::domain_error("leading coefficient of zero");
    return c.back();
  }

  friend Poly operator+(const Poly &a, const Poly &b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly &a, const Poly &b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly &a, const Poly &b) { return mul(a, b); }
  friend Poly operator*(const T &s, const Poly &a) {
    std::vector<T> r = a.c;
    for (auto &v : r) v *= s;
    return Poly(std::move(r));
  }

  friend bool operator==(const Poly &a, const Poly &b) { return a.c == b.c; }

  template <class U> U eval(const U &x) const {
    U acc(0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + U(c[i]);
    return acc;
  }

  Poly derivative() const {
    if (c.size() <= 1) return Poly();
    std::vector<T> r(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r[i - 1] = T((long long)i) * c[i];
    return Poly(std::move(r));
  }

  bool is_palindromic() const {
    for (size_t i = 0; i < c.size(); ++i)
      if (!(c[i] == c[c.size() - 1 - i])) return false;
    return !c.empty();
  }

  // x^deg * p(1/x)
  Poly reversed() const {
    std::vector<T> r(c.rbegin(), c.rend());
    return Poly(std::move(r));
  }

  template <class U> Poly<U> convert() const {
    std::vector<U> r;
    r.reserve(c.size());
    for (const auto &v : c) r.push_back(U(v));
    return Poly<U>(std::move(r));
  }

  static Poly mul(const Poly &a, const Poly &b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    if (std::min(a.c.size(), b.c.size()) > 512) return karatsuba(a, b);
    std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(r));
  }

  static Poly karatsuba(const Poly &a, const Poly &b) {
    size_t h = std::max(a.c.size(), b.c.size()) / 2;
    auto split = [&](const Poly &p) {
      Poly lo, hi;
      lo.c.assign(p.c.begin(),
                  p.c.begin() + std::min(h, p.c.size()));
      if (p.c.size() > h) hi.c.assign(p.c.begin() + h, p.c.end());
      lo.trim();
      hi.trim();
      return std::pair{lo, hi};
    };
    auto [a0, a1] = split(a);
    auto [b0, b1] = split(b);
    Poly p0 = mul(a0, b0);
    Poly p2 = mul(a1, b1);
    Poly p1 = mul(a0 + a1, b0 + b1) - p0 - p2;
    std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
    auto add_at = [&](const Poly &p, size_t off) {
      for (size_t i = 0; i < p.c.size(); ++i) r[off + i] += p.c[i];
    };
    add_at(p0, 0);
    add_at(p1, h);
    add_at(p2, 2 * h);
    return Poly(std::move(r));
  }

  Poly pow(unsigned long long e) const {
    Poly acc = constant(T(1));
    Poly base = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) acc = mul(acc, base);
      if (e > 1) base = mul(base, base);
    }
    return acc;
  }
};

// Quotient and remainder over a field.
template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T> &a, const Poly<T> &b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly<T>(), a};
  std::vector<T> rem = a.c;
  std::vector<T> quo(a.c.size() - b.c.size() + 1, T(0));
  T lead = b.c.back();
  long long db = (long long)b.c.size() - 1;
  for (long long i = (long long)a.c.size() - 1; i >= db; --i) {
    T q = rem[i] / lead;
    quo[i - db] = q;
    if (!(q == T(0)))
      for (long long j = 0; j <= db; ++j) rem[i - db + j] -= q * b.c[j];
  }
  return {Poly<T>(std::move(quo)), Poly<T>(std::move(rem))};
}

// Monic gcd over a field (exact coefficient type expected, e.g. Rational).
template <class T> Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    a = b;
    b = r;
  }
  if (!a.is_zero()) {
    T inv = T(1) / a.leading();
    a = inv * a;
  }
  return a;
}

// Coefficients of the palindromic reduction: for a palindromic p of even
// degree 2m, returns q of degree m with p(x)/x^m == q(x + 1/x).
template <class T> Poly<T> palindromic_reduce(const Poly<T> &p) {
  if (!p.is_palindromic())
    throw std::domain_error("palindromic_reduce: not palindromic");
  if (p.degree() % 2 != 0)
    throw std::domain_error("palindromic_reduce: odd degree");
  size_t m = (size_t)(p.degree() / 2);
  // x^k + x^-k = s_k(w) with s_0 = 2, s_1 = w, s_{k+1} = w s_k - s_{k-1}.
  Poly<T> w = Poly<T>::monomial(T(1), 1);
  Poly<T> s_prev = Poly<T>::constant(T(2));
  Poly<T> s_cur = w;
  Poly<T> acc = Poly<T>::constant(p.coeff(m));
  for (size_t k = 1; k <= m; ++k) {
    acc = acc + p.coeff(m - k) * s_cur;
    Poly<T> s_next = w * s_cur - s_prev;
    s_prev = s_cur;
    s_cur = s_next;
  }
  return acc;
}

// Exact division by (x + 1); throws if x = -1 is not a root.
template <class T> Poly<T> divide_out_minus_one_root(const Poly<T> &p) {
  auto [q, r] = divmod(p, Poly<T>({T(1), T(1)}));
  if (!r.is_zero())
    throw std::domain_error("divide_out_minus_one_root: -1 is not a root");
  return q;
}

} // namespace isingzero
