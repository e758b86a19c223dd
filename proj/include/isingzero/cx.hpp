#pragma once
// Minimal complex type that works uniformly over double and the MPFR reals.
// std::complex is only specified for built-in floating types, so we carry our
// own. Division and modulus are scaled to avoid overflow at double precision.

#include <cmath>
#include <utility>

#include "mp.hpp"

namespace isingzero {

using std::abs;
using std::atan;
using std::atan2;
using std::cos;
using std::exp;
using std::floor;
using std::ldexp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

template <class R> struct Cx {
  R re{}, im{};

  Cx() = default;
  Cx(R r) : re(std::move(r)) {}
  Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  friend Cx operator+(const Cx &a, const Cx &b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Cx operator-(const Cx &a, const Cx &b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Cx operator-(const Cx &a) { return {-a.re, -a.im}; }
  friend Cx operator*(const Cx &a, const Cx &b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator*(const R &s, const Cx &a) { return {s * a.re, s * a.im}; }
  friend Cx operator*(const Cx &a, const R &s) { return {a.re * s, a.im * s}; }
  friend Cx operator/(const Cx &a, const R &s) { return {a.re / s, a.im / s}; }

  friend Cx operator/(const Cx &a, const Cx &b) {
    // Smith's algorithm: scale by the larger component of b.
    R abr = abs(b.re), abi = abs(b.im);
    if (abr >= abi) {
      R r = b.im / b.re;
      R den = b.re + b.im * r;
      return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
    }
    R r = b.re / b.im;
    R den = b.re * r + b.im;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
  }

  Cx &operator+=(const Cx &b) { return *this = *this + b; }
  Cx &operator-=(const Cx &b) { return *this = *this - b; }
  Cx &operator*=(const Cx &b) { return *this = *this * b; }
  Cx &operator/=(const Cx &b) { return *this = *this / b; }

  friend bool operator==(const Cx &a, const Cx &b) {
    return a.re == b.re && a.im == b.im;
  }
};

template <class R> R norm_sq(const Cx<R> &z) {
  return z.re * z.re + z.im * z.im;
}

template <class R> R abs(const Cx<R> &z) {
  R ar = abs(z.re), ai = abs(z.im);
  if (ar == 0 && ai == 0) return R(0);
  R m = ar >= ai ? ar : ai;
  R x = ar / m, y = ai / m;
  return m * sqrt(x * x + y * y);
}

template <class R> Cx<R> conj(const Cx<R> &z) { return {z.re, -z.im}; }

template <class R> R arg(const Cx<R> &z) { return atan2(z.im, z.re); }

template <class R> Cx<R> polar_cx(const R &r, const R &theta) {
  return {r * cos(theta), r * sin(theta)};
}

template <class R> Cx<R> unit_cx(const R &theta) {
  return {cos(theta), sin(theta)};
}

template <class R> Cx<R> sqrt_cx(const Cx<R> &z) {
  R m = abs(z);
  if (m == 0) return {R(0), R(0)};
  // Principal branch via half-angle relations, stable in all quadrants.
  R u = sqrt((m + abs(z.re)) / 2);
  R v = z.im == 0 ? R(0) : abs(z.im) / (2 * u);
  if (z.re >= 0) return {u, z.im < 0 ? -v : v};
  if (z.im >= 0) return {v, u};
  return {v, -u};
}

template <class R> Cx<R> pow_int(Cx<R> base, long long e) {
  Cx<R> acc{R(1), R(0)};
  for (; e > 0; e >>= 1) {
    if (e & 1) acc *= base;
    base *= base;
  }
  return acc;
}

template <class R, class R2> Cx<R2> cx_cast(const Cx<R> &z) {
  if constexpr (std::is_same_v<R, R2>)
    return z;
  else if constexpr (std::is_same_v<R2, double>)
    return {to_double(z.re), to_double(z.im)};
  else
    return {R2(z.re), R2(z.im)};
}

template <class R> Cx<double> to_cx_double(const Cx<R> &z) {
  return {to_double(z.re), to_double(z.im)};
}

} // namespace isingzero
