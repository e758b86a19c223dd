#pragma once
// Precision ladder: plain double plus a stack of MPFR-backed reals, with a
// dispatcher that runs a callable at a requested bit width.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace isingzero {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

namespace bm = boost::multiprecision;

// digits10 chosen so the mantissa is at least the advertised bit count.
using R128 = bm::number<bm::mpfr_float_backend<39>, bm::et_off>;
using R192 = bm::number<bm::mpfr_float_backend<58>, bm::et_off>;
using R256 = bm::number<bm::mpfr_float_backend<78>, bm::et_off>;
using R512 = bm::number<bm::mpfr_float_backend<155>, bm::et_off>;
using R1024 = bm::number<bm::mpfr_float_backend<309>, bm::et_off>;

template <class R> struct precision_traits;
template <> struct precision_traits<double> {
  static constexpr int bits = 53;
};
template <> struct precision_traits<R128> {
  static constexpr int bits = 128;
};
template <> struct precision_traits<R192> {
  static constexpr int bits = 192;
};
template <> struct precision_traits<R256> {
  static constexpr int bits = 256;
};
template <> struct precision_traits<R512> {
  static constexpr int bits = 512;
};
template <> struct precision_traits<R1024> {
  static constexpr int bits = 1024;
};

template <class R> constexpr int precision_bits = precision_traits<R>::bits;

// Smallest ladder rung with at least `bits` of mantissa, as passed to
// with_bits(). 0 means "no such rung".
inline int ladder_round_up(int bits) {
  for (int b : {53, 128, 192, 256, 512, 1024})
    if (bits <= b) return b;
  return 0;
}

inline int ladder_next(int bits) {
  if (bits < 128) return 128;
  if (bits < 192) return 192;
  if (bits < 256) return 256;
  if (bits < 512) return 512;
  if (bits < 1024) return 1024;
  return 0;
}

// Invoke fn.template run<R>(args...) with R chosen by bit width.
template <class Fn, class... Args>
decltype(auto) with_bits(int bits, Fn &&fn, Args &&...args) {
  switch (ladder_round_up(bits)) {
  case 53:
    return fn.template run<double>(std::forward<Args>(args)...);
  case 128:
    return fn.template run<R128>(std::forward<Args>(args)...);
  case 192:
    return fn.template run<R192>(std::forward<Args>(args)...);
  case 256:
    return fn.template run<R256>(std::forward<Args>(args)...);
  case 512:
    return fn.template run<R512>(std::forward<Args>(args)...);
  case 1024:
    return fn.template run<R1024>(std::forward<Args>(args)...);
  default:
    throw std::invalid_argument("precision ladder has no rung for " +
                                std::to_string(bits) + " bits");
  }
}

template <class R> R to_real(const Rational &q) {
  if constexpr (std::is_same_v<R, double>)
    return q.template convert_to<double>();
  else
    return R(q);
}

template <class R> R to_real(const BigInt &n) {
  if constexpr (std::is_same_v<R, double>)
    return n.template convert_to<double>();
  else
    return R(n);
}

template <class R> double to_double(const R &x) {
  if constexpr (std::is_same_v<R, double>)
    return x;
  else
    return x.template convert_to<double>();
}

template <class R> R const_pi() {
  if constexpr (std::is_same_v<R, double>)
    return 3.14159265358979323846264338327950288;
  else {
    static const R pi = 4 * atan(R(1));
    return pi;
  }
}

// Parse "p/q" or "p". Throws on garbage or q == 0.
inline Rational parse_rational(const std::string &text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt p(text.substr(0, slash));
    BigInt q(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  } catch (const std::exception &) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

inline std::string rational_text(const Rational &q) {
  return q.str();
}

} // namespace isingzero
