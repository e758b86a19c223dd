#pragma once
// The Moebius transformation gamma(z) = (z+b)/(bz+1) and the circle maps
// f_{lambda,k}(z) = lambda * gamma(z)^k on the Riemann sphere: evaluation,
// derivatives, circle speed, angle lifts, fixed points, 2-cycles, and the
// (X, Y) conjugacy invariants.

#include <stdexcept>
#include <vector>

#include "angles.hpp"
#include "cx.hpp"
#include "mp.hpp"
#include "poly.hpp"
#include "roots.hpp"

namespace isingzero {

// Parameters (d, b, lambda) of the map family. b > 0, b != 1; the
// anti-ferromagnetic regime is b > 1 and is required by most dynamics.
template <class R> struct Model {
  int d = 2;
  R b{};
  Cx<R> lambda{};

  bool antiferromagnetic() const { return b > 1; }
  void validate() const {
    if (d < 2) throw std::invalid_argument("invalid-parameter: d < 2");
    if (!(b > 0) || b == 1)
      throw std::invalid_argument("invalid-parameter: b must be > 0, != 1");
  }
};

// Exact-parameter carrier used by the atlas/CLI layers; b stays rational so
// polynomial coefficients are exact.
struct ModelSpec {
  int d = 2;
  Rational b = 2;
  Cx<double> lambda{1.0, 0.0};

  template <class R> Model<R> numeric() const {
    return Model<R>{d, to_real<R>(b), cx_cast<double, R>(lambda)};
  }
};

// A point on the Riemann sphere: finite value or tagged infinity.
template <class R> struct RiemannPoint {
  bool at_infinity = false;
  Cx<R> z{};

  static RiemannPoint infinity() { return {true, {}}; }
  static RiemannPoint finite(Cx<R> v) { return {false, std::move(v)}; }

  friend bool operator==(const RiemannPoint &a, const RiemannPoint &b) {
    if (a.at_infinity || b.at_infinity) return a.at_infinity == b.at_infinity;
    return a.z == b.z;
  }
};

// gamma(z) = (z+b)/(bz+1); total on the sphere: gamma(inf) = 1/b,
// gamma(-1/b) = inf.
template <class R>
RiemannPoint<R> moebius_eval(const RiemannPoint<R> &p, const R &b) {
  using P = RiemannPoint<R>;
  if (p.at_infinity) return P::finite({R(1) / b, R(0)});
  Cx<R> den = b * p.z + Cx<R>{R(1), R(0)};
  if (abs(den) == 0) return P::infinity();
  return P::finite((p.z + Cx<R>{b, R(0)}) / den);
}

// gamma^{-1}(w) = (w-b)/(1-bw); gamma^{-1}(inf) = -1/b, gamma^{-1}(1/b) = inf.
template <class R>
RiemannPoint<R> moebius_inverse(const RiemannPoint<R> &p, const R &b) {
  using P = RiemannPoint<R>;
  if (p.at_infinity) return P::finite({R(-1) / b, R(0)});
  Cx<R> den = Cx<R>{R(1), R(0)} - b * p.z;
  if (abs(den) == 0) return P::infinity();
  return P::finite((p.z - Cx<R>{b, R(0)}) / den);
}

// f_{lambda,k}(z) = lambda * gamma(z)^k
template <class R>
RiemannPoint<R> map_eval(const Model<R> &m, int k, const RiemannPoint<R> &p) {
  using P = RiemannPoint<R>;
  RiemannPoint<R> g = moebius_eval(p, m.b);
  if (g.at_infinity) return P::infinity();
  return P::finite(m.lambda * pow_int(g.z, k));
}

// f'(z) = lambda * k * gamma(z)^{k-1} * (1-b^2)/(bz+1)^2
template <class R>
Cx<R> map_derivative(const Model<R> &m, int k, const Cx<R> &z) {
  Cx<R> den = m.b * z + Cx<R>{R(1), R(0)};
  if (abs(den) == 0)
    throw std::domain_error("critical-pole: derivative pole at z = -1/b");
  Cx<R> g = (z + Cx<R>{m.b, R(0)}) / den;
  return m.lambda * R(k) * pow_int(g, k - 1) *
         Cx<R>{(R(1) - m.b * m.b), R(0)} / (den * den);
}

// |f'(e^{i theta})| = k (b^2 - 1) / (1 + b^2 + 2 b cos theta) for |lambda|=1.
template <class R> R circle_speed(int k, const R &b, const R &theta) {
  return R(k) * (b * b - 1) / (1 + b * b + 2 * b * cos(theta));
}

// Decreasing lift of arg gamma(e^{i theta}) with phi(0) = 0; on [0, 2pi] it
// falls from 0 to -2pi (gamma reverses orientation on the circle). Extended
// to all real theta by phi(theta + 2pi) = phi(theta) - 2pi.
template <class R> R gamma_angle_lift(const R &b, const R &theta) {
  R two_pi = 2 * const_pi<R>();
  R turns = floor(theta / two_pi);
  R t0 = theta - turns * two_pi;
  Cx<R> g = (unit_cx(t0) + Cx<R>{b, R(0)}) /
            (b * unit_cx(t0) + Cx<R>{R(1), R(0)});
  R a = arg(g);
  if (a > 0 || t0 > const_pi<R>()) a -= two_pi;
  return a - turns * two_pi;
}

// Lifted angle of f_{lambda,k}(e^{i theta}) when lambda = e^{it}:
// t + k * gamma_angle_lift(theta). Degree -k in theta.
template <class R>
R map_angle_lift(int k, const R &b, const R &t, const R &theta) {
  return t + R(k) * gamma_angle_lift(b, theta);
}

// Coefficients (ascending in z) of lambda (z+b)^k - z (bz+1)^k, whose roots
// are the finite fixed points of f_{lambda,k}. Degree k+1.
template <class R>
std::vector<Cx<R>> fixed_point_polynomial(const Model<R> &m, int k) {
  std::vector<Cx<R>> c(k + 2, Cx<R>{R(0), R(0)});
  // binomial row
  std::vector<R> binom(k + 1);
  binom[0] = R(1);
  for (int i = 1; i <= k; ++i)
    binom[i] = binom[i - 1] * R(k - i + 1) / R(i);
  for (int i = 0; i <= k; ++i) {
    // lambda * C(k,i) b^{k-i} z^i
    c[i] += m.lambda * (binom[i] * pow(m.b, R(k - i)));
    // - z * C(k,i) b^i z^i
    c[i + 1] -= Cx<R>{binom[i] * pow(m.b, R(i)), R(0)};
  }
  return c;
}

template <class R> struct FixedPoint {
  Cx<R> z;
  Cx<R> multiplier;
};

// All k+1 finite fixed points of f_{lambda,k} with their multipliers.
template <class R>
std::vector<FixedPoint<R>> fixed_points(const Model<R> &m, int k,
                                        double residual_tol = 1e-12) {
  auto coeffs = fixed_point_polynomial(m, k);
  auto zs = solve_complex_poly(coeffs, residual_tol * 1e-2);
  std::vector<FixedPoint<R>> out;
  for (auto &z : zs) {
    // certify |f(z) - z| in a residual-normalized sense
    Cx<R> p{R(0), R(0)};
    R scale(0), az = abs(z);
    for (size_t i = coeffs.size(); i-- > 0;) {
      p = p * z + coeffs[i];
      scale = scale * az + abs(coeffs[i]);
    }
    if (scale > 0 && to_double(abs(p) / scale) > residual_tol)
      throw std::runtime_error("precision-exhausted: fixed-point residual");
    out.push_back({z, map_derivative(m, k, z)});
  }
  std::sort(out.begin(), out.end(),
            [](const FixedPoint<R> &a, const FixedPoint<R> &b) {
              R aa = arg(a.z), ab = arg(b.z);
              if (aa != ab) return aa < ab;
              return abs(a.z) < abs(b.z);
            });
  return out;
}

template <class R> struct TwoCycle {
  Cx<R> z, w;       // w = f(z)
  Cx<R> multiplier; // f'(z) * f'(w)
};

// All period-exactly-2 cycles of f_{lambda,k}: roots of the degree-(k^2-k)
// quotient of (f^2(z) - z) by the fixed-point polynomial, paired into cycles.
template <class R>
std::vector<TwoCycle<R>> two_cycles(const Model<R> &m, int k,
                                    double residual_tol = 1e-11) {
  using PC = Poly<Cx<R>>;
  Cx<R> one{R(1), R(0)}, bc{m.b, R(0)};
  PC N(std::vector<Cx<R>>{bc, one});        // z + b
  PC D(std::vector<Cx<R>>{one, bc});        // bz + 1
  PC A = PC::constant(m.lambda) * N.pow(k); // f = A / B
  PC B = D.pow(k);
  PC P2 = PC::constant(m.lambda) * (A + PC::constant(bc) * B).pow(k);
  PC Q2 = (PC::constant(bc) * A + B).pow(k);
  PC full = P2 - PC(std::vector<Cx<R>>{Cx<R>{R(0), R(0)}, one}) * Q2;
  PC fixed(fixed_point_polynomial(m, k));
  auto [quot, rem] = divmod(full, fixed);
  // the fixed-point polynomial divides exactly; rem is numerical noise
  auto zs = solve_complex_poly(quot.c, residual_tol * 1e-2);
  std::vector<char> used(zs.size(), 0);
  std::vector<TwoCycle<R>> out;
  for (size_t i = 0; i < zs.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    RiemannPoint<R> fz = map_eval(m, k, RiemannPoint<R>::finite(zs[i]));
    if (fz.at_infinity)
      throw std::runtime_error("precision-exhausted: cycle through infinity");
    size_t best = i;
    R best_dist(-1);
    for (size_t j = 0; j < zs.size(); ++j) {
      if (used[j]) continue;
      R dd = abs(zs[j] - fz.z);
      if (best_dist < 0 || dd < best_dist) {
        best_dist = dd;
        best = j;
      }
    }
    used[best] = 1;
    Cx<R> mult = map_derivative(m, k, zs[i]) * map_derivative(m, k, fz.z);
    out.push_back({zs[i], fz.z, mult});
  }
  return out;
}

// Conjugacy invariants X = b^2/(1-b^2), Y = (lambda + 1/lambda)
// b^{d-1}/(1-b^2)^d. Real exactly when |lambda| = 1.
template <class R>
std::pair<Cx<R>, Cx<R>> milnor_invariants(const Model<R> &m) {
  if (abs(m.lambda) == 0)
    throw std::domain_error("invalid-parameter: lambda = 0");
  R one_mb2 = 1 - m.b * m.b;
  Cx<R> X{m.b * m.b / one_mb2, R(0)};
  Cx<R> inv_lambda = Cx<R>{R(1), R(0)} / m.lambda;
  Cx<R> Y = (m.lambda + inv_lambda) *
            (pow(m.b, R(m.d - 1)) / pow(one_mb2, R(m.d)));
  return {X, Y};
}

} // namespace isingzero
