#pragma once
// Distinguished circle parameters and regime analysis: lambda0 (smallest
// positive angle with f(lambda) = 1), lambda1 (parabolic fixed point),
// lambda2 (edge of the invariant-arc construction), the attracting fixed
// point and its interval I, the invariant arc K's preliminaries, repelling
// parameters, and the circle/Cantor regime classifier.

#include <optional>
#include <stdexcept>
#include <vector>

#include "angles.hpp"
#include "cx.hpp"
#include "map_core.hpp"
#include "mp.hpp"

namespace isingzero {

// (d+1)/(d-1), exactly. The circle map is uniformly expanding for b above
// this threshold; lambda0/lambda1/lambda2 exist for 1 < b < threshold.
inline Rational b_threshold(int d) {
  if (d < 2) throw std::invalid_argument("invalid-parameter: d < 2");
  return Rational(d + 1, d - 1);
}

template <class R> void require_subthreshold(int d, const R &b) {
  if (!(b > 1) || !(b < to_real<R>(b_threshold(d))))
    throw std::domain_error("out-of-range: need 1 < b < (d+1)/(d-1)");
}

// Smallest theta > 0 with e^{i theta} gamma(e^{i theta})^d = 1, via the
// continuous lift h(theta) = theta + d phi(theta): h(0) = 0, h rises to a
// positive maximum, then falls; the first descending zero crossing is
// lambda0. Validated against the defining equation afterwards.
template <class R = R128> R lambda0(int d, const R &b) {
  require_subthreshold(d, b);
  auto h = [&](const R &theta) {
    return theta + R(d) * gamma_angle_lift(b, theta);
  };
  R two_pi = 2 * const_pi<R>();
  // coarse scan at 1e-4 for the first sign change (minimality certificate)
  R step(1e-4);
  R prev_t(0), prev_h(0);
  std::optional<std::pair<R, R>> bracket;
  for (R t = step; t <= two_pi; t += step) {
    R ht = h(t);
    if (ht <= 0) {
      bracket = {prev_t, t};
      break;
    }
    prev_t = t;
    prev_h = ht;
  }
  if (!bracket) throw std::runtime_error("no-solution: lambda0 bracket");
  auto [lo, hi] = *bracket;
  if (lo == 0) lo = R(1e-30); // h(0) = 0 is the trivial solution, not ours
  while (hi - lo > R(1e-13)) {
    R mid = (lo + hi) / 2;
    (h(mid) > 0 ? lo : hi) = mid;
  }
  R theta = (lo + hi) / 2;
  // validation: f_lambda(lambda) = 1
  Model<R> m{d, b, unit_cx(theta)};
  auto img = map_eval(m, d, RiemannPoint<R>::finite(m.lambda));
  if (img.at_infinity ||
      to_double(abs(img.z - Cx<R>{R(1), R(0)})) > 1e-12)
    throw std::runtime_error("no-solution: lambda0 validation failed");
  return theta;
}

// Parabolic parameter: Re z* = (d(b^2-1) - (1+b^2))/(2b) comes from setting
// the circle speed to 1; z* on the upper half circle; lambda1 = z*/gamma(z*)^d.
template <class R = R128> R lambda1(int d, const R &b) {
  R x = (R(d) * (b * b - 1) - (1 + b * b)) / (2 * b);
  if (abs(x) > R(1)) throw std::domain_error("out-of-range: |Re z*| > 1");
  Cx<R> zstar{x, sqrt(1 - x * x)};
  Cx<R> g = (zstar + Cx<R>{b, R(0)}) / (b * zstar + Cx<R>{R(1), R(0)});
  Cx<R> lam = zstar / pow_int(g, d);
  // validation: |lambda1| = 1, f(z*) = z*, |f'(z*)| = 1
  Model<R> m{d, b, lam};
  auto img = map_eval(m, d, RiemannPoint<R>::finite(zstar));
  if (to_double(abs(abs(lam) - R(1))) > 1e-12 || img.at_infinity ||
      to_double(abs(img.z - zstar)) > 1e-12 ||
      to_double(abs(abs(map_derivative(m, d, zstar)) - R(1))) > 1e-12)
    throw std::runtime_error("no-solution: lambda1 validation failed");
  R t = arg(lam);
  if (t < 0) t += 2 * const_pi<R>();
  return t;
}

// The unique attracting fixed point on the circle, for lambda strictly
// inside Arc(conj lambda1, lambda1).
inline UnitAngle attracting_fixed_point(const Model<double> &m) {
  for (auto &fp : fixed_points(m, m.d)) {
    if (std::abs(abs(fp.z) - 1.0) < 1e-9 && abs(fp.multiplier) < 1.0)
      return UnitAngle::of(fp.z);
  }
  throw std::domain_error("wrong-regime: no attracting circle fixed point");
}

struct IntervalData {
  UnitAngle r_fixed;             // R_lambda
  CircleArc arc;                 // I_lambda (closed arc between endpoints)
  UnitAngle endpoint_a;          // ccw start of the arc
  UnitAngle endpoint_b;          // ccw end
  double endpoint_cycle_multiplier = 0; // |f'(z_a) f'(z_b)|
};

namespace detail {

// The immediate basin of R within the circle is found in the lifted line.
// The lift of f^2 is an increasing real map G with G(psi + 2 pi) =
// G(psi) + 2 pi d^2, so every real orbit is monotone and the basin of the
// lifted copy of R is exactly the interval between the adjacent repelling
// lifted fixed points -- points elsewhere on the circle that also reach R
// do so only after winding, which shows up as convergence to a *different*
// lifted copy.
struct LiftedBasin {
  double t, b;
  int d;
  double rho_hat; // the lifted copy of R actually fixed by the lift of f^2

  static LiftedBasin make(const Model<double> &m, double r_theta) {
    LiftedBasin lb;
    lb.t = wrap_angle(arg(m.lambda));
    lb.b = m.b;
    lb.d = m.d;
    double g_rho = lb.g(r_theta);
    long s = llround((g_rho - r_theta) / TWO_PI);
    long denom = (long)lb.d * lb.d - 1;
    if (std::abs((g_rho - r_theta) / TWO_PI - (double)s) > 1e-6 ||
        s % denom != 0)
      throw std::runtime_error("endpoint-not-certified: no lifted copy of R");
    lb.rho_hat = r_theta - TWO_PI * (double)(s / denom);
    return lb;
  }

  double g(double psi) const {
    double once = t + d * gamma_angle_lift(b, psi);
    return t + d * gamma_angle_lift(b, once);
  }

  bool converges(double psi, int max_steps = 500) const {
    for (int i = 0; i < max_steps; ++i) {
      psi = g(psi);
      if (std::abs(psi - rho_hat) < 1e-6) return true;
      if (std::abs(psi - rho_hat) > 1.5 * TWO_PI) return false;
    }
    return false;
  }
};

// Newton on the lifted f^2 fixed-point equation G(psi) = psi + 2 pi s from
// a circle seed; lands on the nearby 2-periodic (or fixed) point. The 1D
// lifted formulation keeps the iteration on the circle and is robust where
// complex-plane Newton on f^2(z) - z occasionally wanders off.
inline Cx<double> polish_period2(const Model<double> &m, double theta) {
  double t = wrap_angle(arg(m.lambda));
  auto lift_once = [&](double psi) { return t + m.d * gamma_angle_lift(m.b, psi); };
  double psi = theta;
  double s = std::round((lift_once(lift_once(psi)) - psi) / TWO_PI);
  for (int i = 0; i < 80; ++i) {
    double mid = lift_once(psi);
    double g = lift_once(mid) - psi - TWO_PI * s;
    double dg = circle_speed(m.d, m.b, mid) * circle_speed(m.d, m.b, psi) - 1;
    if (std::abs(dg) < 1e-12) break;
    double step = g / dg;
    psi -= step;
    if (std::abs(step) < 1e-14 * (1 + std::abs(psi)))
      return unit_cx(wrap_angle(psi));
  }
  throw std::runtime_error("endpoint-not-certified: Newton diverged");
}

} // namespace detail

// I_lambda: endpoints found by outward bisection from R using the
// convergence test, then polished by Newton on f^2(z) = z.
inline IntervalData attracting_interval(const Model<double> &m) {
  UnitAngle r = attracting_fixed_point(m);
  detail::LiftedBasin lb = detail::LiftedBasin::make(m, r.theta);
  // outward geometric bracket from the lifted copy, then bisection
  auto boundary = [&](int dir) {
    double lo = 0, hi = 0.01;
    while (hi < TWO_PI && lb.converges(lb.rho_hat + dir * hi)) {
      lo = hi;
      hi *= 1.6;
    }
    if (hi >= TWO_PI)
      throw std::runtime_error("endpoint-not-certified: no boundary found");
    for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
      double mid = (lo + hi) / 2;
      (lb.converges(lb.rho_hat + dir * mid) ? lo : hi) = mid;
    }
    return r.theta + dir * (lo + hi) / 2;
  };
  double raw_b = boundary(+1); // ccw side
  double raw_a = boundary(-1); // cw side
  Cx<double> za = detail::polish_period2(m, raw_a);
  Cx<double> zb = detail::polish_period2(m, raw_b);
  IntervalData out;
  out.r_fixed = r;
  out.endpoint_a = UnitAngle::of(za);
  out.endpoint_b = UnitAngle::of(zb);
  out.arc = CircleArc{out.endpoint_a, out.endpoint_b};
  // the arc must contain R; otherwise the two sides met the same point
  if (!out.arc.contains(r, 1e-12))
    throw std::runtime_error("endpoint-not-certified: R outside the arc");
  out.endpoint_cycle_multiplier =
      abs(map_derivative(m, m.d, za) * map_derivative(m, m.d, zb));
  return out;
}

enum class Trichotomy { inside, equal, contains };

// Compare Arc(1, lambda) with I_lambda by endpoint angles, within a
// classification band. "inside" = Arc(1,lambda) compactly inside I.
inline Trichotomy trichotomy_classify(const Model<double> &m,
                                      double band = 1e-8) {
  double t = wrap_angle(arg(m.lambda));
  IntervalData iv = attracting_interval(m);
  // lift I's endpoints around 0: alpha <= 0 means 1 lies inside I
  double alpha = iv.endpoint_a.theta;
  if (alpha > TWO_PI / 2) alpha -= TWO_PI; // signed offset of start from 1
  double beta = iv.endpoint_b.theta;       // ccw from 0; compare with t
  bool starts_before = alpha < -band;
  bool starts_after = alpha > band;
  bool ends_after = beta > t + band;
  bool ends_before = beta < t - band;
  if (starts_before && ends_after) return Trichotomy::inside;
  if (starts_after && ends_before) return Trichotomy::contains;
  if (std::abs(alpha) <= band && std::abs(beta - t) <= band)
    return Trichotomy::equal;
  throw std::runtime_error("indeterminate: trichotomy within band");
}

// ---------------------------------------------------------------------------
// arc images under the angle lifts (exact interval dynamics on the circle)

// Lifted image [lo, hi] of the lifted arc [alpha, beta] under f_k with
// lambda = e^{it}; the lift is decreasing, so the image endpoints swap.
inline std::pair<double, double> arc_image_lifted(int k, double b, double t,
                                                  double alpha, double beta) {
  double u1 = t + k * gamma_angle_lift(b, beta);
  double u2 = t + k * gamma_angle_lift(b, alpha);
  return {u1, u2};
}

// hat generator image: f_hat_d = f_d, f_hat_k = f_1 compose f_k for k < d
inline std::pair<double, double> hat_arc_image_lifted(int k, int d, double b,
                                                      double t, double alpha,
                                                      double beta) {
  auto [u1, u2] = arc_image_lifted(k, b, t, alpha, beta);
  if (k == d) return {u1, u2};
  return arc_image_lifted(1, b, t, u1, u2);
}

// Predicate behind lambda2: every f_1 compose f_k (k < d) maps the closure
// of I compactly into the interior of I, with endpoint margin.
inline bool lambda2_predicate(int d, double b, double t,
                              double margin = 1e-10) {
  Model<double> m{d, b, unit_cx(t)};
  IntervalData iv;
  try {
    iv = attracting_interval(m);
  } catch (const std::exception &) {
    // no attracting circle fixed point (or uncertified endpoints) at this
    // angle: the compact-inclusion property certainly fails
    return false;
  }
  double alpha = iv.endpoint_a.theta;
  double beta = alpha + iv.arc.width();
  for (int k = 1; k < d; ++k) {
    auto [lo, hi] = hat_arc_image_lifted(k, d, b, t, alpha, beta);
    if (hi - lo >= TWO_PI) return false; // image wraps the whole circle
    // containment in lifted coordinates: shift [lo, hi] by a multiple of
    // 2 pi so that lo lands in [alpha, alpha + 2 pi)
    double shift = std::floor((lo - alpha) / TWO_PI) * TWO_PI;
    double lo_s = lo - shift, hi_s = hi - shift;
    if (!(lo_s > alpha + margin && hi_s < beta - margin)) return false;
  }
  return true;
}

// The supremum of arg lambda in Arc(lambda0, lambda1) with the compact-
// inclusion predicate; bisection between the certified-true end (lambda0
// side) and the first false sample.
struct Lambda2Result {
  double theta = 0;
  std::vector<std::pair<double, bool>> transcript; // bisection history
  std::vector<double> monotonicity_violations;     // sample angles, if any
};

inline Lambda2Result lambda2(int d, double b) {
  require_subthreshold(d, b);
  double t0 = to_double(lambda0<R128>(d, R128(b)));
  double t1 = to_double(lambda1<R128>(d, R128(b)));
  Lambda2Result out;
  double lo = t0 + 1e-9;
  if (!lambda2_predicate(d, b, lo)) {
    // predicate must hold arbitrarily close to lambda0
    throw std::runtime_error("no-lambda2: predicate fails at lambda0");
  }
  out.transcript.push_back({lo, true});
  double hi = t1;
  if (lambda2_predicate(d, b, hi)) {
    out.theta = t1; // the entire arc qualifies; lambda2 = lambda1
    out.transcript.push_back({hi, true});
    return out;
  }
  out.transcript.push_back({hi, false});
  while (hi - lo > 1e-11) {
    double mid = (lo + hi) / 2;
    bool ok = lambda2_predicate(d, b, mid);
    out.transcript.push_back({mid, ok});
    (ok ? lo : hi) = mid;
  }
  out.theta = lo;
  // sample the certified range; the bisection is only meaningful if the
  // predicate is monotone in t, so violations are reported rather than
  // silently accepted
  for (int i = 1; i < 100; ++i) {
    double t = t0 + 1e-9 + (out.theta - t0 - 2e-9) * i / 100.0;
    if (!lambda2_predicate(d, b, t)) out.monotonicity_violations.push_back(t);
  }
  return out;
}

// Invariant arc K: iterate the hull map J -> smallest closed sub-arc of I
// containing the union of the hat-generator images, from J = closure(I).
inline CircleArc k_arc(const Model<double> &m, double tol = 1e-12) {
  double t = wrap_angle(arg(m.lambda));
  double b = m.b;
  IntervalData iv = attracting_interval(m);
  double alpha = iv.endpoint_a.theta;
  double beta = alpha + iv.arc.width();
  double lo = alpha, hi = beta;
  for (int iter = 0; iter < 10000; ++iter) {
    double new_lo = 0, new_hi = 0;
    bool first = true;
    for (int k = 1; k <= m.d; ++k) {
      auto [u1, u2] = hat_arc_image_lifted(k, m.d, b, t, lo, hi);
      // realign near the current window
      double shift = std::floor((u1 - alpha) / TWO_PI + 0.5) * TWO_PI;
      u1 -= shift;
      u2 -= shift;
      if (first) {
        new_lo = u1;
        new_hi = u2;
        first = false;
      } else {
        new_lo = std::min(new_lo, u1);
        new_hi = std::max(new_hi, u2);
      }
    }
    double move = std::max(std::abs(new_lo - lo), std::abs(new_hi - hi));
    lo = new_lo;
    hi = new_hi;
    if (move < tol) {
      CircleArc K{UnitAngle(lo), UnitAngle(hi)};
      // validations: each hat image inside K, and R(f_1) in K
      for (int k = 1; k <= m.d; ++k) {
        auto [u1, u2] = hat_arc_image_lifted(k, m.d, b, t, lo, hi);
        double shift = std::floor((u1 - lo) / TWO_PI + 0.5) * TWO_PI;
        if (u1 - shift < lo - 1e-9 || u2 - shift > hi + 1e-9)
          throw std::runtime_error("not-converged: K not invariant");
      }
      Model<double> m1{m.d, m.b, m.lambda};
      bool r1_in = false;
      for (auto &fp : fixed_points(m1, 1))
        if (std::abs(abs(fp.z) - 1.0) < 1e-9 && abs(fp.multiplier) < 1 &&
            K.contains(UnitAngle::of(fp.z), 1e-9))
          r1_in = true;
      if (!r1_in)
        throw std::runtime_error("not-converged: R(f_1) outside K");
      return K;
    }
  }
  throw std::runtime_error("not-converged: hull iteration");
}

// All lambda = e^{it} in the arc with f^N(1) = 1 and |(f^N)'(1)| > 1:
// accumulation points of Cayley zeros. Found by sweeping the lifted orbit
// angle of 1 and bracketing crossings of multiples of 2 pi.
inline std::vector<UnitAngle> repelling_parameters(int d, double b, int N,
                                                   const CircleArc &arc) {
  if (N < 2) throw std::invalid_argument("invalid-parameter: N < 2");
  auto orbit_angle = [&](double t, double *deriv) {
    double theta = t, dtheta = 1; // theta_1 = t (f(1) = lambda), d/dt = 1
    for (int j = 1; j < N; ++j) {
      double speed = circle_speed(d, b, theta);
      theta = t + d * gamma_angle_lift(b, theta);
      dtheta = 1 - speed * dtheta;
    }
    if (deriv) *deriv = dtheta;
    return theta;
  };
  double t_lo = arc.start.theta, width = arc.width();
  if (width == 0) width = TWO_PI;
  std::vector<UnitAngle> out;
  double deriv = 1;
  double prev_t = t_lo, prev_v = orbit_angle(prev_t, &deriv);
  const double base_step = 1e-4;
  while (prev_t < t_lo + width) {
    double t = std::min(prev_t + base_step / std::max(1.0, std::abs(deriv)),
                        t_lo + width);
    double v = orbit_angle(t, &deriv);
    double lo_i = std::floor(prev_v / TWO_PI), hi_i = std::floor(v / TWO_PI);
    if (lo_i != hi_i) {
      for (double mm = std::min(lo_i, hi_i) + 1; mm <= std::max(lo_i, hi_i);
           ++mm) {
        double level = TWO_PI * mm;
        double ta = prev_t, tb = t;
        double va = prev_v - level, vb = v - level;
        if (va * vb > 0) continue;
        while (tb - ta > 1e-13) {
          double tm = (ta + tb) / 2;
          double vm = orbit_angle(tm, nullptr) - level;
          if ((va < 0) == (vm < 0)) {
            ta = tm;
            va = vm;
          } else {
            tb = tm;
          }
        }
        double t_root = (ta + tb) / 2;
        // multiplier filter: |(f^N)'(1)| > 1
        double mult = 1, theta = t_root;
        for (int j = 1; j < N; ++j) {
          mult *= circle_speed(d, b, theta);
          theta = t_root + d * gamma_angle_lift(b, theta);
        }
        mult *= circle_speed(d, b, 0.0); // the step from z = 1 itself
        if (mult > 1) out.push_back(UnitAngle(t_root));
      }
    }
    prev_t = t;
    prev_v = v;
    if (t >= t_lo + width) break;
  }
  return out;
}

enum class Regime { circle_julia, cantor_julia };

// Classify by the critical orbit of -1/b: convergence to a circle fixed
// point means the Julia set is a Cantor subset of the circle; convergence to
// a 2-cycle straddling the circle means the Julia set is a circle.
inline Regime regime_classify(const Model<double> &m, int budget = 10000) {
  Cx<double> z{-1.0 / m.b, 0.0};
  RiemannPoint<double> p = RiemannPoint<double>::finite(z);
  Cx<double> prev = z, prev2 = z;
  for (int i = 0; i < budget; ++i) {
    p = map_eval(m, m.d, p);
    if (p.at_infinity) continue;
    if (i > 2) {
      if (abs(p.z - prev) < 1e-11) {
        // fixed point; on the circle?
        if (std::abs(abs(p.z) - 1.0) < 1e-6) return Regime::cantor_julia;
        return Regime::circle_julia;
      }
      if (abs(p.z - prev2) < 1e-11 && abs(p.z - prev) > 1e-6) {
        // 2-cycle: straddling test (one point inside the disk, image outside)
        double r1 = abs(p.z), r2 = abs(prev);
        if ((r1 - 1.0) * (r2 - 1.0) < 0) return Regime::circle_julia;
        if (std::abs(r1 - 1.0) < 1e-6 && std::abs(r2 - 1.0) < 1e-6)
          return Regime::cantor_julia; // 2-cycle on the circle
        return Regime::circle_julia;
      }
    }
    prev2 = prev;
    prev = p.z;
  }
  throw std::runtime_error("indeterminate: critical orbit undecided");
}

// ---------------------------------------------------------------------------
// fast trichotomy sweep (continuation): polish I's endpoints from the
// previous sample instead of re-bisecting, and classify by endpoint angles.

struct TrichotomySweepResult {
  double transition = 0; // angle of the single inside->contains transition
  int transitions_seen = 0;
  double endpoint_multiplier_at_transition = 0;
};

inline TrichotomySweepResult trichotomy_sweep(int d, double b,
                                              double resolution = 1e-4,
                                              double band = 1e-8) {
  double t1 = to_double(lambda1<R128>(d, R128(b)));
  TrichotomySweepResult out;
  // seed from a full interval computation at the first sample
  double t_start = resolution;
  Model<double> m0{d, b, unit_cx(t_start)};
  IntervalData iv = attracting_interval(m0);
  double a_seed = iv.endpoint_a.theta, b_seed = iv.endpoint_b.theta;
  int prev_state = 0; // +1 inside, -1 contains, 0 unknown
  for (double t = t_start; t < t1 - 10 * resolution; t += resolution) {
    Model<double> m{d, b, unit_cx(t)};
    // As t approaches the upper regime boundary the circle fixed point
    // turns neutral and I collapses onto it; once the contraction margin
    // is this thin, neither the basin test nor the endpoint 2-cycle
    // Newton can be certified in double precision, so stop the sweep.
    if (circle_speed(d, b, attracting_fixed_point(m).theta) > 0.99) break;
    Cx<double> za, zb;
    try {
      za = detail::polish_period2(m, a_seed);
      zb = detail::polish_period2(m, b_seed);
    } catch (const std::runtime_error &) {
      iv = attracting_interval(m);
      za = iv.endpoint_a.point();
      zb = iv.endpoint_b.point();
    }
    double alpha = wrap_angle(arg(za));
    double beta = wrap_angle(arg(zb));
    a_seed = alpha;
    b_seed = beta;
    if (alpha > TWO_PI / 2) alpha -= TWO_PI;
    int state;
    if (alpha < -band && beta > t + band)
      state = +1;
    else if (alpha > band && beta < t - band)
      state = -1;
    else
      state = prev_state; // inside the band: carry the previous side
    if (prev_state == +1 && state == -1) {
      ++out.transitions_seen;
      out.transition = t;
      out.endpoint_multiplier_at_transition =
          abs(map_derivative(m, d, za) * map_derivative(m, d, zb));
    } else if (prev_state == -1 && state == +1) {
      ++out.transitions_seen; // a reverse transition would violate the theory
    }
    prev_state = state;
  }
  return out;
}

struct CriticalSet {
  double lambda0_angle = 0;
  double lambda1_angle = 0;
  double lambda2_angle = 0;
  Rational threshold;
  const char *regime_name = "sub-threshold";
};

inline CriticalSet critical_set(int d, const Rational &b) {
  CriticalSet out;
  out.threshold = b_threshold(d);
  if (b < out.threshold)
    out.regime_name = "sub-threshold";
  else if (b == out.threshold)
    out.regime_name = "at-threshold";
  else
    out.regime_name = "super-threshold";
  if (b > 1 && b < out.threshold) {
    R128 br = to_real<R128>(b);
    out.lambda0_angle = to_double(lambda0<R128>(d, br));
    out.lambda1_angle = to_double(lambda1<R128>(d, br));
    out.lambda2_angle = lambda2(d, b.convert_to<double>()).theta;
  }
  return out;
}

} // namespace isingzero
