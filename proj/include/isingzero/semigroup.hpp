#pragma once
// Orbits and certificates for the semigroups H = <f_1,...,f_d> and
// H-hat = <fhat_1,...,fhat_d>, with fhat_d = f_d and fhat_k = f_1 o f_k for
// k < d: escape-word construction, grid-based expansion certificates,
// circle preimages and the freeness degree formulas.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "angles.hpp"
#include "critical_params.hpp"
#include "cx.hpp"
#include "map_core.hpp"
#include "mp.hpp"
#include "poly.hpp"

namespace isingzero {

struct Word {
  std::vector<int> letters; // over {1..d}
  bool hat = false;

  // plain-letter expansion: hat letter k < d becomes f_k then f_1
  std::vector<int> expanded(int d) const {
    if (!hat) return letters;
    std::vector<int> out;
    for (int k : letters) {
      out.push_back(k);
      if (k != d) out.push_back(1);
    }
    return out;
  }
};

struct OrbitStep {
  RiemannPoint<double> z;
  Cx<double> derivative{1.0, 0.0}; // factor contributed by this step
};

// Orbit under the hat generators, with per-step derivative factors for
// chain-rule products. The first entry is the start with derivative 1.
inline std::vector<OrbitStep> hat_orbit(const Word &word,
                                        RiemannPoint<double> start,
                                        const Model<double> &m) {
  std::vector<OrbitStep> out;
  out.push_back({start, {1.0, 0.0}});
  RiemannPoint<double> z = start;
  for (int hk : word.letters) {
    Cx<double> factor{1.0, 0.0};
    std::vector<int> plain;
    if (word.hat) {
      plain.push_back(hk);
      if (hk != m.d) plain.push_back(1);
    } else {
      plain.push_back(hk);
    }
    for (int k : plain) {
      if (z.at_infinity || abs(m.b * z.z + Cx<double>{1, 0}) < 1e-14) {
        // derivative through infinity or the pole -1/b: the chart
        // derivative blows up, record an infinite factor
        factor = {std::numeric_limits<double>::infinity(), 0.0};
      } else {
        factor = factor * map_derivative(m, k, z.z);
      }
      z = map_eval(m, k, z);
    }
    out.push_back({z, factor});
  }
  return out;
}

// Smallest k in {1..d-1} with A_k = ((2m - s)/d) k + t in (1,2) mod 2.
inline int modulolemma_choice(int d, int m, double t, double s) {
  if (d < 2 || m < 1 || m > d - 1 || !(0 < s && s < t && t < 1))
    throw std::invalid_argument("invalid-parameter: modulolemma preconditions");
  for (int k = 1; k <= d - 1; ++k) {
    double a = (2.0 * m - s) / d * k + t;
    double r = a - 2.0 * std::floor(a / 2.0);
    if (r > 1.0 && r < 2.0) return k;
  }
  throw std::runtime_error("lemma-violation: no k with A_k in (1,2)");
}

namespace detail {

inline Cx<double> gamma_point(double b, const Cx<double> &z) {
  return (z + Cx<double>{b, 0}) / (Cx<double>{b, 0} * z + Cx<double>{1, 0});
}

inline Cx<double> apply_hat(const Model<double> &m, int k,
                            const Cx<double> &z) {
  RiemannPoint<double> p = RiemannPoint<double>::finite(z);
  p = map_eval(m, k, p);
  if (k != m.d) p = map_eval(m, 1, p);
  if (p.at_infinity)
    throw std::runtime_error("invalid-parameter: orbit left the sphere chart");
  return p.z;
}

// One hat step restricted to the circle: evaluate and project back onto S^1.
// The maps preserve the circle exactly, but double-precision orbits drift off
// it exponentially (the transverse error grows by |f'| per step), so circle
// constructions must renormalize each step and reason about the pseudo-orbit.
inline Cx<double> apply_hat_circle(const Model<double> &m, int k,
                                   const Cx<double> &z) {
  Cx<double> w = apply_hat(m, k, z);
  double r = abs(w);
  if (r == 0)
    throw std::runtime_error("invalid-parameter: orbit hit the origin");
  return w / r;
}

} // namespace detail

// A hat word of length n whose orbit of z never enters the interior of
// I_lambda; in the restricted variant the orbit additionally stays in the
// closed arc from lambda counterclockwise to 1.
inline Word escape_word(UnitAngle z0, const Model<double> &m, int n,
                        bool restricted = false) {
  double t_angle = wrap_angle(arg(m.lambda));
  double t = t_angle / (TWO_PI / 2); // lambda = e^{i pi t}
  if (!(t > 0 && t < 1))
    throw std::invalid_argument("invalid-parameter: need lambda = e^{i pi t}, 0<t<1");
  IntervalData iv = attracting_interval(m);
  CircleArc restricted_arc{UnitAngle(t_angle), UnitAngle(0.0)};
  auto inside_I = [&](const Cx<double> &p) {
    return iv.arc.interior_margin(UnitAngle::of(p)) < -1e-12;
  };
  auto admissible = [&](const Cx<double> &p) {
    if (inside_I(p)) return false;
    if (restricted && !restricted_arc.contains(UnitAngle::of(p), 1e-12))
      return false;
    return true;
  };
  Cx<double> z = z0.point();
  if (!admissible(z))
    throw std::invalid_argument("invalid-parameter: start violates constraints");
  Word out;
  out.hat = true;
  for (int step = 0; step < n; ++step) {
    int choice = -1;
    // primary rule: f_d if it stays out of I, else the mod-2 lemma letter
    Cx<double> fd = detail::apply_hat_circle(m, m.d, z);
    if (!inside_I(fd)) {
      choice = m.d;
    } else {
      // z lies in J_m (m >= 1): read s from the image angle and m from the
      // continuous position of gamma(z)
      double img_angle = wrap_angle(arg(fd));
      double s = t - img_angle / (TWO_PI / 2);
      if (std::abs(s) < 1e-9 || std::abs(t - s) < 1e-9)
        throw std::runtime_error("boundary-ambiguous: s too close to {0, t}");
      double a = wrap_angle(arg(detail::gamma_point(m.b, z)));
      int mm = (int)std::llround((m.d * a / (TWO_PI / 2) + s) / 2.0);
      mm = ((mm % m.d) + m.d) % m.d;
      if (mm == 0)
        throw std::runtime_error("boundary-ambiguous: preimage arc index 0");
      choice = modulolemma_choice(m.d, mm, t, s);
    }
    Cx<double> next = detail::apply_hat_circle(m, choice, z);
    if (restricted && !admissible(next)) choice = -1;
    if (choice < 0) {
      // restricted fallback: 1-step lookahead over all letters
      for (int k = m.d; k >= 1 && choice < 0; --k)
        if (admissible(detail::apply_hat_circle(m, k, z))) choice = k;
      if (choice < 0)
        throw std::runtime_error("no-admissible-letter: restricted step failed");
      next = detail::apply_hat_circle(m, choice, z);
    }
    if (!admissible(next))
      throw std::runtime_error("no-admissible-letter: post-condition failed");
    out.letters.push_back(choice);
    z = next;
  }
  return out;
}

// The circle pseudo-orbit of a hat word: z0 and its image after each letter,
// renormalized onto S^1 every step (the same stepping escape_word uses, so
// emitted words can be re-verified against the identical pseudo-orbit).
inline std::vector<UnitAngle> circle_hat_orbit(const Word &word, UnitAngle z0,
                                               const Model<double> &m) {
  std::vector<UnitAngle> out;
  Cx<double> z = z0.point();
  out.push_back(z0);
  for (int k : word.letters) {
    if (word.hat) {
      z = detail::apply_hat_circle(m, k, z);
    } else {
      RiemannPoint<double> p = RiemannPoint<double>::finite(z);
      p = map_eval(m, k, p);
      if (p.at_infinity)
        throw std::runtime_error(
            "invalid-parameter: orbit left the sphere chart");
      z = p.z / abs(p.z);
    }
    out.push_back(UnitAngle::of(z));
  }
  return out;
}

struct ExpansionCertificate {
  UnitAngle lambda;
  double kappa = 0;
  int N = 0;
  int grid_resolution = 0;
  double min_derivative = 0;
  double excluded_margin = 0;

  nlohmann::json to_json() const {
    return {{"lambda_angle", lambda.theta},     {"kappa", kappa},
            {"N", N},                           {"grid_resolution", grid_resolution},
            {"min_derivative", min_derivative}, {"excluded_margin", excluded_margin}};
  }
};

namespace detail {

struct ExpansionSearch {
  const Model<double> &m;
  const CircleArc *I; // nullptr when b is at or above threshold (I empty)
  double margin;
  int max_N;
  std::vector<double> min_by_depth; // min |chain product| over alive paths
  std::uint64_t nodes = 0, node_budget;

  bool pruned(const Cx<double> &z) const {
    return I && I->interior_margin(UnitAngle::of(z)) < -margin;
  }

  void dfs(const Cx<double> &z, double prod, int depth) {
    if (depth == max_N) return;
    if (++nodes > node_budget)
      throw std::runtime_error("no-certificate: node budget exhausted");
    for (int k = 1; k <= m.d; ++k) {
      Cx<double> factor{1.0, 0.0};
      RiemannPoint<double> p = RiemannPoint<double>::finite(z);
      factor = factor * map_derivative(m, k, p.z);
      p = map_eval(m, k, p);
      if (k != m.d) {
        if (p.at_infinity) continue;
        factor = factor * map_derivative(m, 1, p.z);
        p = map_eval(m, 1, p);
      }
      if (p.at_infinity || pruned(p.z)) continue;
      double np = prod * abs(factor);
      double &slot = min_by_depth[depth + 1];
      if (np < slot) slot = np;
      dfs(p.z, np, depth + 1);
    }
  }
};

} // namespace detail

// Smallest N <= max_N with |(fhat^N_omega)'(z)| >= kappa over every hat word
// of length N and every grid start whose partial orbit stays outside I
// (orbits dipping into I deeper than the margin are excluded, and that
// margin is part of the certificate). Grid-based, not interval-rigorous.
inline ExpansionCertificate
expansion_certificate(const Model<double> &m, double kappa, int max_N,
                      int grid_resolution, double excluded_margin = 1e-4,
                      std::uint64_t node_budget = 50'000'000) {
  if (!(kappa > 1)) throw std::invalid_argument("invalid-parameter: kappa <= 1");
  ExpansionCertificate cert;
  cert.lambda = UnitAngle(wrap_angle(arg(m.lambda)));
  cert.kappa = kappa;
  cert.grid_resolution = grid_resolution;
  cert.excluded_margin = excluded_margin;

  double thresh = (m.d + 1.0) / (m.d - 1.0);
  if (m.b >= thresh) {
    // I is empty and the circle map f_d is uniformly expanding; the
    // certificate is taken over f_d alone, whose derivative modulus on the
    // circle is the circle speed
    double min_speed = 1e300;
    for (int i = 0; i < grid_resolution; ++i) {
      double th = TWO_PI * i / grid_resolution;
      min_speed = std::min(min_speed, circle_speed(m.d, m.b, th));
    }
    if (min_speed <= 1)
      throw std::runtime_error("no-certificate: f_d not expanding on grid");
    int N = 1;
    double prod = min_speed;
    while (prod < kappa && N < max_N) {
      ++N;
      prod *= min_speed;
    }
    if (prod < kappa)
      throw std::runtime_error("no-certificate: max_N reached");
    cert.N = N;
    cert.min_derivative = prod;
    return cert;
  }

  IntervalData iv = attracting_interval(m);
  CircleArc complement{iv.endpoint_b, iv.endpoint_a}; // S^1 \ I
  detail::ExpansionSearch search{m, &iv.arc, excluded_margin, max_N, {}, 0,
                                 node_budget};
  search.min_by_depth.assign(max_N + 1, 1e300);
  double w = complement.width();
  for (int i = 0; i < grid_resolution; ++i) {
    double th = complement.start.theta + w * (i + 0.5) / grid_resolution;
    UnitAngle u{th};
    if (iv.arc.interior_margin(u) < excluded_margin) continue; // too close
    search.dfs(u.point(), 1.0, 0);
  }
  for (int N = 1; N <= max_N; ++N) {
    if (search.min_by_depth[N] >= kappa) {
      cert.N = N;
      cert.min_derivative = search.min_by_depth[N];
      return cert;
    }
  }
  // report the best depth found
  int best = 1;
  for (int N = 1; N <= max_N; ++N)
    if (search.min_by_depth[N] > search.min_by_depth[best]) best = N;
  cert.N = best;
  cert.min_derivative = search.min_by_depth[best];
  throw std::runtime_error(
      "no-certificate: best N=" + std::to_string(best) +
      " min=" + std::to_string(cert.min_derivative));
}

// The k circle solutions of f_k(z) = target: z = gamma^{-1}(zeta_j w) with
// w a k-th root of target/lambda.
inline std::vector<UnitAngle> circle_preimages(UnitAngle target, int k,
                                               const Model<double> &m) {
  Cx<double> ratio = target.point() / m.lambda;
  double base = arg(ratio);
  std::vector<UnitAngle> out;
  for (int j = 0; j < k; ++j) {
    double ang = (base + TWO_PI * j) / k;
    Cx<double> w = unit_cx(ang);
    Cx<double> z = (w - Cx<double>{m.b, 0}) /
                   (Cx<double>{1, 0} - Cx<double>{m.b, 0} * w);
    out.push_back(UnitAngle::of(z));
  }
  return out;
}

struct WordDegrees {
  BigInt deg_z, deg_lambda, deg_lambda_prime;
};

// Closed-form degrees for a plain-H word (i_1,...,i_k), letters applied
// left-to-right (letters[0] innermost). deg_z = prod i_j; deg_lambda =
// 1 + i_k + i_k i_{k-1} + ... + i_k...i_1; deg_lambda_prime drops the final
// (deepest) term. The convention is frozen by the symbolic regression test:
// deg_lambda_prime is the lambda-degree of the symbolic numerator of
// f_omega(z), and deg_lambda the lambda-degree after the substitution
// z -> lambda (the leaf seed), which always exceeds it by exactly deg_z.
inline WordDegrees word_degrees(const Word &word) {
  if (word.hat) throw std::invalid_argument("invalid-parameter: plain words only");
  if (word.letters.empty())
    throw std::invalid_argument("invalid-parameter: empty word");
  WordDegrees out{1, 1, 1};
  BigInt tail = 1; // i_k * i_{k-1} * ... running from the outermost letter
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    out.deg_z *= *it;
    tail *= *it;
    if (std::next(it) != word.letters.rend()) out.deg_lambda_prime += tail;
    out.deg_lambda += tail;
  }
  return out;
}

// Symbolic composition of a plain word as a rational function in (z, lambda)
// over the rationals: numerator and denominator as polynomials in z whose
// coefficients are polynomials in lambda.
using Bivar = Poly<Poly<Rational>>;

struct SymbolicWord {
  Bivar num, den;
};

inline SymbolicWord compose_word(const Word &word, const Rational &b) {
  if (word.hat) throw std::invalid_argument("invalid-parameter: plain words only");
  Poly<Rational> lam({Rational(0), Rational(1)});
  Poly<Rational> one({Rational(1)});
  Bivar N({Poly<Rational>(), one}); // z
  Bivar D({one});                   // 1
  Poly<Rational> b_poly({b});
  for (int k : word.letters) {
    Bivar u = N + Bivar({b_poly}) * D;   // N + b D
    Bivar v = Bivar({b_poly}) * N + D;   // b N + D
    N = Bivar({lam}) * u.pow((unsigned long long)k);
    D = v.pow((unsigned long long)k);
  }
  return {N, D};
}

// exact rational evaluation of the composition at a point (z, lambda),
// avoiding the symbolic expansion; used for distinctness checks
inline std::pair<Rational, Rational> eval_word(const Word &word,
                                               const Rational &b,
                                               const Rational &z,
                                               const Rational &lambda) {
  Rational num = z, den = 1;
  for (int k : word.letters) {
    Rational u = num + b * den, v = b * num + den;
    Rational un = 1, vn = 1;
    for (int i = 0; i < k; ++i) {
      un *= u;
      vn *= v;
    }
    num = lambda * un;
    den = vn;
  }
  return {num, den}; // den == 0 marks an exact pole at this point
}

} // namespace isingzero
