#pragma once
// Simultaneous root finding (Aberth-Ehrlich) with residual certification and
// automatic precision escalation. Palindromic inputs are first reduced by the
// substitution w = x + 1/x, which halves the degree and makes the root
// symmetry x <-> 1/x structural.

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "cx.hpp"
#include "mp.hpp"
#include "poly.hpp"

namespace isingzero {

struct RootSolveOptions {
  int bits = 53;             // starting precision (ladder rung)
  int max_bits = 1024;       // escalation cap
  double residual_tol = 1e-14; // normalized residual acceptance bound
  int max_sweeps = 400;
  double cluster_tol = 1e-9; // multiplicity merge radius, scaled by max(1,|z|)
  bool allow_palindromic_reduction = true;
};

struct CertifiedRoot {
  Cx<double> z;
  int multiplicity = 1;
  double residual = 0; // normalized: |p(z)| / sum_k |c_k||z|^k
};

struct RootSolveResult {
  std::vector<CertifiedRoot> roots; // clustered; sum of multiplicities = deg
  double max_residual = 0;
  int bits_used = 53;
  bool certified = false;
};

namespace detail {

// One Horner pass returning p(z), p'(z) and the scale sum_k |c_k| |z|^k.
template <class R>
void horner_full(const std::vector<Cx<R>> &c, const Cx<R> &z, Cx<R> &p,
                 Cx<R> &dp, R &scale) {
  p = Cx<R>{R(0), R(0)};
  dp = p;
  scale = R(0);
  R az = abs(z);
  for (size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
    scale = scale * az + abs(c[i]);
  }
}

template <class R> R machine_eps() {
  if constexpr (std::is_same_v<R, double>)
    return 2.22e-16;
  else
    return ldexp(R(1), 1 - precision_bits<R>);
}

// In-place Aberth-Ehrlich sweeps. Returns the largest normalized residual;
// optionally reports the per-root residuals (all evaluated at precision R,
// before any rounding of the roots).
template <class R>
R aberth_iterate(const std::vector<Cx<R>> &coeffs, std::vector<Cx<R>> &z,
                 double residual_tol, int max_sweeps,
                 std::vector<R> *final_res = nullptr) {
  const size_t n = z.size();
  const R tol = R(residual_tol);
  const R eps = machine_eps<R>();
  std::vector<char> frozen(n, 0);
  std::vector<R> res(n, R(1));

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool all_done = true;
    for (size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      Cx<R> p, dp;
      R scale;
      horner_full(coeffs, z[i], p, dp, scale);
      R nres = scale > 0 ? abs(p) / scale : abs(p);
      res[i] = nres;
      if (nres < eps * 8) { // at the precision floor; cannot improve
        frozen[i] = 1;
        continue;
      }
      all_done = false;
      Cx<R> newton;
      if (abs(dp) == 0) {
        // flat spot: nudge deterministically
        newton = Cx<R>{R(1e-3) * (R(1) + abs(z[i])), R(5e-4)};
      } else {
        newton = p / dp;
      }
      Cx<R> repel{R(0), R(0)};
      for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        Cx<R> diff = z[i] - z[j];
        if (abs(diff) == 0)
          diff = Cx<R>{eps * (R(1) + abs(z[i])), R(0)};
        repel += Cx<R>{R(1), R(0)} / diff;
      }
      Cx<R> denom = Cx<R>{R(1), R(0)} - newton * repel;
      Cx<R> step = abs(denom) == 0 ? newton : newton / denom;
      z[i] -= step;
      // position has converged even if the residual floor is unreachable
      // (multiple roots): freeze on step size
      if (abs(step) < eps * 16 * (1 + abs(z[i]))) frozen[i] = 1;
    }
    if (all_done) break;
  }
  R worst(0);
  if (final_res) final_res->assign(n, R(0));
  for (size_t i = 0; i < n; ++i) {
    Cx<R> p, dp;
    R scale;
    horner_full(coeffs, z[i], p, dp, scale);
    R nres = scale > 0 ? abs(p) / scale : abs(p);
    if (final_res) (*final_res)[i] = nres;
    if (nres > worst) worst = nres;
  }
  return worst;
}

// Deterministic starting configuration: points on a circle with an irrational
// angular offset so symmetric polynomials don't stall on symmetric states.
template <class R>
std::vector<Cx<R>> initial_guesses(const std::vector<Cx<R>> &coeffs) {
  size_t n = coeffs.size() - 1;
  R r0(1);
  R a0 = abs(coeffs[0]), an = abs(coeffs[n]);
  if (a0 > 0 && an > 0) {
    double ratio = to_double(log(a0) - log(an)) / (double)n;
    if (ratio < -2) ratio = -2;
    if (ratio > 2) ratio = 2;
    r0 = exp(R(ratio));
  }
  std::vector<Cx<R>> z(n);
  R two_pi = 2 * const_pi<R>();
  for (size_t k = 0; k < n; ++k) {
    R theta = two_pi * R((double)k) / R((double)n) + R(0.377214);
    z[k] = polar_cx(r0 * R(1.0 + 0.004 * (double)(k % 7)), theta);
  }
  return z;
}

} // namespace detail

// Cluster nearby roots into multiplicity groups (deterministic order:
// by argument then modulus of the cluster centroid).
inline std::vector<CertifiedRoot>
cluster_roots(std::vector<Cx<double>> zs, const std::vector<double> &residuals,
              double cluster_tol) {
  size_t n = zs.size();
  std::vector<int> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = (int)i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double scale = std::max(1.0, std::max(abs(zs[i]), abs(zs[j])));
      if (abs(zs[i] - zs[j]) < cluster_tol * scale) {
        int a = find((int)i), b = find((int)j);
        if (a != b) parent[a] = b;
      }
    }
  std::vector<CertifiedRoot> out;
  std::vector<char> seen(n, 0);
  for (size_t i = 0; i < n; ++i) {
    int r = find((int)i);
    if (seen[r]) continue;
    seen[r] = 1;
    Cx<double> centroid{0, 0};
    int count = 0;
    double worst = 0;
    for (size_t j = 0; j < n; ++j)
      if (find((int)j) == r) {
        centroid += zs[j];
        worst = std::max(worst, residuals.empty() ? 0.0 : residuals[j]);
        ++count;
      }
    centroid = centroid / (double)count;
    out.push_back({centroid, count, worst});
  }
  std::sort(out.begin(), out.end(), [](const CertifiedRoot &a,
                                       const CertifiedRoot &b) {
    double aa = arg(a.z), ab = arg(b.z);
    if (aa != ab) return aa < ab;
    return abs(a.z) < abs(b.z);
  });
  return out;
}

namespace detail {

// A few Newton steps at precision R, keeping the best residual seen.
struct PolishPass {
  template <class R>
  std::pair<std::vector<Cx<double>>, std::vector<double>>
  run(const Poly<Rational> &p, const std::vector<Cx<double>> &zs,
      int steps) const {
    std::vector<Cx<R>> coeffs(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i)
      coeffs[i] = Cx<R>{to_real<R>(p.c[i]), R(0)};
    std::vector<Cx<double>> out(zs.size());
    std::vector<double> res(zs.size());
    for (size_t i = 0; i < zs.size(); ++i) {
      Cx<R> z = cx_cast<double, R>(zs[i]);
      Cx<R> best = z;
      R best_res(-1);
      for (int s = 0; s <= steps; ++s) {
        Cx<R> pv, dp;
        R scale;
        horner_full(coeffs, z, pv, dp, scale);
        R nres = scale > 0 ? abs(pv) / scale : abs(pv);
        if (best_res < 0 || nres < best_res) {
          best_res = nres;
          best = z;
        }
        if (s == steps || abs(dp) == 0) break;
        z -= pv / dp;
      }
      out[i] = to_cx_double(best);
      res[i] = to_double(best_res);
    }
    return {out, res};
  }
};

struct SolvePass {
  template <class R>
  std::tuple<std::vector<Cx<double>>, std::vector<double>, double>
  run(const Poly<Rational> &p, const std::vector<Cx<double>> &warm,
      double residual_tol, int max_sweeps) const {
    std::vector<Cx<R>> coeffs(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i)
      coeffs[i] = Cx<R>{to_real<R>(p.c[i]), R(0)};
    std::vector<Cx<R>> z;
    if (!warm.empty()) {
      z.resize(warm.size());
      for (size_t i = 0; i < warm.size(); ++i)
        z[i] = cx_cast<double, R>(warm[i]);
    } else {
      z = initial_guesses(coeffs);
    }
    std::vector<R> res;
    R worst = aberth_iterate(coeffs, z, residual_tol, max_sweeps, &res);
    std::vector<Cx<double>> out(z.size());
    std::vector<double> res_d(z.size());
    for (size_t i = 0; i < z.size(); ++i) {
      out[i] = to_cx_double(z[i]);
      res_d[i] = to_double(res[i]);
    }
    return {out, res_d, to_double(worst)};
  }
};

// How many bits a rational-coefficient polynomial needs just to represent its
// coefficients in floating point without over/underflow.
inline int min_start_bits(const Poly<Rational> &p) {
  for (const auto &c : p.c) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (a != 0 &&
        (a > Rational(BigInt(1) << 900) ||
         a < Rational(1, BigInt(1) << 900)))
      return 128; // mpfr has a huge exponent range; double does not
  }
  return 53;
}

} // namespace detail

// All complex roots of p with multiplicities and certified residuals.
// Escalates precision until every normalized residual is below
// opts.residual_tol, or reports certified=false at opts.max_bits.
inline RootSolveResult solve_poly(const Poly<Rational> &p_in,
                                  RootSolveOptions opts = {}) {
  Poly<Rational> p = p_in;
  if (p.is_zero()) throw std::domain_error("solve_poly: zero polynomial");
  RootSolveResult out;
  if (p.degree() == 0) {
    out.certified = true;
    return out;
  }

  // strip roots at the origin
  int zero_mult = 0;
  while (p.coeff(0) == 0) {
    p.c.erase(p.c.begin());
    ++zero_mult;
  }

  // Palindromic degree-halving: roots come in pairs z, 1/z; odd-degree
  // palindromes carry x = -1. Solve the reduced polynomial in w = x + 1/x,
  // lift each w-root via x^2 - w x + 1 = 0 and polish on the original.
  long long minus_one_mult = 0;
  std::vector<Cx<double>> candidates;
  bool reduced = false;
  if (opts.allow_palindromic_reduction && p.degree() >= 8 &&
      p.is_palindromic()) {
    Poly<Rational> q = p;
    while (q.degree() % 2 != 0) {
      q = divide_out_minus_one_root(q);
      ++minus_one_mult;
      if (!q.is_palindromic()) { // shouldn't happen; fall back
        minus_one_mult = 0;
        q = p;
        break;
      }
    }
    if (q.degree() % 2 == 0 && q.is_palindromic() && q.degree() >= 2) {
      // x = -1 can also appear with even multiplicity; those pairs survive
      // reduction as w-roots at -2 and lift correctly, so no special case.
      Poly<Rational> w_poly = palindromic_reduce(q);
      RootSolveOptions sub = opts;
      sub.allow_palindromic_reduction = false;
      RootSolveResult wr = solve_poly(w_poly, sub);
      for (const auto &root : wr.roots) {
        Cx<double> w = root.z;
        Cx<double> disc = sqrt_cx(w * w - Cx<double>{4.0, 0.0});
        Cx<double> x1 = (w + disc) / Cx<double>{2.0, 0.0};
        // compute the partner as 1/x1 for stability (product of the pair = 1)
        Cx<double> x2 = Cx<double>{1.0, 0.0} / x1;
        for (int m = 0; m < root.multiplicity; ++m) {
          candidates.push_back(x1);
          candidates.push_back(x2);
        }
      }
      out.bits_used = wr.bits_used;
      reduced = true;
    }
  }

  int bits = std::max({opts.bits, detail::min_start_bits(p),
                       reduced ? out.bits_used : 53});
  bits = ladder_round_up(bits);

  // Residuals below are always evaluated at the working precision with the
  // full-precision roots, before rounding them to double for output.
  std::vector<double> residuals;
  double worst = 1;
  if (!reduced) {
    std::vector<Cx<double>> warm;
    while (true) {
      auto [zs, res, w] =
          with_bits(bits, detail::SolvePass{}, p, warm, opts.residual_tol,
                    opts.max_sweeps);
      warm = zs;
      residuals = res;
      worst = w;
      if (worst < opts.residual_tol) break;
      int next = ladder_next(bits);
      if (next == 0 || next > opts.max_bits) break;
      bits = next;
    }
    candidates = warm;
    out.bits_used = bits;
  } else {
    // polish lifted roots on the original polynomial
    while (true) {
      auto [zs, res] =
          with_bits(bits, detail::PolishPass{}, p, candidates, 8);
      worst = 0;
      for (double r : res) worst = std::max(worst, r);
      if (worst < opts.residual_tol) {
        candidates = zs;
        residuals = res;
        break;
      }
      int next = ladder_next(bits);
      if (next == 0 || next > opts.max_bits) {
        candidates = zs;
        residuals = res;
        break;
      }
      bits = next;
    }
    out.bits_used = bits;
  }
  out.certified = worst < opts.residual_tol;

  // A multiple root computed at b bits smears into a cluster of radius about
  // eps_b^(1/m). Pairs closer than that radius but wider than the merge
  // tolerance are ambiguous (multiple root vs. genuine near-pair); escalate
  // until they either collapse under the merge tolerance or separate.
  while (true) {
    double eps = std::ldexp(1.0, 1 - out.bits_used);
    double suspect = std::max(opts.cluster_tol, std::pow(eps, 0.25));
    bool ambiguous = false;
    for (size_t i = 0; i < candidates.size() && !ambiguous; ++i)
      for (size_t j = i + 1; j < candidates.size(); ++j) {
        double scale = std::max(
            1.0, std::max(abs(candidates[i]), abs(candidates[j])));
        double dist = abs(candidates[i] - candidates[j]);
        if (dist < suspect * scale && dist > opts.cluster_tol * scale) {
          ambiguous = true;
          break;
        }
      }
    if (!ambiguous) break;
    int next = ladder_next(out.bits_used);
    if (next == 0 || next > opts.max_bits) break;
    out.bits_used = next;
    auto [zs, res, w] = with_bits(out.bits_used, detail::SolvePass{}, p,
                                  candidates, opts.residual_tol,
                                  opts.max_sweeps);
    candidates = zs;
    residuals = res;
    out.certified = w < opts.residual_tol;
  }

  out.roots = cluster_roots(candidates, residuals, opts.cluster_tol);
  for (long long m = 0; m < minus_one_mult; ++m) {
    // -1 was divided out exactly; merge it into an existing cluster if the
    // reduction also produced copies there.
    bool merged = false;
    for (auto &r : out.roots)
      if (abs(r.z - Cx<double>{-1.0, 0.0}) < opts.cluster_tol) {
        r.multiplicity += 1;
        merged = true;
        break;
      }
    if (!merged) out.roots.push_back({{-1.0, 0.0}, 1, 0.0});
  }
  if (zero_mult > 0) out.roots.push_back({{0.0, 0.0}, zero_mult, 0.0});
  std::sort(out.roots.begin(), out.roots.end(),
            [](const CertifiedRoot &a, const CertifiedRoot &b) {
              double aa = arg(a.z), ab = arg(b.z);
              if (aa != ab) return aa < ab;
              return abs(a.z) < abs(b.z);
            });
  for (const auto &r : out.roots)
    out.max_residual = std::max(out.max_residual, r.residual);
  return out;
}

// Direct Aberth solve for complex-coefficient polynomials (used for small
// dynamical polynomials like fixed-point equations). No escalation; caller
// picks the precision via the template parameter.
template <class R>
std::vector<Cx<R>> solve_complex_poly(std::vector<Cx<R>> coeffs,
                                      double residual_tol = 1e-13,
                                      int max_sweeps = 200) {
  while (!coeffs.empty() && abs(coeffs.back()) == 0) coeffs.pop_back();
  if (coeffs.size() <= 1) return {};
  std::vector<Cx<R>> z = detail::initial_guesses(coeffs);
  detail::aberth_iterate(coeffs, z, residual_tol, max_sweeps);
  return z;
}

} // namespace isingzero
