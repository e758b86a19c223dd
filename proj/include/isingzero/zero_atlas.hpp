#pragma once
// The zero atlas: locate, refine, verify, store, and measure partition-
// function zero sets for Cayley and spherically symmetric trees.
//
// Two independent routes feed the atlas:
//   1. exact polynomial roots (primary, full plane), budgeted by degree;
//   2. an on-circle sweep of the lifted orbit angle, which finds the circle
//      zeros of arbitrarily deep words cheaply.
// Every record is re-verified against the dynamical characterization: lambda
// is a zero iff the orbit of lambda hits -1 within the word length.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "map_core.hpp"
#include "mp.hpp"
#include "parallel.hpp"
#include "poly.hpp"
#include "roots.hpp"
#include "tree_partition.hpp"

namespace isingzero {

enum class TreeClass { cayley, spherical };

inline const char *tree_class_name(TreeClass c) {
  return c == TreeClass::cayley ? "cayley" : "spherical";
}

struct ZeroRecord {
  Cx<double> lambda;
  TreeClass tree_class = TreeClass::cayley;
  std::vector<int> word;
  int depth = 0;
  double residual = 0;
  bool on_circle = false;
  int multiplicity = 1;
};

struct ZeroSet {
  int d = 2;
  Rational b = 2;
  TreeClass tree_class = TreeClass::cayley;
  int max_depth = 0;
  int precision_bits = 128;
  std::vector<ZeroRecord> records;
};

inline constexpr double CIRCLE_TOL = 1e-9;  // ||lambda| - 1| band
inline constexpr double MERGE_TOL = 1e-9;   // dedup radius, scaled

// ---------------------------------------------------------------------------
// polynomial route

// All roots with certified residuals; "precision-exhausted" if certification
// fails at the escalation cap.
inline std::vector<CertifiedRoot> poly_roots(const Poly<Rational> &poly,
                                             int precision_bits = 128) {
  if (poly.degree() < 1)
    throw std::invalid_argument("invalid-parameter: degree < 1");
  RootSolveOptions opts;
  opts.bits = precision_bits;
  auto res = solve_poly(poly, opts);
  if (!res.certified)
    throw std::runtime_error("precision-exhausted: residual " +
                             std::to_string(res.max_residual));
  return res.roots;
}

// ---------------------------------------------------------------------------
// dynamical route

struct VerifyReport {
  double residual = 0; // min over m <= n of |f^m(lambda) + 1|
  int argmin_m = 0;
};

// min over 0 <= m <= n of |f^m_word(lambda) + 1|, where the word is applied
// bottom-up (letters[0] first) and f^0(lambda) = lambda.
template <class R>
VerifyReport verify_zero(const Cx<R> &lambda, const std::vector<int> &word,
                         int d, const R &b) {
  Model<R> m{d, b, lambda};
  RiemannPoint<R> z = RiemannPoint<R>::finite(lambda);
  VerifyReport best{to_double(abs(lambda + Cx<R>{R(1), R(0)})), 0};
  for (size_t j = 0; j < word.size(); ++j) {
    z = map_eval(m, word[j], z);
    if (z.at_infinity) continue;
    double r = to_double(abs(z.z + Cx<R>{R(1), R(0)}));
    if (r < best.residual) best = {r, (int)j + 1};
  }
  return best;
}

// Newton refinement of F(lambda) = f^n_word(lambda) + 1 using the orbit
// derivative recurrence dz_{j+1} = gamma(z_j)^k + lambda k gamma(z_j)^{k-1}
// gamma'(z_j) dz_j, z_0 = lambda, dz_0 = 1.
template <class R>
Cx<R> refine_zero(Cx<R> lambda, const std::vector<int> &word, int d,
                  const R &b, double target_residual = 1e-14) {
  for (int step = 0; step < 64; ++step) {
    Cx<R> z = lambda, dz{R(1), R(0)};
    for (int k : word) {
      Cx<R> den = b * z + Cx<R>{R(1), R(0)};
      if (abs(den) == 0)
        throw std::runtime_error("singular-newton: orbit hit the pole");
      Cx<R> g = (z + Cx<R>{b, R(0)}) / den;
      Cx<R> gprime = Cx<R>{(R(1) - b * b), R(0)} / (den * den);
      Cx<R> gk1 = pow_int(g, k - 1);
      dz = gk1 * g + lambda * R(k) * gk1 * gprime * dz;
      z = lambda * gk1 * g;
    }
    Cx<R> F = z + Cx<R>{R(1), R(0)};
    if (to_double(abs(F)) < target_residual) return lambda;
    if (to_double(abs(dz)) < 1e-300)
      throw std::runtime_error("singular-newton: derivative underflow");
    lambda -= F / dz;
    if (to_double(abs(lambda)) > 1e6)
      throw std::runtime_error("no-convergence: iterate escaped");
  }
  // check the final position before giving up
  Cx<R> z = lambda;
  Model<R> m{d, b, lambda};
  RiemannPoint<R> p = RiemannPoint<R>::finite(z);
  for (int k : word) p = map_eval(m, k, p);
  if (!p.at_infinity &&
      to_double(abs(p.z + Cx<R>{R(1), R(0)})) < target_residual)
    return lambda;
  throw std::runtime_error("no-convergence: 64 Newton steps exhausted");
}

// ---------------------------------------------------------------------------
// on-circle sweep route

// On-circle zeros of a word: parameters t with lifted orbit angle == pi
// (mod 2pi). The lifted angle theta_n(t) is continuous in t; the sweep steps
// adaptively using d theta_n / d t and brackets every crossing of an odd
// multiple of pi, then bisects to high accuracy.
inline std::vector<double> circle_zero_sweep(const std::vector<int> &word,
                                             int d, const Rational &b_rat,
                                             double theta_lo = 0,
                                             double theta_hi = TWO_PI,
                                             double angle_tol = 1e-13) {
  (void)d;
  double b = b_rat.convert_to<double>();
  auto lifted = [&](double t, double *deriv) {
    double theta = t, dtheta = 1;
    for (int k : word) {
      double speed = circle_speed(k, b, theta);
      double next = t + k * gamma_angle_lift(b, theta);
      dtheta = 1 - speed * dtheta;
      theta = next;
    }
    if (deriv) *deriv = dtheta;
    return theta;
  };
  auto crossing_index = [](double v) {
    // index m of the largest odd multiple pi + 2 pi m <= v
    return std::floor((v - 3.14159265358979323846) / TWO_PI);
  };
  std::vector<double> zeros;
  const double base_step = 1e-3;
  double t = theta_lo;
  double deriv = 1, prev_v = lifted(t, &deriv), prev_t = t;
  while (t < theta_hi) {
    double step = base_step / std::max(1.0, std::abs(deriv));
    t = std::min(prev_t + step, theta_hi);
    double v = lifted(t, &deriv);
    double lo_i = crossing_index(prev_v), hi_i = crossing_index(v);
    if (lo_i != hi_i) {
      // one or more odd-pi levels crossed in (prev_t, t): bisect each
      double a = std::min(lo_i, hi_i) + 1, bmax = std::max(lo_i, hi_i);
      for (double m = a; m <= bmax; ++m) {
        double level = 3.14159265358979323846 + TWO_PI * m;
        double ta = prev_t, tb = t, va = prev_v - level, vb = v - level;
        if (va == 0) {
          zeros.push_back(ta);
          continue;
        }
        if (va * vb > 0) continue;
        while (tb - ta > angle_tol) {
          double tm = (ta + tb) / 2;
          double vm = lifted(tm, nullptr) - level;
          if ((va < 0) == (vm < 0)) {
            ta = tm;
            va = vm;
          } else {
            tb = tm;
          }
        }
        zeros.push_back((ta + tb) / 2);
      }
    }
    prev_t = t;
    prev_v = v;
    if (t >= theta_hi) break;
  }
  return zeros;
}

// ---------------------------------------------------------------------------
// assembly

// merge tolerance comparison key: sort by (arg, |.|)
inline bool record_order(const ZeroRecord &a, const ZeroRecord &b) {
  double aa = arg(a.lambda), ab = arg(b.lambda);
  if (aa != ab) return aa < ab;
  return abs(a.lambda) < abs(b.lambda);
}

inline void dedup_records(std::vector<ZeroRecord> &records) {
  std::sort(records.begin(), records.end(), record_order);
  std::vector<ZeroRecord> out;
  for (auto &r : records) {
    bool merged = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      double scale = std::max(1.0, std::max(abs(it->lambda), abs(r.lambda)));
      if (abs(it->lambda - r.lambda) < MERGE_TOL * scale) {
        // identical zero reached through another word: keep the earlier
        // (shortest-word) record, remembering the best residual
        it->residual = std::min(it->residual, r.residual);
        merged = true;
        break;
      }
      if (arg(r.lambda) - arg(it->lambda) > 1e-6) break;
    }
    if (!merged) out.push_back(r);
  }
  records = std::move(out);
}

struct EnumerateOptions {
  int precision_bits = 128;
  // words with more vertices than this use the circle sweep instead of full
  // polynomial solving (their off-circle zeros are skipped)
  long long poly_vertex_budget = 400;
  long long total_vertex_budget = 4'000'000;
  // restrict to on-circle zeros and use the sweep for every word (fast path
  // for density measurements on arcs of the circle); the sweep range can be
  // narrowed to the arc of interest
  bool circle_only = false;
  double sweep_theta_lo = 0;
  double sweep_theta_hi = TWO_PI;
  std::string cache_dir; // empty = no caching
  std::function<void(const std::string &)> progress; // optional
};

namespace detail {

inline void append_word_zeros(ZeroSet &set, const std::vector<int> &word,
                              PartitionCache &cache,
                              const EnumerateOptions &opts) {
  TreeSpec spec{word, set.d};
  long long vc = vertex_count(spec);
  R128 b = to_real<R128>(set.b);
  if (!opts.circle_only && vc <= opts.poly_vertex_budget) {
    auto pair = cache.get(spec, set.b);
    Poly<Rational> z = pair->z_in + pair->z_out;
    // Solve, then certify every root dynamically (the orbit must reach -1).
    // Roots clustering near -1 reach the Aberth residual floor while their
    // positions are still off, which the residual-based escalation inside
    // the solver cannot see, so escalate here on verification failure.
    std::vector<ZeroRecord> batch;
    bool ok = false;
    for (int bits = opts.precision_bits; bits <= 1024; bits *= 2) {
      batch.clear();
      ok = true;
      auto roots = poly_roots(z, bits);
      R512 b512 = to_real<R512>(set.b);
      for (const auto &root : roots) {
        ZeroRecord rec;
        rec.lambda = root.z;
        rec.tree_class = set.tree_class;
        rec.word = word;
        rec.depth = (int)word.size();
        rec.on_circle = std::abs(abs(root.z) - 1.0) < CIRCLE_TOL;
        rec.multiplicity = root.multiplicity;
        rec.residual = std::max(root.residual, 0.0);
        auto lam = cx_cast<double, R128>(root.z);
        double dyn = verify_zero(lam, word, set.d, b).residual;
        if (dyn > 1e-6) {
          // Newton absorbs the orbit's error amplification before judging,
          // at 512 bits in case the orbit passes near the pole -1/b; accept
          // only if it stays nearby, certifying the stored position lies
          // within 1e-4 of a genuine zero (a start displaced further could
          // slide to a distant root and mask a bad position)
          try {
            auto start = cx_cast<double, R512>(root.z);
            auto lam512 = refine_zero(start, word, set.d, b512, 1e-13);
            if (to_double(abs(lam512 - start)) < 1e-4)
              dyn = verify_zero(lam512, word, set.d, b512).residual;
          } catch (const std::runtime_error &) {
            // multiplicity > 1 can stall Newton; judged on dyn below
          }
        }
        if (dyn > 1e-6) {
          ok = false;
          break;
        }
        batch.push_back(std::move(rec));
      }
      if (ok) break;
    }
    if (!ok)
      throw std::runtime_error(
          "precision-exhausted: dynamical verification failed");
    for (auto &rec : batch) set.records.push_back(std::move(rec));
  } else {
    auto angles = circle_zero_sweep(word, set.d, set.b, opts.sweep_theta_lo,
                                    opts.sweep_theta_hi);
    for (double t : angles) {
      Cx<R128> lam = unit_cx(R128(t));
      try {
        lam = refine_zero(lam, word, set.d, b, 1e-20);
      } catch (const std::runtime_error &) {
        // keep the sweep value; verification below decides
      }
      // project the refined zero back onto the circle (it must be there)
      R128 mod = abs(lam);
      if (to_double(mod) == 0) continue;
      lam = lam / Cx<R128>{mod, R128(0)};
      auto rep = verify_zero(lam, word, set.d, b);
      if (rep.residual > 1e-8) continue; // sweep artifact; drop
      ZeroRecord rec;
      rec.lambda = to_cx_double(lam);
      rec.tree_class = set.tree_class;
      rec.word = word;
      rec.depth = (int)word.size();
      rec.on_circle = true;
      rec.multiplicity = 1;
      rec.residual = rep.residual;
      set.records.push_back(std::move(rec));
      // enforce conjugation symmetry structurally
      ZeroRecord conj_rec = rec;
      conj_rec.lambda = conj(rec.lambda);
      set.records.push_back(std::move(conj_rec));
    }
  }
}

} // namespace detail

// cache filename key (d, b, class, depth, precision)
inline std::string zero_cache_name(int d, const Rational &b, TreeClass cls,
                                   int depth, int bits) {
  std::string bs = b.str();
  for (auto &ch : bs)
    if (ch == '/') ch = '_';
  return "zeros_d" + std::to_string(d) + "_b" + bs + "_" +
         tree_class_name(cls) + "_depth" + std::to_string(depth) + "_bits" +
         std::to_string(bits) + ".jsonl";
}

// Enumerate all zeros: for cayley, the constant-d words of length 0..max_depth;
// for spherical, every word over {1..d} of length 0..max_depth.
inline ZeroSet enumerate_zero_set(int d, const Rational &b, int max_depth,
                                  TreeClass tree_class,
                                  EnumerateOptions opts = {}) {
  ZeroSet set;
  set.d = d;
  set.b = b;
  set.tree_class = tree_class;
  set.max_depth = max_depth;
  set.precision_bits = opts.precision_bits;

  std::vector<std::vector<int>> words;
  if (tree_class == TreeClass::cayley) {
    for (int n = 0; n <= max_depth; ++n)
      words.push_back(std::vector<int>(n, d));
  } else {
    // lexicographic, shortest first
    words.push_back({});
    std::vector<std::vector<int>> level = {{}};
    for (int n = 1; n <= max_depth; ++n) {
      std::vector<std::vector<int>> next;
      for (auto &w : level)
        for (int k = 1; k <= d; ++k) {
          auto ext = w;
          ext.push_back(k);
          next.push_back(ext);
          words.push_back(ext);
        }
      level = std::move(next);
    }
  }
  long long total = 0;
  for (auto &w : words) total += vertex_count({w, d});
  if (total > opts.total_vertex_budget)
    throw std::runtime_error("budget-exceeded: enumeration too large");

  PartitionCache cache;
  for (size_t i = 0; i < words.size(); ++i) {
    if (opts.progress)
      opts.progress("word " + std::to_string(i + 1) + "/" +
                    std::to_string(words.size()));
    detail::append_word_zeros(set, words[i], cache, opts);
  }
  dedup_records(set.records);
  return set;
}

// ---------------------------------------------------------------------------
// measurement

// coverage: fraction of 1000 equispaced arc samples within eps (chordal) of
// an on-circle record; gap: widest angular sub-interval of the arc holding no
// on-circle record.
inline std::pair<double, double>
coverage_and_gap(const ZeroSet &set, const CircleArc &arc, double eps) {
  std::vector<double> lifted; // zero angles lifted from arc.start
  for (const auto &rec : set.records) {
    if (!rec.on_circle) continue;
    UnitAngle a = UnitAngle::of(rec.lambda);
    if (arc.contains(a, 1e-12))
      lifted.push_back(wrap_angle(a.theta - arc.start.theta));
  }
  std::sort(lifted.begin(), lifted.end());
  double w = arc.width();
  if (w == 0 && !(arc.start.theta == arc.end.theta)) w = TWO_PI;

  int hits = 0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    double t = w * i / (samples - 1);
    Cx<double> p = unit_cx(arc.start.theta + t);
    bool near = false;
    for (const auto &rec : set.records) {
      if (!rec.on_circle) continue;
      if (abs(rec.lambda - p) <= eps) {
        near = true;
        break;
      }
    }
    hits += near;
  }
  double gap = w;
  if (!lifted.empty()) {
    gap = lifted.front(); // from arc start to first zero
    for (size_t i = 1; i < lifted.size(); ++i)
      gap = std::max(gap, lifted[i] - lifted[i - 1]);
    gap = std::max(gap, w - lifted.back());
  }
  return {(double)hits / samples, gap};
}

// ---------------------------------------------------------------------------
// storage (JSON lines; schema shared with the CLI)

inline nlohmann::json record_to_json(const ZeroRecord &rec, int d,
                                     const Rational &b) {
  nlohmann::json j;
  j["lambda_re"] = rec.lambda.re;
  j["lambda_im"] = rec.lambda.im;
  j["class"] = tree_class_name(rec.tree_class);
  j["word"] = rec.word;
  j["depth"] = rec.depth;
  j["residual"] = rec.residual;
  j["on_circle"] = rec.on_circle;
  j["multiplicity"] = rec.multiplicity;
  j["d"] = d;
  j["b"] = b.str();
  return j;
}

inline void save_zero_set(const ZeroSet &set, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  nlohmann::json meta;
  meta["meta"] = {{"d", set.d},
                  {"b", set.b.str()},
                  {"class", tree_class_name(set.tree_class)},
                  {"depth", set.max_depth},
                  {"precision_bits", set.precision_bits}};
  out << meta.dump() << "\n";
  for (const auto &rec : set.records)
    out << record_to_json(rec, set.d, set.b).dump() << "\n";
}

inline std::optional<ZeroSet> load_zero_set(const std::string &path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  ZeroSet set;
  try {
    auto meta = nlohmann::json::parse(line);
    if (!meta.contains("meta")) return std::nullopt;
    auto m = meta["meta"];
    set.d = m["d"];
    set.b = parse_rational(m["b"].get<std::string>());
    set.tree_class = m["class"] == "cayley" ? TreeClass::cayley
                                            : TreeClass::spherical;
    set.max_depth = m["depth"];
    set.precision_bits = m["precision_bits"];
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line);
      ZeroRecord rec;
      rec.lambda = {j["lambda_re"], j["lambda_im"]};
      rec.tree_class =
          j["class"] == "cayley" ? TreeClass::cayley : TreeClass::spherical;
      rec.word = j["word"].get<std::vector<int>>();
      rec.depth = j["depth"];
      rec.residual = j["residual"];
      rec.on_circle = j["on_circle"];
      rec.multiplicity = j["multiplicity"];
      set.records.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  }
  return set;
}

// Cached enumeration: reuse a stored set when the key matches exactly.
inline ZeroSet enumerate_zero_set_cached(int d, const Rational &b,
                                         int max_depth, TreeClass tree_class,
                                         EnumerateOptions opts = {}) {
  if (!opts.cache_dir.empty()) {
    std::filesystem::create_directories(opts.cache_dir);
    std::string name =
        zero_cache_name(d, b, tree_class, max_depth, opts.precision_bits);
    if (opts.circle_only) {
      // sweep-restricted sets are distinct artifacts; key the range in
      char tag[64];
      std::snprintf(tag, sizeof tag, "_sweep%.6f_%.6f", opts.sweep_theta_lo,
                    opts.sweep_theta_hi);
      name.insert(name.size() - 6, tag); // before ".jsonl"
    }
    std::string path = opts.cache_dir + "/" + name;
    if (auto cached = load_zero_set(path)) {
      if (cached->d == d && cached->b == b &&
          cached->tree_class == tree_class && cached->max_depth == max_depth)
        return *cached;
    }
    ZeroSet set = enumerate_zero_set(d, b, max_depth, tree_class, opts);
    save_zero_set(set, path);
    return set;
  }
  return enumerate_zero_set(d, b, max_depth, tree_class, opts);
}

} // namespace isingzero
