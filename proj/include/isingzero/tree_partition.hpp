#pragma once
// Partition functions of spherically symmetric trees via the in/out
// recursion, an exact brute-force oracle for arbitrary small trees, and the
// occupation-ratio iteration that links the two to the circle dynamics.

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "map_core.hpp"
#include "mp.hpp"
#include "poly.hpp"

namespace isingzero {

// A spherically symmetric tree encoded by its degree word, listed bottom-up:
// degrees[0] is the down-degree at the deepest internal level. The empty word
// is the single-vertex tree.
struct TreeSpec {
  std::vector<int> degrees;
  int d = 2; // degree bound: every entry must lie in 1..d

  void validate() const {
    for (int k : degrees)
      if (k < 1 || k > d)
        throw std::invalid_argument("invalid-parameter: degree outside 1..d");
  }
  bool is_cayley() const {
    for (int k : degrees)
      if (k != d) return false;
    return true;
  }
  size_t depth() const { return degrees.size(); }
};

// 1 + k_n (1 + k_{n-1} (... (1 + k_1)...))
inline long long vertex_count(const TreeSpec &spec) {
  long long total = 1;
  for (int k : spec.degrees) total = 1 + (long long)k * total;
  return total;
}

// Z^in and Z^out at the root, as exact polynomials in lambda.
struct PolyPair {
  Poly<Rational> z_in, z_out;
};

// Z^in_n = lambda (Z^in_{n-1} + b Z^out_{n-1})^{k_n},
// Z^out_n = (b Z^in_{n-1} + Z^out_{n-1})^{k_n}, from Z^in_0 = lambda,
// Z^out_0 = 1.
inline PolyPair partition_recursion(const TreeSpec &spec, const Rational &b,
                                    long long coeff_budget_vertices = 20000) {
  spec.validate();
  if (vertex_count(spec) > coeff_budget_vertices)
    throw std::runtime_error("budget-exceeded: tree too large");
  using PQ = Poly<Rational>;
  PQ lambda = PQ::monomial(Rational(1), 1);
  PolyPair p{lambda, PQ::constant(Rational(1))};
  for (int k : spec.degrees) {
    PQ in_mix = p.z_in + b * p.z_out;
    PQ out_mix = b * p.z_in + p.z_out;
    p.z_in = lambda * in_mix.pow(k);
    p.z_out = out_mix.pow(k);
  }
  return p;
}

// Z = Z^in + Z^out; monic, constant term 1, degree = vertex count.
inline Poly<Rational> partition_polynomial(const TreeSpec &spec,
                                           const Rational &b) {
  PolyPair p = partition_recursion(spec, b);
  return p.z_in + p.z_out;
}

// Memoizing wrapper: spherically symmetric subtrees repeat massively across
// word enumerations, so PolyPair results are cached by (degree word, b).
// Thread-safe: exclusive insertion, shared immutable results.
class PartitionCache {
public:
  std::shared_ptr<const PolyPair> get(const TreeSpec &spec,
                                      const Rational &b) {
    Key key{spec.degrees, b};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    std::shared_ptr<const PolyPair> result;
    if (!spec.degrees.empty()) {
      // build on the cached child: the word without its last (root) degree
      TreeSpec child{{spec.degrees.begin(), spec.degrees.end() - 1}, spec.d};
      auto base = get(child, b);
      using PQ = Poly<Rational>;
      int k = spec.degrees.back();
      PQ lambda = PQ::monomial(Rational(1), 1);
      PolyPair p;
      p.z_in = lambda * (base->z_in + b * base->z_out).pow(k);
      p.z_out = (b * base->z_in + base->z_out).pow(k);
      result = std::make_shared<const PolyPair>(std::move(p));
    } else {
      result = std::make_shared<const PolyPair>(
          partition_recursion(spec, b));
    }
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = cache_.emplace(std::move(key), std::move(result));
    return it->second;
  }

private:
  struct Key {
    std::vector<int> degrees;
    Rational b;
    bool operator<(const Key &o) const {
      if (degrees != o.degrees) return degrees < o.degrees;
      return b < o.b;
    }
  };
  std::map<Key, std::shared_ptr<const PolyPair>> cache_;
  std::mutex mu_;
};

namespace detail {

// arithmetic mod a 63-bit prime for the coprimality certificate
inline uint64_t mulmod_p(uint64_t a, uint64_t b, uint64_t p) {
  return (uint64_t)((__uint128_t)a * b % p);
}
inline uint64_t powmod_p(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod_p(a, a, p))
    if (e & 1) r = mulmod_p(r, a, p);
  return r;
}
inline uint64_t invmod_p(uint64_t a, uint64_t p) {
  return powmod_p(a % p, p - 2, p);
}

// reduce an exact polynomial mod p; false if a denominator vanishes mod p
inline bool reduce_mod_p(const Poly<Rational> &poly, uint64_t p,
                         std::vector<uint64_t> &out) {
  out.assign(poly.c.size(), 0);
  for (size_t i = 0; i < poly.c.size(); ++i) {
    BigInt num = boost::multiprecision::numerator(poly.c[i]);
    BigInt den = boost::multiprecision::denominator(poly.c[i]);
    BigInt pn = num % (long long)p, pd = den % (long long)p;
    if (pd == 0) return false;
    uint64_t n = (uint64_t)((pn + (long long)p) % (long long)p);
    uint64_t d = (uint64_t)(pd % (long long)p);
    out[i] = mulmod_p(n, invmod_p(d, p), p);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return true;
}

inline size_t gcd_degree_mod_p(std::vector<uint64_t> a,
                               std::vector<uint64_t> b, uint64_t p) {
  while (!b.empty()) {
    // a mod b
    uint64_t inv = invmod_p(b.back(), p);
    while (a.size() >= b.size()) {
      uint64_t q = mulmod_p(a.back(), inv, p);
      size_t off = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) {
        uint64_t sub = mulmod_p(q, b[i], p);
        a[off + i] = (a[off + i] + p - sub) % p;
      }
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.size() < b.size()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

} // namespace detail

// Certifies that z_in and z_out share no common root (for b outside {-1, 1}
// the pair never vanishes simultaneously). A degree-0 gcd modulo a prime that
// preserves both leading coefficients is a sound certificate; falls back to
// an exact rational gcd if every prime degenerates.
inline bool nonvanishing_pair(const PolyPair &pair) {
  static const uint64_t primes[] = {9223372036854775783ull,
                                    9223372036854775643ull,
                                    9223372036854775549ull};
  for (uint64_t p : primes) {
    std::vector<uint64_t> a, b;
    if (!detail::reduce_mod_p(pair.z_in, p, a) ||
        !detail::reduce_mod_p(pair.z_out, p, b))
      continue;
    if (a.size() != pair.z_in.c.size() || b.size() != pair.z_out.c.size())
      continue; // a leading coefficient vanished mod p; certificate unsound
    if (detail::gcd_degree_mod_p(a, b, p) == 0) return true;
  }
  return poly_gcd(pair.z_in, pair.z_out).degree() == 0;
}

// An arbitrary rooted tree for the brute-force oracle.
struct GeneralTree {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  int root = 0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("invalid-parameter: empty tree");
    if ((size_t)(n - 1) != edges.size())
      throw std::invalid_argument("invalid-parameter: not a tree (edges)");
    // connectivity via union-find; acyclicity follows from the edge count
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("invalid-parameter: vertex out of range");
      int a = find(u), c = find(v);
      if (a == c)
        throw std::invalid_argument("invalid-parameter: cycle in tree");
      parent[a] = c;
    }
  }

  // Expand a spherically symmetric spec into an explicit tree (root = 0).
  static GeneralTree from_spec(const TreeSpec &spec) {
    GeneralTree t;
    t.n = (int)vertex_count(spec);
    std::vector<int> frontier = {0};
    int next = 1;
    // degrees are bottom-up; the root's degree is the last entry
    for (auto it = spec.degrees.rbegin(); it != spec.degrees.rend(); ++it) {
      std::vector<int> next_frontier;
      for (int v : frontier)
        for (int c = 0; c < *it; ++c) {
          t.edges.push_back({v, next});
          next_frontier.push_back(next);
          ++next;
        }
      frontier = std::move(next_frontier);
    }
    return t;
  }

  // Text format: vertex count on the first line, then one "u v" edge per
  // line; root is vertex 0.
  static GeneralTree parse(std::istream &in) {
    GeneralTree t;
    if (!(in >> t.n))
      throw std::invalid_argument("invalid-parameter: missing vertex count");
    int u, v;
    while (in >> u >> v) t.edges.push_back({u, v});
    t.validate();
    return t;
  }
};

// Sum over all 2^n subsets U of lambda^|U| b^|cross edges(U)|, exactly.
inline Poly<Rational> brute_force_partition_symbolic(const GeneralTree &tree,
                                                     const Rational &b) {
  tree.validate();
  if (tree.n > 24) throw std::runtime_error("budget-exceeded: > 24 vertices");
  // accumulate coefficients of lambda^occ, bucketing by cross-edge count
  // first so each power of b is computed once
  size_t max_cross = tree.edges.size() + 1;
  std::vector<std::vector<BigInt>> counts(
      (size_t)tree.n + 1, std::vector<BigInt>(max_cross, BigInt(0)));
  for (uint32_t mask = 0; mask < (1u << tree.n); ++mask) {
    int occ = __builtin_popcount(mask);
    int cross = 0;
    for (auto [u, v] : tree.edges)
      cross += (((mask >> u) ^ (mask >> v)) & 1u) != 0;
    counts[occ][cross] += 1;
  }
  std::vector<Rational> bpow(max_cross);
  bpow[0] = 1;
  for (size_t i = 1; i < max_cross; ++i) bpow[i] = bpow[i - 1] * b;
  std::vector<Rational> coeffs((size_t)tree.n + 1, Rational(0));
  for (int occ = 0; occ <= tree.n; ++occ)
    for (size_t cross = 0; cross < max_cross; ++cross)
      if (counts[occ][cross] != 0)
        coeffs[occ] += Rational(counts[occ][cross]) * bpow[cross];
  return Poly<Rational>(std::move(coeffs));
}

inline Cx<double> brute_force_partition(const GeneralTree &tree,
                                        const Cx<double> &lambda,
                                        const Rational &b) {
  return brute_force_partition_symbolic(tree, b).convert<double>().eval(
      lambda);
}

// Occupation ratio at the root by direct map iteration:
// R = f_{k_n} o ... o f_{k_1} (lambda). Equals z_in(lambda)/z_out(lambda) on
// the sphere.
template <class R>
RiemannPoint<R> ratio_eval(const TreeSpec &spec, const Model<R> &m) {
  spec.validate();
  RiemannPoint<R> z = RiemannPoint<R>::finite(m.lambda);
  for (int k : spec.degrees) z = map_eval(m, k, z);
  return z;
}

} // namespace isingzero
