#include <doctest.h>

#include <isingzero/poly.hpp>
#include <isingzero/roots.hpp>

using namespace isingzero;

using PQ = Poly<Rational>;

static PQ pq(std::initializer_list<long long> cs) {
  std::vector<Rational> v;
  for (long long c : cs) v.push_back(Rational(c));
  return PQ(std::move(v));
}

TEST_CASE("polynomial arithmetic basics") {
  PQ a = pq({1, 2, 3}); // 3x^2 + 2x + 1
  PQ b = pq({-1, 1});   // x - 1
  CHECK((a * b) == pq({-1, -1, -1, 3}));
  CHECK((a + b) == pq({0, 3, 3}));
  CHECK(a.degree() == 2);
  CHECK(a.eval(Rational(2)) == Rational(17));
  CHECK(a.derivative() == pq({2, 6}));
}

TEST_CASE("divmod and gcd") {
  PQ p = pq({-1, 0, 1});       // (x-1)(x+1)
  PQ q = pq({-1, 1});          // x - 1
  auto [quot, rem] = divmod(p, q);
  CHECK(quot == pq({1, 1}));
  CHECK(rem.is_zero());

  PQ g = poly_gcd(pq({-1, 0, 1}), pq({1, 1})); // common factor x + 1
  CHECK(g == pq({1, 1}));
  CHECK(poly_gcd(pq({-1, 0, 1}), pq({1, 0, 1})).degree() == 0);
}

TEST_CASE("karatsuba agrees with schoolbook") {
  std::vector<Rational> ca, cb;
  for (int i = 0; i < 700; ++i) {
    ca.push_back(Rational((i * 37 + 11) % 101 - 50));
    cb.push_back(Rational((i * 61 + 29) % 97 - 48));
  }
  PQ a{ca}, b{cb};
  PQ direct;
  { // schoolbook reference below the karatsuba threshold path
    std::vector<Rational> r(ca.size() + cb.size() - 1, Rational(0));
    for (size_t i = 0; i < ca.size(); ++i)
      for (size_t j = 0; j < cb.size(); ++j) r[i + j] += ca[i] * cb[j];
    direct = PQ(std::move(r));
  }
  CHECK(PQ::mul(a, b) == direct);
}

TEST_CASE("palindromic reduction halves the degree") {
  // (x^2 + 4x + 1) is palindromic: q(w) = w + 4 with w = x + 1/x
  PQ p = pq({1, 4, 1});
  PQ q = palindromic_reduce(p);
  CHECK(q == pq({4, 1}));

  // odd-degree palindromes divide by (x + 1) exactly
  PQ c = pq({1, 8, 8, 1});
  PQ c2 = divide_out_minus_one_root(c);
  CHECK(c2 == pq({1, 7, 1}));
  CHECK(c2.is_palindromic());
}

TEST_CASE("roots of x^2 + 4x + 1") {
  auto res = solve_poly(pq({1, 4, 1}));
  REQUIRE(res.roots.size() == 2);
  CHECK(res.certified);
  double r3 = std::sqrt(3.0);
  double got1 = res.roots[0].z.re, got2 = res.roots[1].z.re;
  if (got1 > got2) std::swap(got1, got2);
  CHECK(std::abs(got1 - (-2 - r3)) < 1e-13);
  CHECK(std::abs(got2 - (-2 + r3)) < 1e-13);
  CHECK(std::abs(res.roots[0].z.im) < 1e-13);
}

TEST_CASE("roots of x^3 + 8x^2 + 8x + 1 hit the closed forms") {
  auto res = solve_poly(pq({1, 8, 8, 1}));
  REQUIRE(res.roots.size() == 3);
  double s5 = std::sqrt(5.0);
  std::vector<double> expect = {(-7 - 3 * s5) / 2, -1, (-7 + 3 * s5) / 2};
  std::vector<double> got;
  for (auto &r : res.roots) {
    CHECK(std::abs(r.z.im) < 1e-13);
    CHECK(r.multiplicity == 1);
    got.push_back(r.z.re);
  }
  std::sort(got.begin(), got.end());
  for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-12);
}

TEST_CASE("multiplicities from clustered roots") {
  // (x - 1)^3 (x + 2)
  PQ p = pq({-1, 3, -3, 1}) * pq({2, 1});
  auto res = solve_poly(p);
  int total = 0;
  bool saw_triple = false;
  for (auto &r : res.roots) {
    total += r.multiplicity;
    if (r.multiplicity == 3) {
      saw_triple = true;
      CHECK(std::abs(r.z.re - 1.0) < 1e-4);
    }
  }
  CHECK(total == 4);
  CHECK(saw_triple);
}

TEST_CASE("palindromic reduction route on a large palindrome") {
  // product of palindromic factors, degree 12
  PQ p = pq({1, 4, 1}).pow(3) * pq({1, 8, 8, 1}) * pq({1, 1}).pow(2);
  // degree 6 + 3 + 2 = 11; palindromic of odd degree
  CHECK(p.is_palindromic());
  auto res = solve_poly(p);
  CHECK(res.certified);
  int total = 0;
  for (auto &r : res.roots) total += r.multiplicity;
  CHECK(total == 11);
  // -2 + sqrt(3) should appear with multiplicity 3
  bool found = false;
  for (auto &r : res.roots)
    if (std::abs(r.z.re - (-2 + std::sqrt(3.0))) < 1e-5 &&
        std::abs(r.z.im) < 1e-5)
      found = r.multiplicity == 3;
  CHECK(found);
}

TEST_CASE("huge coefficients escalate off the double rung") {
  // 2^1100 (x - 3)(x - 1/3): coefficients far outside double range
  Rational big = Rational(BigInt(1) << 1100);
  PQ p = big * (pq({-3, 1}) * PQ(std::vector<Rational>{Rational(-1, 3), 1}));
  auto res = solve_poly(p);
  CHECK(res.certified);
  CHECK(res.bits_used >= 128);
  REQUIRE(res.roots.size() == 2);
  double lo = 4, hi = 0;
  for (auto &r : res.roots) {
    lo = std::min(lo, abs(r.z));
    hi = std::max(hi, abs(r.z));
  }
  CHECK(std::abs(lo - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(hi - 3.0) < 1e-12);
}

TEST_CASE("complex-coefficient direct solve") {
  // (z - i)(z + 2) = z^2 + (2 - i) z - 2i
  std::vector<Cx<double>> coeffs = {{0, -2}, {2, -1}, {1, 0}};
  auto zs = solve_complex_poly(coeffs);
  REQUIRE(zs.size() == 2);
  for (auto &z : zs) {
    double r1 = abs(z - Cx<double>{0, 1});
    double r2 = abs(z - Cx<double>{-2, 0});
    CHECK(std::min(r1, r2) < 1e-10);
  }
}
