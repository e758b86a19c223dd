#include <doctest.h>

#include <isingzero/zero_atlas.hpp>

#include <cstdio>
#include <filesystem>

using namespace isingzero;
using PQ = Poly<Rational>;

static PQ pq(std::initializer_list<long long> cs) {
  std::vector<Rational> v;
  for (long long c : cs) v.push_back(Rational(c));
  return PQ(std::move(v));
}

static const double PI = 3.14159265358979323846;

TEST_CASE("poly_roots on the closed-form examples") {
  auto r1 = poly_roots(pq({1, 1}));
  REQUIRE(r1.size() == 1);
  CHECK(abs(r1[0].z - Cx<double>{-1, 0}) < 1e-14);

  auto r2 = poly_roots(pq({1, 4, 1}));
  REQUIRE(r2.size() == 2);
  CHECK(std::abs(r2[0].z.re * r2[1].z.re - 1.0) < 1e-12); // reciprocal pair

  auto r3 = poly_roots(pq({1, 8, 8, 1}));
  REQUIRE(r3.size() == 3);
  double s5 = std::sqrt(5.0);
  for (auto &root : r3) {
    double dmin = std::min({abs(root.z - Cx<double>{-1, 0}),
                            abs(root.z - Cx<double>{(-7 - 3 * s5) / 2, 0}),
                            abs(root.z - Cx<double>{(-7 + 3 * s5) / 2, 0})});
    CHECK(dmin < 1e-12);
  }
  CHECK_THROWS_AS(poly_roots(pq({5})), std::invalid_argument);
}

TEST_CASE("verify_zero examples") {
  R128 b(2);
  // lambda = -1 certifies immediately at m = 0
  auto rep = verify_zero(Cx<R128>{R128(-1), R128(0)}, {2, 2, 2}, 2, b);
  CHECK(rep.residual == 0);
  CHECK(rep.argmin_m == 0);

  // roots of lambda^2 + 7 lambda + 1 with word (2)
  double s5 = std::sqrt(5.0);
  for (double r : {(-7 - 3 * s5) / 2, (-7 + 3 * s5) / 2}) {
    auto rr = verify_zero(Cx<R128>{R128(r), R128(0)}, {2}, 2, b);
    CHECK(rr.residual < 1e-12);
    CHECK(rr.argmin_m == 1);
  }

  // lambda = 1 stays in the zero-free region through depth 11
  auto far = verify_zero(Cx<R128>{R128(1), R128(0)},
                         std::vector<int>(11, 2), 2, b);
  CHECK(far.residual >= 0.1);
}

TEST_CASE("refine_zero") {
  R128 b(2);
  // word (): F = lambda + 1 is linear
  auto z0 = refine_zero(Cx<R128>{R128(-1) + R128(1e-6), R128(0)}, {}, 2, b);
  CHECK(to_double(abs(z0 + Cx<R128>{R128(1), R128(0)})) < 1e-14);

  // perturbed quadratic root converges back to the closed form
  double s5 = std::sqrt(5.0);
  double exact = (-7 + 3 * s5) / 2;
  auto z1 = refine_zero(Cx<R128>{R128(exact) + R128(1e-4), R128(0)}, {2}, 2,
                        b, 1e-14);
  CHECK(to_double(abs(z1 - Cx<R128>{R128(exact), R128(0)})) < 1e-13);

  // depth-6 Cayley root polished from a double-precision start
  auto pair = partition_recursion({std::vector<int>(6, 2), 2}, 2);
  auto roots = poly_roots(pair.z_in + pair.z_out, 53);
  int improved = 0, tried = 0;
  for (auto &root : roots) {
    if (root.multiplicity != 1) continue;
    Cx<R128> start = cx_cast<double, R128>(root.z);
    auto before = verify_zero(start, std::vector<int>(6, 2), 2, b);
    Cx<R128> polished;
    try {
      polished = refine_zero(start, std::vector<int>(6, 2), 2, b, 1e-25);
    } catch (const std::runtime_error &) {
      continue;
    }
    auto after = verify_zero(polished, std::vector<int>(6, 2), 2, b);
    ++tried;
    if (after.residual < before.residual * 1e-4 || after.residual < 1e-25)
      ++improved;
  }
  CHECK(tried > 100);
  CHECK(improved == tried); // >= 1e4x improvement for every simple root
}

TEST_CASE("refine_zero error conditions") {
  R128 b(2);
  // a target below the 128-bit noise floor cannot be reached
  CHECK_THROWS_WITH_AS(
      refine_zero(Cx<R128>{R128(4), R128(3)}, {2, 2}, 2, b, 1e-60),
      doctest::Contains("no-convergence"), std::runtime_error);
}

TEST_CASE("enumerate_zero_set: cayley depth 0 and 1") {
  auto set0 = enumerate_zero_set(2, 2, 0, TreeClass::cayley);
  REQUIRE(set0.records.size() == 1);
  CHECK(abs(set0.records[0].lambda - Cx<double>{-1, 0}) < 1e-13);
  CHECK(set0.records[0].on_circle);

  auto set1 = enumerate_zero_set(2, 2, 1, TreeClass::cayley);
  // depth <= 1: roots of (1 + lambda) and of lambda^3 + 8 lambda^2 + 8
  // lambda + 1; -1 deduplicates, leaving 3 distinct zeros
  CHECK(set1.records.size() == 3);
  for (auto &rec : set1.records) CHECK(rec.residual < 1e-14);
}

TEST_CASE("enumerate_zero_set: spherical depth 2 has 7 words") {
  int words_seen = 0;
  EnumerateOptions opts;
  opts.progress = [&](const std::string &) { ++words_seen; };
  auto set = enumerate_zero_set(2, 2, 2, TreeClass::spherical, opts);
  CHECK(words_seen == 7);
  // symmetry invariants: conjugation and inversion closure
  for (auto &rec : set.records) {
    Cx<double> cj = conj(rec.lambda);
    Cx<double> inv = Cx<double>{1, 0} / rec.lambda;
    bool has_conj = false, has_inv = false;
    for (auto &other : set.records) {
      if (abs(other.lambda - cj) < 1e-8) has_conj = true;
      if (abs(other.lambda - inv) < 1e-8) has_inv = true;
    }
    CHECK(has_conj);
    CHECK(has_inv);
  }
}

TEST_CASE("circle sweep agrees with the polynomial route") {
  std::vector<int> word = {2, 2, 2};
  auto sweep = circle_zero_sweep(word, 2, 2);
  auto pair = partition_recursion({word, 2}, 2);
  auto roots = poly_roots(pair.z_in + pair.z_out);
  std::vector<double> on_circle;
  for (auto &r : roots)
    if (std::abs(abs(r.z) - 1.0) < 1e-9) on_circle.push_back(wrap_angle(arg(r.z)));
  REQUIRE(!on_circle.empty());
  REQUIRE(sweep.size() == on_circle.size());
  std::sort(on_circle.begin(), on_circle.end());
  std::vector<double> sw = sweep;
  std::sort(sw.begin(), sw.end());
  for (size_t i = 0; i < sw.size(); ++i)
    CHECK(std::abs(sw[i] - on_circle[i]) < 1e-9);
}

TEST_CASE("coverage_and_gap") {
  CircleArc arc{UnitAngle(1.0), UnitAngle(2.0)};
  ZeroSet empty;
  auto [cov0, gap0] = coverage_and_gap(empty, arc, 1e-3);
  CHECK(cov0 == 0);
  CHECK(gap0 == doctest::Approx(1.0));

  // zeros exactly at the sample points
  ZeroSet dense;
  for (int i = 0; i < 1000; ++i) {
    ZeroRecord rec;
    rec.lambda = unit_cx(1.0 + 1.0 * i / 999);
    rec.on_circle = true;
    dense.records.push_back(rec);
  }
  auto [cov1, gap1] = coverage_and_gap(dense, arc, 1e-6);
  CHECK(cov1 == 1.0);
  CHECK(gap1 < 1.1e-3);
}

TEST_CASE("jsonl round trip and cache reuse") {
  auto set = enumerate_zero_set(2, 2, 1, TreeClass::cayley);
  std::string dir = std::filesystem::temp_directory_path() /
                    "isingzero_test_cache";
  std::filesystem::remove_all(dir);
  std::string path = dir + "/set.jsonl";
  std::filesystem::create_directories(dir);
  save_zero_set(set, path);
  auto loaded = load_zero_set(path);
  REQUIRE(loaded.has_value());
  REQUIRE(loaded->records.size() == set.records.size());
  for (size_t i = 0; i < set.records.size(); ++i) {
    CHECK(loaded->records[i].lambda == set.records[i].lambda);
    CHECK(loaded->records[i].word == set.records[i].word);
    CHECK(loaded->records[i].on_circle == set.records[i].on_circle);
  }

  EnumerateOptions opts;
  opts.cache_dir = dir;
  auto first = enumerate_zero_set_cached(2, 2, 1, TreeClass::cayley, opts);
  // tamper check: cached file is reused (mtime unchanged)
  auto cache_file = dir + "/" + zero_cache_name(2, 2, TreeClass::cayley, 1, 128);
  auto t0 = std::filesystem::last_write_time(cache_file);
  auto second = enumerate_zero_set_cached(2, 2, 1, TreeClass::cayley, opts);
  CHECK(std::filesystem::last_write_time(cache_file) == t0);
  CHECK(first.records.size() == second.records.size());
  std::filesystem::remove_all(dir);
}
