#include <doctest.h>

#include <cmath>

#include <isingzero/critical_params.hpp>

using namespace isingzero;

namespace {
const double PI = 3.14159265358979323846;
}

TEST_CASE("b_threshold and preconditions") {
  CHECK(b_threshold(2) == Rational(3));
  CHECK(b_threshold(3) == Rational(2));
  CHECK(b_threshold(5) == Rational(3, 2));
  CHECK_THROWS_AS(b_threshold(1), std::invalid_argument);
  CHECK_THROWS_AS(lambda0<R128>(2, R128(3)), std::domain_error);
  CHECK_THROWS_AS(lambda0<R128>(2, R128(1)), std::domain_error);
}

TEST_CASE("lambda0 at (2,2) is e^{2 pi i / 3}") {
  R128 t = lambda0<R128>(2, R128(2));
  CHECK(std::abs(to_double(t) - 2 * PI / 3) < 1e-12);
  // the defining equation holds at much higher accuracy than the bisection
  Model<R128> m{2, R128(2), unit_cx(t)};
  auto img = map_eval(m, 2, RiemannPoint<R128>::finite(m.lambda));
  CHECK(to_double(abs(img.z - Cx<R128>{R128(1), R128(0)})) < 1e-13);
}

TEST_CASE("lambda0 validates for other (d, b)") {
  R128 t = lambda0<R128>(3, R128(3) / 2);
  CHECK(to_double(t) > 0);
  CHECK(to_double(t) < 2 * PI);
  Model<R128> m{3, R128(3) / 2, unit_cx(t)};
  auto img = map_eval(m, 3, RiemannPoint<R128>::finite(m.lambda));
  CHECK(to_double(abs(img.z - Cx<R128>{R128(1), R128(0)})) < 1e-12);
  // minimality: the lift stays positive on (0, t) at scan resolution
  for (double s = 1e-3; s < to_double(t) - 1e-3; s += 1e-3) {
    double h = s + 3 * gamma_angle_lift(1.5, s);
    CHECK(h > 0);
  }
}

TEST_CASE("lambda1 at (2,2): Re z* = 1/4 and the parabolic equations") {
  R128 t = lambda1<R128>(2, R128(2));
  double td = to_double(t);
  // independent reconstruction of the parabolic parameter
  std::complex<double> zs(0.25, std::sqrt(15.0) / 4);
  std::complex<double> g2 = (zs + 2.0) / (2.0 * zs + 1.0);
  std::complex<double> l1 = zs / (g2 * g2);
  CHECK(td == doctest::Approx(std::arg(l1)).epsilon(1e-12));
  CHECK(td == doctest::Approx(2.328837092221133).epsilon(1e-12));
  // reconstruct z* and check Re z* = 1/4
  Cx<double> lam = unit_cx(td);
  Model<double> m{2, 2.0, lam};
  // z* is the fixed point on the circle with |f'| = 1
  bool found = false;
  for (auto &fp : fixed_points(m, 2)) {
    if (std::abs(abs(fp.z) - 1.0) < 1e-9 &&
        std::abs(abs(fp.multiplier) - 1.0) < 1e-6) {
      CHECK(fp.z.re == doctest::Approx(0.25).epsilon(1e-8));
      found = true;
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(lambda1<R128>(2, R128(4)), std::domain_error);
}

TEST_CASE("attracting interval at lambda0: endpoints {1, lambda0}") {
  double t0 = to_double(lambda0<R128>(2, R128(2)));
  Model<double> m{2, 2.0, unit_cx(t0)};
  IntervalData iv = attracting_interval(m);
  CHECK(std::abs(wrap_angle(iv.endpoint_a.theta + PI) - PI) < 1e-8);
  CHECK(std::abs(iv.endpoint_b.theta - 2 * PI / 3) < 1e-8);
  CHECK(iv.endpoint_cycle_multiplier == doctest::Approx(4.0 / 3).epsilon(1e-10));
  // the endpoints really form a 2-cycle: f(z_a) = z_b
  auto img = map_eval(m, 2, RiemannPoint<double>::finite(iv.endpoint_a.point()));
  CHECK(abs(img.z - iv.endpoint_b.point()) < 1e-10);
  CHECK(iv.arc.contains(iv.r_fixed, 1e-9));
}

TEST_CASE("trichotomy on both sides of lambda0") {
  double t0 = to_double(lambda0<R128>(2, R128(2)));
  Model<double> lo{2, 2.0, unit_cx(t0 - 0.1)};
  Model<double> at{2, 2.0, unit_cx(t0)};
  Model<double> hi{2, 2.0, unit_cx(t0 + 0.1)};
  CHECK(trichotomy_classify(lo) == Trichotomy::inside);
  CHECK(trichotomy_classify(at) == Trichotomy::equal);
  CHECK(trichotomy_classify(hi) == Trichotomy::contains);
}

TEST_CASE("trichotomy sweep finds the single transition") {
  auto res = trichotomy_sweep(2, 2.0, 1e-2);
  CHECK(res.transitions_seen == 1);
  CHECK(std::abs(res.transition - 2 * PI / 3) < 2e-2);
  CHECK(res.endpoint_multiplier_at_transition ==
        doctest::Approx(4.0 / 3).epsilon(1e-2));
}

TEST_CASE("lambda2: certified compact inclusion past lambda0") {
  double t0 = to_double(lambda0<R128>(2, R128(2)));
  double t1 = to_double(lambda1<R128>(2, R128(2)));
  auto res = lambda2(2, 2.0);
  CHECK(res.theta > t0);
  CHECK(res.theta <= t1 + 1e-12);
  CHECK(res.monotonicity_violations.empty());
  // the predicate holds strictly inside and fails past the boundary
  CHECK(lambda2_predicate(2, 2.0, (t0 + res.theta) / 2 + 1e-4));
  if (res.theta < t1 - 1e-6) CHECK_FALSE(lambda2_predicate(2, 2.0, res.theta + 1e-6));
}

TEST_CASE("k_arc: invariant arc inside I containing R(f_1)") {
  double t0 = to_double(lambda0<R128>(2, R128(2)));
  auto l2 = lambda2(2, 2.0);
  double t = t0 + 0.5 * (l2.theta - t0);
  Model<double> m{2, 2.0, unit_cx(t)};
  CircleArc K = k_arc(m);
  IntervalData iv = attracting_interval(m);
  // K sits inside I
  CHECK(iv.arc.contains(K.start, 1e-8));
  CHECK(iv.arc.contains(K.end, 1e-8));
  // invariance under both hat generators, sampled pointwise
  double klo = K.start.theta, w = K.width();
  for (int i = 0; i <= 40; ++i) {
    double th = klo + w * i / 40.0;
    for (int k = 1; k <= 2; ++k) {
      double u = t + k * gamma_angle_lift(2.0, th);
      if (k < 2) u = t + gamma_angle_lift(2.0, u);
      CHECK(K.contains(UnitAngle(wrap_angle(u)), 1e-8));
    }
  }
}

TEST_CASE("repelling parameters for N = 2 are the lambda0 pair") {
  CircleArc arc{UnitAngle(0.2), UnitAngle(2 * PI - 0.2)};
  auto found = repelling_parameters(2, 2.0, 2, arc);
  REQUIRE(found.size() == 2);
  CHECK(std::abs(found[0].theta - 2 * PI / 3) < 1e-10);
  CHECK(std::abs(found[1].theta - 4 * PI / 3) < 1e-10);
}

TEST_CASE("repelling parameters for N = 3 satisfy the defining equation") {
  CircleArc arc{UnitAngle(0.2), UnitAngle(2 * PI - 0.2)};
  auto found = repelling_parameters(2, 2.0, 3, arc);
  CHECK(found.size() >= 2);
  for (auto &a : found) {
    Model<double> m{2, 2.0, unit_cx(a.theta)};
    RiemannPoint<double> z = RiemannPoint<double>::finite({1.0, 0.0});
    double mult = 1;
    for (int j = 0; j < 3; ++j) {
      mult *= abs(map_derivative(m, 2, z.z));
      z = map_eval(m, 2, z);
    }
    CHECK(abs(z.z - Cx<double>{1.0, 0.0}) < 1e-9);
    CHECK(mult > 1);
  }
}

TEST_CASE("regime classification from the critical orbit") {
  // sub-threshold, lambda = 1: orbit of -1/b settles on the circle
  Model<double> sub{2, 2.0, {1.0, 0.0}};
  CHECK(regime_classify(sub) == Regime::cantor_julia);
  // super-threshold: expanding on the circle, Julia set is the circle
  Model<double> super{2, 4.0, {1.0, 0.0}};
  CHECK(regime_classify(super) == Regime::circle_julia);
}

TEST_CASE("critical_set aggregates and orders the distinguished angles") {
  CriticalSet cs = critical_set(2, Rational(2));
  CHECK(cs.threshold == Rational(3));
  CHECK(std::string(cs.regime_name) == "sub-threshold");
  CHECK(cs.lambda0_angle < cs.lambda2_angle);
  CHECK(cs.lambda2_angle <= cs.lambda1_angle + 1e-12);
  CriticalSet hi = critical_set(2, Rational(4));
  CHECK(std::string(hi.regime_name) == "super-threshold");
  CHECK(hi.lambda0_angle == 0);
}
