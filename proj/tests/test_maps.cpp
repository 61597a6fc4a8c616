#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "torustwist/maps.hpp"

using namespace torustwist;
using oracle::kTwoPi;

namespace {

double sup(PlanePoint a, PlanePoint b) { return std::max(std::abs(a.phi - b.phi), std::abs(a.i - b.i)); }

std::vector<TwistFamily> shipped() {
  return {builtin_standard(0.0),        builtin_standard(1.0),          builtin_standard(10.0),
          builtin_saddle_center(1, 1),  builtin_saddle_center(2.0, 0.5), builtin_saddle_center(0.6, 1.7),
          builtin_circle_diffeo(0, 0),  builtin_circle_diffeo(0.2, 0.5), builtin_circle_diffeo(0.7, -0.9)};
}

}  // namespace

TEST_CASE("standard map agrees with the reference formula") {
  oracle::Dyadic g(11);
  for (double k : {0.0, 0.5, 1.0, 5.0, 10.0}) {
    const TwistFamily f = builtin_standard(k);
    for (int t = 0; t < 100; ++t) {
      const PlanePoint z{g.range(-3, 3), g.range(-3, 3)};
      const auto o = oracle::standard(k, {z.phi, z.i});
      const PlanePoint w = f.forward(z);
      CHECK(w.phi == doctest::Approx(o.phi).epsilon(1e-15));
      CHECK(w.i == doctest::Approx(o.i).epsilon(1e-15));
    }
  }
}

TEST_CASE("eval_lift examples") {
  const TwistFamily f0 = builtin_standard(0.0);
  const PlanePoint w = eval_lift(f0, {0.3, 0.5}, 2);
  CHECK(w.phi == doctest::Approx(1.3));
  CHECK(w.i == 0.5);
  CHECK(eval_lift(builtin_standard(7.0), {0, 0}, 1) == PlanePoint{0, 0});

  const double phi = oracle::vertical_fixed_angles(10.0).second;
  CHECK(std::sin(kTwoPi * phi) * 10.0 / kTwoPi == doctest::Approx(-1.0).epsilon(1e-14));
  const PlanePoint v = eval_lift(builtin_standard(10.0), {phi, 0.0}, 1);
  CHECK(v.phi == doctest::Approx(phi + 1.0).epsilon(1e-14));
  CHECK(v.i == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eval_lift composition and inverse") {
  oracle::Dyadic g(12);
  for (const TwistFamily& f : shipped()) {
    for (int t = 0; t < 20; ++t) {
      const PlanePoint z{g.unit(), g.unit()};
      const long a = g.integer(-3, 3), b = g.integer(-3, 3);
      const PlanePoint lhs = eval_lift(f, z, a + b);
      const PlanePoint rhs = eval_lift(f, eval_lift(f, z, a), b);
      CHECK(sup(lhs, rhs) < 1e-8 * (1.0 + std::abs(lhs.phi) + std::abs(lhs.i)));
      CHECK(sup(f.inverse(f.forward(z)), z) < 1e-10);
    }
  }
}

TEST_CASE("divergence cap") {
  const TwistFamily f = user_family("runaway", [](PlanePoint p) { return PlanePoint{p.phi + p.i, 1e6 * p.i + 1e6}; },
                                    [](PlanePoint p) { return p; });
  CHECK_THROWS_AS(eval_lift(f, {0, 1}, 10), DivergenceError);
}

TEST_CASE("deck equivariance of every shipped family") {
  oracle::Dyadic g(13);
  for (const TwistFamily& f : shipped()) {
    for (int t = 0; t < 50; ++t) {
      const PlanePoint z{g.unit(), g.unit()};
      const PlanePoint w = f.forward(z);
      const PlanePoint wx = f.forward({z.phi + 1.0, z.i});
      const PlanePoint wy = f.forward({z.phi, z.i + 1.0});
      CHECK(sup(wx, {w.phi + 1.0, w.i}) < 1e-12);
      CHECK(sup(wy, {w.phi + 1.0, w.i + 1.0}) < 1e-12);
    }
  }
}

TEST_CASE("standard map Jacobian has determinant one and the analytic entries") {
  oracle::Dyadic g(14);
  const double k = 3.0;
  const TwistFamily f = builtin_standard(k);
  for (int t = 0; t < 100; ++t) {
    const PlanePoint z{g.unit(), g.unit()};
    const Mat2 j = f.jacobian(z);
    const double c = std::cos(kTwoPi * z.phi);
    CHECK(std::abs(j.det() - 1.0) < 1e-12);
    CHECK(j.a == doctest::Approx(1.0 - k * c));
    CHECK(j.b == 1.0);
    CHECK(j.c == doctest::Approx(-k * c));
    CHECK(j.d == 1.0);
  }
}

TEST_CASE("finite-difference Jacobians match the analytic ones") {
  oracle::Dyadic g(15);
  for (const TwistFamily& f : shipped()) {
    const TwistFamily fd = user_family("fd", [f](PlanePoint p) { return f.forward(p); },
                                       [f](PlanePoint p) { return f.inverse(p); });
    for (int t = 0; t < 20; ++t) {
      const PlanePoint z{g.range(0.05, 0.95), g.range(0.05, 0.95)};
      const Mat2 a = f.jacobian(z), b = fd.jacobian(z);
      const double scale = 1.0 + std::abs(a.a) + std::abs(a.b) + std::abs(a.c) + std::abs(a.d);
      CHECK(std::abs(a.a - b.a) < 1e-6 * scale);
      CHECK(std::abs(a.b - b.b) < 1e-6 * scale);
      CHECK(std::abs(a.c - b.c) < 1e-6 * scale);
      CHECK(std::abs(a.d - b.d) < 1e-6 * scale);
    }
  }
}

TEST_CASE("saddle-center family") {
  CHECK_THROWS_AS(builtin_saddle_center(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(builtin_saddle_center(1.0, -1.0), ParameterError);

  SUBCASE("alpha = 1 is the integrable shear") {
    const TwistFamily f = builtin_saddle_center(1.0, 0.8);
    oracle::Dyadic g(16);
    for (int t = 0; t < 50; ++t) {
      const PlanePoint z{g.unit(), g.unit()};
      const PlanePoint w = f.forward(z);
      CHECK(w.phi == doctest::Approx(z.phi + z.i).epsilon(1e-14));
      CHECK(w.i == doctest::Approx(z.i).epsilon(1e-14));
    }
  }
  SUBCASE("alpha = 2, gamma = 1 at phi = 0: J = 4") {
    // unit-period coordinates divide both the angle and the action by pi
    const TwistFamily f = builtin_saddle_center(2.0, 1.0);
    const PlanePoint w = f.forward({0.0, 0.3});
    CHECK(w.i - 0.3 == doctest::Approx(std::log(4.0) / std::numbers::pi).epsilon(1e-14));
    CHECK(w.phi == doctest::Approx(w.i).epsilon(1e-14));
    CHECK(f.period_rescale() == std::numbers::pi);
  }
  SUBCASE("mu(phi + pi) = mu(phi) + pi") {
    const TwistFamily f = builtin_saddle_center(1.7, 0.4);
    for (double phi : {0.1, 0.3, 0.5, 0.77}) {
      const PlanePoint a = f.forward({phi, 0.0}), b = f.forward({phi + 1.0, 0.0});
      CHECK(b.phi - a.phi == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(b.i == doctest::Approx(a.i).epsilon(1e-14));
    }
  }
}

TEST_CASE("circle-diffeo family") {
  CHECK_THROWS_AS(builtin_circle_diffeo(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(builtin_circle_diffeo(0.0, -1.5), ParameterError);
  const PlanePoint w = builtin_circle_diffeo(0.0, 0.5).forward({0.0, 0.0});
  CHECK(w.i == doctest::Approx(-std::log(1.5)).epsilon(1e-15));
  CHECK(w.phi == doctest::Approx(-0.405465108108164).epsilon(1e-14));
  const PlanePoint r = builtin_circle_diffeo(0.0, 0.0).forward({0.25, 0.5});
  CHECK(r.phi == 0.75);
  CHECK(r.i == 0.5);
}

TEST_CASE("user circle diffeo agrees with the built-in one") {
  const double omega = 0.2, eps = 0.5;
  const TwistFamily a = builtin_circle_diffeo(omega, eps);
  const TwistFamily b = circle_diffeo_family(
      "arnold", [=](double x) { return x + omega + eps / kTwoPi * std::sin(kTwoPi * x); },
      [=](double x) { return 1.0 + eps * std::cos(kTwoPi * x); });
  oracle::Dyadic g(17);
  for (int t = 0; t < 50; ++t) {
    const PlanePoint z{g.unit(), g.range(-1, 1)};
    CHECK(sup(a.forward(z), b.forward(z)) < 1e-14);
    CHECK(sup(a.inverse(z), b.inverse(z)) < 1e-10);
  }
}

TEST_CASE("structure report") {
  const StructureReport r1 = check_structure(builtin_standard(1.0));
  CHECK(r1.min_twist == 1.0);
  CHECK(r1.max_dphi == doctest::Approx(2.0));
  REQUIRE(r1.deviation_angle);
  // cot(beta) = max |1 - k cos(2 pi phi)| = 1 + k
  CHECK(*r1.deviation_angle == doctest::Approx(std::atan(0.5)));
  CHECK(r1.drop_bound == doctest::Approx(1.0 / kTwoPi));
  CHECK(r1.inverse_residual < 1e-12);

  const StructureReport r10 = check_structure(builtin_standard(10.0));
  CHECK(r10.max_dphi == doctest::Approx(11.0));
  CHECK(check_structure(builtin_standard(0.0)).periodicity_residual == 0.0);

  for (const TwistFamily& f : shipped()) {
    const StructureReport r = check_structure(f, {32, 32});
    CHECK(r.min_twist > 0.0);
    CHECK(r.periodicity_residual < 1e-12);
    CHECK(r.inverse_residual < 1e-10);
  }
}

TEST_CASE("exactness flux") {
  CHECK(std::abs(check_exactness(builtin_standard(1.0), GraphLoop::constant(0.37)).flux) < 1e-8);
  CHECK(std::abs(check_exactness(builtin_circle_diffeo(0.2, 0.5), GraphLoop::constant(0.0)).flux) < 1e-8);
  CHECK(std::abs(check_exactness(builtin_saddle_center(2.0, 0.5), GraphLoop::constant(0.2)).flux) < 1e-8);
  CHECK(check_exactness(builtin_standard_shifted(1.0, 0.25), GraphLoop::constant(0.37)).flux ==
        doctest::Approx(0.25).epsilon(1e-10));

  SUBCASE("wavy loops") {
    std::vector<CylinderPoint> s;
    for (int j = 0; j < 16; ++j) {
      const double phi = j / 16.0;
      s.push_back({phi, 0.3 + 0.05 * std::sin(kTwoPi * phi) + 0.02 * std::cos(2 * kTwoPi * phi)});
    }
    const GraphLoop loop = GraphLoop::from_samples(s);
    CHECK(loop.height(0.3) == doctest::Approx(0.3 + 0.05 * std::sin(kTwoPi * 0.3) +
                                              0.02 * std::cos(2 * kTwoPi * 0.3)));
    CHECK(std::abs(check_exactness(builtin_standard(0.5), loop).flux) < 1e-8);
    CHECK(std::abs(check_exactness(builtin_circle_diffeo(0.2, 0.5), loop).flux) < 1e-8);
  }
  SUBCASE("contract") {
    CHECK_THROWS(check_exactness(builtin_standard(1.0), GraphLoop::constant(0), 7));
    const TwistFamily bare = user_family("bare", [](PlanePoint p) { return p; }, [](PlanePoint p) { return p; });
    CHECK_THROWS(check_exactness(bare, GraphLoop::constant(0)));
    CHECK_THROWS(GraphLoop::from_samples({{0, 0}, {0.5, 0}}));
  }
}

TEST_CASE("family keys identify parameters") {
  CHECK(builtin_standard(1.0).key() != builtin_standard(1.0 + 1e-15).key());
  CHECK(builtin_standard(2.5).key() == builtin_standard(2.5).key());
  CHECK(builtin_standard(2.5).param("k").value() == 2.5);
  CHECK_FALSE(builtin_standard(2.5).param("alpha").has_value());
}
