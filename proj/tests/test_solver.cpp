#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "torustwist/parallel.hpp"
#include "torustwist/solver.hpp"

using namespace torustwist;
using oracle::kTwoPi;

namespace {

// Independent residual: plain iteration of the reference formula.
double reference_residual(double k, PlanePoint z, int s, int kv, int n) {
  oracle::Pt w{z.phi, z.i};
  for (int j = 0; j < n; ++j) w = oracle::standard(k, w);
  return std::max(std::abs(w.phi - z.phi - s), std::abs(w.i - z.i - kv));
}

}  // namespace

TEST_CASE("vertical displacement along C(s, N)") {
  const TwistFamily f1 = builtin_standard(1.0);
  const LevelSetComponent c = compute_levelset(f1, 0, 1, 64);
  CHECK(std::abs(vertical_displacement(f1, c, 0.0)) < 1e-12);
  CHECK(vertical_displacement(f1, c, 0.25) == doctest::Approx(-1.0 / kTwoPi).epsilon(1e-10));
  const TwistFamily f0 = builtin_standard(0.0);
  const LevelSetComponent c3 = compute_levelset(f0, 3, 1, 32);
  for (double phi : {0.0, 0.123, 0.5, 0.9}) CHECK(std::abs(vertical_displacement(f0, c3, phi)) < 1e-12);
}

TEST_CASE("Birkhoff fixed points of the standard map") {
  const SearchResult r = find_birkhoff(builtin_standard(1.0), 0, 1, 512);
  REQUIRE(r.orbits.size() == 2);
  CHECK(std::abs(r.orbits[0].anchor.phi) < 1e-10);
  CHECK(std::abs(r.orbits[1].anchor.phi - 0.5) < 1e-10);
  for (const OrbitRecord& o : r.orbits) {
    CHECK(std::abs(o.anchor.i) < 1e-10);
    CHECK(o.residual < 1e-10);
    CHECK(o.kind == OrbitKind::Birkhoff);
    CHECK(o.k == 0);
    CHECK(o.points.size() == 1);
  }
}

TEST_CASE("Birkhoff (1, 3) orbit at k = 0.5") {
  const double k = 0.5;
  const SearchResult r = find_birkhoff(builtin_standard(k), 1, 3, 512);
  REQUIRE(r.found());
  for (const OrbitRecord& o : r.orbits) {
    CHECK(reference_residual(k, o.anchor, 1, 0, 3) < 1e-10);
    CHECK(o.minimal);
    CHECK(o.points.size() == 3);
  }
  // independent check: direct minimisation of the residual over a seed grid finds the same size of residual
  double best = INFINITY;
  PlanePoint arg{};
  for (int a = 0; a < 200; ++a)
    for (int b = 0; b < 200; ++b) {
      const PlanePoint z{a / 200.0, 0.2 + 0.3 * b / 200.0};
      const double res = reference_residual(k, z, 1, 0, 3);
      if (res < best) best = res, arg = z;
    }
  bool near = false;
  for (const OrbitRecord& o : r.orbits)
    for (const TorusPoint& p : o.points) near = near || torus_distance(lift(p), arg) < 0.02;
  CHECK(near);
}

TEST_CASE("degenerate curve of periodic points") {
  const SearchResult r = find_birkhoff(builtin_standard(0.0), 1, 2, 64);
  CHECK(r.degenerate);
  REQUIRE(r.found());
  CHECK(r.orbits[0].degenerate);
  CHECK(r.orbits[0].residual == 0.0);
  CHECK(r.orbits[0].anchor.i == doctest::Approx(0.5));
}

TEST_CASE("vertical fixed points at k = 10 match the closed form") {
  const double k = 10.0;
  const SearchResult r = find_vertical(builtin_standard(k), 1, 1, std::nullopt, 512);
  REQUIRE(r.orbits.size() == 2);
  const auto [a, b] = oracle::vertical_fixed_angles(k);
  CHECK(std::abs(r.orbits[0].anchor.phi - a) < 1e-8);
  CHECK(std::abs(r.orbits[1].anchor.phi - b) < 1e-8);
  for (const OrbitRecord& o : r.orbits) {
    CHECK(o.s == 1);
    CHECK(o.k == 1);
    CHECK(o.residual < 1e-12);
    CHECK(reference_residual(k, o.anchor, o.s, 1, 1) < 1e-12);
    CHECK(std::abs(std::sin(kTwoPi * o.anchor.phi) + kTwoPi / k) < 1e-8);
    CHECK(o.rho_v() == Rational{1, 1});
  }
}

TEST_CASE("marginal vertical orbit at k = 2 pi") {
  const SearchResult r = find_vertical(builtin_standard(2.0 * std::numbers::pi), 1, 1, std::nullopt, 512);
  REQUIRE(r.orbits.size() == 1);
  CHECK(r.orbits[0].anchor.phi == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(std::abs(r.orbits[0].anchor.i) < 1e-6);
  CHECK(r.orbits[0].s == 1);
}

TEST_CASE("no vertical orbits for the integrable shear") {
  for (int n : {1, 2, 3}) CHECK_FALSE(find_vertical(builtin_standard(0.0), 1, n, std::nullopt, 64).found());
  CHECK_THROWS(find_vertical(builtin_standard(1.0), 0, 1, std::nullopt, 64));
}

TEST_CASE("newton refinement") {
  const TwistFamily f = builtin_standard(10.0);
  const NewtonResult r = newton_refine(f, {0.89, 0.0}, 1, 1, 1);
  CHECK(r.converged);
  CHECK(r.residual < 1e-12);
  CHECK(r.point.phi == doctest::Approx(oracle::vertical_fixed_angles(10.0).second).epsilon(1e-12));
  const NewtonResult again = newton_refine(f, r.point, 1, 1, 1);
  CHECK(again.iterations == 0);
  CHECK(again.residual == r.residual);
  const NewtonResult none = newton_refine(builtin_standard(0.0), {0.3, 0.5}, 1, 1, 1);
  CHECK_FALSE(none.converged);
  CHECK_THROWS(newton_refine(f, {0.89, 0.0}, 1, 1, 1, 0.0));
}

TEST_CASE("translation covariance and rho_V consistency") {
  const double k = 10.0;
  const TwistFamily f = builtin_standard(k);
  const SearchResult r = find_vertical(f, 1, 2, residue_s_range(2), 256);
  REQUIRE(r.found());
  for (const OrbitRecord& o : r.orbits) {
    CHECK(orbit_residual(f, o.anchor, o.s, o.k, o.n) < 1e-11);
    const PlanePoint up{o.anchor.phi, o.anchor.i + 1.0};
    CHECK(orbit_residual(f, up, o.s + o.n, o.k, o.n) < 1e-9);
    CHECK(reference_residual(k, up, o.s + o.n, o.k, o.n) < 1e-9);
  }
}

TEST_CASE("intermediate spectrum below rho_V = 1 at k = 10") {
  const TwistFamily f = builtin_standard(10.0);
  const SearchResult base = find_vertical(f, 1, 1, std::nullopt, 256);
  REQUIRE(base.found());
  const auto spec = intermediate_spectrum(f, base.orbits.front(), {{1, 2}, {1, 3}}, 256);
  REQUIRE(spec.size() == 2);
  for (const SpectrumEntry& e : spec) {
    REQUIRE(e.result.found());
    for (const OrbitRecord& o : e.result.orbits) {
      CHECK(reference_residual(10.0, o.anchor, o.s, o.k, o.n) < 1e-8);
      CHECK(o.rho_v() == Rational{e.k, e.n});
    }
  }
  CHECK(intermediate_spectrum(f, base.orbits.front(), {}, 256).empty());
  CHECK_THROWS_AS(intermediate_spectrum(f, base.orbits.front(), {{1, 1}}, 256), std::invalid_argument);
  CHECK_THROWS_AS(intermediate_spectrum(f, base.orbits.front(), {{-1, 2}}, 256), std::invalid_argument);
  CHECK_THROWS_AS(intermediate_spectrum(f, base.orbits.front(), {{3, 2}}, 256), std::invalid_argument);
}

TEST_CASE("monotone nesting at desk scale") {
  const TwistFamily f = builtin_standard(4.5);
  const SearchResult half = find_vertical(f, 1, 2, residue_s_range(2), 256);
  REQUIRE(half.found());
  CHECK(find_vertical(f, 1, 3, residue_s_range(3), 256).found());
  CHECK(find_vertical(f, 1, 4, residue_s_range(4), 256).found());
}

TEST_CASE("s ranges") {
  CHECK(default_s_range(1).lo == -3);
  CHECK(default_s_range(1).hi == 3);
  CHECK(default_s_range(3).lo == -7);
  CHECK(residue_s_range(4).lo == 0);
  CHECK(residue_s_range(4).hi == 3);
}

TEST_CASE("results do not depend on the worker count") {
  const TwistFamily f = builtin_standard(6.0);
  set_workers(1);
  const SearchResult ref = find_vertical(f, 1, 2, std::nullopt, 128);
  for (int w : {2, 8}) {
    set_workers(w);
    const SearchResult r = find_vertical(f, 1, 2, std::nullopt, 128);
    REQUIRE(r.orbits.size() == ref.orbits.size());
    for (std::size_t j = 0; j < r.orbits.size(); ++j) {
      CHECK(r.orbits[j].anchor == ref.orbits[j].anchor);
      CHECK(r.orbits[j].s == ref.orbits[j].s);
    }
  }
  set_workers(1);
}

TEST_CASE("cache does not change results") {
  const TwistFamily f = builtin_standard(10.0);
  LevelSetCache cache;
  const SearchResult a = find_vertical(f, 1, 2, residue_s_range(2), 128, {}, &cache);
  const SearchResult b = find_vertical(f, 1, 2, residue_s_range(2), 128);
  REQUIRE(a.orbits.size() == b.orbits.size());
  for (std::size_t j = 0; j < a.orbits.size(); ++j) CHECK(a.orbits[j].anchor == b.orbits[j].anchor);
  CHECK(cache.size() == 2);
}
