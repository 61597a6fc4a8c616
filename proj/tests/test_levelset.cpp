#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "torustwist/levelset.hpp"
#include "torustwist/parallel.hpp"

using namespace torustwist;

namespace {

double max_error(const std::vector<double>& v, const std::vector<double>& phis, auto&& reference) {
  double e = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) e = std::max(e, std::abs(v[j] - reference(phis[j])));
  return e;
}

}  // namespace

TEST_CASE("C(0, 1) of the standard map is the sinusoid I = (k / 2 pi) sin(2 pi phi)") {
  for (double k : {0.5, 1.0, 5.0}) {
    const LevelSetComponent c = compute_levelset(builtin_standard(k), 0, 1, 1024);
    const auto sinus = [k](double phi) { return oracle::standard_c01(k, phi); };
    CHECK(max_error(c.mu_minus, c.phis, sinus) < 1e-9);
    CHECK(max_error(c.mu_plus, c.phis, sinus) < 1e-9);
    CHECK(max_error(c.nu_minus, c.phis, [](double) { return 0.0; }) < 1e-9);
    CHECK(max_error(c.nu_plus, c.phis, [](double) { return 0.0; }) < 1e-9);
    for (const auto& roots : c.roots_per_phi) CHECK(roots.size() == 1);
  }
}

TEST_CASE("integrable shear level sets") {
  const TwistFamily f = builtin_standard(0.0);
  const LevelSetComponent c31 = compute_levelset(f, 3, 1, 64);
  CHECK(max_error(c31.mu_minus, c31.phis, [](double) { return 3.0; }) < 1e-12);
  CHECK(max_error(c31.mu_plus, c31.phis, [](double) { return 3.0; }) < 1e-12);
  const LevelSetComponent c12 = compute_levelset(f, 1, 2, 64);
  CHECK(max_error(c12.mu_minus, c12.phis, [](double) { return 0.5; }) < 1e-12);
  CHECK(max_error(c12.mu_plus, c12.phis, [](double) { return 0.5; }) < 1e-12);
  CHECK(verify_exchange(c31, f).max_residual < 1e-12);
}

TEST_CASE("invariants of computed components") {
  for (const TwistFamily& f : {builtin_standard(1.0), builtin_standard(5.0), builtin_circle_diffeo(0.2, 0.5),
                               builtin_saddle_center(1.8, 0.6)}) {
    for (int q : {1, 2, 3}) {
      const LevelSetComponent c = compute_levelset(f, 0, q, 128);
      for (std::size_t j = 0; j < c.phis.size(); ++j) {
        CHECK(c.mu_minus[j] <= c.mu_plus[j]);
        CHECK(c.nu_minus[j] <= c.nu_plus[j]);
        for (double r : c.roots_per_phi[j]) {
          const double g = eval_lift(f, {c.phis[j], r}, q).phi - c.phis[j];
          CHECK(std::abs(g) < 1e-12 * (1.0 + std::abs(r)) + 1e-12);
        }
      }
      const ExchangeReport ex = verify_exchange(c, f);
      CHECK(ex.max_residual < 1e-8);
      CHECK(ex.ordering_ok);
    }
  }
}

TEST_CASE("exchange identity checked by brute force on C(0, 2), k = 5") {
  const TwistFamily f = builtin_standard(5.0);
  const LevelSetComponent c = compute_levelset(f, 0, 2, 256);
  const double bound = c.root_tol * (1.0 + check_structure(f).max_dphi) * 10.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < c.phis.size(); ++j) {
    double top = -INFINITY, bottom = INFINITY;
    for (double r : c.roots_per_phi[j]) {
      const PlanePoint w = eval_lift(f, {c.phis[j], r}, 2);
      top = std::max(top, w.i);
      bottom = std::min(bottom, w.i);
    }
    const PlanePoint lo = eval_lift(f, {c.phis[j], c.mu_minus[j]}, 2);
    const PlanePoint hi = eval_lift(f, {c.phis[j], c.mu_plus[j]}, 2);
    worst = std::max({worst, std::abs(lo.phi - c.phis[j]), std::abs(lo.i - top), std::abs(hi.phi - c.phis[j]),
                      std::abs(hi.i - bottom)});
  }
  CHECK(worst < bound);
  CHECK(verify_exchange(c, f).max_residual < bound);
}

TEST_CASE("translation by the deck action") {
  const LevelSetComponent c = compute_levelset(builtin_standard(1.0), 0, 1, 64);
  const LevelSetComponent t = translate_component(c, -2);
  CHECK(t.p == -2);
  for (std::size_t j = 0; j < c.phis.size(); ++j) {
    CHECK(t.mu_minus[j] == doctest::Approx(oracle::standard_c01(1.0, c.phis[j]) - 2.0).epsilon(1e-12));
    CHECK(t.nu_plus[j] == c.nu_plus[j] - 2.0);
  }
  const LevelSetComponent same = translate_component(c, 0);
  CHECK(same.mu_minus == c.mu_minus);
  CHECK(same.p == c.p);

  const LevelSetComponent c31 = compute_levelset(builtin_standard(0.0), 3, 1, 32);
  const LevelSetComponent c41 = translate_component(c31, 1);
  CHECK(c41.p == 4);
  for (double m : c41.mu_plus) CHECK(m == doctest::Approx(4.0));

  // C(s + lN, N) computed directly agrees with the translate
  const TwistFamily f = builtin_standard(2.0);
  const LevelSetComponent a = compute_levelset(f, 1, 2, 64);
  const LevelSetComponent b = compute_levelset(f, 3, 2, 64);
  const LevelSetComponent at = translate_component(a, 1);
  for (std::size_t j = 0; j < a.phis.size(); ++j) CHECK(std::abs(at.mu_minus[j] - b.mu_minus[j]) < 1e-9);
}

TEST_CASE("components for different s are disjoint") {
  const TwistFamily f = builtin_standard(3.0);
  const LevelSetComponent a = compute_levelset(f, 0, 2, 64), b = compute_levelset(f, 1, 2, 64);
  for (std::size_t j = 0; j < a.phis.size(); ++j)
    for (double x : a.roots_per_phi[j])
      for (double y : b.roots_per_phi[j]) CHECK(std::abs(x - y) > 1e-9);
}

TEST_CASE("graph bound from the deviation angle") {
  for (double k : {0.5, 1.0, 2.0}) {
    const TwistFamily f = builtin_standard(k);
    const auto beta = check_structure(f).deviation_angle;
    REQUIRE(beta);
    const LevelSetComponent c = compute_levelset(f, 0, 1, 256);
    const auto [lo, hi] = std::minmax_element(c.mu_minus.begin(), c.mu_minus.end());
    CHECK(*hi - *lo <= 1.0 / std::tan(*beta) + 1e-9);
  }
}

TEST_CASE("image graph is monotone in phi") {
  const TwistFamily f = builtin_standard(0.7);
  const int q = 3;
  const LevelSetComponent c = compute_levelset(f, 1, q, 256);
  for (int n = 1; n <= q; ++n) {
    double prev = -INFINITY;
    for (std::size_t j = 0; j < c.phis.size(); ++j) {
      const double x = eval_lift(f, {c.phis[j], c.mu_minus[j]}, n).phi;
      CHECK(x >= prev - 1e-12);
      prev = x;
    }
  }
}

TEST_CASE("contract errors") {
  CHECK_THROWS(compute_levelset(builtin_standard(1.0), 0, 0, 64));
  CHECK_THROWS(compute_levelset(builtin_standard(1.0), 0, 1, 8));
  const TwistFamily flat = user_family("flat", [](PlanePoint p) { return PlanePoint{p.phi + 1e-9 * std::tanh(p.i), p.i}; },
                                       [](PlanePoint p) { return p; });
  LevelSetOptions o;
  o.drop_bound = 0.0;
  CHECK_THROWS_AS(solve_slice(flat, 5, 1, 0.0, initial_bracket(5, 1, 0.0), o), LevelSetBracketError);
}

TEST_CASE("parallel and serial computation agree bitwise") {
  const TwistFamily f = builtin_standard(4.0);
  const LevelSetComponent ref = serial::compute_levelset(f, 0, 2, 256);
  for (int w : {1, 2, 8}) {
    set_workers(w);
    const LevelSetComponent par = compute_levelset(f, 0, 2, 256);
    CHECK(par.roots_per_phi == ref.roots_per_phi);
    CHECK(par.nu_plus == ref.nu_plus);
    CHECK(par.cardinality_jumps == ref.cardinality_jumps);
  }
  set_workers(1);
}

TEST_CASE("cache returns identical components and persists them") {
  const auto dir = std::filesystem::temp_directory_path() / "torustwist_cache_test";
  std::filesystem::remove_all(dir);
  const TwistFamily f = builtin_standard(2.0);
  LevelSetCache cache(dir);
  const auto a = cache.get_or_compute(f, 0, 2, 64);
  const auto b = cache.get_or_compute(f, 0, 2, 64);
  CHECK(a.get() == b.get());
  CHECK(cache.size() == 1);

  LevelSetCache fresh(dir);
  const auto c = fresh.get_or_compute(f, 0, 2, 64);
  CHECK(c->roots_per_phi == a->roots_per_phi);
  CHECK(c->mu_minus == a->mu_minus);
  CHECK(c->nu_plus == a->nu_plus);
  CHECK(c->start_bracket.lo == a->start_bracket.lo);

  const std::string key = LevelSetCache::cache_key(f, 0, 2, 64, {});
  CHECK(key != LevelSetCache::cache_key(builtin_standard(2.0000001), 0, 2, 64, {}));
  CHECK(key != LevelSetCache::cache_key(f, 1, 2, 64, {}));
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.path().extension() == ".bin";
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}
