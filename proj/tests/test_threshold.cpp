#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "oracles.hpp"
#include "torustwist/parallel.hpp"
#include "torustwist/solver.hpp"
#include "torustwist/threshold.hpp"

using namespace torustwist;

namespace {

const FamilyAt standard = [](double k) { return builtin_standard(k); };

ThresholdBudget light() {
  ThresholdBudget b;
  b.n_phi = 128;
  return b;
}

}  // namespace

TEST_CASE("existence oracle") {
  CHECK(has_vertical(standard, 10.0, 1, 1));
  CHECK_FALSE(has_vertical(standard, 5.0, 1, 1));
  for (int n : {1, 2, 3}) CHECK_FALSE(has_vertical(standard, 0.0, 1, n));
  const FamilyAt broken = [](double a) { return builtin_saddle_center(a, 1.0); };
  const OracleResult r = probe_vertical(broken, -1.0, 1, 1);
  CHECK_FALSE(r.present);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("onset of the (1, 1) orbit is 2 pi") {
  const ThresholdRecord r = bisect_threshold(standard, 1, 1, 5.0, 8.0, 1e-6);
  CHECK(std::abs(r.lambda_n - 2.0 * std::numbers::pi) < 1e-6);
  CHECK(r.bracket_width <= 1e-6);
  CHECK_FALSE(r.verdict_lo);
  CHECK(r.verdict_hi);
  CHECK(r.lo < 2.0 * std::numbers::pi);
  CHECK(r.hi >= 2.0 * std::numbers::pi - 1e-12);
  CHECK(r.evaluations == 2 + static_cast<int>(std::ceil(std::log2(3.0 / 1e-6))));
}

TEST_CASE("bracket contract") {
  try {
    bisect_threshold(standard, 1, 1, 7.0, 8.0, 1e-3);
    FAIL("expected a bracket error");
  } catch (const BracketError& e) {
    CHECK(e.verdict_lo);
    CHECK(e.verdict_hi);
  }
  CHECK_THROWS_AS(bisect_threshold(standard, 1, 1, 1.0, 2.0, 1e-3), BracketError);
  const ThresholdRecord quick = bisect_threshold(standard, 1, 1, 5.0, 8.0, 10.0);
  CHECK(quick.evaluations == 0);
  CHECK(quick.lo == 5.0);
  CHECK(quick.hi == 8.0);
  CHECK_THROWS(bisect_threshold(standard, 1, 1, 8.0, 5.0, 1e-3));
  CHECK_THROWS(bisect_threshold(standard, 1, 1, 5.0, 8.0, 0.0));
}

TEST_CASE("critical estimate") {
  SUBCASE("n_max = 1 gives 2 pi") {
    const CriticalEstimate e = estimate_critical(standard, 1, 5.0, 8.0, 1e-6);
    REQUIRE(e.records.size() == 1);
    CHECK(std::abs(e.kcr_estimate - 2.0 * std::numbers::pi) < 1e-6);
    CHECK(e.extrapolation_method == "none");
  }
  SUBCASE("nonincreasing onsets") {
    const CriticalEstimate e = estimate_critical(standard, 3, 0.9, 8.0, 1e-2, light());
    REQUIRE(e.records.size() == 3);
    CHECK(e.failed_n.empty());
    CHECK(e.monotonicity_ok);
    for (std::size_t j = 1; j < e.records.size(); ++j) {
      CHECK(e.records[j].n == e.records[j - 1].n + 1);
      CHECK(e.records[j].lambda_n <= e.records[j - 1].lambda_n + 2e-2);
    }
    CHECK(e.kcr_estimate == e.records.back().lambda_n);
  }
  SUBCASE("no vertical orbits anywhere flags every n") {
    const CriticalEstimate e = estimate_critical(standard, 2, 0.0, 0.5, 1e-2, light());
    CHECK(e.failed_n == std::vector<int>{1, 2});
    CHECK(std::isnan(e.kcr_estimate));
    for (const ThresholdRecord& r : e.records) {
      CHECK_FALSE(r.ok);
      CHECK_FALSE(r.error.empty());
    }
  }
}

TEST_CASE("onsets up to n = 6 are nonincreasing and witnessed") {
  const CriticalEstimate e = estimate_critical(standard, 6, 0.9, 8.0, 1e-4);
  REQUIRE(e.records.size() == 6);
  CHECK(e.failed_n.empty());
  CHECK(e.monotonicity_ok);
  for (std::size_t j = 1; j < e.records.size(); ++j) CHECK(e.records[j].lambda_n <= e.records[j - 1].lambda_n);
  for (const ThresholdRecord& r : e.records) {
    const SearchResult found = find_vertical(builtin_standard(r.hi), 1, r.n, residue_s_range(r.n), 256);
    REQUIRE(found.found());
    const OrbitRecord& o = found.orbits.front();
    oracle::Pt z{o.anchor.phi, o.anchor.i};
    for (int j = 0; j < r.n; ++j) z = oracle::standard(r.hi, z);
    CHECK(std::abs(z.phi - o.anchor.phi - o.s) < 1e-9);
    CHECK(std::abs(z.i - o.anchor.i - 1.0) < 1e-9);
  }
}

TEST_CASE("Aitken extrapolation") {
  // geometric sequence a + b r^n has the exact limit a
  std::vector<double> s;
  for (int n = 0; n < 5; ++n) s.push_back(1.0 + 0.5 * std::pow(0.6, n));
  CHECK(aitken_limit(s).value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(aitken_limit({1.0, 2.0}).has_value());
  CHECK_FALSE(aitken_limit({1.0, 2.0, 3.0}).has_value());

  const CriticalEstimate e = estimate_critical(standard, 3, 0.9, 8.0, 1e-2, light(), Extrapolation::Aitken);
  if (e.extrapolation_method == "aitken") CHECK(std::isfinite(e.kcr_estimate));
}

TEST_CASE("parallel and serial estimates are bitwise identical") {
  const CriticalEstimate ref = serial::estimate_critical(standard, 3, 0.9, 8.0, 1e-2, light());
  for (int w : {1, 4, 8}) {
    set_workers(w);
    const CriticalEstimate par = estimate_critical(standard, 3, 0.9, 8.0, 1e-2, light());
    REQUIRE(par.records.size() == ref.records.size());
    for (std::size_t j = 0; j < ref.records.size(); ++j) {
      CHECK(std::memcmp(&par.records[j].lambda_n, &ref.records[j].lambda_n, sizeof(double)) == 0);
      CHECK(par.records[j].evaluations == ref.records[j].evaluations);
    }
  }
  set_workers(1);
}

TEST_CASE("saddle-center critical grid") {
  ThresholdBudget b = light();
  const auto rows = saddle_center_critical_grid({0.5, 1.0}, 1, 1.0, 8.0, 0.5, b);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].gamma == 0.5);
  CHECK(rows[1].gamma == 1.0);
  for (const auto& r : rows) CHECK(r.estimate.records.size() == 1);
}
