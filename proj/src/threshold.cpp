#include "torustwist/threshold.hpp"

#include <cmath>
#include <exception>
#include <limits>

namespace torustwist {

OracleResult probe_vertical(const FamilyAt& f_at, double lambda, int k, int n, const ThresholdBudget& budget) {
  OracleResult r;
  try {
    const TwistFamily f = f_at(lambda);
    r.present = find_vertical(f, k, n, residue_s_range(n), budget.n_phi, budget.solver).found();
  } catch (const std::exception& e) {
    r.present = false;
    r.diagnostic = e.what();
  }
  return r;
}

bool has_vertical(const FamilyAt& f_at, double lambda, int k, int n, const ThresholdBudget& budget) {
  return probe_vertical(f_at, lambda, k, n, budget).present;
}

ThresholdRecord bisect_threshold(const FamilyAt& f_at, int k, int n, double lo, double hi, double tol,
                                 const ThresholdBudget& budget) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(lo < hi)) throw std::invalid_argument("bracket needs lo < hi");
  ThresholdRecord rec;
  rec.n = n;
  rec.k = k;
  rec.budget = budget;
  auto probe = [&](double lambda) {
    ++rec.evaluations;
    OracleResult r = probe_vertical(f_at, lambda, k, n, budget);
    if (!r.diagnostic.empty()) rec.diagnostics.push_back("lambda=" + std::to_string(lambda) + ": " + r.diagnostic);
    return r.present;
  };

  if (tol < hi - lo) {
    const bool at_lo = probe(lo);
    const bool at_hi = probe(hi);
    if (at_lo || !at_hi) {
      throw BracketError("bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "] for n=" +
                             std::to_string(n) + " has verdicts (" + (at_lo ? "true" : "false") + ", " +
                             (at_hi ? "true" : "false") + ")",
                         at_lo, at_hi);
    }
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (probe(mid))
        hi = mid;
      else
        lo = mid;
    }
  }
  rec.lo = lo;
  rec.hi = hi;
  rec.lambda_n = hi;
  rec.bracket_width = hi - lo;
  return rec;
}

const char* to_string(Extrapolation e) { return e == Extrapolation::Aitken ? "aitken" : "none"; }

std::optional<double> aitken_limit(const std::vector<double>& seq) {
  if (seq.size() < 3) return std::nullopt;
  const double a = seq[seq.size() - 3], b = seq[seq.size() - 2], c = seq[seq.size() - 1];
  const double d2 = c - 2.0 * b + a;
  if (d2 == 0.0 || !std::isfinite(d2)) return std::nullopt;
  return c - (c - b) * (c - b) / d2;
}

namespace {

template <bool Parallel>
CriticalEstimate critical_impl(const FamilyAt& f_at, int n_max, double lo, double hi, double tol,
                               const ThresholdBudget& budget, Extrapolation extrapolation) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  CriticalEstimate est;
  est.records.resize(static_cast<std::size_t>(n_max));
#pragma omp parallel for schedule(dynamic) if (Parallel)
  for (int n = 1; n <= n_max; ++n) {
    ThresholdRecord rec;
    try {
      rec = bisect_threshold(f_at, 1, n, lo, hi, tol, budget);
    } catch (const BracketError& e) {
      rec.n = n;
      rec.lo = lo;
      rec.hi = hi;
      rec.lambda_n = std::numeric_limits<double>::quiet_NaN();
      rec.bracket_width = hi - lo;
      rec.evaluations = 2;
      rec.verdict_lo = e.verdict_lo;
      rec.verdict_hi = e.verdict_hi;
      rec.ok = false;
      rec.error = e.what();
      rec.budget = budget;
    }
    est.records[static_cast<std::size_t>(n - 1)] = std::move(rec);
  }

  std::vector<double> lambdas;
  for (const ThresholdRecord& r : est.records) {
    if (!r.ok) {
      est.failed_n.push_back(r.n);
      continue;
    }
    if (!lambdas.empty() && r.lambda_n > lambdas.back() + 2.0 * tol) est.monotonicity_ok = false;
    lambdas.push_back(r.lambda_n);
  }
  est.kcr_estimate = lambdas.empty() ? std::numeric_limits<double>::quiet_NaN() : lambdas.back();
  if (extrapolation == Extrapolation::Aitken && est.failed_n.empty()) {
    if (auto lim = aitken_limit(lambdas)) {
      est.kcr_estimate = *lim;
      est.extrapolation_method = "aitken";
    }
  }
  return est;
}

}  // namespace

CriticalEstimate estimate_critical(const FamilyAt& f_at, int n_max, double lo, double hi, double tol,
                                   const ThresholdBudget& budget, Extrapolation extrapolation) {
  return critical_impl<true>(f_at, n_max, lo, hi, tol, budget, extrapolation);
}

namespace serial {
CriticalEstimate estimate_critical(const FamilyAt& f_at, int n_max, double lo, double hi, double tol,
                                   const ThresholdBudget& budget, Extrapolation extrapolation) {
  return critical_impl<false>(f_at, n_max, lo, hi, tol, budget, extrapolation);
}
}  // namespace serial

std::vector<CriticalGridRow> saddle_center_critical_grid(const std::vector<double>& gammas, int n_max, double lo,
                                                         double hi, double tol, const ThresholdBudget& budget,
                                                         Extrapolation extrapolation) {
  std::vector<CriticalGridRow> rows(gammas.size());
  const long m = static_cast<long>(gammas.size());
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < m; ++j) {
    const double gamma = gammas[static_cast<std::size_t>(j)];
    FamilyAt f_at = [gamma](double alpha) { return builtin_saddle_center(alpha, gamma); };
    rows[static_cast<std::size_t>(j)] = {gamma, serial::estimate_critical(f_at, n_max, lo, hi, tol, budget,
                                                                          extrapolation)};
  }
  return rows;
}

}  // namespace torustwist
