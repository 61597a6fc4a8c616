// Onset k_n of vertical (1, n)-orbits in a one-parameter family, found by
// bisection on a boolean existence oracle, and the limit estimate of k_n.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torustwist/maps.hpp"
#include "torustwist/solver.hpp"

namespace torustwist {

using FamilyAt = std::function<TwistFamily(double)>;

/// Fixed search budget of the existence oracle. A missed orbit delays
/// "true", so estimates are biased upwards by at most what this budget misses.
struct ThresholdBudget {
  int n_phi = 256;
  SolverOptions solver;
};

struct OracleResult {
  bool present = false;
  std::string diagnostic;  ///< non-empty when the search threw
};

OracleResult probe_vertical(const FamilyAt& f_at, double lambda, int k, int n, const ThresholdBudget& budget = {});
bool has_vertical(const FamilyAt& f_at, double lambda, int k, int n, const ThresholdBudget& budget = {});

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, bool lo, bool hi)
      : std::runtime_error(what), verdict_lo(lo), verdict_hi(hi) {}
  bool verdict_lo;
  bool verdict_hi;
};

struct ThresholdRecord {
  int n = 1;
  int k = 1;
  double lambda_n = 0.0;  ///< upper end of the final bracket
  double lo = 0.0;
  double hi = 0.0;
  double bracket_width = 0.0;
  int evaluations = 0;
  bool verdict_lo = false;
  bool verdict_hi = true;
  bool ok = true;
  std::string error;
  std::vector<std::string> diagnostics;
  ThresholdBudget budget;
};

ThresholdRecord bisect_threshold(const FamilyAt& f_at, int k, int n, double lo, double hi, double tol,
                                 const ThresholdBudget& budget = {});

enum class Extrapolation { None, Aitken };
const char* to_string(Extrapolation e);

struct CriticalEstimate {
  std::vector<ThresholdRecord> records;
  double kcr_estimate = 0.0;  ///< NaN when no record succeeded
  std::string extrapolation_method = "none";
  bool monotonicity_ok = true;
  std::vector<int> failed_n;
};

CriticalEstimate estimate_critical(const FamilyAt& f_at, int n_max, double lo, double hi, double tol,
                                   const ThresholdBudget& budget = {},
                                   Extrapolation extrapolation = Extrapolation::None);

namespace serial {
CriticalEstimate estimate_critical(const FamilyAt& f_at, int n_max, double lo, double hi, double tol,
                                   const ThresholdBudget& budget = {},
                                   Extrapolation extrapolation = Extrapolation::None);
}

/// Aitken delta-squared on the last three values; nullopt if fewer than
/// three or the second difference vanishes.
std::optional<double> aitken_limit(const std::vector<double>& seq);

struct CriticalGridRow {
  double gamma = 0.0;
  CriticalEstimate estimate;
};

/// Saddle-center critical alpha at each gamma (lambda = alpha).
std::vector<CriticalGridRow> saddle_center_critical_grid(const std::vector<double>& gammas, int n_max, double lo,
                                                         double hi, double tol, const ThresholdBudget& budget = {},
                                                         Extrapolation extrapolation = Extrapolation::None);

}  // namespace torustwist
