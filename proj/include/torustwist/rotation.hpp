// Finite-horizon rotation vectors and vertical rotation numbers.
//
// A lifted orbit of a TQ map either stays in a horizontal band, and has a
// rotation vector (omega, 0) whose first entry is taken mod 1, or escapes
// vertically with rotation vector (+-inf, rho_V). The estimators below decide
// between the two with explicit finite-horizon thresholds and answer
// Undetermined when neither test is conclusive.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "torustwist/covering.hpp"
#include "torustwist/maps.hpp"
#include "torustwist/parallel.hpp"

namespace torustwist {

enum class RotationCase { BoundedHorizontal, VerticalEscapePlus, VerticalEscapeMinus, Undetermined };
enum class OrbitClass { Case1, Case2, Undetermined };

const char* to_string(RotationCase c);
const char* to_string(OrbitClass c);

struct RotationOptions {
  double bounded_threshold = 10.0;  ///< Case 1 candidate when max - min of I stays below this
  double escape_threshold = 5.0;    ///< Case 2 candidate when |I_N - I_0| exceeds this
  long min_decisive_horizon = 100;  ///< shorter horizons never classify as Case 1
  double closure_tol = 1e-10;       ///< torus distance that counts as a return to the seed
};

struct RotationEstimate {
  RotationCase case_tag = RotationCase::Undetermined;
  double horizontal = 0.0;  ///< in [0, 1) for Case 1, +-inf on escape, NaN otherwise
  double vertical = 0.0;    ///< (I_N - I_0) / N
  long horizon = 0;
  double tail_spread = 0.0;
  double i_range = 0.0;
  bool cesaro_monotone = false;   ///< horizontal partial averages monotone over the final window
  std::optional<long> closure_period;
  bool diverged = false;
};

/// Steps a lifted orbit as torus representative + exact deck index. When the
/// torus orbit returns to its seed within closure_tol the walker continues
/// the cycle by deck arithmetic, so periodic orbits are followed exactly even
/// when they are hyperbolic.
class OrbitWalker {
 public:
  OrbitWalker(const TwistFamily& f, PlanePoint start, double closure_tol = 1e-10, long max_closure_period = 4096);

  PlanePoint current() const { return current_.plane(); }
  const SheetPoint& sheet() const { return current_; }
  long steps() const { return steps_; }
  std::optional<long> closure_period() const;

  void step();

 private:
  const TwistFamily* f_;
  double closure_tol_;
  long max_closure_period_;
  long steps_ = 0;
  SheetPoint current_;
  std::vector<SheetPoint> history_;
  bool closed_ = false;
  Deck cycle_shift_;   // T^m(z0) = z0 + cycle_shift_
  Deck period_offset_; // T^{qm}(z0) = z0 + period_offset_
  long phase_ = 0;
};

/// [start, T(start), ..., T^horizon(start)].
std::vector<PlanePoint> orbit_segment(const TwistFamily& f, PlanePoint start, long horizon,
                                      double closure_tol = 1e-10);

RotationEstimate estimate_rotation(const TwistFamily& f, PlanePoint start, long horizon, long window,
                                   const RotationOptions& opts = {});

OrbitClass classify_orbit(const RotationEstimate& e, const RotationOptions& opts = {});

/// One estimate per seed, OpenMP over seeds.
std::vector<RotationEstimate> estimate_rotations(const TwistFamily& f, std::span<const PlanePoint> seeds,
                                                 long horizon, long window, const RotationOptions& opts = {});

namespace serial {
std::vector<RotationEstimate> estimate_rotations(const TwistFamily& f, std::span<const PlanePoint> seeds,
                                                 long horizon, long window, const RotationOptions& opts = {});
}

}  // namespace torustwist
