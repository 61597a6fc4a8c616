// One-sided tests for rotational invariant circles (R.I.C.s).
//
// A vertical periodic orbit or a pair of orbits climbing above s and falling
// below l is a finite certificate that no R.I.C. exists. The converse can not
// be certified numerically, so a failed search is reported as Inconclusive.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "torustwist/maps.hpp"
#include "torustwist/solver.hpp"

namespace torustwist {

struct ClimbingHit {
  long seed_index = 0;
  PlanePoint seed;
  long steps = 0;        ///< n_P or n_Q, always >= 2
  double height = 0.0;   ///< p2 after `steps` iterates
};

struct ClimbingWitness {
  double s = 0.0;
  double l = 0.0;
  ClimbingHit up;    ///< p2 T^{n_P}(P) > s
  ClimbingHit down;  ///< p2 T^{n_Q}(Q) < l
};

/// Low-discrepancy seeds in S^1 x [0, 1): the R2 sequence with a
/// Cranley-Patterson shift drawn from rng_seed.
std::vector<PlanePoint> band_seeds(std::size_t count, std::uint64_t rng_seed);

std::optional<ClimbingWitness> find_climbing_orbit(const TwistFamily& f, double s, double l, long horizon,
                                                   const std::vector<PlanePoint>& seeds);
std::optional<ClimbingWitness> find_climbing_orbit(const TwistFamily& f, double s, double l, long horizon,
                                                   std::size_t n_seeds, std::uint64_t rng_seed);

namespace serial {
std::optional<ClimbingWitness> find_climbing_orbit(const TwistFamily& f, double s, double l, long horizon,
                                                   const std::vector<PlanePoint>& seeds);
}

/// Re-iterates both seeds and checks the recorded hitting times.
bool validate_climbing(const TwistFamily& f, const ClimbingWitness& w);

enum class RicVerdictKind { NoRicWitnessed, Inconclusive };
const char* to_string(RicVerdictKind v);

struct RicBudget {
  int n_max = 8;
  long horizon = 100000;
  std::size_t n_seeds = 256;
  std::uint64_t rng_seed = 0;
  double climb_s = 3.0;
  double climb_l = -3.0;
  int n_phi = 512;
};

struct RicEffort {
  int vertical_searches = 0;
  std::size_t seeds_iterated = 0;
};

struct RicVerdict {
  RicVerdictKind verdict = RicVerdictKind::Inconclusive;
  std::optional<OrbitRecord> orbit_witness;
  std::optional<ClimbingWitness> climbing_witness;
  RicEffort effort;
  RicBudget budget;
  std::optional<double> exactness_residual;  ///< flux through I = 1/2; large values void the guarantee
};

RicVerdict ric_witness(const TwistFamily& f, const RicBudget& budget = {}, const SolverOptions& opts = {});

/// Re-checks a verdict's witness from scratch.
bool validate_verdict(const TwistFamily& f, const RicVerdict& v, double refine_tol = 1e-11);

struct LipschitzCheck {
  bool plausible = true;
  std::optional<std::size_t> violation_index;  ///< first i with a too steep drop from sample i to i + 1
};

/// One-sided Lipschitz bound I(phi') - I(phi) >= -cot(beta) (phi' - phi) on
/// consecutive samples of a closed loop (the last pair wraps through phi + 1).
LipschitzCheck lipschitz_graph_check(const std::vector<CylinderPoint>& samples, double beta);

}  // namespace torustwist
