// Periodic orbits found along the mu- graph of C(s, N).
//
// On that graph the vertical displacement Delta(phi) = nu+(phi) - mu-(phi)
// is the largest one reachable on C(s, N). Its zeros are Birkhoff (s, N)
// orbits and its crossings of k are vertical (s, k, N) orbits, i.e. points
// with T^N(z) = z + (s, k). Crossings are bisected in phi (re-solving mu- at
// every trial angle) and polished by damped Newton on the lift.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torustwist/levelset.hpp"
#include "torustwist/maps.hpp"

namespace torustwist {

enum class OrbitKind { Birkhoff, Vertical };
const char* to_string(OrbitKind k);

struct Rational {
  long num = 0;
  long den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct OrbitRecord {
  OrbitKind kind = OrbitKind::Birkhoff;
  int s = 0;
  int k = 0;
  int n = 1;
  std::vector<TorusPoint> points;
  PlanePoint anchor;
  double residual = 0.0;
  bool minimal = true;      ///< the n torus points are pairwise distinct
  bool refined = true;      ///< Newton converged (false: bisection point kept as is)
  bool degenerate = false;  ///< picked from a curve of periodic points (Delta constant)

  Rational rho_v() const { return {k, n}; }
};

struct SolverOptions {
  double refine_tol = 1e-11;
  int max_iter = 50;
  double distinct_tol = 1e-6;
  double degenerate_tol = 1e-12;
  double bisect_tol = 1e-13;  ///< |Delta - k| at which phi bisection stops
  int max_extrema = 8;        ///< near-miss extrema of Delta refined by golden section
  LevelSetOptions levelset;
};

struct NewtonResult {
  PlanePoint point;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool singular = false;
};

/// ||T^n(z) - z - (s, k)||_inf evaluated from scratch.
double orbit_residual(const TwistFamily& f, PlanePoint z, int s, int k, int n);

NewtonResult newton_refine(const TwistFamily& f, PlanePoint guess, int s, int k, int n, double tol = 1e-11,
                           int max_iter = 50);

/// Delta(phi) = p2 T^N(phi, mu-(phi)) - mu-(phi) with mu- re-solved at phi.
double vertical_displacement(const TwistFamily& f, const LevelSetComponent& c, double phi,
                             const LevelSetOptions& opts = {});

struct SearchResult {
  std::vector<OrbitRecord> orbits;
  bool degenerate = false;
  int candidates = 0;  ///< crossings examined
  int rejected = 0;    ///< crossings whose refinement missed refine_tol

  bool found() const { return !orbits.empty(); }
};

struct SRange {
  int lo = 0;
  int hi = 0;
};

/// ceil(N I_min) - 1 ... floor(N I_max) + 1 with (I_min, I_max) = (-2, 2).
SRange default_s_range(int n);
/// {0, ..., n - 1}: every C(s, n) is an integer translate of one of these.
SRange residue_s_range(int n);

SearchResult find_birkhoff(const TwistFamily& f, int s, int n, int n_phi, const SolverOptions& opts = {},
                           LevelSetCache* cache = nullptr);

SearchResult find_vertical(const TwistFamily& f, int k, int n, std::optional<SRange> s_range, int n_phi,
                           const SolverOptions& opts = {}, LevelSetCache* cache = nullptr);

struct SpectrumEntry {
  int k = 0;
  int n = 1;
  SearchResult result;
};

/// Searches every target k'/N' with 0 < |k'/N'| < |rho_V(found)| and the same sign.
std::vector<SpectrumEntry> intermediate_spectrum(const TwistFamily& f, const OrbitRecord& found,
                                                 const std::vector<std::pair<int, int>>& targets, int n_phi,
                                                 const SolverOptions& opts = {}, LevelSetCache* cache = nullptr);

}  // namespace torustwist
