#include "torustwist/ric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "torustwist/rotation.hpp"

namespace torustwist {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

struct SeedHits {
  std::optional<ClimbingHit> up, down;
};

SeedHits climb(const TwistFamily& f, long index, PlanePoint seed, double s, double l, long horizon) {
  SeedHits h;
  if (horizon < 2) return h;
  OrbitWalker walker(f, seed, 0.0, 0);
  try {
    for (long n = 1; n <= horizon && !(h.up && h.down); ++n) {
      walker.step();
      if (n < 2) continue;
      const double height = walker.current().i;
      if (!h.up && height > s) h.up = ClimbingHit{index, seed, n, height};
      if (!h.down && height < l) h.down = ClimbingHit{index, seed, n, height};
    }
  } catch (const DivergenceError&) {
  }
  return h;
}

template <bool Parallel>
std::optional<ClimbingWitness> climbing_impl(const TwistFamily& f, double s, double l, long horizon,
                                             const std::vector<PlanePoint>& seeds) {
  if (!(s > 0.0) || !(l < 0.0)) throw std::invalid_argument("climbing search needs s > 0 > l");
  const long n = static_cast<long>(seeds.size());
  std::vector<SeedHits> hits(seeds.size());
#pragma omp parallel for schedule(dynamic) if (Parallel)
  for (long j = 0; j < n; ++j)
    hits[static_cast<std::size_t>(j)] = climb(f, j, seeds[static_cast<std::size_t>(j)], s, l, horizon);

  // lowest seed index wins, independent of scheduling
  std::optional<ClimbingHit> up, down;
  for (const auto& h : hits) {
    if (!up && h.up) up = h.up;
    if (!down && h.down) down = h.down;
  }
  if (!up || !down) return std::nullopt;
  return ClimbingWitness{s, l, *up, *down};
}

}  // namespace

const char* to_string(RicVerdictKind v) {
  return v == RicVerdictKind::NoRicWitnessed ? "no_ric_witnessed" : "inconclusive";
}

std::vector<PlanePoint> band_seeds(std::size_t count, std::uint64_t rng_seed) {
  constexpr double plastic = 1.32471795724474602596;
  constexpr double a1 = 1.0 / plastic, a2 = 1.0 / (plastic * plastic);
  std::uint64_t state = rng_seed;
  const double u = unit_double(splitmix64(state));
  const double v = unit_double(splitmix64(state));
  std::vector<PlanePoint> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double n = static_cast<double>(j + 1);
    out.push_back({mod1(u + n * a1), mod1(v + n * a2)});
  }
  return out;
}

std::optional<ClimbingWitness> find_climbing_orbit(const TwistFamily& f, double s, double l, long horizon,
                                                   const std::vector<PlanePoint>& seeds) {
  return climbing_impl<true>(f, s, l, horizon, seeds);
}

std::optional<ClimbingWitness> find_climbing_orbit(const TwistFamily& f, double s, double l, long horizon,
                                                   std::size_t n_seeds, std::uint64_t rng_seed) {
  return climbing_impl<true>(f, s, l, horizon, band_seeds(n_seeds, rng_seed));
}

namespace serial {
std::optional<ClimbingWitness> find_climbing_orbit(const TwistFamily& f, double s, double l, long horizon,
                                                   const std::vector<PlanePoint>& seeds) {
  return climbing_impl<false>(f, s, l, horizon, seeds);
}
}  // namespace serial

bool validate_climbing(const TwistFamily& f, const ClimbingWitness& w) {
  auto height_after = [&f](PlanePoint seed, long steps) {
    OrbitWalker walker(f, seed, 0.0, 0);
    for (long n = 0; n < steps; ++n) walker.step();
    return walker.current().i;
  };
  if (w.up.steps < 2 || w.down.steps < 2) return false;
  if (w.up.seed.i < 0.0 || w.up.seed.i > 1.0 || w.down.seed.i < 0.0 || w.down.seed.i > 1.0) return false;
  return height_after(w.up.seed, w.up.steps) > w.s && height_after(w.down.seed, w.down.steps) < w.l;
}

RicVerdict ric_witness(const TwistFamily& f, const RicBudget& budget, const SolverOptions& opts) {
  RicVerdict v;
  v.budget = budget;
  if (f.density()) v.exactness_residual = check_exactness(f, GraphLoop::constant(0.5)).flux;

  for (int n = 1; n <= budget.n_max; ++n) {
    for (int k : {1, -1}) {
      ++v.effort.vertical_searches;
      SearchResult r = find_vertical(f, k, n, residue_s_range(n), budget.n_phi, opts);
      if (r.found()) {
        v.verdict = RicVerdictKind::NoRicWitnessed;
        v.orbit_witness = r.orbits.front();
        return v;
      }
    }
  }

  // Climbing orbits shadow unstable manifolds: start next to the hyperbolic
  // fixed points, then fill the band.
  std::vector<PlanePoint> seeds;
  for (const OrbitRecord& o : find_birkhoff(f, 0, 1, budget.n_phi, opts).orbits) {
    const Mat2 j = f.jacobian(o.anchor);
    const double tr = j.trace(), det = j.det();
    const double disc = tr * tr / 4.0 - det;
    if (disc <= 0.0 || std::abs(tr) <= 2.0) continue;
    const double lambda = tr / 2.0 + (tr > 0 ? 1.0 : -1.0) * std::sqrt(disc);
    // eigenvector (b, lambda - a) of [[a, b], [c, d]]
    double ex = j.b, ey = lambda - j.a;
    const double norm = std::hypot(ex, ey);
    if (norm == 0.0) continue;
    ex /= norm, ey /= norm;
    const TorusPoint base = project_torus({o.anchor.phi + 1e-8 * ex, o.anchor.i + 1e-8 * ey});
    seeds.push_back(lift(base));
  }
  for (const PlanePoint& p : band_seeds(budget.n_seeds, budget.rng_seed)) seeds.push_back(p);
  v.effort.seeds_iterated = seeds.size();
  if (auto w = find_climbing_orbit(f, budget.climb_s, budget.climb_l, budget.horizon, seeds)) {
    v.verdict = RicVerdictKind::NoRicWitnessed;
    v.climbing_witness = *w;
  }
  return v;
}

bool validate_verdict(const TwistFamily& f, const RicVerdict& v, double refine_tol) {
  if (v.verdict == RicVerdictKind::Inconclusive) return true;
  if (v.orbit_witness) {
    const OrbitRecord& o = *v.orbit_witness;
    return o.k != 0 && orbit_residual(f, o.anchor, o.s, o.k, o.n) < refine_tol;
  }
  if (v.climbing_witness) return validate_climbing(f, *v.climbing_witness);
  return false;
}

LipschitzCheck lipschitz_graph_check(const std::vector<CylinderPoint>& samples, double beta) {
  if (samples.size() < 3) throw std::invalid_argument("Lipschitz check needs at least 3 samples");
  if (!(beta > 0.0 && beta < std::numbers::pi / 2)) throw std::invalid_argument("beta must lie in (0, pi/2)");
  const double cot = 1.0 / std::tan(beta);
  LipschitzCheck out;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const bool wrap = j + 1 == samples.size();
    const CylinderPoint& a = samples[j];
    const CylinderPoint& b = samples[wrap ? 0 : j + 1];
    const double dphi = b.phi - a.phi + (wrap ? 1.0 : 0.0);
    if (b.i - a.i < -cot * dphi - 1e-12) {
      out.plausible = false;
      out.violation_index = j;
      break;
    }
  }
  return out;
}

}  // namespace torustwist
