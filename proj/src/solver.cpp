#include "torustwist/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torustwist {

const char* to_string(OrbitKind k) { return k == OrbitKind::Birkhoff ? "birkhoff" : "vertical"; }

namespace {

struct Evaluation {
  PlanePoint g;  // T^n(z) - z - (s, k)
  Mat2 dg;       // DT^n(z) - Id
};

Evaluation evaluate(const TwistFamily& f, PlanePoint z, int s, int k, int n, bool with_jacobian) {
  PlanePoint w = z;
  Mat2 m;
  for (int j = 0; j < n; ++j) {
    if (with_jacobian) m = f.jacobian(w) * m;
    w = f.forward(w);
  }
  Evaluation e;
  e.g = {w.phi - z.phi - s, w.i - z.i - k};
  e.dg = {m.a - 1.0, m.b, m.c, m.d - 1.0};
  return e;
}

double sup_norm(PlanePoint p) {
  const double r = std::max(std::abs(p.phi), std::abs(p.i));
  return std::isfinite(r) ? r : INFINITY;
}

struct GraphSample {
  double phi = 0.0;
  double mu = 0.0;
  double value = 0.0;  // Delta(phi) - target
};

class GraphSearch {
 public:
  GraphSearch(const TwistFamily& f, const LevelSetComponent& c, int target, const SolverOptions& opts)
      : f_(f), c_(c), target_(target), opts_(opts) {}

  GraphSample sample(double phi) const {
    const auto roots = solve_slice(f_, c_.p, c_.q, phi, c_.start_bracket, opts_.levelset);
    const double mu = roots.front();
    return {phi, mu, eval_lift(f_, {phi, mu}, c_.q).i - mu - target_};
  }

  GraphSample grid(std::size_t j) const {
    const double phi = c_.phis[j];
    const double mu = c_.mu_minus[j];
    return {phi, mu, eval_lift(f_, {phi, mu}, c_.q).i - mu - target_};
  }

  // Sign change between a and b, bisected in phi.
  GraphSample bisect(GraphSample a, GraphSample b) const {
    GraphSample best = std::abs(a.value) <= std::abs(b.value) ? a : b;
    for (int it = 0; it < 80 && std::abs(best.value) > opts_.bisect_tol; ++it) {
      const double mid = 0.5 * (a.phi + b.phi);
      if (mid <= std::min(a.phi, b.phi) || mid >= std::max(a.phi, b.phi)) break;
      const GraphSample m = sample(mid);
      if (std::abs(m.value) < std::abs(best.value)) best = m;
      if ((m.value < 0.0) == (a.value < 0.0)) a = m; else b = m;
    }
    return best;
  }

  // Golden-section search for the extremum of value between lo and hi;
  // sense = +1 maximises, -1 minimises.
  GraphSample extremum(double lo, double hi, double sense) const {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    GraphSample s1 = sample(x1), s2 = sample(x2);
    for (int it = 0; it < 40; ++it) {
      if (sense * s1.value > sense * s2.value) {
        hi = x2;
        x2 = x1;
        s2 = s1;
        x1 = hi - inv_phi * (hi - lo);
        s1 = sample(x1);
      } else {
        lo = x1;
        x1 = x2;
        s1 = s2;
        x2 = lo + inv_phi * (hi - lo);
        s2 = sample(x2);
      }
    }
    return sense * s1.value > sense * s2.value ? s1 : s2;
  }

 private:
  const TwistFamily& f_;
  const LevelSetComponent& c_;
  int target_;
  const SolverOptions& opts_;
};

OrbitRecord make_record(const TwistFamily& f, PlanePoint anchor, OrbitKind kind, int s, int k, int n,
                        const SolverOptions& opts) {
  OrbitRecord r;
  r.kind = kind;
  r.s = s;
  r.k = k;
  r.n = n;
  r.anchor = anchor;
  r.residual = orbit_residual(f, anchor, s, k, n);
  PlanePoint w = anchor;
  for (int j = 0; j < n; ++j) {
    r.points.push_back(project_torus(w));
    w = f.forward(w);
  }
  for (std::size_t a = 0; a < r.points.size() && r.minimal; ++a)
    for (std::size_t b = a + 1; b < r.points.size(); ++b)
      if (torus_distance(lift(r.points[a]), lift(r.points[b])) < opts.distinct_tol) {
        r.minimal = false;
        break;
      }
  return r;
}

// Moves the anchor into [0,1) x [0,1) for vertical orbits (adjusting s by the
// deck action of T^n on (0, l)) and into [0,1) x R for Birkhoff orbits.
OrbitRecord canonical(const TwistFamily& f, OrbitRecord r, const SolverOptions& opts) {
  PlanePoint z = r.anchor;
  const double shift_phi = std::floor(z.phi + 1e-12);
  z.phi -= shift_phi;
  if (z.phi < 0.0) z.phi = 0.0;
  int s = r.s;
  if (r.kind == OrbitKind::Vertical) {
    const double l = std::floor(z.i + 1e-9);
    z.i -= l;
    s -= static_cast<int>(l) * r.n;
  }
  OrbitRecord out = make_record(f, z, r.kind, s, r.k, r.n, opts);
  out.refined = r.refined;
  out.degenerate = r.degenerate;
  return out;
}

bool same_orbit(const OrbitRecord& a, const OrbitRecord& b, double tol) {
  if (a.n != b.n || a.k != b.k) return false;
  for (const TorusPoint& p : a.points)
    if (torus_distance(lift(p), b.anchor) < tol) return true;
  return false;
}

void sort_and_dedupe(std::vector<OrbitRecord>& orbits, double tol) {
  std::stable_sort(orbits.begin(), orbits.end(), [](const OrbitRecord& a, const OrbitRecord& b) {
    if (a.s != b.s) return a.s < b.s;
    if (a.anchor.phi != b.anchor.phi) return a.anchor.phi < b.anchor.phi;
    return a.anchor.i < b.anchor.i;
  });
  std::vector<OrbitRecord> kept;
  for (auto& o : orbits) {
    bool dup = false;
    for (const auto& k : kept)
      if (same_orbit(k, o, tol)) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(std::move(o));
  }
  orbits = std::move(kept);
}

SearchResult search_component(const TwistFamily& f, const LevelSetComponent& c, OrbitKind kind, int target,
                              const SolverOptions& opts) {
  SearchResult out;
  const GraphSearch search(f, c, target, opts);
  const std::size_t n = c.phis.size();
  std::vector<GraphSample> samples(n);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t j = 0; j < n; ++j) {
    samples[j] = search.grid(j);
    lo = std::min(lo, samples[j].value);
    hi = std::max(hi, samples[j].value);
  }

  auto accept = [&](GraphSample at) {
    ++out.candidates;
    const PlanePoint guess{at.phi, at.mu};
    const NewtonResult nr = newton_refine(f, guess, c.p, target, c.q, opts.refine_tol, opts.max_iter);
    const double guess_res = orbit_residual(f, guess, c.p, target, c.q);
    const bool use_newton = nr.residual <= guess_res;
    const PlanePoint z = use_newton ? nr.point : guess;
    OrbitRecord r = make_record(f, z, kind, c.p, target, c.q, opts);
    r.refined = use_newton && nr.converged;
    if (r.residual < opts.refine_tol) {
      out.orbits.push_back(std::move(r));
    } else {
      ++out.rejected;
    }
  };

  if (hi - lo < opts.degenerate_tol) {
    out.degenerate = true;
    if (std::abs(samples.front().value) < opts.degenerate_tol) {
      accept(samples.front());
      for (auto& o : out.orbits) o.degenerate = true;
    }
    return out;
  }

  // wrap-around neighbour of the last angle is phi = 1, i.e. the first sample shifted
  auto next_of = [&](std::size_t j) {
    if (j + 1 < n) return samples[j + 1];
    GraphSample w = samples.front();
    w.phi += 1.0;
    return w;
  };
  auto prev_of = [&](std::size_t j) {
    if (j > 0) return samples[j - 1];
    GraphSample w = samples.back();
    w.phi -= 1.0;
    return w;
  };

  std::vector<std::size_t> extrema;
  for (std::size_t j = 0; j < n; ++j) {
    const GraphSample& a = samples[j];
    const GraphSample b = next_of(j);
    if (std::abs(a.value) <= opts.bisect_tol) {
      accept(a);
    } else if (std::abs(b.value) > opts.bisect_tol && (a.value < 0.0) != (b.value < 0.0)) {
      accept(search.bisect(a, b));
    } else {
      const GraphSample p = prev_of(j);
      const bool peak = a.value < 0.0 && a.value >= p.value && a.value >= b.value && p.value < 0.0;
      const bool dip = a.value > 0.0 && a.value <= p.value && a.value <= b.value && p.value > 0.0;
      if (peak || dip) extrema.push_back(j);
    }
  }

  // Crossings narrower than the grid show up as near-miss extrema.
  std::stable_sort(extrema.begin(), extrema.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(samples[x].value) < std::abs(samples[y].value);
  });
  if (extrema.size() > static_cast<std::size_t>(std::max(opts.max_extrema, 0)))
    extrema.resize(static_cast<std::size_t>(std::max(opts.max_extrema, 0)));
  for (std::size_t j : extrema) {
    const GraphSample a = samples[j];
    const double sense = a.value < 0.0 ? 1.0 : -1.0;
    const GraphSample best = search.extremum(prev_of(j).phi, next_of(j).phi, sense);
    if ((best.value < 0.0) == (a.value < 0.0)) continue;
    // a crossing on each side of the extremum
    accept(search.bisect(a, best));
    const GraphSample far = best.phi < a.phi ? prev_of(j) : next_of(j);
    accept(search.bisect(best, far));
  }

  for (auto& o : out.orbits) o = canonical(f, o, opts);
  sort_and_dedupe(out.orbits, opts.distinct_tol);
  return out;
}

std::shared_ptr<const LevelSetComponent> component_for(const TwistFamily& f, int s, int n, int n_phi,
                                                       const SolverOptions& opts, LevelSetCache* cache) {
  if (cache) return cache->get_or_compute(f, s, n, n_phi, opts.levelset);
  return std::make_shared<const LevelSetComponent>(compute_levelset(f, s, n, n_phi, opts.levelset));
}

}  // namespace

double orbit_residual(const TwistFamily& f, PlanePoint z, int s, int k, int n) {
  const PlanePoint w = eval_lift(f, z, n);
  return sup_norm({w.phi - z.phi - s, w.i - z.i - k});
}

NewtonResult newton_refine(const TwistFamily& f, PlanePoint guess, int s, int k, int n, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("newton_refine needs tol > 0");
  NewtonResult out;
  out.point = guess;
  Evaluation e = evaluate(f, guess, s, k, n, true);
  out.residual = sup_norm(e.g);
  while (out.residual >= tol && out.iterations < max_iter) {
    const double det = e.dg.det();
    if (!(std::abs(det) >= 1e-14)) {
      out.singular = true;
      return out;
    }
    const Mat2 inv = e.dg.inverse();
    const PlanePoint step{-(inv.a * e.g.phi + inv.b * e.g.i), -(inv.c * e.g.phi + inv.d * e.g.i)};
    double lambda = 1.0;
    bool improved = false;
    while (lambda >= std::ldexp(1.0, -20)) {
      const PlanePoint trial{out.point.phi + lambda * step.phi, out.point.i + lambda * step.i};
      const Evaluation te = evaluate(f, trial, s, k, n, false);
      const double r = sup_norm(te.g);
      if (r < out.residual) {
        out.point = trial;
        out.residual = r;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    ++out.iterations;
    if (!improved) return out;
    e = evaluate(f, out.point, s, k, n, true);
  }
  out.converged = out.residual < tol;
  return out;
}

double vertical_displacement(const TwistFamily& f, const LevelSetComponent& c, double phi,
                             const LevelSetOptions& opts) {
  const auto roots = solve_slice(f, c.p, c.q, phi, c.start_bracket, opts);
  const double mu = roots.front();
  return eval_lift(f, {phi, mu}, c.q).i - mu;
}

SRange default_s_range(int n) {
  return {static_cast<int>(std::ceil(-2.0 * n)) - 1, static_cast<int>(std::floor(2.0 * n)) + 1};
}

SRange residue_s_range(int n) { return {0, n - 1}; }

SearchResult find_birkhoff(const TwistFamily& f, int s, int n, int n_phi, const SolverOptions& opts,
                           LevelSetCache* cache) {
  if (n < 1) throw std::invalid_argument("find_birkhoff needs n >= 1");
  const auto c = component_for(f, s, n, n_phi, opts, cache);
  return search_component(f, *c, OrbitKind::Birkhoff, 0, opts);
}

SearchResult find_vertical(const TwistFamily& f, int k, int n, std::optional<SRange> s_range, int n_phi,
                           const SolverOptions& opts, LevelSetCache* cache) {
  if (k == 0) throw std::invalid_argument("find_vertical needs k != 0");
  if (n < 1) throw std::invalid_argument("find_vertical needs n >= 1");
  const SRange range = s_range.value_or(default_s_range(n));
  const int count = std::max(0, range.hi - range.lo + 1);
  std::vector<SearchResult> partial(static_cast<std::size_t>(count));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < count; ++j) {
    try {
      const auto c = component_for(f, range.lo + j, n, n_phi, opts, cache);
      partial[static_cast<std::size_t>(j)] = search_component(f, *c, OrbitKind::Vertical, k, opts);
    } catch (...) {
#pragma omp critical(torustwist_solver_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  SearchResult out;
  for (auto& p : partial) {
    out.candidates += p.candidates;
    out.rejected += p.rejected;
    out.degenerate = out.degenerate || p.degenerate;
    for (auto& o : p.orbits) out.orbits.push_back(std::move(o));
  }
  sort_and_dedupe(out.orbits, opts.distinct_tol);
  return out;
}

std::vector<SpectrumEntry> intermediate_spectrum(const TwistFamily& f, const OrbitRecord& found,
                                                 const std::vector<std::pair<int, int>>& targets, int n_phi,
                                                 const SolverOptions& opts, LevelSetCache* cache) {
  for (const auto& [k, n] : targets) {
    if (n < 1 || k == 0 || (k > 0) != (found.k > 0) ||
        static_cast<long>(std::abs(k)) * found.n >= static_cast<long>(std::abs(found.k)) * n)
      throw std::invalid_argument("target " + std::to_string(k) + "/" + std::to_string(n) +
                                  " must satisfy 0 < |k'/N'| < |rho_V| with the same sign");
  }
  std::vector<SpectrumEntry> out;
  out.reserve(targets.size());
  // C(s + lN, N) is C(s, N) shifted by (0, l), so residues mod N cover every orbit
  for (const auto& [k, n] : targets)
    out.push_back({k, n, find_vertical(f, k, n, residue_s_range(n), n_phi, opts, cache)});
  return out;
}

}  // namespace torustwist
