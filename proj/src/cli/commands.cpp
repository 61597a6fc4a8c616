#include "torustwist/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "torustwist/cli/envelope.hpp"
#include "torustwist/levelset.hpp"
#include "torustwist/parallel.hpp"
#include "torustwist/ric.hpp"
#include "torustwist/rotation.hpp"
#include "torustwist/solver.hpp"
#include "torustwist/threshold.hpp"

namespace torustwist::cli {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

class Run {
 public:
  explicit Run(const RunConfig& cfg) : cfg_(cfg), start_(Clock::now()) {}

  void write(const json& payload) const {
    Envelope e;
    e.version = artifact_version();
    e.command = cfg_.command;
    e.config = cfg_.echo();
    e.timestamp = utc_timestamp();
    e.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
    e.payload = payload;
    write_envelope(cfg_.out_dir / (cfg_.command + ".json"), e);
  }

  std::ofstream csv(const std::string& name, const std::string& header) const {
    std::filesystem::create_directories(cfg_.out_dir);
    const auto path = cfg_.out_dir / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << header << '\n';
    return out;
  }

 private:
  const RunConfig& cfg_;
  Clock::time_point start_;
};

int positive_int(const RunConfig& cfg, const std::string& key, long fallback) {
  const long v = cfg.get_int(key, fallback);
  if (v < 1 || v > std::numeric_limits<int>::max()) throw ConfigError("key '" + key + "' must be a positive integer");
  return static_cast<int>(v);
}

long positive_long(const RunConfig& cfg, const std::string& key, long fallback) {
  const long v = cfg.get_int(key, fallback);
  if (v < 1) throw ConfigError("key '" + key + "' must be a positive integer");
  return v;
}

std::pair<int, int> parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) throw std::invalid_argument(s);
    std::size_t used_k = 0, used_n = 0;
    const std::string ks = s.substr(0, slash), ns = s.substr(slash + 1);
    const int k = std::stoi(ks, &used_k);
    const int n = std::stoi(ns, &used_n);
    if (used_k != ks.size() || used_n != ns.size() || n < 1) throw std::invalid_argument(s);
    return {k, n};
  } catch (const std::logic_error&) {
    throw ConfigError("target '" + s + "' is not of the form k/N with N >= 1");
  }
}

LevelSetOptions levelset_options(const RunConfig& cfg) {
  LevelSetOptions o;
  o.root_tol = cfg.get_positive("root_tol", o.root_tol);
  o.n_scan = positive_int(cfg, "n_scan", o.n_scan);
  return o;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.refine_tol = cfg.get_positive("refine_tol", o.refine_tol);
  o.levelset = levelset_options(cfg);
  return o;
}

std::string fmt(double x, int digits = 12) {
  std::ostringstream ss;
  ss << std::setprecision(digits) << x;
  return ss.str();
}

}  // namespace

int cmd_map_check(const RunConfig& cfg, std::ostream& out) {
  cfg.validate_keys({"grid", "n_quad", "circle_i"});
  const TwistFamily f = cfg.family();
  const int grid = positive_int(cfg, "grid", 64);
  const int n_quad = positive_int(cfg, "n_quad", 2048);
  if (n_quad % 2) throw ConfigError("key 'n_quad' must be even");
  const double circle_i = cfg.get_double("circle_i", 0.5);
  Run run(cfg);

  const StructureReport r = check_structure(f, {grid, grid});
  json exact = nullptr;
  out << "family            " << f.key() << '\n'
      << "min twist         " << fmt(r.min_twist) << '\n'
      << "max |dphi'/dphi|  " << fmt(r.max_dphi) << '\n'
      << "drop bound        " << fmt(r.drop_bound) << '\n'
      << "deviation angle   " << (r.deviation_angle ? fmt(*r.deviation_angle) : std::string("none")) << '\n'
      << "periodicity res.  " << fmt(r.periodicity_residual, 3) << '\n'
      << "inverse res.      " << fmt(r.inverse_residual, 3) << '\n';
  if (f.density()) {
    const ExactnessResult e = check_exactness(f, GraphLoop::constant(circle_i), n_quad);
    exact = {{"circle_i", circle_i},
             {"flux", real_to_json(e.flux)},
             {"image_is_graph", e.image_is_graph},
             {"min_image_slope", real_to_json(e.min_image_slope)}};
    out << "exactness flux    " << fmt(e.flux, 3) << " through I = " << circle_i << '\n';
  } else {
    out << "exactness flux    n/a (no invariant density)\n";
  }
  run.write({{"family", f.key()}, {"structure", r}, {"exactness", exact}});
  return kOk;
}

int cmd_rotation(const RunConfig& cfg, std::ostream& out) {
  cfg.validate_keys({"seed_phi", "seed_i", "grid_n_phi", "grid_n_i", "grid_i_min", "grid_i_max", "horizon",
                     "window"});
  const TwistFamily f = cfg.family();
  const long horizon = positive_long(cfg, "horizon", 10000);
  const long window = positive_long(cfg, "window", 1000);
  if (window < 10 || horizon < 2 * window) throw ConfigError("rotation needs horizon >= 2 * window >= 20");

  std::vector<PlanePoint> seeds;
  if (cfg.has("seed_phi") || cfg.has("seed_i")) {
    const auto phis = cfg.get_doubles("seed_phi", {0.0});
    const auto is = cfg.get_doubles("seed_i", {0.0});
    if (phis.size() != is.size() && phis.size() != 1 && is.size() != 1)
      throw ConfigError("seed_phi and seed_i must have equal lengths (or one of them a single value)");
    const std::size_t m = std::max(phis.size(), is.size());
    for (std::size_t j = 0; j < m; ++j)
      seeds.push_back({phis[phis.size() == 1 ? 0 : j], is[is.size() == 1 ? 0 : j]});
  } else {
    const long n_phi = cfg.get_int("grid_n_phi", 1);
    const long n_i = cfg.get_int("grid_n_i", 10);
    const double i_min = cfg.get_double("grid_i_min", 0.0), i_max = cfg.get_double("grid_i_max", 1.0);
    if (n_phi < 0 || n_i < 0) throw ConfigError("grid sizes must be non-negative");
    if (!(i_max > i_min)) throw ConfigError("grid_i_max must exceed grid_i_min");
    for (long a = 0; a < n_phi; ++a)
      for (long b = 0; b < n_i; ++b)
        seeds.push_back({static_cast<double>(a) / static_cast<double>(n_phi),
                         i_min + (i_max - i_min) * static_cast<double>(b) / static_cast<double>(n_i)});
  }
  if (seeds.empty()) throw ConfigError("rotation needs a nonempty seed grid");
  Run run(cfg);

  const auto est = estimate_rotations(f, seeds, horizon, window);
  auto csv = run.csv("rotation.csv", "seed_phi,seed_i,case,horizontal,vertical,horizon,tail_spread,i_range");
  json rows = json::array();
  int diverged = 0;
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    const RotationEstimate& e = est[j];
    diverged += e.diverged;
    csv << csv_real(seeds[j].phi) << ',' << csv_real(seeds[j].i) << ','
        << (e.diverged ? "diverged" : to_string(e.case_tag)) << ',' << csv_real(e.horizontal) << ','
        << csv_real(e.vertical) << ',' << e.horizon << ',' << csv_real(e.tail_spread) << ',' << csv_real(e.i_range)
        << '\n';
    rows.push_back({{"seed", seeds[j]}, {"estimate", e}});
  }
  out << seeds.size() << " seeds, " << diverged << " diverged; written to " << (cfg.out_dir / "rotation.csv").string()
      << '\n';
  run.write({{"family", f.key()}, {"horizon", horizon}, {"window", window}, {"rows", rows}});
  return kOk;
}

int cmd_levelset(const RunConfig& cfg, std::ostream& out) {
  cfg.validate_keys({"p", "q", "n_phi", "root_tol", "n_scan"});
  const TwistFamily f = cfg.family();
  const int p = static_cast<int>(cfg.get_int("p", 0));
  const int q = positive_int(cfg, "q", 1);
  const int n_phi = positive_int(cfg, "n_phi", 1024);
  const LevelSetOptions opts = levelset_options(cfg);
  Run run(cfg);

  LevelSetCache cache(cfg.out_dir / "cache");
  const auto c = cache.get_or_compute(f, p, q, n_phi, opts);
  const ExchangeReport ex = verify_exchange(*c, f);
  auto csv = run.csv("levelset.csv", "phi,mu_minus,mu_plus,nu_minus,nu_plus");
  for (std::size_t j = 0; j < c->phis.size(); ++j)
    csv << csv_real(c->phis[j]) << ',' << csv_real(c->mu_minus[j]) << ',' << csv_real(c->mu_plus[j]) << ','
        << csv_real(c->nu_minus[j]) << ',' << csv_real(c->nu_plus[j]) << '\n';
  out << "C(" << p << "," << q << ") on " << n_phi << " angles, max root residual " << fmt(c->max_root_residual, 3)
      << ", exchange residual " << fmt(ex.max_residual, 3) << ", ordering " << (ex.ordering_ok ? "ok" : "violated")
      << '\n';
  run.write({{"family", f.key()},
             {"p", p},
             {"q", q},
             {"n_phi", n_phi},
             {"bracket", {c->bracket.lo, c->bracket.hi}},
             {"max_root_residual", real_to_json(c->max_root_residual)},
             {"cardinality_jumps", c->cardinality_jumps},
             {"exchange",
              {{"max_residual", real_to_json(ex.max_residual)},
               {"ordering_violation", real_to_json(ex.ordering_violation)},
               {"ordering_ok", ex.ordering_ok}}}});
  return kOk;
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
  const bool vertical = cfg.subcommand == "vertical";
  if (!vertical && cfg.subcommand != "birkhoff") throw ConfigError("orbit needs 'birkhoff' or 'vertical'");
  if (vertical)
    cfg.validate_keys({"vertical_k", "n", "s_min", "s_max", "n_phi", "refine_tol", "root_tol", "n_scan", "targets"});
  else
    cfg.validate_keys({"s", "n", "n_phi", "refine_tol", "root_tol", "n_scan"});
  const TwistFamily f = cfg.family();
  const int n = positive_int(cfg, "n", 1);
  const int n_phi = positive_int(cfg, "n_phi", 512);
  const SolverOptions opts = solver_options(cfg);
  LevelSetCache cache(cfg.out_dir / "cache");

  SearchResult r;
  json spectrum = json::array();
  int k = 0;
  if (vertical) {
    k = static_cast<int>(cfg.get_int("vertical_k", 1));
    if (k == 0) throw ConfigError("vertical_k must be nonzero");
    std::optional<SRange> range;
    if (cfg.has("s_min") != cfg.has("s_max")) throw ConfigError("give both s_min and s_max or neither");
    if (cfg.has("s_min")) range = SRange{static_cast<int>(cfg.get_int("s_min")), static_cast<int>(cfg.get_int("s_max"))};
    std::vector<std::pair<int, int>> targets;
    for (const auto& t : cfg.get_strings("targets")) targets.push_back(parse_rational(t));
    Run run(cfg);
    r = find_vertical(f, k, n, range, n_phi, opts, &cache);
    if (!targets.empty() && r.found()) {
      for (const SpectrumEntry& e : intermediate_spectrum(f, r.orbits.front(), targets, n_phi, opts, &cache)) {
        out << "target " << e.k << "/" << e.n << ": " << e.result.orbits.size() << " orbit(s)\n";
        spectrum.push_back({{"k", e.k}, {"n", e.n}, {"count", e.result.orbits.size()}, {"result", e.result}});
      }
    }
    for (const OrbitRecord& o : r.orbits)
      out << "vertical (" << o.s << "," << o.k << "," << o.n << ") at (" << fmt(o.anchor.phi, 15) << ", "
          << fmt(o.anchor.i, 15) << ") residual " << fmt(o.residual, 3) << '\n';
    out << r.orbits.size() << " orbit(s) with rho_V = " << k << "/" << n << '\n';
    run.write({{"family", f.key()}, {"kind", "vertical"}, {"k", k}, {"n", n}, {"search", r}, {"spectrum", spectrum}});
  } else {
    const int s = static_cast<int>(cfg.get_int("s", 0));
    Run run(cfg);
    r = find_birkhoff(f, s, n, n_phi, opts, &cache);
    for (const OrbitRecord& o : r.orbits)
      out << "birkhoff (" << o.s << "," << o.n << ") at (" << fmt(o.anchor.phi, 15) << ", " << fmt(o.anchor.i, 15)
          << ") residual " << fmt(o.residual, 3) << '\n';
    out << r.orbits.size() << " orbit(s)" << (r.degenerate ? " (degenerate curve)" : "") << '\n';
    run.write({{"family", f.key()}, {"kind", "birkhoff"}, {"s", s}, {"n", n}, {"search", r}});
  }
  return r.found() ? kOk : kNotFound;
}

int cmd_ric(const RunConfig& cfg, std::ostream& out) {
  cfg.validate_keys({"n_max", "horizon", "n_seeds", "climb_s", "climb_l", "n_phi"});
  const TwistFamily f = cfg.family();
  RicBudget b;
  b.n_max = positive_int(cfg, "n_max", b.n_max);
  b.horizon = positive_long(cfg, "horizon", b.horizon);
  b.n_seeds = static_cast<std::size_t>(positive_long(cfg, "n_seeds", static_cast<long>(b.n_seeds)));
  b.climb_s = cfg.get_positive("climb_s", b.climb_s);
  b.climb_l = cfg.get_double("climb_l", b.climb_l);
  if (!(b.climb_l < 0.0)) throw ConfigError("key 'climb_l' must be negative");
  b.n_phi = positive_int(cfg, "n_phi", b.n_phi);
  b.rng_seed = cfg.rng_seed;
  Run run(cfg);

  const RicVerdict v = ric_witness(f, b);
  out << "verdict " << to_string(v.verdict);
  if (v.orbit_witness)
    out << ": vertical orbit (" << v.orbit_witness->s << "," << v.orbit_witness->k << "," << v.orbit_witness->n
        << ") residual " << fmt(v.orbit_witness->residual, 3);
  if (v.climbing_witness)
    out << ": climbing orbits, seed " << v.climbing_witness->up.seed_index << " above " << v.climbing_witness->s
        << " after " << v.climbing_witness->up.steps << " steps, seed " << v.climbing_witness->down.seed_index
        << " below " << v.climbing_witness->l << " after " << v.climbing_witness->down.steps << " steps";
  out << '\n';
  if (v.exactness_residual) out << "exactness flux " << fmt(*v.exactness_residual, 3) << '\n';
  run.write(v);
  return kOk;
}

int cmd_kcr(const RunConfig& cfg, std::ostream& out) {
  cfg.validate_keys({"n_max", "lo", "hi", "tol", "n_phi", "refine_tol", "root_tol", "n_scan", "gammas",
                     "extrapolation"});
  (void)cfg.family();
  const int n_max = positive_int(cfg, "n_max", 4);
  const double lo = cfg.get_double("lo", 0.9), hi = cfg.get_double("hi", 8.0);
  if (!(lo < hi)) throw ConfigError("kcr needs lo < hi");
  const double tol = cfg.get_positive("tol", 1e-3);
  ThresholdBudget budget;
  budget.n_phi = positive_int(cfg, "n_phi", budget.n_phi);
  budget.solver = solver_options(cfg);
  const std::string method = cfg.get_string("extrapolation", "none");
  Extrapolation ex = Extrapolation::None;
  if (method == "aitken") ex = Extrapolation::Aitken;
  else if (method != "none") throw ConfigError("extrapolation must be \"none\" or \"aitken\"");
  Run run(cfg);

  if (cfg.has("gammas")) {
    if (cfg.family_name() != "saddle_center") throw ConfigError("gammas needs family = \"saddle_center\"");
    const auto gammas = cfg.get_doubles("gammas");
    if (gammas.empty()) throw ConfigError("gammas must be nonempty");
    for (double g : gammas)
      if (!(g > 0.0)) throw ConfigError("gammas must be positive");
    const auto rows = saddle_center_critical_grid(gammas, n_max, lo, hi, tol, budget, ex);
    auto csv = run.csv("kcr_grid.csv", "gamma,alpha_crit_estimate,n_max");
    json payload = json::array();
    bool failed = false;
    for (const CriticalGridRow& r : rows) {
      csv << csv_real(r.gamma) << ',' << csv_real(r.estimate.kcr_estimate) << ',' << n_max << '\n';
      out << "gamma " << fmt(r.gamma) << ": alpha_crit ~ " << fmt(r.estimate.kcr_estimate) << '\n';
      failed = failed || !r.estimate.failed_n.empty();
      payload.push_back({{"gamma", r.gamma}, {"estimate", r.estimate}});
    }
    run.write({{"grid", payload}});
    return failed ? kNotFound : kOk;
  }

  const FamilyAt f_at = [&cfg](double lambda) { return cfg.family_at(lambda); };
  const CriticalEstimate est = estimate_critical(f_at, n_max, lo, hi, tol, budget, ex);
  auto csv = run.csv("kcr.csv", "n,lambda_n,bracket_width,evaluations");
  for (const ThresholdRecord& r : est.records) {
    csv << r.n << ',' << csv_real(r.lambda_n) << ',' << csv_real(r.bracket_width) << ',' << r.evaluations << '\n';
    out << "n=" << r.n << "  lambda_n " << (r.ok ? fmt(r.lambda_n) : "bracket error: " + r.error) << '\n';
  }
  out << "k_cr estimate " << fmt(est.kcr_estimate) << " (" << est.extrapolation_method << "), monotone "
      << (est.monotonicity_ok ? "yes" : "NO") << '\n';
  run.write(est);
  if (!est.monotonicity_ok) return kNumericalFailure;
  return est.failed_n.empty() ? kOk : kNotFound;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  cfg.validate_keys({"gammas", "alphas", "n_seeds", "horizon", "window"});
  if (cfg.family_name() != "saddle_center") throw ConfigError("scan needs family = \"saddle_center\"");
  const auto gammas = cfg.get_doubles("gammas", {1.0});
  const auto alphas = cfg.get_doubles("alphas", {1.0});
  if (gammas.empty() || alphas.empty()) throw ConfigError("scan needs nonempty gammas and alphas");
  for (double g : gammas)
    if (!(g > 0.0)) throw ConfigError("gammas must be positive");
  for (double a : alphas)
    if (!(a > 0.0)) throw ConfigError("alphas must be positive");
  const auto n_seeds = static_cast<std::size_t>(positive_long(cfg, "n_seeds", 16));
  const long horizon = positive_long(cfg, "horizon", 2000);
  const long window = positive_long(cfg, "window", 200);
  if (window < 10 || horizon < 2 * window) throw ConfigError("scan needs horizon >= 2 * window >= 20");
  Run run(cfg);

  const std::vector<PlanePoint> seeds = band_seeds(n_seeds, cfg.rng_seed);
  struct Cell {
    double gamma, alpha, rho_max;
    int determined;
  };
  const long cells = static_cast<long>(gammas.size() * alphas.size());
  std::vector<Cell> grid(static_cast<std::size_t>(cells));
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < cells; ++c) {
    const double g = gammas[static_cast<std::size_t>(c) / alphas.size()];
    const double a = alphas[static_cast<std::size_t>(c) % alphas.size()];
    const auto est = serial::estimate_rotations(builtin_saddle_center(a, g), seeds, horizon, window);
    Cell cell{g, a, -std::numeric_limits<double>::infinity(), 0};
    for (const RotationEstimate& e : est) {
      if (e.diverged || e.case_tag == RotationCase::Undetermined) continue;
      ++cell.determined;
      cell.rho_max = std::max(cell.rho_max, e.vertical);
    }
    if (cell.determined == 0) cell.rho_max = std::numeric_limits<double>::quiet_NaN();
    grid[static_cast<std::size_t>(c)] = cell;
  }

  auto csv = run.csv("scan.csv", "gamma,alpha,rho_v_max,n_determined");
  json rows = json::array();
  for (const Cell& c : grid) {
    csv << csv_real(c.gamma) << ',' << csv_real(c.alpha) << ',' << csv_real(c.rho_max) << ',' << c.determined << '\n';
    rows.push_back({{"gamma", c.gamma}, {"alpha", c.alpha}, {"rho_v_max", real_to_json(c.rho_max)},
                    {"n_determined", c.determined}});
  }
  out << grid.size() << " cells, " << n_seeds << " seeds each; written to " << (cfg.out_dir / "scan.csv").string()
      << '\n';
  run.write({{"rows", rows}, {"n_seeds", n_seeds}, {"horizon", horizon}, {"window", window}});
  return kOk;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "map-check") return cmd_map_check(cfg, out);
    if (cfg.command == "rotation") return cmd_rotation(cfg, out);
    if (cfg.command == "levelset") return cmd_levelset(cfg, out);
    if (cfg.command == "orbit") return cmd_orbit(cfg, out);
    if (cfg.command == "ric") return cmd_ric(cfg, out);
    if (cfg.command == "kcr") return cmd_kcr(cfg, out);
    if (cfg.command == "scan") return cmd_scan(cfg, out);
    err << "error: unknown command '" << cfg.command << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure in " << cfg.command << ": " << e.what() << '\n';
    return kNumericalFailure;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"torustwist: periodic orbits, rotation numbers and R.I.C. tests for twist maps of the torus"};
  app.set_version_flag("--version", artifact_version());
  app.fallthrough();
  std::string config_path, out_dir = "out";
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string orbit_kind;
  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--workers", workers, "OpenMP worker count")->capture_default_str();
  app.add_option("--seed", seed, "rng seed (overrides rng_seed)");
  app.add_option("--set", overrides, "key=value override, repeatable");
  app.add_subcommand("map-check", "twist, deviation angle and exactness flux");
  app.add_subcommand("rotation", "rotation numbers on a seed grid");
  app.add_subcommand("levelset", "graph functions of C(p, q)");
  app.add_subcommand("orbit", "Birkhoff or vertical periodic orbits")
      ->add_option("kind", orbit_kind, "birkhoff | vertical")
      ->required()
      ->check(CLI::IsMember({"birkhoff", "vertical"}));
  app.add_subcommand("ric", "one-sided test for rotational invariant circles");
  app.add_subcommand("kcr", "onset of vertical 1/n orbits and the critical parameter");
  app.add_subcommand("scan", "max vertical rotation over a (gamma, alpha) grid");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.subcommand = orbit_kind;
  try {
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& o : overrides) cfg.set_override(o);
    if (workers < 1) throw ConfigError("--workers must be at least 1");
    cfg.workers = workers;
    cfg.out_dir = out_dir;
    if (cfg.has("rng_seed")) {
      const long s = cfg.get_int("rng_seed");
      if (s < 0) throw ConfigError("rng_seed must be non-negative");
      cfg.rng_seed = static_cast<std::uint64_t>(s);
    }
    if (seed) cfg.rng_seed = *seed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  set_workers(cfg.workers);
  return run_command(cfg, out, err);
}

}  // namespace torustwist::cli
