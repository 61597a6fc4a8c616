#include "torustwist/cli/envelope.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace torustwist {

using nlohmann::json;

json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw std::invalid_argument("not a real: " + j.dump());
}

namespace {

json optional_real(const std::optional<double>& x) { return x ? real_to_json(*x) : json(nullptr); }
std::optional<double> optional_real_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return real_from_json(j);
}

OrbitKind orbit_kind_from(const std::string& s) {
  if (s == to_string(OrbitKind::Birkhoff)) return OrbitKind::Birkhoff;
  if (s == to_string(OrbitKind::Vertical)) return OrbitKind::Vertical;
  throw std::invalid_argument("unknown orbit kind " + s);
}

RotationCase rotation_case_from(const std::string& s) {
  for (RotationCase c : {RotationCase::BoundedHorizontal, RotationCase::VerticalEscapePlus,
                         RotationCase::VerticalEscapeMinus, RotationCase::Undetermined})
    if (s == to_string(c)) return c;
  throw std::invalid_argument("unknown rotation case " + s);
}

}  // namespace

void to_json(json& j, const PlanePoint& p) { j = json::array({real_to_json(p.phi), real_to_json(p.i)}); }
void from_json(const json& j, PlanePoint& p) { p = {real_from_json(j.at(0)), real_from_json(j.at(1))}; }

void to_json(json& j, const OrbitRecord& o) {
  json pts = json::array();
  for (const TorusPoint& t : o.points) pts.push_back(json::array({t.phi, t.i}));
  j = {{"kind", to_string(o.kind)},
       {"s", o.s},
       {"k", o.k},
       {"n", o.n},
       {"rho_v", std::to_string(o.k) + "/" + std::to_string(o.n)},
       {"anchor", o.anchor},
       {"residual", real_to_json(o.residual)},
       {"minimal", o.minimal},
       {"refined", o.refined},
       {"degenerate", o.degenerate},
       {"points", pts}};
}

void from_json(const json& j, OrbitRecord& o) {
  o.kind = orbit_kind_from(j.at("kind").get<std::string>());
  o.s = j.at("s").get<int>();
  o.k = j.at("k").get<int>();
  o.n = j.at("n").get<int>();
  o.anchor = j.at("anchor").get<PlanePoint>();
  o.residual = real_from_json(j.at("residual"));
  o.minimal = j.at("minimal").get<bool>();
  o.refined = j.at("refined").get<bool>();
  o.degenerate = j.at("degenerate").get<bool>();
  o.points.clear();
  for (const auto& p : j.at("points")) o.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
}

void to_json(json& j, const SearchResult& r) {
  j = {{"orbits", r.orbits}, {"degenerate", r.degenerate}, {"candidates", r.candidates}, {"rejected", r.rejected}};
}

void from_json(const json& j, SearchResult& r) {
  r.orbits = j.at("orbits").get<std::vector<OrbitRecord>>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.candidates = j.at("candidates").get<int>();
  r.rejected = j.at("rejected").get<int>();
}

void to_json(json& j, const RotationEstimate& e) {
  j = {{"case", to_string(e.case_tag)},
       {"horizontal", real_to_json(e.horizontal)},
       {"vertical", real_to_json(e.vertical)},
       {"horizon", e.horizon},
       {"tail_spread", real_to_json(e.tail_spread)},
       {"i_range", real_to_json(e.i_range)},
       {"cesaro_monotone", e.cesaro_monotone},
       {"closure_period", e.closure_period ? json(*e.closure_period) : json(nullptr)},
       {"diverged", e.diverged}};
}

void from_json(const json& j, RotationEstimate& e) {
  e.case_tag = rotation_case_from(j.at("case").get<std::string>());
  e.horizontal = real_from_json(j.at("horizontal"));
  e.vertical = real_from_json(j.at("vertical"));
  e.horizon = j.at("horizon").get<long>();
  e.tail_spread = real_from_json(j.at("tail_spread"));
  e.i_range = real_from_json(j.at("i_range"));
  e.cesaro_monotone = j.at("cesaro_monotone").get<bool>();
  const auto& cp = j.at("closure_period");
  e.closure_period = cp.is_null() ? std::nullopt : std::optional<long>(cp.get<long>());
  e.diverged = j.at("diverged").get<bool>();
}

void to_json(json& j, const StructureReport& r) {
  j = {{"min_twist", real_to_json(r.min_twist)},
       {"max_dphi", real_to_json(r.max_dphi)},
       {"drop_bound", real_to_json(r.drop_bound)},
       {"deviation_angle", optional_real(r.deviation_angle)},
       {"periodicity_residual", real_to_json(r.periodicity_residual)},
       {"inverse_residual", real_to_json(r.inverse_residual)}};
}

void from_json(const json& j, StructureReport& r) {
  r.min_twist = real_from_json(j.at("min_twist"));
  r.max_dphi = real_from_json(j.at("max_dphi"));
  r.drop_bound = real_from_json(j.at("drop_bound"));
  r.deviation_angle = optional_real_from(j.at("deviation_angle"));
  r.periodicity_residual = real_from_json(j.at("periodicity_residual"));
  r.inverse_residual = real_from_json(j.at("inverse_residual"));
}

void to_json(json& j, const ThresholdBudget& b) {
  j = {{"n_phi", b.n_phi},
       {"refine_tol", b.solver.refine_tol},
       {"n_scan", b.solver.levelset.n_scan},
       {"root_tol", b.solver.levelset.root_tol}};
}

void from_json(const json& j, ThresholdBudget& b) {
  b.n_phi = j.at("n_phi").get<int>();
  b.solver.refine_tol = j.at("refine_tol").get<double>();
  b.solver.levelset.n_scan = j.at("n_scan").get<int>();
  b.solver.levelset.root_tol = j.at("root_tol").get<double>();
}

void to_json(json& j, const ThresholdRecord& r) {
  j = {{"n", r.n},
       {"k", r.k},
       {"lambda_n", real_to_json(r.lambda_n)},
       {"lo", real_to_json(r.lo)},
       {"hi", real_to_json(r.hi)},
       {"bracket_width", real_to_json(r.bracket_width)},
       {"evaluations", r.evaluations},
       {"verdict_lo", r.verdict_lo},
       {"verdict_hi", r.verdict_hi},
       {"ok", r.ok},
       {"error", r.error},
       {"diagnostics", r.diagnostics},
       {"budget", r.budget}};
}

void from_json(const json& j, ThresholdRecord& r) {
  r.n = j.at("n").get<int>();
  r.k = j.at("k").get<int>();
  r.lambda_n = real_from_json(j.at("lambda_n"));
  r.lo = real_from_json(j.at("lo"));
  r.hi = real_from_json(j.at("hi"));
  r.bracket_width = real_from_json(j.at("bracket_width"));
  r.evaluations = j.at("evaluations").get<int>();
  r.verdict_lo = j.at("verdict_lo").get<bool>();
  r.verdict_hi = j.at("verdict_hi").get<bool>();
  r.ok = j.at("ok").get<bool>();
  r.error = j.at("error").get<std::string>();
  r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  r.budget = j.at("budget").get<ThresholdBudget>();
}

void to_json(json& j, const CriticalEstimate& e) {
  j = {{"records", e.records},
       {"kcr_estimate", real_to_json(e.kcr_estimate)},
       {"extrapolation_method", e.extrapolation_method},
       {"monotonicity_ok", e.monotonicity_ok},
       {"failed_n", e.failed_n}};
}

void from_json(const json& j, CriticalEstimate& e) {
  e.records = j.at("records").get<std::vector<ThresholdRecord>>();
  e.kcr_estimate = real_from_json(j.at("kcr_estimate"));
  e.extrapolation_method = j.at("extrapolation_method").get<std::string>();
  e.monotonicity_ok = j.at("monotonicity_ok").get<bool>();
  e.failed_n = j.at("failed_n").get<std::vector<int>>();
}

void to_json(json& j, const ClimbingHit& h) {
  j = {{"seed_index", h.seed_index}, {"seed", h.seed}, {"steps", h.steps}, {"height", real_to_json(h.height)}};
}

void from_json(const json& j, ClimbingHit& h) {
  h.seed_index = j.at("seed_index").get<long>();
  h.seed = j.at("seed").get<PlanePoint>();
  h.steps = j.at("steps").get<long>();
  h.height = real_from_json(j.at("height"));
}

void to_json(json& j, const RicBudget& b) {
  j = {{"n_max", b.n_max},     {"horizon", b.horizon}, {"n_seeds", b.n_seeds}, {"rng_seed", b.rng_seed},
       {"climb_s", b.climb_s}, {"climb_l", b.climb_l}, {"n_phi", b.n_phi}};
}

void from_json(const json& j, RicBudget& b) {
  b.n_max = j.at("n_max").get<int>();
  b.horizon = j.at("horizon").get<long>();
  b.n_seeds = j.at("n_seeds").get<std::size_t>();
  b.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  b.climb_s = j.at("climb_s").get<double>();
  b.climb_l = j.at("climb_l").get<double>();
  b.n_phi = j.at("n_phi").get<int>();
}

void to_json(json& j, const RicVerdict& v) {
  json witness = nullptr;
  std::string kind = "none";
  if (v.orbit_witness) {
    kind = "vertical_orbit";
    witness = *v.orbit_witness;
  } else if (v.climbing_witness) {
    kind = "climbing";
    const ClimbingWitness& w = *v.climbing_witness;
    witness = {{"s", w.s}, {"l", w.l}, {"up", w.up}, {"down", w.down}};
  }
  j = {{"verdict", to_string(v.verdict)},
       {"witness_kind", kind},
       {"witness", witness},
       {"budget", v.budget},
       {"effort", {{"vertical_searches", v.effort.vertical_searches}, {"seeds_iterated", v.effort.seeds_iterated}}},
       {"exactness_residual", optional_real(v.exactness_residual)}};
}

void from_json(const json& j, RicVerdict& v) {
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict == to_string(RicVerdictKind::NoRicWitnessed))
    v.verdict = RicVerdictKind::NoRicWitnessed;
  else if (verdict == to_string(RicVerdictKind::Inconclusive))
    v.verdict = RicVerdictKind::Inconclusive;
  else
    throw std::invalid_argument("unknown verdict " + verdict);
  const auto kind = j.at("witness_kind").get<std::string>();
  v.orbit_witness.reset();
  v.climbing_witness.reset();
  if (kind == "vertical_orbit") {
    v.orbit_witness = j.at("witness").get<OrbitRecord>();
  } else if (kind == "climbing") {
    const json& w = j.at("witness");
    v.climbing_witness = ClimbingWitness{w.at("s").get<double>(), w.at("l").get<double>(),
                                         w.at("up").get<ClimbingHit>(), w.at("down").get<ClimbingHit>()};
  } else if (kind != "none") {
    throw std::invalid_argument("unknown witness kind " + kind);
  }
  v.budget = j.at("budget").get<RicBudget>();
  v.effort.vertical_searches = j.at("effort").at("vertical_searches").get<int>();
  v.effort.seeds_iterated = j.at("effort").at("seeds_iterated").get<std::size_t>();
  v.exactness_residual = optional_real_from(j.at("exactness_residual"));
}

namespace cli {

void to_json(json& j, const Envelope& e) {
  j = {{"version", e.version},     {"command", e.command},     {"config", e.config},
       {"timestamp", e.timestamp}, {"wall_time", e.wall_time}, {"payload", e.payload}};
}

void from_json(const json& j, Envelope& e) {
  e.version = j.at("version").get<std::string>();
  e.command = j.at("command").get<std::string>();
  e.config = j.at("config");
  e.timestamp = j.at("timestamp").get<std::string>();
  e.wall_time = j.at("wall_time").get<double>();
  e.payload = j.at("payload");
}

std::string artifact_version() { return TORUSTWIST_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_envelope(const std::filesystem::path& path, const Envelope& e) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << json(e).dump(2) << '\n';
}

Envelope read_envelope(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in).get<Envelope>();
}

std::string csv_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

}  // namespace cli
}  // namespace torustwist
