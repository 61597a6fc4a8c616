#include "torustwist/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace torustwist {

namespace {

double slice_value(const TwistFamily& f, int p, int q, double phi, double i) {
  return eval_lift(f, {phi, i}, q).phi - phi - static_cast<double>(p);
}

double bisect(const TwistFamily& f, int p, int q, double phi, double lo, double glo, double hi, double root_tol) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = slice_value(f, p, q, phi, mid);
    if (std::abs(gm) <= root_tol) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double glo_now = slice_value(f, p, q, phi, lo);
  const double ghi_now = slice_value(f, p, q, phi, hi);
  return std::abs(glo_now) <= std::abs(ghi_now) ? lo : hi;
}

double drop_bound_of(const TwistFamily& f, const LevelSetOptions& opts) {
  if (opts.drop_bound) return *opts.drop_bound;
  return check_structure(f, {32, 8}).drop_bound;
}

void finish_component(const TwistFamily& f, LevelSetComponent& c) {
  const std::size_t n = c.phis.size();
  c.mu_minus.assign(n, 0.0);
  c.mu_plus.assign(n, 0.0);
  c.nu_minus.assign(n, 0.0);
  c.nu_plus.assign(n, 0.0);
  c.max_root_residual = 0.0;
  c.cardinality_jumps = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& roots = c.roots_per_phi[j];
    if (roots.empty()) throw LevelSetBracketError("no root found on a vertical line inside the bracket");
    c.mu_minus[j] = roots.front();
    c.mu_plus[j] = roots.back();
    double lo = INFINITY, hi = -INFINITY;
    for (double r : roots) {
      const PlanePoint img = eval_lift(f, {c.phis[j], r}, c.q);
      lo = std::min(lo, img.i);
      hi = std::max(hi, img.i);
      c.max_root_residual = std::max(c.max_root_residual, std::abs(img.phi - c.phis[j] - c.p));
    }
    c.nu_minus[j] = lo;
    c.nu_plus[j] = hi;
    if (roots.size() != c.roots_per_phi[(j + 1) % n].size()) ++c.cardinality_jumps;
  }
}

template <bool Parallel>
LevelSetComponent compute_impl(const TwistFamily& f, int p, int q, int n_phi, const LevelSetOptions& opts) {
  if (q < 1) throw std::invalid_argument("level set needs q >= 1");
  if (n_phi < 16) throw std::invalid_argument("level set needs n_phi >= 16");
  LevelSetComponent c;
  c.p = p;
  c.q = q;
  c.root_tol = opts.root_tol;
  c.phis.resize(static_cast<std::size_t>(n_phi));
  c.roots_per_phi.resize(static_cast<std::size_t>(n_phi));
  std::vector<RootBracket> used(static_cast<std::size_t>(n_phi));
  const RootBracket start = initial_bracket(p, q, drop_bound_of(f, opts));
  c.start_bracket = start;

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) if (Parallel)
  for (int j = 0; j < n_phi; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const double phi = static_cast<double>(j) / n_phi;
    c.phis[idx] = phi;
    try {
      c.roots_per_phi[idx] = solve_slice(f, p, q, phi, start, opts, &used[idx]);
    } catch (...) {
#pragma omp critical(torustwist_levelset_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  c.bracket = used.front();
  for (const auto& b : used) {
    c.bracket.lo = std::min(c.bracket.lo, b.lo);
    c.bracket.hi = std::max(c.bracket.hi, b.hi);
  }
  finish_component(f, c);
  return c;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

RootBracket initial_bracket(int p, int q, double drop_bound) {
  const double center = static_cast<double>(p) / q;
  const double slack = 2.0 + drop_bound * q;
  return {center - slack, center + slack};
}

std::vector<double> solve_slice(const TwistFamily& f, int p, int q, double phi, RootBracket start,
                                const LevelSetOptions& opts, RootBracket* used) {
  const double center = 0.5 * (start.lo + start.hi);
  const double slack0 = 0.5 * (start.hi - start.lo);
  double slack = slack0;
  double glo = slice_value(f, p, q, phi, center - slack);
  double ghi = slice_value(f, p, q, phi, center + slack);
  while (!(glo < 0.0 && ghi > 0.0)) {
    slack *= 2.0;
    if (slack > opts.bracket_cap * slack0)
      throw LevelSetBracketError("bracket expansion exceeded its cap at phi = " + std::to_string(phi) +
                                 "; the family does not grow like a TQ lift");
    glo = slice_value(f, p, q, phi, center - slack);
    ghi = slice_value(f, p, q, phi, center + slack);
  }
  const double lo = center - slack, hi = center + slack;
  if (used) *used = {lo, hi};

  std::vector<double> roots;
  if (q == 1) {
    roots.push_back(bisect(f, p, q, phi, lo, glo, hi, opts.root_tol));
    return roots;
  }
  const int n = std::max(opts.n_scan, 2);
  const double step = (hi - lo) / n;
  double prev_i = lo, prev_g = glo;
  for (int j = 1; j <= n; ++j) {
    const double cur_i = (j == n) ? hi : lo + j * step;
    const double cur_g = (j == n) ? ghi : slice_value(f, p, q, phi, cur_i);
    if (cur_g == 0.0) {
      roots.push_back(cur_i);
    } else if (prev_g != 0.0 && (prev_g < 0.0) != (cur_g < 0.0)) {
      roots.push_back(bisect(f, p, q, phi, prev_i, prev_g, cur_i, opts.root_tol));
    }
    prev_i = cur_i;
    prev_g = cur_g;
  }
  return roots;
}

LevelSetComponent compute_levelset(const TwistFamily& f, int p, int q, int n_phi, const LevelSetOptions& opts) {
  return compute_impl<true>(f, p, q, n_phi, opts);
}

namespace serial {
LevelSetComponent compute_levelset(const TwistFamily& f, int p, int q, int n_phi, const LevelSetOptions& opts) {
  return compute_impl<false>(f, p, q, n_phi, opts);
}
}  // namespace serial

ExchangeReport verify_exchange(const LevelSetComponent& c, const TwistFamily& f) {
  ExchangeReport r;
  for (std::size_t j = 0; j < c.phis.size(); ++j) {
    const double phi = c.phis[j];
    const double target = phi + c.p;
    const PlanePoint low = eval_lift(f, {phi, c.mu_minus[j]}, c.q);
    const PlanePoint high = eval_lift(f, {phi, c.mu_plus[j]}, c.q);
    r.max_residual = std::max({r.max_residual, std::abs(low.phi - target), std::abs(low.i - c.nu_plus[j]),
                               std::abs(high.phi - target), std::abs(high.i - c.nu_minus[j])});
    // first encounter maps highest, last encounter lowest
    for (double root : c.roots_per_phi[j]) {
      const double h = eval_lift(f, {phi, root}, c.q).i;
      r.ordering_violation = std::max({r.ordering_violation, h - low.i, high.i - h});
    }
  }
  r.ordering_ok = r.ordering_violation <= 1e-9;
  return r;
}

LevelSetComponent translate_component(const LevelSetComponent& c, int l) {
  LevelSetComponent out = c;
  const double shift = static_cast<double>(l);
  out.p = c.p + l * c.q;
  for (auto& roots : out.roots_per_phi)
    for (double& r : roots) r += shift;
  for (auto* v : {&out.mu_minus, &out.mu_plus, &out.nu_minus, &out.nu_plus})
    for (double& x : *v) x += shift;
  out.bracket.lo += shift;
  out.bracket.hi += shift;
  out.start_bracket.lo += shift;
  out.start_bracket.hi += shift;
  return out;
}

// Cache -----------------------------------------------------------------------

LevelSetCache::LevelSetCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {}

std::string LevelSetCache::cache_key(const TwistFamily& f, int p, int q, int n_phi, const LevelSetOptions& opts) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "|p=%d|q=%d|n_phi=%d|root_tol=%.17g|n_scan=%d|drop=%.17g", p, q, n_phi,
                opts.root_tol, opts.n_scan, opts.drop_bound.value_or(-1.0));
  return f.key() + buf;
}

std::size_t LevelSetCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::shared_ptr<const LevelSetComponent> LevelSetCache::get_or_compute(const TwistFamily& f, int p, int q, int n_phi,
                                                                       const LevelSetOptions& opts) {
  const std::string key = cache_key(f, p, q, n_phi, opts);
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  std::optional<std::filesystem::path> file;
  if (dir_) {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.bin", static_cast<unsigned long long>(fnv1a(key)));
    file = *dir_ / name;
  }
  std::shared_ptr<const LevelSetComponent> value;
  if (file) {
    if (auto loaded = read_component(*file, key)) value = std::make_shared<const LevelSetComponent>(std::move(*loaded));
  }
  if (!value) {
    value = std::make_shared<const LevelSetComponent>(compute_levelset(f, p, q, n_phi, opts));
    if (file) {
      std::error_code ec;
      std::filesystem::create_directories(*dir_, ec);
      write_component(*file, key, *value);
    }
  }
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, value);
  return it->second;
}

namespace {

constexpr char kMagic[8] = {'T', 'T', 'W', 'L', 'S', 'E', 'T', '1'};

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_vec(std::ofstream& out, const std::vector<double>& v) {
  put(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}
template <class T>
bool get(std::ifstream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof v));
}
bool get_vec(std::ifstream& in, std::vector<double>& v) {
  std::uint64_t n = 0;
  if (!get(in, n) || n > (1ULL << 32)) return false;
  v.resize(n);
  return static_cast<bool>(in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double))));
}

}  // namespace

void write_component(const std::filesystem::path& path, const std::string& key, const LevelSetComponent& c) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out.write(kMagic, sizeof kMagic);
    put(out, static_cast<std::uint64_t>(key.size()));
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    put(out, static_cast<std::int32_t>(c.p));
    put(out, static_cast<std::int32_t>(c.q));
    put(out, c.root_tol);
    put(out, c.bracket.lo);
    put(out, c.bracket.hi);
    put(out, c.start_bracket.lo);
    put(out, c.start_bracket.hi);
    put_vec(out, c.phis);
    put(out, static_cast<std::uint64_t>(c.roots_per_phi.size()));
    for (const auto& r : c.roots_per_phi) put_vec(out, r);
    for (const auto* v : {&c.mu_minus, &c.mu_plus, &c.nu_minus, &c.nu_plus}) put_vec(out, *v);
    put(out, c.max_root_residual);
    put(out, static_cast<std::int32_t>(c.cardinality_jumps));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

std::optional<LevelSetComponent> read_component(const std::filesystem::path& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kMagic)) return std::nullopt;
  std::uint64_t key_len = 0;
  if (!get(in, key_len) || key_len != key.size()) return std::nullopt;
  std::string stored(key_len, '\0');
  if (!in.read(stored.data(), static_cast<std::streamsize>(key_len)) || stored != key) return std::nullopt;
  LevelSetComponent c;
  std::int32_t p = 0, q = 0;
  std::uint64_t rows = 0;
  if (!get(in, p) || !get(in, q) || !get(in, c.root_tol) || !get(in, c.bracket.lo) || !get(in, c.bracket.hi) ||
      !get(in, c.start_bracket.lo) || !get(in, c.start_bracket.hi) ||
      !get_vec(in, c.phis) || !get(in, rows) || rows != c.phis.size())
    return std::nullopt;
  c.p = p;
  c.q = q;
  c.roots_per_phi.resize(rows);
  for (auto& r : c.roots_per_phi)
    if (!get_vec(in, r)) return std::nullopt;
  for (auto* v : {&c.mu_minus, &c.mu_plus, &c.nu_minus, &c.nu_plus})
    if (!get_vec(in, *v) || v->size() != rows) return std::nullopt;
  std::int32_t jumps = 0;
  if (!get(in, c.max_root_residual) || !get(in, jumps)) return std::nullopt;
  c.cardinality_jumps = jumps;
  return c;
}

}  // namespace torustwist
