// Level sets K(p, q) = { p1 T^q(phi, I) = phi + p } sampled on a grid of
// angles, and the graph functions that describe their separating component:
//   mu-(phi), mu+(phi)  lowest / highest root I on the vertical through phi
//   nu-(phi), nu+(phi)  lowest / highest height of the image T^q of those roots
// For a twist map T^q(phi, mu-) = (phi + p, nu+) and T^q(phi, mu+) = (phi + p, nu-).
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "torustwist/maps.hpp"

namespace torustwist {

class LevelSetBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LevelSetOptions {
  int n_scan = 512;                  ///< uniform sign-change scan for q > 1
  double root_tol = 1e-12;           ///< |p1 T^q(phi, r) - phi - p| target for stored roots
  std::optional<double> drop_bound;  ///< taken from check_structure when absent
  double bracket_cap = 65536.0;      ///< maximal expansion factor of the initial slack
};

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct LevelSetComponent {
  int p = 0;
  int q = 1;
  std::vector<double> phis;
  std::vector<std::vector<double>> roots_per_phi;
  std::vector<double> mu_minus, mu_plus, nu_minus, nu_plus;
  RootBracket start_bracket;        ///< initial bracket shared by every angle
  RootBracket bracket;              ///< union of the per-angle brackets actually used
  double root_tol = 0.0;
  double max_root_residual = 0.0;
  int cardinality_jumps = 0;        ///< neighbouring angles with different root counts
};

/// Initial search interval p/q +- (2 + drop_bound q).
RootBracket initial_bracket(int p, int q, double drop_bound);

/// Every sign change of g(I) = p1 T^q(phi, I) - phi - p in the (expanded)
/// bracket, bisected to opts.root_tol. Sorted ascending.
std::vector<double> solve_slice(const TwistFamily& f, int p, int q, double phi, RootBracket start,
                                const LevelSetOptions& opts, RootBracket* used = nullptr);

LevelSetComponent compute_levelset(const TwistFamily& f, int p, int q, int n_phi, const LevelSetOptions& opts = {});

namespace serial {
LevelSetComponent compute_levelset(const TwistFamily& f, int p, int q, int n_phi, const LevelSetOptions& opts = {});
}

struct ExchangeReport {
  double max_residual = 0.0;        ///< sup over phi of both exchange identities
  double ordering_violation = 0.0;  ///< how far any root image leaves [height(mu+ image), height(mu- image)]
  bool ordering_ok = true;
};

ExchangeReport verify_exchange(const LevelSetComponent& c, const TwistFamily& f);

/// C(p + l q, q) = C(p, q) + (0, l).
LevelSetComponent translate_component(const LevelSetComponent& c, int l);

/// Thread-safe component cache, optionally mirrored to <dir>/<hash>.bin.
class LevelSetCache {
 public:
  explicit LevelSetCache(std::optional<std::filesystem::path> dir = std::nullopt);

  std::shared_ptr<const LevelSetComponent> get_or_compute(const TwistFamily& f, int p, int q, int n_phi,
                                                          const LevelSetOptions& opts = {});
  static std::string cache_key(const TwistFamily& f, int p, int q, int n_phi, const LevelSetOptions& opts);
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const LevelSetComponent>> entries_;
};

void write_component(const std::filesystem::path& path, const std::string& key, const LevelSetComponent& c);
std::optional<LevelSetComponent> read_component(const std::filesystem::path& path, const std::string& key);

}  // namespace torustwist
