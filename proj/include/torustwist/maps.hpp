// Twist maps of the torus given through their lifts to the plane.
//
// A TwistFamily is a lift T(phi, I) = (T_phi, T_I) satisfying
//   T_I(phi + 1, I) = T_I(phi, I)        T_I(phi, I + 1) = T_I(phi, I) + 1
//   T_phi(phi + 1, I) = T_phi(phi, I) + 1  T_phi(phi, I + 1) = T_phi(phi, I) + 1
// with dT_phi/dI > 0. It therefore induces maps of the cylinder and of the
// torus, the latter homotopic to the shear (phi, I) -> (phi + I, I).
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "torustwist/covering.hpp"

namespace torustwist {

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Mat2 inverse() const;
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Orbit left the configured magnitude cap.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite derivative or map value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density w(I) = exp(rate * I) of an invariant measure dmu = w(I) dphi dI.
/// rate = 0 is Lebesgue measure.
struct ExactnessDensity {
  double rate = 0.0;

  double weight(double i) const;
  /// Antiderivative W with W' = w (W(I) = I for rate 0).
  double cumulative(double i) const;
};

/// Implementation side of a family. Built-ins override the analytic Jacobian;
/// the default is a central difference with relative step 1e-6.
class TwistModel {
 public:
  virtual ~TwistModel() = default;
  virtual PlanePoint forward(PlanePoint p) const = 0;
  virtual PlanePoint inverse(PlanePoint p) const = 0;
  virtual Mat2 jacobian(PlanePoint p) const;
  /// Generating function h(phi, phi') when the family has a closed form.
  virtual std::optional<double> generating(double phi, double phi_next) const;
};

Mat2 finite_difference_jacobian(const std::function<PlanePoint(PlanePoint)>& map, PlanePoint p,
                                double rel_step = 1e-6);

struct NamedParam {
  std::string name;
  double value;
};

class TwistFamily {
 public:
  TwistFamily(std::string name, std::vector<NamedParam> params, std::shared_ptr<const TwistModel> model,
              std::optional<ExactnessDensity> density = std::nullopt, double period_rescale = 1.0);

  PlanePoint forward(PlanePoint p) const { return model_->forward(p); }
  PlanePoint inverse(PlanePoint p) const { return model_->inverse(p); }
  Mat2 jacobian(PlanePoint p) const { return model_->jacobian(p); }
  std::optional<double> generating(double phi, double phi_next) const { return model_->generating(phi, phi_next); }

  const std::string& name() const { return name_; }
  const std::vector<NamedParam>& params() const { return params_; }
  std::optional<double> param(const std::string& key) const;
  const std::optional<ExactnessDensity>& density() const { return density_; }
  /// Factor between the family's natural angular period and the unit period
  /// used here (pi for the saddle-center family, 1 otherwise).
  double period_rescale() const { return period_rescale_; }

  /// Stable textual identity of family + parameters, used as a cache key.
  std::string key() const;

 private:
  std::string name_;
  std::vector<NamedParam> params_;
  std::shared_ptr<const TwistModel> model_;
  std::optional<ExactnessDensity> density_;
  double period_rescale_;
};

inline constexpr double kDivergenceCap = 1e12;

/// T^n(p); negative n iterates the inverse lift.
PlanePoint eval_lift(const TwistFamily& f, PlanePoint p, long n);

// Built-in families ---------------------------------------------------------

/// phi' = phi + I', I' = I - (k / 2 pi) sin(2 pi phi).
TwistFamily builtin_standard(double k);

/// Standard map with a uniform vertical offset added to I'. Not exact for
/// shift outside Z; shipped as a negative control for check_exactness.
TwistFamily builtin_standard_shifted(double k, double shift);

/// Saddle-center return map, rescaled from period pi to unit period:
/// with J(x) = alpha^2 cos^2 x + alpha^-2 sin^2 x and mu(x) = arctan(tan x / alpha^2),
///   I' = I + (gamma / pi) log J(pi phi),  phi' = mu(pi phi) / pi + I'.
/// Invariant density exp(pi I / gamma).
TwistFamily builtin_saddle_center(double alpha, double gamma);

/// phi' = f(phi) + I', I' = I - log f'(phi) with the Arnold circle map
/// f(phi) = phi + omega + (eps / 2 pi) sin(2 pi phi), |eps| < 1. Density exp(I).
TwistFamily builtin_circle_diffeo(double omega, double eps);

/// Same construction for a user supplied lift f of a circle diffeomorphism
/// (f(phi + 1) = f(phi) + 1, f' > 0). The Jacobian is taken by finite differences.
TwistFamily circle_diffeo_family(std::string name, std::function<double(double)> f,
                                 std::function<double(double)> fprime);

/// Family from arbitrary callables. Jacobian defaults to finite differences.
TwistFamily user_family(std::string name, std::function<PlanePoint(PlanePoint)> forward,
                        std::function<PlanePoint(PlanePoint)> inverse,
                        std::optional<ExactnessDensity> density = std::nullopt,
                        std::function<Mat2(PlanePoint)> jacobian = {});

// Structure checks ----------------------------------------------------------

struct StructureGrid {
  int n_phi = 64;
  int n_i = 64;
};

struct StructureReport {
  double min_twist = 0.0;            ///< min dT_phi/dI
  double max_dphi = 0.0;             ///< max |dT_phi/dphi|
  double drop_bound = 0.0;           ///< a with I' - I > -a on the grid
  std::optional<double> deviation_angle;
  double periodicity_residual = 0.0;
  double inverse_residual = 0.0;
};

StructureReport check_structure(const TwistFamily& f, StructureGrid grid = {});

/// Loop on the cylinder given as a graph I = height(phi) with 1-periodic height.
struct GraphLoop {
  std::function<double(double)> height;
  std::function<double(double)> slope;

  static GraphLoop constant(double level);
  /// Trigonometric interpolant through samples at uniformly spaced phi.
  static GraphLoop from_samples(const std::vector<CylinderPoint>& samples);
};

struct ExactnessResult {
  double flux = 0.0;            ///< mu(T(A) \ A) - mu(A \ T(A)) for A below the loop
  bool image_is_graph = true;
  double min_image_slope = 0.0; ///< min d p1(T(loop(t)))/dt; <= 0 means the image folds
};

ExactnessResult check_exactness(const TwistFamily& f, const GraphLoop& loop, int n_quad = 2048);

}  // namespace torustwist
