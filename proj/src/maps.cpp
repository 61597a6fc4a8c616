#include "torustwist/maps.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

namespace torustwist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

double wrap_pi(double x) { return x - kTwoPi * std::nearbyint(x / kTwoPi); }

class StandardModel final : public TwistModel {
 public:
  StandardModel(double k, double shift) : k_(k), amp_(k / kTwoPi), shift_(shift) {}

  PlanePoint forward(PlanePoint p) const override {
    const double i1 = p.i - amp_ * std::sin(kTwoPi * p.phi) + shift_;
    return {p.phi + i1, i1};
  }
  PlanePoint inverse(PlanePoint q) const override {
    const double phi = q.phi - q.i;
    return {phi, q.i - shift_ + amp_ * std::sin(kTwoPi * phi)};
  }
  Mat2 jacobian(PlanePoint p) const override {
    const double kc = k_ * std::cos(kTwoPi * p.phi);
    return {1.0 - kc, 1.0, -kc, 1.0};
  }
  std::optional<double> generating(double phi, double phi_next) const override {
    if (shift_ != 0.0) return std::nullopt;
    const double d = phi_next - phi;
    return 0.5 * d * d + k_ / (4.0 * kPi * kPi) * std::cos(kTwoPi * phi);
  }

 private:
  double k_, amp_, shift_;
};

class SaddleCenterModel final : public TwistModel {
 public:
  SaddleCenterModel(double alpha, double gamma) : a2_(alpha * alpha), gamma_(gamma) {}

  PlanePoint forward(PlanePoint p) const override {
    const double x = kPi * p.phi;
    const double i1 = p.i + gamma_ / kPi * std::log(big_j(x));
    return {angle(x) / kPi + i1, i1};
  }
  PlanePoint inverse(PlanePoint q) const override {
    const double x = angle_inverse(kPi * (q.phi - q.i));
    return {x / kPi, q.i - gamma_ / kPi * std::log(big_j(x))};
  }
  Mat2 jacobian(PlanePoint p) const override {
    const double x = kPi * p.phi;
    const double j = big_j(x);
    const double dj = (1.0 / a2_ - a2_) * std::sin(2.0 * x);
    const double g = gamma_ * dj / j;
    return {1.0 / j + g, 1.0, g, 1.0};
  }
  std::optional<double> generating(double phi, double phi_next) const override {
    return gamma_ * std::exp((kPi * phi_next - angle(kPi * phi)) / gamma_);
  }

 private:
  double big_j(double x) const {
    const double c = std::cos(x), s = std::sin(x);
    return a2_ * c * c + s * s / a2_;
  }
  // Continuous branch of arctan(tan(x) / alpha^2) with value 0 at 0. It lies in
  // the same quadrant as x, so the wrapped difference recovers the lift.
  double angle(double x) const { return x + wrap_pi(std::atan2(std::sin(x), a2_ * std::cos(x)) - x); }
  double angle_inverse(double y) const { return y + wrap_pi(std::atan2(a2_ * std::sin(y), std::cos(y)) - y); }

  double a2_, gamma_;
};

// Inverse of an increasing lift f of a circle map: f(x) - x is 1-periodic.
double invert_circle_lift(const std::function<double(double)>& f, const std::function<double(double)>& fprime,
                          double target) {
  double x = target - (f(target) - target);
  double lo = x - 1.0, hi = x + 1.0;
  while (f(lo) > target) lo -= 1.0;
  while (f(hi) < target) hi += 1.0;
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x) - target;
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x; else hi = x;
    double next = x - fx / fprime(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

class CircleDiffeoModel final : public TwistModel {
 public:
  CircleDiffeoModel(std::function<double(double)> f, std::function<double(double)> fp,
                    std::function<double(double)> fpp)
      : f_(std::move(f)), fp_(std::move(fp)), fpp_(std::move(fpp)) {}

  PlanePoint forward(PlanePoint p) const override {
    const double i1 = p.i - std::log(fp_(p.phi));
    return {f_(p.phi) + i1, i1};
  }
  PlanePoint inverse(PlanePoint q) const override {
    const double phi = invert_circle_lift(f_, fp_, q.phi - q.i);
    return {phi, q.i + std::log(fp_(phi))};
  }
  Mat2 jacobian(PlanePoint p) const override {
    if (!fpp_) return TwistModel::jacobian(p);
    const double d1 = fp_(p.phi);
    const double r = fpp_(p.phi) / d1;
    return {d1 - r, 1.0, -r, 1.0};
  }
  std::optional<double> generating(double phi, double phi_next) const override {
    return std::exp(phi_next - f_(phi));
  }

 private:
  std::function<double(double)> f_, fp_, fpp_;
};

class UserModel final : public TwistModel {
 public:
  UserModel(std::function<PlanePoint(PlanePoint)> fwd, std::function<PlanePoint(PlanePoint)> inv,
            std::function<Mat2(PlanePoint)> jac)
      : fwd_(std::move(fwd)), inv_(std::move(inv)), jac_(std::move(jac)) {}

  PlanePoint forward(PlanePoint p) const override { return fwd_(p); }
  PlanePoint inverse(PlanePoint p) const override { return inv_(p); }
  Mat2 jacobian(PlanePoint p) const override { return jac_ ? jac_(p) : TwistModel::jacobian(p); }

 private:
  std::function<PlanePoint(PlanePoint)> fwd_, inv_;
  std::function<Mat2(PlanePoint)> jac_;
};

bool finite(PlanePoint p) { return std::isfinite(p.phi) && std::isfinite(p.i); }
bool finite(const Mat2& m) {
  return std::isfinite(m.a) && std::isfinite(m.b) && std::isfinite(m.c) && std::isfinite(m.d);
}

double sup_dist(PlanePoint a, PlanePoint b) { return std::max(std::abs(a.phi - b.phi), std::abs(a.i - b.i)); }

}  // namespace

Mat2 Mat2::inverse() const {
  const double dt = det();
  return {d / dt, -b / dt, -c / dt, a / dt};
}

double ExactnessDensity::weight(double i) const { return std::exp(rate * i); }

double ExactnessDensity::cumulative(double i) const {
  return rate == 0.0 ? i : std::exp(rate * i) / rate;
}

Mat2 finite_difference_jacobian(const std::function<PlanePoint(PlanePoint)>& map, PlanePoint p,
                                double rel_step) {
  const double hp = rel_step * std::max(1.0, std::abs(p.phi));
  const double hi = rel_step * std::max(1.0, std::abs(p.i));
  const PlanePoint fp = map({p.phi + hp, p.i}), fm = map({p.phi - hp, p.i});
  const PlanePoint gp = map({p.phi, p.i + hi}), gm = map({p.phi, p.i - hi});
  return {(fp.phi - fm.phi) / (2 * hp), (gp.phi - gm.phi) / (2 * hi), (fp.i - fm.i) / (2 * hp),
          (gp.i - gm.i) / (2 * hi)};
}

Mat2 TwistModel::jacobian(PlanePoint p) const {
  return finite_difference_jacobian([this](PlanePoint q) { return forward(q); }, p);
}

std::optional<double> TwistModel::generating(double, double) const { return std::nullopt; }

TwistFamily::TwistFamily(std::string name, std::vector<NamedParam> params, std::shared_ptr<const TwistModel> model,
                         std::optional<ExactnessDensity> density, double period_rescale)
    : name_(std::move(name)),
      params_(std::move(params)),
      model_(std::move(model)),
      density_(density),
      period_rescale_(period_rescale) {}

std::optional<double> TwistFamily::param(const std::string& key) const {
  for (const auto& p : params_)
    if (p.name == key) return p.value;
  return std::nullopt;
}

std::string TwistFamily::key() const {
  std::string out = name_;
  char buf[64];
  for (const auto& p : params_) {
    std::snprintf(buf, sizeof buf, ";%s=%.17g", p.name.c_str(), p.value);
    out += buf;
  }
  return out;
}

PlanePoint eval_lift(const TwistFamily& f, PlanePoint p, long n) {
  const bool backward = n < 0;
  for (long step = 0, count = backward ? -n : n; step < count; ++step) {
    p = backward ? f.inverse(p) : f.forward(p);
    if (!(std::abs(p.phi) <= kDivergenceCap && std::abs(p.i) <= kDivergenceCap))
      throw DivergenceError("orbit of " + f.name() + " left the coordinate cap after " + std::to_string(step + 1) +
                            " steps");
  }
  return p;
}

TwistFamily builtin_standard(double k) {
  return TwistFamily("standard", {{"k", k}}, std::make_shared<StandardModel>(k, 0.0), ExactnessDensity{0.0});
}

TwistFamily builtin_standard_shifted(double k, double shift) {
  return TwistFamily("standard_shifted", {{"k", k}, {"shift", shift}}, std::make_shared<StandardModel>(k, shift),
                     ExactnessDensity{0.0});
}

TwistFamily builtin_saddle_center(double alpha, double gamma) {
  if (!(alpha > 0.0) || !(gamma > 0.0))
    throw ParameterError("saddle_center requires alpha > 0 and gamma > 0");
  return TwistFamily("saddle_center", {{"alpha", alpha}, {"gamma", gamma}},
                     std::make_shared<SaddleCenterModel>(alpha, gamma), ExactnessDensity{kPi / gamma}, kPi);
}

TwistFamily builtin_circle_diffeo(double omega, double eps) {
  if (!(std::abs(eps) < 1.0)) throw ParameterError("circle_diffeo requires |eps| < 1");
  auto f = [omega, eps](double x) { return x + omega + eps / kTwoPi * std::sin(kTwoPi * x); };
  auto fp = [eps](double x) { return 1.0 + eps * std::cos(kTwoPi * x); };
  auto fpp = [eps](double x) { return -kTwoPi * eps * std::sin(kTwoPi * x); };
  return TwistFamily("circle_diffeo", {{"omega", omega}, {"eps", eps}},
                     std::make_shared<CircleDiffeoModel>(f, fp, fpp), ExactnessDensity{1.0});
}

TwistFamily circle_diffeo_family(std::string name, std::function<double(double)> f,
                                 std::function<double(double)> fprime) {
  return TwistFamily(std::move(name), {}, std::make_shared<CircleDiffeoModel>(std::move(f), std::move(fprime), nullptr),
                     ExactnessDensity{1.0});
}

TwistFamily user_family(std::string name, std::function<PlanePoint(PlanePoint)> forward,
                        std::function<PlanePoint(PlanePoint)> inverse, std::optional<ExactnessDensity> density,
                        std::function<Mat2(PlanePoint)> jacobian) {
  return TwistFamily(std::move(name), {},
                     std::make_shared<UserModel>(std::move(forward), std::move(inverse), std::move(jacobian)),
                     density);
}

StructureReport check_structure(const TwistFamily& f, StructureGrid grid) {
  if (grid.n_phi < 1 || grid.n_i < 1) throw std::invalid_argument("structure grid must be non-empty");
  StructureReport r;
  r.min_twist = INFINITY;
  double max_drop = -INFINITY;
  double cot_beta = 0.0;
  bool cone_ok = true;
  for (int a = 0; a < grid.n_phi; ++a) {
    for (int b = 0; b < grid.n_i; ++b) {
      const PlanePoint p{static_cast<double>(a) / grid.n_phi, static_cast<double>(b) / grid.n_i};
      const Mat2 jac = f.jacobian(p);
      const PlanePoint img = f.forward(p);
      if (!finite(jac) || !finite(img))
        throw EvaluationError("non-finite map or Jacobian at (" + std::to_string(p.phi) + ", " +
                              std::to_string(p.i) + ")");
      r.min_twist = std::min(r.min_twist, jac.b);
      r.max_dphi = std::max(r.max_dphi, std::abs(jac.a));
      max_drop = std::max(max_drop, p.i - img.i);

      const PlanePoint sh_phi = f.forward({p.phi + 1.0, p.i});
      const PlanePoint sh_i = f.forward({p.phi, p.i + 1.0});
      r.periodicity_residual = std::max({r.periodicity_residual, sup_dist(sh_phi, {img.phi + 1.0, img.i}),
                                         sup_dist(sh_i, {img.phi + 1.0, img.i + 1.0})});
      r.inverse_residual = std::max(r.inverse_residual, sup_dist(f.inverse(img), p));

      // DT (0,1) must point into the cone C_I(beta), DT^-1 (0,1) into C_II(beta).
      const Mat2 jinv = f.jacobian(f.inverse(p)).inverse();
      if (!finite(jinv)) throw EvaluationError("singular Jacobian in deviation-angle check");
      if (jac.b <= 0.0 || jinv.b >= 0.0) {
        cone_ok = false;
      } else {
        cot_beta = std::max({cot_beta, std::abs(jac.d / jac.b), std::abs(jinv.d / jinv.b)});
      }
    }
  }
  r.drop_bound = std::max(0.0, max_drop);
  if (cone_ok && cot_beta > 0.0) r.deviation_angle = std::atan(1.0 / cot_beta);
  return r;
}

GraphLoop GraphLoop::constant(double level) {
  return {[level](double) { return level; }, [](double) { return 0.0; }};
}

GraphLoop GraphLoop::from_samples(const std::vector<CylinderPoint>& samples) {
  const std::size_t m = samples.size();
  if (m < 3) throw std::invalid_argument("loop needs at least 3 samples");
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(samples[j].phi - static_cast<double>(j) / static_cast<double>(m)) > 1e-12)
      throw std::invalid_argument("loop samples must sit at phi = j/m");
  }
  // Coefficients of the trigonometric interpolant, modes |n| <= m/2.
  const int half = static_cast<int>(m / 2);
  std::vector<std::complex<double>> coef(static_cast<std::size_t>(2 * half + 1));
  for (int n = -half; n <= half; ++n) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      acc += samples[j].i * std::polar(1.0, -kTwoPi * n * static_cast<double>(j) / static_cast<double>(m));
    acc /= static_cast<double>(m);
    // the Nyquist mode is split between +half and -half for even m
    if (m % 2 == 0 && std::abs(n) == half) acc *= 0.5;
    coef[static_cast<std::size_t>(n + half)] = acc;
  }
  auto shared = std::make_shared<std::vector<std::complex<double>>>(std::move(coef));
  auto eval = [shared, half](double x, bool derivative) {
    std::complex<double> acc = 0.0;
    for (int n = -half; n <= half; ++n) {
      std::complex<double> term = (*shared)[static_cast<std::size_t>(n + half)] * std::polar(1.0, kTwoPi * n * x);
      if (derivative) term *= std::complex<double>(0.0, kTwoPi * n);
      acc += term;
    }
    return acc.real();
  };
  return {[eval](double x) { return eval(x, false); }, [eval](double x) { return eval(x, true); }};
}

ExactnessResult check_exactness(const TwistFamily& f, const GraphLoop& loop, int n_quad) {
  if (!f.density()) throw std::invalid_argument("family " + f.name() + " declares no invariant density");
  if (n_quad < 2 || n_quad % 2 != 0) throw std::invalid_argument("n_quad must be a positive even number");
  const ExactnessDensity w = *f.density();
  ExactnessResult out;
  out.min_image_slope = INFINITY;
  // Flux = int_0^1 W(Y(t)) X'(t) dt - int_0^1 W(c(t)) dt, where (X, Y) = T(t, c(t)).
  double acc = 0.0;
  for (int j = 0; j <= n_quad; ++j) {
    const double t = static_cast<double>(j) / n_quad;
    const PlanePoint p{t, loop.height(t)};
    const PlanePoint img = f.forward(p);
    const Mat2 jac = f.jacobian(p);
    const double dx = jac.a + jac.b * loop.slope(t);
    out.min_image_slope = std::min(out.min_image_slope, dx);
    const double val = w.cumulative(img.i) * dx - w.cumulative(p.i);
    const double weight = (j == 0 || j == n_quad) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    acc += weight * val;
  }
  out.flux = acc / (3.0 * n_quad);
  out.image_is_graph = out.min_image_slope > 0.0;
  return out;
}

}  // namespace torustwist
