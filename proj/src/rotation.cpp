#include "torustwist/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace torustwist {

const char* to_string(RotationCase c) {
  switch (c) {
    case RotationCase::BoundedHorizontal: return "bounded_horizontal";
    case RotationCase::VerticalEscapePlus: return "vertical_escape_plus";
    case RotationCase::VerticalEscapeMinus: return "vertical_escape_minus";
    case RotationCase::Undetermined: break;
  }
  return "undetermined";
}

const char* to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::Case1: return "case1";
    case OrbitClass::Case2: return "case2";
    case OrbitClass::Undetermined: break;
  }
  return "undetermined";
}

OrbitWalker::OrbitWalker(const TwistFamily& f, PlanePoint start, double closure_tol, long max_closure_period)
    : f_(&f), closure_tol_(closure_tol), max_closure_period_(max_closure_period), current_(decompose(start)) {
  history_.push_back(current_);
}

std::optional<long> OrbitWalker::closure_period() const {
  if (!closed_) return std::nullopt;
  return static_cast<long>(history_.size());
}

void OrbitWalker::step() {
  ++steps_;
  if (closed_) {
    const long m = static_cast<long>(history_.size());
    if (++phase_ == m) {
      phase_ = 0;
      period_offset_ = cycle_shift_ + push_deck(period_offset_, m);
    }
    const SheetPoint& ref = history_[static_cast<std::size_t>(phase_)];
    current_ = {ref.base, ref.deck + push_deck(period_offset_, phase_)};
    return;
  }

  const SheetPoint img = decompose(f_->forward(lift(current_.base)));
  current_ = {img.base, img.deck + push_deck(current_.deck)};
  const double cap = kDivergenceCap;
  if (std::abs(static_cast<double>(current_.deck.di)) > cap || std::abs(static_cast<double>(current_.deck.dj)) > cap ||
      !std::isfinite(current_.base.phi) || !std::isfinite(current_.base.i))
    throw DivergenceError("orbit left the coordinate cap after " + std::to_string(steps_) + " steps");

  if (closure_tol_ <= 0.0 || history_.empty()) return;
  const SheetPoint& seed = history_.front();
  const PlanePoint here = lift(current_.base), there = lift(seed.base);
  if (torus_distance(here, there) < closure_tol_) {
    // T^m(z0) = z0 + S with S the integer part of the lifted displacement
    const Deck wrap{static_cast<std::int64_t>(std::nearbyint(here.phi - there.phi)),
                    static_cast<std::int64_t>(std::nearbyint(here.i - there.i))};
    cycle_shift_ = Deck{current_.deck.di - seed.deck.di, current_.deck.dj - seed.deck.dj} + wrap;
    closed_ = true;
    phase_ = 0;
    period_offset_ = cycle_shift_;
    current_ = {seed.base, seed.deck + period_offset_};
    return;
  }
  if (static_cast<long>(history_.size()) < max_closure_period_) {
    history_.push_back(current_);
  } else {
    closure_tol_ = 0.0;
    history_.clear();
    history_.shrink_to_fit();
  }
}

std::vector<PlanePoint> orbit_segment(const TwistFamily& f, PlanePoint start, long horizon, double closure_tol) {
  if (horizon < 1) throw std::invalid_argument("orbit_segment needs horizon >= 1");
  std::vector<PlanePoint> out;
  out.reserve(static_cast<std::size_t>(horizon) + 1);
  out.push_back(start);
  OrbitWalker walker(f, start, closure_tol);
  for (long n = 0; n < horizon; ++n) {
    walker.step();
    out.push_back(walker.current());
  }
  return out;
}

RotationEstimate estimate_rotation(const TwistFamily& f, PlanePoint start, long horizon, long window,
                                   const RotationOptions& opts) {
  if (window < 10 || horizon < 2 * window)
    throw std::invalid_argument("estimate_rotation needs horizon >= 2 * window >= 20");

  RotationEstimate e;
  OrbitWalker walker(f, start, opts.closure_tol);
  const SheetPoint origin = walker.sheet();
  // Measured against the origin's deck pushed n times, so seeds that differ
  // by a deck translation give bitwise identical displacements.
  auto displacement = [&origin](const SheetPoint& z, long n) {
    const Deck o = push_deck(origin.deck, n);
    return PlanePoint{static_cast<double>(z.deck.di - o.di) + (z.base.phi - origin.base.phi),
                      static_cast<double>(z.deck.dj - o.dj) + (z.base.i - origin.base.i)};
  };

  // Vertical increments are compared over a stride: the closure period when
  // the orbit is periodic, a tenth of the window otherwise.
  const long fallback_stride = std::max(1L, window / 10);
  const long keep_from = horizon - window - fallback_stride;
  std::vector<double> tail_i;  // dI for n >= keep_from
  tail_i.reserve(static_cast<std::size_t>(window + fallback_stride + 1));

  double i_lo = 0.0, i_hi = 0.0;
  double h_lo = INFINITY, h_hi = -INFINITY, v_lo = INFINITY, v_hi = -INFINITY;
  double prev_h = -INFINITY;
  bool h_increasing = true, h_decreasing = true;
  PlanePoint disp{};
  long reached = 0;
  try {
    for (long n = 1; n <= horizon; ++n) {
      walker.step();
      disp = displacement(walker.sheet(), n);
      reached = n;
      i_lo = std::min(i_lo, disp.i);
      i_hi = std::max(i_hi, disp.i);
      if (n >= keep_from) tail_i.push_back(disp.i);
      if (n > horizon - window) {
        const double h = disp.phi / static_cast<double>(n);
        const double v = disp.i / static_cast<double>(n);
        h_lo = std::min(h_lo, h), h_hi = std::max(h_hi, h);
        v_lo = std::min(v_lo, v), v_hi = std::max(v_hi, v);
        if (prev_h != -INFINITY) {
          if (h < prev_h) h_increasing = false;
          if (h > prev_h) h_decreasing = false;
        }
        prev_h = h;
      }
    }
  } catch (const DivergenceError&) {
    e.diverged = true;
  }

  e.horizon = reached;
  e.closure_period = walker.closure_period();
  e.i_range = i_hi - i_lo;
  e.vertical = reached > 0 ? disp.i / static_cast<double>(reached) : 0.0;
  e.horizontal = std::numeric_limits<double>::quiet_NaN();
  if (e.diverged) {
    e.case_tag = RotationCase::Undetermined;
    return e;
  }

  if (e.i_range < opts.bounded_threshold) {
    e.tail_spread = h_hi - h_lo;
    if (horizon >= opts.min_decisive_horizon) {
      e.case_tag = RotationCase::BoundedHorizontal;
      e.horizontal = mod1(disp.phi / static_cast<double>(horizon));
    }
    return e;
  }

  e.tail_spread = v_hi - v_lo;
  const double drift = disp.i;
  if (std::abs(drift) > opts.escape_threshold) {
    const long stride = e.closure_period ? std::min(*e.closure_period, fallback_stride) : fallback_stride;
    const long first = horizon - window;  // index of the first window step
    bool same_sign = true;
    for (long n = first; n <= horizon && same_sign; ++n) {
      const double inc = tail_i[static_cast<std::size_t>(n - keep_from)] -
                         tail_i[static_cast<std::size_t>(n - stride - keep_from)];
      if (!(drift > 0 ? inc > 0.0 : inc < 0.0)) same_sign = false;
    }
    const bool vanishing = std::abs(e.vertical) < e.tail_spread;
    if (same_sign && !vanishing) {
      e.case_tag = drift > 0 ? RotationCase::VerticalEscapePlus : RotationCase::VerticalEscapeMinus;
      e.horizontal = drift > 0 ? INFINITY : -INFINITY;
      e.cesaro_monotone = drift > 0 ? h_increasing : h_decreasing;
    }
  }
  return e;
}

OrbitClass classify_orbit(const RotationEstimate& e, const RotationOptions& opts) {
  switch (e.case_tag) {
    case RotationCase::BoundedHorizontal:
      if (e.i_range < opts.bounded_threshold && e.horizon >= opts.min_decisive_horizon) return OrbitClass::Case1;
      break;
    case RotationCase::VerticalEscapePlus:
    case RotationCase::VerticalEscapeMinus:
      if (std::abs(e.vertical) * static_cast<double>(e.horizon) > opts.escape_threshold) return OrbitClass::Case2;
      break;
    case RotationCase::Undetermined: break;
  }
  return OrbitClass::Undetermined;
}

std::vector<RotationEstimate> estimate_rotations(const TwistFamily& f, std::span<const PlanePoint> seeds,
                                                 long horizon, long window, const RotationOptions& opts) {
  std::vector<RotationEstimate> out(seeds.size());
  const long n = static_cast<long>(seeds.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < n; ++j) {
    try {
      out[static_cast<std::size_t>(j)] = estimate_rotation(f, seeds[static_cast<std::size_t>(j)], horizon, window, opts);
    } catch (...) {
#pragma omp critical(torustwist_rotation_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace serial {
std::vector<RotationEstimate> estimate_rotations(const TwistFamily& f, std::span<const PlanePoint> seeds,
                                                 long horizon, long window, const RotationOptions& opts) {
  std::vector<RotationEstimate> out;
  out.reserve(seeds.size());
  for (const PlanePoint& s : seeds) out.push_back(estimate_rotation(f, s, horizon, window, opts));
  return out;
}
}  // namespace serial

}  // namespace torustwist
