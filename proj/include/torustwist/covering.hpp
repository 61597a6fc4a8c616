// Covering-space arithmetic between the plane, the cylinder S^1 x R and the
// torus T^2 = R^2 / Z^2. Every coordinate uses unit angular period.
#pragma once

#include <cstdint>

namespace torustwist {

/// Point of the universal cover. Both coordinates are unbounded.
struct PlanePoint {
  double phi = 0.0;
  double i = 0.0;

  friend PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.phi + b.phi, a.i + b.i}; }
  friend PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.phi - b.phi, a.i - b.i}; }
  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

/// Point of S^1 x R, phi in [0, 1).
struct CylinderPoint {
  double phi = 0.0;
  double i = 0.0;
  friend bool operator==(const CylinderPoint&, const CylinderPoint&) = default;
};

/// Point of T^2, both coordinates in [0, 1).
struct TorusPoint {
  double phi = 0.0;
  double i = 0.0;
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// Integer deck translation (di, dj) acting on the plane.
struct Deck {
  std::int64_t di = 0;
  std::int64_t dj = 0;

  friend Deck operator+(Deck a, Deck b) { return {a.di + b.di, a.dj + b.dj}; }
  friend bool operator==(const Deck&, const Deck&) = default;
};

/// x - floor(x) clamped into [0, 1). Results that round up to 1.0 map to 0.0.
double mod1(double x);

/// Signed distance from x to the nearest integer, in [-1/2, 1/2].
double circle_offset(double x);

CylinderPoint project_cylinder(PlanePoint p);
TorusPoint project_torus(PlanePoint p);
PlanePoint lift(TorusPoint x, Deck d = {});
PlanePoint lift(CylinderPoint x, std::int64_t di = 0);

PlanePoint translate(PlanePoint p, Deck d);

/// Sup-norm distance between the torus projections of two points.
double torus_distance(PlanePoint a, PlanePoint b);

/// A plane point written as a torus representative plus a deck translation.
/// Iterating on this form keeps the floating part bounded while the sheet
/// index is tracked exactly.
struct SheetPoint {
  TorusPoint base;
  Deck deck;

  PlanePoint plane() const { return lift(base, deck); }
};

SheetPoint decompose(PlanePoint p);

/// Image of a deck translation under any lift in the class TQ:
/// T(z + (i, j)) = T(z) + (i + j, j), so T^n carries (i, j) to (i + n j, j).
constexpr Deck push_deck(Deck d, std::int64_t n = 1) { return {d.di + n * d.dj, d.dj}; }

}  // namespace torustwist
