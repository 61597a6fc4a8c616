#include "torustwist/covering.hpp"

#include <algorithm>
#include <cmath>

namespace torustwist {

double mod1(double x) {
  // floor of a tiny negative x is -1 and the difference rounds to 1.0
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double circle_offset(double x) { return x - std::nearbyint(x); }

CylinderPoint project_cylinder(PlanePoint p) { return {mod1(p.phi), p.i}; }

TorusPoint project_torus(PlanePoint p) { return {mod1(p.phi), mod1(p.i)}; }

PlanePoint lift(TorusPoint x, Deck d) {
  return {x.phi + static_cast<double>(d.di), x.i + static_cast<double>(d.dj)};
}

PlanePoint lift(CylinderPoint x, std::int64_t di) { return {x.phi + static_cast<double>(di), x.i}; }

PlanePoint translate(PlanePoint p, Deck d) { return lift(TorusPoint{p.phi, p.i}, d); }

double torus_distance(PlanePoint a, PlanePoint b) {
  return std::max(std::abs(circle_offset(a.phi - b.phi)), std::abs(circle_offset(a.i - b.i)));
}

SheetPoint decompose(PlanePoint p) {
  const double fphi = std::floor(p.phi);
  const double fi = std::floor(p.i);
  SheetPoint out{{p.phi - fphi, p.i - fi}, {static_cast<std::int64_t>(fphi), static_cast<std::int64_t>(fi)}};
  if (out.base.phi >= 1.0) {
    out.base.phi = 0.0;
    ++out.deck.di;
  }
  if (out.base.i >= 1.0) {
    out.base.i = 0.0;
    ++out.deck.dj;
  }
  return out;
}

}  // namespace torustwist
