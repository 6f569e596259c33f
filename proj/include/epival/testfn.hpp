#pragma once

// Compactly supported continuous weights: truncated polynomial bumps
//   zeta(y) = q(y) * (1 - |y|^2 / rho^2)_+^k
// vanish exactly for |y| >= rho, so the support radius is known exactly.
// Arbitrary callables are accepted behind the unchecked constructor (no known
// support radius; usable wherever the radius is not consulted).

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "epival/error.hpp"
#include "epival/geometry.hpp"

namespace epival {

struct Monomial {
  int ex = 0;
  int ey = 0;
  double coeff = 0.0;
};

struct TestFunction {
  int dim = 1;
  std::vector<Monomial> poly;  // q(y) = sum coeff * y1^ex * y2^ey
  double rho = 1.0;
  int smoothness = 1;          // exponent k >= 1
  std::function<double(Vec)> raw;  // set only by unchecked()

  double operator()(const Vec& y) const {
    if (raw) return raw(y);
    double s = 1.0 - norm2(y) / (rho * rho);
    if (s <= 0.0) return 0.0;
    double q = 0.0;
    for (const Monomial& m : poly) {
      q += m.coeff * std::pow(y.x, m.ex) * (m.ey ? std::pow(y.y, m.ey) : 1.0);
    }
    return q * std::pow(s, smoothness);
  }

  bool has_exact_support() const { return !raw; }

  static TestFunction bump(int dim, double rho, int k, std::vector<Monomial> terms) {
    require(rho > 0.0, errc::invalid_argument, "bump: rho must be positive");
    require(k >= 1, errc::invalid_argument, "bump: smoothness exponent must be >= 1");
    TestFunction z;
    z.dim = dim;
    z.rho = rho;
    z.smoothness = k;
    z.poly = std::move(terms);
    return z;
  }

  static TestFunction constant_bump(int dim, double rho, int k, double c) {
    return bump(dim, rho, k, {{0, 0, c}});
  }

  static TestFunction unchecked(int dim, std::function<double(Vec)> f) {
    TestFunction z;
    z.dim = dim;
    z.rho = kInf;
    z.raw = std::move(f);
    return z;
  }
};

// Three-slot weight zeta(t, x, y) = f_t(t) * f_x(x) * f_y(y). Only the x slot
// is required to have compact support (checked against the quadrature grid at
// use sites by direct evaluation, not by a declared radius).
struct TestFunction3 {
  std::function<double(double)> t_slot;  // null means identically 1
  std::function<double(Vec)> x_slot;
  std::function<double(Vec)> y_slot;

  double operator()(double t, const Vec& x, const Vec& y) const {
    double v = 1.0;
    if (t_slot) v *= t_slot(t);
    if (x_slot) v *= x_slot(x);
    if (y_slot) v *= y_slot(y);
    return v;
  }

  static TestFunction3 x_only(const TestFunction& z) {
    TestFunction3 f;
    f.x_slot = [z](Vec x) { return z(x); };
    return f;
  }

  static TestFunction3 x_indicator(const Polyhedron& b) {
    TestFunction3 f;
    f.x_slot = [b](Vec x) { return b.contains(x) ? 1.0 : 0.0; };
    return f;
  }

  static TestFunction3 y_only(std::function<double(Vec)> g) {
    TestFunction3 f;
    f.y_slot = std::move(g);
    return f;
  }
};

}  // namespace epival
