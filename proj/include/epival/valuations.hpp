#pragma once

// The classified valuations with exact PA evaluation:
//
//   Z_zeta(u)      = sum_cells V_n(P_i) zeta(g_i)       (= int_dom zeta(grad u))
//   Z_zeta^dual(v) = sum over kink vertices x_j of zeta(x_j) V_n(subdiff v(x_j))
//
// plus the duality wrapper Z*(u) = Z(u*), body-restricted valuations
// Z~_y(K) = Z(ell_y + I_K), and the cylinder functions that realize the
// compact-support argument.

#include <cassert>
#include <functional>
#include <optional>
#include <utility>

#include "epival/convexfn.hpp"
#include "epival/error.hpp"
#include "epival/testfn.hpp"

namespace epival {

// Caller-asserted metadata; the harness tests the claims instead of trusting
// them.
struct OracleMeta {
  bool epi_translation_invariant = false;
  bool continuous = false;
  std::optional<int> degree;
};

struct ValuationOracle {
  std::function<double(const CellPA&)> eval;
  OracleMeta meta;

  double operator()(const CellPA& u) const { return eval(u); }
};

struct DualValuationOracle {
  std::function<double(const MaxAffine&)> eval;
  OracleMeta meta;

  double operator()(const MaxAffine& v) const { return eval(v); }
};

// Exact evaluation of the degree-n classified valuation: the gradient is
// constant on cell interiors and cell boundaries are null sets.
inline double zeta_valuation(const TestFunction& zeta, const CellPA& u) {
  require(zeta.dim == u.dim, errc::dimension_mismatch, "zeta_valuation: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    double vol = u.sub.cells[i].poly.affine_dim() == u.dim ? u.sub.cells[i].poly.volume() : 0.0;
    if (vol > 0.0) total += vol * zeta(u.pieces[i].slope);
  }
  return total;
}

inline ValuationOracle make_zeta_oracle(const TestFunction& zeta) {
  ValuationOracle z;
  z.eval = [zeta](const CellPA& u) { return zeta_valuation(zeta, u); };
  z.meta = {true, true, std::nullopt};
  return z;
}

inline ValuationOracle make_constant_oracle(double c) {
  ValuationOracle z;
  z.eval = [c](const CellPA&) { return c; };
  z.meta = {true, true, 0};
  return z;
}

// Degree-n valuation on finite functions: mass zeta(x_j) * V_n(subdiff v(x_j))
// at the vertices x_j of the linearity complex of v. The vertices are the
// slopes of the full-dimensional cells of v*, and the subdifferential there is
// the hull of the pieces active at x_j. With crosscheck set, the conjugate
// route is evaluated too and both must agree.
inline double dual_zeta_valuation(const TestFunction& zeta, const MaxAffine& v,
                                  bool crosscheck = false) {
  require(zeta.dim == v.dim, errc::dimension_mismatch, "dual_zeta_valuation: dimension mismatch");
  require(v.dim == 1 || v.dim == 2, errc::dimension_unsupported, "dual_zeta_valuation: dim 1 or 2");
  CellPA u = conjugate(v);
  double total = 0.0;
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    if (u.sub.cells[i].poly.affine_dim() != u.dim) continue;
    Vec xj = u.pieces[i].slope;
    double val = v(xj);
    std::vector<Vec> active;
    for (const Affine& w : v.pieces) {
      if (std::abs(w(xj) - val) <= 1e-9 * (1.0 + std::abs(val))) active.push_back(w.slope);
    }
    double mass = Polyhedron::from_points(v.dim, active).volume();
    total += zeta(xj) * mass;
  }
  if (crosscheck) {
    double via_conjugate = zeta_valuation(zeta, u);
    require(std::abs(total - via_conjugate) <= 1e-8 * (1.0 + std::abs(total)),
            errc::oracle_failure, "dual_zeta_valuation: conjugate route disagrees");
  }
  return total;
}

inline DualValuationOracle make_dual_zeta_oracle(const TestFunction& zeta) {
  DualValuationOracle z;
  z.eval = [zeta](const MaxAffine& v) { return dual_zeta_valuation(zeta, v); };
  z.meta = {true, true, std::nullopt};
  return z;
}

// Z*(v) = Z(v*): oracle on finite functions from an oracle on super-coercive
// ones. Epi-translation invariance maps to dual epi-translation invariance.
inline DualValuationOracle dual_wrap(const ValuationOracle& z) {
  DualValuationOracle d;
  d.eval = [z](const MaxAffine& v) { return z(conjugate(v)); };
  d.meta = z.meta;
  return d;
}

inline ValuationOracle dual_wrap(const DualValuationOracle& z) {
  ValuationOracle d;
  d.eval = [z](const CellPA& u) { return z(conjugate(u)); };
  d.meta = z.meta;
  return d;
}

// Z~_y(K) = Z(ell_y + I_K), the body-restricted valuation.
inline double body_valuation(const ValuationOracle& z, const Vec& y, const Polyhedron& k) {
  require(k.is_bounded(), errc::unbounded, "body_valuation: unbounded body");
  return z(affine_plus_indicator({y, 0.0}, k));
}

struct CylinderWitness {
  CellPA fn;       // ell_y + I_C for the cylinder C
  double value;    // zeta_valuation of fn
  double ball_volume_defect;  // 0 for n <= 2: the unit (n-1)-ball is a segment
};

// Cylinder over the unit (n-1)-ball in y-perp with height 1/|zeta(y)| along y.
// Its valuation is sign(zeta(y)) * kappa_{n-1}, independent of |y|: the
// witness that a nonvanishing weight arbitrarily far out contradicts
// continuity.
inline CylinderWitness cylinder_witness(const TestFunction& zeta, const Vec& y) {
  double zy = zeta(y);
  require(std::abs(zy) > 0.0, errc::zero_weight, "cylinder_witness: zeta(y) = 0");
  double h = 1.0 / std::abs(zy);
  CellPA u;
  if (zeta.dim == 1) {
    double dir = y.x >= 0 ? 1.0 : -1.0;
    u = affine_plus_indicator({y, 0.0}, Polyhedron::from_points(1, {{0}, {dir * h}}));
  } else {
    Vec axis = norm(y) > kGeomTol ? normalized(y) : Vec{1, 0};
    Vec side = perp(axis);
    u = affine_plus_indicator(
        {y, 0.0},
        Polyhedron::from_points(2, {side, -side, side + axis * h, (-side) + axis * h}));
  }
  return {u, zeta_valuation(zeta, u), 0.0};
}

}  // namespace epival
