#pragma once

// The acceptance suite: thirteen criteria covering the valuation identity,
// inclusion-exclusion, the degree-n representation, homogeneous decomposition,
// degree-0 classification, measure duality, the displacement-volume
// polynomial, the smooth pipeline, polynomiality/polarization, the mixed
// discriminant bridge, the one-dimensional classification, the degeneracy
// demos, and the continuity diagnostic. Each criterion pins its tolerance
// here; `epival repro <id>` and the acceptance binary both run this registry.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "epival/decompose.hpp"
#include "epival/harness.hpp"
#include "epival/hessian.hpp"
#include "epival/valuations.hpp"

namespace epival::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
};

namespace detail_acc {

inline TestFunction wide_bump(int dim) {
  return TestFunction::bump(dim, 4.0, 2, {{0, 0, 1.0}, {1, 0, 0.2}});
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail_acc

// 1. Valuation identity at 1e-9 over 1000 seeded lattice pairs per dimension;
//    the squared-volume control must fail by at least 1e-3.
inline CriterionResult criterion_valuation_identity(int workers) {
  using namespace detail_acc;
  bool ok = true;
  std::ostringstream details;
  for (int dim : {1, 2}) {
    SuiteReport rep =
        valuation_identity_suite(make_zeta_oracle(wide_bump(dim)), 1000, 20240601, dim, 1e-9,
                                 workers);
    ok = ok && rep.passed();
    details << "n=" << dim << " max defect " << fmt(rep.max_defect) << "; ";
  }
  SuiteReport control = valuation_identity_suite(squared_volume_oracle(), 200, 20240601, 2, 1e-9,
                                                 workers);
  bool control_fails = control.max_defect >= 1e-3;
  ok = ok && control_fails;
  details << "squared-volume control defect " << fmt(control.max_defect)
          << (control_fails ? " (fails as required)" : " (unexpectedly small)");
  return {1, "valuation identity", ok, details.str()};
}

// 2. Inclusion-exclusion for m = 3, 4 at 1e-8 over 200 cases each.
inline CriterionResult criterion_inclusion_exclusion(int workers) {
  using namespace detail_acc;
  bool ok = true;
  std::ostringstream details;
  for (int m : {3, 4}) {
    SuiteReport rep = inclusion_exclusion_suite(make_zeta_oracle(wide_bump(2)), m, 200, 7117, 2,
                                                1e-8, workers);
    ok = ok && rep.passed();
    details << "m=" << m << " max defect " << fmt(rep.max_defect) << "; ";
  }
  return {2, "inclusion-exclusion", ok, details.str()};
}

// 3. Representation: Z_zeta(ell_y + I_K) = zeta(y) V_n(K) to 1e-12 relative
//    over 500 random (y, K).
inline CriterionResult criterion_representation(int) {
  using namespace detail_acc;
  double worst = 0.0;
  for (int dim : {1, 2}) {
    TestFunction z = wide_bump(dim);
    ValuationOracle zo = make_zeta_oracle(z);
    for (int trial = 0; trial < 250; ++trial) {
      Rng rng(31007, static_cast<std::uint64_t>(dim * 1000 + trial));
      Vec y{rng.uniform(-2, 2), dim == 2 ? rng.uniform(-2, 2) : 0.0};
      std::vector<Vec> pts;
      for (int i = 0; i < 5; ++i) {
        pts.push_back({rng.uniform(-1.5, 1.5), dim == 2 ? rng.uniform(-1.5, 1.5) : 0.0});
      }
      Polyhedron k = Polyhedron::from_points(dim, pts);
      double got = body_valuation(zo, y, k);
      double want = z(y) * k.volume();
      worst = std::max(worst, std::abs(got - want) / (1.0 + std::abs(want)));
    }
  }
  return {3, "degree-n representation", worst <= 1e-12,
          "max relative defect " + detail_acc::fmt(worst)};
}

// 4. Homogeneous decomposition of c0 + cn Z_zeta: component defects at
//    1e-8 scale, reconstruction at 1e-10, homogeneity defects at 1e-9 over
//    lambda in {0.5, 1, 2, 3}.
inline CriterionResult criterion_decomposition(int) {
  using namespace detail_acc;
  double worst_comp = 0.0, worst_recon = 0.0, worst_hom = 0.0;
  for (int dim : {1, 2}) {
    TestFunction z = wide_bump(dim);
    ValuationOracle zeta = make_zeta_oracle(z);
    const double c0 = -1.75, cn = 2.5;
    ValuationOracle oracle;
    oracle.eval = [zeta, c0, cn](const CellPA& u) { return c0 + cn * zeta(u); };
    oracle.meta = {true, true, std::nullopt};
    for (int trial = 0; trial < 40; ++trial) {
      CellPA u = gen_cell_pa(40100 + trial, dim, 3 + trial % 4);
      double zu = oracle(u);
      double scale = 1.0 + std::abs(zu);
      auto comps = homogeneous_components(oracle, u, dim);
      worst_comp = std::max(worst_comp, std::abs(comps[0] - c0) / scale);
      for (int i = 1; i < dim; ++i) {
        worst_comp = std::max(worst_comp, std::abs(comps[static_cast<std::size_t>(i)]) / scale);
      }
      worst_comp = std::max(
          worst_comp, std::abs(comps[static_cast<std::size_t>(dim)] - cn * zeta(u)) / scale);
      double recon = 0.0;
      for (double c : comps) recon += c;
      worst_recon = std::max(worst_recon, std::abs(recon - zu) / scale);
      if (trial < 10) {
        worst_hom = std::max(worst_hom, verify_homogeneity(component_oracle(oracle, dim, 0), 0, u,
                                                           {0.5, 1.0, 2.0, 3.0}));
        worst_hom = std::max(worst_hom, verify_homogeneity(component_oracle(oracle, dim, dim),
                                                           dim, u, {0.5, 1.0, 2.0, 3.0}));
      }
    }
  }
  bool ok = worst_comp <= 1e-8 && worst_recon <= 1e-10 && worst_hom <= 1e-9;
  return {4, "homogeneous decomposition", ok,
          "components " + fmt(worst_comp) + ", reconstruction " + fmt(worst_recon) +
              ", homogeneity " + fmt(worst_hom)};
}

// 5. Degree-0 components of epi-translation invariant oracles are constant to
//    1e-8 scale across 100 random inputs.
inline CriterionResult criterion_degree0(int) {
  using namespace detail_acc;
  TestFunction z = wide_bump(2);
  ValuationOracle zeta = make_zeta_oracle(z);
  CellPA anchor = gen_cell_pa(555, 2, 4);
  std::vector<std::pair<std::string, ValuationOracle>> oracles;
  ValuationOracle affine_oracle;
  affine_oracle.eval = [zeta](const CellPA& u) { return 3.0 + 0.5 * zeta(u); };
  affine_oracle.meta = {true, true, std::nullopt};
  oracles.push_back({"3+0.5*zeta", affine_oracle});
  ValuationOracle conv_oracle;
  conv_oracle.eval = [zeta, anchor](const CellPA& u) {
    return zeta(inf_convolve({1.0, 1.0}, {u, anchor}));
  };
  conv_oracle.meta = {true, true, std::nullopt};
  oracles.push_back({"zeta([]anchor)", conv_oracle});

  bool ok = true;
  std::ostringstream details;
  for (auto& [name, oracle] : oracles) {
    double lo = kInf, hi = -kInf, scale = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
      CellPA u = gen_cell_pa(50200 + trial, 2, 3 + trial % 4);
      double c0 = homogeneous_components(oracle, u, 2)[0];
      lo = std::min(lo, c0);
      hi = std::max(hi, c0);
      scale = std::max(scale, std::abs(oracle(u)));
    }
    ok = ok && (hi - lo <= 1e-8 * scale);
    details << name << " spread " << fmt(hi - lo) << " (scale " << fmt(scale) << "); ";
  }
  return {5, "degree-0 classification", ok, details.str()};
}

// 6. Duality: Z_zeta-dual(v) = Z_zeta(v*) and Theta_i(v, eta) =
//    Theta_{n-i}(v*, eta-hat) at 1e-9 over 100 inputs (10 windows each).
inline CriterionResult criterion_duality(int) {
  using namespace detail_acc;
  double worst_val = 0.0;
  for (int dim : {1, 2}) {
    TestFunction z = wide_bump(dim);
    for (int trial = 0; trial < 100; ++trial) {
      MaxAffine v = gen_max_affine(60300 + trial, dim, 2 + trial % 5);
      double lhs = dual_zeta_valuation(z, v);
      double rhs = zeta_valuation(z, conjugate(v));
      worst_val = std::max(worst_val, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
  }
  double worst_theta = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    MaxAffine v = gen_max_affine(60400 + trial, 2, 3 + trial % 4);
    for (int wi = 0; wi < 10; ++wi) {
      Rng rng(60500, static_cast<std::uint64_t>(trial * 10 + wi));
      Window w{Polyhedron::box(2, {rng.uniform(-3, -0.5), rng.uniform(-3, -0.5)},
                               {rng.uniform(0.5, 3), rng.uniform(0.5, 3)}),
               Polyhedron::box(2, {rng.uniform(-3, -0.5), rng.uniform(-3, -0.5)},
                               {rng.uniform(0.5, 3), rng.uniform(0.5, 3)})};
      worst_theta = std::max(worst_theta, duality_check(v, w).max_discrepancy);
    }
  }
  bool ok = worst_val <= 1e-9 && worst_theta <= 1e-9;
  return {6, "conjugation duality", ok,
          "valuation defect " + fmt(worst_val) + ", measure defect " + fmt(worst_theta)};
}

// 7. Displacement-volume polynomial vs Monte-Carlo at s in {0.5, 1, 2} with
//    1e6 samples: within three standard errors in at least 95% of triples.
inline CriterionResult criterion_ps_polynomial(int workers) {
  using namespace detail_acc;
  int agree = 0, total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    CellPA u = gen_cell_pa(70600 + trial, 2, 4 + trial % 4);
    Rng rng(70700, static_cast<std::uint64_t>(trial));
    Window w{Polyhedron::box(2, {rng.uniform(-2.5, -1), rng.uniform(-2.5, -1)},
                             {rng.uniform(1, 2.5), rng.uniform(1, 2.5)}),
             Polyhedron::box(2, {rng.uniform(-2.5, -1), rng.uniform(-2.5, -1)},
                             {rng.uniform(1, 2.5), rng.uniform(1, 2.5)})};
    HessianMeasureTable t = hessian_measure(u, w);
    for (double s : {0.5, 1.0, 2.0}) {
      McEstimate mc =
          ps_volume_mc(u, s, w, 1000000, 70800 + static_cast<std::uint64_t>(trial), workers);
      ++total;
      if (std::abs(mc.estimate - ps_poly(t, s)) <= 3.0 * mc.stderr_ + 1e-9) ++agree;
    }
  }
  bool ok = agree * 100 >= total * 95;
  return {7, "displacement-volume polynomial vs Monte-Carlo", ok,
          std::to_string(agree) + "/" + std::to_string(total) + " triples within 3 sigma"};
}

// 8. Smooth pipeline: Theta_j(|x|^2/2, B x C) = vol(B) for j = 0..n within 1%
//    at h = 1/64, error decreasing as h halves.
inline CriterionResult criterion_smooth_pipeline(int) {
  using namespace detail_acc;
  Polyhedron b = Polyhedron::box(2, {-0.85, -1.024}, {0.999, 0.949});
  Polyhedron c = Polyhedron::box(2, {-3, -3}, {3, 3});
  double vol_b = b.volume();
  auto f = [](Vec p) { return 0.5 * norm2(p); };
  const double binom2[3] = {1, 2, 1};
  std::vector<double> errs;
  double err64 = 0.0;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    SmoothGridFunction v = SmoothGridFunction::from_callable(2, {-1.25, -1.25}, {1.25, 1.25}, h, f);
    TestFunction3 probe = TestFunction3::x_indicator(b);
    probe.y_slot = [c](Vec y) { return c.contains(y) ? 1.0 : 0.0; };
    double worst = 0.0;
    for (int j = 0; j <= 2; ++j) {
      double theta = smooth_valuation_quad(probe, j, v) / binom2[2 - j];
      worst = std::max(worst, std::abs(theta - vol_b) / vol_b);
    }
    errs.push_back(worst);
    if (h == 1.0 / 64) err64 = worst;
  }
  bool ok = err64 <= 0.01 && errs[0] > errs[1] && errs[1] > errs[2];
  return {8, "smooth pipeline", ok,
          "errors at h=1/32,1/64,1/128: " + fmt(errs[0]) + ", " + fmt(errs[1]) + ", " +
              fmt(errs[2])};
}

// 9. Polynomiality: fit residual at 1e-9 of the sample scale, polarization
//    agreeing with the fitted mixed value at 1e-7, epi-additivity of the
//    1-homogeneous component at 1e-8 in both dimensions.
inline CriterionResult criterion_polynomiality(int) {
  using namespace detail_acc;
  TestFunction z = wide_bump(2);
  ValuationOracle zeta = make_zeta_oracle(z);
  Polyhedron k = Polyhedron::box(2, {0, 0}, {1, 1});
  Polyhedron l = Polyhedron::from_points(2, {{0, 0}, {1.2, 0}, {0.3, 0.8}});
  CellPA ik = indicator(k), il = indicator(l);
  PolynomialFit fit = polynomial_fit(zeta, {ik, il}, {0.5, 1.0, 1.5, 2.0}, 2);
  double sample_scale = std::abs(zeta(inf_convolve({2.0, 2.0}, {ik, il})));
  bool fit_ok = fit.residual <= 1e-9 * std::max(1.0, sample_scale);

  MixedValuationTable table = mixed_valuations(fit);
  double polar = polarize(zeta, {ik, il});
  double mixed = table.value_for({1, 1});
  bool polar_ok = std::abs(polar - mixed) <= 1e-7 * (1.0 + std::abs(mixed));

  // epi-additivity of the degree-1 component
  double worst_add = 0.0;
  for (int dim : {1, 2}) {
    TestFunction zd = wide_bump(dim);
    ValuationOracle zo = make_zeta_oracle(zd);
    CellPA anchor = gen_cell_pa(911, dim, 3);
    ValuationOracle oracle;
    if (dim == 1) {
      oracle = zo;  // already 1-homogeneous
    } else {
      oracle.eval = [zo, anchor](const CellPA& u) {
        return zo(inf_convolve({1.0, 1.0}, {u, anchor}));
      };
      oracle.meta = {true, true, std::nullopt};
    }
    ValuationOracle z1 = component_oracle(oracle, dim, 1);
    for (int trial = 0; trial < 15; ++trial) {
      CellPA a = gen_cell_pa(90100 + trial, dim, 3);
      CellPA bfn = gen_cell_pa(90200 + trial, dim, 3);
      double lhs = z1(inf_convolve({1.0, 1.0}, {a, bfn}));
      double rhs = z1(a) + z1(bfn);
      worst_add = std::max(worst_add, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
  }
  bool ok = fit_ok && polar_ok && worst_add <= 1e-8;
  return {9, "polynomiality and polarization", ok,
          "fit residual " + fmt(fit.residual) + ", polarize gap " + fmt(std::abs(polar - mixed)) +
              ", additivity defect " + fmt(worst_add)};
}

// 10. Mixed-valuation / mixed-discriminant bridge for quadratics within 1%.
inline CriterionResult criterion_bridge(int) {
  using namespace detail_acc;
  TestFunction z = TestFunction::constant_bump(2, 1.0, 2, 1.0);
  SymMat m1 = SymMat::mat2(2.0, 0.3, 1.0);
  SymMat m2 = SymMat::mat2(1.0, -0.2, 1.5);
  double int_zeta = M_PI / 3.0;  // integral of (1 - |x|^2)_+^2

  auto sample = [&](double l1, double l2) {
    auto f = [&](Vec p) {
      SymMat m = m1 * l1 + m2 * l2;
      return 0.5 * (m.m[0][0] * p.x * p.x + 2 * m.m[0][1] * p.x * p.y + m.m[1][1] * p.y * p.y);
    };
    SmoothGridFunction v = SmoothGridFunction::from_callable(2, {-1.25, -1.25}, {1.25, 1.25},
                                                             1.0 / 64, f);
    return smooth_valuation_quad(TestFunction3::x_only(z), 0, v);
  };

  // fit the two-variable degree-2 expansion over the tensor grid
  std::vector<std::vector<int>> exps;
  std::vector<int> cur;
  epival::detail::enumerate_exponents(2, 2, cur, exps);
  std::vector<std::vector<double>> design;
  std::vector<double> values;
  for (double l1 : {0.5, 1.0, 1.5}) {
    for (double l2 : {0.5, 1.0, 1.5}) {
      values.push_back(sample(l1, l2));
      std::vector<double> row;
      for (const auto& e : exps) row.push_back(std::pow(l1, e[0]) * std::pow(l2, e[1]));
      design.push_back(row);
    }
  }
  std::vector<double> coeffs = epival::detail::lsq(design, values);
  auto coeff_for = [&](int e1, int e2) {
    for (std::size_t t = 0; t < exps.size(); ++t) {
      if (exps[t][0] == e1 && exps[t][1] == e2) return coeffs[t];
    }
    return 0.0;
  };

  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); };
  worst = std::max(worst, rel(coeff_for(2, 0), m1.det() * int_zeta));
  worst = std::max(worst, rel(coeff_for(0, 2), m2.det() * int_zeta));
  worst = std::max(worst,
                   rel(coeff_for(1, 1) / 2.0, mixed_discriminant({m1, m2}) * int_zeta));
  return {10, "mixed-discriminant bridge", worst <= 0.01,
          "worst relative gap " + fmt(worst)};
}

// 11. One-dimensional classification: Z = zeta0 + Z_zeta1 reproduces every
//     1-d PA function value to 1e-10.
inline CriterionResult criterion_classification_1d(int) {
  using namespace detail_acc;
  TestFunction z1 = wide_bump(1);
  const double zeta0 = 0.75;
  ValuationOracle oracle;
  ValuationOracle zo = make_zeta_oracle(z1);
  oracle.eval = [zo, zeta0](const CellPA& u) { return zeta0 + zo(u); };
  oracle.meta = {true, true, std::nullopt};
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    CellPA u = gen_cell_pa(110100 + trial, 1, 2 + trial % 5);
    double direct = oracle(u);
    double classified = zeta0;
    for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
      classified += u.sub.cells[i].poly.volume() * z1(u.pieces[i].slope);
    }
    worst = std::max(worst, std::abs(direct - classified));
  }
  return {11, "one-dimensional classification", worst <= 1e-10,
          "max residual " + fmt(worst)};
}

// 12. Degeneracy demos: the coercive-cone ratio within 1% of the sector
//     prediction; the growth sweep's exponential coefficient above 0.1 under
//     the conjugate-exponent convention while the polynomial control stays
//     below 1e-3.
inline CriterionResult criterion_degeneracy_demos(int) {
  using namespace detail_acc;
  TestFunction z = wide_bump(2);
  Vec y{1.0, 0.3};
  DivergenceReport div = coercive_divergence_demo(z, y, {{1, 0}, {0.6, 0.8}}, {1, 2, 4, 8});
  double ratio = div.rows.back().value_over_rn;
  bool div_ok = std::abs(ratio - div.predicted_ratio) <= 0.01 * std::abs(div.predicted_ratio);

  TestFunction eta = TestFunction::constant_bump(2, 3.0, 1, 9.0 / 5.0);
  GrowthReport growth = growth_demo(eta, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, 3.25, 1.0 / 64);
  bool growth_ok = growth.conjugate_sign.c1 > 0.1;

  MaxAffine v0 = gen_max_affine(120500, 2, 4);
  std::vector<double> lambdas = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> control_vals;
  for (double lam : lambdas) control_vals.push_back(dual_zeta_valuation(z, scale_values(v0, lam)));
  GrowthFit control = growth_fit(lambdas, control_vals, 2);
  bool control_ok = std::abs(control.c1) <= 1e-3;

  bool ok = div_ok && growth_ok && control_ok;
  return {12, "degeneracy demos", ok,
          "cone ratio " + fmt(ratio) + " vs " + fmt(div.predicted_ratio) + "; growth c1 " +
              fmt(growth.conjugate_sign.c1) + " (literal " + fmt(growth.literal_sign.c1) +
              "), control c1 " + fmt(control.c1)};
}

// 13. Continuity diagnostic: errors decrease monotonically over probe counts
//     {4, 8, 16, 32, 64} and the final error is at most 1% of the limit.
inline CriterionResult criterion_continuity(int) {
  using namespace detail_acc;
  double r = 1.6;
  TestFunction z = TestFunction::constant_bump(1, 2.0, 2, 1.0);
  double limit = 2.0 * (r - std::pow(r, 3) / 6.0 + std::pow(r, 5) / 80.0);
  ContinuityReport rep = continuity_suite(
      make_zeta_oracle(z), [](Vec p) { return 0.5 * p.x * p.x; },
      [](Vec p) { return Vec{p.x}; }, r, {4, 8, 16, 32, 64}, 1, limit);
  bool ok = rep.monotone && rep.errors.back() <= 0.01 * limit;
  std::ostringstream details;
  details << (rep.monotone ? "monotone" : "NOT monotone") << ", final error "
          << fmt(rep.errors.back()) << " of limit " << fmt(limit);
  return {13, "continuity diagnostic", ok, details.str()};
}

inline CriterionResult run_criterion(int id, int workers = 0) {
  if (workers <= 0) workers = default_workers();
  switch (id) {
    case 1: return criterion_valuation_identity(workers);
    case 2: return criterion_inclusion_exclusion(workers);
    case 3: return criterion_representation(workers);
    case 4: return criterion_decomposition(workers);
    case 5: return criterion_degree0(workers);
    case 6: return criterion_duality(workers);
    case 7: return criterion_ps_polynomial(workers);
    case 8: return criterion_smooth_pipeline(workers);
    case 9: return criterion_polynomiality(workers);
    case 10: return criterion_bridge(workers);
    case 11: return criterion_classification_1d(workers);
    case 12: return criterion_degeneracy_demos(workers);
    case 13: return criterion_continuity(workers);
    default: fail(errc::invalid_argument, "unknown criterion id " + std::to_string(id));
  }
}

inline constexpr int kCriterionCount = 13;

}  // namespace epival::acceptance
