#pragma once

// Random instance generation and the theorem-level property suites: the
// valuation identity, inclusion-exclusion, continuity along PA approximations,
// and the two degeneracy demos (divergence on coercive cones, super-polynomial
// growth without vertical invariance). All randomness is counter-based from
// named seeds; reports are deterministic for a fixed (seed, case count).

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epival/convexfn.hpp"
#include "epival/decompose.hpp"
#include "epival/error.hpp"
#include "epival/hessian.hpp"
#include "epival/parallel.hpp"
#include "epival/rng.hpp"
#include "epival/valuations.hpp"

namespace epival {

// Deterministic-from-seed max-affine: slopes in the R-ball, intercepts in the
// spread interval. Pruning may drop redundant pieces.
inline MaxAffine gen_max_affine(std::uint64_t seed, int dim, int m, double slope_radius = 1.5,
                                double intercept_spread = 1.0) {
  require(m >= 1, errc::invalid_argument, "gen_max_affine: need at least one piece");
  Rng rng(seed);
  std::vector<Affine> pieces;
  for (int i = 0; i < m; ++i) {
    Vec s;
    do {
      s = {rng.uniform(-slope_radius, slope_radius),
           dim == 2 ? rng.uniform(-slope_radius, slope_radius) : 0.0};
    } while (norm(s) > slope_radius);
    pieces.push_back({s, rng.uniform(-intercept_spread, intercept_spread)});
  }
  return max_affine(dim, pieces);
}

inline CellPA gen_cell_pa(std::uint64_t seed, int dim, int m, double slope_radius = 1.5,
                          double intercept_spread = 1.0) {
  return conjugate(gen_max_affine(seed, dim, m, slope_radius, intercept_spread));
}

// A pair with certified convex min: a common PA function w restricted to
// boxes P, Q overlapping along one axis (so P u Q is a box). Then
// u v v = w + I_{P cap Q} and u ^ v = w + I_{P u Q}, both convex.
struct LatticePair {
  CellPA u, v;
  std::string descriptor;
};

inline LatticePair gen_lattice_pair(std::uint64_t seed, int dim) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng(seed, static_cast<std::uint64_t>(attempt));
    double t0 = rng.uniform(-0.3, 0.3);
    double la = rng.uniform(0.1, 0.9), ra = rng.uniform(0.1, 0.9);
    double lb = rng.uniform(0.1, 0.9), rb = rng.uniform(0.1, 0.9);
    bool swap_axis = dim == 2 && rng.next_below(2) == 1;
    Polyhedron p, q;
    if (dim == 1) {
      p = Polyhedron::box(1, {t0 - la, 0}, {t0 + ra, 0});
      q = Polyhedron::box(1, {t0 - lb, 0}, {t0 + rb, 0});
    } else {
      // both boxes share the cross-section so the union stays a box
      double c0 = rng.uniform(-1.0, -0.1);
      double c1 = rng.uniform(0.1, 1.0);
      p = swap_axis ? Polyhedron::box(2, {c0, t0 - la}, {c1, t0 + ra})
                    : Polyhedron::box(2, {t0 - la, c0}, {t0 + ra, c1});
      q = swap_axis ? Polyhedron::box(2, {c0, t0 - lb}, {c1, t0 + rb})
                    : Polyhedron::box(2, {t0 - lb, c0}, {t0 + rb, c1});
    }
    MaxAffine w = gen_max_affine(rng.next_u64(), dim, 3, 1.0, 0.5);
    CellPA u = restrict_to(w, p);
    CellPA v = restrict_to(w, q);
    if (guarded_min(u, v).has_value()) {
      return {u, v, "common-function-on-overlapping-boxes"};
    }
  }
  fail(errc::retry_exhausted, "gen_lattice_pair: no certified pair in 100 attempts");
}

struct SuiteFailure {
  std::uint64_t case_index = 0;
  std::uint64_t seed = 0;
  double defect = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t cases = 0;
  double max_defect = 0.0;
  double tolerance = 0.0;
  std::vector<SuiteFailure> failures;

  bool passed() const { return failures.empty(); }
};

namespace detail {

inline SuiteReport run_cases(const std::string& name, std::uint64_t cases, std::uint64_t seed,
                             double tolerance, int workers,
                             const std::function<double(std::uint64_t case_seed)>& defect_of) {
  SuiteReport rep;
  rep.suite = name;
  rep.cases = cases;
  rep.tolerance = tolerance;
  std::vector<double> defects(cases, 0.0);
  parallel_for(cases, workers, [&](std::size_t i) {
    Rng mix(seed, i);
    defects[i] = defect_of(mix.next_u64());
  });
  for (std::uint64_t i = 0; i < cases; ++i) {
    rep.max_defect = std::max(rep.max_defect, defects[i]);
    if (!(defects[i] <= tolerance)) {
      Rng mix(seed, i);
      rep.failures.push_back({i, mix.next_u64(), defects[i]});
    }
  }
  return rep;
}

}  // namespace detail

// Z(u v v) + Z(u ^ v) = Z(u) + Z(v) on certified lattice pairs; scale for the
// relative defect is 1 + the largest of the four values.
inline SuiteReport valuation_identity_suite(const ValuationOracle& z, std::uint64_t cases,
                                            std::uint64_t seed, int dim, double tolerance = 1e-9,
                                            int workers = 0) {
  if (workers <= 0) workers = default_workers();
  return detail::run_cases(
      dim == 1 ? "valuation-identity-1d" : "valuation-identity-2d", cases, seed, tolerance,
      workers, [&z, dim](std::uint64_t cs) {
        LatticePair pair = gen_lattice_pair(cs, dim);
        CellPA mx = pointwise_max(pair.u, pair.v);
        auto mn = guarded_min(pair.u, pair.v);
        double a = z(mx), b = z(*mn), c = z(pair.u), d = z(pair.v);
        double scale =
            1.0 + std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
        return std::abs(a + b - c - d) / scale;
      });
}

// Inclusion-exclusion over m functions w + I_{P_j} on boxes sharing a common
// anchor slab (so every partial max and the total min stay convex):
// Z(min_j u_j) = sum over nonempty J of (-1)^{|J|-1} Z(max_{j in J} u_j).
inline SuiteReport inclusion_exclusion_suite(const ValuationOracle& z, int m,
                                             std::uint64_t cases, std::uint64_t seed, int dim,
                                             double tolerance = 1e-8, int workers = 0) {
  require(m >= 2 && m <= 4, errc::invalid_argument, "inclusion_exclusion_suite: m in 2..4");
  if (workers <= 0) workers = default_workers();
  return detail::run_cases(
      "inclusion-exclusion-m" + std::to_string(m), cases, seed, tolerance, workers,
      [&z, m, dim](std::uint64_t cs) {
        Rng rng(cs);
        double t0 = rng.uniform(-0.2, 0.2);
        double c0 = rng.uniform(-1.0, -0.1), c1 = rng.uniform(0.1, 1.0);
        MaxAffine w = gen_max_affine(rng.next_u64(), dim, 3, 1.0, 0.5);
        std::vector<CellPA> us;
        for (int j = 0; j < m; ++j) {
          double lo = t0 - rng.uniform(0.05, 0.8), hi = t0 + rng.uniform(0.05, 0.8);
          Polyhedron pj = dim == 1 ? Polyhedron::box(1, {lo, 0}, {hi, 0})
                                   : Polyhedron::box(2, {lo, c0}, {hi, c1});
          us.push_back(restrict_to(w, pj));
        }
        CellPA all_min = us[0];
        for (int j = 1; j < m; ++j) {
          auto mn = guarded_min(all_min, us[static_cast<std::size_t>(j)]);
          require(mn.has_value(), errc::oracle_failure, "inclusion-exclusion: min not convex");
          all_min = *mn;
        }
        double lhs = z(all_min);
        double rhs = 0.0;
        double scale = 1.0 + std::abs(lhs);
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
          std::optional<CellPA> uj;
          int bits = 0;
          for (int j = 0; j < m; ++j) {
            if (!(mask & (1u << j))) continue;
            ++bits;
            uj = uj ? pointwise_max(*uj, us[static_cast<std::size_t>(j)])
                    : us[static_cast<std::size_t>(j)];
          }
          double val = z(*uj);
          scale = std::max(scale, 1.0 + std::abs(val));
          rhs += (bits % 2 == 1 ? 1.0 : -1.0) * val;
        }
        return std::abs(lhs - rhs) / scale;
      });
}

struct ContinuityReport {
  std::vector<int> probe_counts;
  std::vector<double> values;   // Z(u_k)
  double limit = 0.0;           // supplied or Richardson-extrapolated
  std::vector<double> errors;   // |Z(u_k) - limit|
  EpiDistanceReport epi;
  bool monotone = true;
};

// PA sequence toward a smooth super-coercive target, built by tangent-sampling
// the conjugate of the target on [-r, r]^dim grids and conjugating back;
// epi-convergence of the sequence transfers through the conjugation.
inline ContinuityReport continuity_suite(const ValuationOracle& z,
                                         const std::function<double(Vec)>& target_conjugate,
                                         const std::function<Vec(Vec)>& target_conjugate_grad,
                                         double probe_radius, const std::vector<int>& probe_counts,
                                         int dim, std::optional<double> known_limit = {}) {
  ContinuityReport rep;
  rep.probe_counts = probe_counts;
  std::vector<CellPA> seq;
  for (int k : probe_counts) {
    std::vector<Vec> probes;
    for (int i = 0; i < k; ++i) {
      double x = -probe_radius + 2.0 * probe_radius * i / (k - 1);
      if (dim == 1) {
        probes.push_back({x});
      } else {
        for (int j = 0; j < k; ++j) {
          probes.push_back({x, -probe_radius + 2.0 * probe_radius * j / (k - 1)});
        }
      }
    }
    MaxAffine vk = sample_approx(target_conjugate, probes, dim, target_conjugate_grad);
    seq.push_back(conjugate(vk));
    rep.values.push_back(z(seq.back()));
  }
  if (known_limit) {
    rep.limit = *known_limit;
  } else if (rep.values.size() >= 2) {
    double a = rep.values[rep.values.size() - 2], b = rep.values.back();
    rep.limit = b + (b - a) / 3.0;  // O(h^2) Richardson guess
  } else {
    rep.limit = rep.values.back();
  }
  for (double v : rep.values) rep.errors.push_back(std::abs(v - rep.limit));
  for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i) {
    rep.monotone = rep.monotone && rep.errors[i + 1] <= rep.errors[i] + 1e-15;
  }
  double mn = min_value(seq.back());
  rep.epi = epi_distance_report(seq, seq.back(), {mn + 0.25, mn + 0.5, mn + 1.0});
  return rep;
}

struct DivergenceRow {
  double radius = 0.0;
  double value = 0.0;
  double value_over_rn = 0.0;
};

struct DivergenceReport {
  std::vector<DivergenceRow> rows;
  double cone_unit_volume = 0.0;  // exact sector volume of C cap unit ball
  double predicted_ratio = 0.0;   // zeta(y) * cone_unit_volume
};

// Z_zeta(ell_y + I_{C cap R ball}) for growing R: grows like R^n, the numeric
// witness that the valuation admits no finite continuous extension to the
// coercive limit ell_y + I_C. The ball is a 256-gon in the plane.
inline DivergenceReport coercive_divergence_demo(const TestFunction& zeta, const Vec& y,
                                                 const std::vector<Vec>& cone_rays,
                                                 const std::vector<double>& radii) {
  require(std::abs(zeta(y)) > 0.0, errc::zero_weight, "divergence demo: zeta(y) = 0");
  int dim = zeta.dim;
  for (const Vec& r : cone_rays) {
    require(dot(r, y) > kGeomTol, errc::invalid_argument,
            "divergence demo: ell_y + I_C must be coercive (<r, y> > 0 for cone rays)");
  }
  Polyhedron cone = Polyhedron::from_vrep(dim, {{0, 0}}, cone_rays);
  DivergenceReport rep;
  if (dim == 1) {
    rep.cone_unit_volume = 1.0;
  } else {
    Vec a = normalized(cone_rays.front());
    Vec b = normalized(cone_rays.back());
    rep.cone_unit_volume = 0.5 * std::abs(std::atan2(cross(a, b), dot(a, b)));
  }
  rep.predicted_ratio = zeta(y) * rep.cone_unit_volume;
  for (double r : radii) {
    Polyhedron ball = dim == 1 ? Polyhedron::box(1, {-r, 0}, {r, 0})
                               : Polyhedron::regular_polygon({0, 0}, r, 256);
    Polyhedron trunc = intersect(cone, ball);
    CellPA u = affine_plus_indicator({y, 0.0}, trunc);
    double val = zeta_valuation(zeta, u);
    rep.rows.push_back({r, val, val / std::pow(r, dim)});
  }
  return rep;
}

struct GrowthFit {
  std::vector<double> lambdas;
  std::vector<double> values;
  double c0 = 0.0;  // log-scale intercept
  double c1 = 0.0;  // exponential coefficient: ~0 for polynomial growth
};

// Least squares of log|values| = c0 + n log(lambda) + c1 lambda.
inline GrowthFit growth_fit(const std::vector<double>& lambdas, const std::vector<double>& values,
                            int n) {
  require(lambdas.size() == values.size() && lambdas.size() >= 2, errc::invalid_argument,
          "growth_fit: need matching sweeps");
  double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    require(values[i] != 0.0 && lambdas[i] > 0.0, errc::invalid_argument,
            "growth_fit: need positive lambdas and nonzero values");
    double x = lambdas[i];
    double yv = std::log(std::abs(values[i])) - n * std::log(lambdas[i]);
    s1 += 1;
    sx += x;
    sxx += x * x;
    sy += yv;
    sxy += x * yv;
  }
  double det = s1 * sxx - sx * sx;
  GrowthFit fit;
  fit.lambdas = lambdas;
  fit.values = values;
  fit.c1 = (s1 * sxy - sx * sy) / det;
  fit.c0 = (sy - fit.c1 * sx) / s1;
  return fit;
}

// Sweep of the counterexample valuation at lambda * |x|^2/2. The conjugate
// exponent convention reproduces the displayed super-polynomial growth; the
// literal one is reported alongside. eta is expected to dominate 1 on the
// annulus 1 <= |x| <= 2.
struct GrowthReport {
  GrowthFit conjugate_sign;  // e^{<grad v, x> - v} sweep
  GrowthFit literal_sign;    // e^{v - <grad v, x>} sweep
};

inline GrowthReport growth_demo(const TestFunction& eta, const std::vector<double>& lambda_grid,
                                double grid_halfwidth = 3.25, double h = 1.0 / 64) {
  int dim = eta.dim;
  std::vector<double> conj_vals, lit_vals;
  for (double lam : lambda_grid) {
    auto f = [lam](Vec p) { return 0.5 * lam * norm2(p); };
    SmoothGridFunction v = SmoothGridFunction::from_callable(
        dim, {-grid_halfwidth, -grid_halfwidth}, {grid_halfwidth, grid_halfwidth}, h, f);
    conj_vals.push_back(counterexample_eval_conjugate(eta, v));
    lit_vals.push_back(counterexample_eval(eta, v));
  }
  return {growth_fit(lambda_grid, conj_vals, dim), growth_fit(lambda_grid, lit_vals, dim)};
}

// Negative controls for the suites: a functional that is not a valuation and
// an oracle that depends on the representation rather than the function.
inline ValuationOracle squared_volume_oracle() {
  ValuationOracle z;
  z.eval = [](const CellPA& u) {
    double vol = 0.0;
    for (const SubCell& c : u.sub.cells) {
      if (c.poly.affine_dim() == u.dim) vol += c.poly.volume();
    }
    return vol * vol;
  };
  z.meta = {true, true, std::nullopt};
  return z;
}

inline ValuationOracle cell_count_oracle() {
  ValuationOracle z;
  z.eval = [](const CellPA& u) { return static_cast<double>(u.cell_count()); };
  z.meta = {false, false, std::nullopt};
  return z;
}

}  // namespace epival
