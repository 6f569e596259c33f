#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "epival/hessian.hpp"
#include "epival/rng.hpp"
#include "epival/valuations.hpp"

using namespace epival;

namespace {

MaxAffine random_max_affine(Rng& rng, int dim, int m, double r = 1.5, double spread = 1.0) {
  std::vector<Affine> pieces;
  for (int i = 0; i < m; ++i) {
    pieces.push_back({{rng.uniform(-r, r), dim == 2 ? rng.uniform(-r, r) : 0.0},
                      rng.uniform(-spread, spread)});
  }
  return max_affine(dim, pieces);
}

SymMat random_sym(Rng& rng, int n) {
  SymMat s;
  s.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) s.m[i][j] = s.m[j][i] = rng.uniform(-2, 2);
  }
  return s;
}

}  // namespace

TEST_CASE("face lattice of the unit square indicator") {
  CellPA u = indicator(Polyhedron::box(2, {0, 0}, {1, 1}));
  auto pieces = face_lattice(u);

  int cells = 0, edges = 0, verts = 0;
  for (const GraphPiece& p : pieces) {
    if (p.k == 2) {
      ++cells;
      CHECK(p.subdiff.affine_dim() == 0);  // Q = {0}
      CHECK(approx(p.subdiff.vertices[0], {0, 0}));
    } else if (p.k == 1) {
      ++edges;
      CHECK(p.subdiff.rays.size() == 1);  // outward normal ray
    } else {
      ++verts;
      CHECK(p.subdiff.rays.size() == 2);  // quadrant cone
    }
  }
  CHECK(cells == 1);
  CHECK(edges == 4);
  CHECK(verts == 4);
  CHECK(orthogonality_defect(pieces) <= 1e-9);
}

TEST_CASE("face lattice of a 1-d kink") {
  MaxAffine vee = max_affine(1, {Affine{{-1, 0}, 0.0}, Affine{{1, 0}, 0.0}});
  CellPA u = restrict_to(vee, Polyhedron::from_points(1, {{-1}, {1}}));
  auto pieces = face_lattice(u);
  bool found_kink = false;
  for (const GraphPiece& p : pieces) {
    if (p.k == 0 && approx(p.face.vertices[0], {0, 0})) {
      found_kink = true;
      CHECK(p.subdiff.vertices.front().x == Catch::Approx(-1.0));
      CHECK(p.subdiff.vertices.back().x == Catch::Approx(1.0));
    }
  }
  CHECK(found_kink);
}

TEST_CASE("face lattice of a single cell") {
  Polyhedron k = Polyhedron::from_points(2, {{0, 0}, {2, 0}, {1, 1.5}});
  Vec slope{0.3, -0.2};
  CellPA u = affine_plus_indicator({slope, 0.1}, k);
  for (const GraphPiece& p : face_lattice(u)) {
    if (p.k == 2) {
      CHECK(p.face.equals(k));
      CHECK(approx(p.subdiff.vertices[0], slope));
    }
  }
}

TEST_CASE("hessian measures of a square indicator against the displacement polynomial") {
  // K = [0,1]^2, C = [-1,1]^2: P_s is K grown by the s-scaled sup-ball, so
  // H^2(P_s) = 1 + 4s + 4s^2 and (Theta_0, Theta_1, Theta_2) = (4, 2, 1)
  CellPA u = indicator(Polyhedron::box(2, {0, 0}, {1, 1}));
  Window w{Polyhedron::box(2, {-2, -2}, {3, 3}), Polyhedron::box(2, {-1, -1}, {1, 1})};
  HessianMeasureTable t = hessian_measure(u, w);
  CHECK(t[2] == Catch::Approx(1.0));
  CHECK(t[1] == Catch::Approx(2.0));
  CHECK(t[0] == Catch::Approx(4.0));
  for (double s : {0.5, 1.0, 2.0}) {
    CHECK(ps_poly(t, s) == Catch::Approx((1 + 2 * s) * (1 + 2 * s)));
  }
}

TEST_CASE("Theta_n recovers the gradient-constrained volume") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    CellPA u = conjugate(random_max_affine(rng, 2, 5));
    Window w{Polyhedron::box(2, {-3, -3}, {3, 3}),
             Polyhedron::box(2, {rng.uniform(-2, 0), rng.uniform(-2, 0)},
                             {rng.uniform(0.2, 2), rng.uniform(0.2, 2)})};
    HessianMeasureTable t = hessian_measure(u, w);
    double direct = 0.0;
    for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
      if (w.c.contains(u.pieces[i].slope)) direct += u.sub.cells[i].poly.volume();
    }
    CHECK(t[2] == Catch::Approx(direct).margin(1e-8));
  }
}

TEST_CASE("single cell with slope outside C gives Theta_n = 0") {
  CellPA u = affine_plus_indicator({{5, 5}, 0.0}, Polyhedron::box(2, {0, 0}, {1, 1}));
  Window w{Polyhedron::box(2, {-2, -2}, {2, 2}), Polyhedron::box(2, {-1, -1}, {1, 1})};
  CHECK(hessian_measure(u, w)[2] == 0.0);
}

TEST_CASE("Monte-Carlo displacement volume agrees with the measure polynomial") {
  Rng rng(53);
  int agreements = 0, total = 0;
  for (int trial = 0; trial < 6; ++trial) {
    CellPA u = conjugate(random_max_affine(rng, 2, 4 + static_cast<int>(rng.next_below(3))));
    Window w{Polyhedron::box(2, {-2, -2}, {2, 2}), Polyhedron::box(2, {-2, -2}, {2, 2})};
    HessianMeasureTable t = hessian_measure(u, w);
    for (double s : {0.5, 1.0, 2.0}) {
      McEstimate mc = ps_volume_mc(u, s, w, 200000, 1000 + static_cast<std::uint64_t>(trial));
      double want = ps_poly(t, s);
      ++total;
      if (std::abs(mc.estimate - want) <= 4.0 * mc.stderr_ + 1e-9) ++agreements;
    }
  }
  CHECK(agreements == total);
}

TEST_CASE("Monte-Carlo estimate is reproducible across worker counts") {
  Rng rng(59);
  CellPA u = conjugate(random_max_affine(rng, 2, 5));
  Window w{Polyhedron::box(2, {-2, -2}, {2, 2}), Polyhedron::box(2, {-2, -2}, {2, 2})};
  McEstimate a = ps_volume_mc(u, 1.0, w, 50000, 7, 1);
  McEstimate b = ps_volume_mc(u, 1.0, w, 50000, 7, 2);
  McEstimate c = ps_volume_mc(u, 1.0, w, 50000, 7, 5);
  CHECK(a.estimate == b.estimate);
  CHECK(b.estimate == c.estimate);
}

TEST_CASE("1-d hessian measures") {
  // u = |x| on [-1, 1]: one kink of subdiff length 2, two cells, two
  // boundary rays
  MaxAffine vee = max_affine(1, {Affine{{-1, 0}, 0.0}, Affine{{1, 0}, 0.0}});
  CellPA u = restrict_to(vee, Polyhedron::from_points(1, {{-1}, {1}}));
  Window w{Polyhedron::box(1, {-2, 0}, {2, 0}), Polyhedron::box(1, {-3, 0}, {3, 0})};
  HessianMeasureTable t = hessian_measure(u, w);
  CHECK(t[1] == Catch::Approx(2.0));  // both cells, slopes inside C
  // kink mass 2 plus two boundary normal rays clipped to [-3,3]: each
  // contributes |3 - 1| = 2
  CHECK(t[0] == Catch::Approx(2.0 + 2.0 + 2.0));
  McEstimate mc = ps_volume_mc(u, 1.0, w, 200000, 3);
  CHECK(std::abs(mc.estimate - ps_poly(t, 1.0)) <= 4.0 * mc.stderr_);
}

TEST_CASE("duality of hessian measures") {
  // v = h_K: Theta_0(v, B x C) = Theta_2(I_K, C x B) = vol(K cap C) for large B
  Polyhedron k = Polyhedron::from_points(2, {{-1, -0.5}, {1, 0}, {0, 1}});
  MaxAffine hk = conjugate(indicator(k));
  Window w{Polyhedron::box(2, {-4, -4}, {4, 4}), Polyhedron::box(2, {-2, -2}, {0.4, 2})};
  DualityReport rep = duality_check(hk, w);
  double expect = intersect(k, w.c).volume();
  CHECK(rep.theta_fn[0] == Catch::Approx(expect).margin(1e-9));
  CHECK(rep.max_discrepancy <= 1e-9);

  Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    MaxAffine v = random_max_affine(rng, 2, 5);
    Window win{Polyhedron::box(2, {rng.uniform(-3, -1), rng.uniform(-3, -1)},
                               {rng.uniform(0.5, 3), rng.uniform(0.5, 3)}),
               Polyhedron::box(2, {rng.uniform(-3, -1), rng.uniform(-3, -1)},
                               {rng.uniform(0.5, 3), rng.uniform(0.5, 3)})};
    CHECK(duality_check(v, win).max_discrepancy <= 1e-9);
  }
}

TEST_CASE("mixed discriminant") {
  for (int n : {1, 2, 3}) {
    std::vector<SymMat> eyes(static_cast<std::size_t>(n), SymMat::identity(n));
    CHECK(mixed_discriminant(eyes) == Catch::Approx(1.0));
  }

  Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    SymMat a = random_sym(rng, 2), b = random_sym(rng, 2);
    double direct = 0.5 * ((a + b).det() - a.det() - b.det());
    CHECK(mixed_discriminant({a, b}) == Catch::Approx(direct).margin(1e-12));
    CHECK(mixed_discriminant({a, b}) == Catch::Approx(mixed_discriminant({b, a})).margin(1e-12));
    CHECK(mixed_discriminant({a, a}) == Catch::Approx(a.det()).margin(1e-12));
  }

  // multilinearity in the first slot, order 3
  for (int trial = 0; trial < 10; ++trial) {
    SymMat a = random_sym(rng, 3), b = random_sym(rng, 3), c = random_sym(rng, 3);
    SymMat d = random_sym(rng, 3);
    double lhs = mixed_discriminant({a + d * 2.0, b, c});
    double rhs = mixed_discriminant({a, b, c}) + 2.0 * mixed_discriminant({d, b, c});
    CHECK(lhs == Catch::Approx(rhs).margin(1e-10));
    CHECK(mixed_discriminant({a, a, a}) == Catch::Approx(a.det()).margin(1e-10));
  }
}

TEST_CASE("grid stencils are exact on quadratics") {
  auto f = [](Vec p) { return 0.5 * (p.x * p.x + 3 * p.y * p.y) + 0.25 * p.x * p.y - p.x; };
  SmoothGridFunction g =
      SmoothGridFunction::from_callable(2, {-1, -1}, {1, 1}, 1.0 / 16, f);
  SymMat h = g.hessian(8, 8);
  CHECK(h.m[0][0] == Catch::Approx(1.0).margin(1e-9));
  CHECK(h.m[1][1] == Catch::Approx(3.0).margin(1e-9));
  CHECK(h.m[0][1] == Catch::Approx(0.25).margin(1e-9));
  Vec grad = g.gradient(8, 8);
  Vec x = g.node(8, 8);
  CHECK(grad.x == Catch::Approx(x.x + 0.25 * x.y - 1).margin(1e-9));
  CHECK(g.worst_stencil_eigenvalue() >= -1e-9);
}

TEST_CASE("smooth quadrature: determinant slot integrates the weight") {
  // v = |x|^2/2 has unit Hessian determinant, so the i = 0 valuation with an
  // x-only weight is the integral of the bump: pi rho^2 / (k+1)
  auto f = [](Vec p) { return 0.5 * norm2(p); };
  SmoothGridFunction v =
      SmoothGridFunction::from_callable(2, {-1.25, -1.25}, {1.25, 1.25}, 1.0 / 64, f);
  TestFunction z = TestFunction::constant_bump(2, 1.0, 2, 1.0);
  double got = smooth_valuation_quad(TestFunction3::x_only(z), 0, v);
  CHECK(got == Catch::Approx(M_PI / 3.0).epsilon(2e-3));
}

TEST_CASE("smooth quadrature: gradient slot matches the PA valuation") {
  // i = n with a gradient-only weight reduces to int zeta(grad v) dx; compare
  // with zeta_valuation on a PA approximation of v
  auto f = [](Vec p) { return 0.5 * norm2(p); };
  SmoothGridFunction v =
      SmoothGridFunction::from_callable(2, {-1.6, -1.6}, {1.6, 1.6}, 1.0 / 64, f);
  TestFunction z = TestFunction::constant_bump(2, 1.0, 2, 1.0);
  TestFunction3 z3;
  z3.y_slot = [z](Vec y) { return z(y); };
  double quad = smooth_valuation_quad(z3, 2, v);

  // PA pipeline: tangent approximation of v* = v, conjugated back
  std::vector<Vec> probes;
  for (int i = -6; i <= 6; ++i)
    for (int j = -6; j <= 6; ++j) probes.push_back({i / 4.0, j / 4.0});
  MaxAffine vstar_pa = sample_approx(f, probes, 2, [](Vec p) { return p; });
  CellPA u = conjugate(vstar_pa);
  double pa = zeta_valuation(z, u);
  CHECK(quad == Catch::Approx(pa).epsilon(2e-2));
  CHECK(quad == Catch::Approx(M_PI / 3.0).epsilon(1e-2));
}

TEST_CASE("smooth quadrature error shrinks as the grid refines") {
  auto f = [](Vec p) { return 0.5 * norm2(p); };
  TestFunction z = TestFunction::constant_bump(2, 1.0, 2, 1.0);
  double exact = M_PI / 3.0;
  double prev = kInf;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    SmoothGridFunction v = SmoothGridFunction::from_callable(2, {-1.25, -1.25}, {1.25, 1.25}, h, f);
    double err = std::abs(smooth_valuation_quad(TestFunction3::x_only(z), 0, v) - exact);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("support exceeding the grid is rejected") {
  auto f = [](Vec p) { return 0.5 * norm2(p); };
  SmoothGridFunction v = SmoothGridFunction::from_callable(2, {-1, -1}, {1, 1}, 1.0 / 16, f);
  TestFunction wide = TestFunction::constant_bump(2, 3.0, 1, 1.0);
  CHECK_THROWS_AS(smooth_valuation_quad(TestFunction3::x_only(wide), 0, v), Error);
}

TEST_CASE("alesker valuations") {
  auto f = [](Vec p) { return 0.5 * (2.0 * p.x * p.x + p.y * p.y) + 0.3 * p.x * p.y; };
  SmoothGridFunction v =
      SmoothGridFunction::from_callable(2, {-1.25, -1.25}, {1.25, 1.25}, 1.0 / 32, f);
  TestFunction z = TestFunction::constant_bump(2, 1.0, 2, 1.0);

  // all A_j = I: D(H[i], I[n-i]) = e_i(H) i! (n-i)! / n!
  std::vector<MatrixField> eye = {[](Vec) { return SymMat::identity(2); }};
  double lhs = alesker_valuation_quad(z, 1, eye, v);
  TestFunction3 z3 = TestFunction3::x_only(z);
  double rhs = 0.5 * smooth_valuation_quad(z3, 1, v);  // e_1 slot is i = n-1
  CHECK(lhs == Catch::Approx(rhs).margin(1e-10));

  // homogeneity of degree i in v
  SmoothGridFunction v2 = SmoothGridFunction::from_callable(
      2, {-1.25, -1.25}, {1.25, 1.25}, 1.0 / 32, [&](Vec p) { return 2.0 * f(p); });
  CHECK(alesker_valuation_quad(z, 1, eye, v2) == Catch::Approx(2.0 * lhs).margin(1e-9));
  CHECK(alesker_valuation_quad(z, 2, {}, v2) ==
        Catch::Approx(4.0 * alesker_valuation_quad(z, 2, {}, v)).margin(1e-9));

  // affine v vanishes for i >= 1
  SmoothGridFunction aff = SmoothGridFunction::from_callable(
      2, {-1.25, -1.25}, {1.25, 1.25}, 1.0 / 32, [](Vec p) { return 0.7 * p.x - 0.1; });
  CHECK(alesker_valuation_quad(z, 1, eye, aff) == Catch::Approx(0.0).margin(1e-12));

  CHECK_THROWS_AS(alesker_valuation_quad(z, 1, {}, v), Error);  // arity
}

TEST_CASE("counterexample valuation") {
  auto f = [](Vec p) { return 0.5 * norm2(p); };
  SmoothGridFunction v = SmoothGridFunction::from_callable(2, {-2, -2}, {2, 2}, 1.0 / 32, f);
  TestFunction eta = TestFunction::constant_bump(2, 1.5, 2, 1.0);

  // v - <grad v, x> = -|x|^2/2, so the literal integrand integrates
  // eta(x) e^{-|x|^2/2}; radial reference by fine 1-d quadrature
  auto radial_ref = [&](double sign) {
    double acc = 0.0;
    int steps = 200000;
    for (int i = 0; i < steps; ++i) {
      double r = (i + 0.5) * 1.5 / steps;
      double w = 1.0 - r * r / (1.5 * 1.5);
      acc += 2.0 * M_PI * r * w * w * std::exp(sign * 0.5 * r * r) * (1.5 / steps);
    }
    return acc;
  };
  CHECK(counterexample_eval(eta, v) == Catch::Approx(radial_ref(-1.0)).epsilon(1e-3));
  CHECK(counterexample_eval_conjugate(eta, v) == Catch::Approx(radial_ref(1.0)).epsilon(1e-3));

  TestFunction zero = TestFunction::constant_bump(2, 1.5, 2, 0.0);
  CHECK(counterexample_eval(zero, v) == 0.0);
}
