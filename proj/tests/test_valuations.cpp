#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "epival/rng.hpp"
#include "epival/valuations.hpp"

using namespace epival;

namespace {

TestFunction smooth_bump(int dim, double rho = 3.0) {
  // q(y) = 1 + y1/4 keeps the weight asymmetric so cancellations don't hide bugs
  return TestFunction::bump(dim, rho, 2, {{0, 0, 1.0}, {1, 0, 0.25}});
}

MaxAffine random_max_affine(Rng& rng, int dim, int m, double r = 2.0, double spread = 1.0) {
  std::vector<Affine> pieces;
  for (int i = 0; i < m; ++i) {
    pieces.push_back({{rng.uniform(-r, r), dim == 2 ? rng.uniform(-r, r) : 0.0},
                      rng.uniform(-spread, spread)});
  }
  return max_affine(dim, pieces);
}

}  // namespace

TEST_CASE("zeta valuation on single-cell inputs") {
  TestFunction z = smooth_bump(2);
  Polyhedron k = Polyhedron::from_points(2, {{0, 0}, {2, 0}, {0, 2}});
  Vec y{0.4, -0.7};
  CHECK(zeta_valuation(z, affine_plus_indicator({y, 0.0}, k)) ==
        Catch::Approx(z(y) * k.volume()).epsilon(1e-14));

  // zero gradient on the unit square
  CHECK(zeta_valuation(z, indicator(Polyhedron::box(2, {0, 0}, {1, 1}))) ==
        Catch::Approx(z({0, 0})).epsilon(1e-14));

  // support radius smaller than every slope: the valuation vanishes
  TestFunction tiny = TestFunction::constant_bump(2, 0.1, 1, 1.0);
  CHECK(zeta_valuation(tiny, affine_plus_indicator({{1.0, 1.0}, 0.0}, k)) == 0.0);
}

TEST_CASE("zeta valuation is epi-translation invariant") {
  TestFunction z = smooth_bump(2);
  Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    CellPA u = conjugate(random_max_affine(rng, 2, 5));
    double base = zeta_valuation(z, u);
    VerticalShiftTag tag{rng.uniform(-2, 2), {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    CHECK(zeta_valuation(z, translate(u, tag)) == Catch::Approx(base).margin(1e-12));
  }
}

TEST_CASE("zeta valuation is epi-homogeneous of degree n") {
  Rng rng(23);
  for (int dim : {1, 2}) {
    TestFunction z = smooth_bump(dim);
    CellPA u = conjugate(random_max_affine(rng, dim, 5));
    double base = zeta_valuation(z, u);
    for (double lam : {0.5, 1.0, 2.0, 3.0}) {
      double scaled = zeta_valuation(z, epi_scale(u, lam));
      CHECK(scaled == Catch::Approx(std::pow(lam, dim) * base).margin(1e-12));
    }
  }
}

TEST_CASE("zeta valuation satisfies the valuation identity") {
  TestFunction z = smooth_bump(2);
  Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    double split = rng.uniform(0.2, 0.8);
    Polyhedron p = Polyhedron::box(2, {0, 0}, {1, 1});
    Polyhedron q = Polyhedron::box(2, {split, 0}, {split + 1, 1});
    MaxAffine w = random_max_affine(rng, 2, 3, 1.0, 0.5);
    CellPA u = restrict_to(w, p);
    CellPA v = restrict_to(w, q);
    CellPA mx = pointwise_max(u, v);
    auto mn = guarded_min(u, v);
    REQUIRE(mn.has_value());
    double lhs = zeta_valuation(z, mx) + zeta_valuation(z, *mn);
    double rhs = zeta_valuation(z, u) + zeta_valuation(z, v);
    double scale = 1.0 + std::max(std::abs(lhs), std::abs(rhs));
    CHECK(std::abs(lhs - rhs) / scale <= 1e-9);
  }
}

TEST_CASE("dual valuation of a support function measures the body") {
  // subdiff h_K(0) = K, so with zeta == 1 near 0 the dual valuation is V_n(K)
  Polyhedron k = Polyhedron::from_points(2, {{-1, 0}, {1, 0}, {0, 1.5}});
  MaxAffine hk = conjugate(indicator(k));
  TestFunction z = TestFunction::constant_bump(2, 4.0, 1, 1.0);
  double expect = z({0, 0}) * k.volume();
  CHECK(dual_zeta_valuation(z, hk, true) == Catch::Approx(expect).epsilon(1e-12));

  // affine v: no full-dimensional subdifferential atoms
  MaxAffine aff = max_affine(2, {Affine{{0.3, 0.4}, 1.0}});
  CHECK(dual_zeta_valuation(z, aff, true) == 0.0);
}

TEST_CASE("duality: dual valuation equals the valuation of the conjugate") {
  Rng rng(31);
  for (int dim : {1, 2}) {
    TestFunction z = smooth_bump(dim);
    for (int trial = 0; trial < 50; ++trial) {
      MaxAffine v = random_max_affine(rng, dim, 2 + static_cast<int>(rng.next_below(5)));
      double lhs = dual_zeta_valuation(z, v);
      double rhs = zeta_valuation(z, conjugate(v));
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("dual_wrap") {
  TestFunction z = smooth_bump(2);
  ValuationOracle zo = make_zeta_oracle(z);
  DualValuationOracle dual = dual_wrap(zo);

  // ell_y conjugates to a point indicator: zero volume, zero value
  MaxAffine ell = max_affine(2, {Affine{{0.5, 0.5}, 0.0}});
  CHECK(dual(ell) == 0.0);

  // dual invariance: Z*(v + affine) = Z*(v)
  Rng rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    MaxAffine v = random_max_affine(rng, 2, 4);
    Affine shift{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1)};
    CHECK(dual(add_affine(v, shift)) == Catch::Approx(dual(v)).margin(1e-10));
  }

  // wrapping twice restores the oracle
  ValuationOracle twice = dual_wrap(dual);
  for (int trial = 0; trial < 25; ++trial) {
    CellPA u = conjugate(random_max_affine(rng, 2, 4));
    CHECK(twice(u) == Catch::Approx(zo(u)).margin(1e-10));
  }
}

TEST_CASE("body valuation") {
  TestFunction z = smooth_bump(2);
  ValuationOracle zo = make_zeta_oracle(z);
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    Vec y{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    std::vector<Vec> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    Polyhedron k = Polyhedron::from_points(2, pts);
    CHECK(body_valuation(zo, y, k) == Catch::Approx(z(y) * k.volume()).margin(1e-14));

    // translation invariance of the body valuation
    Vec x0{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(body_valuation(zo, y, k.translate(x0)) ==
          Catch::Approx(body_valuation(zo, y, k)).margin(1e-12));
  }

  // K = {0}: the function object is independent of y up to the linear term
  Polyhedron origin = Polyhedron::point(2, {0, 0});
  CHECK(body_valuation(zo, {0.5, 0.5}, origin) == body_valuation(zo, {-2, 1}, origin));
}

TEST_CASE("cylinder witness") {
  TestFunction z = smooth_bump(2);
  Vec y{0.8, 0.6};
  REQUIRE(z(y) != 0.0);
  CylinderWitness w = cylinder_witness(z, y);
  // kappa_1 = 2: the unit 1-ball is a segment of length 2
  CHECK(w.value == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(w.ball_volume_defect == 0.0);
  CHECK(w.fn.dom.volume() == Catch::Approx(2.0 / z(y)).epsilon(1e-12));

  // one dimension: a segment of length 1/zeta(y), value 1
  TestFunction z1 = smooth_bump(1);
  CylinderWitness w1 = cylinder_witness(z1, {0.4});
  CHECK(w1.value == Catch::Approx(1.0).epsilon(1e-12));

  // outside the support the constructor refuses
  CHECK_THROWS_AS(cylinder_witness(z, {5.0, 5.0}), Error);
}

TEST_CASE("degenerate domains evaluate to zero") {
  TestFunction z = smooth_bump(2);
  CellPA seg = indicator(Polyhedron::segment(2, {0, 0}, {1, 1}));
  CHECK(zeta_valuation(z, seg) == 0.0);
  CHECK(zeta_valuation(z, zero_indicator(2)) == 0.0);
}
