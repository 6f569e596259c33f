#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "epival/geometry.hpp"
#include "epival/rng.hpp"

using namespace epival;

namespace {

Polyhedron unit_square() { return Polyhedron::box(2, {0, 0}, {1, 1}); }

Polyhedron random_polygon(Rng& rng, double radius = 1.0, int k = 6) {
  std::vector<Vec> pts;
  for (int i = 0; i < k; ++i) {
    pts.push_back({rng.uniform(-radius, radius), rng.uniform(-radius, radius)});
  }
  return Polyhedron::from_points(2, pts);
}

// independent oracle: checks that (g, c) supports the lifted set from below
// and touches exactly the claimed generators
bool plane_supports(const LiftedPointSet& pts, const Vec& g, double c,
                    const std::vector<int>& gens, double tol = 1e-7) {
  for (std::size_t i = 0; i < pts.points.size(); ++i) {
    double gap = pts.heights[i] - dot(g, pts.points[i]) - c;
    if (gap < -tol) return false;
    bool is_gen = std::find(gens.begin(), gens.end(), static_cast<int>(i)) != gens.end();
    if (is_gen != (std::abs(gap) <= tol)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("volume basics") {
  CHECK(unit_square().volume() == Catch::Approx(1.0));

  Polyhedron seg = Polyhedron::segment(2, {0, 0}, {1, 0});
  CHECK(seg.volume() == 0.0);
  CHECK(seg.volume_k(1) == Catch::Approx(1.0));

  Polyhedron tri = Polyhedron::from_points(2, {{0, 0}, {2, 0}, {0, 2}});
  CHECK(tri.volume() == Catch::Approx(2.0));

  Polyhedron iv = Polyhedron::from_points(1, {{0}, {3}});
  CHECK(iv.volume() == Catch::Approx(3.0));
  CHECK(Polyhedron::point(2, {1, 1}).volume_k(0) == 1.0);
}

TEST_CASE("volume scales like lambda^n") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    Polyhedron p = random_polygon(rng);
    double v = p.volume();
    for (double lam : {0.5, 1.0, 2.0, 3.0}) {
      CHECK(p.scale(lam).volume() == Catch::Approx(lam * lam * v).margin(1e-12));
    }
  }
}

TEST_CASE("volume is a valuation on convex-union pairs") {
  // boxes overlapping along one axis: union convex
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    double a = rng.uniform(-1, 0), b = rng.uniform(0.1, 1.5);
    double c = rng.uniform(a, b), d = rng.uniform(b, b + 1.0);
    Polyhedron p = Polyhedron::box(2, {a, 0}, {b, 1});
    Polyhedron q = Polyhedron::box(2, {c, 0}, {d, 1});
    Polyhedron uni = convex_hull_of(p, q);
    Polyhedron inter = intersect(p, q);
    CHECK(uni.volume() + inter.volume() == Catch::Approx(p.volume() + q.volume()).margin(1e-9));
  }
}

TEST_CASE("intersect") {
  Polyhedron tri = Polyhedron::from_points(2, {{0, 0}, {1, 0}, {0, 1}});
  Polyhedron bigbox = Polyhedron::box(2, {-2, -2}, {2, 2});
  CHECK(intersect(tri, bigbox).equals(tri));

  // unbounded quadrant clipped to a box
  Polyhedron quad = Polyhedron::from_vrep(2, {{0, 0}}, {{1, 0}, {0, 1}});
  Polyhedron clipped = intersect(quad, Polyhedron::box(2, {-1, -1}, {1, 1}));
  CHECK(clipped.equals(unit_square()));

  Polyhedron far_box = Polyhedron::box(2, {5, 5}, {6, 6});
  CHECK(intersect(tri, far_box).is_empty());

  // 1-d with rays
  Polyhedron half = Polyhedron::from_vrep(1, {{0}}, {{1}});
  Polyhedron iv = intersect(half, Polyhedron::from_points(1, {{-2}, {3}}));
  CHECK(iv.vertices.front().x == Catch::Approx(0.0));
  CHECK(iv.vertices.back().x == Catch::Approx(3.0));
}

TEST_CASE("hausdorff distance") {
  Polyhedron p = unit_square();
  CHECK(hausdorff_distance(p, p) == 0.0);

  Polyhedron a = Polyhedron::from_points(1, {{0}, {1}});
  Polyhedron b = Polyhedron::from_points(1, {{0}, {2}});
  CHECK(hausdorff_distance(a, b) == Catch::Approx(1.0));

  for (double t : {0.25, 0.5, 2.0}) {
    CHECK(hausdorff_distance(p, p.translate({t, 0})) == Catch::Approx(t));
  }
}

TEST_CASE("hausdorff satisfies the triangle inequality") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Polyhedron a = random_polygon(rng);
    Polyhedron b = random_polygon(rng);
    Polyhedron c = random_polygon(rng);
    double ab = hausdorff_distance(a, b);
    double bc = hausdorff_distance(b, c);
    double ac = hausdorff_distance(a, c);
    CHECK(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("minkowski sum") {
  Polyhedron a = Polyhedron::from_points(1, {{0}, {1}});
  Polyhedron s = minkowski_sum(a, a);
  CHECK(s.vertices.front().x == Catch::Approx(0.0));
  CHECK(s.vertices.back().x == Catch::Approx(2.0));

  Polyhedron sq = unit_square();
  CHECK(minkowski_sum(sq, Polyhedron::point(2, {3, 4})).equals(sq.translate({3, 4})));
  CHECK(minkowski_sum(sq, sq).equals(Polyhedron::box(2, {0, 0}, {2, 2})));
}

TEST_CASE("halfspace round trip") {
  Polyhedron tri = Polyhedron::from_points(2, {{0, 0}, {1, 0}, {0, 1}});
  Polyhedron back = Polyhedron::from_halfspaces(2, tri.halfspaces);
  CHECK(back.equals(tri));

  CHECK(tri.contains({0.2, 0.2}));
  CHECK_FALSE(tri.contains({0.8, 0.8}));
}

TEST_CASE("lower hull: two-point segment") {
  auto pts = LiftedPointSet::make(1, {{0}, {1}}, {0, 0});
  Subdivision sub = lower_hull(pts);
  REQUIRE(sub.cells.size() == 1);
  CHECK(sub.cells[0].poly.volume() == Catch::Approx(1.0));
  CHECK(sub.cells[0].gens == std::vector<int>{0, 1});
}

TEST_CASE("lower hull: diagonal split in the plane") {
  auto pts = LiftedPointSet::make(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 0, 0, 1});
  Subdivision sub = lower_hull(pts);
  REQUIRE(sub.cells.size() == 2);
  for (const SubCell& c : sub.cells) {
    CHECK(c.poly.volume() == Catch::Approx(0.5));
    CHECK(plane_supports(pts, c.grad, c.offset, c.gens));
    // the split runs along the diagonal from (1,0) to (0,1): both cells
    // contain those two generators
    CHECK(std::find(c.gens.begin(), c.gens.end(), 1) != c.gens.end());
    CHECK(std::find(c.gens.begin(), c.gens.end(), 2) != c.gens.end());
  }
}

TEST_CASE("lower hull: v-shape on the line") {
  auto pts = LiftedPointSet::make(1, {{0}, {1}, {2}}, {0, -1, 0});
  Subdivision sub = lower_hull(pts);
  REQUIRE(sub.cells.size() == 2);
  CHECK(sub.cells[0].poly.vertices.front().x == Catch::Approx(0.0));
  CHECK(sub.cells[0].poly.vertices.back().x == Catch::Approx(1.0));
  CHECK(sub.cells[1].poly.vertices.back().x == Catch::Approx(2.0));
}

TEST_CASE("lower hull: coplanar tie keeps the coarse cell") {
  auto pts = LiftedPointSet::make(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0, 0, 0, 0});
  Subdivision sub = lower_hull(pts);
  REQUIRE(sub.cells.size() == 1);
  CHECK(sub.cells[0].gens.size() == 4);
  CHECK(sub.cells[0].poly.volume() == Catch::Approx(1.0));
}

TEST_CASE("lower hull cells tile the hull of the points") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vec> pts;
    std::vector<double> hs;
    int m = 4 + static_cast<int>(rng.next_below(8));
    for (int i = 0; i < m; ++i) {
      pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      hs.push_back(rng.uniform(-1, 1));
    }
    auto lifted = LiftedPointSet::make(2, pts, hs);
    Subdivision sub = lower_hull(lifted);
    double total = 0.0;
    for (const SubCell& c : sub.cells) {
      total += c.poly.volume();
      CHECK(plane_supports(lifted, c.grad, c.offset, c.gens));
    }
    double hull_vol = Polyhedron::from_points(2, lifted.points).volume();
    CHECK(total == Catch::Approx(hull_vol).epsilon(1e-9));

    // pairwise interior disjointness via intersection volume
    for (std::size_t i = 0; i < sub.cells.size(); ++i) {
      for (std::size_t j = i + 1; j < sub.cells.size(); ++j) {
        Polyhedron ij = intersect(sub.cells[i].poly, sub.cells[j].poly);
        if (!ij.is_empty()) CHECK(ij.volume() <= 1e-9);
      }
    }
  }
}

TEST_CASE("lower hull: degenerate inputs") {
  // all points coincide
  auto pts0 = LiftedPointSet::make(2, {{0.5, 0.5}, {0.5, 0.5}}, {1.0, 0.0});
  REQUIRE(pts0.points.size() == 1);
  CHECK(pts0.heights[0] == 0.0);  // merged keeping the lower height
  Subdivision sub0 = lower_hull(pts0);
  REQUIRE(sub0.cells.size() == 1);
  CHECK(sub0.cells[0].poly.affine_dim() == 0);

  // collinear points in the plane
  auto pts1 = LiftedPointSet::make(2, {{0, 0}, {1, 1}, {2, 2}}, {0, -1, 0});
  Subdivision sub1 = lower_hull(pts1);
  REQUIRE(sub1.cells.size() == 2);
  CHECK(sub1.cells[0].poly.affine_dim() == 1);
}

TEST_CASE("subdivision faces record incidence") {
  auto pts = LiftedPointSet::make(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 0, 0, 1});
  Subdivision sub = lower_hull(pts);
  int shared = 0;
  for (const SubFace& f : sub.faces) {
    if (f.cells.size() == 2) {
      ++shared;
      // the shared diagonal
      CHECK(f.poly.volume_k(1) == Catch::Approx(std::sqrt(2.0)));
    }
  }
  CHECK(shared == 1);
}

TEST_CASE("unbounded V-rep to H-rep") {
  // vertex normal cone of the unit square at the origin corner
  Polyhedron cone = Polyhedron::from_vrep(2, {{0, 0}}, {{-1, 0}, {0, -1}});
  CHECK(cone.contains({-5, -3}));
  CHECK_FALSE(cone.contains({1e-3, -1}));
  Polyhedron cut = intersect(cone, Polyhedron::box(2, {-1, -1}, {1, 1}));
  CHECK(cut.volume() == Catch::Approx(1.0));

  // segment plus one ray: a halfstrip
  Polyhedron strip = Polyhedron::from_vrep(2, {{0, 0}, {0, 1}}, {{1, 0}});
  CHECK(strip.contains({3, 0.5}));
  CHECK_FALSE(strip.contains({3, 1.5}));
  CHECK_FALSE(strip.contains({-0.5, 0.5}));
  Polyhedron cut2 = intersect(strip, Polyhedron::box(2, {-2, -2}, {2, 2}));
  CHECK(cut2.volume() == Catch::Approx(2.0));

  // point plus opposite rays: a full line
  Polyhedron line = Polyhedron::from_vrep(2, {{0, 0.5}}, {{1, 0}, {-1, 0}});
  Polyhedron cut3 = intersect(line, Polyhedron::box(2, {0, 0}, {1, 1}));
  CHECK(cut3.volume_k(1) == Catch::Approx(1.0));
}
