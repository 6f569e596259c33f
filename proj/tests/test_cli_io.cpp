#include <catch2/catch_amalgamated.hpp>

#include "epival/json_io.hpp"

using namespace epival;

TEST_CASE("polyhedron json round trip") {
  Polyhedron tri = Polyhedron::from_points(2, {{0, 0}, {1, 0}, {0, 1}});
  Polyhedron back = polyhedron_from_json(to_json(tri));
  CHECK(back.equals(tri));

  // rays survive
  Polyhedron cone = Polyhedron::from_vrep(2, {{0, 0}}, {{1, 0}, {0, 1}});
  Polyhedron cone_back = polyhedron_from_json(to_json(cone));
  CHECK(cone_back.rays.size() == 2);
  CHECK(cone_back.contains({2, 3}));

  // halfspaces-only input
  json j = {{"dim", 2},
            {"halfspaces", json::array({{{"normal", {1.0, 0.0}}, {"offset", 1.0}},
                                        {{"normal", {-1.0, 0.0}}, {"offset", 0.0}},
                                        {{"normal", {0.0, 1.0}}, {"offset", 1.0}},
                                        {{"normal", {0.0, -1.0}}, {"offset", 0.0}}})}};
  CHECK(polyhedron_from_json(j).equals(Polyhedron::box(2, {0, 0}, {1, 1})));

  // 1-d vectors are length-1 arrays
  Polyhedron seg = Polyhedron::from_points(1, {{0}, {2}});
  json js = to_json(seg);
  CHECK(js["vertices"][0].size() == 1);
  CHECK(polyhedron_from_json(js).equals(seg));
}

TEST_CASE("function json round trips") {
  MaxAffine v = max_affine(2, {Affine{{1, 0}, 0.0}, Affine{{-1, 0}, 0.0}, Affine{{0, 1}, -0.5}});
  MaxAffine vb = max_affine_from_json(to_json(v));
  CHECK(functions_equal(v, vb));

  CellPA u = conjugate(v);
  CellPA ub = cell_pa_from_json(to_json(u));
  CHECK(functions_equal(u, ub));

  // serialization is deterministic
  CHECK(to_json(u).dump() == to_json(cell_pa_from_json(to_json(u))).dump());
}

TEST_CASE("invalid cell function is rejected") {
  // two cells whose pieces poke above each other: not convex
  json j;
  j["dim"] = 1;
  j["cells"] = json::array();
  json left = {{"poly", {{"dim", 1}, {"vertices", {{-1.0}, {0.0}}}}},
               {"piece", {{"slope", {1.0}}, {"intercept", 0.0}}}};
  json right = {{"poly", {{"dim", 1}, {"vertices", {{0.0}, {1.0}}}}},
                {"piece", {{"slope", {-1.0}}, {"intercept", 0.0}}}};
  j["cells"].push_back(left);
  j["cells"].push_back(right);
  CHECK_THROWS_AS(cell_pa_from_json(j), Error);
}

TEST_CASE("test function json") {
  TestFunction z = TestFunction::bump(2, 2.5, 2, {{0, 0, 1.0}, {2, 1, -0.5}});
  TestFunction zb = test_function_from_json(to_json(z));
  for (Vec y : {Vec{0, 0}, Vec{1, 1}, Vec{2, 1.2}, Vec{3, 3}}) {
    CHECK(zb(y) == Catch::Approx(z(y)).margin(1e-15));
  }

  TestFunction z1 = TestFunction::bump(1, 1.5, 1, {{3, 0, 2.0}});
  TestFunction z1b = test_function_from_json(to_json(z1));
  CHECK(z1b({0.7}) == Catch::Approx(z1({0.7})).margin(1e-15));

  CHECK_THROWS_AS(test_function_from_json(json{{"dim", 3}}), Error);
}

TEST_CASE("window and suite report json") {
  Window w{Polyhedron::box(2, {-1, -1}, {1, 1}), Polyhedron::box(2, {-2, -2}, {2, 2})};
  Window wb = window_from_json(to_json(w));
  CHECK(wb.b.equals(w.b));
  CHECK(wb.c.equals(w.c));

  SuiteReport rep;
  rep.suite = "demo";
  rep.cases = 3;
  rep.max_defect = 0.5;
  rep.tolerance = 1e-9;
  rep.failures.push_back({2, 77, 0.5});
  json j = to_json(rep);
  CHECK(j["passed"] == false);
  CHECK(j["failures"][0]["seed"] == 77);
}
