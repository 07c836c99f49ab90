#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "flatbundle/fixtures.hpp"
#include "flatbundle/json_io.hpp"
#include "flatbundle/matrixcore.hpp"
#include "flatbundle/trivialize.hpp"

using namespace flatbundle;

TEST_CASE("simplex keys") {
  CHECK(simplex_key({0, 1, 2}) == "0,1,2");
  CHECK(simplex_key({7}) == "7");
  CHECK(simplex_from_key("0,1,2") == Simplex{0, 1, 2});
  CHECK(simplex_from_key("14") == Simplex{14});
  CHECK_THROWS_AS(simplex_from_key(""), InputError);
  CHECK_THROWS_AS(simplex_from_key("1,x"), InputError);
}

TEST_CASE("matrix round trip is bit-exact") {
  CMatrix m(2, 2);
  m << Complexd(0.1, -0.2), Complexd(1.0 / 3.0, 0),
       Complexd(0, 22.0 / 7.0), Complexd(-5e-13, 1e300);
  CMatrix back = matrix_from_json(matrix_to_json(m));
  CHECK(op_norm(back - m) == 0.0);
  CHECK_THROWS_AS(matrix_from_json(Json::array()), InputError);
}

TEST_CASE("sampled map round trip") {
  auto f = make_sampled(2, 3, [](const LatticeCoords& c) {
    CMatrix v(1, 1);
    v(0, 0) = std::exp(Complexd(0, 0.1 * c[0] - 0.7 * c[1]));
    return v;
  });
  Json j = sampled_to_json(f);
  CHECK(j["k"] == 2);
  CHECK(j["m"] == 3);
  SampledUnitaryMap back = sampled_from_json(j);
  CHECK(back.k == f.k);
  CHECK(back.m == f.m);
  CHECK(back.boundary_only == f.boundary_only);
  REQUIRE(back.values.size() == f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i)
    CHECK(op_norm(back.values[i] - f.values[i]) == 0.0);
}

TEST_CASE("complex round trip keeps orientation") {
  Complex t = torus_complex();
  Json j = complex_to_json(t);
  CHECK(j["schema"] == "1");
  CHECK(j["type"] == "complex");
  Complex back = complex_from_json(j);
  CHECK(back.simplices == t.simplices);
  CHECK(back.vertices == t.vertices);
  CHECK(back.orientation == t.orientation);
}

TEST_CASE("bundle round trip is bit-exact") {
  CocycleBundle e = random_flat_bundle(torus_complex(), 2, 3, 0.05, 5);
  Json j = bundle_to_json(e);
  CHECK(j["schema"] == "1");
  CHECK(j["type"] == "bundle");
  CocycleBundle back = bundle_from_json(j);
  CHECK(back.rank == e.rank);
  CHECK(back.depth == e.depth);
  CHECK(back.base.simplices == e.base.simplices);
  REQUIRE(back.transitions.size() == e.transitions.size());
  for (const auto& [key, f] : e.transitions) {
    const auto& g = back.transitions.at(key);
    for (size_t i = 0; i < f.values.size(); ++i)
      CHECK(op_norm(g.values[i] - f.values[i]) == 0.0);
  }
}

TEST_CASE("serialization is deterministic") {
  CocycleBundle a = random_flat_bundle(torus_complex(), 2, 3, 0.05, 5);
  CocycleBundle b = random_flat_bundle(torus_complex(), 2, 3, 0.05, 5);
  CHECK(bundle_to_json(a).dump() == bundle_to_json(b).dump());
  CHECK(complex_to_json(a.base).dump() == complex_to_json(b.base).dump());
}

TEST_CASE("rep round trip") {
  AlmostRep r = clock_shift_torus_rep(4);
  Json j = rep_to_json(r);
  CHECK(j["type"] == "rep");
  AlmostRep back = rep_from_json(j);
  CHECK(back.pres.generators == r.pres.generators);
  CHECK(back.pres.relations == r.pres.relations);
  CHECK(back.pres.basepoint == r.pres.basepoint);
  CHECK(back.pres.generator_loops == r.pres.generator_loops);
  CHECK(back.pres.generator_edges == r.pres.generator_edges);
  CHECK(closeness(r, back) == 0.0);
}

TEST_CASE("trivialization round trip") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  CocycleBundle e = random_flat_bundle(tri, 2, 4, 0.005, 17);
  TrivializationResult res = trivialize_contractible(e);
  Json j = trivialization_to_json(res.triv);
  GlobalTrivialization back = trivialization_from_json(j);
  CHECK(back.rank == res.triv.rank);
  CHECK(back.depth == res.triv.depth);
  REQUIRE(back.charts.size() == res.triv.charts.size());
  CHECK(trivialization_residual(e, back) == trivialization_residual(e, res.triv));
}

TEST_CASE("file helpers wrap parse failures") {
  CHECK_THROWS_AS(load_json_file("/nonexistent/nowhere.json"), InputError);
  const char* path = "bad_fixture_tmp.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_json_file(path), InputError);
  std::remove(path);

  const char* good = "good_fixture_tmp.json";
  save_json_file(good, complex_to_json(torus_complex()));
  Json j = load_json_file(good);
  CHECK(j["type"] == "complex");
  std::remove(good);
}

TEST_CASE("bundle_from_json validates the payload") {
  Json j = bundle_to_json(identity_bundle(build_complex({0, 1}, {{0, 1}}), 1, 2));
  j.erase("transitions");
  CHECK_THROWS_AS(bundle_from_json(j), InputError);
  Json r = Json::object();
  r["schema"] = "1";
  r["type"] = "complex";
  CHECK_THROWS_AS(bundle_from_json(r), InputError);
}
