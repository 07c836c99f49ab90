#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "flatbundle/fixtures.hpp"
#include "flatbundle/simplicial.hpp"

using namespace flatbundle;

TEST_CASE("build_complex closes under faces") {
  Complex x = build_complex({0, 1, 2}, {{0, 1, 2}});
  // 3 vertices + 3 edges + 1 face
  CHECK(x.simplices.size() == 7);
  CHECK(x.contains({0, 2}));
  CHECK(x.contains({1}));
  CHECK(x.dim() == 2);
  CHECK(x.euler_characteristic() == 1);

  CHECK_THROWS_AS(build_complex({0, 1}, {{0, 1, 2}}), InputError);
  CHECK_THROWS_AS(build_complex({0, 1, 2}, {{0, 0, 1}}), InputError);
}

TEST_CASE("simplex order is dimension-major") {
  Complex x = build_complex({0, 1, 2}, {{0, 1, 2}});
  CHECK(x.simplices.front() == Simplex{0});
  CHECK(x.simplices.back() == Simplex{0, 1, 2});
  CHECK(std::is_sorted(x.simplices.begin(), x.simplices.end(), SimplexLess{}));
}

TEST_CASE("faces_of enumerates the closed simplex") {
  auto f = faces_of({0, 1, 2});
  CHECK(f.size() == 7);
  CHECK(f.front() == Simplex{0});
  CHECK(f.back() == Simplex{0, 1, 2});
  CHECK(std::is_sorted(f.begin(), f.end(), SimplexLess{}));
}

TEST_CASE("skeleton truncates dimension") {
  Complex x = build_complex({0, 1, 2, 3}, {{0, 1, 2, 3}});
  CHECK(x.euler_characteristic() == 1);  // contractible
  Complex one = skeleton(x, 1);
  CHECK(one.dim() == 1);
  CHECK(one.simplices_of_dim(1).size() == 6);  // K4
  CHECK(one.euler_characteristic() == 4 - 6);
}

TEST_CASE("barycentric subdivision of the triangle") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  Subdivision sd = barycentric_subdivide(tri);
  // one barycenter per simplex of the triangle
  CHECK(sd.complex.vertices.size() == 7);
  // chains: 7 singletons, 12 pairs (6 vertex-in-edge, 3 vertex-in-face,
  // 3 edge-in-face), 6 full flags
  CHECK(sd.complex.simplices.size() == 25);
  CHECK(sd.complex.simplices_of_dim(2).size() == 6);
  CHECK(sd.complex.euler_characteristic() == 1);
  // vertex ids invert simplex_vertex
  for (const auto& [s, v] : sd.simplex_vertex) CHECK(sd.vertex_simplex.at(v) == s);
}

TEST_CASE("maximal tree on the complete graph is the root star") {
  Complex torus = torus_complex();
  Tree t = maximal_tree(torus);
  CHECK(t.root == 0);
  CHECK(t.spans_all);
  CHECK(t.edges.size() == 6);
  for (Vertex v = 1; v < 7; ++v) {
    CHECK(t.parent.at(v) == 0);
    CHECK(t.path_from_root(v) == std::vector<Vertex>{0, v});
  }
}

TEST_CASE("path validity") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  CHECK(path_valid(tri, {0, 1, 2, 0}));
  CHECK(path_valid(tri, {0, 0, 1}));  // repeats allowed
  std::string why;
  CHECK_FALSE(path_valid(build_complex({0, 1, 2, 3}, {{0, 1}, {2, 3}}), {0, 1, 2}, &why));
  CHECK(why.find("not an edge") != std::string::npos);
}

TEST_CASE("triangle boundary contracts with one triangle move") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  auto w = find_contraction(tri, {0, 1, 2, 0});
  REQUIRE(w.has_value());
  CHECK(w->complexity() == 1);
  WitnessReplay r = apply_witness(tri, {0, 1, 2, 0}, *w);
  CHECK(r.valid);
  CHECK(r.contracted);
}

TEST_CASE("witness replay rejects non-simplicial moves") {
  Complex path2 = build_complex({0, 1, 2}, {{0, 1}, {1, 2}});
  // pretend {0,1,2} is a triangle; the replay must notice
  ContractionWitness w;
  w.moves.push_back({MoveKind::TriangleDelete, 0, 2, -1});
  WitnessReplay r = apply_witness(path2, {0, 1, 2, 1, 0}, w);
  CHECK_FALSE(r.valid);
  CHECK(r.first_bad_move == 0);
}

TEST_CASE("circle loop has no contraction") {
  Complex circle = build_complex({0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
  CHECK_FALSE(find_contraction(circle, {0, 1, 2, 0}).has_value());
}

TEST_CASE("presentation from the torus tree") {
  Complex torus = torus_complex();
  Tree t = maximal_tree(torus);
  Presentation p = presentation_from_tree(torus, t);
  // 21 edges minus 6 tree edges
  CHECK(p.generators.size() == 15);
  CHECK(p.relations.size() == 14);
  CHECK(p.basepoint == 0);
  CHECK(p.generator_index("g1_2") >= 0);
  CHECK(p.generator_index("nope") == -1);
  for (size_t i = 0; i < p.generators.size(); ++i) {
    const SimplicialPath& loop = p.generator_loops[i];
    CHECK(loop.front() == 0);
    CHECK(loop.back() == 0);
    CHECK(path_valid(torus, loop));
  }
  // each relation names only non-tree edges of its face boundary
  for (const Word& r : p.relations) CHECK(r.size() <= 3);
}

TEST_CASE("expand_word walks generator loops") {
  Complex torus = torus_complex();
  Tree t = maximal_tree(torus);
  Presentation p = presentation_from_tree(torus, t);
  int g = p.generator_index("g1_2");
  SimplicialPath loop = expand_word(p, {g + 1});
  CHECK(loop == p.generator_loops[g]);
  SimplicialPath there_and_back = expand_word(p, {g + 1, -(g + 1)});
  CHECK(there_and_back.front() == 0);
  CHECK(there_and_back.back() == 0);
}

TEST_CASE("star subcomplex of a vertex barycenter is contractible") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  Complex star = star_subcomplex(tri, {0});
  CHECK(star.dim() == 2);
  CHECK(star.euler_characteristic() == 1);
}
