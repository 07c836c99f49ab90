#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "flatbundle/bundle.hpp"
#include "flatbundle/matrixcore.hpp"

using namespace flatbundle;
using cplx = std::complex<double>;

namespace {

CMatrix phase(double t) {
  CMatrix v(1, 1);
  v(0, 0) = std::exp(cplx(0, t));
  return v;
}

// scalar charts with distinct curvature per simplex
CocycleBundle triangle_chart_bundle(int depth = 4) {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  return bundle_from_charts(tri, 1, depth, [&](const Simplex& s, const LatticeCoords& c) {
    double t = 0;
    for (size_t i = 0; i < s.size(); ++i) t += 0.31 * s[i] * c[i] + 0.07 * c[i] * c[i];
    return phase(t / 10.0);
  });
}

CocycleBundle triangle_rank2_bundle(int depth = 4) {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  CMatrix h1(2, 2), h2(2, 2);
  h1 << cplx(0.4, 0), cplx(0.1, 0.2), cplx(0.1, -0.2), cplx(-0.3, 0);
  h2 << cplx(-0.1, 0), cplx(0, 0.3), cplx(0, -0.3), cplx(0.2, 0);
  return bundle_from_charts(tri, 2, depth, [&](const Simplex& s, const LatticeCoords& c) {
    double a = 0, b = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      a += 0.05 * s[i] * c[i];
      b += 0.02 * c[i] * (i + 1);
    }
    return skew_exp(cplx(0, 1) * (a * h1 + b * h2));
  });
}

}  // namespace

TEST_CASE("face coordinate embedding") {
  CHECK(face_slots({0, 2}, {0, 1, 2}) == std::vector<int>{0, 2});
  CHECK(face_slots({5}, {3, 5, 8}) == std::vector<int>{1});
  CHECK(embed_coords({0, 2}, {0, 1, 2}, {3, 1}) == LatticeCoords{3, 0, 1});
  CHECK(embed_coords({7}, {2, 7}, {4}) == LatticeCoords{0, 4});
  CHECK(support_face({0, 1, 2}, {0, 2, 2}) == Simplex{1, 2});
  CHECK(support_face({0, 1, 2}, {4, 0, 0}) == Simplex{0});
  CHECK_THROWS_AS(face_slots({0, 3}, {0, 1, 2}), InputError);
}

TEST_CASE("bundle_from_charts is coherent by construction") {
  CocycleBundle e = triangle_chart_bundle();
  CHECK(e.transitions.size() > 0);
  CocycleReport r = cocycle_check(e);
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-13);
  CHECK(r.max_unitarity_defect < 1e-13);
  CHECK(r.shape_complete);

  // definition check at one lattice point: psi = chart_rho^* chart_sigma
  Simplex rho{0, 1}, sigma{0, 1, 2};
  LatticeCoords c{3, 1};
  CMatrix chart_rho = phase((0.31 * 0 * 3 + 0.07 * 9 + 0.31 * 1 * 1 + 0.07 * 1) / 10.0);
  CMatrix chart_sigma = phase((0.31 * 0 * 3 + 0.07 * 9 + 0.31 * 1 * 1 + 0.07 * 1 + 0.31 * 2 * 0 + 0.07 * 0) / 10.0);
  CMatrix expect = chart_rho.adjoint() * chart_sigma;
  CHECK(op_norm(e.psi_at(rho, sigma, c) - expect) < 1e-14);
}

TEST_CASE("identity bundle is exactly flat") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  CocycleBundle e = identity_bundle(tri, 2, 4);
  CHECK(flatness_audit(e).audit == 0.0);
  CocycleReport r = cocycle_check(e);
  CHECK(r.pass);
  CHECK(r.max_residual == 0.0);
}

TEST_CASE("flatness audit reports the worst transition pair") {
  CocycleBundle e = triangle_chart_bundle();
  FlatnessReport f = flatness_audit(e);
  CHECK(f.audit > 0);
  CHECK(f.pairs.size() == e.transitions.size());
  double worst = 0;
  for (const auto& p : f.pairs) worst = std::max(worst, p.estimate);
  CHECK(f.audit == worst);
}

TEST_CASE("cocycle_check pinpoints planted corruption") {
  CocycleBundle e = triangle_chart_bundle();

  SUBCASE("coherence violation") {
    // corrupt the vertex-in-face transition at the unique vertex point
    e.transitions.at({{1}, {0, 1, 2}}).values[0] *= std::exp(cplx(0, 0.01));
    CocycleReport r = cocycle_check(e);
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual == doctest::Approx(2 * std::sin(0.005)).epsilon(1e-6));
    REQUIRE(r.first_violation.has_value());
    CHECK(r.first_violation->tau == Simplex{1});
  }

  SUBCASE("identity pair violation") {
    e.transitions.at({{0, 1}, {0, 1}}).values[2] = phase(0.05);
    CocycleReport r = cocycle_check(e);
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual >= 2 * std::sin(0.025) - 1e-9);
  }

  SUBCASE("unitarity violation") {
    e.transitions.at({{0}, {0, 1}}).values[0] *= 1.1;
    CocycleReport r = cocycle_check(e);
    CHECK_FALSE(r.pass);
    CHECK(r.max_unitarity_defect == doctest::Approx(1.1 * 1.1 - 1.0).epsilon(1e-9));
  }

  SUBCASE("missing pair breaks the shape") {
    e.transitions.erase({{0}, {0, 1}});
    CocycleReport r = cocycle_check(e);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.shape_complete);
    CHECK(r.shape_detail.find("missing {0} in {0,1}") != std::string::npos);
  }
}

TEST_CASE("pullback along the identity is bit-exact") {
  CocycleBundle e = triangle_chart_bundle();
  Complex tri = e.base;
  CocycleBundle p = pullback(e, tri, {{0, 0}, {1, 1}, {2, 2}});
  REQUIRE(p.transitions.size() == e.transitions.size());
  for (const auto& [key, f] : e.transitions) {
    const auto& g = p.transitions.at(key);
    REQUIRE(g.values.size() == f.values.size());
    for (size_t i = 0; i < f.values.size(); ++i)
      CHECK(op_norm(g.values[i] - f.values[i]) == 0.0);
  }
}

TEST_CASE("pullback along an involution squares to the identity") {
  CocycleBundle e = triangle_chart_bundle();
  std::map<Vertex, Vertex> swap{{0, 0}, {1, 2}, {2, 1}};
  CocycleBundle once = pullback(e, e.base, swap);
  CHECK(cocycle_check(once).pass);
  CocycleBundle twice = pullback(once, e.base, swap);
  for (const auto& [key, f] : e.transitions) {
    const auto& g = twice.transitions.at(key);
    for (size_t i = 0; i < f.values.size(); ++i)
      CHECK(op_norm(g.values[i] - f.values[i]) == 0.0);
  }
}

TEST_CASE("pullback accepts collapses but rejects images outside the base") {
  CocycleBundle e = triangle_chart_bundle();
  Complex square = build_complex({0, 1, 2, 3}, {{0, 1, 2}, {1, 2, 3}});
  // collapsing 3 onto 0 folds {1,2,3} onto the triangle: legal simplicial map
  CocycleBundle folded = pullback(e, square, {{0, 0}, {1, 1}, {2, 2}, {3, 0}});
  CHECK(cocycle_check(folded).pass);
  // the identity on vertex labels is not simplicial here: 3 is not in the base
  CHECK_THROWS_AS(pullback(e, square, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}),
                  InputError);
  CHECK_THROWS_AS(pullback(e, square, {{0, 0}, {1, 1}, {2, 2}}), InputError);
}

TEST_CASE("bundle restriction keeps transition data bit-exact") {
  CocycleBundle e = triangle_chart_bundle();
  Complex edge = build_complex({0, 1}, {{0, 1}});
  CocycleBundle r = bundle_restrict(e, edge);
  CHECK(r.transitions.size() == 5);  // 2 identity pairs on vertices + 2 vertex-in-edge + edge-in-edge
  for (const auto& [key, f] : r.transitions) {
    const auto& g = e.transitions.at(key);
    for (size_t i = 0; i < f.values.size(); ++i)
      CHECK(op_norm(g.values[i] - f.values[i]) == 0.0);
  }
  CHECK(cocycle_check(r).pass);
}

TEST_CASE("direct sum is block diagonal") {
  CocycleBundle a = triangle_chart_bundle();
  CocycleBundle b = triangle_rank2_bundle();
  CocycleBundle s = direct_sum(a, b);
  CHECK(s.rank == 3);
  CHECK(cocycle_check(s).pass);
  Simplex rho{0}, sigma{0, 1, 2};
  CMatrix va = a.psi(rho, sigma).values[0];
  CMatrix vb = b.psi(rho, sigma).values[0];
  CMatrix vs = s.psi(rho, sigma).values[0];
  CHECK(op_norm(vs.block(0, 0, 1, 1) - va) == 0.0);
  CHECK(op_norm(vs.block(1, 1, 2, 2) - vb) == 0.0);
  CHECK(std::abs(vs(0, 1)) == 0.0);
  CHECK(std::abs(vs(2, 0)) == 0.0);

  FlatnessReport fs = flatness_audit(s);
  FlatnessReport fa = flatness_audit(a);
  FlatnessReport fb = flatness_audit(b);
  CHECK(fs.audit == doctest::Approx(std::max(fa.audit, fb.audit)).epsilon(1e-12));
}

TEST_CASE("subdivision transitions stay coherent for scalar bundles") {
  // polar projection is multiplicative on scalars, so interpolation cannot
  // break the cocycle identity in rank one
  CocycleBundle e = triangle_chart_bundle();
  Subdivision sd = barycentric_subdivide(e.base);
  CocycleBundle es = to_subdivision(e, sd);
  CHECK(es.base.simplices.size() == 25);
  CocycleReport r = cocycle_check(es, 1e-10);
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-12);
}

TEST_CASE("subdivision keeps higher rank chart bundles coherent too") {
  // the interpolated values are genuinely new matrices (not copies of stored
  // samples), yet the cocycle identity survives to machine precision because
  // all three transitions of a chain interpolate through the same carrier
  CocycleBundle e = triangle_rank2_bundle();
  Subdivision sd = barycentric_subdivide(e.base);
  CocycleBundle es = to_subdivision(e, sd);
  CocycleReport strict = cocycle_check(es, 1e-13);
  CHECK(strict.pass);
  CHECK(strict.max_residual < 1e-13);
  // audit shrinks: transitions live on half-size simplices
  CHECK(flatness_audit(es).audit < flatness_audit(e).audit);
}

TEST_CASE("trivialization residual vanishes for adjoint charts") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  auto chart_fn = [&](const Simplex& s, const LatticeCoords& c) {
    double t = 0;
    for (size_t i = 0; i < s.size(); ++i) t += 0.11 * s[i] * c[i];
    return phase(t / 7.0);
  };
  CocycleBundle e = bundle_from_charts(tri, 1, 4, chart_fn);
  GlobalTrivialization t;
  t.rank = 1;
  t.depth = 4;
  for (const auto& s : tri.simplices) {
    t.charts[s] = make_sampled(static_cast<int>(s.size()) - 1, 4,
                               [&](const LatticeCoords& c) { return chart_fn(s, c).adjoint().eval(); });
  }
  CHECK(trivialization_residual(e, t) < 1e-14);

  // breaking one chart value shows up in the residual
  t.charts[{0, 1, 2}].values[3] = phase(1.0);
  CHECK(trivialization_residual(e, t) > 0.01);
}
