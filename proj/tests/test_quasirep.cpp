#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "flatbundle/fixtures.hpp"
#include "flatbundle/matrixcore.hpp"
#include "flatbundle/quasirep.hpp"

using namespace flatbundle;
using cplx = std::complex<double>;

namespace {

AlmostRep two_generator_rep(const CMatrix& u, const CMatrix& v) {
  AlmostRep r;
  r.pres.generators = {"a", "b"};
  r.pres.relations = {};
  r.pres.basepoint = 0;
  r.images = {u, v};
  return r;
}

}  // namespace

TEST_CASE("word evaluation composes like transports") {
  CMatrix u = CMatrix::Zero(2, 2), v = CMatrix::Zero(2, 2);
  u << 0, 1, 1, 0;                                     // swap
  v(0, 0) = std::exp(cplx(0, 0.4));
  v(1, 1) = std::exp(cplx(0, -0.4));
  AlmostRep r = two_generator_rep(u, v);

  CHECK(op_norm(evaluate_word(r, {}) - CMatrix::Identity(2, 2)) == 0.0);
  CHECK(op_norm(evaluate_word(r, {1}) - u) == 0.0);
  CHECK(op_norm(evaluate_word(r, {-2}) - v.adjoint()) < 1e-15);
  // word a then b evaluates to v * u, matching transport composition
  CHECK(op_norm(evaluate_word(r, {1, 2}) - v * u) < 1e-15);
  CHECK(op_norm(evaluate_word(r, {1, 2}) -
                evaluate_word(r, {2}) * evaluate_word(r, {1})) < 1e-15);
  CHECK(op_norm(evaluate_word(r, {1, -1}) - CMatrix::Identity(2, 2)) < 1e-15);
  CHECK_THROWS_AS(evaluate_word(r, {3}), InputError);
  CHECK_THROWS_AS(evaluate_word(r, {0}), InputError);
}

TEST_CASE("clock and shift pair") {
  for (int k : {2, 4, 6, 12}) {
    AlmostRep r = clock_shift(k);
    CHECK(r.rank() == k);
    CHECK(r.pres.generators.size() == 2);
    REQUIRE(r.pres.relations.size() == 1);
    // the commutator relation leaves exactly the 2 sin(pi/k) defect
    CHECK(defect(r) == doctest::Approx(2.0 * std::sin(M_PI / k)).epsilon(1e-12));
    for (const CMatrix& g : r.images) CHECK(unitarity_defect(g) < 1e-13);
  }
  CHECK_THROWS_AS(clock_shift(1), InputError);
}

TEST_CASE("closeness compares images of matching presentations") {
  AlmostRep a = clock_shift(4);
  AlmostRep b = clock_shift(4);
  CHECK(closeness(a, b) == 0.0);
  b.images[0] *= std::exp(cplx(0, 0.2));
  CHECK(closeness(a, b) == doctest::Approx(2.0 * std::sin(0.1)).epsilon(1e-12));
  AlmostRep c = clock_shift(6);
  CHECK_THROWS_AS(closeness(a, c), PreconditionError);
  // the embedded variant pads the smaller rank with the identity corner
  double emb = closeness_embedded(a, c);
  CHECK(emb > 0.0);
  CHECK(emb <= 2.0 + 1e-12);
}

TEST_CASE("substitution evaluates words in the source rep") {
  AlmostRep src = clock_shift(4);
  Presentation target;
  target.generators = {"w"};
  target.relations = {};
  target.basepoint = 0;
  // w := u v u^{-1}
  AlmostRep out = substitute(src, target, {Word{1, 2, -1}});
  CHECK(out.rank() == 4);
  REQUIRE(out.images.size() == 1);
  CMatrix expect = evaluate_word(src, {1, 2, -1});
  CHECK(op_norm(out.images[0] - expect) == 0.0);
  CHECK_THROWS_AS(substitute(src, target, {}), InputError);  // word count mismatch
}

TEST_CASE("direct sums of reps") {
  AlmostRep a = clock_shift(2);
  AlmostRep b = clock_shift(4);
  AlmostRep s = rep_direct_sum(a, b);
  CHECK(s.rank() == 6);
  CHECK(defect(s) == doctest::Approx(std::max(defect(a), defect(b))).epsilon(1e-12));
  CHECK(op_norm(s.images[0].block(0, 0, 2, 2) - a.images[0]) == 0.0);
  CHECK(op_norm(s.images[0].block(2, 2, 4, 4) - b.images[0]) == 0.0);
}

TEST_CASE("torus clock-shift rep pushes onto the tree presentation") {
  TorusSetup setup = torus_setup();
  CHECK(setup.pres.generators.size() == 15);
  AlmostRep rep = clock_shift_torus_rep(6);
  CHECK(rep.rank() == 6);
  CHECK(rep.pres.generators.size() == 15);
  // relation defects cannot exceed the generating pair's commutator defect
  CHECK(defect(rep) <= 2.0 * std::sin(M_PI / 6) + 1e-12);
  CHECK(defect(rep) > 0.0);
}

TEST_CASE("rep to bundle and back is lossless") {
  TorusSetup setup = torus_setup();
  AlmostRep rep = clock_shift_torus_rep(6);
  CocycleBundle e = rep_to_bundle(rep, setup.complex, setup.tree, 4);
  CHECK(e.base.simplices.size() == setup.complex.simplices.size());
  CHECK(cocycle_check(e).pass);
  AlmostRep back = bundle_to_rep(e, rep.pres);
  CHECK(closeness(rep, back) < 1e-12);
}

TEST_CASE("bundle_to_rep reads transports along the presentation loops") {
  Complex tri = build_complex({0, 1, 2}, {{0, 1, 2}});
  CocycleBundle e = random_flat_bundle(tri, 2, 4, 0.01, 21);
  Tree t = maximal_tree(tri);
  Presentation p = presentation_from_tree(tri, t);
  AlmostRep r = bundle_to_rep(e, p);
  REQUIRE(r.images.size() == p.generators.size());
  for (size_t i = 0; i < p.generators.size(); ++i) {
    CMatrix expect = path_transport(e, p.generator_loops[i]).matrix;
    CHECK(op_norm(r.images[i] - expect) == 0.0);
  }
  // the triangle is simply connected, so its single relation bounds the defect
  CHECK(defect(r) <= hc_constants(1).c * 0.01 + 1e-9);
}

TEST_CASE("rep_to_bundle validates its presentation") {
  TorusSetup setup = torus_setup();
  AlmostRep rep = clock_shift_torus_rep(4);
  AlmostRep broken = rep;
  broken.pres.basepoint = 3;
  CHECK_THROWS_AS(rep_to_bundle(broken, setup.complex, setup.tree, 4),
                  InputError);
  CHECK_THROWS_AS(rep_to_bundle(rep, setup.complex, setup.tree, 0), InputError);
}

TEST_CASE("rep sequences certify asymptotic behavior") {
  RepSequence s;
  for (int k : {6, 12, 24}) s.reps.push_back(clock_shift(k));
  RepSequenceReport r = check_sequence(s);
  CHECK(r.pass);
  CHECK(r.ranks_nondecreasing);
  CHECK(r.defects_nonincreasing);
  REQUIRE(r.defects.size() == 3);
  CHECK(r.defects[0] == doctest::Approx(1.0).epsilon(1e-12));  // 2 sin(pi/6)
  CHECK(r.defects[2] == doctest::Approx(2.0 * std::sin(M_PI / 24)).epsilon(1e-12));
  CHECK(r.closeness_steps.size() == 2);

  // reversing breaks monotonicity
  RepSequence bad;
  for (int k : {24, 6}) bad.reps.push_back(clock_shift(k));
  RepSequenceReport rb = check_sequence(bad);
  CHECK_FALSE(rb.pass);
}
