#include "flatbundle/quasirep.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "flatbundle/matrixcore.hpp"
#include "flatbundle/transport.hpp"

namespace flatbundle {

namespace {

bool same_presentation(const Presentation& a, const Presentation& b) {
  return a.generators == b.generators && a.relations == b.relations;
}

CMatrix embed_corner(const CMatrix& u, int n) {
  CMatrix out = identity(n);
  out.topLeftCorner(u.rows(), u.cols()) = u;
  return out;
}

}  // namespace

int AlmostRep::rank() const {
  if (images.empty()) throw InputError("almost representation has no generator images");
  return static_cast<int>(images.front().rows());
}

CMatrix evaluate_word(const AlmostRep& rep, const Word& w) {
  const int n = rep.rank();
  for (const auto& img : rep.images) {
    if (img.rows() != n || img.cols() != n)
      throw InputError("generator images have mixed ranks");
  }
  CMatrix acc = identity(n);
  for (int letter : w) {
    if (letter == 0) throw InputError("word contains the zero letter");
    int idx = std::abs(letter) - 1;
    if (idx >= static_cast<int>(rep.images.size()))
      throw InputError("word references generator " + std::to_string(std::abs(letter)) +
                       " but the representation has only " +
                       std::to_string(rep.images.size()));
    const CMatrix& g = rep.images[idx];
    if (letter > 0)
      acc = g * acc;
    else
      acc = g.adjoint() * acc;
  }
  return acc;
}

double defect(const AlmostRep& rep) {
  if (rep.images.size() != rep.pres.generators.size())
    throw InputError("image count does not match the presentation");
  const int n = rep.rank();
  double worst = 0.0;
  for (const auto& r : rep.pres.relations) {
    CMatrix v = evaluate_word(rep, r);
    worst = std::max(worst, op_norm(CMatrix(v - identity(n))));
  }
  return worst;
}

double closeness(const AlmostRep& a, const AlmostRep& b) {
  if (!same_presentation(a.pres, b.pres))
    throw PreconditionError("closeness needs matching presentations");
  if (a.rank() != b.rank())
    throw PreconditionError("closeness needs equal ranks; use the corner embedding for sequences");
  double worst = 0.0;
  for (size_t i = 0; i < a.images.size(); ++i)
    worst = std::max(worst, op_norm(CMatrix(a.images[i] - b.images[i])));
  return worst;
}

double closeness_embedded(const AlmostRep& a, const AlmostRep& b) {
  if (!same_presentation(a.pres, b.pres))
    throw PreconditionError("closeness needs matching presentations");
  if (a.images.size() != b.images.size())
    throw PreconditionError("closeness needs matching generator counts");
  const int n = std::max(a.rank(), b.rank());
  double worst = 0.0;
  for (size_t i = 0; i < a.images.size(); ++i) {
    CMatrix ua = embed_corner(a.images[i], n);
    CMatrix ub = embed_corner(b.images[i], n);
    worst = std::max(worst, op_norm(CMatrix(ua - ub)));
  }
  return worst;
}

AlmostRep substitute(const AlmostRep& rep, const Presentation& target,
                     const std::vector<Word>& words) {
  if (words.size() != target.generators.size())
    throw InputError("substitution needs one word per target generator");
  AlmostRep out;
  out.pres = target;
  out.images.reserve(words.size());
  for (const auto& w : words) out.images.push_back(evaluate_word(rep, w));
  return out;
}

AlmostRep bundle_to_rep(const CocycleBundle& e, const Presentation& p) {
  if (p.generator_loops.size() != p.generators.size())
    throw PreconditionError("presentation carries no generator loops");
  AlmostRep out;
  out.pres = p;
  out.images.reserve(p.generators.size());
  for (const auto& loop : p.generator_loops)
    out.images.push_back(path_transport(e, loop).matrix);
  return out;
}

CocycleBundle rep_to_bundle(const AlmostRep& rep, const Complex& x,
                            const Tree& tree, int depth, const ExtendOptions& opts) {
  if (rep.images.size() != rep.pres.generators.size())
    throw InputError("image count does not match the presentation");
  Complex one = skeleton(x, 1);
  if (!tree.spans_all)
    throw PreconditionError("tree does not span the complex");
  for (Vertex v : one.vertices)
    if (v != tree.root && !tree.parent.count(v))
      throw PreconditionError("tree does not reach vertex " + std::to_string(v));
  Presentation check = presentation_from_tree(x, tree);
  if (check.generator_edges != rep.pres.generator_edges ||
      check.basepoint != rep.pres.basepoint)
    throw InputError("presentation was not generated from this tree");
  const int n = rep.rank();
  if (depth < 1) throw InputError("lattice depth must be positive");

  CocycleBundle e1 = identity_bundle(one, n, depth);
  for (size_t i = 0; i < rep.pres.generator_edges.size(); ++i) {
    const Simplex& edge = rep.pres.generator_edges[i];
    // Transport across the edge from the low to the high vertex is the
    // generator image; tree edges stay identity.
    Simplex hi{edge[1]};
    SampledUnitaryMap m = e1.psi(hi, edge);
    for (auto& v : m.values) v = rep.images[i];
    e1.transitions[{hi, edge}] = std::move(m);
  }

  if (x.dim() <= 1) return e1;
  CocycleBundle out = extend_skeleton_1to2(e1, skeleton(x, 2), opts);
  while (out.base.dim() < x.dim()) out = extend_skeleton(out, x, opts);
  return out;
}

AlmostRep clock_shift(int k) {
  if (k < 2) throw InputError("clock-shift rank must be at least 2");
  CMatrix u = CMatrix::Zero(k, k);
  for (int j = 0; j < k; ++j) u((j + 1) % k, j) = 1.0;
  CMatrix v = CMatrix::Zero(k, k);
  const double two_pi = 2.0 * M_PI;
  for (int j = 0; j < k; ++j)
    v(j, j) = std::exp(Complexd(0.0, two_pi * j / k));
  AlmostRep out;
  out.pres.generators = {"u", "v"};
  out.pres.relations = {Word{1, 2, -1, -2}};
  out.pres.basepoint = -1;
  out.images = {u, v};
  return out;
}

AlmostRep rep_direct_sum(const AlmostRep& a, const AlmostRep& b) {
  if (!same_presentation(a.pres, b.pres))
    throw PreconditionError("direct sum needs matching presentations");
  AlmostRep out;
  out.pres = a.pres;
  out.images.reserve(a.images.size());
  for (size_t i = 0; i < a.images.size(); ++i) {
    int na = static_cast<int>(a.images[i].rows());
    int nb = static_cast<int>(b.images[i].rows());
    CMatrix blk = CMatrix::Zero(na + nb, na + nb);
    blk.topLeftCorner(na, na) = a.images[i];
    blk.bottomRightCorner(nb, nb) = b.images[i];
    out.images.push_back(std::move(blk));
  }
  return out;
}

RepSequenceReport check_sequence(const RepSequence& s) {
  RepSequenceReport rep;
  if (s.reps.empty()) {
    rep.pass = false;
    return rep;
  }
  for (const auto& r : s.reps) rep.defects.push_back(defect(r));
  for (size_t i = 0; i + 1 < s.reps.size(); ++i) {
    if (s.reps[i + 1].rank() < s.reps[i].rank()) rep.ranks_nondecreasing = false;
    if (rep.defects[i + 1] > rep.defects[i] + 1e-12) rep.defects_nonincreasing = false;
    rep.closeness_steps.push_back(closeness_embedded(s.reps[i], s.reps[i + 1]));
  }
  rep.pass = rep.ranks_nondecreasing && rep.defects_nonincreasing;
  return rep;
}

}  // namespace flatbundle
