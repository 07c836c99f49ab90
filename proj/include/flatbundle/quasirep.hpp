#pragma once

#include "flatbundle/bundle.hpp"
#include "flatbundle/trivialize.hpp"

namespace flatbundle {

// Almost representation: one unitary per generator of a finite presentation.
// Relation words need not evaluate exactly to the identity; defect() measures
// how far they are.
struct AlmostRep {
  Presentation pres;
  std::vector<CMatrix> images;

  int rank() const;
};

// Free-group evaluation. Words are read in traversal order and composed like
// transports: evaluate(w1 * w2) = evaluate(w2) * evaluate(w1).
CMatrix evaluate_word(const AlmostRep& rep, const Word& w);

// Max over relations of || evaluate(r) - 1 ||.
double defect(const AlmostRep& rep);

// Max over generators of image distance. Requires equal rank and matching
// presentations.
double closeness(const AlmostRep& a, const AlmostRep& b);

// Cross-rank closeness via top-left corner embedding padded by the identity.
double closeness_embedded(const AlmostRep& a, const AlmostRep& b);

// Images of the target generators are the evaluations of the given words in
// the source rep. The defect of the result is measured, not assumed.
AlmostRep substitute(const AlmostRep& rep, const Presentation& target,
                     const std::vector<Word>& words);

// Generator images = path transports along the presentation's loops.
AlmostRep bundle_to_rep(const CocycleBundle& e, const Presentation& p);

// Trivial bundle on the 1-skeleton with edge transports id on tree edges and
// the generator images across the non-tree edges, then extended up the
// skeleta. The presentation must be the one generated from the tree.
CocycleBundle rep_to_bundle(const AlmostRep& rep, const Complex& x,
                            const Tree& tree, int depth = 4,
                            const ExtendOptions& opts = {});

// u = cyclic shift, v = diag(1, w, ..., w^{k-1}) on C^k, w = e^{2 pi i / k};
// presentation <u, v | u v u^-1 v^-1>, defect 2 sin(pi / k).
AlmostRep clock_shift(int k);

AlmostRep rep_direct_sum(const AlmostRep& a, const AlmostRep& b);

// Finite-depth asymptotic-representation bookkeeping.
struct RepSequence {
  std::vector<AlmostRep> reps;
};

struct RepSequenceReport {
  bool ranks_nondecreasing = true;
  bool defects_nonincreasing = true;
  std::vector<double> defects;
  std::vector<double> closeness_steps;  // embedded closeness of consecutive reps
  bool pass = false;
};
RepSequenceReport check_sequence(const RepSequence& s);

}  // namespace flatbundle
