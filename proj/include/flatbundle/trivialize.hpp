#pragma once

#include <optional>

#include "flatbundle/bundle.hpp"
#include "flatbundle/transport.hpp"

namespace flatbundle {

// Certificate for one non-tree edge {x,y}: a based loop crossing the edge
// once, with every other step a tree edge, and its measured transport defect.
// Witness and bound report are present when the certificate was synthesized
// from a contraction witness.
struct LoopCertificate {
  Simplex edge;
  SimplicialPath loop;
  double defect = 0;
  std::optional<ContractionWitness> witness;
  std::optional<WitnessedBoundReport> bound;
};

struct TrivializeOptions {
  double max_audit = -1;   // flatness gate; <0 means hc_constants(1).delta
  double max_defect = -1;  // certificate defect gate; <0 means the audit
  double tol = 1e-9;
};

struct TrivializationResult {
  GlobalTrivialization triv;
  Tree tree;
  std::vector<LoopCertificate> certificates;
  double audit = 0;     // input flatness audit
  double residual = 0;  // measured chart/transition compatibility residual
};

// Chart construction from certified loop data: vertex charts are tree
// transports from the root, every higher chart is forced on its boundary by
// the already-built face charts and filled in by unitary_extend, in
// dimension-major simplex order.
TrivializationResult trivialize(const CocycleBundle& e, const Tree& tree,
                                const std::vector<LoopCertificate>& certs,
                                const TrivializeOptions& opts = {});

// Synthesizes the certificates: loops for the non-tree edges of the BFS tree,
// contraction witnesses found deterministically, each verified through
// verify_witnessed_bound before the construction runs.
TrivializationResult trivialize_contractible(const CocycleBundle& e,
                                             const TrivializeOptions& opts = {});

struct ExtendOptions {
  double log_margin = 0.1;  // branch-cut margin for boundary-transport logs
  double max_defect = -1;   // optional explicit defect gate per 2-simplex
  TrivializeOptions inner;  // gates for the k >= 2 boundary trivializations
};

// Fills every 2-simplex of x over the edge data: corner charts balance the
// boundary transport by its principal cube root, edge transitions interpolate
// along unitary geodesics. Refuses any 2-simplex whose boundary transport has
// an eigenvalue argument within log_margin of the branch cut.
CocycleBundle extend_skeleton_1to2(const CocycleBundle& e, const Complex& x,
                                   const ExtendOptions& opts = {});

// One-level skeleton extension X^(k) -> X^(k+1) where k = dim of e's base.
// k = 0 attaches identity edge data, k = 1 delegates to extend_skeleton_1to2,
// k >= 2 trivializes the boundary of each (k+1)-simplex minus one facet and
// extends across the last facet.
CocycleBundle extend_skeleton(const CocycleBundle& e, const Complex& x,
                              const ExtendOptions& opts = {});

// Data for a new edge joining two old vertices: a connecting path in the old
// complex, plus (optionally) a witness that path*(edge reversed) contracts in
// the enlarged complex.
struct EdgeExtensionHint {
  Simplex edge;
  SimplicialPath path;
  std::optional<ContractionWitness> witness;
};

// Extends e over a supercomplex: dangling vertices/edges get identity data,
// new edges between old vertices take their transport from the hinted path,
// new 2-cells and higher cells reuse the skeleton-extension constructions.
CocycleBundle extend_subcomplex(const CocycleBundle& e, const Complex& xprime,
                                const std::vector<EdgeExtensionHint>& hints = {},
                                const ExtendOptions& opts = {});

// Isomorphism construction: identity vertex conjugators, boundary-forced
// unitary_extend up the skeleta. Requires every pair of edge transports to be
// within eps (eps <= 1/2 so the edge extension is feasible).
BundleIso iso_between(const CocycleBundle& e, const CocycleBundle& f,
                      double eps);

}  // namespace flatbundle
