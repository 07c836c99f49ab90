#pragma once

#include "flatbundle/bundle.hpp"

namespace flatbundle {

// Vertex-chart transport across the edge {a,b}:
//   mat(a -> b) = Psi_{b in e}(b) * Psi_{a in e}(a)^{-1}.
CMatrix edge_transport(const CocycleBundle& e, Vertex a, Vertex b);

struct TransportResult {
  CMatrix matrix;
  SimplicialPath path;
};

// Composite transport along an edge path; later edges multiply on the left
// (T_{G1*G2} = T_{G2} T_{G1}). Repeated vertices contribute the identity.
TransportResult path_transport(const CocycleBundle& e, const SimplicialPath& p);

// || T_loop - 1 || for a closed path.
double loop_defect(const CocycleBundle& e, const SimplicialPath& loop);

// Defect constants for witnessed nullhomotopies of complexity n:
//   c(1) = 7 sqrt(2),  c(n) = 3^{n-1} * 7 sqrt(2),
//   delta(1) = 1 / (7 sqrt(2)),
//   delta(n) = min(1/c(1), 1/c(n-1), delta(n-1)).
struct HcConstants {
  double c = 0;
  double delta = 0;
};
HcConstants hc_constants(int n);

struct WitnessedBoundReport {
  bool witness_valid = false;  // moves replay and the loop contracts
  int complexity = 0;
  double audit = 0;            // flatness audit used for the bound
  double delta = 0;            // admissible audit threshold delta(n)
  bool audit_ok = false;       // audit <= delta
  double defect = 0;           // measured loop defect
  double bound = 0;            // c(n) * audit
  bool defect_within = false;  // defect <= bound (+ tol)
  bool pass = false;

  std::string describe() const;
};

// Checks the full witnessed statement: the witness contracts the loop, the
// bundle is flat enough for its complexity, and the measured transport defect
// respects c(n) * audit. A precomputed audit avoids re-scanning the bundle.
WitnessedBoundReport verify_witnessed_bound(const CocycleBundle& e,
                                            const SimplicialPath& loop,
                                            const ContractionWitness& w,
                                            double audit = -1,
                                            double tol = 1e-9);

}  // namespace flatbundle
