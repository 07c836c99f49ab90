#pragma once

#include <functional>
#include <map>
#include <utility>

#include "flatbundle/sampled.hpp"
#include "flatbundle/simplicial.hpp"

namespace flatbundle {

// Sampled unitary transition cocycle over a finite simplicial complex. Only
// transition data is stored (no total space); the vertex simplices act as
// canonical basepoint charts. For every pair rho <= sigma of simplices the
// bundle holds the transition Psi_{rho in sigma} sampled on rho's lattice.
struct CocycleBundle {
  Complex base;
  int rank = 1;
  int depth = 4;
  std::map<std::pair<Simplex, Simplex>, SampledUnitaryMap> transitions;

  const SampledUnitaryMap& psi(const Simplex& rho, const Simplex& sigma) const;
  // Transition value at a lattice point given in rho-coordinates.
  CMatrix psi_at(const Simplex& rho, const Simplex& sigma, const LatticeCoords& c) const;
  bool has_pair(const Simplex& rho, const Simplex& sigma) const;
};

// Coordinate slots of the face `rho` inside `sigma` (positions of rho's
// vertices in sigma's sorted vertex list).
std::vector<int> face_slots(const Simplex& rho, const Simplex& sigma);
// Embeds rho-lattice coordinates into sigma-lattice coordinates (zeros off rho).
LatticeCoords embed_coords(const Simplex& rho, const Simplex& sigma,
                           const LatticeCoords& c);
// Smallest face of sigma supporting the coordinates (positive slots).
Simplex support_face(const Simplex& sigma, const LatticeCoords& c);

// Builds a coherent bundle from per-simplex chart functions
// chart(sigma, coords over sigma) -> U(n): Psi_{rho in sigma} =
// chart(rho,.)^* chart(sigma,.). Coherence is exact by construction.
CocycleBundle bundle_from_charts(
    const Complex& x, int rank, int depth,
    const std::function<CMatrix(const Simplex&, const LatticeCoords&)>& chart);

CocycleBundle identity_bundle(const Complex& x, int rank, int depth);

struct FlatnessPair {
  Simplex rho, sigma;
  double estimate;
};
struct FlatnessReport {
  double audit = 0;                 // max Lipschitz estimate over transitions
  std::vector<FlatnessPair> pairs;  // per-transition estimates
};
FlatnessReport flatness_audit(const CocycleBundle& e);

struct CocycleViolation {
  Simplex tau, rho, sigma;
  LatticeCoords at;
  double residual = 0;
};
struct CocycleReport {
  bool pass = false;
  double max_residual = 0;          // over coherence triples and identity pairs
  double max_unitarity_defect = 0;
  bool shape_complete = true;       // every pair rho <= sigma present, right sizes
  std::string shape_detail;
  std::optional<CocycleViolation> first_violation;
};
// Verifies Psi_{rho in rho} = 1, unitarity within tol_unitary, and the
// coherence Psi_{tau in sigma} = Psi_{tau in rho} Psi_{rho in sigma} at every
// tau-lattice point, within tol.
CocycleReport cocycle_check(const CocycleBundle& e, double tol = 1e-7,
                            double tol_unitary = 1e-8);

// Simplicial map given by its vertex map; must send simplices to simplices.
CocycleBundle pullback(const CocycleBundle& e, const Complex& x,
                       const std::map<Vertex, Vertex>& vertex_map);

// Restriction to a subcomplex of the base.
CocycleBundle bundle_restrict(const CocycleBundle& e, const Complex& sub);

// Direct sum: block-diagonal transitions over the same base and depth.
CocycleBundle direct_sum(const CocycleBundle& a, const CocycleBundle& b);

// Transitions pulled through the barycenter coordinate map onto the
// barycentric subdivision: Psi'_{rho' in sigma'}(x) =
// Psi_{max rho' in max sigma'}(Xi(x)), interpolated between lattice points.
CocycleBundle to_subdivision(const CocycleBundle& e, const Subdivision& sd);

// Inverse direction: trivializes each S(closed simplex), gauge-fixed so the
// barycenter chart is the identity, and takes chart quotients as the new
// transitions. Implemented with the trivialization machinery.
CocycleBundle from_subdivision(const CocycleBundle& e_sub, const Complex& x,
                               const Subdivision& sd);

// Global trivialization: one chart per simplex, compatible with transitions.
struct GlobalTrivialization {
  int rank = 1;
  int depth = 4;
  std::map<Simplex, SampledUnitaryMap> charts;
  double chart_audit = 0;  // max Lipschitz estimate over charts

  const SampledUnitaryMap& chart(const Simplex& s) const;
};

// Max over pairs rho <= sigma and rho-lattice points of
// || chart_rho(x) - Psi_{rho in sigma}(x) chart_sigma(x) ||.
double trivialization_residual(const CocycleBundle& e, const GlobalTrivialization& t);

// Bundle isomorphism as per-simplex sampled conjugators.
struct BundleIso {
  int rank = 1;
  int depth = 4;
  std::map<Simplex, SampledUnitaryMap> conjugators;
  double max_residual = 0;   // intertwining residual
  double edge_gap = 0;       // max edge-transport distance between the bundles
};

}  // namespace flatbundle
