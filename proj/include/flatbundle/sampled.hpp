#pragma once

#include <functional>
#include <map>
#include <vector>

#include "flatbundle/types.hpp"

namespace flatbundle {

// Barycentric lattice coordinates: k+1 non-negative integers summing to the
// depth m. Geometric position is coords/m inside the standard simplex
// (vertices at unit coordinate vectors, so vertex-vertex distance sqrt(2)).
using LatticeCoords = std::vector<int>;

struct LatticePoint {
  Simplex simplex;
  LatticeCoords coords;
};

// All depth-m lattice points of a k-simplex, lexicographically ascending in
// the coordinate tuple. This order fixes serialization and value indexing.
std::vector<LatticeCoords> lattice_points(int k, int m);
std::vector<LatticeCoords> boundary_lattice_points(int k, int m);  // min coord 0

double lattice_distance(const LatticeCoords& a, const LatticeCoords& b, int m);

// Unitary-matrix-valued map sampled on a simplex lattice.
struct SampledUnitaryMap {
  int k = 0;
  int m = 1;
  bool boundary_only = false;
  std::vector<CMatrix> values;  // indexed by the enumeration order above

  int rank() const;
  const std::vector<LatticeCoords>& points() const;  // cached enumeration
  int index_of(const LatticeCoords& c) const;        // -1 if absent
  const CMatrix& at(const LatticeCoords& c) const;
  CMatrix& at(const LatticeCoords& c);

  // Value at an arbitrary barycentric point: affine interpolation over the
  // containing lattice cell (Kuhn cell in cumulative coordinates), projected
  // back to the unitary group. Exact lattice points return the stored value.
  CMatrix eval(const std::vector<double>& bary) const;
};

SampledUnitaryMap make_sampled(
    int k, int m, const std::function<CMatrix(const LatticeCoords&)>& f);
SampledUnitaryMap make_boundary_sampled(
    int k, int m, const std::function<CMatrix(const LatticeCoords&)>& f);
SampledUnitaryMap constant_map(int k, int m, const CMatrix& v);

// Max over sample pairs of ||f(x) - f(y)|| / d(x, y).
double lipschitz_estimate(const SampledUnitaryMap& f);

// Max over sample pairs of ||f(x) - f(y)||.
double sampled_diameter(const SampledUnitaryMap& f);

// Restriction of a full sampled map to the face using the given coordinate
// slots (ascending positions within the parent simplex).
SampledUnitaryMap restrict_map(const SampledUnitaryMap& f, const std::vector<int>& slots);

// Cone extension of a boundary-sampled matrix map vanishing at s0: with
// radial coordinate t(p) = 1 - (k+1) * min barycentric coordinate, interior
// values are (2t-1) * beta0(radial boundary projection) for t >= 1/2 and 0
// below. Off-lattice boundary projections use the nearest boundary sample
// (ties resolved lexicographically). Values stay in the R-ball.
SampledUnitaryMap cone_extend_vector(const SampledUnitaryMap& beta0,
                                     const LatticeCoords& s0, double R);

// Extension of a boundary-sampled unitary map with sampled diameter <= 1/2
// to the full lattice; boundary values are kept bit-exact.
SampledUnitaryMap unitary_extend(const SampledUnitaryMap& alpha0, double tol = 1e-12);

}  // namespace flatbundle
