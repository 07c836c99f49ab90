#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "flatbundle/bundle.hpp"
#include "flatbundle/quasirep.hpp"
#include "flatbundle/simplicial.hpp"

namespace flatbundle {

// Seven-vertex triangulation of the flat torus on the vertex set Z/7 with
// faces {i, i+1, i+3} and {i, i+2, i+3}, coherently oriented.
Complex torus_complex();

struct SphereComplex {
  Complex complex;
  std::map<Vertex, Eigen::Vector3d> coords;  // unit vectors
};

// Octahedron subdivided `depth` times; each edge gains its normalized
// midpoint and every face splits in four. Orientations point outward.
SphereComplex sphere_complex(int depth);

// Signed spherical area of the geodesic triangle (a, b, c) via the angle
// excess; sign follows det[a b c].
double spherical_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                      const Eigen::Vector3d& c);

// Charge-q monopole line bundle sampled over a triangulated sphere. Charts
// compare the solid angle swept from a fixed reference direction, so the
// cocycle is coherent to machine precision and the flatness audit shrinks
// with the mesh. Requires |q| <= 4.
CocycleBundle monopole_bundle(const SphereComplex& s, int q, int lattice_depth = 4);

// Expected loop transport around the spherical triangle (a, b, c) for the
// charge-q monopole, computed from the angle excess alone.
Complexd holonomy_oracle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                         const Eigen::Vector3d& c, int q);

// Seeded random cocycle from per-simplex exponential charts, rescaled until
// the flatness audit is at most target_eps. Deterministic for a fixed seed.
CocycleBundle random_flat_bundle(const Complex& x, int rank, int depth,
                                 double target_eps, std::uint64_t seed);

// Tree, presentation and homology data for the seven-vertex torus.
struct TorusSetup {
  Complex complex;
  Tree tree;
  Presentation pres;
  // For each presentation generator, its class in H_1 written in the basis
  // dual to (u, v), and the corresponding word u^a v^b.
  std::vector<std::pair<int, int>> classes;
  std::vector<Word> substitution;
};
TorusSetup torus_setup();

// Composite: clock-shift pair at rank k pushed onto the torus presentation
// and extended to a bundle over the whole torus.
CocycleBundle clock_shift_torus_bundle(int k, int depth = 4);

// The torus almost representation itself (before bundling).
AlmostRep clock_shift_torus_rep(int k);

}  // namespace flatbundle
