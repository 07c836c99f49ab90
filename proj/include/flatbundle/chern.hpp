#pragma once

#include <string>
#include <vector>

#include "flatbundle/bundle.hpp"
#include "flatbundle/simplicial.hpp"
#include "flatbundle/transport.hpp"

namespace flatbundle {

struct FaceFlux {
  Simplex face;
  double flux = 0.0;
};

struct ChernResult {
  int chern = 0;
  double residue = 0.0;      // distance of total flux / 2 pi from the integer
  double total_flux = 0.0;
  double max_step_arg = 0.0; // largest single determinant-argument step seen
  std::vector<FaceFlux> fluxes;
};

// First Chern number of a bundle over a closed oriented surface. The flux of
// a face is the winding of the transition determinant along its oriented
// boundary, accumulated lattice step by lattice step so each argument stays
// well inside the principal branch.
ChernResult chern_number(const CocycleBundle& e, double margin = 0.1,
                         double max_residue = 1e-6);

struct CFlatRow {
  SimplicialPath loop;
  double weight = 0.0;  // the loop's area weight |A|
  double defect = 0.0;
  double bound = 0.0;   // weight * eps
  bool pass = false;
};

struct CFlatReport {
  bool pass = true;
  double eps = 0.0;
  std::vector<CFlatRow> rows;
};

// Checks loop_defect(loop) <= |A| * eps for each weighted loop. With the
// boundaries of the faces of a surface as loops this is the c-flatness test.
CFlatReport c_flat_check(const CocycleBundle& e,
                         const std::vector<std::pair<SimplicialPath, double>>& loops,
                         double eps);

struct ProbeEntry {
  std::string label;
  double eps = 0.0;   // measured flatness audit
  int chern = 0;
  bool flat_pass = true;
};

struct KAreaProbe {
  std::vector<ProbeEntry> entries;
};

struct ProbeVerdict {
  bool witness = false;
  int depth = 0;
  int chern = 0;
  std::string detail;
};

// A sequence of ever flatter bundles with the same nonzero Chern number
// witnesses unbounded K-area: no single flat bundle can realize the class.
ProbeVerdict probe_verdict(const KAreaProbe& p);

}  // namespace flatbundle
