#include "flatbundle/chern.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace flatbundle {

namespace {

// Lattice points along the directed edge (a, b) of the sorted 1-simplex
// {min(a,b), max(a,b)}, from a to b inclusive, as coordinates in that edge.
std::vector<LatticeCoords> edge_walk(Vertex a, Vertex b, int m) {
  std::vector<LatticeCoords> out;
  out.reserve(m + 1);
  for (int t = 0; t <= m; ++t) {
    if (a < b)
      out.push_back({m - t, t});
    else
      out.push_back({t, m - t});
  }
  return out;
}

}  // namespace

ChernResult chern_number(const CocycleBundle& e, double margin, double max_residue) {
  std::string why;
  if (!is_closed_oriented_surface(e.base, &why))
    throw PreconditionError("chern number needs a closed oriented surface base: " + why);
  if (margin <= 0 || margin >= M_PI)
    throw InputError("branch margin must lie in (0, pi)");

  ChernResult result;
  for (const Simplex& sigma : e.base.simplices_of_dim(2)) {
    int sign = e.base.orientation.at(sigma);
    std::vector<Vertex> cycle;
    if (sign > 0)
      cycle = {sigma[0], sigma[1], sigma[2], sigma[0]};
    else
      cycle = {sigma[0], sigma[2], sigma[1], sigma[0]};

    double flux = 0.0;
    for (int leg = 0; leg < 3; ++leg) {
      Vertex a = cycle[leg];
      Vertex b = cycle[leg + 1];
      Simplex edge{std::min(a, b), std::max(a, b)};
      const SampledUnitaryMap& psi = e.psi(edge, sigma);
      std::vector<LatticeCoords> walk = edge_walk(a, b, e.depth);
      for (int t = 0; t < e.depth; ++t) {
        CMatrix hop = psi.at(walk[t + 1]).adjoint() * psi.at(walk[t]);
        double step = std::arg(hop.determinant());
        result.max_step_arg = std::max(result.max_step_arg, std::abs(step));
        if (std::abs(step) > M_PI - margin) {
          std::ostringstream msg;
          msg << "determinant winding step " << step << " on face "
              << simplex_str(sigma) << " is within " << margin
              << " of the branch cut; refine the lattice";
          throw PreconditionError(msg.str());
        }
        flux += step;
      }
    }
    result.fluxes.push_back({sigma, flux});
    result.total_flux += flux;
  }

  const double turns = result.total_flux / (2.0 * M_PI);
  result.chern = static_cast<int>(std::lround(turns));
  result.residue = std::abs(turns - result.chern);
  if (result.residue > max_residue) {
    std::ostringstream msg;
    msg << "total flux " << result.total_flux << " is " << result.residue
        << " turns away from an integer (tolerance " << max_residue << ")";
    throw PreconditionError(msg.str());
  }
  return result;
}

CFlatReport c_flat_check(const CocycleBundle& e,
                         const std::vector<std::pair<SimplicialPath, double>>& loops,
                         double eps) {
  if (eps < 0) throw InputError("eps must be nonnegative");
  CFlatReport report;
  report.eps = eps;
  for (const auto& [loop, weight] : loops) {
    if (weight < 0) throw InputError("loop weights must be nonnegative");
    CFlatRow row;
    row.loop = loop;
    row.weight = weight;
    row.defect = loop_defect(e, loop);
    row.bound = weight * eps;
    row.pass = row.defect <= row.bound + 1e-12;
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  return report;
}

ProbeVerdict probe_verdict(const KAreaProbe& p) {
  ProbeVerdict v;
  if (p.entries.empty()) {
    v.detail = "no probe entries";
    return v;
  }
  v.depth = static_cast<int>(p.entries.size());
  v.chern = p.entries.front().chern;

  bool chern_constant = v.chern != 0;
  bool eps_decreasing = true;
  bool all_flat = true;
  for (size_t i = 0; i < p.entries.size(); ++i) {
    if (p.entries[i].chern != v.chern) chern_constant = false;
    if (!p.entries[i].flat_pass) all_flat = false;
    if (i > 0 && !(p.entries[i].eps < p.entries[i - 1].eps)) eps_decreasing = false;
  }

  std::ostringstream msg;
  if (p.entries.size() < 2) {
    msg << "a single probe point is not a sequence; refine at least once";
  } else if (v.chern == 0) {
    msg << "chern number vanishes; no obstruction detected";
  } else if (!chern_constant) {
    msg << "chern number drifts across the sequence";
  } else if (!eps_decreasing) {
    msg << "flatness does not strictly improve across the sequence";
  } else if (!all_flat) {
    msg << "a c-flatness check failed";
  } else {
    v.witness = true;
    msg << "witness to depth " << v.depth << ": chern " << v.chern
        << " with flatness down to " << p.entries.back().eps;
  }
  v.detail = msg.str();
  return v;
}

}  // namespace flatbundle
