#include "flatbundle/transport.hpp"

#include <cmath>
#include <sstream>

#include "flatbundle/matrixcore.hpp"

namespace flatbundle {

CMatrix edge_transport(const CocycleBundle& e, Vertex a, Vertex b) {
  if (a == b) return identity(e.rank);
  Simplex edge{std::min(a, b), std::max(a, b)};
  if (!e.base.contains(edge))
    throw InputError("no edge {" + std::to_string(a) + "," + std::to_string(b) +
                     "}");
  CMatrix pa = e.psi_at(Simplex{a}, edge, LatticeCoords{e.depth});
  CMatrix pb = e.psi_at(Simplex{b}, edge, LatticeCoords{e.depth});
  return pb * pa.adjoint();
}

TransportResult path_transport(const CocycleBundle& e,
                               const SimplicialPath& p) {
  if (p.empty()) throw InputError("empty path");
  std::string why;
  if (!path_valid(e.base, p, &why)) throw InputError("invalid path: " + why);
  CMatrix t = identity(e.rank);
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i] == p[i + 1]) continue;
    t = edge_transport(e, p[i], p[i + 1]) * t;
  }
  return {t, p};
}

double loop_defect(const CocycleBundle& e, const SimplicialPath& loop) {
  if (loop.size() < 2 || loop.front() != loop.back())
    throw InputError("loop must be closed");
  return op_norm(path_transport(e, loop).matrix - identity(e.rank));
}

HcConstants hc_constants(int n) {
  if (n < 1) throw InputError("complexity constant needs n >= 1");
  const double c1 = 7.0 * std::sqrt(2.0);
  HcConstants h;
  h.c = std::pow(3.0, n - 1) * c1;
  h.delta = 1.0 / c1;
  for (int j = 2; j <= n; ++j) {
    double cprev = std::pow(3.0, j - 2) * c1;
    h.delta = std::min({1.0 / c1, 1.0 / cprev, h.delta});
  }
  return h;
}

std::string WitnessedBoundReport::describe() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " witness{valid=" << witness_valid
     << " n=" << complexity << "} audit=" << audit << " delta=" << delta
     << " defect=" << defect << " bound=" << bound;
  return os.str();
}

WitnessedBoundReport verify_witnessed_bound(const CocycleBundle& e,
                                            const SimplicialPath& loop,
                                            const ContractionWitness& w,
                                            double audit, double tol) {
  WitnessedBoundReport r;
  WitnessReplay replay = apply_witness(e.base, loop, w);
  r.witness_valid = replay.valid && replay.contracted;
  r.complexity = w.complexity();
  r.audit = (audit >= 0) ? audit : flatness_audit(e).audit;
  HcConstants h = hc_constants(std::max(r.complexity, 1));
  r.delta = h.delta;
  r.audit_ok = r.audit <= r.delta + tol;
  r.defect = loop_defect(e, loop);
  r.bound = h.c * r.audit;
  r.defect_within = r.defect <= r.bound + tol;
  r.pass = r.witness_valid && r.audit_ok && r.defect_within;
  return r;
}

}  // namespace flatbundle
