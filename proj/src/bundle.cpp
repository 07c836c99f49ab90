#include "flatbundle/bundle.hpp"

#include <algorithm>
#include <sstream>

#include "flatbundle/matrixcore.hpp"

namespace flatbundle {

const SampledUnitaryMap& CocycleBundle::psi(const Simplex& rho,
                                            const Simplex& sigma) const {
  auto it = transitions.find({rho, sigma});
  if (it == transitions.end())
    throw InputError("missing transition " + simplex_str(rho) + " in " +
                     simplex_str(sigma));
  return it->second;
}

CMatrix CocycleBundle::psi_at(const Simplex& rho, const Simplex& sigma,
                              const LatticeCoords& c) const {
  return psi(rho, sigma).at(c);
}

bool CocycleBundle::has_pair(const Simplex& rho, const Simplex& sigma) const {
  return transitions.count({rho, sigma}) > 0;
}

std::vector<int> face_slots(const Simplex& rho, const Simplex& sigma) {
  std::vector<int> slots;
  slots.reserve(rho.size());
  for (Vertex v : rho) {
    auto it = std::lower_bound(sigma.begin(), sigma.end(), v);
    if (it == sigma.end() || *it != v)
      throw InputError("not a face: " + simplex_str(rho) + " of " +
                       simplex_str(sigma));
    slots.push_back(static_cast<int>(it - sigma.begin()));
  }
  return slots;
}

LatticeCoords embed_coords(const Simplex& rho, const Simplex& sigma,
                           const LatticeCoords& c) {
  auto slots = face_slots(rho, sigma);
  LatticeCoords out(sigma.size(), 0);
  for (size_t i = 0; i < slots.size(); ++i) out[slots[i]] = c[i];
  return out;
}

Simplex support_face(const Simplex& sigma, const LatticeCoords& c) {
  Simplex f;
  for (size_t i = 0; i < sigma.size(); ++i)
    if (c[i] > 0) f.push_back(sigma[i]);
  return f;
}

CocycleBundle bundle_from_charts(
    const Complex& x, int rank, int depth,
    const std::function<CMatrix(const Simplex&, const LatticeCoords&)>& chart) {
  CocycleBundle e;
  e.base = x;
  e.rank = rank;
  e.depth = depth;
  for (const Simplex& sigma : x.simplices) {
    for (const Simplex& rho : faces_of(sigma)) {
      SampledUnitaryMap m = make_sampled(
          static_cast<int>(rho.size()) - 1, depth,
          [&](const LatticeCoords& c) {
            CMatrix a = chart(rho, c);
            CMatrix b = chart(sigma, embed_coords(rho, sigma, c));
            if (a.rows() != rank || b.rows() != rank)
              throw InputError("chart value has wrong rank");
            return CMatrix(a.adjoint() * b);
          });
      e.transitions.emplace(std::make_pair(rho, sigma), std::move(m));
    }
  }
  return e;
}

CocycleBundle identity_bundle(const Complex& x, int rank, int depth) {
  return bundle_from_charts(
      x, rank, depth,
      [rank](const Simplex&, const LatticeCoords&) { return identity(rank); });
}

FlatnessReport flatness_audit(const CocycleBundle& e) {
  FlatnessReport r;
  for (const auto& [key, map] : e.transitions) {
    double est = lipschitz_estimate(map);
    r.pairs.push_back({key.first, key.second, est});
    r.audit = std::max(r.audit, est);
  }
  return r;
}

CocycleReport cocycle_check(const CocycleBundle& e, double tol,
                            double tol_unitary) {
  CocycleReport rep;
  std::ostringstream shape;

  // Shape: every pair rho <= sigma present, sampled on rho's lattice at the
  // bundle depth, with square rank-sized values.
  for (const Simplex& sigma : e.base.simplices) {
    for (const Simplex& rho : faces_of(sigma)) {
      auto it = e.transitions.find({rho, sigma});
      if (it == e.transitions.end()) {
        rep.shape_complete = false;
        shape << "missing " << simplex_str(rho) << " in " << simplex_str(sigma)
              << "; ";
        continue;
      }
      const SampledUnitaryMap& m = it->second;
      if (m.k != static_cast<int>(rho.size()) - 1 || m.m != e.depth ||
          m.boundary_only || m.rank() != e.rank) {
        rep.shape_complete = false;
        shape << "bad shape for " << simplex_str(rho) << " in "
              << simplex_str(sigma) << "; ";
      }
    }
  }
  for (const auto& [key, map] : e.transitions) {
    if (!e.base.contains(key.first) || !e.base.contains(key.second) ||
        face_slots(key.first, key.second).size() != key.first.size()) {
      rep.shape_complete = false;
      shape << "stray pair " << simplex_str(key.first) << " in "
            << simplex_str(key.second) << "; ";
    }
    for (const CMatrix& v : map.values)
      rep.max_unitarity_defect =
          std::max(rep.max_unitarity_defect, unitarity_defect(v));
  }
  rep.shape_detail = shape.str();
  if (!rep.shape_complete) {
    rep.pass = false;
    return rep;
  }

  auto note = [&](const Simplex& tau, const Simplex& rho, const Simplex& sigma,
                  const LatticeCoords& at, double res) {
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.first_violation = CocycleViolation{tau, rho, sigma, at, res};
    }
  };

  for (const Simplex& sigma : e.base.simplices) {
    // Identity on the diagonal.
    const SampledUnitaryMap& diag = e.psi(sigma, sigma);
    for (size_t i = 0; i < diag.values.size(); ++i) {
      double res = op_norm(diag.values[i] - identity(e.rank));
      note(sigma, sigma, sigma, diag.points()[i], res);
    }
    // Coherence over chains tau < rho < sigma at tau-lattice points.
    auto fs = faces_of(sigma);
    for (const Simplex& rho : fs) {
      if (rho.size() == sigma.size()) continue;
      for (const Simplex& tau : faces_of(rho)) {
        if (tau.size() == rho.size()) continue;
        const SampledUnitaryMap& ts = e.psi(tau, sigma);
        const SampledUnitaryMap& tr = e.psi(tau, rho);
        const SampledUnitaryMap& rs = e.psi(rho, sigma);
        for (const LatticeCoords& c : ts.points()) {
          LatticeCoords in_rho = embed_coords(tau, rho, c);
          double res = op_norm(ts.at(c) - tr.at(c) * rs.at(in_rho));
          note(tau, rho, sigma, c, res);
        }
      }
    }
  }

  rep.pass = rep.max_residual <= tol && rep.max_unitarity_defect <= tol_unitary;
  if (!rep.first_violation || rep.max_residual <= tol)
    rep.first_violation.reset();
  return rep;
}

CocycleBundle pullback(const CocycleBundle& e, const Complex& x,
                       const std::map<Vertex, Vertex>& vertex_map) {
  auto image = [&](const Simplex& s) {
    Simplex out;
    for (Vertex v : s) {
      auto it = vertex_map.find(v);
      if (it == vertex_map.end())
        throw InputError("vertex map misses vertex " + std::to_string(v));
      out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  for (const Simplex& s : x.simplices)
    if (!e.base.contains(image(s)))
      throw InputError("map is not simplicial: image of " + simplex_str(s) +
                       " is not a simplex of the target");

  CocycleBundle out;
  out.base = x;
  out.rank = e.rank;
  out.depth = e.depth;
  for (const Simplex& sigma : x.simplices) {
    Simplex fsigma = image(sigma);
    // Pushforward on coordinates: each slot of sigma adds its mass to the
    // slot of its image vertex.
    std::vector<int> dest(sigma.size());
    for (size_t i = 0; i < sigma.size(); ++i) {
      Vertex w = vertex_map.at(sigma[i]);
      dest[i] = static_cast<int>(
          std::lower_bound(fsigma.begin(), fsigma.end(), w) - fsigma.begin());
    }
    for (const Simplex& rho : faces_of(sigma)) {
      auto slots = face_slots(rho, sigma);
      Simplex frho = image(rho);
      auto fslots = face_slots(frho, fsigma);
      SampledUnitaryMap m = make_sampled(
          static_cast<int>(rho.size()) - 1, e.depth,
          [&](const LatticeCoords& c) {
            LatticeCoords fc(fsigma.size(), 0);
            for (size_t i = 0; i < c.size(); ++i) fc[dest[slots[i]]] += c[i];
            LatticeCoords in_frho(frho.size());
            for (size_t i = 0; i < frho.size(); ++i) in_frho[i] = fc[fslots[i]];
            return e.psi_at(frho, fsigma, in_frho);
          });
      out.transitions.emplace(std::make_pair(rho, sigma), std::move(m));
    }
  }
  return out;
}

CocycleBundle bundle_restrict(const CocycleBundle& e, const Complex& sub) {
  CocycleBundle out;
  out.base = sub;
  out.rank = e.rank;
  out.depth = e.depth;
  for (const Simplex& sigma : sub.simplices)
    for (const Simplex& rho : faces_of(sigma))
      out.transitions.emplace(std::make_pair(rho, sigma), e.psi(rho, sigma));
  return out;
}

CocycleBundle direct_sum(const CocycleBundle& a, const CocycleBundle& b) {
  if (a.base.simplices != b.base.simplices || a.depth != b.depth)
    throw InputError("direct sum needs matching base complex and depth");
  CocycleBundle out;
  out.base = a.base;
  out.rank = a.rank + b.rank;
  out.depth = a.depth;
  for (const auto& [key, ma] : a.transitions) {
    const SampledUnitaryMap& mb = b.psi(key.first, key.second);
    SampledUnitaryMap m = ma;
    for (size_t i = 0; i < m.values.size(); ++i) {
      CMatrix blk = CMatrix::Zero(out.rank, out.rank);
      blk.topLeftCorner(a.rank, a.rank) = ma.values[i];
      blk.bottomRightCorner(b.rank, b.rank) = mb.values[i];
      m.values[i] = blk;
    }
    out.transitions.emplace(key, std::move(m));
  }
  return out;
}

CocycleBundle to_subdivision(const CocycleBundle& e, const Subdivision& sd) {
  CocycleBundle out;
  out.base = sd.complex;
  out.rank = e.rank;
  out.depth = e.depth;
  // Barycentric coordinates of the chain vertex sd-id over the vertices of
  // the carrier simplex `amb` (uniform on the chain element).
  auto bary_of = [&](Vertex sd_id, const Simplex& amb) {
    const Simplex& elem = sd.vertex_simplex.at(sd_id);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<int>(amb.size()));
    auto slots = face_slots(elem, amb);
    for (int s : slots) w[s] = 1.0 / static_cast<double>(elem.size());
    return w;
  };
  for (const Simplex& sigma : out.base.simplices) {
    // Chains are nested, so the carrier of a chain is its top element.
    Simplex carrier_sigma = sd.vertex_simplex.at(sigma.back());
    for (const Simplex& rho : faces_of(sigma)) {
      Simplex carrier_rho = sd.vertex_simplex.at(rho.back());
      const SampledUnitaryMap& src = e.psi(carrier_rho, carrier_sigma);
      std::vector<Eigen::VectorXd> corner;
      for (Vertex v : rho) corner.push_back(bary_of(v, carrier_rho));
      SampledUnitaryMap m = make_sampled(
          static_cast<int>(rho.size()) - 1, e.depth,
          [&](const LatticeCoords& c) {
            Eigen::VectorXd bc =
                Eigen::VectorXd::Zero(static_cast<int>(carrier_rho.size()));
            for (size_t i = 0; i < c.size(); ++i)
              bc += (static_cast<double>(c[i]) / e.depth) * corner[i];
            std::vector<double> bary(bc.data(), bc.data() + bc.size());
            return src.eval(bary);
          });
      out.transitions.emplace(std::make_pair(rho, sigma), std::move(m));
    }
  }
  return out;
}

const SampledUnitaryMap& GlobalTrivialization::chart(const Simplex& s) const {
  auto it = charts.find(s);
  if (it == charts.end()) throw InputError("missing trivialization chart");
  return it->second;
}

double trivialization_residual(const CocycleBundle& e,
                               const GlobalTrivialization& t) {
  double worst = 0;
  for (const auto& [key, psi] : e.transitions) {
    const auto& [rho, sigma] = key;
    const SampledUnitaryMap& crho = t.chart(rho);
    const SampledUnitaryMap& csig = t.chart(sigma);
    for (const LatticeCoords& c : psi.points()) {
      LatticeCoords up = embed_coords(rho, sigma, c);
      worst = std::max(worst,
                       op_norm(crho.at(c) - psi.at(c) * csig.at(up)));
    }
  }
  return worst;
}

}  // namespace flatbundle
