#include "flatbundle/trivialize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "flatbundle/matrixcore.hpp"

namespace flatbundle {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Compresses coordinates on sigma to the support face f (slots ascending).
LatticeCoords compress_coords(const Simplex& f, const Simplex& sigma,
                              const LatticeCoords& c) {
  auto slots = face_slots(f, sigma);
  LatticeCoords cf(slots.size());
  for (size_t i = 0; i < slots.size(); ++i) cf[i] = c[slots[i]];
  return cf;
}

// Chart construction: vertex charts are tree transports from the root, each
// higher chart's boundary is forced by its support-face chart and the
// interior is filled by unitary_extend, in dimension-major simplex order.
GlobalTrivialization build_charts(const CocycleBundle& e, const Tree& tree) {
  GlobalTrivialization g;
  g.rank = e.rank;
  g.depth = e.depth;

  std::map<Vertex, CMatrix> t;
  t[tree.root] = identity(e.rank);
  std::vector<Vertex> pending;
  for (Vertex v : e.base.vertices)
    if (v != tree.root) pending.push_back(v);
  while (!pending.empty()) {
    std::vector<Vertex> next;
    bool progress = false;
    for (Vertex v : pending) {
      auto pit = tree.parent.find(v);
      if (pit == tree.parent.end())
        throw PreconditionError("tree does not span the base complex");
      auto done = t.find(pit->second);
      if (done == t.end()) {
        next.push_back(v);
        continue;
      }
      t[v] = edge_transport(e, pit->second, v) * done->second;
      progress = true;
    }
    if (!progress) throw PreconditionError("tree parent chain is broken");
    pending = std::move(next);
  }
  for (Vertex v : e.base.vertices)
    g.charts.emplace(Simplex{v}, constant_map(0, e.depth, t.at(v)));

  for (const Simplex& rho : e.base.simplices) {
    int k = static_cast<int>(rho.size()) - 1;
    if (k == 0) continue;
    SampledUnitaryMap boundary = make_boundary_sampled(
        k, e.depth, [&](const LatticeCoords& c) {
          Simplex f = support_face(rho, c);
          LatticeCoords cf = compress_coords(f, rho, c);
          return CMatrix(e.psi(f, rho).at(cf).adjoint() *
                         g.charts.at(f).at(cf));
        });
    try {
      g.charts.emplace(rho, unitary_extend(boundary));
    } catch (const PreconditionError& err) {
      throw PreconditionError(std::string(err.what()) +
                              " while extending the chart over " +
                              simplex_str(rho));
    }
  }
  for (const auto& [s, m] : g.charts)
    g.chart_audit = std::max(g.chart_audit, lipschitz_estimate(m));
  return g;
}

void validate_certificate(const CocycleBundle& e, const Tree& tree,
                          const LoopCertificate& cert) {
  std::string why;
  if (!path_valid(e.base, cert.loop, &why))
    throw PreconditionError("certificate loop for edge " +
                            simplex_str(cert.edge) + " invalid: " + why);
  if (cert.loop.size() < 2 || cert.loop.front() != cert.loop.back())
    throw PreconditionError("certificate loop for edge " +
                            simplex_str(cert.edge) + " is not closed");
  int crossings = 0;
  for (size_t i = 0; i + 1 < cert.loop.size(); ++i) {
    Vertex a = cert.loop[i], b = cert.loop[i + 1];
    if (a == b) continue;
    Simplex s{std::min(a, b), std::max(a, b)};
    if (s == cert.edge)
      ++crossings;
    else if (!tree.has_edge(a, b))
      throw PreconditionError("certificate loop for edge " +
                              simplex_str(cert.edge) +
                              " leaves the tree on edge " + simplex_str(s));
  }
  if (crossings != 1)
    throw PreconditionError("certificate loop must cross its edge exactly "
                            "once; got " +
                            std::to_string(crossings) + " crossings of " +
                            simplex_str(cert.edge));
}

}  // namespace

TrivializationResult trivialize(const CocycleBundle& e, const Tree& tree,
                                const std::vector<LoopCertificate>& certs,
                                const TrivializeOptions& opts) {
  TrivializationResult out;
  out.tree = tree;
  out.certificates = certs;
  out.audit = flatness_audit(e).audit;
  double max_audit =
      opts.max_audit >= 0 ? opts.max_audit : hc_constants(1).delta;
  if (out.audit > max_audit + opts.tol)
    throw PreconditionError("flatness audit " + fmt(out.audit) +
                            " exceeds the trivialization threshold " +
                            fmt(max_audit));
  if (!tree.spans_all)
    throw PreconditionError("base complex is disconnected");
  double max_defect = opts.max_defect >= 0 ? opts.max_defect : out.audit;

  std::map<Simplex, const LoopCertificate*> by_edge;
  for (const auto& c : certs) by_edge[c.edge] = &c;

  for (const Simplex& edge : e.base.simplices_of_dim(1)) {
    if (tree.edges.count(edge)) continue;
    auto it = by_edge.find(edge);
    if (it == by_edge.end())
      throw PreconditionError("missing certificate for non-tree edge " +
                              simplex_str(edge));
    const LoopCertificate& cert = *it->second;
    validate_certificate(e, tree, cert);
    double d = loop_defect(e, cert.loop);
    if (std::abs(d - cert.defect) > 1e-7)
      throw PreconditionError("certificate defect for edge " +
                              simplex_str(edge) + " is stale: stored " +
                              fmt(cert.defect) + ", measured " + fmt(d));
    if (cert.witness) {
      WitnessedBoundReport rep =
          verify_witnessed_bound(e, cert.loop, *cert.witness, out.audit,
                                 opts.tol);
      if (!rep.pass)
        throw PreconditionError("witness verification failed for edge " +
                                simplex_str(edge) + ": " + rep.describe());
    } else if (d > max_defect + opts.tol) {
      throw PreconditionError("certificate defect " + fmt(d) + " for edge " +
                              simplex_str(edge) + " exceeds the limit " +
                              fmt(max_defect));
    }
  }

  out.triv = build_charts(e, tree);
  out.residual = trivialization_residual(e, out.triv);
  return out;
}

TrivializationResult trivialize_contractible(const CocycleBundle& e,
                                             const TrivializeOptions& opts) {
  Tree tree = maximal_tree(e.base);
  if (!tree.spans_all)
    throw PreconditionError("base complex is disconnected");
  double audit = flatness_audit(e).audit;
  Presentation pres = presentation_from_tree(e.base, tree);
  std::vector<LoopCertificate> certs;
  for (size_t i = 0; i < pres.generators.size(); ++i) {
    LoopCertificate cert;
    cert.edge = pres.generator_edges[i];
    cert.loop = pres.generator_loops[i];
    std::optional<ContractionWitness> w =
        find_contraction(e.base, cert.loop);
    if (!w)
      throw PreconditionError(
          "no contraction witness found for the loop through " +
          simplex_str(cert.edge) + "; the base may not be simply connected");
    WitnessedBoundReport rep =
        verify_witnessed_bound(e, cert.loop, *w, audit, opts.tol);
    if (!rep.witness_valid)
      throw PreconditionError("contraction witness failed to replay for " +
                              simplex_str(cert.edge));
    if (!rep.audit_ok)
      throw PreconditionError(
          "flatness audit " + fmt(rep.audit) + " exceeds delta(" +
          std::to_string(rep.complexity) + ") = " + fmt(rep.delta) +
          " required to certify the loop through " + simplex_str(cert.edge));
    if (!rep.defect_within)
      throw PreconditionError(
          "loop defect " + fmt(rep.defect) + " through " +
          simplex_str(cert.edge) + " exceeds the witnessed bound " +
          fmt(rep.bound));
    cert.defect = rep.defect;
    cert.witness = std::move(*w);
    cert.bound = rep;
    certs.push_back(std::move(cert));
  }
  TrivializeOptions inner = opts;
  // Witnessed verification already gates the defects; the remaining hard
  // requirement is extension feasibility (sampled diameter <= 1/2).
  if (inner.max_defect < 0) inner.max_defect = 0.5;
  return trivialize(e, tree, certs, inner);
}

namespace {

// Fills one 2-simplex over existing edge data in `out`.
void attach_face(CocycleBundle& out, const Simplex& rho,
                 const ExtendOptions& opts) {
  const double pi = 3.14159265358979323846;
  Vertex v0 = rho[0], v1 = rho[1], v2 = rho[2];
  CMatrix m0 = edge_transport(out, v0, v1);
  CMatrix m1 = edge_transport(out, v1, v2);
  CMatrix m2 = edge_transport(out, v2, v0);
  CMatrix t = m2 * m1 * m0;
  double defect = op_norm(t - identity(out.rank));
  if (opts.max_defect >= 0 && defect > opts.max_defect)
    throw PreconditionError("boundary defect " + fmt(defect) + " exceeds " +
                            fmt(opts.max_defect) + " on 2-simplex " +
                            simplex_str(rho));
  double arg = max_eig_arg(t);
  if (arg > pi - opts.log_margin)
    throw PreconditionError(
        "boundary transport on 2-simplex " + simplex_str(rho) +
        " has an eigenvalue argument " + fmt(arg) +
        " inside the branch margin (defect " + fmt(defect) + ")");
  // Balance the boundary: all three edge stretches become the principal cube
  // root of the inverse boundary transport.
  CMatrix w = skew_exp(CMatrix(unitary_log(t, opts.log_margin) * (-1.0 / 3.0)));
  std::map<Vertex, CMatrix> corner;
  corner[v0] = identity(out.rank);
  corner[v1] = m0 * w;
  corner[v2] = m1 * m0 * w * w;
  for (Vertex v : rho)
    out.transitions.emplace(std::make_pair(Simplex{v}, rho),
                            constant_map(0, out.depth, corner.at(v)));
  for (const Simplex& edge : faces_of(rho)) {
    if (edge.size() != 2) continue;
    Vertex a = edge[0], b = edge[1];
    CMatrix va =
        out.psi(Simplex{a}, edge).at({out.depth}).adjoint() * corner.at(a);
    CMatrix vb =
        out.psi(Simplex{b}, edge).at({out.depth}).adjoint() * corner.at(b);
    CMatrix ls = unitary_log(CMatrix(va.adjoint() * vb), opts.log_margin);
    SampledUnitaryMap em =
        make_sampled(1, out.depth, [&](const LatticeCoords& c) {
          double s = static_cast<double>(c[1]) / out.depth;
          return CMatrix(va * skew_exp(CMatrix(s * ls)));
        });
    out.transitions.emplace(std::make_pair(edge, rho), std::move(em));
  }
  out.transitions.emplace(std::make_pair(rho, rho),
                          constant_map(2, out.depth, identity(out.rank)));
}

// Fills one cell of dimension >= 3 over existing lower data in `out`:
// trivializes the boundary minus the facet opposite the least vertex (a cone,
// hence contractible), extends across that facet, installs the charts as the
// new transitions.
void attach_cell(CocycleBundle& out, const Simplex& rho,
                 const ExtendOptions& opts) {
  Simplex tau_hat(rho.begin() + 1, rho.end());
  Complex d;
  d.vertices = rho;
  for (const Simplex& f : faces_of(rho))
    if (f.size() < rho.size() && f != tau_hat) d.simplices.push_back(f);
  TrivializationResult tr =
      trivialize_contractible(bundle_restrict(out, d), opts.inner);
  int k = static_cast<int>(tau_hat.size()) - 1;
  SampledUnitaryMap boundary = make_boundary_sampled(
      k, out.depth, [&](const LatticeCoords& c) {
        Simplex f = support_face(tau_hat, c);
        LatticeCoords cf = compress_coords(f, tau_hat, c);
        return CMatrix(out.psi(f, tau_hat).at(cf).adjoint() *
                       tr.triv.charts.at(f).at(cf));
      });
  SampledUnitaryMap chat;
  try {
    chat = unitary_extend(boundary);
  } catch (const PreconditionError& err) {
    throw PreconditionError(std::string(err.what()) +
                            " while extending over the last facet of " +
                            simplex_str(rho));
  }
  for (const Simplex& f : faces_of(rho)) {
    if (f.size() == rho.size()) continue;
    out.transitions.emplace(std::make_pair(f, rho),
                            f == tau_hat ? chat : tr.triv.charts.at(f));
  }
  out.transitions.emplace(
      std::make_pair(rho, rho),
      constant_map(static_cast<int>(rho.size()) - 1, out.depth,
                   identity(out.rank)));
}

}  // namespace

CocycleBundle extend_skeleton_1to2(const CocycleBundle& e, const Complex& x,
                                   const ExtendOptions& opts) {
  Complex x1 = skeleton(x, 1);
  if (e.base.simplices != x1.simplices)
    throw InputError("bundle base must be the 1-skeleton of the target");
  CocycleBundle out;
  out.base = skeleton(x, 2);
  out.rank = e.rank;
  out.depth = e.depth;
  out.transitions = e.transitions;
  for (const Simplex& rho : out.base.simplices_of_dim(2))
    attach_face(out, rho, opts);
  return out;
}

CocycleBundle extend_skeleton(const CocycleBundle& e, const Complex& x,
                              const ExtendOptions& opts) {
  int k = e.base.dim();
  if (k < 0) throw InputError("empty base complex");
  Complex xk = skeleton(x, k);
  if (e.base.simplices != xk.simplices)
    throw InputError("bundle base must be the " + std::to_string(k) +
                     "-skeleton of the target");
  if (k == 1) return extend_skeleton_1to2(e, x, opts);
  CocycleBundle out;
  out.base = skeleton(x, k + 1);
  out.rank = e.rank;
  out.depth = e.depth;
  out.transitions = e.transitions;
  if (k == 0) {
    for (const Simplex& edge : out.base.simplices_of_dim(1)) {
      for (Vertex v : edge)
        out.transitions.emplace(std::make_pair(Simplex{v}, edge),
                                constant_map(0, e.depth, identity(e.rank)));
      out.transitions.emplace(std::make_pair(edge, edge),
                              constant_map(1, e.depth, identity(e.rank)));
    }
    return out;
  }
  for (const Simplex& rho : out.base.simplices_of_dim(k + 1))
    attach_cell(out, rho, opts);
  return out;
}

CocycleBundle extend_subcomplex(const CocycleBundle& e, const Complex& xprime,
                                const std::vector<EdgeExtensionHint>& hints,
                                const ExtendOptions& opts) {
  for (const Simplex& s : e.base.simplices)
    if (!xprime.contains(s))
      throw InputError("target complex is missing the base simplex " +
                       simplex_str(s));
  CocycleBundle out;
  out.base = xprime;
  out.rank = e.rank;
  out.depth = e.depth;
  out.transitions = e.transitions;

  std::set<Simplex, SimplexLess> old(e.base.simplices.begin(),
                                     e.base.simplices.end());
  auto old_vertex = [&](Vertex v) { return old.count(Simplex{v}) > 0; };

  std::map<Simplex, const EdgeExtensionHint*> hint_by_edge;
  for (const auto& h : hints) {
    Simplex key = h.edge;
    std::sort(key.begin(), key.end());
    hint_by_edge[key] = &h;
  }

  for (Vertex v : xprime.vertices)
    if (!old_vertex(v))
      out.transitions.emplace(std::make_pair(Simplex{v}, Simplex{v}),
                              constant_map(0, e.depth, identity(e.rank)));

  for (const Simplex& edge : xprime.simplices_of_dim(1)) {
    if (old.count(edge)) continue;
    CMatrix t = identity(e.rank);
    if (old_vertex(edge[0]) && old_vertex(edge[1])) {
      auto it = hint_by_edge.find(edge);
      if (it == hint_by_edge.end())
        throw PreconditionError("missing path hint for new edge " +
                                simplex_str(edge));
      SimplicialPath p = it->second->path;
      std::string why;
      if (p.empty() || !path_valid(e.base, p, &why))
        throw InputError("hint path for edge " + simplex_str(edge) +
                         " invalid in the old complex: " + why);
      if (p.front() == edge[1] && p.back() == edge[0])
        std::reverse(p.begin(), p.end());
      if (p.front() != edge[0] || p.back() != edge[1])
        throw InputError("hint path endpoints do not match edge " +
                         simplex_str(edge));
      t = path_transport(e, p).matrix;
      if (it->second->witness) {
        SimplicialPath loop = p;
        loop.push_back(edge[0]);
        WitnessReplay rep = apply_witness(xprime, loop, *it->second->witness);
        if (!(rep.valid && rep.contracted))
          throw PreconditionError("nullhomotopy witness for new edge " +
                                  simplex_str(edge) + " failed to replay");
      } else {
        throw PreconditionError("missing nullhomotopy witness for new edge " +
                                simplex_str(edge));
      }
    }
    out.transitions.emplace(std::make_pair(Simplex{edge[0]}, edge),
                            constant_map(0, e.depth, identity(e.rank)));
    out.transitions.emplace(std::make_pair(Simplex{edge[1]}, edge),
                            constant_map(0, e.depth, t));
    out.transitions.emplace(std::make_pair(edge, edge),
                            constant_map(1, e.depth, identity(e.rank)));
  }

  for (const Simplex& rho : xprime.simplices_of_dim(2)) {
    if (old.count(rho)) continue;
    attach_face(out, rho, opts);
  }
  for (int dd = 3; dd <= xprime.dim(); ++dd)
    for (const Simplex& rho : xprime.simplices_of_dim(dd)) {
      if (old.count(rho)) continue;
      attach_cell(out, rho, opts);
    }
  return out;
}

BundleIso iso_between(const CocycleBundle& e, const CocycleBundle& f,
                      double eps) {
  if (e.base.simplices != f.base.simplices)
    throw InputError("bundle bases differ");
  if (e.rank != f.rank) throw InputError("bundle ranks differ");
  if (e.depth != f.depth) throw InputError("bundle depths differ");
  if (!(eps > 0) || eps > 0.5)
    throw InputError("matching tolerance must lie in (0, 1/2]");

  BundleIso iso;
  iso.rank = e.rank;
  iso.depth = e.depth;
  for (const Simplex& edge : e.base.simplices_of_dim(1)) {
    double gap = op_norm(edge_transport(e, edge[0], edge[1]) -
                         edge_transport(f, edge[0], edge[1]));
    iso.edge_gap = std::max(iso.edge_gap, gap);
    if (gap >= eps)
      throw PreconditionError("edge transports differ by " + fmt(gap) +
                              " >= " + fmt(eps) + " on edge " +
                              simplex_str(edge));
  }
  for (const Simplex& rho : e.base.simplices) {
    int k = static_cast<int>(rho.size()) - 1;
    if (k == 0) {
      iso.conjugators.emplace(rho, constant_map(0, e.depth, identity(e.rank)));
      continue;
    }
    SampledUnitaryMap boundary = make_boundary_sampled(
        k, e.depth, [&](const LatticeCoords& c) {
          Simplex f0 = support_face(rho, c);
          LatticeCoords cf = compress_coords(f0, rho, c);
          return CMatrix(f.psi(f0, rho).at(cf).adjoint() *
                         iso.conjugators.at(f0).at(cf) *
                         e.psi(f0, rho).at(cf));
        });
    try {
      iso.conjugators.emplace(rho, unitary_extend(boundary));
    } catch (const PreconditionError& err) {
      throw PreconditionError(std::string(err.what()) +
                              " while extending the conjugator over " +
                              simplex_str(rho) +
                              " (the bundles may not be isomorphic)");
    }
  }
  for (const auto& [key, psi] : e.transitions) {
    const auto& [tau, sigma] = key;
    const SampledUnitaryMap& psi2 = f.psi(tau, sigma);
    const SampledUnitaryMap& xt = iso.conjugators.at(tau);
    const SampledUnitaryMap& xs = iso.conjugators.at(sigma);
    for (const LatticeCoords& c : psi.points()) {
      LatticeCoords up = embed_coords(tau, sigma, c);
      iso.max_residual = std::max(
          iso.max_residual,
          op_norm(psi2.at(c) - xt.at(c) * psi.at(c) * xs.at(up).adjoint()));
    }
  }
  return iso;
}

namespace {

// Chain cell of the barycentric subdivision containing the point with
// barycentric coordinates d over rho's vertices. Returns the chain simplex
// (subdivision vertex ids, ascending) and the aligned barycentric weights.
std::pair<Simplex, std::vector<double>> locate_chain(
    const Subdivision& sd, const Simplex& rho, const std::vector<double>& d) {
  std::vector<int> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (d[a] != d[b]) return d[a] > d[b];
    return a < b;
  });
  Simplex chain;
  std::vector<double> lam;
  Simplex prefix;
  for (size_t j = 0; j < idx.size(); ++j) {
    prefix.push_back(rho[idx[j]]);
    double next = (j + 1 < idx.size()) ? d[idx[j + 1]] : 0.0;
    double weight = static_cast<double>(j + 1) * (d[idx[j]] - next);
    if (weight <= 1e-15) continue;
    Simplex key = prefix;
    std::sort(key.begin(), key.end());
    chain.push_back(sd.simplex_vertex.at(key));
    lam.push_back(weight);
  }
  return {chain, lam};
}

}  // namespace

CocycleBundle from_subdivision(const CocycleBundle& e_sub, const Complex& x,
                               const Subdivision& sd) {
  if (e_sub.base.simplices != sd.complex.simplices)
    throw InputError("bundle base does not match the subdivision complex");

  // Trivialization of S(closed rho) per simplex, gauged so the chart at the
  // barycenter of rho is the identity.
  std::map<Simplex, GlobalTrivialization> triv;
  for (const Simplex& rho : x.simplices) {
    Complex d;
    for (const Simplex& chain : sd.complex.simplices) {
      bool inside = true;
      for (Vertex v : chain) {
        const Simplex& elem = sd.vertex_simplex.at(v);
        if (!std::includes(rho.begin(), rho.end(), elem.begin(), elem.end())) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      if (chain.size() == 1) d.vertices.push_back(chain[0]);
      d.simplices.push_back(chain);
    }
    TrivializationResult tr;
    try {
      tr = trivialize_contractible(bundle_restrict(e_sub, d));
    } catch (const PreconditionError& err) {
      throw PreconditionError(std::string(err.what()) +
                              " while trivializing the subdivision of " +
                              simplex_str(rho));
    }
    CMatrix v =
        tr.triv.chart(Simplex{sd.simplex_vertex.at(rho)}).values.at(0);
    for (auto& [s, chart] : tr.triv.charts)
      for (CMatrix& val : chart.values) val = val * v.adjoint();
    triv.emplace(rho, std::move(tr.triv));
  }

  CocycleBundle out;
  out.base = x;
  out.rank = e_sub.rank;
  out.depth = e_sub.depth;
  for (const Simplex& sigma : x.simplices) {
    const GlobalTrivialization& tb = triv.at(sigma);
    for (const Simplex& rho : faces_of(sigma)) {
      const GlobalTrivialization& ta = triv.at(rho);
      SampledUnitaryMap m = make_sampled(
          static_cast<int>(rho.size()) - 1, e_sub.depth,
          [&](const LatticeCoords& c) {
            std::vector<double> dc(c.size());
            for (size_t i = 0; i < c.size(); ++i)
              dc[i] = static_cast<double>(c[i]) / e_sub.depth;
            auto [chain, lam] = locate_chain(sd, rho, dc);
            CMatrix a = ta.chart(chain).eval(lam);
            CMatrix b = tb.chart(chain).eval(lam);
            return CMatrix(a.adjoint() * b);
          });
      out.transitions.emplace(std::make_pair(rho, sigma), std::move(m));
    }
  }
  return out;
}

}  // namespace flatbundle
