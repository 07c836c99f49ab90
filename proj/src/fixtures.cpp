#include "flatbundle/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "flatbundle/matrixcore.hpp"

namespace flatbundle {

namespace {

using Eigen::Vector3d;

int orientation_of(const Simplex& sorted, const std::array<Vertex, 3>& oriented) {
  // Parity of the permutation taking the sorted triple to the oriented one.
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (oriented[i] > oriented[j]) ++inversions;
  (void)sorted;
  return inversions % 2 == 0 ? 1 : -1;
}

// Signed solid angle of the spherical triangle (a, b, c) seen from the
// origin (Van Oosterom-Strackee).
double solid_angle(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  if (std::abs(num) < 1e-13 && den < 1e-9)
    throw InputError("solid angle is degenerate for these directions");
  return 2.0 * std::atan2(num, den);
}

const Vector3d& reference_direction() {
  // Fixed direction chosen away from every vertex, barycenter and lattice
  // point the sphere fixtures produce.
  static const Vector3d r =
      Vector3d(0.12345678910111, 0.27182818284590, 0.94247779607694).normalized();
  return r;
}

// Step in the plane model of the seven-vertex torus: vertex labels are
// x + 2y mod 7, so label differences 1, 2, 3 correspond to the lattice
// steps (1,0), (0,1), (1,1).
std::pair<int, int> plane_step(Vertex a, Vertex b) {
  int d = ((b - a) % 7 + 7) % 7;
  switch (d) {
    case 1: return {1, 0};
    case 2: return {0, 1};
    case 3: return {1, 1};
    case 4: return {-1, -1};
    case 5: return {0, -1};
    case 6: return {-1, 0};
    default: throw InputError("plane step between equal torus vertices");
  }
}

}  // namespace

Complex torus_complex() {
  std::vector<Vertex> vertices{0, 1, 2, 3, 4, 5, 6};
  std::vector<Simplex> faces;
  std::map<Simplex, int> orientation;
  for (int i = 0; i < 7; ++i) {
    std::array<Vertex, 3> a = {i, (i + 1) % 7, (i + 3) % 7};
    std::array<Vertex, 3> b = {i, (i + 3) % 7, (i + 2) % 7};
    for (const auto& tri : {a, b}) {
      Simplex s(tri.begin(), tri.end());
      std::sort(s.begin(), s.end());
      orientation[s] = orientation_of(s, tri);
      faces.push_back(s);
    }
  }
  return build_complex(vertices, faces, orientation);
}

SphereComplex sphere_complex(int depth) {
  if (depth < 0) throw InputError("subdivision depth must be nonnegative");
  SphereComplex s;
  s.coords[0] = Vector3d(1, 0, 0);
  s.coords[1] = Vector3d(-1, 0, 0);
  s.coords[2] = Vector3d(0, 1, 0);
  s.coords[3] = Vector3d(0, -1, 0);
  s.coords[4] = Vector3d(0, 0, 1);
  s.coords[5] = Vector3d(0, 0, -1);
  std::vector<Simplex> faces;
  for (Vertex x : {0, 1})
    for (Vertex y : {2, 3})
      for (Vertex z : {4, 5}) faces.push_back(Simplex{x, y, z});

  for (int level = 0; level < depth; ++level) {
    std::set<Simplex> edges;
    for (const auto& f : faces)
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) edges.insert(Simplex{f[i], f[j]});
    std::map<Simplex, Vertex> midpoint;
    Vertex next = static_cast<Vertex>(s.coords.size());
    for (const auto& e : edges) {
      midpoint[e] = next;
      s.coords[next] = (s.coords.at(e[0]) + s.coords.at(e[1])).normalized();
      ++next;
    }
    std::vector<Simplex> refined;
    for (const auto& f : faces) {
      Vertex mab = midpoint.at(Simplex{f[0], f[1]});
      Vertex mac = midpoint.at(Simplex{f[0], f[2]});
      Vertex mbc = midpoint.at(Simplex{f[1], f[2]});
      for (Simplex child : {Simplex{f[0], mab, mac}, Simplex{f[1], mab, mbc},
                            Simplex{f[2], mac, mbc}, Simplex{mab, mac, mbc}}) {
        std::sort(child.begin(), child.end());
        refined.push_back(std::move(child));
      }
    }
    faces = std::move(refined);
  }

  std::vector<Vertex> vertices;
  for (const auto& [v, p] : s.coords) vertices.push_back(v);
  std::map<Simplex, int> orientation;
  for (const auto& f : faces) {
    double det = s.coords.at(f[0]).dot(s.coords.at(f[1]).cross(s.coords.at(f[2])));
    orientation[f] = det >= 0 ? 1 : -1;
  }
  s.complex = build_complex(vertices, faces, orientation);
  return s;
}

double spherical_area(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  auto corner = [](const Vector3d& p, const Vector3d& q, const Vector3d& r) {
    Vector3d tq = q - p * p.dot(q);
    Vector3d tr = r - p * p.dot(r);
    if (tq.norm() < 1e-14 || tr.norm() < 1e-14)
      throw InputError("degenerate spherical triangle");
    double cosv = tq.normalized().dot(tr.normalized());
    cosv = std::clamp(cosv, -1.0, 1.0);
    return std::acos(cosv);
  };
  double excess = corner(a, b, c) + corner(b, c, a) + corner(c, a, b) - M_PI;
  double det = a.dot(b.cross(c));
  return det >= 0 ? excess : -excess;
}

CocycleBundle monopole_bundle(const SphereComplex& s, int q, int lattice_depth) {
  if (std::abs(q) > 4)
    throw PreconditionError("monopole charge must satisfy |q| <= 4");
  std::string why;
  if (!is_closed_oriented_surface(s.complex, &why))
    throw InputError("monopole base is not a closed oriented surface: " + why);
  const Vector3d& r = reference_direction();

  auto position = [&](const Simplex& sigma, const LatticeCoords& c, int m) {
    Vector3d p = Vector3d::Zero();
    for (size_t i = 0; i < sigma.size(); ++i)
      p += (static_cast<double>(c[i]) / m) * s.coords.at(sigma[i]);
    return Vector3d(p.normalized());
  };
  auto barycenter = [&](const Simplex& sigma) {
    Vector3d p = Vector3d::Zero();
    for (Vertex v : sigma) p += s.coords.at(v);
    return Vector3d(p.normalized());
  };

  return bundle_from_charts(
      s.complex, 1, lattice_depth,
      [&](const Simplex& sigma, const LatticeCoords& c) {
        Vector3d x = position(sigma, c, lattice_depth);
        double phase = 0.5 * q * solid_angle(r, barycenter(sigma), x);
        CMatrix value(1, 1);
        value(0, 0) = std::exp(Complexd(0.0, phase));
        return value;
      });
}

Complexd holonomy_oracle(const Vector3d& a, const Vector3d& b, const Vector3d& c,
                         int q) {
  // Girard's angle excess, independent of the solid-angle formula the bundle
  // charts are built from.
  double area = spherical_area(a, b, c);
  return std::exp(Complexd(0.0, 0.5 * q * area));
}

CocycleBundle random_flat_bundle(const Complex& x, int rank, int depth,
                                 double target_eps, std::uint64_t seed) {
  if (rank < 1) throw InputError("rank must be positive");
  if (depth < 1) throw InputError("lattice depth must be positive");
  if (target_eps < 0) throw InputError("target flatness must be nonnegative");
  if (target_eps == 0.0)
    return bundle_from_charts(x, rank, depth,
                              [&](const Simplex&, const LatticeCoords&) {
                                return identity(rank);
                              });

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::map<Simplex, std::vector<CMatrix>> gens;
  for (const auto& sigma : x.simplices) {
    std::vector<CMatrix> slots;
    for (size_t j = 0; j < sigma.size(); ++j) {
      CMatrix b(rank, rank);
      for (int r = 0; r < rank; ++r)
        for (int c = 0; c < rank; ++c) b(r, c) = Complexd(gauss(rng), gauss(rng));
      CMatrix h = 0.5 * (b + b.adjoint());
      double n = op_norm(h);
      if (n > 1e-12) h /= n;
      slots.push_back(std::move(h));
    }
    gens[sigma] = std::move(slots);
  }

  double scale = std::min(0.5, target_eps);
  CocycleBundle out;
  double audit = 0.0;
  for (int iter = 0; iter < 25; ++iter) {
    out = bundle_from_charts(
        x, rank, depth, [&](const Simplex& sigma, const LatticeCoords& c) {
          const auto& slots = gens.at(sigma);
          CMatrix skew = CMatrix::Zero(rank, rank);
          for (size_t j = 0; j < sigma.size(); ++j)
            skew += Complexd(0.0, scale * c[j] / depth) * slots[j];
          return skew_exp(skew);
        });
    audit = flatness_audit(out).audit;
    if (audit <= target_eps) return out;
    scale *= 0.9 * target_eps / audit;
  }
  std::ostringstream msg;
  msg << "could not calibrate the random bundle to flatness " << target_eps
      << " (reached " << audit << ")";
  throw InputError(msg.str());
}

TorusSetup torus_setup() {
  TorusSetup setup;
  setup.complex = torus_complex();
  setup.tree = maximal_tree(setup.complex);
  setup.pres = presentation_from_tree(setup.complex, setup.tree);
  for (const auto& loop : setup.pres.generator_loops) {
    int px = 0, py = 0;
    for (size_t i = 0; i + 1 < loop.size(); ++i) {
      if (loop[i] == loop[i + 1]) continue;
      auto [dx, dy] = plane_step(loop[i], loop[i + 1]);
      px += dx;
      py += dy;
    }
    // Lattice of closed loops: x + 2y = 0 mod 7, basis (1,3) and (-2,1).
    if (((px + 2 * py) % 7 + 7) % 7 != 0)
      throw InputError("torus loop class leaves the period lattice");
    int a = (px + 2 * py) / 7;
    int b = (-3 * px + py) / 7;
    if (a * 1 - 2 * b != px || a * 3 + b != py)
      throw InputError("torus loop class decomposition failed");
    setup.classes.push_back({a, b});
    Word w;
    for (int i = 0; i < std::abs(a); ++i) w.push_back(a > 0 ? 1 : -1);
    for (int i = 0; i < std::abs(b); ++i) w.push_back(b > 0 ? 2 : -2);
    setup.substitution.push_back(std::move(w));
  }
  return setup;
}

AlmostRep clock_shift_torus_rep(int k) {
  TorusSetup setup = torus_setup();
  return substitute(clock_shift(k), setup.pres, setup.substitution);
}

CocycleBundle clock_shift_torus_bundle(int k, int depth) {
  TorusSetup setup = torus_setup();
  AlmostRep rep = substitute(clock_shift(k), setup.pres, setup.substitution);
  return rep_to_bundle(rep, setup.complex, setup.tree, depth);
}

}  // namespace flatbundle
