#include "flatbundle/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "flatbundle/matrixcore.hpp"

namespace flatbundle {

namespace {

void enumerate(int slots, int remaining, LatticeCoords& cur,
               std::vector<LatticeCoords>& out) {
  if (slots == 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur.push_back(v);
    enumerate(slots - 1, remaining - v, cur, out);
    cur.pop_back();
  }
}

// Enumerations are reused constantly; memoize per (k, m).
const std::vector<LatticeCoords>& cached_lattice(int k, int m) {
  static std::map<std::pair<int, int>, std::vector<LatticeCoords>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<LatticeCoords> pts;
  LatticeCoords cur;
  enumerate(k + 1, m, cur, pts);
  return cache.emplace(key, std::move(pts)).first->second;
}

const std::map<LatticeCoords, int>& cached_index(int k, int m) {
  static std::map<std::pair<int, int>, std::map<LatticeCoords, int>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::map<LatticeCoords, int> idx;
  const auto& pts = cached_lattice(k, m);
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) idx[pts[i]] = i;
  return cache.emplace(key, std::move(idx)).first->second;
}

bool on_boundary(const LatticeCoords& c) {
  return *std::min_element(c.begin(), c.end()) == 0;
}

}  // namespace

std::vector<LatticeCoords> lattice_points(int k, int m) { return cached_lattice(k, m); }

std::vector<LatticeCoords> boundary_lattice_points(int k, int m) {
  std::vector<LatticeCoords> out;
  for (const auto& p : cached_lattice(k, m))
    if (on_boundary(p)) out.push_back(p);
  return out;
}

double lattice_distance(const LatticeCoords& a, const LatticeCoords& b, int m) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = double(a[i] - b[i]) / m;
    s += d * d;
  }
  return std::sqrt(s);
}

int SampledUnitaryMap::rank() const {
  return values.empty() ? 0 : static_cast<int>(values.front().rows());
}

const std::vector<LatticeCoords>& SampledUnitaryMap::points() const {
  static std::map<std::tuple<int, int, bool>, std::vector<LatticeCoords>> cache;
  static std::mutex mu;
  if (!boundary_only) return cached_lattice(k, m);
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(k, m, true);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, boundary_lattice_points(k, m)).first;
  return it->second;
}

int SampledUnitaryMap::index_of(const LatticeCoords& c) const {
  if (!boundary_only) {
    const auto& idx = cached_index(k, m);
    auto it = idx.find(c);
    return it == idx.end() ? -1 : it->second;
  }
  const auto& pts = points();
  auto it = std::lower_bound(pts.begin(), pts.end(), c);
  if (it == pts.end() || *it != c) return -1;
  return static_cast<int>(it - pts.begin());
}

const CMatrix& SampledUnitaryMap::at(const LatticeCoords& c) const {
  const int i = index_of(c);
  if (i < 0) throw InputError("SampledUnitaryMap::at: not a stored lattice point");
  return values[i];
}

CMatrix& SampledUnitaryMap::at(const LatticeCoords& c) {
  const int i = index_of(c);
  if (i < 0) throw InputError("SampledUnitaryMap::at: not a stored lattice point");
  return values[i];
}

CMatrix SampledUnitaryMap::eval(const std::vector<double>& bary) const {
  if (boundary_only)
    throw InputError("SampledUnitaryMap::eval: interpolation needs a full map");
  if (static_cast<int>(bary.size()) != k + 1)
    throw InputError("SampledUnitaryMap::eval: wrong coordinate count");
  // Cumulative coordinates u_j = m * sum_{i>=j} bary_i, j = 1..k, turn the
  // barycentric lattice into the integer grid triangulated by Kuhn cells.
  std::vector<double> w(k);
  double acc = 0;
  for (int j = k; j >= 1; --j) {
    acc += bary[j];
    w[j - 1] = std::min(std::max(acc * m, 0.0), double(m));
  }
  std::vector<int> f(k);
  std::vector<double> r(k);
  bool exact = true;
  for (int j = 0; j < k; ++j) {
    f[j] = static_cast<int>(std::floor(w[j] + 1e-12));
    f[j] = std::min(f[j], m);
    r[j] = w[j] - f[j];
    if (std::abs(r[j]) > 1e-9 && std::abs(r[j] - 1.0) > 1e-9) exact = false;
  }
  auto coords_of = [&](const std::vector<int>& u) {
    LatticeCoords c(k + 1);
    c[0] = m - (k >= 1 ? u[0] : 0);
    for (int j = 1; j <= k; ++j) c[j] = u[j - 1] - (j < k ? u[j] : 0);
    return c;
  };
  if (exact) {
    std::vector<int> u(k);
    for (int j = 0; j < k; ++j) u[j] = static_cast<int>(std::lround(w[j]));
    return at(coords_of(u));
  }
  // Kuhn cell: add unit steps in order of descending fractional part,
  // ascending index on ties (keeps the cumulative coordinates descending).
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return r[a] > r[b]; });
  std::vector<double> weights;
  std::vector<std::vector<int>> verts;
  std::vector<int> u = f;
  verts.push_back(u);
  weights.push_back(1.0 - (k ? r[order[0]] : 0.0));
  for (int t = 0; t < k; ++t) {
    u[order[t]] += 1;
    verts.push_back(u);
    const double next = (t + 1 < k) ? r[order[t + 1]] : 0.0;
    weights.push_back(r[order[t]] - next);
  }
  CMatrix sum = CMatrix::Zero(rank(), rank());
  for (size_t i = 0; i < verts.size(); ++i) {
    if (weights[i] <= 1e-15) continue;
    const int idx = index_of(coords_of(verts[i]));
    if (idx < 0)
      throw InputError("SampledUnitaryMap::eval: point outside the simplex");
    sum += weights[i] * values[idx];
  }
  return polar_project(sum);
}

SampledUnitaryMap make_sampled(int k, int m,
                               const std::function<CMatrix(const LatticeCoords&)>& f) {
  SampledUnitaryMap out;
  out.k = k;
  out.m = m;
  for (const auto& p : lattice_points(k, m)) out.values.push_back(f(p));
  return out;
}

SampledUnitaryMap make_boundary_sampled(
    int k, int m, const std::function<CMatrix(const LatticeCoords&)>& f) {
  SampledUnitaryMap out;
  out.k = k;
  out.m = m;
  out.boundary_only = true;
  for (const auto& p : boundary_lattice_points(k, m)) out.values.push_back(f(p));
  return out;
}

SampledUnitaryMap constant_map(int k, int m, const CMatrix& v) {
  return make_sampled(k, m, [&](const LatticeCoords&) { return v; });
}

double lipschitz_estimate(const SampledUnitaryMap& f) {
  const auto& pts = f.points();
  double best = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const double d = lattice_distance(pts[i], pts[j], f.m);
      if (d <= 0) continue;
      best = std::max(best, op_norm(f.values[i] - f.values[j]) / d);
    }
  return best;
}

double sampled_diameter(const SampledUnitaryMap& f) {
  double best = 0;
  for (size_t i = 0; i < f.values.size(); ++i)
    for (size_t j = i + 1; j < f.values.size(); ++j)
      best = std::max(best, op_norm(f.values[i] - f.values[j]));
  return best;
}

SampledUnitaryMap restrict_map(const SampledUnitaryMap& f, const std::vector<int>& slots) {
  if (f.boundary_only) throw InputError("restrict_map: map must be full");
  for (int s : slots)
    if (s < 0 || s > f.k) throw InputError("restrict_map: slot out of range");
  SampledUnitaryMap out;
  out.k = static_cast<int>(slots.size()) - 1;
  out.m = f.m;
  for (const auto& q : lattice_points(out.k, f.m)) {
    LatticeCoords c(f.k + 1, 0);
    for (size_t i = 0; i < slots.size(); ++i) c[slots[i]] = q[i];
    out.values.push_back(f.at(c));
  }
  return out;
}

namespace {

// Radial coordinate from the barycenter: 0 at the center, 1 on the boundary.
double radial_t(const LatticeCoords& p, int k, int m) {
  const double mn = double(*std::min_element(p.begin(), p.end())) / m;
  return 1.0 - (k + 1) * mn;
}

LatticeCoords nearest_boundary_point(const std::vector<double>& x, int k, int m) {
  double best = -1;
  LatticeCoords arg;
  for (const auto& q : boundary_lattice_points(k, m)) {
    double s = 0;
    for (int i = 0; i <= k; ++i) {
      const double d = x[i] - double(q[i]) / m;
      s += d * d;
    }
    if (best < 0 || s < best - 1e-15) {
      best = s;
      arg = q;
    }
  }
  return arg;
}

}  // namespace

SampledUnitaryMap cone_extend_vector(const SampledUnitaryMap& beta0,
                                     const LatticeCoords& s0, double R) {
  if (!beta0.boundary_only)
    throw InputError("cone_extend_vector: input must be boundary-sampled");
  if (op_norm(beta0.at(s0)) > 1e-9)
    throw PreconditionError("cone_extend_vector: beta0(s0) != 0");
  for (const auto& v : beta0.values)
    if (op_norm(v) > R + 1e-12)
      throw PreconditionError("cone_extend_vector: boundary value outside the R-ball");
  const int k = beta0.k, m = beta0.m;
  SampledUnitaryMap out;
  out.k = k;
  out.m = m;
  const int n = beta0.rank();
  for (const auto& p : lattice_points(k, m)) {
    if (*std::min_element(p.begin(), p.end()) == 0) {
      out.values.push_back(beta0.at(p));
      continue;
    }
    const double t = radial_t(p, k, m);
    if (t <= 0.5) {
      out.values.push_back(CMatrix::Zero(n, n));
      continue;
    }
    // Boundary point hit by the ray from the barycenter through p.
    std::vector<double> x(k + 1);
    const double c = 1.0 / (k + 1);
    for (int i = 0; i <= k; ++i) x[i] = c + (double(p[i]) / m - c) / t;
    out.values.push_back((2 * t - 1) * beta0.at(nearest_boundary_point(x, k, m)));
  }
  return out;
}

SampledUnitaryMap unitary_extend(const SampledUnitaryMap& alpha0, double tol) {
  if (!alpha0.boundary_only)
    throw InputError("unitary_extend: input must be boundary-sampled");
  if (alpha0.k < 1) throw InputError("unitary_extend: needs a positive-dimensional simplex");
  const double diam = sampled_diameter(alpha0);
  if (diam > 0.5 + 1e-12)
    throw PreconditionError("unitary_extend: boundary diameter " + std::to_string(diam) +
                            " exceeds 1/2");
  const auto& bpts = alpha0.points();
  const CMatrix base = alpha0.values[alpha0.index_of(bpts.front())];
  // bpts is lexicographically sorted, so front() is the least boundary point.
  const CMatrix base_inv = base.adjoint();
  SampledUnitaryMap alpha1;
  alpha1.k = alpha0.k;
  alpha1.m = alpha0.m;
  alpha1.boundary_only = true;
  for (const auto& v : alpha0.values) alpha1.values.push_back(skew_project(base_inv * v));
  SampledUnitaryMap alpha2 = cone_extend_vector(alpha1, bpts.front(), 0.5);
  SampledUnitaryMap out;
  out.k = alpha0.k;
  out.m = alpha0.m;
  for (const auto& p : lattice_points(out.k, out.m)) {
    if (*std::min_element(p.begin(), p.end()) == 0)
      out.values.push_back(alpha0.at(p));  // boundary kept bit-exact
    else
      out.values.push_back(base * unitarize_g(alpha2.at(p), tol));
  }
  return out;
}

}  // namespace flatbundle
