#include "flatbundle/simplicial.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace flatbundle {

namespace {

void all_proper_subsets(const Simplex& s, std::vector<Simplex>& out) {
  const int n = static_cast<int>(s.size());
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    Simplex sub;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) sub.push_back(s[i]);
    out.push_back(std::move(sub));
  }
}

}  // namespace

bool Complex::contains(const Simplex& s) const {
  return std::binary_search(simplices.begin(), simplices.end(), s, SimplexLess{});
}

int Complex::dim() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max<int>(d, static_cast<int>(s.size()) - 1);
  return d;
}

std::vector<Simplex> Complex::simplices_of_dim(int k) const {
  std::vector<Simplex> out;
  for (const auto& s : simplices)
    if (static_cast<int>(s.size()) == k + 1) out.push_back(s);
  return out;
}

std::vector<Vertex> Complex::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  for (const auto& s : simplices) {
    if (s.size() != 2) continue;
    if (s[0] == v) out.push_back(s[1]);
    else if (s[1] == v) out.push_back(s[0]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Complex::euler_characteristic() const {
  int chi = 0;
  for (const auto& s : simplices) chi += (s.size() % 2 == 1) ? 1 : -1;
  return chi;
}

Complex build_complex(const std::vector<Vertex>& vertices,
                      const std::vector<Simplex>& faces,
                      const std::map<Simplex, int>& orientation) {
  Complex x;
  x.vertices = vertices;
  std::sort(x.vertices.begin(), x.vertices.end());
  x.vertices.erase(std::unique(x.vertices.begin(), x.vertices.end()), x.vertices.end());
  std::set<Vertex> vset(x.vertices.begin(), x.vertices.end());

  std::set<Simplex, SimplexLess> closed;
  for (Vertex v : x.vertices) closed.insert({v});
  for (const auto& f : faces) {
    if (f.empty()) throw InputError("build_complex: empty face");
    Simplex s = f;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw InputError("build_complex: repeated vertex in face " + simplex_str(f));
    for (Vertex v : s)
      if (!vset.count(v))
        throw InputError("build_complex: unknown vertex id " + std::to_string(v));
    closed.insert(s);
    std::vector<Simplex> subs;
    all_proper_subsets(s, subs);
    for (auto& sub : subs) closed.insert(std::move(sub));
  }
  x.simplices.assign(closed.begin(), closed.end());

  for (const auto& [key, sign] : orientation) {
    Simplex s = key;
    std::sort(s.begin(), s.end());
    if (!x.contains(s) || s.size() != 3)
      throw InputError("build_complex: orientation key " + simplex_str(key) +
                       " is not a 2-simplex of the complex");
    if (sign != 1 && sign != -1)
      throw InputError("build_complex: orientation sign must be +1 or -1");
    x.orientation[s] = sign;
  }
  return x;
}

Complex skeleton(const Complex& x, int k) {
  Complex out;
  out.vertices = x.vertices;
  for (const auto& s : x.simplices)
    if (static_cast<int>(s.size()) <= k + 1) out.simplices.push_back(s);
  if (k >= 2) {
    for (const auto& [s, sign] : x.orientation) out.orientation.emplace(s, sign);
  }
  return out;
}

std::string simplex_str(const Simplex& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  out += "}";
  return out;
}

std::vector<Simplex> faces_of(const Simplex& s) {
  std::vector<Simplex> out;
  int n = static_cast<int>(s.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Simplex f;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) f.push_back(s[i]);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), SimplexLess{});
  return out;
}

bool is_closed_oriented_surface(const Complex& x, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  auto faces = x.simplices_of_dim(2);
  if (faces.empty()) return fail("no 2-simplices");
  if (x.dim() != 2) return fail("dimension exceeds 2");
  // Directed edge multiset of all oriented face boundaries.
  std::map<std::pair<Vertex, Vertex>, int> directed;
  for (const auto& f : faces) {
    auto it = x.orientation.find(f);
    if (it == x.orientation.end()) return fail("unoriented 2-simplex " + simplex_str(f));
    // +1 orientation = cyclic order (f0, f1, f2) on sorted vertices.
    std::vector<std::pair<Vertex, Vertex>> es;
    if (it->second == 1)
      es = {{f[0], f[1]}, {f[1], f[2]}, {f[2], f[0]}};
    else
      es = {{f[1], f[0]}, {f[2], f[1]}, {f[0], f[2]}};
    for (auto& e : es) directed[e]++;
  }
  for (const auto& e : x.simplices_of_dim(1)) {
    const int ab = directed.count({e[0], e[1]}) ? directed.at({e[0], e[1]}) : 0;
    const int ba = directed.count({e[1], e[0]}) ? directed.at({e[1], e[0]}) : 0;
    if (ab != 1 || ba != 1)
      return fail("edge " + simplex_str(e) + " not matched by opposite orientations");
  }
  return true;
}

Subdivision barycentric_subdivide(const Complex& x) {
  Subdivision sd;
  const int n = static_cast<int>(x.simplices.size());
  sd.vertex_simplex = x.simplices;
  for (int i = 0; i < n; ++i) sd.simplex_vertex[x.simplices[i]] = i;

  std::vector<Vertex> verts(n);
  for (int i = 0; i < n; ++i) verts[i] = i;

  // Chains of strictly nested simplices, built by extending chains upward.
  std::vector<Simplex> chains;
  // is_face[i][j]: simplices[i] strictly contained in simplices[j]
  std::vector<std::vector<int>> contained_in(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (x.simplices[i].size() >= x.simplices[j].size()) continue;
      if (std::includes(x.simplices[j].begin(), x.simplices[j].end(),
                        x.simplices[i].begin(), x.simplices[i].end()))
        contained_in[i].push_back(j);
    }
  }
  std::vector<std::vector<Vertex>> frontier;
  for (int i = 0; i < n; ++i) frontier.push_back({i});
  while (!frontier.empty()) {
    std::vector<std::vector<Vertex>> next;
    for (auto& chain : frontier) {
      Simplex s = chain;
      std::sort(s.begin(), s.end());
      chains.push_back(s);
      for (int j : contained_in[chain.back()]) {
        auto ext = chain;
        ext.push_back(j);
        next.push_back(std::move(ext));
      }
    }
    frontier = std::move(next);
  }
  sd.complex = build_complex(verts, chains);
  return sd;
}

Complex star_subcomplex(const Complex& x, const Simplex& sigma) {
  Subdivision sd = barycentric_subdivide(x);
  auto meets = [&](Vertex sv) {
    const Simplex& s = sd.vertex_simplex[sv];
    std::vector<Vertex> inter;
    std::set_intersection(s.begin(), s.end(), sigma.begin(), sigma.end(),
                          std::back_inserter(inter));
    return !inter.empty();
  };
  std::vector<Vertex> verts;
  for (Vertex v : sd.complex.vertices)
    if (meets(v)) verts.push_back(v);
  std::set<Vertex> keep(verts.begin(), verts.end());
  std::vector<Simplex> faces;
  for (const auto& s : sd.complex.simplices) {
    bool ok = true;
    for (Vertex v : s) ok = ok && keep.count(v);
    if (ok) faces.push_back(s);
  }
  return build_complex(verts, faces);
}

bool Tree::has_edge(Vertex a, Vertex b) const {
  Simplex e = {std::min(a, b), std::max(a, b)};
  return edges.count(e) > 0;
}

std::vector<Vertex> Tree::path_from_root(Vertex v) const {
  std::vector<Vertex> rev;
  Vertex cur = v;
  rev.push_back(cur);
  while (cur != root) {
    auto it = parent.find(cur);
    if (it == parent.end())
      throw InputError("tree path: vertex " + std::to_string(v) + " not in tree");
    cur = it->second;
    rev.push_back(cur);
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

Tree maximal_tree(const Complex& x) {
  Tree t;
  if (x.vertices.empty()) return t;
  t.root = x.vertices.front();
  std::set<Vertex> seen = {t.root};
  std::deque<Vertex> queue = {t.root};
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : x.neighbors(v)) {
      if (seen.count(w)) continue;
      seen.insert(w);
      t.parent[w] = v;
      t.edges.insert({std::min(v, w), std::max(v, w)});
      queue.push_back(w);
    }
  }
  t.spans_all = seen.size() == x.vertices.size();
  return t;
}

bool path_valid(const Complex& x, const SimplicialPath& p, std::string* why) {
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i] == p[i + 1]) continue;
    Simplex e = {std::min(p[i], p[i + 1]), std::max(p[i], p[i + 1])};
    if (!x.contains(e)) {
      if (why)
        *why = "step " + std::to_string(i) + ": " + simplex_str(e) + " is not an edge";
      return false;
    }
  }
  for (Vertex v : p)
    if (!std::binary_search(x.vertices.begin(), x.vertices.end(), v)) {
      if (why) *why = "unknown vertex " + std::to_string(v);
      return false;
    }
  return true;
}

int ContractionWitness::complexity() const {
  int c = 0;
  for (const auto& m : moves)
    if (m.kind == MoveKind::TriangleInsert || m.kind == MoveKind::TriangleDelete) ++c;
  return c;
}

namespace {

bool is_edge_or_equal(const Complex& x, Vertex a, Vertex b) {
  if (a == b) return true;
  return x.contains({std::min(a, b), std::max(a, b)});
}

bool is_triangle(const Complex& x, Vertex a, Vertex b, Vertex c) {
  Simplex s = {a, b, c};
  std::sort(s.begin(), s.end());
  if (s[0] == s[1] || s[1] == s[2]) return false;
  return x.contains(s);
}

// Applies one move in place; returns false if the move is not simplicial.
bool apply_move(const Complex& x, SimplicialPath& p, const Move& m) {
  const int len = static_cast<int>(p.size());
  switch (m.kind) {
    case MoveKind::BacktrackInsert: {
      if (m.pos < 0 || m.pos >= len) return false;
      if (!is_edge_or_equal(x, p[m.pos], m.w1)) return false;
      p.insert(p.begin() + m.pos + 1, {m.w1, p[m.pos]});
      return true;
    }
    case MoveKind::BacktrackDelete: {
      if (m.pos < 0 || m.pos + 2 >= len) return false;
      if (p[m.pos] != p[m.pos + 2]) return false;
      if (!is_edge_or_equal(x, p[m.pos], p[m.pos + 1])) return false;
      p.erase(p.begin() + m.pos + 1, p.begin() + m.pos + 3);
      return true;
    }
    case MoveKind::TriangleInsert: {
      if (m.pos < 0 || m.pos >= len) return false;
      if (!is_triangle(x, p[m.pos], m.w1, m.w2)) return false;
      p.insert(p.begin() + m.pos + 1, {m.w1, m.w2, p[m.pos]});
      return true;
    }
    case MoveKind::TriangleDelete: {
      if (m.pos < 0 || m.pos + 3 >= len) return false;
      if (p[m.pos] != p[m.pos + 3]) return false;
      if (!is_triangle(x, p[m.pos], p[m.pos + 1], p[m.pos + 2])) return false;
      p.erase(p.begin() + m.pos + 1, p.begin() + m.pos + 4);
      return true;
    }
  }
  return false;
}

}  // namespace

WitnessReplay apply_witness(const Complex& x, const SimplicialPath& loop,
                            const ContractionWitness& w) {
  WitnessReplay r;
  r.final_path = loop;
  for (size_t i = 0; i < w.moves.size(); ++i) {
    if (!apply_move(x, r.final_path, w.moves[i])) {
      r.first_bad_move = static_cast<int>(i);
      return r;
    }
  }
  r.valid = true;
  r.contracted = true;
  for (Vertex v : r.final_path) r.contracted = r.contracted && v == r.final_path.front();
  return r;
}

namespace {

// Witness construction bookkeeping: applies a move to the working path and
// records it.
struct WitnessBuilder {
  const Complex& x;
  SimplicialPath path;
  std::vector<Move> moves;

  bool apply(Move m) {
    if (!apply_move(x, path, m)) return false;
    moves.push_back(m);
    return true;
  }
};

// Deletes any (v, w, v) backtracks; free, so run to exhaustion.
void reduce_backtracks(WitnessBuilder& b) {
  bool again = true;
  while (again && b.path.size() >= 3) {
    again = false;
    for (int i = 0; i + 2 < static_cast<int>(b.path.size()); ++i) {
      if (b.path[i] == b.path[i + 2]) {
        if (b.apply({MoveKind::BacktrackDelete, i})) {
          again = true;
          break;
        }
      }
    }
  }
}

// Replaces (x, v, y) by (x, y) when {x,v,y} spans a 2-simplex and {x,y} is an
// edge: one backtrack insert plus one triangle delete.
bool corner_reduce_at(WitnessBuilder& b, int i) {
  const Vertex xx = b.path[i], v = b.path[i + 1], y = b.path[i + 2];
  if (xx == y || v == xx || v == y) return false;
  if (!is_triangle(b.x, xx, v, y)) return false;
  if (!is_edge_or_equal(b.x, xx, y)) return false;
  if (!b.apply({MoveKind::BacktrackInsert, i, y})) return false;
  if (!b.apply({MoveKind::TriangleDelete, i + 1})) return false;
  return true;
}

// Cone apex: a vertex adjacent to every other vertex such that every edge
// extends to a 2-simplex through it.
std::optional<Vertex> cone_apex(const Complex& x) {
  for (Vertex a : x.vertices) {
    bool ok = true;
    for (Vertex v : x.vertices)
      if (v != a && !x.contains({std::min(a, v), std::max(a, v)})) ok = false;
    if (!ok) continue;
    for (const auto& e : x.simplices_of_dim(1)) {
      if (e[0] == a || e[1] == a) continue;
      Simplex t = {e[0], e[1], a};
      std::sort(t.begin(), t.end());
      if (!x.contains(t)) ok = false;
    }
    if (ok) return a;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ContractionWitness> find_contraction(const Complex& x,
                                                   const SimplicialPath& loop) {
  if (loop.empty() || loop.front() != loop.back()) return std::nullopt;
  if (!path_valid(x, loop)) return std::nullopt;

  WitnessBuilder b{x, loop, {}};
  reduce_backtracks(b);

  // Greedy corner reduction.
  for (int guard = 0; guard < 100000 && b.path.size() > 1; ++guard) {
    bool progressed = false;
    for (int i = 0; i + 2 < static_cast<int>(b.path.size()); ++i) {
      if (corner_reduce_at(b, i)) {
        progressed = true;
        break;
      }
    }
    if (!progressed && b.path.size() >= 4) {
      // Seam corner (v_{k-1}, v_0, v_1): expose it with a free backtrack.
      const int k = static_cast<int>(b.path.size()) - 1;
      const Vertex prev = b.path[k - 1], base = b.path[0], next = b.path[1];
      if (prev != next && is_triangle(x, prev, base, next) &&
          is_edge_or_equal(x, prev, next)) {
        if (b.apply({MoveKind::BacktrackInsert, 0, prev}) && corner_reduce_at(b, 1))
          progressed = true;
      }
    }
    reduce_backtracks(b);
    if (!progressed) break;
  }
  if (b.path.size() == 1) return ContractionWitness{b.moves};

  // Fan contraction through a cone apex.
  auto apex = cone_apex(x);
  if (!apex) return std::nullopt;
  const Vertex a = *apex;
  // Route every edge not incident to the apex through it.
  for (int guard = 0; guard < 100000; ++guard) {
    int i = -1;
    for (int j = 0; j + 1 < static_cast<int>(b.path.size()); ++j) {
      if (b.path[j] != a && b.path[j + 1] != a && b.path[j] != b.path[j + 1]) {
        i = j;
        break;
      }
    }
    if (i < 0) break;
    const Vertex u = b.path[i], v = b.path[i + 1];
    // (u, v) -> (u, a, v): triangle insert (a, v) at u, then drop (v, u, v).
    if (!b.apply({MoveKind::TriangleInsert, i, a, v})) return std::nullopt;
    if (!b.apply({MoveKind::BacktrackDelete, i + 2})) return std::nullopt;
  }
  reduce_backtracks(b);
  if (b.path.size() == 1) return ContractionWitness{b.moves};
  return std::nullopt;
}

int Presentation::generator_index(const std::string& label) const {
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == label) return static_cast<int>(i);
  return -1;
}

Presentation presentation_from_tree(const Complex& x, const Tree& t) {
  if (!t.spans_all)
    throw PreconditionError("presentation_from_tree: complex is disconnected");
  Presentation p;
  p.basepoint = t.root;
  std::map<Simplex, int> edge_gen;
  for (const auto& e : x.simplices_of_dim(1)) {
    if (t.edges.count(e)) continue;
    edge_gen[e] = static_cast<int>(p.generators.size());
    p.generators.push_back("g" + std::to_string(e[0]) + "_" + std::to_string(e[1]));
    p.generator_edges.push_back(e);
    SimplicialPath loop = t.path_from_root(e[0]);
    loop.push_back(e[1]);
    auto back = t.path_from_root(e[1]);
    std::reverse(back.begin(), back.end());
    loop.insert(loop.end(), back.begin() + 1, back.end());
    p.generator_loops.push_back(std::move(loop));
  }
  for (const auto& f : x.simplices_of_dim(2)) {
    Word w;
    const Vertex seq[4] = {f[0], f[1], f[2], f[0]};
    for (int i = 0; i < 3; ++i) {
      Simplex e = {std::min(seq[i], seq[i + 1]), std::max(seq[i], seq[i + 1])};
      auto it = edge_gen.find(e);
      if (it == edge_gen.end()) continue;  // tree edge: empty word
      const int idx = it->second + 1;
      w.push_back(seq[i] == e[0] ? idx : -idx);
    }
    p.relations.push_back(std::move(w));
  }
  return p;
}

SimplicialPath expand_word(const Presentation& p, const Word& w) {
  if (p.generator_loops.empty())
    throw InputError("expand_word: abstract presentation has no generator loops");
  SimplicialPath out = {p.basepoint};
  for (int g : w) {
    const int idx = std::abs(g) - 1;
    if (idx < 0 || idx >= static_cast<int>(p.generator_loops.size()))
      throw InputError("expand_word: generator index out of range");
    SimplicialPath piece = p.generator_loops[idx];
    if (g < 0) std::reverse(piece.begin(), piece.end());
    out.insert(out.end(), piece.begin() + 1, piece.end());
  }
  return out;
}

}  // namespace flatbundle
