#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flatbundle/types.hpp"

namespace flatbundle {

// Dimension-major order, lexicographic within a dimension. All simplex lists
// in a Complex are kept sorted by this.
struct SimplexLess {
  bool operator()(const Simplex& a, const Simplex& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// Finite abstract simplicial complex, closed under faces.
struct Complex {
  std::vector<Vertex> vertices;    // sorted
  std::vector<Simplex> simplices;  // SimplexLess order, includes the vertices
  // Optional orientation signs on 2-simplices, relative to sorted vertex
  // order (+1 = even permutation of sorted gives the intended orientation).
  std::map<Simplex, int> orientation;

  bool contains(const Simplex& s) const;
  int dim() const;
  std::vector<Simplex> simplices_of_dim(int k) const;
  std::vector<Vertex> neighbors(Vertex v) const;  // ascending
  int euler_characteristic() const;
};

// Builds the closure of `faces` over `vertices`. Throws InputError on unknown
// vertex ids, duplicate vertices inside a face, or an orientation key that is
// not a listed face.
Complex build_complex(const std::vector<Vertex>& vertices,
                      const std::vector<Simplex>& faces,
                      const std::map<Simplex, int>& orientation = {});

Complex skeleton(const Complex& x, int k);

// All nonempty faces of a simplex, itself included, in SimplexLess order.
std::vector<Simplex> faces_of(const Simplex& s);

// "{a,b,c}" rendering for error messages and reports.
std::string simplex_str(const Simplex& s);

// Every edge of the 2-skeleton lies in exactly two oriented 2-simplices with
// opposite induced edge orientations.
bool is_closed_oriented_surface(const Complex& x, std::string* why = nullptr);

// Barycentric subdivision S(X): one vertex per simplex of X (id = index into
// x.simplices), one simplex per chain of strictly nested simplices.
struct Subdivision {
  Complex complex;
  std::vector<Simplex> vertex_simplex;            // S-vertex id -> X-simplex
  std::map<Simplex, Vertex> simplex_vertex;       // inverse
};
Subdivision barycentric_subdivide(const Complex& x);

// Subcomplex of S(X) spanned by the barycenters of simplices meeting sigma
// (chains all of whose members intersect sigma). Vertex ids as in
// barycentric_subdivide(x).
Complex star_subcomplex(const Complex& x, const Simplex& sigma);

// Maximal tree from BFS at the least vertex; neighbor order ascending.
struct Tree {
  Vertex root = -1;
  std::set<Simplex> edges;
  std::map<Vertex, Vertex> parent;  // root absent
  bool spans_all = true;            // false iff the complex is disconnected

  bool has_edge(Vertex a, Vertex b) const;
  // Vertex path root -> v along tree edges.
  std::vector<Vertex> path_from_root(Vertex v) const;
};
Tree maximal_tree(const Complex& x);

// Edge path: consecutive entries are equal or span an edge of X. Closed iff
// front == back.
using SimplicialPath = std::vector<Vertex>;
bool path_valid(const Complex& x, const SimplicialPath& p, std::string* why = nullptr);

// Combinatorial nullhomotopy as a replayable move sequence. Backtrack moves
// are free; complexity counts triangle moves only.
enum class MoveKind { BacktrackInsert, BacktrackDelete, TriangleInsert, TriangleDelete };

struct Move {
  MoveKind kind;
  int pos = 0;
  Vertex w1 = -1, w2 = -1;  // inserted vertices, unused for deletes
};

struct ContractionWitness {
  std::vector<Move> moves;
  int complexity() const;
};

struct WitnessReplay {
  bool valid = false;
  int first_bad_move = -1;    // -1 when valid
  SimplicialPath final_path;
  bool contracted = false;    // final path is a single (possibly repeated) vertex
};

// Replays `w` against `loop`, checking that every move stays simplicial.
WitnessReplay apply_witness(const Complex& x, const SimplicialPath& loop,
                            const ContractionWitness& w);

// Deterministic witness search: greedy corner reduction, falling back to the
// fan contraction through a cone apex when one exists. Returns nullopt when
// the loop cannot be contracted by these strategies.
std::optional<ContractionWitness> find_contraction(const Complex& x,
                                                   const SimplicialPath& loop);

// Word in free-group generators: signed 1-based indices, traversal order.
using Word = std::vector<int>;

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relations;
  Vertex basepoint = -1;                        // -1 for abstract presentations
  std::vector<SimplicialPath> generator_loops;  // empty for abstract
  std::vector<Simplex> generator_edges;         // the non-tree edge per generator

  int generator_index(const std::string& label) const;  // -1 if absent
};

// Generators = non-tree edges (each crossing min->max vertex, loop routed
// through the tree); one relation per 2-simplex, tree edges contributing the
// empty word.
Presentation presentation_from_tree(const Complex& x, const Tree& t);

// Expands a word through generator loops (inverse = reversed loop) into a
// based loop.
SimplicialPath expand_word(const Presentation& p, const Word& w);

}  // namespace flatbundle
