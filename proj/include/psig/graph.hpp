#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace psig {

enum class Parity : std::uint8_t { ket, bra };

inline Parity flip(Parity p) { return p == Parity::ket ? Parity::bra : Parity::ket; }

// Party labels are dense integer ids 0..party_count-1.
using PartyLabel = int;

struct Edge {
  int u = 0;
  int v = 0;
  PartyLabel label = 0;
};

// Edge-labeled multigraph encoding a local-unitary-invariant polynomial of a
// pure state: one tensor per vertex (ket = amplitudes, bra = conjugates), one
// index contraction per edge.  A well-formed graph is color-regular (exactly
// one incident edge per label at every vertex), parity-bipartite (every edge
// joins a ket to a bra), connected, and has equally many kets and bras.
struct PsiGraph {
  int party_count = 0;
  std::vector<Parity> parity;  // indexed by vertex id
  std::vector<Edge> edges;

  int vertex_count() const { return static_cast<int>(parity.size()); }
  int ket_count() const;
  bool is_simple() const;  // no parallel edges (any pair of labels)
};

// Per-(vertex,label) incidence table.  Only constructible for color-regular
// graphs; everything downstream of validate() relies on it.
struct LabelAdjacency {
  int q = 0;
  std::vector<int> edge_id;   // v*q + label -> edge index
  std::vector<int> neighbor;  // v*q + label -> opposite endpoint

  int edge(int v, PartyLabel a) const { return edge_id[v * q + a]; }
  int nbr(int v, PartyLabel a) const { return neighbor[v * q + a]; }
};

// Throws std::invalid_argument if the graph is not color-regular.
LabelAdjacency label_adjacency(const PsiGraph& g);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // offending vertices/edges; empty when passed
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  std::string summary() const;
};

// Checks edge endpoints, label range, color-regularity, parity-bipartiteness,
// connectivity and ket/bra balance.  Never throws on bad input.
ValidationReport validate(const PsiGraph& g);

// Cycle with 2n vertices 0..2n-1 (even ids are kets) and edges
// e_i = (i, i+1 mod 2n), labeled 0 for even i and 1 for odd i.
// n = 1 is the two-vertex graph with two distinctly labeled parallel edges;
// merge_parties collapses those into a single edge with one label when the
// single-party form is wanted (only meaningful for n = 1).
PsiGraph build_cycle(int n, bool merge_parties = false);

// Hypercube 1-skeleton: 2^q vertices indexed by bit-strings, parity = bit
// parity, edges along coordinate a carry label a.
PsiGraph build_hypercube(int q);

// Colored Cartesian product.  Vertex (v1, v2) gets id v1*|V2| + v2, parity is
// the XOR, labels of g2 are shifted by g1.party_count.  Edge order: all g1
// edges first ((e1, v2) -> id e1*|V2| + v2), then g2 edges
// ((e2, v1) -> id |E1|*|V2| + e2*|V1| + v1).
PsiGraph cartesian_product(const PsiGraph& g1, const PsiGraph& g2);

// Symmetric matrix of pairwise rotation orders: m[a][a] = 1, m[a][b] >= 2 for
// a != b, and 0 encodes an infinite order.
struct CoxeterMatrix {
  std::vector<std::vector<int>> m;

  int size() const { return static_cast<int>(m.size()); }
  static CoxeterMatrix dihedral(int n);
  // Direct sum; entries across blocks are 2 (commuting pairs).
  static CoxeterMatrix direct_sum(const CoxeterMatrix& a, const CoxeterMatrix& b);
};

// Cayley graph of the reflection group of m: vertices are group elements
// enumerated breadth-first as products of the generator reflections in the
// q-dimensional reflection representation (mirrors a, b meet at angle
// pi/m[a][b]); elements are deduplicated at max-norm distance 1e-9.  An edge
// labeled a joins g and A_a * g; parity is word-length parity.  Throws
// std::runtime_error("coxeter group too large or infinite") when more than
// max_elements vertices appear.
PsiGraph build_coxeter_cayley(const CoxeterMatrix& m, int max_elements = 10000);

// BFS distances from src over the edge list; unreachable vertices get -1.
std::vector<int> bfs_distances(const PsiGraph& g, int src);

}  // namespace psig
