#pragma once

#include "psig/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace psig {

// An involutive, label-preserving, parity-flipping automorphism whose mirror
// edges (those joining v and k(v)) disconnect the graph into exactly two
// components exchanged by the involution.
struct ReflectingCut {
  std::vector<int> involution;  // vertex -> vertex
  std::vector<int> cut_edges;   // sorted edge indices joining v and k(v)
  std::vector<int> side;        // vertex -> 0/1; side 0 contains vertex 0
};

// Exhaustive, deterministic enumeration (ordered lexicographically by sorted
// cut-edge set).  Requires a validated graph; throws std::runtime_error when
// the graph has more than max_vertices vertices.
std::vector<ReflectingCut> enumerate_reflecting_cuts(const PsiGraph& g,
                                                     int max_vertices = 64);

// Re-verifies every ReflectingCut invariant from scratch (independent of the
// search).  Returns an empty string on success, else a description.
std::string check_reflecting_cut(const PsiGraph& g, const ReflectingCut& cut);

enum class ParityMode { same, flipped, either };

// Label-preserving isomorphism search between connected color-regular graphs.
// ParityMode::same maps kets to kets, flipped maps kets to bras.
std::optional<std::vector<int>> find_isomorphism(const PsiGraph& g1, const PsiGraph& g2,
                                                 ParityMode mode);

// True when some label-preserving self-map flips every vertex parity; such
// graphs have manifestly real invariants.
bool has_parity_flip_symmetry(const PsiGraph& g);

struct ReflectingWitness {
  bool ok = false;
  // For failures: an unseparated pair (edge ids or vertex ids).
  int first = -1;
  int second = -1;
};

// Every pair of distinct label-a edges is separated by some reflecting cut
// (both edges strictly on opposite sides).
ReflectingWitness is_edge_reflecting(const PsiGraph& g, PartyLabel label,
                                     const std::vector<ReflectingCut>& cuts);
ReflectingWitness is_edge_reflecting(const PsiGraph& g, PartyLabel label);

// Every pair of distinct vertices is separated by some reflecting cut.
ReflectingWitness is_vertex_reflecting(const PsiGraph& g,
                                       const std::vector<ReflectingCut>& cuts);
ReflectingWitness is_vertex_reflecting(const PsiGraph& g);

struct CutDistanceReport {
  bool ok = false;
  int pairs_checked = 0;
  std::vector<std::string> violations;  // capped at a handful of entries
};

// For every vertex pair: the number of cuts separating it equals the graph
// distance, and each separating cut crosses one fixed shortest path exactly
// once.
CutDistanceReport cut_count_equals_distance(const PsiGraph& g,
                                            const std::vector<ReflectingCut>& cuts);
CutDistanceReport cut_count_equals_distance(const PsiGraph& g);

// Certificate that the invariant is convex on one party's density matrix.
// For kind = edge: per cut, a real symmetric PSD matrix P indexed by the
// label-a edges strictly on the cut's right side (right_items, in row order),
// where P[e][f] is the pair weight M[e][k(f)]; the weights over all cuts
// separating a pair of distinct label-a edges must total one.
// For kind = vertex: the same with vertices in place of label-edges.
struct ConvexityCertificate {
  enum class Kind { edge, vertex };
  Kind kind = Kind::edge;
  PartyLabel label = 0;  // meaningful for kind == edge only
  struct PerCut {
    ReflectingCut cut;
    std::vector<int> right_items;           // edge ids (edge kind) or vertex ids
    std::vector<std::vector<double>> matrix;  // square, |right_items|^2
  };
  std::vector<PerCut> cuts;
};

struct CertificateReport {
  bool pass = false;
  double min_psd_margin = 0.0;    // smallest eigenvalue across all cut matrices
  double max_sum_residual = 0.0;  // worst |sum - 1| across separated pairs
  std::vector<std::string> problems;
};

// Structural checks throw std::invalid_argument (index mismatch, unknown
// items); numeric failures are reported with pass = false.
CertificateReport verify_certificate(const PsiGraph& g, const ConvexityCertificate& cert,
                                     double psd_tol = 1e-12, double sum_tol = 1e-12);

// Rebuilds every cut's side vector from its cut edges (side 0 holds vertex
// 0).  Sides are derived data, so serialized certificates omit them; callers
// attach them against whichever graph the certificate is checked with.
// Malformed involutions/edges are left for verify_certificate to report.
void recompute_cut_sides(const PsiGraph& g, ConvexityCertificate& cert);

// Identity matrices on the enumerated cuts; a valid certificate for the cycle
// family, where each pair of same-label edges is mirrored by exactly one of
// the cuts separating it.
ConvexityCertificate certificate_for_cycle(const PsiGraph& cycle, PartyLabel label);
std::vector<ConvexityCertificate> certificate_for_cycle(int n);  // both labels of build_cycle(n)

// Vertex-level certificate derived from an edge certificate: pairs not joined
// by a label-a edge inherit the edge-pair weights through their incident
// a-edges; each a-adjacent pair gets weight one on a single cut mirroring it.
ConvexityCertificate vertex_certificate(const PsiGraph& g, const ConvexityCertificate& edge_cert);

// Certificate for a Cartesian product.  With the certified label on the g1
// side: each g1 cut k extends as k x g2 carrying P1 spread uniformly over g2
// vertices, and each vertex-certificate cut kv of g2 extends as g1 x kv
// carrying its vertex weights on equal edges.  The mirrored construction
// certifies a g2-side label (its id shifted by g1.party_count).
ConvexityCertificate certificate_for_product(const PsiGraph& g1,
                                             const ConvexityCertificate& cert1,
                                             const PsiGraph& g2,
                                             const ConvexityCertificate& vertex_cert2);
ConvexityCertificate certificate_for_product_right(const PsiGraph& g1,
                                                   const ConvexityCertificate& vertex_cert1,
                                                   const PsiGraph& g2,
                                                   const ConvexityCertificate& cert2);

// The two explicit hypercube solutions for label 0: the product-derived one
// (all-ones / identity patterns) and the cut-symmetric one with weight
// 1/(1 + Hamming distance) between right-side edges.
ConvexityCertificate hypercube_certificate_product_form(int q);
ConvexityCertificate hypercube_certificate_symmetric(int q);

}  // namespace psig
