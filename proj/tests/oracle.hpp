// Reference evaluation of graph invariants for tests: enumerate every
// assignment of an index to every edge and sum the products of vertex
// amplitudes.  Exponential in the edge count — intended for small graphs
// only, as an oracle that is independent of the contraction engine.
#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <queue>
#include <vector>

#include "psig/graph.hpp"
#include "psig/tensor.hpp"

namespace psig::testing {

// Row-major strides of a state's party axes (party 0 slowest).
inline std::vector<long> party_strides(const std::vector<int>& dims) {
  std::vector<long> stride(dims.size(), 1);
  for (int a = static_cast<int>(dims.size()) - 2; a >= 0; --a)
    stride[a] = stride[a + 1] * dims[a + 1];
  return stride;
}

// Flat variant: no ordering tricks, the full vertex product is recomputed
// from scratch for every assignment.  Costs prod_e d_e * V * q operations.
inline std::complex<double> flat_invariant(const PsiGraph& g, const PureState& psi) {
  const LabelAdjacency adj = label_adjacency(g);
  const int edge_count = static_cast<int>(g.edges.size());
  const int vertex_count = g.vertex_count();
  const int q = g.party_count;
  const std::vector<long> stride = party_strides(psi.dims);

  std::vector<int> idx(edge_count, 0);
  long double sum_re = 0.0L, sum_im = 0.0L;
  while (true) {
    std::complex<double> prod(1.0, 0.0);
    for (int v = 0; v < vertex_count; ++v) {
      long flat = 0;
      for (int a = 0; a < q; ++a) flat += idx[adj.edge(v, a)] * stride[a];
      const std::complex<double> amp = psi.amps(flat);
      prod *= g.parity[v] == Parity::ket ? amp : std::conj(amp);
    }
    sum_re += prod.real();
    sum_im += prod.imag();

    int e = edge_count - 1;
    while (e >= 0 && ++idx[e] == psi.dims[g.edges[e].label]) idx[e--] = 0;
    if (e < 0) break;
  }
  return {static_cast<double>(sum_re), static_cast<double>(sum_im)};
}

// Nested-loop variant with factor hoisting: edges are enumerated in a
// breadth-first order and each vertex amplitude is multiplied into the
// running product at the depth where its last incident edge gets fixed, so
// the work per full assignment is O(1) amortized instead of O(V * q).
inline std::complex<double> naive_invariant(const PsiGraph& g, const PureState& psi) {
  const LabelAdjacency adj = label_adjacency(g);
  const int edge_count = static_cast<int>(g.edges.size());
  const int vertex_count = g.vertex_count();
  const int q = g.party_count;
  const std::vector<long> stride = party_strides(psi.dims);

  // Edge order: first-traversal order of a breadth-first walk, so the
  // assigned prefix stays connected and vertices complete early.
  std::vector<int> order, position(edge_count, -1);
  std::vector<char> seen(vertex_count, 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int a = 0; a < q; ++a) {
      const int e = adj.edge(v, a);
      if (position[e] < 0) {
        position[e] = static_cast<int>(order.size());
        order.push_back(e);
      }
      const int w = adj.nbr(v, a);
      if (!seen[w]) {
        seen[w] = 1;
        queue.push(w);
      }
    }
  }

  // Vertices whose last incident edge sits at each depth.
  std::vector<std::vector<int>> closes_at(edge_count);
  for (int v = 0; v < vertex_count; ++v) {
    int last = 0;
    for (int a = 0; a < q; ++a) last = std::max(last, position[adj.edge(v, a)]);
    closes_at[last].push_back(v);
  }

  std::vector<int> idx(edge_count, 0);  // indexed by edge id
  long double sum_re = 0.0L, sum_im = 0.0L;

  // partial[k] = product of all vertex factors closed at depths < k.  idx[e]
  // keeps its value for the whole subtree below its depth and is advanced
  // only when the walk returns to that depth.
  std::vector<std::complex<double>> partial(edge_count + 1);
  partial[0] = {1.0, 0.0};

  int depth = 0;
  bool returning = false;
  while (depth >= 0) {
    if (depth == edge_count) {
      sum_re += partial[depth].real();
      sum_im += partial[depth].imag();
      --depth;
      returning = true;
      continue;
    }
    const int e = order[depth];
    const int dim = psi.dims[g.edges[e].label];
    if (returning) {
      ++idx[e];
      returning = false;
    }
    if (idx[e] == dim) {
      idx[e] = 0;
      --depth;
      returning = true;
      continue;
    }
    std::complex<double> p = partial[depth];
    for (int v : closes_at[depth]) {
      long flat = 0;
      for (int a = 0; a < q; ++a) flat += idx[adj.edge(v, a)] * stride[a];
      const std::complex<double> amp = psi.amps(flat);
      p *= g.parity[v] == Parity::ket ? amp : std::conj(amp);
    }
    partial[depth + 1] = p;
    ++depth;
  }
  return {static_cast<double>(sum_re), static_cast<double>(sum_im)};
}

}  // namespace psig::testing
