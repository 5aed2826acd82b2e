#include "psig/reflect.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace psig {

namespace {

// Connected color-regular graphs admit at most one label-preserving map for a
// given image of vertex 0: neighbors propagate label by label.  Returns the
// map or nullopt on any inconsistency; bijectivity is checked, parity is not.
std::optional<std::vector<int>> propagate_map(const PsiGraph& g1, const LabelAdjacency& a1,
                                              const PsiGraph& g2, const LabelAdjacency& a2,
                                              int image_of_0) {
  const int n = g1.vertex_count();
  std::vector<int> map(n, -1);
  map[0] = image_of_0;
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int a = 0; a < g1.party_count; ++a) {
      const int w = a1.nbr(v, a);
      const int img = a2.nbr(map[v], a);
      if (map[w] == -1) {
        map[w] = img;
        queue.push(w);
      } else if (map[w] != img) {
        return std::nullopt;
      }
    }
  }
  std::vector<char> hit(g2.vertex_count(), 0);
  for (int v = 0; v < n; ++v) {
    if (map[v] == -1 || hit[map[v]]) return std::nullopt;
    hit[map[v]] = 1;
  }
  return map;
}

// Component ids after deleting the given edges; -1 fill, 0 = component of
// vertex 0, then in order of discovery.
std::vector<int> components_without(const PsiGraph& g, const std::vector<int>& removed_edges,
                                    int* count_out) {
  std::vector<char> removed(g.edges.size(), 0);
  for (int e : removed_edges) removed[e] = 1;
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    if (removed[i]) continue;
    adj[g.edges[i].u].push_back(g.edges[i].v);
    adj[g.edges[i].v].push_back(g.edges[i].u);
  }
  std::vector<int> comp(n, -1);
  int count = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = count;
    std::queue<int> queue;
    queue.push(s);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int w : adj[v])
        if (comp[w] == -1) {
          comp[w] = count;
          queue.push(w);
        }
    }
    ++count;
  }
  if (count_out) *count_out = count;
  return comp;
}

// Builds the cut data for a parity-flipping involutive automorphism, or
// nullopt when the mirror edges fail to split the graph into two exchanged
// halves.
std::optional<ReflectingCut> cut_from_involution(const PsiGraph& g, const std::vector<int>& k) {
  ReflectingCut cut;
  cut.involution = k;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const Edge& e = g.edges[i];
    if (k[e.u] == e.v) cut.cut_edges.push_back(i);
  }
  if (cut.cut_edges.empty()) return std::nullopt;
  int count = 0;
  cut.side = components_without(g, cut.cut_edges, &count);
  if (count != 2) return std::nullopt;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (cut.side[k[v]] == cut.side[v]) return std::nullopt;
  return cut;
}

}  // namespace

std::vector<ReflectingCut> enumerate_reflecting_cuts(const PsiGraph& g, int max_vertices) {
  const int n = g.vertex_count();
  if (n > max_vertices)
    throw std::runtime_error("enumerate_reflecting_cuts: graph exceeds vertex cap");
  if (n == 0) return {};
  const LabelAdjacency adj = label_adjacency(g);

  std::vector<ReflectingCut> cuts;
  for (int w = 0; w < n; ++w) {
    if (g.parity[w] == g.parity[0]) continue;
    auto map = propagate_map(g, adj, g, adj, w);
    if (!map) continue;
    bool involutive_flip = true;
    for (int v = 0; v < n && involutive_flip; ++v)
      involutive_flip = (*map)[(*map)[v]] == v && g.parity[(*map)[v]] != g.parity[v];
    if (!involutive_flip) continue;
    if (auto cut = cut_from_involution(g, *map)) cuts.push_back(std::move(*cut));
  }
  std::sort(cuts.begin(), cuts.end(), [](const ReflectingCut& a, const ReflectingCut& b) {
    return std::tie(a.cut_edges, a.involution) < std::tie(b.cut_edges, b.involution);
  });
  return cuts;
}

std::string check_reflecting_cut(const PsiGraph& g, const ReflectingCut& cut) {
  const int n = g.vertex_count();
  const std::vector<int>& k = cut.involution;
  if (static_cast<int>(k.size()) != n) return "involution size mismatch";
  for (int v = 0; v < n; ++v) {
    if (k[v] < 0 || k[v] >= n) return "involution image out of range";
    if (k[k[v]] != v) return "map is not an involution";
    if (g.parity[k[v]] == g.parity[v]) return "map does not flip parity";
  }
  LabelAdjacency adj;
  try {
    adj = label_adjacency(g);
  } catch (const std::exception& e) {
    return e.what();
  }
  for (const Edge& e : g.edges)
    if (adj.nbr(k[e.u], e.label) != k[e.v]) return "map is not a label-preserving automorphism";

  std::vector<int> expected;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (k[g.edges[i].u] == g.edges[i].v) expected.push_back(i);
  if (expected.empty()) return "no mirror edges";
  std::vector<int> stored = cut.cut_edges;
  std::sort(stored.begin(), stored.end());
  if (stored != expected) return "cut_edges differ from the mirror edges of the involution";

  int count = 0;
  std::vector<int> comp = components_without(g, expected, &count);
  if (count != 2) return "mirror edges do not split the graph into two components";
  if (static_cast<int>(cut.side.size()) != n) return "side vector size mismatch";
  for (int v = 0; v < n; ++v) {
    if (cut.side[v] != comp[v]) return "side vector does not match the components";
    if (comp[k[v]] == comp[v]) return "involution does not exchange the two sides";
  }
  return "";
}

std::optional<std::vector<int>> find_isomorphism(const PsiGraph& g1, const PsiGraph& g2,
                                                 ParityMode mode) {
  if (g1.party_count != g2.party_count || g1.vertex_count() != g2.vertex_count() ||
      g1.edges.size() != g2.edges.size())
    return std::nullopt;
  if (g1.vertex_count() == 0) return std::vector<int>{};
  LabelAdjacency a1, a2;
  try {
    a1 = label_adjacency(g1);
    a2 = label_adjacency(g2);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  for (int w = 0; w < g2.vertex_count(); ++w) {
    const bool flip0 = g2.parity[w] != g1.parity[0];
    if (mode == ParityMode::same && flip0) continue;
    if (mode == ParityMode::flipped && !flip0) continue;
    auto map = propagate_map(g1, a1, g2, a2, w);
    if (!map) continue;
    bool consistent = true;
    for (int v = 0; v < g1.vertex_count() && consistent; ++v)
      consistent = (g2.parity[(*map)[v]] != g1.parity[v]) == flip0;
    if (consistent) return map;
  }
  return std::nullopt;
}

bool has_parity_flip_symmetry(const PsiGraph& g) {
  return find_isomorphism(g, g, ParityMode::flipped).has_value();
}

namespace {

// side of an edge under a cut: 0/1, or -1 for the cut's own mirror edges.
std::vector<std::vector<signed char>> edge_sides(const PsiGraph& g,
                                                 const std::vector<ReflectingCut>& cuts) {
  std::vector<std::vector<signed char>> sides(cuts.size(),
                                              std::vector<signed char>(g.edges.size(), -1));
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    std::vector<char> is_cut(g.edges.size(), 0);
    for (int e : cuts[c].cut_edges) is_cut[e] = 1;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (!is_cut[i]) sides[c][i] = static_cast<signed char>(cuts[c].side[g.edges[i].u]);
  }
  return sides;
}

}  // namespace

ReflectingWitness is_edge_reflecting(const PsiGraph& g, PartyLabel label,
                                     const std::vector<ReflectingCut>& cuts) {
  std::vector<int> label_edges;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (g.edges[i].label == label) label_edges.push_back(i);
  const auto sides = edge_sides(g, cuts);
  for (std::size_t i = 0; i < label_edges.size(); ++i)
    for (std::size_t j = i + 1; j < label_edges.size(); ++j) {
      bool separated = false;
      for (std::size_t c = 0; c < cuts.size() && !separated; ++c) {
        const signed char si = sides[c][label_edges[i]];
        const signed char sj = sides[c][label_edges[j]];
        separated = si >= 0 && sj >= 0 && si != sj;
      }
      if (!separated) return {false, label_edges[i], label_edges[j]};
    }
  return {true, -1, -1};
}

ReflectingWitness is_edge_reflecting(const PsiGraph& g, PartyLabel label) {
  return is_edge_reflecting(g, label, enumerate_reflecting_cuts(g));
}

ReflectingWitness is_vertex_reflecting(const PsiGraph& g,
                                       const std::vector<ReflectingCut>& cuts) {
  const int n = g.vertex_count();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool separated = false;
      for (std::size_t c = 0; c < cuts.size() && !separated; ++c)
        separated = cuts[c].side[u] != cuts[c].side[v];
      if (!separated) return {false, u, v};
    }
  return {true, -1, -1};
}

ReflectingWitness is_vertex_reflecting(const PsiGraph& g) {
  return is_vertex_reflecting(g, enumerate_reflecting_cuts(g));
}

CutDistanceReport cut_count_equals_distance(const PsiGraph& g,
                                            const std::vector<ReflectingCut>& cuts) {
  CutDistanceReport rep;
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj_v(n), adj_e(n);
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    adj_v[g.edges[i].u].push_back(g.edges[i].v);
    adj_e[g.edges[i].u].push_back(i);
    adj_v[g.edges[i].v].push_back(g.edges[i].u);
    adj_e[g.edges[i].v].push_back(i);
  }
  std::vector<std::vector<char>> is_cut(cuts.size(), std::vector<char>(g.edges.size(), 0));
  for (std::size_t c = 0; c < cuts.size(); ++c)
    for (int e : cuts[c].cut_edges) is_cut[c][e] = 1;

  auto note = [&rep](const std::string& s) {
    if (rep.violations.size() < 8) rep.violations.push_back(s);
  };

  for (int src = 0; src < n; ++src) {
    std::vector<int> dist(n, -1), via_edge(n, -1), parent(n, -1);
    std::queue<int> queue;
    dist[src] = 0;
    queue.push(src);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (std::size_t i = 0; i < adj_v[v].size(); ++i) {
        const int w = adj_v[v][i];
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          via_edge[w] = adj_e[v][i];
          queue.push(w);
        }
      }
    }
    for (int dst = src + 1; dst < n; ++dst) {
      ++rep.pairs_checked;
      std::vector<int> path;  // edge ids of one fixed shortest path
      for (int v = dst; v != src; v = parent[v]) path.push_back(via_edge[v]);
      int separating = 0;
      for (std::size_t c = 0; c < cuts.size(); ++c) {
        if (cuts[c].side[src] == cuts[c].side[dst]) continue;
        ++separating;
        int crossings = 0;
        for (int e : path) crossings += is_cut[c][e];
        if (crossings != 1)
          note("cut " + std::to_string(c) + " crosses shortest path " + std::to_string(src) +
               "-" + std::to_string(dst) + " " + std::to_string(crossings) + " times");
      }
      if (separating != dist[dst])
        note("pair " + std::to_string(src) + "-" + std::to_string(dst) + ": " +
             std::to_string(separating) + " cuts vs distance " + std::to_string(dist[dst]));
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

CutDistanceReport cut_count_equals_distance(const PsiGraph& g) {
  return cut_count_equals_distance(g, enumerate_reflecting_cuts(g));
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

std::vector<int> edges_with_label(const PsiGraph& g, PartyLabel label) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (g.edges[i].label == label) out.push_back(i);
  return out;
}

}  // namespace

CertificateReport verify_certificate(const PsiGraph& g, const ConvexityCertificate& cert,
                                     double psd_tol, double sum_tol) {
  CertificateReport rep;
  rep.min_psd_margin = std::numeric_limits<double>::infinity();
  const bool edge_kind = cert.kind == ConvexityCertificate::Kind::edge;
  const LabelAdjacency adj = label_adjacency(g);

  // Items whose pairs the certificate covers: label-a edges or all vertices.
  std::vector<int> items;
  if (edge_kind) {
    if (cert.label < 0 || cert.label >= g.party_count)
      throw std::invalid_argument("verify_certificate: label out of range");
    items = edges_with_label(g, cert.label);
  } else {
    items.resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) items[v] = v;
  }

  auto problem = [&rep](const std::string& s) {
    if (rep.problems.size() < 16) rep.problems.push_back(s);
  };

  // Per cut: the side of each item (-1 when an edge lies on the cut), the
  // right-side index of each item, and the image item under the involution.
  std::vector<std::vector<signed char>> item_side(cert.cuts.size());
  std::vector<std::vector<int>> item_row(cert.cuts.size());
  std::vector<std::vector<int>> item_image(cert.cuts.size());
  bool cuts_ok = true;

  for (std::size_t c = 0; c < cert.cuts.size(); ++c) {
    const auto& pc = cert.cuts[c];
    const std::string err = check_reflecting_cut(g, pc.cut);
    if (!err.empty()) {
      problem("cut " + std::to_string(c) + ": " + err);
      cuts_ok = false;
      continue;
    }
    const std::size_t m = pc.right_items.size();
    if (pc.matrix.size() != m)
      throw std::invalid_argument("verify_certificate: matrix rows do not match right_items");
    for (const auto& row : pc.matrix)
      if (row.size() != m)
        throw std::invalid_argument("verify_certificate: matrix is not square");

    std::vector<char> is_cut(g.edges.size(), 0);
    for (int e : pc.cut.cut_edges) is_cut[e] = 1;
    auto side_of = [&](int item) -> int {
      if (!edge_kind) return pc.cut.side[item];
      if (is_cut[item]) return -1;
      return pc.cut.side[g.edges[item].u];
    };

    // right_items must be exactly the items on one side.
    std::vector<int> on_side[2];
    for (int it : items) {
      const int s = side_of(it);
      if (s >= 0) on_side[s].push_back(it);
    }
    std::vector<int> stored = pc.right_items;
    std::sort(stored.begin(), stored.end());
    int right_side = -1;
    for (int s = 0; s < 2; ++s) {
      std::vector<int> want = on_side[s];
      std::sort(want.begin(), want.end());
      if (want == stored) {
        right_side = s;
        break;
      }
    }
    if (right_side == -1) {
      if (m == 0 && (on_side[0].empty() || on_side[1].empty())) {
        right_side = on_side[0].empty() ? 0 : 1;
      } else {
        throw std::invalid_argument(
            "verify_certificate: right_items do not list one full side (cut " +
            std::to_string(c) + ")");
      }
    }

    item_side[c].assign(edge_kind ? g.edges.size() : g.vertex_count(), -1);
    item_row[c].assign(edge_kind ? g.edges.size() : g.vertex_count(), -1);
    item_image[c].assign(edge_kind ? g.edges.size() : g.vertex_count(), -1);
    for (int it : items) {
      const int s = side_of(it);
      item_side[c][it] = static_cast<signed char>(s);
      if (edge_kind) {
        const Edge& e = g.edges[it];
        item_image[c][it] = adj.edge(pc.cut.involution[e.u], e.label);
      } else {
        item_image[c][it] = pc.cut.involution[it];
      }
    }
    // Normalize orientation: rows always index the involution's "right" side.
    // When the stored side is 0 we reindex through the involution images.
    for (std::size_t r = 0; r < m; ++r) item_row[c][pc.right_items[r]] = static_cast<int>(r);
    if (right_side == 0) {
      // Treat side 1 as right by mapping items through the involution.
      for (int it : items) item_side[c][it] = item_side[c][it] < 0
                                                  ? -1
                                                  : static_cast<signed char>(1 - item_side[c][it]);
    }

    if (m > 0) {
      Eigen::MatrixXd p(m, m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) p(i, j) = pc.matrix[i][j];
      const double asym = (p - p.transpose()).cwiseAbs().maxCoeff();
      if (asym > 1e-12) {
        problem("cut " + std::to_string(c) + ": matrix asymmetric by " + std::to_string(asym));
        cuts_ok = false;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (p + p.transpose()),
                                                         Eigen::EigenvaluesOnly);
      const double margin = eig.eigenvalues().minCoeff();
      rep.min_psd_margin = std::min(rep.min_psd_margin, margin);
      if (margin < -psd_tol) problem("cut " + std::to_string(c) + ": not PSD");
    }
  }

  if (cert.cuts.empty()) rep.min_psd_margin = 0.0;

  // Sum-to-one over all unordered pairs of distinct items.
  double worst = 0.0;
  if (cuts_ok) {
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const int a = items[i], b = items[j];
        double total = 0.0;
        for (std::size_t c = 0; c < cert.cuts.size(); ++c) {
          if (item_side[c].empty()) continue;
          const int sa = item_side[c][a], sb = item_side[c][b];
          if (sa < 0 || sb < 0 || sa == sb) continue;
          const int right = sa == 1 ? a : b;
          const int left = sa == 1 ? b : a;
          const int row = item_row[c][right];
          const int col = item_row[c][item_image[c][left]];
          if (row < 0 || col < 0)
            throw std::invalid_argument("verify_certificate: separated item missing from rows");
          total += cert.cuts[c].matrix[row][col];
        }
        const double residual = std::abs(total - 1.0);
        if (residual > worst) worst = residual;
        if (residual > sum_tol)
          problem("pair (" + std::to_string(a) + ", " + std::to_string(b) + ") sums to " +
                  std::to_string(total));
      }
  }
  rep.max_sum_residual = worst;
  rep.pass = cuts_ok && rep.problems.empty();
  return rep;
}

void recompute_cut_sides(const PsiGraph& g, ConvexityCertificate& cert) {
  const int n = g.vertex_count();
  for (auto& pc : cert.cuts) {
    if (static_cast<int>(pc.cut.involution.size()) != n) continue;  // verify reports it
    std::vector<char> removed(g.edges.size(), 0);
    bool bad_edge = false;
    for (int e : pc.cut.cut_edges) {
      if (e < 0 || e >= static_cast<int>(removed.size())) {
        bad_edge = true;
        break;
      }
      removed[e] = 1;
    }
    if (bad_edge) continue;
    std::vector<std::vector<int>> adj(n);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      if (removed[e]) continue;
      adj[g.edges[e].u].push_back(g.edges[e].v);
      adj[g.edges[e].v].push_back(g.edges[e].u);
    }
    pc.cut.side.assign(n, -1);
    int comp = 0;
    for (int s = 0; s < n; ++s) {
      if (pc.cut.side[s] != -1) continue;
      std::vector<int> stack = {s};
      pc.cut.side[s] = comp;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
          if (pc.cut.side[w] == -1) {
            pc.cut.side[w] = comp;
            stack.push_back(w);
          }
      }
      ++comp;
    }
  }
}

ConvexityCertificate certificate_for_cycle(const PsiGraph& cycle, PartyLabel label) {
  ConvexityCertificate cert;
  cert.kind = ConvexityCertificate::Kind::edge;
  cert.label = label;
  for (const ReflectingCut& cut : enumerate_reflecting_cuts(cycle)) {
    ConvexityCertificate::PerCut pc;
    pc.cut = cut;
    for (int e : edges_with_label(cycle, label)) {
      bool on_cut = std::find(cut.cut_edges.begin(), cut.cut_edges.end(), e) != cut.cut_edges.end();
      if (!on_cut && cut.side[cycle.edges[e].u] == 1) pc.right_items.push_back(e);
    }
    const std::size_t m = pc.right_items.size();
    pc.matrix.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) pc.matrix[i][i] = 1.0;
    cert.cuts.push_back(std::move(pc));
  }
  return cert;
}

std::vector<ConvexityCertificate> certificate_for_cycle(int n) {
  const PsiGraph g = build_cycle(n);
  return {certificate_for_cycle(g, 0), certificate_for_cycle(g, 1)};
}

ConvexityCertificate vertex_certificate(const PsiGraph& g, const ConvexityCertificate& edge_cert) {
  if (edge_cert.kind != ConvexityCertificate::Kind::edge)
    throw std::invalid_argument("vertex_certificate: expected an edge certificate");
  const LabelAdjacency adj = label_adjacency(g);
  const PartyLabel label = edge_cert.label;
  const int n = g.vertex_count();

  ConvexityCertificate cert;
  cert.kind = ConvexityCertificate::Kind::vertex;
  cert.label = label;

  // Start from the edge certificate's cuts; remember their edge-row maps.
  std::vector<std::vector<int>> edge_row;  // per cut: edge id -> row in edge matrix, or -1
  for (const auto& pc : edge_cert.cuts) {
    cert.cuts.push_back({pc.cut, {}, {}});
    std::vector<int> rows(g.edges.size(), -1);
    for (std::size_t r = 0; r < pc.right_items.size(); ++r) rows[pc.right_items[r]] = static_cast<int>(r);
    edge_row.push_back(std::move(rows));
  }

  // Each label-adjacent pair is mirrored by every cut that severs its shared
  // edge; route its unit weight through the first such cut, pulling in extra
  // enumerated cuts when the edge certificate has none that qualifies.
  std::vector<std::pair<int, int>> assigned;  // (cut index, right-side endpoint)
  std::vector<ReflectingCut> pool;
  bool pool_ready = false;
  for (int u = 0; u < n; ++u) {
    const int w = adj.nbr(u, label);
    if (w < u) continue;
    int chosen = -1;
    for (std::size_t c = 0; c < cert.cuts.size() && chosen < 0; ++c)
      if (cert.cuts[c].cut.involution[u] == w) chosen = static_cast<int>(c);
    if (chosen < 0) {
      if (!pool_ready) {
        pool = enumerate_reflecting_cuts(g);
        pool_ready = true;
      }
      for (const ReflectingCut& cut : pool) {
        if (cut.involution[u] != w) continue;
        bool present = false;
        for (const auto& pc : cert.cuts) present = present || pc.cut.involution == cut.involution;
        if (!present) {
          cert.cuts.push_back({cut, {}, {}});
          edge_row.emplace_back();  // no edge-certificate weights on this cut
          chosen = static_cast<int>(cert.cuts.size()) - 1;
        } else {
          for (std::size_t c = 0; c < cert.cuts.size(); ++c)
            if (cert.cuts[c].cut.involution == cut.involution) chosen = static_cast<int>(c);
        }
        break;
      }
      if (chosen < 0)
        throw std::invalid_argument("vertex_certificate: a label-adjacent pair has no mirroring cut");
    }
    const int right_end = cert.cuts[chosen].cut.side[u] == 1 ? u : w;
    assigned.emplace_back(chosen, right_end);
  }

  for (std::size_t c = 0; c < cert.cuts.size(); ++c) {
    auto& pc = cert.cuts[c];
    for (int v = 0; v < n; ++v)
      if (pc.cut.side[v] == 1) pc.right_items.push_back(v);
    const std::size_t m = pc.right_items.size();
    std::vector<int> row_of(n, -1);
    for (std::size_t r = 0; r < m; ++r) row_of[pc.right_items[r]] = static_cast<int>(r);
    pc.matrix.assign(m, std::vector<double>(m, 0.0));

    if (c < edge_cert.cuts.size()) {
      // Pull back edge weights through "vertex -> its label-a edge" for
      // vertices whose edge sits strictly on the right side.
      std::vector<char> is_cut(g.edges.size(), 0);
      for (int e : pc.cut.cut_edges) is_cut[e] = 1;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          const int eu = adj.edge(pc.right_items[i], label);
          const int ev = adj.edge(pc.right_items[j], label);
          if (is_cut[eu] || is_cut[ev]) continue;
          const int ri = edge_row[c][eu], rj = edge_row[c][ev];
          if (ri >= 0 && rj >= 0) pc.matrix[i][j] = edge_cert.cuts[c].matrix[ri][rj];
        }
    }
    for (const auto& [cut_idx, right_end] : assigned)
      if (cut_idx == static_cast<int>(c)) pc.matrix[row_of[right_end]][row_of[right_end]] += 1.0;
  }
  return cert;
}

namespace {

// Shared scaffolding for the two product orientations: fills a PerCut given
// the product involution and an entry rule over (row item, col item).
ConvexityCertificate::PerCut make_product_cut(
    const PsiGraph& product, const std::vector<int>& involution,
    const std::vector<int>& right_items,
    const std::function<double(int, int)>& entry) {
  ConvexityCertificate::PerCut pc;
  pc.cut.involution = involution;
  for (int i = 0; i < static_cast<int>(product.edges.size()); ++i)
    if (involution[product.edges[i].u] == product.edges[i].v) pc.cut.cut_edges.push_back(i);
  int count = 0;
  // Recompute sides from scratch; callers guarantee a genuine reflecting cut.
  {
    std::vector<char> removed(product.edges.size(), 0);
    for (int e : pc.cut.cut_edges) removed[e] = 1;
    const int n = product.vertex_count();
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < static_cast<int>(product.edges.size()); ++i) {
      if (removed[i]) continue;
      adj[product.edges[i].u].push_back(product.edges[i].v);
      adj[product.edges[i].v].push_back(product.edges[i].u);
    }
    pc.cut.side.assign(n, -1);
    for (int s = 0; s < n; ++s) {
      if (pc.cut.side[s] != -1) continue;
      pc.cut.side[s] = count;
      std::queue<int> queue;
      queue.push(s);
      while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        for (int w : adj[v])
          if (pc.cut.side[w] == -1) {
            pc.cut.side[w] = count;
            queue.push(w);
          }
      }
      ++count;
    }
  }
  pc.right_items = right_items;
  const std::size_t m = right_items.size();
  pc.matrix.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) pc.matrix[i][j] = entry(right_items[i], right_items[j]);
  return pc;
}

}  // namespace

ConvexityCertificate certificate_for_product(const PsiGraph& g1,
                                             const ConvexityCertificate& cert1,
                                             const PsiGraph& g2,
                                             const ConvexityCertificate& vertex_cert2) {
  if (cert1.kind != ConvexityCertificate::Kind::edge ||
      vertex_cert2.kind != ConvexityCertificate::Kind::vertex)
    throw std::invalid_argument("certificate_for_product: expected edge cert for g1, vertex cert for g2");
  const PsiGraph product = cartesian_product(g1, g2);
  const int n1 = g1.vertex_count(), n2 = g2.vertex_count();

  ConvexityCertificate cert;
  cert.kind = ConvexityCertificate::Kind::edge;
  cert.label = cert1.label;

  // Product edge ids follow the cartesian_product layout: (e1, v2) -> e1*n2 + v2.
  const std::vector<int> label_edges1 = edges_with_label(g1, cert1.label);

  for (const auto& pc1 : cert1.cuts) {
    std::vector<int> involution(static_cast<std::size_t>(n1) * n2);
    for (int v1 = 0; v1 < n1; ++v1)
      for (int v2 = 0; v2 < n2; ++v2)
        involution[v1 * n2 + v2] = pc1.cut.involution[v1] * n2 + v2;
    std::vector<int> rows(g1.edges.size(), -1);
    for (std::size_t r = 0; r < pc1.right_items.size(); ++r) rows[pc1.right_items[r]] = static_cast<int>(r);
    std::vector<int> right;
    for (int e : pc1.right_items)
      for (int v2 = 0; v2 < n2; ++v2) right.push_back(e * n2 + v2);
    std::sort(right.begin(), right.end());
    auto entry = [&](int a, int b) {
      return pc1.matrix[rows[a / n2]][rows[b / n2]];
    };
    cert.cuts.push_back(make_product_cut(product, involution, right, entry));
  }

  for (const auto& pcv : vertex_cert2.cuts) {
    std::vector<int> involution(static_cast<std::size_t>(n1) * n2);
    for (int v1 = 0; v1 < n1; ++v1)
      for (int v2 = 0; v2 < n2; ++v2)
        involution[v1 * n2 + v2] = v1 * n2 + pcv.cut.involution[v2];
    std::vector<int> rows(n2, -1);
    for (std::size_t r = 0; r < pcv.right_items.size(); ++r) rows[pcv.right_items[r]] = static_cast<int>(r);
    std::vector<int> right;
    for (int e : label_edges1)
      for (int v2 : pcv.right_items) right.push_back(e * n2 + v2);
    std::sort(right.begin(), right.end());
    auto entry = [&](int a, int b) {
      if (a / n2 != b / n2) return 0.0;  // vertex cuts weight equal g1 edges only
      return pcv.matrix[rows[a % n2]][rows[b % n2]];
    };
    cert.cuts.push_back(make_product_cut(product, involution, right, entry));
  }
  return cert;
}

ConvexityCertificate certificate_for_product_right(const PsiGraph& g1,
                                                   const ConvexityCertificate& vertex_cert1,
                                                   const PsiGraph& g2,
                                                   const ConvexityCertificate& cert2) {
  if (vertex_cert1.kind != ConvexityCertificate::Kind::vertex ||
      cert2.kind != ConvexityCertificate::Kind::edge)
    throw std::invalid_argument("certificate_for_product_right: expected vertex cert for g1, edge cert for g2");
  const PsiGraph product = cartesian_product(g1, g2);
  const int n1 = g1.vertex_count(), n2 = g2.vertex_count();
  const int e1_block = static_cast<int>(g1.edges.size()) * n2;

  ConvexityCertificate cert;
  cert.kind = ConvexityCertificate::Kind::edge;
  cert.label = cert2.label + g1.party_count;

  // g2-side product edge ids: (e2, v1) -> e1_block + e2*n1 + v1.
  const std::vector<int> label_edges2 = edges_with_label(g2, cert2.label);

  for (const auto& pc2 : cert2.cuts) {
    std::vector<int> involution(static_cast<std::size_t>(n1) * n2);
    for (int v1 = 0; v1 < n1; ++v1)
      for (int v2 = 0; v2 < n2; ++v2)
        involution[v1 * n2 + v2] = v1 * n2 + pc2.cut.involution[v2];
    std::vector<int> rows(g2.edges.size(), -1);
    for (std::size_t r = 0; r < pc2.right_items.size(); ++r) rows[pc2.right_items[r]] = static_cast<int>(r);
    std::vector<int> right;
    for (int e : pc2.right_items)
      for (int v1 = 0; v1 < n1; ++v1) right.push_back(e1_block + e * n1 + v1);
    std::sort(right.begin(), right.end());
    auto entry = [&](int a, int b) {
      return pc2.matrix[rows[(a - e1_block) / n1]][rows[(b - e1_block) / n1]];
    };
    cert.cuts.push_back(make_product_cut(product, involution, right, entry));
  }

  for (const auto& pcv : vertex_cert1.cuts) {
    std::vector<int> involution(static_cast<std::size_t>(n1) * n2);
    for (int v1 = 0; v1 < n1; ++v1)
      for (int v2 = 0; v2 < n2; ++v2)
        involution[v1 * n2 + v2] = pcv.cut.involution[v1] * n2 + v2;
    std::vector<int> rows(n1, -1);
    for (std::size_t r = 0; r < pcv.right_items.size(); ++r) rows[pcv.right_items[r]] = static_cast<int>(r);
    std::vector<int> right;
    for (int e : label_edges2)
      for (int v1 : pcv.right_items) right.push_back(e1_block + e * n1 + v1);
    std::sort(right.begin(), right.end());
    auto entry = [&](int a, int b) {
      if ((a - e1_block) / n1 != (b - e1_block) / n1) return 0.0;
      return pcv.matrix[rows[(a - e1_block) % n1]][rows[(b - e1_block) % n1]];
    };
    cert.cuts.push_back(make_product_cut(product, involution, right, entry));
  }
  return cert;
}

namespace {

ConvexityCertificate hypercube_certificate(int q, bool symmetric) {
  if (q < 2) throw std::invalid_argument("hypercube certificate needs q >= 2");
  const PsiGraph g = build_hypercube(q);
  const LabelAdjacency adj = label_adjacency(g);
  ConvexityCertificate cert;
  cert.kind = ConvexityCertificate::Kind::edge;
  cert.label = 0;

  // Label-0 edge of base vertex x (bit 0 clear); bases ascend with edge id.
  std::vector<int> base_of(g.edges.size(), -1);
  std::vector<int> label_edges = edges_with_label(g, 0);
  for (int e : label_edges) base_of[e] = std::min(g.edges[e].u, g.edges[e].v);

  for (int j = 1; j < q; ++j) {
    ConvexityCertificate::PerCut pc;
    const int n = g.vertex_count();
    pc.cut.involution.resize(n);
    for (int x = 0; x < n; ++x) pc.cut.involution[x] = x ^ (1 << j);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
      if (g.edges[e].label == j) pc.cut.cut_edges.push_back(e);
    pc.cut.side.resize(n);
    for (int x = 0; x < n; ++x) pc.cut.side[x] = x >> j & 1;
    for (int e : label_edges)
      if (base_of[e] >> j & 1) pc.right_items.push_back(e);
    const std::size_t m = pc.right_items.size();
    pc.matrix.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        const int x = base_of[pc.right_items[a]], y = base_of[pc.right_items[b]];
        if (symmetric) {
          const int h = __builtin_popcount(static_cast<unsigned>(x ^ y));
          pc.matrix[a][b] = 1.0 / (1 + h);
        } else {
          // Product form: identity on coordinates below j, uniform above.
          const int low_mask = (1 << j) - 2;  // bits 1..j-1
          pc.matrix[a][b] = ((x ^ y) & low_mask) == 0 ? 1.0 : 0.0;
        }
      }
    cert.cuts.push_back(std::move(pc));
  }
  return cert;
}

}  // namespace

ConvexityCertificate hypercube_certificate_product_form(int q) {
  return hypercube_certificate(q, false);
}

ConvexityCertificate hypercube_certificate_symmetric(int q) {
  return hypercube_certificate(q, true);
}

}  // namespace psig
