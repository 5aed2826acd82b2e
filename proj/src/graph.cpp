#include "psig/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace psig {

int PsiGraph::ket_count() const {
  int n = 0;
  for (Parity p : parity)
    if (p == Parity::ket) ++n;
  return n;
}

bool PsiGraph::is_simple() const {
  std::vector<std::pair<int, int>> seen;
  seen.reserve(edges.size());
  for (const Edge& e : edges)
    seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

LabelAdjacency label_adjacency(const PsiGraph& g) {
  const int n = g.vertex_count();
  const int q = g.party_count;
  LabelAdjacency adj;
  adj.q = q;
  adj.edge_id.assign(static_cast<std::size_t>(n) * q, -1);
  adj.neighbor.assign(static_cast<std::size_t>(n) * q, -1);
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const Edge& e = g.edges[i];
    if (e.label < 0 || e.label >= q || e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("label_adjacency: edge endpoint or label out of range");
    for (int end = 0; end < 2; ++end) {
      const int a = end == 0 ? e.u : e.v;
      const int b = end == 0 ? e.v : e.u;
      int& slot = adj.edge_id[static_cast<std::size_t>(a) * q + e.label];
      if (slot != -1)
        throw std::invalid_argument("label_adjacency: graph is not color-regular");
      slot = i;
      adj.neighbor[static_cast<std::size_t>(a) * q + e.label] = b;
    }
  }
  for (int v = 0; v < n; ++v)
    for (int a = 0; a < q; ++a)
      if (adj.edge(v, a) == -1)
        throw std::invalid_argument("label_adjacency: graph is not color-regular");
  return adj;
}

bool ValidationReport::ok() const {
  for (const ValidationCheck& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const ValidationCheck& c : checks) {
    out << (c.passed ? "pass" : "FAIL") << "  " << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
  }
  return out.str();
}

namespace {

// Keeps offender lists in reports short.
std::string list_prefix(const std::vector<std::string>& items, std::size_t cap = 6) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size() && i < cap; ++i) {
    if (i) out << ", ";
    out << items[i];
  }
  if (items.size() > cap) out << ", ... (" << items.size() << " total)";
  return out.str();
}

}  // namespace

ValidationReport validate(const PsiGraph& g) {
  ValidationReport rep;
  const int n = g.vertex_count();
  const int q = g.party_count;

  std::vector<std::string> bad;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const Edge& e = g.edges[i];
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      bad.push_back("edge " + std::to_string(i));
  }
  const bool endpoints_ok = bad.empty();
  rep.checks.push_back({"edge-endpoints", endpoints_ok, list_prefix(bad)});

  bad.clear();
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (g.edges[i].label < 0 || g.edges[i].label >= q)
      bad.push_back("edge " + std::to_string(i));
  rep.checks.push_back({"label-range", bad.empty(), list_prefix(bad)});

  if (!rep.ok()) {
    // Degree/parity/connectivity are meaningless with broken indices.
    rep.checks.push_back({"color-regular", false, "skipped: malformed edges"});
    rep.checks.push_back({"parity-bipartite", false, "skipped: malformed edges"});
    rep.checks.push_back({"connected", false, "skipped: malformed edges"});
    rep.checks.push_back({"ket-bra-balance", false, "skipped: malformed edges"});
    return rep;
  }

  // Color-regular: exactly one incident edge per (vertex, label).
  bad.clear();
  std::vector<int> count(static_cast<std::size_t>(n) * q, 0);
  for (const Edge& e : g.edges) {
    ++count[static_cast<std::size_t>(e.u) * q + e.label];
    ++count[static_cast<std::size_t>(e.v) * q + e.label];
  }
  for (int v = 0; v < n; ++v)
    for (int a = 0; a < q; ++a)
      if (count[static_cast<std::size_t>(v) * q + a] != 1)
        bad.push_back("vertex " + std::to_string(v) + " label " + std::to_string(a) +
                      " degree " + std::to_string(count[static_cast<std::size_t>(v) * q + a]));
  rep.checks.push_back({"color-regular", bad.empty(), list_prefix(bad)});

  bad.clear();
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (g.parity[g.edges[i].u] == g.parity[g.edges[i].v])
      bad.push_back("edge " + std::to_string(i));
  rep.checks.push_back({"parity-bipartite", bad.empty(), list_prefix(bad)});

  std::vector<int> dist = n > 0 ? bfs_distances(g, 0) : std::vector<int>{};
  bad.clear();
  for (int v = 0; v < n; ++v)
    if (dist[v] < 0) bad.push_back("vertex " + std::to_string(v));
  rep.checks.push_back({"connected", bad.empty(), list_prefix(bad)});

  const int kets = g.ket_count();
  const int bras = n - kets;
  rep.checks.push_back({"ket-bra-balance", kets == bras,
                        kets == bras ? "" : std::to_string(kets) + " kets vs " +
                                                std::to_string(bras) + " bras"});
  return rep;
}

PsiGraph build_cycle(int n, bool merge_parties) {
  if (n < 1) throw std::invalid_argument("build_cycle: n must be >= 1");
  if (merge_parties && n != 1)
    throw std::invalid_argument("build_cycle: merge_parties only applies to n = 1");
  PsiGraph g;
  if (merge_parties) {
    g.party_count = 1;
    g.parity = {Parity::ket, Parity::bra};
    g.edges = {{0, 1, 0}};
    return g;
  }
  g.party_count = 2;
  g.parity.resize(2 * n);
  for (int v = 0; v < 2 * n; ++v) g.parity[v] = v % 2 == 0 ? Parity::ket : Parity::bra;
  for (int i = 0; i < 2 * n; ++i) g.edges.push_back({i, (i + 1) % (2 * n), i % 2 == 0 ? 0 : 1});
  return g;
}

PsiGraph build_hypercube(int q) {
  if (q < 1 || q > 20) throw std::invalid_argument("build_hypercube: q out of range");
  PsiGraph g;
  g.party_count = q;
  const int n = 1 << q;
  g.parity.resize(n);
  for (int x = 0; x < n; ++x)
    g.parity[x] = __builtin_popcount(static_cast<unsigned>(x)) % 2 == 0 ? Parity::ket
                                                                        : Parity::bra;
  for (int a = 0; a < q; ++a)
    for (int x = 0; x < n; ++x)
      if ((x >> a & 1) == 0) g.edges.push_back({x, x | 1 << a, a});
  return g;
}

PsiGraph cartesian_product(const PsiGraph& g1, const PsiGraph& g2) {
  PsiGraph g;
  const int n1 = g1.vertex_count(), n2 = g2.vertex_count();
  g.party_count = g1.party_count + g2.party_count;
  g.parity.resize(static_cast<std::size_t>(n1) * n2);
  for (int v1 = 0; v1 < n1; ++v1)
    for (int v2 = 0; v2 < n2; ++v2)
      g.parity[static_cast<std::size_t>(v1) * n2 + v2] =
          g1.parity[v1] == g2.parity[v2] ? Parity::ket : Parity::bra;
  for (const Edge& e : g1.edges)
    for (int v2 = 0; v2 < n2; ++v2)
      g.edges.push_back({e.u * n2 + v2, e.v * n2 + v2, e.label});
  for (const Edge& e : g2.edges)
    for (int v1 = 0; v1 < n1; ++v1)
      g.edges.push_back({v1 * n2 + e.u, v1 * n2 + e.v, e.label + g1.party_count});
  return g;
}

CoxeterMatrix CoxeterMatrix::dihedral(int n) {
  CoxeterMatrix c;
  c.m = {{1, n}, {n, 1}};
  return c;
}

CoxeterMatrix CoxeterMatrix::direct_sum(const CoxeterMatrix& a, const CoxeterMatrix& b) {
  const int qa = a.size(), qb = b.size();
  CoxeterMatrix c;
  c.m.assign(qa + qb, std::vector<int>(qa + qb, 2));
  for (int i = 0; i < qa; ++i)
    for (int j = 0; j < qa; ++j) c.m[i][j] = a.m[i][j];
  for (int i = 0; i < qb; ++i)
    for (int j = 0; j < qb; ++j) c.m[qa + i][qa + j] = b.m[i][j];
  return c;
}

namespace {

void check_coxeter_matrix(const CoxeterMatrix& c) {
  const int q = c.size();
  if (q < 1) throw std::invalid_argument("coxeter matrix is empty");
  for (int a = 0; a < q; ++a) {
    if (static_cast<int>(c.m[a].size()) != q)
      throw std::invalid_argument("coxeter matrix is not square");
    if (c.m[a][a] != 1) throw std::invalid_argument("coxeter matrix diagonal must be 1");
    for (int b = 0; b < q; ++b) {
      if (c.m[a][b] != c.m[b][a]) throw std::invalid_argument("coxeter matrix must be symmetric");
      if (a != b && c.m[a][b] == 1)
        throw std::invalid_argument("coxeter matrix off-diagonal must be >= 2 (or 0 for infinity)");
      if (c.m[a][b] < 0) throw std::invalid_argument("coxeter matrix entries must be >= 0");
    }
  }
}

}  // namespace

PsiGraph build_coxeter_cayley(const CoxeterMatrix& c, int max_elements) {
  check_coxeter_matrix(c);
  const int q = c.size();

  // Reflection representation: B(a,b) = -cos(pi / m[a][b]) with m = 0 read as
  // infinity, and generator a acting as v -> v - 2 B(alpha_a, v) alpha_a.
  Eigen::MatrixXd bilinear(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      bilinear(a, b) = c.m[a][b] == 0 ? -1.0 : -std::cos(M_PI / c.m[a][b]);
  std::vector<Eigen::MatrixXd> gen(q, Eigen::MatrixXd::Identity(q, q));
  for (int a = 0; a < q; ++a) gen[a].row(a) -= 2.0 * bilinear.row(a);

  constexpr double kDedupTol = 1e-9;
  std::vector<Eigen::MatrixXd> elements;
  std::vector<int> depth;
  // Coarse buckets on the first entry; the grid is far wider than the
  // dedup tolerance, so near-equal matrices can only land in adjacent keys.
  std::multimap<long long, int> buckets;
  auto key_of = [](const Eigen::MatrixXd& m) {
    return static_cast<long long>(std::llround(m(0, 0) * 1e6));
  };
  auto find_element = [&](const Eigen::MatrixXd& m) {
    const long long k = key_of(m);
    for (long long kk = k - 1; kk <= k + 1; ++kk) {
      auto [lo, hi] = buckets.equal_range(kk);
      for (auto it = lo; it != hi; ++it)
        if ((elements[it->second] - m).cwiseAbs().maxCoeff() < kDedupTol) return it->second;
    }
    return -1;
  };
  auto add_element = [&](const Eigen::MatrixXd& m, int d) {
    elements.push_back(m);
    depth.push_back(d);
    buckets.emplace(key_of(m), static_cast<int>(elements.size()) - 1);
    return static_cast<int>(elements.size()) - 1;
  };

  add_element(Eigen::MatrixXd::Identity(q, q), 0);
  std::vector<Edge> edges;
  std::queue<int> frontier;
  frontier.push(0);
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int a = 0; a < q; ++a) {
      const Eigen::MatrixXd next = gen[a] * elements[i];
      int j = find_element(next);
      if (j == -1) {
        if (static_cast<int>(elements.size()) >= max_elements)
          throw std::runtime_error("coxeter group too large or infinite");
        j = add_element(next, depth[i] + 1);
        frontier.push(j);
      }
      if (i < j) edges.push_back({i, j, a});
    }
  }

  PsiGraph g;
  g.party_count = q;
  g.parity.resize(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i)
    g.parity[i] = depth[i] % 2 == 0 ? Parity::ket : Parity::bra;
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.label, x.u, x.v) < std::tie(y.label, y.u, y.v);
  });
  g.edges = std::move(edges);
  return g;
}

std::vector<int> bfs_distances(const PsiGraph& g, int src) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> dist(n, -1);
  std::queue<int> queue;
  dist[src] = 0;
  queue.push(src);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push(w);
      }
  }
  return dist;
}

}  // namespace psig
