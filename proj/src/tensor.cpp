#include "psig/tensor.hpp"

#include "psig/reflect.hpp"
#include "psig/rng.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace psig {

namespace {

using RowMajorXcd =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Axis permutation of a flat row-major tensor; order[t] = old axis at new
// position t.  Walks the output linearly and the input by strides.
Eigen::VectorXcd permute_flat(const Eigen::VectorXcd& data, const std::vector<int>& dims,
                              const std::vector<int>& order) {
  const int k = static_cast<int>(dims.size());
  std::vector<std::size_t> old_stride(k, 1);
  for (int i = k - 2; i >= 0; --i) old_stride[i] = old_stride[i + 1] * dims[i + 1];
  std::vector<int> new_dims(k);
  std::vector<std::size_t> stride(k);
  for (int t = 0; t < k; ++t) {
    new_dims[t] = dims[order[t]];
    stride[t] = old_stride[order[t]];
  }
  Eigen::VectorXcd out(data.size());
  std::vector<int> idx(k, 0);
  std::size_t src = 0;
  for (Eigen::Index n = 0; n < data.size(); ++n) {
    out(n) = data(src);
    for (int t = k - 1; t >= 0; --t) {
      if (++idx[t] < new_dims[t]) {
        src += stride[t];
        break;
      }
      idx[t] = 0;
      src -= stride[t] * (new_dims[t] - 1);
    }
  }
  return out;
}

std::vector<int> erase_axes(const std::vector<int>& v, int i, int j) {
  std::vector<int> out;
  for (int t = 0; t < static_cast<int>(v.size()); ++t)
    if (t != i && t != j) out.push_back(v[t]);
  return out;
}

// Contracts every bond that appears twice within the node itself.
NetworkNode resolve_self_traces(NetworkNode node) {
  for (;;) {
    int i = -1, j = -1;
    for (int a = 0; a < static_cast<int>(node.bonds.size()) && i < 0; ++a)
      for (int b = a + 1; b < static_cast<int>(node.bonds.size()) && i < 0; ++b)
        if (node.bonds[a] == node.bonds[b]) {
          i = a;
          j = b;
        }
    if (i < 0) return node;
    if (node.dims[i] != node.dims[j])
      throw std::runtime_error("self-traced bond has mismatched dimensions");
    std::vector<int> order;
    for (int t = 0; t < static_cast<int>(node.bonds.size()); ++t)
      if (t != i && t != j) order.push_back(t);
    order.push_back(i);
    order.push_back(j);
    const Eigen::VectorXcd tmp = permute_flat(node.data, node.dims, order);
    const int d = node.dims[i];
    const std::size_t rest = static_cast<std::size_t>(tmp.size()) / (static_cast<std::size_t>(d) * d);
    Eigen::VectorXcd traced(rest);
    for (std::size_t r = 0; r < rest; ++r) {
      std::complex<double> acc = 0.0;
      for (int x = 0; x < d; ++x) acc += tmp(r * d * d + static_cast<std::size_t>(x) * d + x);
      traced(r) = acc;
    }
    node.bonds = erase_axes(node.bonds, i, j);
    node.dims = erase_axes(node.dims, i, j);
    node.data = std::move(traced);
  }
}

NetworkNode contract_pair(const NetworkNode& a, const NetworkNode& b) {
  std::vector<int> shared;
  for (int x : a.bonds)
    if (std::find(b.bonds.begin(), b.bonds.end(), x) != b.bonds.end()) shared.push_back(x);
  std::sort(shared.begin(), shared.end());

  auto split = [&shared](const NetworkNode& n, bool shared_first) {
    std::vector<int> order, free_axes;
    std::vector<int> shared_axes;
    for (int id : shared) {
      const auto it = std::find(n.bonds.begin(), n.bonds.end(), id);
      shared_axes.push_back(static_cast<int>(it - n.bonds.begin()));
    }
    for (int t = 0; t < static_cast<int>(n.bonds.size()); ++t)
      if (std::find(shared_axes.begin(), shared_axes.end(), t) == shared_axes.end())
        free_axes.push_back(t);
    if (shared_first) {
      order = shared_axes;
      order.insert(order.end(), free_axes.begin(), free_axes.end());
    } else {
      order = free_axes;
      order.insert(order.end(), shared_axes.begin(), shared_axes.end());
    }
    return std::make_pair(order, free_axes);
  };

  const auto [order_a, free_a] = split(a, false);
  const auto [order_b, free_b] = split(b, true);
  std::size_t shared_size = 1, rows = 1, cols = 1;
  for (std::size_t t = 0; t < shared.size(); ++t) {
    const int da = a.dims[order_a[free_a.size() + t]];
    const int db = b.dims[order_b[t]];
    if (da != db) throw std::runtime_error("bond dimension mismatch between nodes");
    shared_size *= static_cast<std::size_t>(da);
  }
  for (int t : free_a) rows *= static_cast<std::size_t>(a.dims[t]);
  for (int t : free_b) cols *= static_cast<std::size_t>(b.dims[t]);

  const Eigen::VectorXcd da = permute_flat(a.data, a.dims, order_a);
  const Eigen::VectorXcd db = permute_flat(b.data, b.dims, order_b);
  Eigen::Map<const RowMajorXcd> ma(da.data(), rows, shared_size);
  Eigen::Map<const RowMajorXcd> mb(db.data(), shared_size, cols);
  RowMajorXcd mc = ma * mb;

  NetworkNode out;
  for (int t : free_a) {
    out.bonds.push_back(a.bonds[t]);
    out.dims.push_back(a.dims[t]);
  }
  for (int t : free_b) {
    out.bonds.push_back(b.bonds[t]);
    out.dims.push_back(b.dims[t]);
  }
  out.data = Eigen::Map<const Eigen::VectorXcd>(mc.data(), mc.size());
  return out;
}

std::size_t entries(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

}  // namespace

std::size_t total_dim(const std::vector<int>& dims) { return entries(dims); }

void check_state(const PureState& s) {
  for (int d : s.dims)
    if (d < 1) throw std::invalid_argument("state dimensions must be positive");
  if (static_cast<std::size_t>(s.amps.size()) != entries(s.dims))
    throw std::invalid_argument("amplitude count does not match the dimension product");
}

PureState normalized(PureState s) {
  const double n = s.amps.norm();
  if (n <= 0.0) throw std::invalid_argument("cannot normalize the zero state");
  s.amps /= n;
  return s;
}

PureState permute_parties(const PureState& s, const std::vector<int>& order) {
  check_state(s);
  if (order.size() != s.dims.size())
    throw std::invalid_argument("permutation size does not match party count");
  std::vector<char> seen(order.size(), 0);
  for (int o : order) {
    if (o < 0 || o >= static_cast<int>(order.size()) || seen[o])
      throw std::invalid_argument("invalid party permutation");
    seen[o] = 1;
  }
  PureState out;
  for (int o : order) out.dims.push_back(s.dims[o]);
  out.amps = permute_flat(s.amps, s.dims, order);
  return out;
}

PureState apply_local(const PureState& s, int party, const Eigen::MatrixXcd& m) {
  check_state(s);
  if (party < 0 || party >= s.party_count())
    throw std::invalid_argument("apply_local: party out of range");
  if (m.cols() != s.dims[party])
    throw std::invalid_argument("apply_local: operator shape does not match the party");
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < party; ++a) outer *= static_cast<std::size_t>(s.dims[a]);
  for (int a = party + 1; a < s.party_count(); ++a) inner *= static_cast<std::size_t>(s.dims[a]);
  const int d = s.dims[party];
  const int r = static_cast<int>(m.rows());

  PureState out;
  out.dims = s.dims;
  out.dims[party] = r;
  out.amps.resize(static_cast<Eigen::Index>(outer * r * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    Eigen::Map<const RowMajorXcd> block(s.amps.data() + o * d * inner, d, inner);
    Eigen::Map<RowMajorXcd> target(out.amps.data() + o * r * inner, r, inner);
    target = m * block;
  }
  return out;
}

PureState random_state_vector(const std::vector<int>& dims, std::mt19937_64& rng) {
  PureState s;
  s.dims = dims;
  s.amps = random_state_vector(static_cast<int>(total_dim(dims)), rng);
  check_state(s);
  return s;
}

Eigen::MatrixXcd reduced_density(const PureState& s, const std::vector<int>& keep) {
  check_state(s);
  std::vector<char> kept(s.dims.size(), 0);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= s.party_count())
      throw std::invalid_argument("reduced_density: party out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("reduced_density: keep list must be strictly ascending");
    kept[keep[i]] = 1;
  }
  std::vector<int> order(keep);
  for (int a = 0; a < s.party_count(); ++a)
    if (!kept[a]) order.push_back(a);
  const PureState p = permute_parties(s, order);
  std::size_t dk = 1;
  for (int a : keep) dk *= static_cast<std::size_t>(s.dims[a]);
  const std::size_t dr = entries(s.dims) / dk;
  Eigen::Map<const RowMajorXcd> w(p.amps.data(), dk, dr);
  return w * w.adjoint();
}

Eigen::MatrixXcd partial_trace(const PureState& s, int party) {
  if (party < 0 || party >= s.party_count())
    throw std::invalid_argument("partial_trace: party out of range");
  std::vector<int> keep;
  for (int a = 0; a < s.party_count(); ++a)
    if (a != party) keep.push_back(a);
  return reduced_density(s, keep);
}

PureState purify(const Eigen::MatrixXcd& rho, const std::vector<int>& dims, int ancilla_dim) {
  const std::size_t d = entries(dims);
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != d)
    throw std::invalid_argument("purify: density size does not match the dimensions");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (rho + rho.adjoint()));
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > 1e-12) ++rank;
  rank = std::max(rank, 1);
  const int anc = ancilla_dim == 0 ? rank : ancilla_dim;
  if (anc < rank) throw std::invalid_argument("purify: ancilla dimension below the rank");

  PureState out;
  out.dims = dims;
  out.dims.push_back(anc);
  out.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * anc);
  for (int j = 0; j < rank; ++j) {
    const Eigen::Index col = eig.eigenvalues().size() - 1 - j;  // descending order
    const double lambda = std::max(eig.eigenvalues()(col), 0.0);
    const double w = std::sqrt(lambda);
    for (std::size_t r = 0; r < d; ++r)
      out.amps(static_cast<Eigen::Index>(r) * anc + j) = w * eig.eigenvectors()(r, col);
  }
  return out;
}

ContractionPlan plan_contraction(std::vector<NodeShape> shapes, std::size_t max_entries) {
  if (shapes.empty()) throw std::invalid_argument("plan_contraction: empty network");
  ContractionPlan plan;

  // Self-traced bonds disappear before any pairing decision.
  for (auto& s : shapes) {
    plan.peak_entries = std::max(plan.peak_entries, entries(s.dims));
    for (std::size_t a = 0; a < s.bonds.size(); ++a)
      for (std::size_t b = a + 1; b < s.bonds.size(); ++b)
        if (s.bonds[a] == s.bonds[b]) {
          s.bonds = erase_axes(s.bonds, static_cast<int>(a), static_cast<int>(b));
          s.dims = erase_axes(s.dims, static_cast<int>(a), static_cast<int>(b));
          a = static_cast<std::size_t>(-1);  // restart the scan
          break;
        }
  }
  if (plan.peak_entries > max_entries)
    throw std::runtime_error("contraction exceeds the entry cap");

  std::vector<char> alive(shapes.size(), 1);
  int remaining = static_cast<int>(shapes.size());
  while (remaining > 1) {
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::size_t best_size = kNone;
    int best_bond = std::numeric_limits<int>::max();
    int best_a = -1, best_b = -1;
    bool best_shares = false;
    for (int a = 0; a < static_cast<int>(shapes.size()); ++a) {
      if (!alive[a]) continue;
      for (int b = a + 1; b < static_cast<int>(shapes.size()); ++b) {
        if (!alive[b]) continue;
        int min_shared = std::numeric_limits<int>::max();
        std::size_t size = 1;
        for (std::size_t t = 0; t < shapes[a].bonds.size(); ++t) {
          const int id = shapes[a].bonds[t];
          if (std::find(shapes[b].bonds.begin(), shapes[b].bonds.end(), id) !=
              shapes[b].bonds.end())
            min_shared = std::min(min_shared, id);
          else
            size *= static_cast<std::size_t>(shapes[a].dims[t]);
        }
        for (std::size_t t = 0; t < shapes[b].bonds.size(); ++t)
          if (std::find(shapes[a].bonds.begin(), shapes[a].bonds.end(), shapes[b].bonds[t]) ==
              shapes[a].bonds.end())
            size *= static_cast<std::size_t>(shapes[b].dims[t]);
        const bool shares = min_shared != std::numeric_limits<int>::max();
        if (best_shares && !shares) continue;
        const bool better = (shares && !best_shares) || size < best_size ||
                            (size == best_size && min_shared < best_bond);
        if (better) {
          best_size = size;
          best_bond = min_shared;
          best_a = a;
          best_b = b;
          best_shares = shares;
        }
      }
    }
    plan.steps.push_back({best_a, best_b});
    plan.peak_entries = std::max(plan.peak_entries, best_size);
    if (plan.peak_entries > max_entries)
      throw std::runtime_error("contraction exceeds the entry cap");

    NodeShape merged;
    for (std::size_t t = 0; t < shapes[best_a].bonds.size(); ++t)
      if (std::find(shapes[best_b].bonds.begin(), shapes[best_b].bonds.end(),
                    shapes[best_a].bonds[t]) == shapes[best_b].bonds.end()) {
        merged.bonds.push_back(shapes[best_a].bonds[t]);
        merged.dims.push_back(shapes[best_a].dims[t]);
      }
    for (std::size_t t = 0; t < shapes[best_b].bonds.size(); ++t)
      if (std::find(shapes[best_a].bonds.begin(), shapes[best_a].bonds.end(),
                    shapes[best_b].bonds[t]) == shapes[best_a].bonds.end()) {
        merged.bonds.push_back(shapes[best_b].bonds[t]);
        merged.dims.push_back(shapes[best_b].dims[t]);
      }
    shapes[best_a] = std::move(merged);
    alive[best_b] = 0;
    --remaining;
  }
  return plan;
}

std::complex<double> contract_network(std::vector<NetworkNode> nodes, std::size_t max_entries) {
  if (nodes.empty()) throw std::invalid_argument("contract_network: empty network");
  std::vector<NodeShape> shapes;
  shapes.reserve(nodes.size());
  for (const auto& n : nodes) {
    if (n.bonds.size() != n.dims.size() ||
        static_cast<std::size_t>(n.data.size()) != entries(n.dims))
      throw std::invalid_argument("contract_network: inconsistent node shape");
    shapes.push_back({n.bonds, n.dims});
  }
  const ContractionPlan plan = plan_contraction(std::move(shapes), max_entries);
  for (auto& n : nodes) n = resolve_self_traces(std::move(n));
  for (const ContractionStep& step : plan.steps) {
    nodes[step.a] = resolve_self_traces(contract_pair(nodes[step.a], nodes[step.b]));
    nodes[step.b] = NetworkNode{};
  }
  for (const auto& n : nodes)
    if (n.data.size() > 0) {
      if (!n.bonds.empty()) throw std::runtime_error("network did not close to a scalar");
      return n.data(0);
    }
  throw std::runtime_error("network did not close to a scalar");
}

std::complex<double> evaluate_invariant(const PsiGraph& g, const PureState& psi) {
  check_state(psi);
  if (psi.party_count() != g.party_count)
    throw std::invalid_argument("evaluate_invariant: state and graph party counts differ");
  const LabelAdjacency adj = label_adjacency(g);
  std::vector<NetworkNode> nodes(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    NetworkNode& node = nodes[v];
    for (int a = 0; a < g.party_count; ++a) {
      node.bonds.push_back(adj.edge(v, a));
      node.dims.push_back(psi.dims[a]);
    }
    node.data = g.parity[v] == Parity::ket ? psi.amps : psi.amps.conjugate();
  }
  return contract_network(std::move(nodes));
}

double evaluate_invariant_real(const PsiGraph& g, const PureState& psi) {
  if (!has_parity_flip_symmetry(g))
    throw std::invalid_argument(
        "evaluate_invariant_real: graph has no parity-flipping symmetry");
  const std::complex<double> z = evaluate_invariant(g, psi);
  if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z)))
    throw std::runtime_error("invariant has a non-negligible imaginary part");
  return z.real();
}

std::complex<double> evaluate_on_density(const PsiGraph& g, PartyLabel label,
                                         const std::vector<int>& dims,
                                         const Eigen::MatrixXcd& rho) {
  if (static_cast<int>(dims.size()) != g.party_count)
    throw std::invalid_argument("evaluate_on_density: dimension list does not match parties");
  if (label < 0 || label >= g.party_count)
    throw std::invalid_argument("evaluate_on_density: label out of range");
  std::size_t side = 1;
  for (int a = 0; a < g.party_count; ++a)
    if (a != label) side *= static_cast<std::size_t>(dims[a]);
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != side)
    throw std::invalid_argument("evaluate_on_density: density size mismatch");
  const LabelAdjacency adj = label_adjacency(g);

  Eigen::VectorXcd flat(static_cast<Eigen::Index>(side) * static_cast<Eigen::Index>(side));
  Eigen::Map<RowMajorXcd>(flat.data(), side, side) = rho;

  std::vector<NetworkNode> nodes;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (g.edges[e].label != label) continue;
    int u = g.edges[e].u, v = g.edges[e].v;
    if (g.parity[u] == Parity::bra) std::swap(u, v);
    if (g.parity[u] != Parity::ket || g.parity[v] != Parity::bra)
      throw std::invalid_argument("evaluate_on_density: label edge must join a ket and a bra");
    NetworkNode node;
    for (int a = 0; a < g.party_count; ++a) {
      if (a == label) continue;
      node.bonds.push_back(adj.edge(u, a));
      node.dims.push_back(dims[a]);
    }
    for (int a = 0; a < g.party_count; ++a) {
      if (a == label) continue;
      node.bonds.push_back(adj.edge(v, a));
      node.dims.push_back(dims[a]);
    }
    node.data = flat;
    nodes.push_back(std::move(node));
  }
  return contract_network(std::move(nodes));
}

ProbeResult convexity_probe_fn(int dim,
                               const std::function<double(const Eigen::MatrixXcd&)>& f,
                               int trials, std::uint64_t seed) {
  ProbeResult result;
  result.min_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Eigen::MatrixXcd a = random_density(dim, rng);
    const Eigen::MatrixXcd b = random_density(dim, rng);
    const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double margin = w * f(a) + (1.0 - w) * f(b) - f(w * a + (1.0 - w) * b);
    if (margin < result.min_margin) {
      result.min_margin = margin;
      result.argmin = t;
    }
  }
  return result;
}

ProbeResult convexity_probe(const PsiGraph& g, PartyLabel label, int local_dim, int trials,
                            std::uint64_t seed) {
  if (local_dim < 1) throw std::invalid_argument("convexity_probe: bad local dimension");
  std::vector<int> dims(g.party_count, local_dim);
  std::size_t side = 1;
  for (int a = 0; a < g.party_count; ++a)
    if (a != label) side *= static_cast<std::size_t>(local_dim);
  auto f = [&](const Eigen::MatrixXcd& rho) {
    return evaluate_on_density(g, label, dims, rho).real();
  };
  return convexity_probe_fn(static_cast<int>(side), f, trials, seed);
}

}  // namespace psig
