#include "psig/monotones.hpp"

#include "psig/reflect.hpp"
#include "psig/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace psig {

namespace {

// Tails become zero exactly at the rank; below this they are treated as zero
// when forming Ky Fan ratios.
constexpr double kTailFloor = 1e-14;

std::vector<double> descending_eigenvalues(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (rho + rho.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  std::vector<double> out(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    out[i] = std::max(eig.eigenvalues()(eig.eigenvalues().size() - 1 - i), 0.0);
  return out;
}

// Suffix sums: tail[k] = sum of all but the k largest values.
std::vector<double> kyfan_tails(const std::vector<double>& lambda) {
  std::vector<double> tail(lambda.size() + 1, 0.0);
  for (int k = static_cast<int>(lambda.size()) - 1; k >= 0; --k)
    tail[k] = tail[k + 1] + lambda[k];
  return tail;
}

}  // namespace

std::vector<double> schmidt_spectrum(const PureState& s, PartyLabel party_a) {
  return descending_eigenvalues(reduced_density(s, {party_a}));
}

double vidal_monotone(const PureState& s, PartyLabel party_a, int k) {
  if (k < 1) throw std::invalid_argument("vidal_monotone: k must be at least 1");
  const std::vector<double> lambda = schmidt_spectrum(s, party_a);
  double top = 0.0;
  for (int i = 0; i < k && i < static_cast<int>(lambda.size()); ++i) top += lambda[i];
  return std::clamp(1.0 - top, 0.0, 1.0);
}

KyFanCheck kyfan_crosscheck(const Eigen::MatrixXcd& rho, int k, int samples,
                            std::uint64_t seed) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("kyfan_crosscheck: not square");
  if (k < 1 || k > rho.rows()) throw std::invalid_argument("kyfan_crosscheck: k out of range");
  KyFanCheck check;
  const std::vector<double> lambda = descending_eigenvalues(rho);
  for (int i = 0; i < k; ++i) check.value += lambda[i];
  check.samples = samples;
  check.max_sampled = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Eigen::MatrixXcd v = haar_isometry(static_cast<int>(rho.rows()), k, rng);
    check.max_sampled = std::max(check.max_sampled, (v.adjoint() * rho * v).trace().real());
  }
  return check;
}

// --- monotone specifications ------------------------------------------------

namespace {

PsiGraph checked_monotone_graph(PsiGraph g) {
  const ValidationReport report = validate(g);
  if (!report.ok())
    throw std::invalid_argument("monotone graph fails validation: " + report.summary());
  if (!has_parity_flip_symmetry(g))
    throw std::invalid_argument("monotone graph has no parity-flipping symmetry");
  return g;
}

}  // namespace

MonotoneSpec vidal_spec(PartyLabel party_a, int k) {
  MonotoneSpec spec;
  spec.kind = MonotoneSpec::Kind::vidal;
  spec.party_a = party_a;
  spec.k = k;
  return spec;
}

MonotoneSpec graph_spec(PsiGraph g) {
  MonotoneSpec spec;
  spec.kind = MonotoneSpec::Kind::graph;
  spec.graph = checked_monotone_graph(std::move(g));
  spec.exponent_num = 1;
  spec.exponent_den = spec.graph.ket_count();
  spec.standard_exponent = true;
  return spec;
}

MonotoneSpec graph_spec_with_exponent(PsiGraph g, long num, long den) {
  if (num < 1 || den < 1) throw std::invalid_argument("exponent must be positive");
  MonotoneSpec spec;
  spec.kind = MonotoneSpec::Kind::graph;
  spec.graph = checked_monotone_graph(std::move(g));
  spec.exponent_num = num;
  spec.exponent_den = den;
  spec.standard_exponent = num == 1 && den == spec.graph.ket_count();
  return spec;
}

MonotoneSpec multi_renyi_spec(int q) {
  MonotoneSpec spec = graph_spec(build_hypercube(q));
  spec.kind = MonotoneSpec::Kind::multi_renyi;
  return spec;
}

MonotoneSpec cycle_family_spec(int n) {
  return graph_spec(cartesian_product(build_cycle(1, true), build_cycle(n)));
}

MonotoneSpec bl_spec(std::vector<int> ranks, int restarts, std::uint64_t seed) {
  MonotoneSpec spec;
  spec.kind = MonotoneSpec::Kind::bl;
  spec.ranks = std::move(ranks);
  spec.restarts = restarts;
  spec.seed = seed;
  return spec;
}

std::string MonotoneSpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::vidal:
      out << "vidal(party=" << party_a << ", k=" << k << ")";
      break;
    case Kind::graph:
    case Kind::multi_renyi:
      out << (kind == Kind::graph ? "graph" : "multi-renyi") << "(parties="
          << graph.party_count << ", kets=" << graph.ket_count() << ", exponent="
          << exponent_num << "/" << exponent_den
          << (standard_exponent ? "" : ", nonstandard-exponent") << ")";
      break;
    case Kind::bl: {
      out << "bl(ranks=[";
      for (std::size_t i = 0; i < ranks.size(); ++i) out << (i ? "," : "") << ranks[i];
      out << "], restarts=" << restarts << ")";
      break;
    }
    case Kind::det:
      out << "det(" << ms.size() << " reference maps)";
      break;
  }
  return out.str();
}

double graph_monotone_with_exponent(const PsiGraph& g, const PureState& s, long num,
                                    long den) {
  if (num < 1 || den < 1) throw std::invalid_argument("exponent must be positive");
  double z = evaluate_invariant_real(g, s);
  if (z < -1e-9 || z > 1.0 + 1e-9)
    throw std::runtime_error("invariant out of [0,1] range on a normalized state");
  z = std::clamp(z, 0.0, 1.0);
  return 1.0 - std::pow(z, static_cast<double>(num) / static_cast<double>(den));
}

double graph_monotone(const PsiGraph& g, const PureState& s) {
  return graph_monotone_with_exponent(g, s, 1, g.ket_count());
}

double evaluate_monotone(const MonotoneSpec& spec, const PureState& s) {
  switch (spec.kind) {
    case MonotoneSpec::Kind::vidal:
      return vidal_monotone(s, spec.party_a, spec.k);
    case MonotoneSpec::Kind::graph:
    case MonotoneSpec::Kind::multi_renyi:
      return graph_monotone_with_exponent(spec.graph, s, spec.exponent_num,
                                          spec.exponent_den);
    case MonotoneSpec::Kind::bl:
      return bl_monotone(s, spec.ranks, spec.restarts, spec.seed).value;
    case MonotoneSpec::Kind::det:
      throw std::invalid_argument(
          "the determinant monotone has no absolute normalization; use det_ratio");
  }
  throw std::logic_error("unknown monotone kind");
}

// --- projector maximization ---------------------------------------------------

namespace {

struct SweepState {
  std::vector<Eigen::MatrixXcd> projectors;  // per party, d x d
};

// One party update: project every other party, then truncate this party's
// reduced density to its top-k eigenspace.  Returns the retained weight.
double update_party(const PureState& s, const std::vector<int>& ranks, int a,
                    SweepState& sw) {
  PureState cond = s;
  for (int b = 0; b < s.party_count(); ++b)
    if (b != a) cond = apply_local(cond, b, sw.projectors[b]);
  const Eigen::MatrixXcd rho = reduced_density(cond, {a});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  const int d = s.dims[a];
  const Eigen::MatrixXcd top = eig.eigenvectors().rightCols(ranks[a]);
  sw.projectors[a] = top * top.adjoint();
  double kept = 0.0;
  for (int i = 0; i < ranks[a]; ++i) kept += std::max(eig.eigenvalues()(d - 1 - i), 0.0);
  return kept;
}

void check_ranks(const PureState& s, const std::vector<int>& ranks) {
  if (static_cast<int>(ranks.size()) != s.party_count())
    throw std::invalid_argument("one rank per party required");
  for (int a = 0; a < s.party_count(); ++a)
    if (ranks[a] < 1 || ranks[a] > s.dims[a])
      throw std::invalid_argument("rank out of range for party " + std::to_string(a));
}

SweepState start_projectors(const PureState& s, const std::vector<int>& ranks,
                            int start_index, std::uint64_t seed) {
  SweepState sw;
  for (int a = 0; a < s.party_count(); ++a) {
    if (start_index == 0 || ranks[a] == s.dims[a]) {
      sw.projectors.push_back(Eigen::MatrixXcd::Identity(s.dims[a], s.dims[a]));
    } else {
      std::mt19937_64 rng(derive_seed(seed, (static_cast<std::uint64_t>(start_index) << 8) +
                                                static_cast<std::uint64_t>(a)));
      const Eigen::MatrixXcd v = haar_isometry(s.dims[a], ranks[a], rng);
      sw.projectors.push_back(v * v.adjoint());
    }
  }
  return sw;
}

}  // namespace

ProjectorMaxResult bl_inner_maximum(const PureState& s, const std::vector<int>& ranks,
                                    int restarts, std::uint64_t seed) {
  check_state(s);
  check_ranks(s, ranks);
  ProjectorMaxResult result;
  double best = -1.0, worst = std::numeric_limits<double>::infinity();
  for (int start = 0; start <= restarts; ++start) {
    SweepState sw = start_projectors(s, ranks, start, seed);
    double overlap = 0.0, prev = -1.0;
    int sweeps = 0;
    bool converged = false;
    while (sweeps < 500) {
      for (int a = 0; a < s.party_count(); ++a) overlap = update_party(s, ranks, a, sw);
      ++sweeps;
      if (overlap - prev < 1e-10) {
        converged = true;
        break;
      }
      prev = overlap;
    }
    result.converged = result.converged && converged;
    if (overlap > best) {
      best = overlap;
      result.sweeps = sweeps;
    }
    worst = std::min(worst, overlap);
  }
  result.value = best;
  result.restart_spread = best - worst;
  return result;
}

BlResult bl_monotone(const PureState& s, const std::vector<int>& ranks, int restarts,
                     std::uint64_t seed) {
  BlResult out;
  out.report = bl_inner_maximum(s, ranks, restarts, seed);
  out.value = std::clamp(1.0 - out.report.value, 0.0, 1.0);
  return out;
}

ProjectorMaxResult projector_maximize(const PsiGraph& g, long exponent_num,
                                      long exponent_den, const std::vector<int>& ranks,
                                      const PureState& s, int restarts,
                                      std::uint64_t seed) {
  check_state(s);
  check_ranks(s, ranks);
  if (!has_parity_flip_symmetry(g))
    throw std::invalid_argument("projector_maximize: graph invariant must be real");
  const double exponent =
      static_cast<double>(exponent_num) / static_cast<double>(exponent_den);
  auto objective = [&](const SweepState& sw) {
    PureState projected = s;
    for (int a = 0; a < s.party_count(); ++a)
      projected = apply_local(projected, a, sw.projectors[a]);
    const std::complex<double> z = evaluate_invariant(g, projected);
    return std::pow(std::max(z.real(), 0.0), exponent);
  };

  ProjectorMaxResult result;
  double best = -1.0, worst = std::numeric_limits<double>::infinity();
  for (int start = 0; start <= restarts; ++start) {
    SweepState sw = start_projectors(s, ranks, start, seed);
    double start_best = objective(sw);
    double prev = start_best;
    int sweeps = 0;
    bool converged = false;
    while (sweeps < 500) {
      for (int a = 0; a < s.party_count(); ++a) {
        update_party(s, ranks, a, sw);
        start_best = std::max(start_best, objective(sw));
      }
      ++sweeps;
      const double now = objective(sw);
      if (std::abs(now - prev) < 1e-10) {
        converged = true;
        break;
      }
      prev = now;
    }
    result.converged = result.converged && converged;
    if (start_best > best) {
      best = start_best;
      result.sweeps = sweeps;
    }
    worst = std::min(worst, start_best);
  }
  result.value = best;
  result.restart_spread = best - worst;
  return result;
}

// --- majorization / conversion ------------------------------------------------

namespace {

std::pair<std::vector<double>, std::vector<double>> tail_pair(const PureState& psi,
                                                              const PureState& phi,
                                                              PartyLabel party_a) {
  if (psi.dims != phi.dims)
    throw std::invalid_argument("states must share the same party dimensions");
  std::vector<double> a = schmidt_spectrum(psi, party_a);
  std::vector<double> b = schmidt_spectrum(phi, party_a);
  const std::size_t d = std::max(a.size(), b.size());
  a.resize(d, 0.0);
  b.resize(d, 0.0);
  return {kyfan_tails(a), kyfan_tails(b)};
}

}  // namespace

bool can_convert_with_certainty(const PureState& psi, const PureState& phi,
                                PartyLabel party_a) {
  const auto [ta, tb] = tail_pair(psi, phi, party_a);
  for (std::size_t k = 0; k < ta.size(); ++k) {
    if (tb[k] <= kTailFloor) continue;  // 0/0 and x/0 both pass
    if (ta[k] / tb[k] < 1.0 - 1e-12) return false;
  }
  return true;
}

double vidal_probability(const PureState& psi, const PureState& phi, PartyLabel party_a) {
  const auto [ta, tb] = tail_pair(psi, phi, party_a);
  double p = 1.0;
  for (std::size_t k = 1; k < ta.size(); ++k) {
    if (tb[k] <= kTailFloor) continue;
    p = std::min(p, ta[k] / tb[k]);
  }
  return std::max(p, 0.0);
}

DetRatio det_ratio(const PureState& psi0, const std::vector<Eigen::MatrixXcd>& ms) {
  check_state(psi0);
  if (static_cast<int>(ms.size()) != psi0.party_count())
    throw std::invalid_argument("det_ratio: one matrix per party required");
  PureState state = psi0;
  for (int a = 0; a < psi0.party_count(); ++a) {
    const Eigen::MatrixXcd& m = ms[a];
    if (m.rows() != m.cols() || m.rows() != psi0.dims[a])
      throw std::invalid_argument("det_ratio: matrix shape mismatch on party " +
                                  std::to_string(a));
    const std::complex<double> det = m.determinant();
    if (std::abs(det) < 1e-12)
      throw std::invalid_argument("det_ratio: singular matrix on party " + std::to_string(a));
    const std::complex<double> scale = std::pow(det, 1.0 / static_cast<double>(m.rows()));
    state = apply_local(state, a, m / scale);
  }
  DetRatio out;
  out.raw = state.amps.squaredNorm();
  out.capped = std::min(out.raw, 1.0);
  return out;
}

// --- composite-bound catalog ----------------------------------------------------

std::vector<CompositeFunctional> composite_catalog(int length, int per_family,
                                                   std::uint64_t seed) {
  if (length < 1 || per_family < 1)
    throw std::invalid_argument("composite_catalog: bad shape");
  std::vector<CompositeFunctional> out;
  auto weights = [length](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> w(length);
    for (double& x : w) x = u(rng);
    return w;
  };
  for (int t = 0; t < per_family; ++t) {
    {
      std::mt19937_64 rng(derive_seed(seed, 4 * static_cast<std::uint64_t>(t)));
      const std::vector<double> w = weights(rng);
      out.push_back({"weighted-sum#" + std::to_string(t),
                     [w](const std::vector<double>& x) {
                       double s = 0.0;
                       for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
                       return s;
                     }});
    }
    {
      std::mt19937_64 rng(derive_seed(seed, 4 * static_cast<std::uint64_t>(t) + 1));
      std::vector<double> w = weights(rng);
      double total = std::accumulate(w.begin(), w.end(), 0.0);
      for (double& x : w) x /= total;
      const double p = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
      out.push_back({"power-mean#" + std::to_string(t),
                     [w, p](const std::vector<double>& x) {
                       double s = 0.0;
                       for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
                       return std::pow(s, 1.0 / p);
                     }});
    }
    {
      std::mt19937_64 rng(derive_seed(seed, 4 * static_cast<std::uint64_t>(t) + 2));
      const std::vector<double> w = weights(rng);
      std::vector<double> p(length);
      for (double& x : p) x = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
      out.push_back({"power-sum#" + std::to_string(t),
                     [w, p](const std::vector<double>& x) {
                       double s = 0.0;
                       for (std::size_t i = 0; i < x.size(); ++i)
                         s += w[i] * std::pow(x[i], p[i]);
                       return s;
                     }});
    }
    {
      std::mt19937_64 rng(derive_seed(seed, 4 * static_cast<std::uint64_t>(t) + 3));
      const std::vector<double> c = weights(rng);
      out.push_back({"min-combination#" + std::to_string(t),
                     [c](const std::vector<double>& x) {
                       double s = std::numeric_limits<double>::infinity();
                       for (std::size_t i = 0; i < x.size(); ++i) s = std::min(s, x[i] / c[i]);
                       return s;
                     }});
    }
  }
  return out;
}

CompositeReport composite_ratio_floor(const std::vector<double>& xs,
                                      const std::vector<double>& xs_prime,
                                      const std::vector<CompositeFunctional>& gs) {
  if (xs.size() != xs_prime.size() || xs.empty())
    throw std::invalid_argument("composite_ratio_floor: vector shape mismatch");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] <= 0.0 || xs_prime[i] <= 0.0)
      throw std::invalid_argument("composite_ratio_floor: entries must be positive");
  double floor = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) floor = std::min(floor, xs[i] / xs_prime[i]);

  CompositeReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double margin = gs[i].eval(xs) / gs[i].eval(xs_prime) - floor;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_index = static_cast<int>(i);
      report.worst_description = gs[i].description;
    }
  }
  return report;
}

}  // namespace psig
