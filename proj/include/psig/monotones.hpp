#pragma once

#include "psig/graph.hpp"
#include "psig/tensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace psig {

// 1 minus the sum of the k largest eigenvalues of party a's reduced density
// matrix; k at or beyond the rank gives 0.
double vidal_monotone(const PureState& s, PartyLabel party_a, int k);

// Descending eigenvalues of the reduced density matrix on party a.
std::vector<double> schmidt_spectrum(const PureState& s, PartyLabel party_a);

struct KyFanCheck {
  double value = 0.0;        // sum of the k largest eigenvalues
  double max_sampled = 0.0;  // best Tr(P rho) over random rank-k projectors
  int samples = 0;
};

// Eigen-decomposition value for max_{rank-k P} Tr(P rho), with a seeded
// random-projector sampling record that must never exceed it.
KyFanCheck kyfan_crosscheck(const Eigen::MatrixXcd& rho, int k, int samples = 100,
                            std::uint64_t seed = 0);

// --- monotone specifications ------------------------------------------------

struct MonotoneSpec {
  enum class Kind { vidal, graph, multi_renyi, bl, det };
  Kind kind = Kind::vidal;

  // vidal
  PartyLabel party_a = 0;
  int k = 1;

  // graph / multi_renyi: value 1 - Z^(exponent_num/exponent_den)
  PsiGraph graph;
  long exponent_num = 1;
  long exponent_den = 1;
  bool standard_exponent = true;  // false marks deliberately altered controls

  // bl
  std::vector<int> ranks;
  int restarts = 4;
  std::uint64_t seed = 0;

  // det
  std::vector<Eigen::MatrixXcd> ms;

  std::string describe() const;
};

MonotoneSpec vidal_spec(PartyLabel party_a, int k);
// Validated parity-symmetric graph; exponent fixed to 1/(ket count).
MonotoneSpec graph_spec(PsiGraph g);
// Same but with a caller-chosen exponent; used by control fixtures that are
// deliberately not monotones.
MonotoneSpec graph_spec_with_exponent(PsiGraph g, long num, long den);
// Hypercube family: graph E^(q), exponent 2^(1-q).
MonotoneSpec multi_renyi_spec(int q);
// Cycle-product family on three parties: graph C_1 x C_n, exponent 1/(2n).
MonotoneSpec cycle_family_spec(int n);
MonotoneSpec bl_spec(std::vector<int> ranks, int restarts = 4, std::uint64_t seed = 0);

// Value of the monotone on a normalized state.  The det kind has no absolute
// normalization (only same-orbit ratios exist) and throws here.
double evaluate_monotone(const MonotoneSpec& spec, const PureState& s);

// 1 - Z^(1/n) with n the ket-vertex count; Z from evaluate_invariant_real,
// clamped into [0, 1 + 1e-9] (values beyond that window throw).
double graph_monotone(const PsiGraph& g, const PureState& s);
double graph_monotone_with_exponent(const PsiGraph& g, const PureState& s, long num, long den);

// --- projector maximization ---------------------------------------------------

struct ProjectorMaxResult {
  double value = 0.0;           // best objective found over all starts
  double restart_spread = 0.0;  // best minus worst across starts
  int sweeps = 0;               // sweeps used by the best start
  bool converged = true;        // every start met the 1e-10 stop before 500 sweeps
};

// Alternating block ascent for max |(P_1 x ... x P_q) psi|^2 over product
// projectors of the given ranks: each pass replaces one party's projector by
// the top-k eigenspace of its conditioned reduced density.  One untruncated
// start plus `restarts` seeded random starts; the reported maximum is a lower
// bound on the true one (heuristic).
ProjectorMaxResult bl_inner_maximum(const PureState& s, const std::vector<int>& ranks,
                                    int restarts, std::uint64_t seed);

struct BlResult {
  double value = 0.0;  // 1 - best overlap
  ProjectorMaxResult report;
};

BlResult bl_monotone(const PureState& s, const std::vector<int>& ranks, int restarts,
                     std::uint64_t seed);

// Same alternating scheme steered by the reduced-density update, but scoring
// f(P psi) = max(0, Re Z)^(num/den) for the graph invariant; tracks the best
// value ever visited.  Heuristic like bl_inner_maximum.
ProjectorMaxResult projector_maximize(const PsiGraph& g, long exponent_num, long exponent_den,
                                      const std::vector<int>& ranks, const PureState& s,
                                      int restarts, std::uint64_t seed);

// --- majorization / conversion ------------------------------------------------

// Largest deterministic-conversion check across the party-a bipartition:
// every Ky Fan tail ratio tail(psi)/tail(phi) at least 1 (0/0 passes).
bool can_convert_with_certainty(const PureState& psi, const PureState& phi,
                                PartyLabel party_a);

// Optimal bipartite conversion probability: min over k of the Ky Fan tail
// ratios (skipping 0/0 and x/0), never above 1.
double vidal_probability(const PureState& psi, const PureState& phi, PartyLabel party_a);

// Determinant-normalized squared norm of (x)Ms |psi0>: the same-orbit ratio
// in which the orbit constant cancels.  raw may exceed 1; capped = min(raw,1).
struct DetRatio {
  double raw = 0.0;
  double capped = 0.0;
};
DetRatio det_ratio(const PureState& psi0, const std::vector<Eigen::MatrixXcd>& ms);

// --- composite-bound catalog ----------------------------------------------------

// A positive, monotone, concave functional on positive vectors, with G(0)=0.
struct CompositeFunctional {
  std::string description;
  std::function<double(const std::vector<double>&)> eval;
};

// Fixed catalog: weighted sums, weighted power means (exponent in (0,1]),
// weighted power sums, and min-combinations, `per_family` seeded draws each.
std::vector<CompositeFunctional> composite_catalog(int length, int per_family,
                                                   std::uint64_t seed);

struct CompositeReport {
  double worst_margin = 0.0;  // min over samples of G(xs)/G(xs') - floor
  int worst_index = -1;
  std::string worst_description;
};

// Checks G(xs)/G(xs') >= min(min_i xs_i/xs'_i, 1) for every catalog entry.
CompositeReport composite_ratio_floor(const std::vector<double>& xs,
                                      const std::vector<double>& xs_prime,
                                      const std::vector<CompositeFunctional>& gs);

}  // namespace psig
