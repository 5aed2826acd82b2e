#pragma once

#include "psig/graph.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace psig {

// Multipartite pure state.  Amplitudes are flat and row-major in the party
// order: party 0 is the most significant index.
struct PureState {
  std::vector<int> dims;    // local dimension per party
  Eigen::VectorXcd amps;
  int party_count() const { return static_cast<int>(dims.size()); }
};

std::size_t total_dim(const std::vector<int>& dims);

// Throws std::invalid_argument unless dims are positive and the amplitude
// count matches their product.
void check_state(const PureState& s);

PureState normalized(PureState s);

// Reorders parties; order[t] names the old party placed at position t.
PureState permute_parties(const PureState& s, const std::vector<int>& order);

// Applies m to one party without normalizing.  Rectangular maps change that
// party's dimension (m.cols() must equal the current one).
PureState apply_local(const PureState& s, int party, const Eigen::MatrixXcd& m);

// Haar-random pure state on the given local dimensions.
PureState random_state_vector(const std::vector<int>& dims, std::mt19937_64& rng);

// Density matrix of the kept parties (sorted ascending), row-major over them.
Eigen::MatrixXcd reduced_density(const PureState& s, const std::vector<int>& keep);

// Density matrix of everything except `party`.
Eigen::MatrixXcd partial_trace(const PureState& s, int party);

// Purification with the ancilla appended as the last party.  ancilla_dim 0
// means "use the rank"; anything smaller than the rank throws.  Eigenvectors
// are paired with ancilla levels in descending-eigenvalue order.
PureState purify(const Eigen::MatrixXcd& rho, const std::vector<int>& dims,
                 int ancilla_dim = 0);

// --- tensor network contraction -------------------------------------------

// Every bond id must occur exactly twice across the whole network; both
// occurrences inside one node denote a self-trace.
struct NetworkNode {
  std::vector<int> bonds;  // bond id per axis, row-major axis order
  std::vector<int> dims;   // dimension per axis
  Eigen::VectorXcd data;
};

inline constexpr std::size_t kContractionEntryCap = std::size_t{1} << 26;

struct ContractionStep {
  int a = 0;  // result replaces slot a
  int b = 0;  // slot b is retired
};

struct ContractionPlan {
  std::vector<ContractionStep> steps;
  std::size_t peak_entries = 0;
};

struct NodeShape {
  std::vector<int> bonds;
  std::vector<int> dims;
};

// Greedy pairwise planning: always contract the pair with the smallest
// result, breaking ties by lowest shared bond id and then slot order.  Sizes
// are computed up front; a plan whose peak tensor would exceed max_entries
// throws std::runtime_error before any allocation happens.
ContractionPlan plan_contraction(std::vector<NodeShape> shapes,
                                 std::size_t max_entries = kContractionEntryCap);

// Contracts the closed network to its scalar value.
std::complex<double> contract_network(std::vector<NetworkNode> nodes,
                                      std::size_t max_entries = kContractionEntryCap);

// --- graph invariants -------------------------------------------------------

// Z_G(psi): one tensor per vertex (conjugated on bra vertices) with its axes
// bonded along the incident edges, one axis per party label in label order.
// dims[a] is the local dimension carried by every label-a edge.
std::complex<double> evaluate_invariant(const PsiGraph& g, const PureState& psi);

// Same, for graphs with a parity-flipping symmetry (which forces a real
// value); throws std::runtime_error if the imaginary part is not negligible.
double evaluate_invariant_real(const PsiGraph& g, const PureState& psi);

// Z_G as a polynomial on density matrices: every label-a edge pairs a ket
// vertex with a bra vertex, and the pair is replaced by rho acting on the
// remaining parties (ascending label order, row-major).  rho must be square
// with side prod_{b != label} dims[b].  With rho the partial trace of psi
// over party `label` this reproduces evaluate_invariant.
std::complex<double> evaluate_on_density(const PsiGraph& g, PartyLabel label,
                                         const std::vector<int>& dims,
                                         const Eigen::MatrixXcd& rho);

struct ProbeResult {
  double min_margin = 0.0;  // negative = convexity violated by that much
  int argmin = -1;          // trial index attaining the minimum
};

// Random mixing tests f(t a + (1-t) b) <= t f(a) + (1-t) f(b) on density
// matrices of the given side length; margin = rhs - lhs.
ProbeResult convexity_probe_fn(int dim,
                               const std::function<double(const Eigen::MatrixXcd&)>& f,
                               int trials, std::uint64_t seed);

// Convexity of Re Z_G on one party's complementary densities, every party
// carrying the same local dimension.
ProbeResult convexity_probe(const PsiGraph& g, PartyLabel label, int local_dim,
                            int trials, std::uint64_t seed);

}  // namespace psig
