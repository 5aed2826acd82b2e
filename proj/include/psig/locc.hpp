#pragma once

#include "psig/monotones.hpp"
#include "psig/tensor.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace psig {

// A local generalized measurement on one party: operators E_i with
// sum E_i^dagger E_i = I (completeness residual at most 1e-10 Frobenius).
struct KrausInstrument {
  PartyLabel party = 0;
  std::vector<Eigen::MatrixXcd> operators;
};

double completeness_residual(const KrausInstrument& instrument);

struct EnsembleMember {
  double p = 0.0;
  PureState state;  // normalized
};
using Ensemble = std::vector<EnsembleMember>;

struct SloccResult {
  PureState state;     // normalized
  double prenorm = 0;  // squared norm before normalization
};

// (x)Ms applied to the state; throws if the result is annihilated.
SloccResult slocc_apply(const PureState& s, const std::vector<Eigen::MatrixXcd>& ms);

// Guaranteed single-shot success probability: each M is divided by its
// largest singular value (so M^dagger M <= I) and the squared norm of the
// deformed state is returned.
double lower_bound(const PureState& s, const std::vector<Eigen::MatrixXcd>& ms);

struct UpperBound {
  enum class Status {
    ok,                  // both monotone values meaningful
    target_unentangled,  // nu(phi) ~ 0 < nu(psi): no constraint, bound 1
    indeterminate,       // both ~ 0: the ratio carries no information
  };
  Status status = Status::ok;
  double raw = 0.0;     // nu(psi)/nu(phi); +inf / NaN for the special statuses
  double capped = 0.0;  // min(raw, 1), or 1 for the special statuses
  double nu_psi = 0.0;
  double nu_phi = 0.0;
};

// Transition-probability bound min(nu(psi)/nu(phi), 1) for one monotone.
UpperBound upper_bound(const MonotoneSpec& spec, const PureState& psi,
                       const PureState& phi);

// `outcomes` square blocks of a Haar-random isometry from dimension d to
// d*outcomes; complete by construction.  The caller assigns the party.
KrausInstrument random_instrument(int d, int outcomes, std::uint64_t seed);

// Measurement outcomes with probabilities |E_i psi|^2; outcomes below 1e-14
// are dropped, and the retained probabilities must still sum to 1 within
// 1e-10.
Ensemble apply_instrument(const PureState& s, const KrausInstrument& instrument);

struct FuzzReport {
  int trials = 0;
  double min_margin = 0.0;   // worst nu(psi) - sum_i p_i nu(psi_i)
  double mean_margin = 0.0;
  double max_margin = 0.0;
  int worst_trial = -1;
  std::uint64_t worst_seed = 0;  // replay seed of the worst trial
  bool violation = false;        // min_margin < -1e-9
};

// Random-state, random-party, random-instrument (2-4 outcomes) monotonicity
// stress test of one monotone specification.
FuzzReport fuzz_monotonicity(const MonotoneSpec& spec, const std::vector<int>& dims,
                             int trials, std::uint64_t seed);

// --- the three-qubit sweep experiment ---------------------------------------

// (2|000> + |111>)/sqrt(5) on qubit dims (2,2,2).
PureState ghz_example_state();

// cos(a) I + sin(a) K for K = [[1,1],[-2,-1]]; K^2 = -I makes the exponential
// of a*K close in this plane, and tr K = 0 keeps the determinant at 1.
Eigen::Matrix2cd deformation_matrix(double alpha);

struct SweepRow {
  double alpha = 0.0;
  double p_lower = 0.0;
  double p_det = 0.0;
  double p_vidal = 0.0;
  std::vector<double> p_ns;  // one entry per configured cycle size
};

struct SweepConfig {
  double alpha_min = -1.0;
  double alpha_max = 1.0;
  int steps = 81;
  std::vector<int> ns = {2, 3, 4};
};

// Deforms the example state by (x)deformation_matrix(alpha)^3 per grid point
// and tabulates the transition bounds: the Kraus lower bound, the
// determinant-monotone ratio, the optimal bipartite probability (asserted
// equal across the three bipartitions), and the cycle-family upper bounds.
// Every row is checked against: entries in [0, 1+1e-9] and lower bound below
// every upper bound + 1e-9.
std::vector<SweepRow> ghz_sweep(const SweepConfig& config);

// CSV with header alpha,p_lower,p_det,p_vidal,p_n2,... for the configured ns;
// %.12g formatting, byte-stable for fixed inputs.
std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<int>& ns);

}  // namespace psig
