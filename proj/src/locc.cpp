#include "psig/locc.hpp"

#include "psig/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace psig {

double completeness_residual(const KrausInstrument& instrument) {
  if (instrument.operators.empty())
    throw std::invalid_argument("instrument has no operators");
  const Eigen::Index d = instrument.operators.front().cols();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const Eigen::MatrixXcd& e : instrument.operators) {
    if (e.cols() != d) throw std::invalid_argument("instrument operators disagree on domain");
    sum += e.adjoint() * e;
  }
  return (sum - Eigen::MatrixXcd::Identity(d, d)).norm();
}

SloccResult slocc_apply(const PureState& s, const std::vector<Eigen::MatrixXcd>& ms) {
  check_state(s);
  if (static_cast<int>(ms.size()) != s.party_count())
    throw std::invalid_argument("slocc_apply: one matrix per party required");
  PureState out = s;
  for (int a = 0; a < s.party_count(); ++a) out = apply_local(out, a, ms[a]);
  SloccResult result;
  result.prenorm = out.amps.squaredNorm();
  if (result.prenorm < 1e-12)
    throw std::invalid_argument("slocc_apply: deformation annihilates the state");
  out.amps /= std::sqrt(result.prenorm);
  result.state = std::move(out);
  return result;
}

double lower_bound(const PureState& s, const std::vector<Eigen::MatrixXcd>& ms) {
  check_state(s);
  if (static_cast<int>(ms.size()) != s.party_count())
    throw std::invalid_argument("lower_bound: one matrix per party required");
  PureState out = s;
  for (int a = 0; a < s.party_count(); ++a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ms[a]);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin < 1e-12) throw std::invalid_argument("lower_bound: singular matrix");
    out = apply_local(out, a, ms[a] / smax);
  }
  return out.amps.squaredNorm();
}

UpperBound upper_bound(const MonotoneSpec& spec, const PureState& psi,
                       const PureState& phi) {
  UpperBound bound;
  bound.nu_psi = evaluate_monotone(spec, psi);
  bound.nu_phi = evaluate_monotone(spec, phi);
  if (bound.nu_phi <= 1e-12) {
    if (bound.nu_psi <= 1e-12) {
      bound.status = UpperBound::Status::indeterminate;
      bound.raw = std::numeric_limits<double>::quiet_NaN();
    } else {
      bound.status = UpperBound::Status::target_unentangled;
      bound.raw = std::numeric_limits<double>::infinity();
    }
    bound.capped = 1.0;
    return bound;
  }
  bound.raw = bound.nu_psi / bound.nu_phi;
  bound.capped = std::min(bound.raw, 1.0);
  return bound;
}

KrausInstrument random_instrument(int d, int outcomes, std::uint64_t seed) {
  if (d < 1 || outcomes < 1) throw std::invalid_argument("random_instrument: bad shape");
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXcd v = haar_isometry(d * outcomes, d, rng);
  KrausInstrument instrument;
  for (int i = 0; i < outcomes; ++i)
    instrument.operators.push_back(v.middleRows(static_cast<Eigen::Index>(i) * d, d));
  return instrument;
}

Ensemble apply_instrument(const PureState& s, const KrausInstrument& instrument) {
  check_state(s);
  if (instrument.party < 0 || instrument.party >= s.party_count())
    throw std::invalid_argument("apply_instrument: party out of range");
  if (completeness_residual(instrument) > 1e-10)
    throw std::invalid_argument("apply_instrument: instrument is not complete");
  if (instrument.operators.front().cols() != s.dims[instrument.party])
    throw std::invalid_argument("apply_instrument: dimension mismatch");

  Ensemble ensemble;
  double total = 0.0;
  for (const Eigen::MatrixXcd& e : instrument.operators) {
    PureState branch = apply_local(s, instrument.party, e);
    const double p = branch.amps.squaredNorm();
    total += p;
    if (p < 1e-14) continue;  // pruned; its mass still counts toward the total
    branch.amps /= std::sqrt(p);
    ensemble.push_back({p, std::move(branch)});
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::runtime_error("apply_instrument: outcome probabilities do not sum to 1");
  return ensemble;
}

FuzzReport fuzz_monotonicity(const MonotoneSpec& spec, const std::vector<int>& dims,
                             int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("fuzz_monotonicity: trials must be positive");
  FuzzReport report;
  report.trials = trials;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.max_margin = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(trial_seed);

    PureState psi;
    psi.dims = dims;
    psi.amps = random_state_vector(static_cast<int>(total_dim(dims)), rng);
    const int party =
        std::uniform_int_distribution<int>(0, static_cast<int>(dims.size()) - 1)(rng);
    const int outcomes = std::uniform_int_distribution<int>(2, 4)(rng);
    KrausInstrument instrument;
    instrument.party = party;
    const Eigen::MatrixXcd v =
        haar_isometry(dims[party] * outcomes, dims[party], rng);
    for (int i = 0; i < outcomes; ++i)
      instrument.operators.push_back(
          v.middleRows(static_cast<Eigen::Index>(i) * dims[party], dims[party]));

    const double before = evaluate_monotone(spec, psi);
    double after = 0.0;
    for (const EnsembleMember& member : apply_instrument(psi, instrument))
      after += member.p * evaluate_monotone(spec, member.state);
    const double margin = before - after;

    sum += margin;
    report.max_margin = std::max(report.max_margin, margin);
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.worst_trial = t;
      report.worst_seed = trial_seed;
    }
  }
  report.mean_margin = sum / trials;
  report.violation = report.min_margin < -1e-9;
  return report;
}

// --- the three-qubit sweep experiment ---------------------------------------

PureState ghz_example_state() {
  PureState s;
  s.dims = {2, 2, 2};
  s.amps = Eigen::VectorXcd::Zero(8);
  s.amps(0) = 2.0 / std::sqrt(5.0);
  s.amps(7) = 1.0 / std::sqrt(5.0);
  return s;
}

Eigen::Matrix2cd deformation_matrix(double alpha) {
  Eigen::Matrix2cd k;
  k << 1.0, 1.0, -2.0, -1.0;
  return std::cos(alpha) * Eigen::Matrix2cd::Identity() + std::sin(alpha) * k;
}

std::vector<SweepRow> ghz_sweep(const SweepConfig& config) {
  if (config.steps < 1) throw std::invalid_argument("ghz_sweep: steps must be positive");
  for (int n : config.ns)
    if (n < 2) throw std::invalid_argument("ghz_sweep: cycle sizes start at 2");

  const PureState psi = ghz_example_state();
  std::vector<MonotoneSpec> specs;
  for (int n : config.ns) specs.push_back(cycle_family_spec(n));

  // A degenerate interval has one grid point no matter how many steps were
  // requested; repeating identical rows would only pad the CSV.
  const int steps = config.alpha_min == config.alpha_max ? 1 : config.steps;

  std::vector<SweepRow> rows;
  for (int i = 0; i < steps; ++i) {
    SweepRow row;
    row.alpha = steps == 1 ? config.alpha_min
                           : config.alpha_min +
                                 (config.alpha_max - config.alpha_min) * i / (steps - 1);
    const Eigen::MatrixXcd m = deformation_matrix(row.alpha);
    const std::vector<Eigen::MatrixXcd> ms = {m, m, m};
    const PureState phi = slocc_apply(psi, ms).state;

    row.p_lower = lower_bound(psi, ms);
    row.p_det = det_ratio(psi, ms).capped;

    const double v0 = vidal_probability(psi, phi, 0);
    const double v1 = vidal_probability(psi, phi, 1);
    const double v2 = vidal_probability(psi, phi, 2);
    if (std::abs(v0 - v1) > 1e-10 || std::abs(v0 - v2) > 1e-10)
      throw std::runtime_error("ghz_sweep: bipartitions disagree on the optimal probability");
    row.p_vidal = v0;

    for (const MonotoneSpec& spec : specs) row.p_ns.push_back(upper_bound(spec, psi, phi).capped);

    auto check_range = [&row](double x) {
      if (!(x >= 0.0 && x <= 1.0 + 1e-9))
        throw std::runtime_error("ghz_sweep: bound out of range at alpha " +
                                 std::to_string(row.alpha));
    };
    check_range(row.p_lower);
    check_range(row.p_det);
    check_range(row.p_vidal);
    for (double p : row.p_ns) {
      check_range(p);
      if (row.p_lower > p + 1e-9)
        throw std::runtime_error("ghz_sweep: lower bound exceeds an upper bound");
    }
    if (row.p_lower > row.p_det + 1e-9 || row.p_lower > row.p_vidal + 1e-9)
      throw std::runtime_error("ghz_sweep: lower bound exceeds an upper bound");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<int>& ns) {
  std::string out = "alpha,p_lower,p_det,p_vidal";
  for (int n : ns) out += ",p_n" + std::to_string(n);
  out += "\n";
  char buf[64];
  auto append = [&out, &buf](double x, char sep) {
    std::snprintf(buf, sizeof(buf), "%.12g%c", x, sep);
    out += buf;
  };
  for (const SweepRow& row : rows) {
    append(row.alpha, ',');
    append(row.p_lower, ',');
    append(row.p_det, ',');
    append(row.p_vidal, row.p_ns.empty() ? '\n' : ',');
    for (std::size_t i = 0; i < row.p_ns.size(); ++i)
      append(row.p_ns[i], i + 1 == row.p_ns.size() ? '\n' : ',');
  }
  return out;
}

}  // namespace psig
