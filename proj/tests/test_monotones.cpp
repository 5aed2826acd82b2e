#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "psig/graph.hpp"
#include "psig/monotones.hpp"
#include "psig/rng.hpp"
#include "psig/tensor.hpp"

using namespace psig;
using doctest::Approx;

namespace {

PureState bell_state() {
  PureState s;
  s.dims = {2, 2};
  s.amps = Eigen::VectorXcd::Zero(4);
  s.amps(0) = 1.0 / std::sqrt(2.0);
  s.amps(3) = 1.0 / std::sqrt(2.0);
  return s;
}

// (2|000> + |111>)/sqrt(5)
PureState unbalanced_ghz() {
  PureState s;
  s.dims = {2, 2, 2};
  s.amps = Eigen::VectorXcd::Zero(8);
  s.amps(0) = 2.0 / std::sqrt(5.0);
  s.amps(7) = 1.0 / std::sqrt(5.0);
  return s;
}

PureState seeded_state(const std::vector<int>& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_state_vector(dims, rng);
}

}  // namespace

TEST_CASE("schmidt tail monotone on known states") {
  CHECK(vidal_monotone(bell_state(), 0, 1) == Approx(0.5).epsilon(1e-12));
  CHECK(vidal_monotone(bell_state(), 0, 2) == Approx(0.0).epsilon(1e-12));
  CHECK(vidal_monotone(unbalanced_ghz(), 0, 1) == Approx(0.2).epsilon(1e-12));
  // Product state: no tail at all.
  PureState prod;
  prod.dims = {2, 2};
  prod.amps = Eigen::VectorXcd::Zero(4);
  prod.amps(0) = 1.0;
  CHECK(vidal_monotone(prod, 0, 1) == Approx(0.0));
}

TEST_CASE("kyfan sampling never beats the eigenvalue sum") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXcd rho = random_density(5, rng);
  for (int k = 1; k <= 4; ++k) {
    const KyFanCheck check = kyfan_crosscheck(rho, k, 200, 7);
    CHECK(check.max_sampled <= check.value + 1e-12);
    CHECK(check.samples == 200);
  }
}

TEST_CASE("graph monotone on the bell state") {
  const double value = graph_monotone(build_cycle(2), bell_state());
  CHECK(value == Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("monotone specs evaluate and describe themselves") {
  const PureState s = seeded_state({2, 2, 2}, 12);

  SUBCASE("vidal") {
    const MonotoneSpec spec = vidal_spec(1, 1);
    CHECK(evaluate_monotone(spec, s) == Approx(vidal_monotone(s, 1, 1)));
    CHECK(spec.describe() == "vidal(party=1, k=1)");
  }
  SUBCASE("multi renyi = hypercube graph") {
    const MonotoneSpec spec = multi_renyi_spec(3);
    const double direct = graph_monotone(build_hypercube(3), s);
    CHECK(evaluate_monotone(spec, s) == Approx(direct).epsilon(1e-12));
  }
  SUBCASE("cycle family") {
    const MonotoneSpec spec = cycle_family_spec(2);
    CHECK(spec.graph.party_count == 3);
    const double v = evaluate_monotone(spec, s);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  SUBCASE("det has no absolute value") {
    MonotoneSpec spec;
    spec.kind = MonotoneSpec::Kind::det;
    CHECK_THROWS_AS(evaluate_monotone(spec, s), std::invalid_argument);
  }
  SUBCASE("invalid graphs are rejected by the spec constructors") {
    PsiGraph disconnected;
    disconnected.party_count = 1;
    disconnected.parity = {Parity::ket, Parity::bra, Parity::ket, Parity::bra};
    disconnected.edges = {{0, 1, 0}, {2, 3, 0}};
    CHECK_THROWS_AS(graph_spec(disconnected), std::invalid_argument);
  }
}

TEST_CASE("bipartite projector maximization reduces to eigenvalue truncation") {
  std::mt19937_64 seeds(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int d1 = 2 + static_cast<int>(seeds() % 3);
    const int d2 = 2 + static_cast<int>(seeds() % 3);
    const PureState s = seeded_state({d1, d2}, derive_seed(5, trial));
    const int k1 = 1 + static_cast<int>(seeds() % d1);
    const int k2 = 1 + static_cast<int>(seeds() % d2);
    const BlResult bl = bl_monotone(s, {k1, k2}, 2, 13);
    const double vidal = vidal_monotone(s, 0, std::min(k1, k2));
    CHECK(bl.value == Approx(vidal).epsilon(1e-9));
  }
}

TEST_CASE("projector monotone on the unbalanced ghz state") {
  // Best rank-(1,1,1) product projector keeps the dominant product term.
  const BlResult bl = bl_monotone(unbalanced_ghz(), {1, 1, 1}, 4, 0);
  CHECK(bl.value == Approx(0.2).epsilon(1e-9));
}

TEST_CASE("full-rank projectors change nothing") {
  const PureState s = seeded_state({2, 2}, 31);
  const BlResult bl = bl_monotone(s, {2, 2}, 1, 0);
  CHECK(bl.value == Approx(0.0).epsilon(1e-12));

  const PsiGraph g = build_cycle(2);
  const double z = evaluate_invariant_real(g, s);
  const ProjectorMaxResult r = projector_maximize(g, 1, 2, {2, 2}, s, 1, 0);
  CHECK(r.value == Approx(std::pow(z, 0.5)).epsilon(1e-10));
}

TEST_CASE("conversion probability bounds") {
  const PureState bell = bell_state();
  const PureState ghz2 = [] {
    PureState s;
    s.dims = {2, 2};
    s.amps = Eigen::VectorXcd::Zero(4);
    s.amps(0) = std::sqrt(0.8);
    s.amps(3) = std::sqrt(0.2);
    return s;
  }();

  SUBCASE("identical states convert with certainty") {
    CHECK(can_convert_with_certainty(bell, bell, 0));
    CHECK(vidal_probability(bell, bell, 0) == Approx(1.0));
  }
  SUBCASE("bell converts to anything bipartite with certainty") {
    CHECK(can_convert_with_certainty(bell, ghz2, 0));
    CHECK(vidal_probability(bell, ghz2, 0) == Approx(1.0));
  }
  SUBCASE("uphill conversions pay the tail ratio") {
    CHECK_FALSE(can_convert_with_certainty(ghz2, bell, 0));
    // min_k tail_k(ghz2)/tail_k(bell) = 0.2/0.5
    CHECK(vidal_probability(ghz2, bell, 0) == Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch is rejected") {
    PureState qutrit;
    qutrit.dims = {3, 3};
    qutrit.amps = Eigen::VectorXcd::Zero(9);
    qutrit.amps(0) = 1.0;
    CHECK_THROWS_AS(vidal_probability(bell, qutrit, 0), std::invalid_argument);
  }
}

TEST_CASE("determinant-normalized ratio") {
  const PureState s = unbalanced_ghz();
  SUBCASE("identity maps give ratio 1") {
    const std::vector<Eigen::MatrixXcd> ids(3, Eigen::MatrixXcd::Identity(2, 2));
    const DetRatio r = det_ratio(s, ids);
    CHECK(r.raw == Approx(1.0).epsilon(1e-12));
    CHECK(r.capped == Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("determinant-1 maps rescale by the squared norm") {
    Eigen::MatrixXcd k(2, 2);
    k << 1, 1, -2, -1;  // det = 1
    const std::vector<Eigen::MatrixXcd> ms = {k, Eigen::MatrixXcd::Identity(2, 2),
                                              Eigen::MatrixXcd::Identity(2, 2)};
    const DetRatio r = det_ratio(s, ms);
    const PureState mapped = apply_local(s, 0, k);
    CHECK(r.raw == Approx(mapped.amps.squaredNorm()).epsilon(1e-12));
    CHECK(r.capped == Approx(std::min(1.0, r.raw)).epsilon(1e-12));
  }
  SUBCASE("singular maps are rejected") {
    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
    const std::vector<Eigen::MatrixXcd> ms = {zero, Eigen::MatrixXcd::Identity(2, 2),
                                              Eigen::MatrixXcd::Identity(2, 2)};
    CHECK_THROWS_AS(det_ratio(s, ms), std::invalid_argument);
  }
}

TEST_CASE("composite functionals floor the ratio") {
  const auto gs = composite_catalog(3, 4, 7);
  CHECK(gs.size() == 16);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(3), xs_prime(3);
    for (int i = 0; i < 3; ++i) {
      xs[i] = unif(rng);
      xs_prime[i] = unif(rng);
    }
    const CompositeReport report = composite_ratio_floor(xs, xs_prime, gs);
    CHECK(report.worst_margin >= -1e-12);
  }
}

TEST_CASE("composite inputs are validated") {
  const auto gs = composite_catalog(2, 1, 0);
  CHECK_THROWS_AS(composite_ratio_floor({0.5}, {0.5, 0.5}, gs), std::invalid_argument);
  CHECK_THROWS_AS(composite_ratio_floor({0.5, -0.1}, {0.5, 0.5}, gs), std::invalid_argument);
}
