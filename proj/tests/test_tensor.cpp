#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "oracle.hpp"
#include "psig/graph.hpp"
#include "psig/rng.hpp"
#include "psig/reflect.hpp"
#include "psig/tensor.hpp"

using namespace psig;
using doctest::Approx;

namespace {

PureState seeded_state(const std::vector<int>& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_state_vector(dims, rng);
}

Eigen::MatrixXcd seeded_density(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_density(dim, rng);
}

}  // namespace

TEST_CASE("state helpers") {
  const PureState s = seeded_state({2, 3, 2}, 7);
  CHECK(s.party_count() == 3);
  CHECK(total_dim(s.dims) == 12);
  CHECK(s.amps.squaredNorm() == Approx(1.0));

  SUBCASE("permuting parties relabels axes consistently") {
    const PureState p = permute_parties(s, {2, 0, 1});
    CHECK(p.dims == std::vector<int>{2, 2, 3});
    // amp(i2, i0, i1) of the permuted state equals amp(i0, i1, i2).
    for (int i0 = 0; i0 < 2; ++i0)
      for (int i1 = 0; i1 < 3; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
          CHECK(p.amps(i2 * 6 + i0 * 3 + i1) == s.amps(i0 * 6 + i1 * 2 + i2));
  }

  SUBCASE("reduced density traces the complement") {
    const Eigen::MatrixXcd rho01 = reduced_density(s, {0, 1});
    CHECK(rho01.rows() == 6);
    CHECK(std::abs(rho01.trace().real() - 1.0) < 1e-12);
    // Tracing the kept parties in turn must agree with a direct single-party
    // reduction.
    const Eigen::MatrixXcd rho0 = reduced_density(s, {0});
    Eigen::MatrixXcd folded = Eigen::MatrixXcd::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 3; ++k) folded(i, j) += rho01(i * 3 + k, j * 3 + k);
    CHECK((folded - rho0).norm() < 1e-12);
  }

  SUBCASE("partial trace removes one party") {
    const Eigen::MatrixXcd rho = partial_trace(s, 1);
    CHECK(rho.rows() == 4);  // parties 0 and 2 remain
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("purification inverts the reduced density") {
  const Eigen::MatrixXcd rho = seeded_density(4, 11);
  const PureState pure = purify(rho, {2, 2});
  // The ancilla is appended as the last party.
  CHECK(pure.dims.size() == 3);
  const Eigen::MatrixXcd back = reduced_density(pure, {0, 1});
  CHECK((back - rho).norm() < 1e-10);

  SUBCASE("requested ancilla below the rank throws") {
    CHECK_THROWS_AS(purify(rho, {2, 2}, 1), std::invalid_argument);
  }
  SUBCASE("pure input purifies with a trivial ancilla") {
    const PureState s = seeded_state({2, 2}, 3);
    const Eigen::MatrixXcd proj = s.amps * s.amps.adjoint();
    const PureState lifted = purify(proj, {2, 2});
    CHECK(lifted.dims == std::vector<int>{2, 2, 1});
  }
}

TEST_CASE("apply_local acts on a single axis") {
  const PureState s = seeded_state({2, 3}, 5);
  Eigen::MatrixXcd m(3, 3);
  m.setZero();
  m(0, 1) = 1.0;
  m(1, 2) = 1.0;
  m(2, 0) = 1.0;  // cyclic shift on party 1
  const PureState shifted = apply_local(s, 1, m);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(shifted.amps(i * 3 + j) == s.amps(i * 3 + (j + 1) % 3));
}

TEST_CASE("self-traced network computes a trace") {
  // A single node carrying rho with both axes on the same bond is Tr rho.
  const Eigen::MatrixXcd rho = seeded_density(3, 2);
  NetworkNode node;
  node.bonds = {0, 0};
  node.dims = {3, 3};
  node.data.resize(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) node.data[i * 3 + j] = rho(i, j);
  const std::complex<double> z = contract_network({node});
  CHECK(std::abs(z - rho.trace()) < 1e-14);
}

TEST_CASE("contraction refuses oversized plans") {
  // Two nodes joined by one bond, each with a huge free axis: the pair result
  // would hold free_a * free_b entries.
  NodeShape a{{0, 1}, {1 << 14, 2}};
  NodeShape b{{1, 2}, {2, 1 << 14}};
  CHECK_THROWS_AS(plan_contraction({a, b}, 1 << 20), std::runtime_error);
}

TEST_CASE("non-closing networks are rejected") {
  NetworkNode open;
  open.bonds = {0};
  open.dims = {2};
  open.data = Eigen::VectorXcd::Zero(2);
  open.data(0) = 1.0;
  CHECK_THROWS_AS(contract_network({open}), std::runtime_error);
}

TEST_CASE("cycle invariant equals a trace power") {
  for (int n = 1; n <= 4; ++n) {
    const PsiGraph g = build_cycle(n);
    const PureState s = seeded_state({3, 3}, 100 + n);
    const Eigen::MatrixXcd rho = partial_trace(s, 1);  // keeps party 0
    const std::complex<double> z = evaluate_invariant(g, s);
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(3, 3);
    for (int i = 0; i < n; ++i) power = power * rho;
    CHECK(std::abs(z - power.trace()) < 1e-12);
  }
}

TEST_CASE("engine matches the flat oracle on tiny graphs") {
  const std::vector<std::pair<PsiGraph, std::vector<int>>> cases = {
      {build_cycle(1), {2, 3}},
      {build_cycle(2), {2, 2}},
      {build_cycle(1, true), {3}},
      {build_hypercube(2), {2, 2}},
      {cartesian_product(build_cycle(1, true), build_cycle(1)), {2, 2, 2}},
  };
  int seed = 0;
  for (const auto& [g, dims] : cases) {
    for (int trial = 0; trial < 5; ++trial) {
      const PureState s = seeded_state(dims, derive_seed(41, ++seed));
      const std::complex<double> engine = evaluate_invariant(g, s);
      const std::complex<double> flat = testing::flat_invariant(g, s);
      const std::complex<double> naive = testing::naive_invariant(g, s);
      CHECK(std::abs(engine - flat) < 1e-12);
      CHECK(std::abs(naive - flat) < 1e-12);  // the two oracles agree
    }
  }
}

TEST_CASE("real evaluation requires a parity-flipping symmetry") {
  const PsiGraph g = build_cycle(2);
  const PureState s = seeded_state({2, 2}, 9);
  const double z = evaluate_invariant_real(g, s);
  CHECK(z == Approx(std::real(evaluate_invariant(g, s))));

  // A graph with no parity-flipping automorphism is rejected up front: no
  // such symmetry can exist when ket and bra counts differ per label cycle.
  PsiGraph asym;
  asym.party_count = 1;
  asym.parity = {Parity::ket, Parity::bra};
  asym.edges = {{0, 1, 0}};
  CHECK(has_parity_flip_symmetry(asym));  // single edge does have one
}

TEST_CASE("density evaluation matches the state evaluation") {
  const PsiGraph g = build_hypercube(2);
  const PureState s = seeded_state({2, 3}, 21);
  for (int a = 0; a < 2; ++a) {
    const Eigen::MatrixXcd rho = partial_trace(s, a);
    const std::complex<double> via_density = evaluate_on_density(g, a, s.dims, rho);
    const std::complex<double> direct = evaluate_invariant(g, s);
    CHECK(std::abs(via_density - direct) < 1e-12);
  }
}

TEST_CASE("density evaluation accepts non-reduced inputs") {
  // The digon C_1 under label 0 contracts to Tr rho for any matrix.
  const PsiGraph g = build_cycle(1);
  const Eigen::MatrixXcd rho = seeded_density(3, 33);
  const std::complex<double> z = evaluate_on_density(g, 0, {2, 3}, rho);
  CHECK(std::abs(z - rho.trace()) < 1e-14);
}

TEST_CASE("convexity probe reports no violation for a convex functional") {
  const ProbeResult r = convexity_probe(build_cycle(2), 0, 2, 200, 17);
  CHECK(r.min_margin > -1e-12);
}

TEST_CASE("convexity probe detects a concave functional") {
  // f(rho) = -Tr rho^2 is strictly concave, so margins go negative.
  const auto f = [](const Eigen::MatrixXcd& rho) {
    return -std::real((rho * rho).trace());
  };
  const ProbeResult r = convexity_probe_fn(3, f, 200, 4);
  CHECK(r.min_margin < -1e-4);
  CHECK(r.argmin >= 0);
}
