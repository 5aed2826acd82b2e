#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>

#include <cstdint>
#include <random>

namespace psig {

// All randomized entry points take an explicit 64-bit seed and derive child
// seeds with splitmix64, so results are reproducible across platforms for a
// fixed seed regardless of how many draws each stage consumes.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  return splitmix64(s);
}

inline Eigen::VectorXcd gaussian_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = std::complex<double>(re, im);
  }
  return v;
}

inline Eigen::VectorXcd random_state_vector(int dim, std::mt19937_64& rng) {
  Eigen::VectorXcd v = gaussian_vector(dim, rng);
  return v / v.norm();
}

// Haar-distributed isometry with `rows` >= `cols`: QR of a Gaussian matrix
// with the R diagonal's phases absorbed into Q to make the draw unambiguous.
inline Eigen::MatrixXcd haar_isometry(int rows, int cols, std::mt19937_64& rng) {
  Eigen::MatrixXcd gauss(rows, cols);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      gauss(i, j) = std::complex<double>(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gauss);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= a > 0 ? d / a : std::complex<double>(1.0, 0.0);
  }
  return q;
}

inline Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& rng) {
  return haar_isometry(dim, dim, rng);
}

// Density matrix G G^dagger / tr, full rank almost surely.
inline Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng) {
  Eigen::MatrixXcd g(dim, dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = std::complex<double>(re, im);
    }
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace psig
