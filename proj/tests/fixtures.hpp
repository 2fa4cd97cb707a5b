#pragma once

// Synthetic metrics and closed-form oracles shared by the unit and
// acceptance suites. Nothing here calls into the library's numerics.

#include "spinmf/box_cover.hpp"
#include "spinmf/itf_metric.hpp"
#include "spinmf/spin_network.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace fixtures {

using spinmf::DistanceMatrix;

/// Evenly spaced points on a segment: d(i, j) = |i - j| / n.
inline DistanceMatrix lattice_1d(int n) {
  std::vector<double> d(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(i) * n + j] = std::abs(i - j) / double(n);
  return DistanceMatrix::from_distances(n, std::move(d));
}

/// Leaves of a binary tree of depth `levels`: d = 2^-(common prefix length).
inline DistanceMatrix dyadic_ultrametric(int levels) {
  const int n = 1 << levels;
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const unsigned diff = static_cast<unsigned>(i ^ j);
      const int prefix = levels - static_cast<int>(std::bit_width(diff));
      d[static_cast<std::size_t>(i) * n + j] = std::ldexp(1.0, -prefix);
    }
  return DistanceMatrix::from_distances(n, std::move(d));
}

/// Binomial cascade weights: w_leaf = a^(#0 bits) (1-a)^(#1 bits).
inline std::vector<double> binomial_weights(int levels, double a) {
  const int n = 1 << levels;
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int ones = std::popcount(static_cast<unsigned>(i));
    w[static_cast<std::size_t>(i)] = std::pow(a, levels - ones) * std::pow(1.0 - a, ones);
  }
  return w;
}

inline double binomial_tau(double q, double a) { return -std::log2(std::pow(a, q) + std::pow(1.0 - a, q)); }

/// Symmetric, zero-diagonal, non-negative table. Values are drawn from a
/// small set so ties and zero off-diagonal pairs occur.
inline DistanceMatrix random_semimetric(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> level(0, 6);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  const bool coarse = jitter(rng) < 0.5;
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = coarse ? 0.25 * level(rng) : (jitter(rng) < 0.05 ? 0.0 : jitter(rng));
      d[static_cast<std::size_t>(i) * n + j] = d[static_cast<std::size_t>(j) * n + i] = v;
    }
  return DistanceMatrix::from_distances(n, std::move(d));
}

/// Dense copy of a Hamiltonian built by hand from the defining formulas.
inline Eigen::MatrixXd reference_hamiltonian(const spinmf::NetworkSpec& s) {
  const int n = s.n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double j = s.coupling_profile == spinmf::CouplingProfile::Engineered ? 0.5 * std::sqrt(double(k) * (n - k))
                                                                              : 1.0;
    h(k - 1, k) = h(k, k - 1) = j;
  }
  if (s.topology == spinmf::Topology::Ring) h(0, n - 1) = h(n - 1, 0) = 1.0;
  if (s.coupling_model == spinmf::CouplingModel::Heisenberg)
    for (int i = 0; i < n; ++i) h(i, i) = -(h.row(i).sum() - h(i, i));
  if (s.bias) h(s.bias->node - 1, s.bias->node - 1) += s.bias->magnitude;
  return h;
}

/// |<j| exp(-i H t) |i>|^2 by a dense matrix exponential.
inline double expm_probability(const Eigen::MatrixXd& h, int i, int j, double t) {
  const Eigen::MatrixXcd a = std::complex<double>(0.0, -t) * h.cast<std::complex<double>>();
  const Eigen::MatrixXcd u = a.exp();
  return std::norm(u(j, i));
}

/// Path-graph ITF from the closed-form spectrum 2cos(k pi/(n+1)), valid
/// because that spectrum is simple: p = (sum_k |v_k(i) v_k(j)|)^2.
inline double uniform_chain_itf(int n, int i, int j) {
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double c = 2.0 / (n + 1);
    s += std::abs(c * std::sin(i * k * std::numbers::pi / (n + 1)) * std::sin(j * k * std::numbers::pi / (n + 1)));
  }
  return s * s;
}

inline spinmf::NetworkSpec spec(spinmf::Topology t, int n,
                                spinmf::CouplingProfile p = spinmf::CouplingProfile::Uniform,
                                spinmf::CouplingModel m = spinmf::CouplingModel::XX) {
  spinmf::NetworkSpec s;
  s.topology = t;
  s.n = n;
  s.coupling_profile = p;
  s.coupling_model = m;
  return s;
}

}  // namespace fixtures
