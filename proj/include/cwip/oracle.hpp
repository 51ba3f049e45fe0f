#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cwip/graph.hpp"
#include "cwip/random.hpp"

namespace cwip {

/// P_theta(1 <-> 2) on the single edge graph: p / (p + theta (1 - p)) with
/// p = (1 - e^{-2 beta}) / 2 the probability of an odd cross count.
double analytic_two_point_n2(double theta, double beta);

/// Row-major dense real symmetric matrix.
struct DenseMatrix {
  std::size_t dim = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t d) : dim(d), data(d * d, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * dim + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * dim + j]; }
};

struct SymmetricEigen {
  std::vector<double> values;
  DenseMatrix vectors;  // column k is the eigenvector of values[k]
  std::size_t sweeps = 0;
};

/// Cyclic Jacobi rotations. Throws std::runtime_error if the off-diagonal
/// mass has not converged after `max_sweeps`.
SymmetricEigen jacobi_eigen(DenseMatrix a, std::size_t max_sweeps = 100);

/// Spin-1/2 Heisenberg ferromagnet H = -2 sum_{xy in E} S_x . S_y, assembled
/// as -sum_{xy} (P_xy - 1/2) with P_xy the swap of the spins at x and y.
/// Basis state s has spin up at x iff bit x of s is set. H commutes with the
/// total magnetisation, so it is stored and diagonalised sector by sector.
class QuantumModel {
 public:
  static constexpr std::size_t max_vertices = 12;

  /// Throws std::invalid_argument when n > 12.
  QuantumModel(const FiniteGraph& graph, double beta);

  std::size_t n() const { return n_; }
  double beta() const { return beta_; }

  /// Full 2^n x 2^n Hamiltonian. Memory grows as 4^n; intended for small n.
  DenseMatrix dense_hamiltonian() const;

  /// Block of H on the sector with `ups` up spins, in increasing basis order.
  DenseMatrix sector_hamiltonian(std::size_t ups) const;
  const std::vector<std::uint32_t>& sector_basis(std::size_t ups) const { return sectors_.at(ups); }

  /// tr(e^{-beta H}).
  double partition_function() const;

  /// tr(S3_x S3_y e^{-beta H}) / tr(e^{-beta H}).
  double correlation(std::size_t x, std::size_t y) const;

 private:
  void diagonalise() const;

  std::size_t n_ = 0;
  double beta_ = 0.0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::vector<std::uint32_t>> sectors_;

  // Spectrum cache: per sector eigenvalues and squared eigenvector entries.
  mutable bool ready_ = false;
  mutable double shift_ = 0.0;  // ground-state energy, for overflow-free exponentials
  mutable std::vector<SymmetricEigen> eigen_;
};

/// <S3_x S3_y> for the model.
double heisenberg_correlation(const QuantumModel& model, std::size_t x, std::size_t y);

struct SurvivalResult {
  double lambda = 0.0;
  double z = 0.0;
  double residual = 0.0;  // |z - 1 + e^{-lambda z}|
};

/// Survival probability of a Galton-Watson process with Poisson(lambda)
/// offspring: 0 for lambda <= 1, else the positive root of z = 1 - e^{-lambda z}
/// found by bisection to absolute tolerance 1e-12.
SurvivalResult gw_survival(double lambda);

/// Parts of a GEM(1) stick-breaking sequence, generated until the remaining
/// stick is below `remainder`.
std::vector<double> pd1_parts(Rng& rng, double remainder = 1e-9);

/// Largest part of a PD(1) sample.
double pd1_largest_part_sample(Rng& rng);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t draws = 0;
};

MeanEstimate pd1_largest_part_mean(std::size_t draws, std::uint64_t seed);

/// Reference E[largest part of PD(1)] from 10^6 draws of pd1_largest_part_sample
/// (seed 2024); standard error 1.9e-4. Agrees with the Golomb-Dickman constant.
inline constexpr double pd1_largest_part_reference = 0.62431527442667822;

}  // namespace cwip
