#include "cwip/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cwip {

double analytic_two_point_n2(double theta, double beta) {
  if (!(theta >= 1.0)) throw std::invalid_argument("analytic_two_point_n2: theta must be >= 1");
  if (!(beta >= 0.0)) throw std::invalid_argument("analytic_two_point_n2: beta must be >= 0");
  const double p = -std::expm1(-2.0 * beta) / 2.0;
  if (p == 0.0) return 0.0;
  return p / (p + theta * (1.0 - p));
}

// Jacobi

SymmetricEigen jacobi_eigen(DenseMatrix a, std::size_t max_sweeps) {
  const std::size_t n = a.dim;
  SymmetricEigen out;
  out.vectors = DenseMatrix(n);
  for (std::size_t i = 0; i < n; ++i) out.vectors(i, i) = 1.0;

  double total = 0.0;
  for (double v : a.data) total += v * v;
  const double tol = std::max(total, std::numeric_limits<double>::min()) * 1e-30;

  for (std::size_t sweep = 0;; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    out.sweeps = sweep;
    if (off <= tol) break;
    if (sweep == max_sweeps) throw std::runtime_error("jacobi_eigen: no convergence after " + std::to_string(sweep) + " sweeps");

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = out.vectors(k, p), vkq = out.vectors(k, q);
          out.vectors(k, p) = c * vkp - s * vkq;
          out.vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  return out;
}

// QuantumModel

QuantumModel::QuantumModel(const FiniteGraph& graph, double beta) : n_(graph.n()), beta_(beta) {
  if (n_ > max_vertices) {
    throw std::invalid_argument("QuantumModel: n = " + std::to_string(n_) + " exceeds the dense limit of 12");
  }
  if (n_ == 0) throw std::invalid_argument("QuantumModel: empty graph");
  if (!(beta >= 0.0)) throw std::invalid_argument("QuantumModel: beta must be >= 0");
  for (std::uint64_t i = 0; i < graph.edge_count(); ++i) {
    const Edge e = graph.edge(i);
    edges_.emplace_back(e.x, e.y);
  }
  sectors_.assign(n_ + 1, {});
  for (std::uint32_t s = 0; s < (1u << n_); ++s) sectors_[std::popcount(s)].push_back(s);
}

DenseMatrix QuantumModel::sector_hamiltonian(std::size_t ups) const {
  const auto& basis = sectors_.at(ups);
  DenseMatrix h(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::uint32_t s = basis[i];
    for (const auto& [x, y] : edges_) {
      const bool bx = (s >> x) & 1u, by = (s >> y) & 1u;
      if (bx == by) {
        h(i, i) -= 0.5;  // P|s> = |s>
      } else {
        h(i, i) += 0.5;
        const std::uint32_t t = s ^ ((1u << x) | (1u << y));
        const auto j = static_cast<std::size_t>(std::lower_bound(basis.begin(), basis.end(), t) - basis.begin());
        h(j, i) -= 1.0;
      }
    }
  }
  return h;
}

DenseMatrix QuantumModel::dense_hamiltonian() const {
  const std::size_t dim = std::size_t{1} << n_;
  DenseMatrix h(dim);
  for (std::size_t ups = 0; ups <= n_; ++ups) {
    const auto& basis = sectors_[ups];
    const DenseMatrix block = sector_hamiltonian(ups);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) h(basis[i], basis[j]) = block(i, j);
    }
  }
  return h;
}

void QuantumModel::diagonalise() const {
  if (ready_) return;
  eigen_.clear();
  double ground = std::numeric_limits<double>::infinity();
  for (std::size_t ups = 0; ups <= n_; ++ups) {
    eigen_.push_back(jacobi_eigen(sector_hamiltonian(ups)));
    for (double e : eigen_.back().values) {
      if (!std::isfinite(e)) throw std::runtime_error("QuantumModel: non-finite eigenvalue");
      ground = std::min(ground, e);
    }
  }
  shift_ = ground;
  ready_ = true;
}

double QuantumModel::partition_function() const {
  diagonalise();
  double z = 0.0;
  for (const auto& eg : eigen_) {
    for (double e : eg.values) z += std::exp(-beta_ * (e - shift_));
  }
  return z * std::exp(-beta_ * shift_);
}

double QuantumModel::correlation(std::size_t x, std::size_t y) const {
  if (x >= n_ || y >= n_) throw std::invalid_argument("QuantumModel::correlation: vertex out of range");
  diagonalise();
  double num = 0.0, den = 0.0;
  for (std::size_t ups = 0; ups <= n_; ++ups) {
    const auto& basis = sectors_[ups];
    const auto& eg = eigen_[ups];
    const std::size_t d = basis.size();
    // S3_x S3_y is diagonal in the spin basis with entries +-1/4.
    std::vector<double> diag(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double sx = ((basis[i] >> x) & 1u) ? 0.5 : -0.5;
      const double sy = ((basis[i] >> y) & 1u) ? 0.5 : -0.5;
      diag[i] = sx * sy;
    }
    for (std::size_t k = 0; k < d; ++k) {
      const double w = std::exp(-beta_ * (eg.values[k] - shift_));
      double expect = 0.0;
      for (std::size_t i = 0; i < d; ++i) expect += eg.vectors(i, k) * eg.vectors(i, k) * diag[i];
      num += w * expect;
      den += w;
    }
  }
  if (!(den > 0.0)) throw std::runtime_error("QuantumModel: non-positive partition function");
  return num / den;
}

double heisenberg_correlation(const QuantumModel& model, std::size_t x, std::size_t y) {
  return model.correlation(x, y);
}

// Galton-Watson survival

SurvivalResult gw_survival(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gw_survival: lambda must be > 0");
  SurvivalResult r;
  r.lambda = lambda;
  if (lambda <= 1.0) return r;
  // f(z) = z - 1 + e^{-lambda z} is negative just above 0 and positive at 1.
  const auto f = [lambda](double z) { return z + std::expm1(-lambda * z); };
  double lo = 1e-300, hi = 1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  r.z = 0.5 * (lo + hi);
  r.residual = std::abs(f(r.z));
  return r;
}

// Poisson-Dirichlet(1)

std::vector<double> pd1_parts(Rng& rng, double remainder) {
  std::vector<double> parts;
  double rest = 1.0;
  while (rest >= remainder) {
    const double part = rng.uniform() * rest;
    parts.push_back(part);
    rest -= part;
  }
  return parts;
}

double pd1_largest_part_sample(Rng& rng) {
  const auto parts = pd1_parts(rng);
  return *std::max_element(parts.begin(), parts.end());
}

MeanEstimate pd1_largest_part_mean(std::size_t draws, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "pd1"));
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = pd1_largest_part_sample(rng);
    sum += x;
    sum2 += x * x;
  }
  MeanEstimate m;
  m.draws = draws;
  if (draws == 0) return m;
  const auto d = static_cast<double>(draws);
  m.mean = sum / d;
  const double var = draws > 1 ? (sum2 - d * m.mean * m.mean) / (d - 1.0) : 0.0;
  m.standard_error = std::sqrt(std::max(var, 0.0) / d);
  return m;
}

}  // namespace cwip
