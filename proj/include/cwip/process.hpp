#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "cwip/graph.hpp"
#include "cwip/random.hpp"

namespace cwip {

/// A timed transposition (xy, t). Endpoints are stored with x < y.
struct Cross {
  Vertex x = 0;
  Vertex y = 0;
  double time = 0.0;

  static Cross make(Vertex a, Vertex b, double t) { return a < b ? Cross{a, b, t} : Cross{b, a, t}; }
  friend bool operator==(const Cross&, const Cross&) = default;
};

/// Finite set of crosses in E x [0, beta), kept sorted by strictly increasing
/// time. Construction validates; insert/erase keep the invariants.
class CrossConfig {
 public:
  CrossConfig() = default;

  /// Throws std::invalid_argument when a cross is out of range, a self-loop,
  /// outside [0, beta), or times are not strictly increasing.
  CrossConfig(std::size_t n, double beta, std::vector<Cross> crosses = {});

  /// Sorts `crosses` by time first. Exact ties are still rejected.
  static CrossConfig from_unsorted(std::size_t n, double beta, std::vector<Cross> crosses);

  std::size_t n() const { return n_; }
  double beta() const { return beta_; }
  std::size_t size() const { return crosses_.size(); }
  bool empty() const { return crosses_.empty(); }
  const std::vector<Cross>& crosses() const { return crosses_; }
  const Cross& operator[](std::size_t i) const { return crosses_[i]; }

  /// Position at which a cross with time `t` would be inserted.
  std::size_t lower_bound(double t) const;

  /// Inserts and returns the position. Throws on a duplicate time.
  std::size_t insert(const Cross& c);
  void erase(std::size_t position);

  friend bool operator==(const CrossConfig&, const CrossConfig&) = default;

 private:
  void validate(const Cross& c) const;

  std::size_t n_ = 0;
  double beta_ = 0.0;
  std::vector<Cross> crosses_;
};

/// Bijection of {0..n-1}; image[x] = pi(x).
class Permutation {
 public:
  Permutation() = default;
  static Permutation identity(std::size_t n);

  /// Throws std::invalid_argument unless `image` is a bijection.
  explicit Permutation(std::vector<Vertex> image);

  std::size_t size() const { return image_.size(); }
  Vertex operator()(Vertex x) const { return image_[x]; }
  const std::vector<Vertex>& image() const { return image_; }

  Permutation inverse() const;
  bool is_identity() const;

  /// Right-multiplies by the transposition (a b): pi <- pi o (a b).
  void compose_transposition_right(Vertex a, Vertex b) { std::swap(image_[a], image_[b]); }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Vertex> image_;
};

/// outer o inner (inner applied first).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// Disjoint cycles, singletons included, sorted by non-increasing size. Ties
/// are broken by the smallest vertex the cycle contains; each cycle starts at
/// its smallest vertex and lists x, pi(x), pi^2(x), ...
struct CycleDecomposition {
  std::vector<std::vector<Vertex>> cycles;
  std::vector<std::size_t> cycle_of;  // vertex -> index into cycles

  std::size_t count() const { return cycles.size(); }
  std::size_t largest() const { return cycles.empty() ? 0 : cycles.front().size(); }
  std::vector<std::size_t> sizes() const;
};

/// Rate-1 Poisson process on every edge of `graph` over [0, beta), merged
/// and time-sorted. Exact time ties are broken by edge index.
CrossConfig sample_crosses(const FiniteGraph& graph, double beta, Rng& rng);

/// pi = tau_N ... tau_1: the earliest transposition acts first.
Permutation compose(const CrossConfig& config);

/// Same as compose(config) but checks the crosses against a vertex count.
Permutation compose(const CrossConfig& config, std::size_t n);

CycleDecomposition cycle_decompose(const Permutation& pi);

/// ell(omega + {c}) - ell(omega), computed from the preimages of c's
/// endpoints under the product of the crosses before c.time. Throws on a
/// duplicate time.
int insert_delta_cycles(const CrossConfig& config, const Cross& c);

/// Preimages (B^-1(x), B^-1(y)) where B is the product of the first
/// `position` crosses of `config`.
std::pair<Vertex, Vertex> preimages_before(const CrossConfig& config, std::size_t position, Vertex x, Vertex y);

/// True iff x and y lie in the same cycle (x == y included).
bool two_point_indicator(const CycleDecomposition& decomp, Vertex x, Vertex y);

}  // namespace cwip
