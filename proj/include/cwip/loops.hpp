#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cwip/process.hpp"

namespace cwip {

/// Half-open vertical interval {vertex} x [start, end).
struct LoopSegment {
  Vertex vertex = 0;
  double start = 0.0;
  double end = 0.0;

  friend bool operator==(const LoopSegment&, const LoopSegment&) = default;
};

/// A closed loop of the graphical representation, listed in traversal order
/// from (root, 0) upwards. Consecutive segments meet at a cross or across the
/// periodic boundary t = beta ~ t = 0.
struct Loop {
  Vertex root = 0;
  std::vector<LoopSegment> segments;
  /// Time-0 vertices in visiting order: root, pi(root), pi^2(root), ...
  std::vector<Vertex> time0_vertices;

  /// Sum of segment lengths (rounded to double).
  double vertical_length() const;

  /// Exact test: vertical length == multiple * beta.
  bool vertical_length_equals(double beta, std::size_t multiple) const;
};

struct LoopSet {
  double beta = 0.0;
  std::vector<Loop> loops;                 // ordered by root
  std::vector<std::size_t> loop_of_cycle;  // cycle index (cycle_decompose order) -> loop index
  std::vector<std::size_t> loop_of_vertex;  // loop through (x, 0)
};

/// Follows vertical intervals upward from each unvisited (x, 0), jumping at
/// crosses and wrapping at t = beta, until the start point recurs.
LoopSet build_loops(const CrossConfig& config);

/// h_t(x): position at time t of the strand that starts at (x, 0).
/// Right-continuous; jumps only at cross times.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(const CrossConfig& config);

  std::size_t n() const { return paths_.size(); }
  double beta() const { return beta_; }

  /// Throws std::out_of_range for t outside [0, beta].
  Vertex operator()(Vertex x, double t) const;

  /// The whole map h_t as a permutation.
  Permutation at(double t) const;

  /// Breakpoints of strand x: (time, position) pairs starting with (0, x).
  const std::vector<std::pair<double, Vertex>>& path(Vertex x) const { return paths_.at(x); }

 private:
  double beta_ = 0.0;
  std::vector<std::vector<std::pair<double, Vertex>>> paths_;
};

Trajectory trajectory(const CrossConfig& config);

/// Loop index of the two strands meeting at each cross, in cross order:
/// first for the strand arriving at c.x, second for c.y.
std::vector<std::pair<std::size_t, std::size_t>> strand_loops_at_crosses(const CrossConfig& config,
                                                                         const LoopSet& loops);

}  // namespace cwip
