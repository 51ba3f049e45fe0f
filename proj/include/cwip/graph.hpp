#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cwip/random.hpp"

namespace cwip {

/// Vertex label. 0-based inside the library, 1-based in every file and CLI.
using Vertex = std::uint32_t;

/// Unordered vertex pair, stored with x < y.
struct Edge {
  Vertex x = 0;
  Vertex y = 0;

  static Edge make(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices 0..n-1. The complete graph is not
/// materialised: edge queries and edge sampling use closed forms.
class FiniteGraph {
 public:
  static FiniteGraph complete(std::size_t n);

  /// Throws std::invalid_argument on self-loops, duplicates or out-of-range
  /// endpoints.
  FiniteGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return n_; }
  bool is_complete() const { return complete_; }
  std::uint64_t edge_count() const { return edge_count_; }

  bool has_edge(Vertex a, Vertex b) const;

  /// Index of edge {a,b} in [0, edge_count()). Throws if absent.
  std::uint64_t edge_index(Vertex a, Vertex b) const;
  Edge edge(std::uint64_t index) const;

  Edge random_edge(Rng& rng) const;

  /// Neighbours of v in increasing order. Not available for complete graphs.
  std::span<const Vertex> neighbours(Vertex v) const;

  /// Number of edges with both endpoints flagged in `member` (size n).
  std::uint64_t edges_within(std::span<const char> member) const;

 private:
  FiniteGraph() = default;

  std::size_t n_ = 0;
  bool complete_ = false;
  std::uint64_t edge_count_ = 0;
  bool implicit_ = false;  // complete graph without a materialised edge list
  std::vector<Edge> edges_;  // sorted
  std::vector<std::vector<Vertex>> adjacency_;
};

}  // namespace cwip
