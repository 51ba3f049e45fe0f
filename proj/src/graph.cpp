#include "cwip/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cwip {

FiniteGraph FiniteGraph::complete(std::size_t n) {
  FiniteGraph g;
  g.n_ = n;
  g.complete_ = true;
  g.implicit_ = true;
  g.edge_count_ = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
  return g;
}

FiniteGraph::FiniteGraph(std::size_t n, std::vector<Edge> edges) : n_(n), adjacency_(n) {
  for (auto& e : edges) {
    if (e.x == e.y) throw std::invalid_argument("FiniteGraph: self-loop at vertex " + std::to_string(e.x + 1));
    if (e.x >= n || e.y >= n) throw std::invalid_argument("FiniteGraph: edge endpoint out of range");
    e = Edge::make(e.x, e.y);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("FiniteGraph: duplicate edge");
  }
  for (const auto& e : edges) {
    adjacency_[e.x].push_back(e.y);
    adjacency_[e.y].push_back(e.x);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  edge_count_ = edges.size();
  complete_ = edge_count_ == static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2 && n > 0;
  edges_ = std::move(edges);
}

bool FiniteGraph::has_edge(Vertex a, Vertex b) const {
  if (a == b || a >= n_ || b >= n_) return false;
  if (complete_) return true;
  const auto& adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::uint64_t FiniteGraph::edge_index(Vertex a, Vertex b) const {
  if (!has_edge(a, b)) throw std::invalid_argument("FiniteGraph::edge_index: no such edge");
  const Edge e = Edge::make(a, b);
  if (implicit_) {
    // Row-major rank of (x, y), x < y, in the strict upper triangle.
    const std::uint64_t x = e.x, y = e.y, n = n_;
    return x * n - x * (x + 1) / 2 + (y - x - 1);
  }
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e, [](const Edge& l, const Edge& r) {
    return l.x != r.x ? l.x < r.x : l.y < r.y;
  });
  return static_cast<std::uint64_t>(it - edges_.begin());
}

Edge FiniteGraph::edge(std::uint64_t index) const {
  if (index >= edge_count_) throw std::out_of_range("FiniteGraph::edge: index out of range");
  if (!implicit_) return edges_[index];
  std::uint64_t x = 0;
  std::uint64_t row = n_ - 1;
  while (index >= row) {
    index -= row;
    ++x;
    --row;
  }
  return Edge{static_cast<Vertex>(x), static_cast<Vertex>(x + 1 + index)};
}

Edge FiniteGraph::random_edge(Rng& rng) const {
  if (edge_count_ == 0) throw std::logic_error("FiniteGraph::random_edge: graph has no edges");
  if (implicit_) {
    const auto a = static_cast<Vertex>(rng.below(n_));
    auto b = static_cast<Vertex>(rng.below(n_ - 1));
    if (b >= a) ++b;
    return Edge::make(a, b);
  }
  return edges_[rng.below(edges_.size())];
}

std::span<const Vertex> FiniteGraph::neighbours(Vertex v) const {
  if (implicit_) throw std::logic_error("FiniteGraph::neighbours: complete graph is implicit");
  return adjacency_.at(v);
}

std::uint64_t FiniteGraph::edges_within(std::span<const char> member) const {
  if (member.size() != n_) throw std::invalid_argument("FiniteGraph::edges_within: size mismatch");
  if (implicit_) {
    const auto m = static_cast<std::uint64_t>(std::count_if(member.begin(), member.end(), [](char c) { return c != 0; }));
    return m * (m > 0 ? m - 1 : 0) / 2;
  }
  std::uint64_t count = 0;
  for (const auto& e : edges_) count += (member[e.x] && member[e.y]) ? 1 : 0;
  return count;
}

}  // namespace cwip
