#pragma once

#include <initializer_list>
#include <tuple>
#include <vector>

#include "cwip/graph.hpp"
#include "cwip/process.hpp"
#include "cwip/random.hpp"

namespace fixtures {

using cwip::Cross;
using cwip::CrossConfig;
using cwip::Vertex;

// Vertices are 1-based here, as in the figures.
inline CrossConfig config(std::size_t n, double beta, std::initializer_list<std::tuple<int, int, double>> crosses) {
  std::vector<Cross> cs;
  for (const auto& [x, y, t] : crosses) cs.push_back(Cross::make(static_cast<Vertex>(x - 1), static_cast<Vertex>(y - 1), t));
  return CrossConfig(n, beta, std::move(cs));
}

// pi = (1,3)(2,6,7,4)(9,10) on ten vertices. With the cycles (2,6,7,4) and
// (9,10) red, the mixed crosses are the ones at 0.1, 0.2, 0.3, 0.6, 0.7 and
// they twist R_0 = {2,4,6,7,9,10} by (9,10).
inline CrossConfig figure_one() {
  return config(10, 1.0,
                {{1, 3, 0.05}, {5, 10, 0.1}, {2, 6, 0.15}, {9, 10, 0.2}, {2, 7, 0.25}, {5, 9, 0.3}, {2, 4, 0.35},
                 {4, 8, 0.6}, {4, 8, 0.7}});
}

inline cwip::Permutation perm(std::initializer_list<int> one_based_image) {
  std::vector<Vertex> image;
  for (int v : one_based_image) image.push_back(static_cast<Vertex>(v - 1));
  return cwip::Permutation(std::move(image));
}

inline CrossConfig random_config(cwip::Rng& rng, std::size_t n, double beta) {
  return cwip::sample_crosses(cwip::FiniteGraph::complete(n), beta, rng);
}

}  // namespace fixtures
