#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cwip/graph.hpp"
#include "cwip/loops.hpp"
#include "cwip/process.hpp"
#include "cwip/random.hpp"

namespace cwip {

enum class Colour : std::uint8_t { white = 0, red = 1 };

/// Colouring of the loops (equivalently cycles) of one configuration, and the
/// induced red/white/mixed split of its crosses.
struct ColouringState {
  double theta = 1.0;
  std::vector<Colour> colour_per_cycle;   // indexed like CycleDecomposition::cycles
  std::vector<Colour> colour_per_vertex;  // colour of the loop through (x, 0)
  std::vector<Vertex> red_vertices_t0;    // R_0, increasing
  CrossConfig red_crosses;
  CrossConfig white_crosses;
  CrossConfig mixed_crosses;
};

/// Colours every cycle red with probability 1/theta, independently. Only the
/// colour fields are filled. Throws std::invalid_argument for theta < 1.
ColouringState colour_cycles(const CycleDecomposition& decomp, double theta, Rng& rng);

/// Splits the crosses of `config` by the colours of the loops of the two
/// strands meeting there: both red, both white, or mixed.
ColouringState classify_crosses(const CrossConfig& config, const LoopSet& loops, ColouringState colours);

/// Colour of each loop of `loops` under the vertex colouring q. Throws if
/// some loop visits time-0 vertices of different colours.
std::vector<Colour> loop_colours(const LoopSet& loops, std::span<const Colour> colour_per_vertex);

/// Per-vertex union of the red segments, merged into maximal intervals.
std::vector<std::vector<std::pair<double, double>>> red_point_set(const LoopSet& loops,
                                                                  std::span<const Colour> loop_colour);

/// psi_k: a_k leaves the red set, b_k joins it.
struct SwapMap {
  Vertex from = 0;
  Vertex to = 0;
};

/// Red-region dynamics driven by the mixed crosses alone.
struct TwistData {
  std::size_t n = 0;
  double beta = 0.0;
  std::vector<Vertex> red_t0;       // R_0, increasing
  std::vector<double> event_times;  // t_1 < t_2 < ...
  std::vector<SwapMap> swaps;       // (a_k, b_k)
  Permutation phi_tilde;            // h~_beta on R_0, identity elsewhere
  std::vector<std::vector<std::pair<double, Vertex>>> paths;  // breakpoints of h~_t(x), x in R_0

  /// Number of events with t_k <= t.
  std::size_t events_up_to(double t) const;

  /// Indicator of R_t over all n vertices.
  std::vector<char> red_set_at(double t) const;

  /// h~_t(x) for x in R_0; throws for x outside R_0 or t outside [0, beta].
  Vertex h_tilde(Vertex x, double t) const;

  bool in_red_t0(Vertex x) const;
};

/// Throws std::invalid_argument when a mixed cross does not join exactly one
/// red strand, or when the red set fails to return to R_0 at t = beta.
TwistData compute_twist(const CrossConfig& mixed, std::span<const Vertex> red_t0);

/// Independent interchange sample xi on the complete graph over R_0.
CrossConfig sample_xi(std::span<const Vertex> red_t0, std::size_t n, double beta, Rng& rng);

/// Red trajectories rebuilt from the twist and an auxiliary interchange
/// sample: h_t = h~_t o sigma_t.
struct RedReconstruction {
  TwistData twist;
  Trajectory sigma;
  Permutation phi;  // phi~ o sigma_beta, identity off R_0

  Vertex at(Vertex x, double t) const { return twist.h_tilde(sigma(x, t), t); }
};

/// Throws if a cross of xi touches a vertex outside R_0.
RedReconstruction reconstruct_red(const TwistData& twist, const CrossConfig& xi);

/// The points (h~_t(x) h~_t(y), t) for (xy, t) in xi.
CrossConfig map_xi_to_red_crosses(const TwistData& twist, const CrossConfig& xi);

struct RedRegionMeasure {
  double value = 0.0;
};

/// Lebesgue measure of {(xy, t) : x, y in R_t} within E x [0, beta).
RedRegionMeasure red_region_measure(const TwistData& twist, const FiniteGraph& graph);

/// Same, restricted to the time slab [from, to).
RedRegionMeasure red_region_measure(const TwistData& twist, const FiniteGraph& graph, double from, double to);

/// Per-sample summary consumed by verify_red_poisson.
struct RedPoissonObservation {
  std::uint64_t count = 0;
  double measure = 0.0;
  std::vector<std::uint64_t> slab_counts;
  std::vector<double> slab_measures;
};

RedPoissonObservation observe_red_poisson(const ColouringState& state, const TwistData& twist,
                                          const FiniteGraph& graph, std::size_t slabs = 2);

struct PoissonCheckReport {
  double statistic = 0.0;       // chi-square of binned PIT values, whole region
  double p_value = 0.0;         // Bonferroni combination of the two tests below
  double count_p_value = 0.0;
  double slab_statistic = 0.0;  // chi-square of per-slab PIT values
  double slab_p_value = 0.0;
  std::size_t n_samples = 0;
  std::size_t bins = 0;
  double significance = 0.0;
  bool passed = false;
};

/// Randomised probability-integral transform of each red count against
/// Poisson(red region measure), binned into equiprobable cells and tested
/// with chi-square. The per-sample uniforms are derived from (seed, sample
/// index) so the statistic is independent of evaluation order. Throws
/// std::invalid_argument for fewer than 100 samples.
PoissonCheckReport verify_red_poisson(std::span<const RedPoissonObservation> samples, double significance,
                                      std::uint64_t seed = 0);

PoissonCheckReport verify_red_poisson(std::span<const std::pair<ColouringState, TwistData>> samples,
                                      const FiniteGraph& graph, double significance, std::uint64_t seed = 0);

}  // namespace cwip
