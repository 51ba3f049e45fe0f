#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwip/colouring.hpp"
#include "cwip/process.hpp"
#include "cwip/random.hpp"
#include "cwip/sampler.hpp"
#include "cwip/union_find.hpp"

namespace cwip {

/// Thresholds delta at which P(|C_1| >= delta n) is reported.
inline constexpr std::array<double, 5> delta_grid{0.01, 0.02, 0.05, 0.1, 0.2};

enum class SamplerKind { direct, rejection, mcmc };

SamplerKind parse_sampler_kind(const std::string& name);
std::string to_string(SamplerKind kind);

struct ReplicaRecord {
  std::size_t replica = 0;
  std::size_t ell = 0;
  std::size_t c1 = 0;
  std::size_t c2 = 0;
  std::size_t crosses = 0;
  bool one_two_same_cycle = false;  // vertices 1 and 2 (1-based) share a cycle
  std::vector<std::size_t> sizes;   // non-increasing
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct CycleSummary {
  double mean_c1_fraction = 0.0;
  double median_c1_fraction = 0.0;
  Interval mean_ci;    // basic bootstrap, 95%
  Interval median_ci;  // basic bootstrap, 95%
  std::array<double, delta_grid.size()> p_c1_at_least{};
  double two_point_12 = 0.0;
  double two_point_12_stderr = 0.0;
  double mean_ell = 0.0;
  double mean_crosses = 0.0;
};

struct CycleStats {
  std::size_t n = 0;
  double lambda = 0.0;
  double theta = 1.0;
  std::vector<ReplicaRecord> records;  // ordered by replica index
  CycleSummary summary;
  MoveCounters moves;                  // MCMC telemetry, zero otherwise
  std::optional<double> mean_ess_ell;  // when chains emit several samples
  std::vector<CrossConfig> configs;    // by replica, only when requested
};

struct ExperimentConfig {
  std::size_t n = 0;
  double lambda = 1.0;
  WeightSpec weight = WeightSpec::constant(1.0);
  std::size_t replicas = 100;
  SamplerKind sampler = SamplerKind::mcmc;
  std::size_t burn_in_sweeps = 200;
  std::size_t thinning_sweeps = 5;
  /// MCMC only: consecutive thinned samples taken from each chain.
  std::size_t samples_per_chain = 1;
  double shift_probability = 0.0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t bootstrap_resamples = 1000;
  bool keep_configs = false;  // fill CycleStats::configs
};

ReplicaRecord make_record(std::size_t replica, const Permutation& pi);

/// Recomputes the summary of `stats.records`.
void summarize(CycleStats& stats, std::size_t bootstrap_resamples, std::uint64_t seed);

/// Replicas of |C_1| and friends drawn from the chosen sampler on K_n with
/// beta = lambda / n. The direct sampler requires a constant weight of 1.
/// Output is independent of the thread count.
CycleStats largest_cycle_experiment(const ExperimentConfig& config);

/// Records the cycles of phi o sigma_t with sigma_t an interchange sample at
/// t = lambda / n on K_n (n = phi.size()).
CycleStats twisted_interchange_experiment(const Permutation& phi, double lambda, std::size_t replicas,
                                          std::uint64_t seed, std::size_t threads = 0);

/// Graph whose components start as the cycles of phi (path edges from the
/// decomposition (x1 .. xm) = (x1 x2)(x2 x3)...(x_{m-1} x_m)) and merge as
/// transpositions are applied. Tracks the permutation sigma_t o phi.
class TranspositionGraph {
 public:
  explicit TranspositionGraph(const Permutation& phi);

  /// sigma <- (x y) o sigma, plus a dynamic edge {x, y}.
  void apply(Vertex x, Vertex y);

  std::size_t n() const { return current_.size(); }
  const std::vector<Edge>& base_edges() const { return base_edges_; }
  const std::vector<Edge>& dynamic_edges() const { return dynamic_edges_; }
  Permutation current() const { return Permutation(current_); }

  std::uint32_t component_of(Vertex v) { return components_.find(v); }
  std::uint32_t component_size(Vertex v) { return components_.size_of(v); }
  std::size_t component_count() const { return components_.components(); }

  /// Every cycle of the current permutation lies inside one component.
  bool cycles_within_components();

 private:
  std::vector<Vertex> current_;
  std::vector<Vertex> inverse_;
  std::vector<Edge> base_edges_;
  std::vector<Edge> dynamic_edges_;
  UnionFind components_;
};

TranspositionGraph build_transposition_graph(const Permutation& phi, const CrossConfig& crosses);

struct VertexMass {
  std::size_t k = 0;
  std::size_t mass_cycles = 0;      // vertices in cycles of size >= k
  std::size_t mass_components = 0;  // vertices in components of size >= k
  std::size_t defect = 0;           // in a component of size >= k but a cycle of size < k
};

/// Requires 1 <= k <= n.
VertexMass vertex_mass(TranspositionGraph& graph, std::size_t k);
std::size_t vertex_mass(const CycleDecomposition& decomp, std::size_t k);

/// t C(n,2) 4 k^2 / (n - 1).
double vertex_mass_defect_bound(std::size_t n, double t, std::size_t k);

// Distribution tests. Each throws std::invalid_argument with fewer than
// 100 observations on a side.

struct TestReport {
  std::string test;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::optional<Interval> ci;
};

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b);
TestReport ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf);

/// Two-sample chi-square homogeneity test on integer data. Adjacent values
/// are pooled until every pooled cell holds at least 10 observations.
TestReport chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Goodness of fit of integer data to a pmf on {0, 1, ...}, pooling the
/// tails until each cell expects at least 5 observations.
TestReport chi_square_gof(std::span<const std::int64_t> a, const std::function<double(std::int64_t)>& pmf);

/// Plug-in total variation distance between two empirical laws on a finite
/// set of categories, with a basic bootstrap 95% interval.
TestReport total_variation(std::span<const std::string> a, std::span<const std::string> b,
                           std::size_t bootstrap_resamples = 1000, std::uint64_t seed = 0);

/// Plug-in total variation distance of two count tables.
double total_variation_distance(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b);

/// Category key of a cycle type, e.g. "3,2,1".
std::string cycle_type_key(const std::vector<std::size_t>& sizes);

// Colouring diagnostics: recolour a fixed decomposition many times and check
// E'(N) = r n and Var'(N) <= |C_1| n for the red vertex count N.

struct RecolouringCheck {
  std::size_t n = 0;
  std::size_t c1 = 0;
  double mean = 0.0;
  double expected_mean = 0.0;
  double mean_z = 0.0;
  double variance = 0.0;
  double exact_variance = 0.0;  // sum r (1 - r) |C_i|^2
  double variance_bound = 0.0;  // |C_1| n
  bool mean_ok = false;
  bool variance_ok = false;
};

struct ColouringDiagnostics {
  std::vector<RecolouringCheck> checks;
  std::size_t mean_failures = 0;
  std::size_t variance_failures = 0;
  double max_abs_mean_z = 0.0;
  bool passed = false;
};

RecolouringCheck recolouring_check(const CycleDecomposition& decomp, double theta, std::size_t recolourings, Rng& rng);

/// Throws std::invalid_argument with fewer than 100 decompositions. The mean
/// check uses a 4.5 standard error band; the variance check compares the
/// empirical variance with the bound.
ColouringDiagnostics colouring_diagnostics(std::span<const CycleDecomposition> decomps, double theta,
                                           std::size_t recolourings, std::uint64_t seed);

/// Draws configurations on K_n at beta = lambda / n from P_theta with
/// theta = sample_theta, one independent chain (or rejection draw) per
/// sample, colours them with r = 1 / colour_theta and records the red cross
/// counts against the red region measure. With sample_theta != colour_theta
/// this is a negative control.
struct RedPoissonExperiment {
  std::size_t n = 50;
  double lambda = 1.0;
  double sample_theta = 2.0;
  double colour_theta = 2.0;
  std::size_t samples = 10000;
  SamplerKind sampler = SamplerKind::mcmc;
  std::size_t burn_in_sweeps = 200;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t slabs = 2;
};

std::vector<RedPoissonObservation> red_poisson_observations(const RedPoissonExperiment& config);

/// Keys "R0|images" of the red-restricted permutation, once from the sampled
/// configuration itself and once from phi~ o sigma_beta with a fresh xi.
struct TwistComparison {
  std::vector<std::string> direct;
  std::vector<std::string> reconstructed;
  std::size_t phi_tilde_nontrivial = 0;  // samples where phi~ is not the identity
};

TwistComparison twist_comparison(std::size_t n, double lambda, double theta, std::size_t samples, std::uint64_t seed,
                                 std::size_t threads = 0);

/// Key of pi restricted to a union of its cycles, images 1-based.
std::string restricted_key(const Permutation& pi, std::span<const Vertex> support);

/// Basic bootstrap 95% interval of a statistic.
Interval bootstrap_interval(std::span<const double> xs, const std::function<double(std::span<const double>)>& stat,
                            std::size_t resamples, std::uint64_t seed);

double median(std::vector<double> xs);

}  // namespace cwip
