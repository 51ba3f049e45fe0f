#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cwip/graph.hpp"
#include "cwip/process.hpp"
#include "cwip/random.hpp"

namespace cwip {

/// Weight of a loop as a function of its vertical length. Either constant
/// theta, or a general function bounded in [1, theta_max].
class WeightSpec {
 public:
  static WeightSpec constant(double theta);

  /// theta(gamma) = 2 cosh(h |gamma|), bounded by 2 cosh(h * max_length).
  static WeightSpec external_field(double h, double max_length);

  static WeightSpec per_loop(std::function<double(double)> weight, double theta_max);

  bool is_constant() const { return !weight_; }
  double theta() const { return theta_; }
  double theta_max() const { return theta_max_; }
  double field() const { return field_; }

  /// Weight of a loop of the given vertical length. Throws std::domain_error
  /// when the value falls outside [1, theta_max].
  double weight(double vertical_length) const;
  double log_weight(double vertical_length) const;

 private:
  double theta_ = 1.0;
  double theta_max_ = 1.0;
  double field_ = 0.0;
  std::function<double(double)> weight_;
};

/// Log of prod_gamma theta(gamma) for a permutation's cycles at horizon beta.
double full_log_weight(const Permutation& pi, double beta, const WeightSpec& weight);

/// MCMC state: the configuration with its permutation and cycle labelling
/// kept in sync incrementally.
class ChainState {
 public:
  ChainState(CrossConfig config, const WeightSpec& weight);

  const CrossConfig& config() const { return config_; }
  const Permutation& pi() const { return pi_; }
  std::size_t cycle_count() const { return cycles_; }
  double log_weight() const { return log_weight_; }
  CycleDecomposition decomp() const { return cycle_decompose(pi_); }

  bool same_cycle(Vertex a, Vertex b) const { return label_[a] == label_[b]; }
  std::size_t cycle_size_of(Vertex a) const { return size_[label_[a]]; }

  /// Size of the cycle containing `a` after right-multiplying pi by (a b),
  /// for a and b in the same cycle. Walks the new cycle without mutating.
  std::size_t split_size(Vertex a, Vertex b) const;

  /// Recomputes everything from the configuration and throws
  /// std::logic_error on any mismatch.
  void check_consistency(const WeightSpec& weight) const;

  // Mutations; each applies pi <- pi o (a b) for the given preimages.
  void insert(const Cross& c, Vertex a, Vertex b, double log_ratio);
  void erase(std::size_t position, Vertex a, Vertex b, double log_ratio);

 private:
  void apply_transposition(Vertex a, Vertex b);
  void relabel_from(Vertex start, std::uint32_t label);

  CrossConfig config_;
  Permutation pi_;
  std::vector<std::uint32_t> label_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> free_labels_;
  std::size_t cycles_ = 0;
  double log_weight_ = 0.0;
};

/// Weight ratio W(after)/W(before) for pi -> pi o (a b), computed from the
/// one or two affected loops only.
double loop_weight_ratio(const ChainState& state, Vertex a, Vertex b, const WeightSpec& weight);
double log_loop_weight_ratio(const ChainState& state, Vertex a, Vertex b, const WeightSpec& weight);

struct MoveCounters {
  std::uint64_t birth_proposed = 0;
  std::uint64_t birth_accepted = 0;
  std::uint64_t death_proposed = 0;
  std::uint64_t death_accepted = 0;
  std::uint64_t shift_proposed = 0;
  std::uint64_t shift_accepted = 0;

  double birth_rate() const { return birth_proposed ? double(birth_accepted) / double(birth_proposed) : 0.0; }
  double death_rate() const { return death_proposed ? double(death_accepted) / double(death_proposed) : 0.0; }
  double shift_rate() const { return shift_proposed ? double(shift_accepted) / double(shift_proposed) : 0.0; }
  MoveCounters& operator+=(const MoveCounters& o);
};

/// One birth/death Metropolis-Hastings move targeting prod theta(gamma)
/// relative to P_1; with probability `shift_probability` a time-shift move
/// is proposed instead.
void mcmc_step(ChainState& state, const FiniteGraph& graph, const WeightSpec& weight, Rng& rng,
               MoveCounters* counters = nullptr, double shift_probability = 0.0);

/// Acceptance probability of a birth proposal with weight ratio `ratio`.
double birth_acceptance(double ratio, double beta_edges, std::size_t k);
double death_acceptance(double ratio, double beta_edges, std::size_t k);

/// Parameters of a chain on K_n with beta = lambda / n.
struct SamplerConfig {
  std::size_t n = 0;
  double lambda = 1.0;
  WeightSpec weight = WeightSpec::constant(1.0);
  std::size_t burn_in_sweeps = 200;
  std::size_t thinning_sweeps = 5;
  std::uint64_t seed = 0;
  double shift_probability = 0.0;

  double beta() const { return lambda / static_cast<double>(n); }
  /// ceil(beta |E|), at least 1.
  std::size_t sweep_length() const;
  void validate() const;
};

struct ChainSummary {
  MoveCounters moves;
  std::vector<double> ell_trace;  // cycle count after every emitted sample
  double ess_ell = 0.0;
};

/// Burn-in, then emit a configuration every thinning_sweeps sweeps. The
/// stream depends only on the config (seed included).
std::vector<CrossConfig> mcmc_sample(const SamplerConfig& config, std::size_t count, ChainSummary* summary = nullptr);

/// Streaming form of mcmc_sample; `emit` receives each chain state.
ChainSummary mcmc_run(const SamplerConfig& config, std::size_t count,
                      const std::function<void(const ChainState&)>& emit);

/// Exact sampler: draw omega ~ P_1, accept with prob prod theta(gamma) /
/// theta_max^n (theta^{ell - n} for constant weights).
CrossConfig rejection_sample(const FiniteGraph& graph, double beta, const WeightSpec& weight, Rng& rng,
                             std::uint64_t* attempts = nullptr);

/// Effective sample size of a scalar trace (initial positive sequence).
double effective_sample_size(const std::vector<double>& trace);

}  // namespace cwip
