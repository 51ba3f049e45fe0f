#include "cwip/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cwip {

// WeightSpec

WeightSpec WeightSpec::constant(double theta) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw std::invalid_argument("WeightSpec: theta must be >= 1");
  WeightSpec w;
  w.theta_ = theta;
  w.theta_max_ = theta;
  return w;
}

WeightSpec WeightSpec::external_field(double h, double max_length) {
  if (!(max_length >= 0.0)) throw std::invalid_argument("WeightSpec: max_length must be >= 0");
  WeightSpec w;
  w.field_ = h;
  w.theta_max_ = 2.0 * std::cosh(h * max_length);
  w.theta_ = w.theta_max_;
  w.weight_ = [h](double len) { return 2.0 * std::cosh(h * len); };
  return w;
}

WeightSpec WeightSpec::per_loop(std::function<double(double)> weight, double theta_max) {
  if (!weight) throw std::invalid_argument("WeightSpec: empty weight function");
  if (!(theta_max >= 1.0)) throw std::invalid_argument("WeightSpec: theta_max must be >= 1");
  WeightSpec w;
  w.theta_ = theta_max;
  w.theta_max_ = theta_max;
  w.weight_ = std::move(weight);
  return w;
}

double WeightSpec::weight(double vertical_length) const {
  if (!weight_) return theta_;
  const double w = weight_(vertical_length);
  // Relative slack absorbs rounding in the bound itself.
  if (!(w >= 1.0 && w <= theta_max_ * (1.0 + 1e-12))) {
    throw std::domain_error("WeightSpec: loop weight " + std::to_string(w) + " outside [1, theta_max]");
  }
  return w;
}

double WeightSpec::log_weight(double vertical_length) const { return std::log(weight(vertical_length)); }

double full_log_weight(const Permutation& pi, double beta, const WeightSpec& weight) {
  const CycleDecomposition d = cycle_decompose(pi);
  if (weight.is_constant()) return static_cast<double>(d.count()) * std::log(weight.theta());
  double lw = 0.0;
  for (const auto& c : d.cycles) lw += weight.log_weight(beta * static_cast<double>(c.size()));
  return lw;
}

// ChainState

ChainState::ChainState(CrossConfig config, const WeightSpec& weight)
    : config_(std::move(config)), pi_(compose(config_)) {
  const std::size_t n = config_.n();
  label_.assign(n, std::numeric_limits<std::uint32_t>::max());
  size_.assign(n, 0);
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label_[s] != std::numeric_limits<std::uint32_t>::max()) continue;
    relabel_from(static_cast<Vertex>(s), next++);
  }
  cycles_ = next;
  for (std::uint32_t l = static_cast<std::uint32_t>(n); l-- > next;) free_labels_.push_back(l);
  log_weight_ = full_log_weight(pi_, config_.beta(), weight);
}

void ChainState::relabel_from(Vertex start, std::uint32_t label) {
  std::uint32_t count = 0;
  Vertex v = start;
  do {
    label_[v] = label;
    ++count;
    v = pi_(v);
  } while (v != start);
  size_[label] = count;
}

std::size_t ChainState::split_size(Vertex a, Vertex b) const {
  std::size_t count = 0;
  Vertex v = a;
  do {
    ++count;
    v = v == a ? pi_(b) : (v == b ? pi_(a) : pi_(v));
  } while (v != a);
  return count;
}

void ChainState::apply_transposition(Vertex a, Vertex b) {
  const std::uint32_t la = label_[a], lb = label_[b];
  if (la != lb) {
    // Merge: relabel the smaller cycle before the swap joins them.
    const bool a_smaller = size_[la] < size_[lb];
    const std::uint32_t keep = a_smaller ? lb : la;
    const std::uint32_t drop = a_smaller ? la : lb;
    const Vertex start = a_smaller ? a : b;
    const std::uint32_t merged = size_[la] + size_[lb];
    Vertex v = start;
    do {
      label_[v] = keep;
      v = pi_(v);
    } while (v != start);
    size_[keep] = merged;
    size_[drop] = 0;
    free_labels_.push_back(drop);
    pi_.compose_transposition_right(a, b);
    --cycles_;
    return;
  }
  // Split: walk both new cycles in lockstep and relabel the one that closes first.
  pi_.compose_transposition_right(a, b);
  Vertex pa = pi_(a), pb = pi_(b);
  std::uint32_t na = 1, nb = 1;
  while (pa != a && pb != b) {
    pa = pi_(pa);
    pb = pi_(pb);
    ++na;
    ++nb;
  }
  const Vertex start = pa == a ? a : b;
  const std::uint32_t fresh = free_labels_.back();
  free_labels_.pop_back();
  const std::uint32_t old_size = size_[la];
  relabel_from(start, fresh);
  size_[la] = old_size - size_[fresh];
  ++cycles_;
}

void ChainState::insert(const Cross& c, Vertex a, Vertex b, double log_ratio) {
  config_.insert(c);
  apply_transposition(a, b);
  log_weight_ += log_ratio;
}

void ChainState::erase(std::size_t position, Vertex a, Vertex b, double log_ratio) {
  config_.erase(position);
  apply_transposition(a, b);
  log_weight_ += log_ratio;
}

void ChainState::check_consistency(const WeightSpec& weight) const {
  const Permutation fresh = compose(config_);
  if (!(fresh == pi_)) throw std::logic_error("ChainState: cached permutation out of sync");
  const CycleDecomposition d = cycle_decompose(fresh);
  if (d.count() != cycles_) throw std::logic_error("ChainState: cycle count out of sync");
  for (const auto& cycle : d.cycles) {
    const std::uint32_t l = label_[cycle.front()];
    if (size_[l] != cycle.size()) throw std::logic_error("ChainState: cycle size out of sync");
    for (Vertex v : cycle) {
      if (label_[v] != l) throw std::logic_error("ChainState: cycle labels out of sync");
    }
  }
  const double lw = full_log_weight(fresh, config_.beta(), weight);
  if (std::abs(lw - log_weight_) > 1e-8 * std::max(1.0, std::abs(lw))) {
    throw std::logic_error("ChainState: log weight out of sync");
  }
}

double log_loop_weight_ratio(const ChainState& state, Vertex a, Vertex b, const WeightSpec& weight) {
  const bool split = state.same_cycle(a, b);
  if (weight.is_constant()) return (split ? 1.0 : -1.0) * std::log(weight.theta());
  const double beta = state.config().beta();
  const auto len = [beta](std::size_t s) { return beta * static_cast<double>(s); };
  if (split) {
    const std::size_t whole = state.cycle_size_of(a);
    const std::size_t part = state.split_size(a, b);
    return weight.log_weight(len(part)) + weight.log_weight(len(whole - part)) - weight.log_weight(len(whole));
  }
  const std::size_t sa = state.cycle_size_of(a), sb = state.cycle_size_of(b);
  return weight.log_weight(len(sa + sb)) - weight.log_weight(len(sa)) - weight.log_weight(len(sb));
}

double loop_weight_ratio(const ChainState& state, Vertex a, Vertex b, const WeightSpec& weight) {
  return std::exp(log_loop_weight_ratio(state, a, b, weight));
}

MoveCounters& MoveCounters::operator+=(const MoveCounters& o) {
  birth_proposed += o.birth_proposed;
  birth_accepted += o.birth_accepted;
  death_proposed += o.death_proposed;
  death_accepted += o.death_accepted;
  shift_proposed += o.shift_proposed;
  shift_accepted += o.shift_accepted;
  return *this;
}

double birth_acceptance(double ratio, double beta_edges, std::size_t k) {
  return std::min(1.0, ratio * beta_edges / static_cast<double>(k + 1));
}

double death_acceptance(double ratio, double beta_edges, std::size_t k) {
  if (k == 0) return 0.0;
  return std::min(1.0, ratio * static_cast<double>(k) / beta_edges);
}

namespace {

bool accept_log(Rng& rng, double log_alpha) {
  if (log_alpha >= 0.0) return true;
  return std::log(rng.uniform()) < log_alpha;
}

void birth_move(ChainState& s, const FiniteGraph& graph, const WeightSpec& weight, Rng& rng, MoveCounters* mc) {
  if (mc) ++mc->birth_proposed;
  const CrossConfig& cfg = s.config();
  const double beta = cfg.beta();
  const double beta_edges = beta * static_cast<double>(graph.edge_count());
  const Edge e = graph.random_edge(rng);
  const double t = rng.uniform() * beta;
  if (!(t < beta)) return;
  const std::size_t pos = cfg.lower_bound(t);
  if (pos < cfg.size() && cfg[pos].time == t) return;
  const auto [a, b] = preimages_before(cfg, pos, e.x, e.y);
  const double lr = log_loop_weight_ratio(s, a, b, weight);
  const double log_alpha = lr + std::log(beta_edges / static_cast<double>(cfg.size() + 1));
  if (!accept_log(rng, log_alpha)) return;
  s.insert(Cross{e.x, e.y, t}, a, b, lr);
  if (mc) ++mc->birth_accepted;
}

void death_move(ChainState& s, const FiniteGraph& graph, const WeightSpec& weight, Rng& rng, MoveCounters* mc) {
  if (mc) ++mc->death_proposed;
  const CrossConfig& cfg = s.config();
  const std::size_t k = cfg.size();
  if (k == 0) return;
  const double beta_edges = cfg.beta() * static_cast<double>(graph.edge_count());
  const std::size_t i = rng.below(k);
  const Cross c = cfg[i];
  const auto [a, b] = preimages_before(cfg, i, c.x, c.y);
  const double lr = log_loop_weight_ratio(s, a, b, weight);
  const double log_alpha = lr + std::log(static_cast<double>(k) / beta_edges);
  if (!accept_log(rng, log_alpha)) return;
  s.erase(i, a, b, lr);
  if (mc) ++mc->death_accepted;
}

void shift_move(ChainState& s, const WeightSpec& weight, Rng& rng, MoveCounters* mc) {
  if (mc) ++mc->shift_proposed;
  const std::size_t k = s.config().size();
  if (k == 0) return;
  const std::size_t i = rng.below(k);
  const double beta = s.config().beta();
  const double t = rng.uniform() * beta;
  if (!(t < beta)) return;
  // Symmetric proposal: delete then re-insert on the same edge.
  ChainState trial = s;
  const Cross c = trial.config()[i];
  const auto [a, b] = preimages_before(trial.config(), i, c.x, c.y);
  const double lr1 = log_loop_weight_ratio(trial, a, b, weight);
  trial.erase(i, a, b, lr1);
  const std::size_t pos = trial.config().lower_bound(t);
  if (pos < trial.config().size() && trial.config()[pos].time == t) return;
  const auto [a2, b2] = preimages_before(trial.config(), pos, c.x, c.y);
  const double lr2 = log_loop_weight_ratio(trial, a2, b2, weight);
  if (!accept_log(rng, lr1 + lr2)) return;
  trial.insert(Cross{c.x, c.y, t}, a2, b2, lr2);
  s = std::move(trial);
  if (mc) ++mc->shift_accepted;
}

}  // namespace

void mcmc_step(ChainState& state, const FiniteGraph& graph, const WeightSpec& weight, Rng& rng,
               MoveCounters* counters, double shift_probability) {
  if (shift_probability > 0.0 && rng.uniform() < shift_probability) {
    shift_move(state, weight, rng, counters);
    return;
  }
  if (rng.uniform() < 0.5) birth_move(state, graph, weight, rng, counters);
  else death_move(state, graph, weight, rng, counters);
}

// SamplerConfig

std::size_t SamplerConfig::sweep_length() const {
  const double edges = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(beta() * edges)));
}

void SamplerConfig::validate() const {
  if (n < 2) throw std::invalid_argument("SamplerConfig: n must be >= 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("SamplerConfig: lambda must be > 0");
  if (thinning_sweeps < 1) throw std::invalid_argument("SamplerConfig: thinning must be >= 1");
  if (!(shift_probability >= 0.0 && shift_probability < 1.0)) {
    throw std::invalid_argument("SamplerConfig: shift probability must lie in [0, 1)");
  }
}

ChainSummary mcmc_run(const SamplerConfig& config, std::size_t count,
                      const std::function<void(const ChainState&)>& emit) {
  config.validate();
  const FiniteGraph graph = FiniteGraph::complete(config.n);
  Rng rng(derive_seed(config.seed, "mcmc"));
  ChainState state(CrossConfig(config.n, config.beta()), config.weight);
  ChainSummary summary;
  const std::size_t sweep = config.sweep_length();
  const auto run_sweeps = [&](std::size_t sweeps) {
    for (std::size_t s = 0; s < sweeps * sweep; ++s) {
      mcmc_step(state, graph, config.weight, rng, &summary.moves, config.shift_probability);
    }
  };
  run_sweeps(config.burn_in_sweeps);
#ifndef NDEBUG
  state.check_consistency(config.weight);
#endif
  summary.ell_trace.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    run_sweeps(config.thinning_sweeps);
    summary.ell_trace.push_back(static_cast<double>(state.cycle_count()));
    emit(state);
  }
  summary.ess_ell = effective_sample_size(summary.ell_trace);
  return summary;
}

std::vector<CrossConfig> mcmc_sample(const SamplerConfig& config, std::size_t count, ChainSummary* summary) {
  std::vector<CrossConfig> out;
  out.reserve(count);
  ChainSummary s = mcmc_run(config, count, [&](const ChainState& st) { out.push_back(st.config()); });
  if (summary) *summary = std::move(s);
  return out;
}

CrossConfig rejection_sample(const FiniteGraph& graph, double beta, const WeightSpec& weight, Rng& rng,
                             std::uint64_t* attempts) {
  const double n = static_cast<double>(graph.n());
  const double log_max = std::log(weight.theta_max());
  std::uint64_t tries = 0;
  while (true) {
    ++tries;
    CrossConfig omega = sample_crosses(graph, beta, rng);
    const Permutation pi = compose(omega);
    const double log_accept = full_log_weight(pi, beta, weight) - n * log_max;
    if (log_accept >= 0.0 || std::log(rng.uniform()) < log_accept) {
      if (attempts) *attempts = tries;
      return omega;
    }
  }
}

double effective_sample_size(const std::vector<double>& trace) {
  const std::size_t n = trace.size();
  if (n < 4) return static_cast<double>(n);
  const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double x : trace) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  if (var <= 0.0) return static_cast<double>(n);
  const auto rho = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (trace[i] - mean) * (trace[i + lag] - mean);
    return s / (static_cast<double>(n) * var);
  };
  // Geyer's initial positive sequence.
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double pair = rho(2 * m) + rho(2 * m + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return static_cast<double>(n) / std::max(tau, 1.0 / static_cast<double>(n));
}

}  // namespace cwip
