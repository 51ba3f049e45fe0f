#include "cwip/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cwip/distributions.hpp"
#include "cwip/parallel.hpp"

namespace cwip {

SamplerKind parse_sampler_kind(const std::string& name) {
  if (name == "direct") return SamplerKind::direct;
  if (name == "rejection") return SamplerKind::rejection;
  if (name == "mcmc") return SamplerKind::mcmc;
  throw std::invalid_argument("unknown sampler '" + name + "' (expected direct, rejection or mcmc)");
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::direct: return "direct";
    case SamplerKind::rejection: return "rejection";
    case SamplerKind::mcmc: return "mcmc";
  }
  return "unknown";
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Interval bootstrap_interval(std::span<const double> xs, const std::function<double(std::span<const double>)>& stat,
                            std::size_t resamples, std::uint64_t seed) {
  if (xs.empty() || resamples == 0) return {};
  const double estimate = stat(xs);
  Rng rng(derive_seed(seed, "bootstrap"));
  std::vector<double> buffer(xs.size());
  std::vector<double> values;
  values.reserve(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    for (auto& v : buffer) v = xs[rng.below(xs.size())];
    values.push_back(stat(buffer));
  }
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {2.0 * estimate - quantile(0.975), 2.0 * estimate - quantile(0.025)};
}

ReplicaRecord make_record(std::size_t replica, const Permutation& pi) {
  const CycleDecomposition d = cycle_decompose(pi);
  ReplicaRecord r;
  r.replica = replica;
  r.ell = d.count();
  r.sizes = d.sizes();
  r.c1 = r.sizes.empty() ? 0 : r.sizes[0];
  r.c2 = r.sizes.size() > 1 ? r.sizes[1] : 0;
  r.one_two_same_cycle = pi.size() >= 2 && d.cycle_of[0] == d.cycle_of[1];
  return r;
}

void summarize(CycleStats& stats, std::size_t bootstrap_resamples, std::uint64_t seed) {
  CycleSummary s;
  const auto& recs = stats.records;
  if (recs.empty() || stats.n == 0) {
    stats.summary = s;
    return;
  }
  const auto n = static_cast<double>(stats.n);
  const auto count = static_cast<double>(recs.size());
  std::vector<double> frac;
  frac.reserve(recs.size());
  double ell = 0.0, crosses = 0.0, same = 0.0;
  for (const auto& r : recs) {
    frac.push_back(static_cast<double>(r.c1) / n);
    ell += static_cast<double>(r.ell);
    crosses += static_cast<double>(r.crosses);
    same += r.one_two_same_cycle ? 1.0 : 0.0;
  }
  const auto mean_of = [](std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  const auto median_of = [](std::span<const double> v) { return median(std::vector<double>(v.begin(), v.end())); };
  s.mean_c1_fraction = mean_of(frac);
  s.median_c1_fraction = median_of(frac);
  s.mean_ci = bootstrap_interval(frac, mean_of, bootstrap_resamples, derive_seed(seed, "mean-ci"));
  s.median_ci = bootstrap_interval(frac, median_of, bootstrap_resamples, derive_seed(seed, "median-ci"));
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    const double threshold = delta_grid[j] * n;
    const auto hits = std::count_if(recs.begin(), recs.end(),
                                    [&](const ReplicaRecord& r) { return static_cast<double>(r.c1) >= threshold; });
    s.p_c1_at_least[j] = static_cast<double>(hits) / count;
  }
  s.two_point_12 = same / count;
  s.two_point_12_stderr = std::sqrt(s.two_point_12 * (1.0 - s.two_point_12) / count);
  s.mean_ell = ell / count;
  s.mean_crosses = crosses / count;
  stats.summary = s;
}

CycleStats largest_cycle_experiment(const ExperimentConfig& config) {
  if (config.n < 2) throw std::invalid_argument("largest_cycle_experiment: n must be >= 2");
  if (!(config.lambda > 0.0)) throw std::invalid_argument("largest_cycle_experiment: lambda must be > 0");
  if (config.replicas == 0) throw std::invalid_argument("largest_cycle_experiment: replicas must be positive");
  if (config.sampler == SamplerKind::direct && !(config.weight.is_constant() && config.weight.theta() == 1.0)) {
    throw std::invalid_argument("largest_cycle_experiment: the direct sampler only draws from theta = 1");
  }
  CycleStats stats;
  stats.n = config.n;
  stats.lambda = config.lambda;
  stats.theta = config.weight.theta();
  stats.records.resize(config.replicas);
  if (config.keep_configs) stats.configs.resize(config.replicas);

  const double beta = config.lambda / static_cast<double>(config.n);
  const FiniteGraph graph = FiniteGraph::complete(config.n);

  if (config.sampler == SamplerKind::mcmc) {
    const std::size_t per_chain = std::max<std::size_t>(1, config.samples_per_chain);
    const std::size_t chains = (config.replicas + per_chain - 1) / per_chain;
    std::vector<ChainSummary> summaries(chains);
    parallel_for(chains, config.threads, [&](std::size_t j) {
      SamplerConfig sc;
      sc.n = config.n;
      sc.lambda = config.lambda;
      sc.weight = config.weight;
      sc.burn_in_sweeps = config.burn_in_sweeps;
      sc.thinning_sweeps = config.thinning_sweeps;
      sc.shift_probability = config.shift_probability;
      sc.seed = derive_seed(config.seed, "chain", j);
      const std::size_t first = j * per_chain;
      const std::size_t count = std::min(per_chain, config.replicas - first);
      std::size_t k = 0;
      summaries[j] = mcmc_run(sc, count, [&](const ChainState& st) {
        ReplicaRecord r = make_record(first + k, st.pi());
        r.crosses = st.config().size();
        stats.records[first + k] = std::move(r);
        if (config.keep_configs) stats.configs[first + k] = st.config();
        ++k;
      });
    });
    double ess = 0.0;
    std::size_t ess_chains = 0;
    for (const auto& s : summaries) {
      stats.moves += s.moves;
      if (s.ell_trace.size() >= 4) {
        ess += s.ess_ell;
        ++ess_chains;
      }
    }
    if (ess_chains > 0) stats.mean_ess_ell = ess / static_cast<double>(ess_chains);
  } else {
    parallel_for(config.replicas, config.threads, [&](std::size_t i) {
      Rng rng(derive_seed(config.seed, "replica", i));
      const CrossConfig omega = config.sampler == SamplerKind::direct
                                    ? sample_crosses(graph, beta, rng)
                                    : rejection_sample(graph, beta, config.weight, rng);
      ReplicaRecord r = make_record(i, compose(omega));
      r.crosses = omega.size();
      stats.records[i] = std::move(r);
      if (config.keep_configs) stats.configs[i] = omega;
    });
  }
  summarize(stats, config.bootstrap_resamples, config.seed);
  return stats;
}

CycleStats twisted_interchange_experiment(const Permutation& phi, double lambda, std::size_t replicas,
                                          std::uint64_t seed, std::size_t threads) {
  if (!(lambda > 0.0)) throw std::invalid_argument("twisted_interchange_experiment: lambda must be > 0");
  const std::size_t n = phi.size();
  CycleStats stats;
  stats.n = n;
  stats.lambda = lambda;
  stats.theta = 1.0;
  stats.records.resize(replicas);
  const FiniteGraph graph = FiniteGraph::complete(n);
  const double t = lambda / static_cast<double>(n);
  parallel_for(replicas, threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "twisted", i));
    const CrossConfig sigma = sample_crosses(graph, t, rng);
    ReplicaRecord r = make_record(i, compose(phi, compose(sigma)));
    r.crosses = sigma.size();
    stats.records[i] = std::move(r);
  });
  summarize(stats, 1000, seed);
  return stats;
}

// TranspositionGraph

TranspositionGraph::TranspositionGraph(const Permutation& phi)
    : current_(phi.image()), inverse_(phi.inverse().image()), components_(phi.size()) {
  for (const auto& cycle : cycle_decompose(phi).cycles) {
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
      base_edges_.push_back(Edge::make(cycle[i], cycle[i + 1]));
      components_.unite(cycle[i], cycle[i + 1]);
    }
  }
}

void TranspositionGraph::apply(Vertex x, Vertex y) {
  if (x >= current_.size() || y >= current_.size() || x == y) {
    throw std::invalid_argument("TranspositionGraph::apply: invalid transposition");
  }
  const Vertex zx = inverse_[x], zy = inverse_[y];
  current_[zx] = y;
  current_[zy] = x;
  std::swap(inverse_[x], inverse_[y]);
  dynamic_edges_.push_back(Edge::make(x, y));
  components_.unite(x, y);
}

bool TranspositionGraph::cycles_within_components() {
  for (std::size_t z = 0; z < current_.size(); ++z) {
    if (components_.find(static_cast<std::uint32_t>(z)) != components_.find(current_[z])) return false;
  }
  return true;
}

TranspositionGraph build_transposition_graph(const Permutation& phi, const CrossConfig& crosses) {
  if (crosses.n() != phi.size()) throw std::invalid_argument("build_transposition_graph: size mismatch");
  TranspositionGraph g(phi);
  for (const Cross& c : crosses.crosses()) g.apply(c.x, c.y);
  return g;
}

VertexMass vertex_mass(TranspositionGraph& graph, std::size_t k) {
  const std::size_t n = graph.n();
  if (k < 1 || k > n) throw std::invalid_argument("vertex_mass: k must lie in [1, n]");
  const CycleDecomposition d = cycle_decompose(graph.current());
  VertexMass m;
  m.k = k;
  for (std::size_t v = 0; v < n; ++v) {
    const bool big_cycle = d.cycles[d.cycle_of[v]].size() >= k;
    const bool big_component = graph.component_size(static_cast<Vertex>(v)) >= k;
    m.mass_cycles += big_cycle ? 1 : 0;
    m.mass_components += big_component ? 1 : 0;
    m.defect += (big_component && !big_cycle) ? 1 : 0;
  }
  return m;
}

std::size_t vertex_mass(const CycleDecomposition& decomp, std::size_t k) {
  if (k < 1 || k > decomp.cycle_of.size()) throw std::invalid_argument("vertex_mass: k must lie in [1, n]");
  std::size_t mass = 0;
  for (const auto& c : decomp.cycles) mass += c.size() >= k ? c.size() : 0;
  return mass;
}

double vertex_mass_defect_bound(std::size_t n, double t, std::size_t k) {
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return t * (nd * (nd - 1.0) / 2.0) * 4.0 * kd * kd / (nd - 1.0);
}

// Distribution tests

namespace {

void require_power(std::size_t na, std::size_t nb, const char* who) {
  if (na < 100 || nb < 100) throw std::invalid_argument(std::string(who) + ": need at least 100 observations per side");
}

}  // namespace

TestReport ks_two_sample(std::span<const double> a_in, std::span<const double> b_in) {
  require_power(a_in.size(), b_in.size(), "ks_two_sample");
  std::vector<double> a(a_in.begin(), a_in.end()), b(b_in.begin(), b_in.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  TestReport r;
  r.test = "ks_two_sample";
  r.statistic = d;
  r.p_value = kolmogorov_sf((en + 0.12 + 0.11 / en) * d);
  r.n_a = a.size();
  r.n_b = b.size();
  return r;
}

TestReport ks_one_sample(std::span<const double> a_in, const std::function<double(double)>& cdf) {
  require_power(a_in.size(), 100, "ks_one_sample");
  std::vector<double> a(a_in.begin(), a_in.end());
  std::sort(a.begin(), a.end());
  const auto n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double en = std::sqrt(n);
  TestReport r;
  r.test = "ks_one_sample";
  r.statistic = d;
  r.p_value = kolmogorov_sf((en + 0.12 + 0.11 / en) * d);
  r.n_a = a.size();
  return r;
}

TestReport chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  require_power(a.size(), b.size(), "chi_square_two_sample");
  std::map<std::int64_t, std::pair<double, double>> table;
  for (auto v : a) table[v].first += 1.0;
  for (auto v : b) table[v].second += 1.0;
  const auto na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double total = na + nb;

  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> acc{0.0, 0.0};
  for (const auto& [value, counts] : table) {
    acc.first += counts.first;
    acc.second += counts.second;
    const double cell = acc.first + acc.second;
    if (std::min(cell * na / total, cell * nb / total) >= 5.0) {
      cells.push_back(acc);
      acc = {0.0, 0.0};
    }
  }
  if (acc.first + acc.second > 0.0) {
    if (cells.empty()) cells.push_back(acc);
    else {
      cells.back().first += acc.first;
      cells.back().second += acc.second;
    }
  }
  TestReport r;
  r.test = "chi_square_two_sample";
  r.n_a = a.size();
  r.n_b = b.size();
  if (cells.size() < 2) return r;
  double x2 = 0.0;
  for (const auto& [ca, cb] : cells) {
    const double cell = ca + cb;
    const double ea = cell * na / total, eb = cell * nb / total;
    x2 += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  r.statistic = x2;
  r.p_value = chi_square_sf(x2, static_cast<double>(cells.size() - 1));
  return r;
}

TestReport chi_square_gof(std::span<const std::int64_t> a, const std::function<double(std::int64_t)>& pmf) {
  require_power(a.size(), 100, "chi_square_gof");
  const auto n = static_cast<double>(a.size());
  std::map<std::int64_t, double> observed;
  for (auto v : a) {
    if (v < 0) throw std::invalid_argument("chi_square_gof: negative observation");
    observed[v] += 1.0;
  }
  // Cells [lo, hi); the last cell is the open tail.
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double cum = 0.0, cell_expected = 0.0, cell_observed = 0.0;
  std::int64_t k = 0;
  while (true) {
    const double p = pmf(k);
    cell_expected += n * p;
    cell_observed += observed.count(k) ? observed[k] : 0.0;
    cum += p;
    ++k;
    const double tail_expected = n * std::max(0.0, 1.0 - cum);
    if (cell_expected >= 5.0 && tail_expected >= 5.0) {
      cells.emplace_back(cell_observed, cell_expected);
      cell_expected = cell_observed = 0.0;
    } else if (tail_expected < 5.0 || k > 1000000) {
      // Fold the remainder (cell in progress plus tail) into one cell.
      double tail_observed = 0.0;
      for (auto it = observed.lower_bound(k); it != observed.end(); ++it) tail_observed += it->second;
      cells.emplace_back(cell_observed + tail_observed, cell_expected + tail_expected);
      break;
    }
  }
  if (cells.size() >= 2 && cells.back().second < 5.0) {
    const auto last = cells.back();
    cells.pop_back();
    cells.back().first += last.first;
    cells.back().second += last.second;
  }
  TestReport r;
  r.test = "chi_square_gof";
  r.n_a = a.size();
  if (cells.size() < 2) return r;
  double x2 = 0.0;
  for (const auto& [o, e] : cells) x2 += (o - e) * (o - e) / e;
  r.statistic = x2;
  r.p_value = chi_square_sf(x2, static_cast<double>(cells.size() - 1));
  return r;
}

double total_variation_distance(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
  double na = 0.0, nb = 0.0;
  for (const auto& [k, c] : a) na += static_cast<double>(c);
  for (const auto& [k, c] : b) nb += static_cast<double>(c);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("total_variation_distance: empty table");
  double tv = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      tv += static_cast<double>(ia->second) / na;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      tv += static_cast<double>(ib->second) / nb;
      ++ib;
    } else {
      tv += std::abs(static_cast<double>(ia->second) / na - static_cast<double>(ib->second) / nb);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * tv;
}

TestReport total_variation(std::span<const std::string> a, std::span<const std::string> b,
                           std::size_t bootstrap_resamples, std::uint64_t seed) {
  require_power(a.size(), b.size(), "total_variation");
  std::map<std::string, std::size_t> ta, tb;
  for (const auto& k : a) ++ta[k];
  for (const auto& k : b) ++tb[k];
  TestReport r;
  r.test = "total_variation";
  r.n_a = a.size();
  r.n_b = b.size();
  r.statistic = total_variation_distance(ta, tb);
  r.p_value = std::numeric_limits<double>::quiet_NaN();
  if (bootstrap_resamples == 0) return r;

  // Resample count tables directly: multinomial draws by sequential binomials.
  std::vector<std::string> keys;
  for (const auto& [k, c] : ta) keys.push_back(k);
  for (const auto& [k, c] : tb) {
    if (!ta.count(k)) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<double> pa, pb;
  for (const auto& k : keys) {
    pa.push_back(ta.count(k) ? static_cast<double>(ta[k]) / static_cast<double>(a.size()) : 0.0);
    pb.push_back(tb.count(k) ? static_cast<double>(tb[k]) / static_cast<double>(b.size()) : 0.0);
  }
  Rng rng(derive_seed(seed, "tv-bootstrap"));
  const auto multinomial = [&](const std::vector<double>& p, std::size_t total) {
    std::vector<double> out(p.size(), 0.0);
    std::size_t left = total;
    double mass = 1.0;
    for (std::size_t i = 0; i < p.size() && left > 0; ++i) {
      const double q = mass > 0.0 ? std::clamp(p[i] / mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::size_t> bin(left, q);
      const std::size_t c = (i + 1 == p.size()) ? left : bin(rng.engine());
      out[i] = static_cast<double>(c) / static_cast<double>(total);
      left -= c;
      mass -= p[i];
    }
    return out;
  };
  std::vector<double> values;
  values.reserve(bootstrap_resamples);
  for (std::size_t s = 0; s < bootstrap_resamples; ++s) {
    const auto qa = multinomial(pa, a.size());
    const auto qb = multinomial(pb, b.size());
    double tv = 0.0;
    for (std::size_t i = 0; i < qa.size(); ++i) tv += std::abs(qa[i] - qb[i]);
    values.push_back(0.5 * tv);
  }
  std::sort(values.begin(), values.end());
  const auto q = [&](double f) { return values[static_cast<std::size_t>(f * static_cast<double>(values.size() - 1))]; };
  r.ci = Interval{std::max(0.0, 2.0 * r.statistic - q(0.975)), std::max(0.0, 2.0 * r.statistic - q(0.025))};
  return r;
}

std::string cycle_type_key(const std::vector<std::size_t>& sizes) {
  std::string key;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(sizes[i]);
  }
  return key;
}

// Colouring diagnostics

RecolouringCheck recolouring_check(const CycleDecomposition& decomp, double theta, std::size_t recolourings, Rng& rng) {
  if (!(theta >= 1.0)) throw std::invalid_argument("recolouring_check: theta must be >= 1");
  if (recolourings < 2) throw std::invalid_argument("recolouring_check: need at least 2 recolourings");
  const double r = 1.0 / theta;
  RecolouringCheck c;
  c.n = decomp.cycle_of.size();
  c.c1 = decomp.largest();
  c.expected_mean = r * static_cast<double>(c.n);
  for (const auto& cycle : decomp.cycles) {
    const auto s = static_cast<double>(cycle.size());
    c.exact_variance += r * (1.0 - r) * s * s;
  }
  c.variance_bound = static_cast<double>(c.c1) * static_cast<double>(c.n);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < recolourings; ++i) {
    double red = 0.0;
    for (const auto& cycle : decomp.cycles) {
      if (rng.uniform() < r) red += static_cast<double>(cycle.size());
    }
    sum += red;
    sum2 += red * red;
  }
  const auto m = static_cast<double>(recolourings);
  c.mean = sum / m;
  c.variance = std::max(0.0, (sum2 - m * c.mean * c.mean) / (m - 1.0));
  const double se = std::sqrt(c.exact_variance / m);
  c.mean_z = se > 0.0 ? (c.mean - c.expected_mean) / se : (c.mean == c.expected_mean ? 0.0 : INFINITY);
  c.mean_ok = std::abs(c.mean_z) <= 4.5;
  c.variance_ok = c.variance <= c.variance_bound;
  return c;
}

ColouringDiagnostics colouring_diagnostics(std::span<const CycleDecomposition> decomps, double theta,
                                           std::size_t recolourings, std::uint64_t seed) {
  if (decomps.size() < 100) throw std::invalid_argument("colouring_diagnostics: need at least 100 samples");
  ColouringDiagnostics out;
  out.checks.reserve(decomps.size());
  for (std::size_t i = 0; i < decomps.size(); ++i) {
    Rng rng(derive_seed(seed, "recolour", i));
    out.checks.push_back(recolouring_check(decomps[i], theta, recolourings, rng));
    const auto& c = out.checks.back();
    out.mean_failures += c.mean_ok ? 0 : 1;
    out.variance_failures += c.variance_ok ? 0 : 1;
    out.max_abs_mean_z = std::max(out.max_abs_mean_z, std::abs(c.mean_z));
  }
  out.passed = out.mean_failures == 0 && out.variance_failures == 0;
  return out;
}

}  // namespace cwip

namespace cwip {

// Colouring experiments

namespace {

CrossConfig draw_weighted(const FiniteGraph& graph, double beta, double theta, SamplerKind sampler,
                          std::size_t burn_in, std::uint64_t seed) {
  if (theta == 1.0 || sampler == SamplerKind::direct) {
    if (theta != 1.0) throw std::invalid_argument("the direct sampler only draws from theta = 1");
    Rng rng(seed);
    return sample_crosses(graph, beta, rng);
  }
  const WeightSpec weight = WeightSpec::constant(theta);
  if (sampler == SamplerKind::rejection) {
    Rng rng(seed);
    return rejection_sample(graph, beta, weight, rng);
  }
  SamplerConfig sc;
  sc.n = graph.n();
  sc.lambda = beta * static_cast<double>(graph.n());
  sc.weight = weight;
  sc.burn_in_sweeps = burn_in;
  sc.thinning_sweeps = 1;
  sc.seed = seed;
  return mcmc_sample(sc, 1).front();
}

}  // namespace

std::vector<RedPoissonObservation> red_poisson_observations(const RedPoissonExperiment& config) {
  if (config.n < 2) throw std::invalid_argument("red_poisson_observations: n must be >= 2");
  const FiniteGraph graph = FiniteGraph::complete(config.n);
  const double beta = config.lambda / static_cast<double>(config.n);
  std::vector<RedPoissonObservation> out(config.samples);
  parallel_for(config.samples, config.threads, [&](std::size_t i) {
    const CrossConfig omega = draw_weighted(graph, beta, config.sample_theta, config.sampler, config.burn_in_sweeps,
                                            derive_seed(config.seed, "red-sample", i));
    Rng rng(derive_seed(config.seed, "red-colour", i));
    const LoopSet loops = build_loops(omega);
    ColouringState state = colour_cycles(cycle_decompose(compose(omega)), config.colour_theta, rng);
    state = classify_crosses(omega, loops, std::move(state));
    const TwistData twist = compute_twist(state.mixed_crosses, state.red_vertices_t0);
    out[i] = observe_red_poisson(state, twist, graph, config.slabs);
  });
  return out;
}

std::string restricted_key(const Permutation& pi, std::span<const Vertex> support) {
  std::string key;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(support[i] + 1);
  }
  key += '|';
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(pi(support[i]) + 1);
  }
  return key;
}

TwistComparison twist_comparison(std::size_t n, double lambda, double theta, std::size_t samples, std::uint64_t seed,
                                 std::size_t threads) {
  if (n < 2) throw std::invalid_argument("twist_comparison: n must be >= 2");
  const FiniteGraph graph = FiniteGraph::complete(n);
  const double beta = lambda / static_cast<double>(n);
  const WeightSpec weight = WeightSpec::constant(theta);
  TwistComparison out;
  out.direct.resize(samples);
  out.reconstructed.resize(samples);
  std::vector<char> nontrivial(samples, 0);
  parallel_for(samples, threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "twist", i));
    const CrossConfig omega = rejection_sample(graph, beta, weight, rng);
    const Permutation pi = compose(omega);
    ColouringState state = colour_cycles(cycle_decompose(pi), theta, rng);
    state = classify_crosses(omega, build_loops(omega), std::move(state));
    const TwistData twist = compute_twist(state.mixed_crosses, state.red_vertices_t0);
    const CrossConfig xi = sample_xi(state.red_vertices_t0, n, beta, rng);
    const RedReconstruction rec = reconstruct_red(twist, xi);
    out.direct[i] = restricted_key(pi, state.red_vertices_t0);
    out.reconstructed[i] = restricted_key(rec.phi, state.red_vertices_t0);
    nontrivial[i] = twist.phi_tilde.is_identity() ? 0 : 1;
  });
  out.phi_tilde_nontrivial = static_cast<std::size_t>(std::count(nontrivial.begin(), nontrivial.end(), 1));
  return out;
}

}  // namespace cwip
