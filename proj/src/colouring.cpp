#include "cwip/colouring.hpp"

#include <algorithm>
#include <stdexcept>

#include "cwip/distributions.hpp"

namespace cwip {

ColouringState colour_cycles(const CycleDecomposition& decomp, double theta, Rng& rng) {
  if (!(theta >= 1.0)) throw std::invalid_argument("colour_cycles: theta must be >= 1");
  const double r = 1.0 / theta;
  ColouringState s;
  s.theta = theta;
  s.colour_per_cycle.reserve(decomp.count());
  s.colour_per_vertex.assign(decomp.cycle_of.size(), Colour::white);
  for (const auto& cycle : decomp.cycles) {
    const Colour c = rng.uniform() < r ? Colour::red : Colour::white;
    s.colour_per_cycle.push_back(c);
    for (Vertex v : cycle) s.colour_per_vertex[v] = c;
  }
  for (std::size_t v = 0; v < s.colour_per_vertex.size(); ++v) {
    if (s.colour_per_vertex[v] == Colour::red) s.red_vertices_t0.push_back(static_cast<Vertex>(v));
  }
  return s;
}

std::vector<Colour> loop_colours(const LoopSet& loops, std::span<const Colour> colour_per_vertex) {
  std::vector<Colour> out;
  out.reserve(loops.loops.size());
  for (const auto& loop : loops.loops) {
    const Colour c = colour_per_vertex[loop.root];
    for (Vertex v : loop.time0_vertices) {
      if (colour_per_vertex[v] != c) throw std::invalid_argument("loop_colours: colouring is not constant on a loop");
    }
    out.push_back(c);
  }
  return out;
}

ColouringState classify_crosses(const CrossConfig& config, const LoopSet& loops, ColouringState colours) {
  if (colours.colour_per_vertex.size() != config.n()) {
    throw std::invalid_argument("classify_crosses: colouring does not match the configuration");
  }
  const std::vector<Colour> lc = loop_colours(loops, colours.colour_per_vertex);
  const auto strands = strand_loops_at_crosses(config, loops);
  std::vector<Cross> red, white, mixed;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const Colour a = lc[strands[i].first];
    const Colour b = lc[strands[i].second];
    if (a != b) mixed.push_back(config[i]);
    else if (a == Colour::red) red.push_back(config[i]);
    else white.push_back(config[i]);
  }
  colours.red_crosses = CrossConfig(config.n(), config.beta(), std::move(red));
  colours.white_crosses = CrossConfig(config.n(), config.beta(), std::move(white));
  colours.mixed_crosses = CrossConfig(config.n(), config.beta(), std::move(mixed));
  return colours;
}

std::vector<std::vector<std::pair<double, double>>> red_point_set(const LoopSet& loops,
                                                                  std::span<const Colour> loop_colour) {
  std::vector<std::vector<std::pair<double, double>>> out(loops.loop_of_vertex.size());
  for (std::size_t l = 0; l < loops.loops.size(); ++l) {
    if (loop_colour[l] != Colour::red) continue;
    for (const auto& seg : loops.loops[l].segments) out[seg.vertex].emplace_back(seg.start, seg.end);
  }
  for (auto& iv : out) {
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : iv) {
      if (!merged.empty() && merged.back().second == p.first) merged.back().second = p.second;
      else merged.push_back(p);
    }
    iv = std::move(merged);
  }
  return out;
}

// TwistData

std::size_t TwistData::events_up_to(double t) const {
  return static_cast<std::size_t>(std::upper_bound(event_times.begin(), event_times.end(), t) - event_times.begin());
}

std::vector<char> TwistData::red_set_at(double t) const {
  if (!(t >= 0.0 && t <= beta)) throw std::out_of_range("TwistData::red_set_at: t outside [0, beta]");
  std::vector<char> red(n, 0);
  for (Vertex v : red_t0) red[v] = 1;
  const std::size_t k = events_up_to(t);
  for (std::size_t i = 0; i < k; ++i) {
    red[swaps[i].from] = 0;
    red[swaps[i].to] = 1;
  }
  return red;
}

bool TwistData::in_red_t0(Vertex x) const { return std::binary_search(red_t0.begin(), red_t0.end(), x); }

Vertex TwistData::h_tilde(Vertex x, double t) const {
  if (!(t >= 0.0 && t <= beta)) throw std::out_of_range("TwistData::h_tilde: t outside [0, beta]");
  if (x >= n || !in_red_t0(x)) throw std::invalid_argument("TwistData::h_tilde: vertex not in R_0");
  const auto& p = paths[x];
  auto it = std::upper_bound(p.begin(), p.end(), t, [](double v, const auto& e) { return v < e.first; });
  return std::prev(it)->second;
}

TwistData compute_twist(const CrossConfig& mixed, std::span<const Vertex> red_t0) {
  const std::size_t n = mixed.n();
  constexpr Vertex none = ~Vertex{0};
  TwistData tw;
  tw.n = n;
  tw.beta = mixed.beta();
  tw.red_t0.assign(red_t0.begin(), red_t0.end());
  std::sort(tw.red_t0.begin(), tw.red_t0.end());
  tw.paths.assign(n, {});

  std::vector<Vertex> occupant(n, none);  // R_0 element currently at v
  for (Vertex v : tw.red_t0) {
    if (v >= n) throw std::invalid_argument("compute_twist: red vertex out of range");
    occupant[v] = v;
    tw.paths[v].emplace_back(0.0, v);
  }
  for (const Cross& c : mixed.crosses()) {
    const bool rx = occupant[c.x] != none;
    const bool ry = occupant[c.y] != none;
    if (rx == ry) throw std::invalid_argument("compute_twist: mixed cross must join exactly one red strand");
    const Vertex a = rx ? c.x : c.y;
    const Vertex b = rx ? c.y : c.x;
    const Vertex e = occupant[a];
    occupant[b] = e;
    occupant[a] = none;
    tw.event_times.push_back(c.time);
    tw.swaps.push_back({a, b});
    tw.paths[e].emplace_back(c.time, b);
  }

  std::vector<Vertex> image(n);
  for (std::size_t v = 0; v < n; ++v) image[v] = static_cast<Vertex>(v);
  for (Vertex v : tw.red_t0) {
    const Vertex end = tw.paths[v].back().second;
    if (!std::binary_search(tw.red_t0.begin(), tw.red_t0.end(), end)) {
      throw std::invalid_argument("compute_twist: red set at beta differs from R_0");
    }
    image[v] = end;
  }
  tw.phi_tilde = Permutation(std::move(image));
  return tw;
}

CrossConfig sample_xi(std::span<const Vertex> red_t0, std::size_t n, double beta, Rng& rng) {
  const CrossConfig local = sample_crosses(FiniteGraph::complete(red_t0.size()), beta, rng);
  std::vector<Cross> crosses;
  crosses.reserve(local.size());
  for (const Cross& c : local.crosses()) crosses.push_back(Cross::make(red_t0[c.x], red_t0[c.y], c.time));
  return CrossConfig(n, beta, std::move(crosses));
}

RedReconstruction reconstruct_red(const TwistData& twist, const CrossConfig& xi) {
  if (xi.n() != twist.n) throw std::invalid_argument("reconstruct_red: vertex count mismatch");
  for (const Cross& c : xi.crosses()) {
    if (!twist.in_red_t0(c.x) || !twist.in_red_t0(c.y)) {
      throw std::invalid_argument("reconstruct_red: xi cross touches a vertex outside R_0");
    }
  }
  RedReconstruction out{twist, Trajectory(xi), Permutation{}};
  const Permutation sigma_beta = compose(xi);
  out.phi = compose(twist.phi_tilde, sigma_beta);
  return out;
}

CrossConfig map_xi_to_red_crosses(const TwistData& twist, const CrossConfig& xi) {
  std::vector<Cross> out;
  out.reserve(xi.size());
  for (const Cross& c : xi.crosses()) {
    out.push_back(Cross::make(twist.h_tilde(c.x, c.time), twist.h_tilde(c.y, c.time), c.time));
  }
  return CrossConfig(twist.n, twist.beta, std::move(out));
}

RedRegionMeasure red_region_measure(const TwistData& twist, const FiniteGraph& graph, double from, double to) {
  if (graph.n() != twist.n) throw std::invalid_argument("red_region_measure: graph size mismatch");
  from = std::max(from, 0.0);
  to = std::min(to, twist.beta);
  if (!(from < to)) return {0.0};

  std::vector<char> red(twist.n, 0);
  for (Vertex v : twist.red_t0) red[v] = 1;
  // Piecewise-constant integrand between consecutive event times.
  double value = 0.0;
  double left = 0.0;
  std::uint64_t edges = graph.edges_within(red);
  for (std::size_t k = 0; k <= twist.swaps.size(); ++k) {
    const double right = k < twist.swaps.size() ? twist.event_times[k] : twist.beta;
    const double lo = std::max(left, from), hi = std::min(right, to);
    if (lo < hi) value += static_cast<double>(edges) * (hi - lo);
    if (k == twist.swaps.size() || right >= to) break;
    red[twist.swaps[k].from] = 0;
    red[twist.swaps[k].to] = 1;
    if (!graph.is_complete()) edges = graph.edges_within(red);
    left = right;
  }
  return {value};
}

RedRegionMeasure red_region_measure(const TwistData& twist, const FiniteGraph& graph) {
  return red_region_measure(twist, graph, 0.0, twist.beta);
}

RedPoissonObservation observe_red_poisson(const ColouringState& state, const TwistData& twist,
                                          const FiniteGraph& graph, std::size_t slabs) {
  RedPoissonObservation obs;
  obs.count = state.red_crosses.size();
  obs.measure = red_region_measure(twist, graph).value;
  if (slabs == 0) return obs;
  obs.slab_counts.assign(slabs, 0);
  obs.slab_measures.assign(slabs, 0.0);
  const double width = twist.beta / static_cast<double>(slabs);
  for (std::size_t j = 0; j < slabs; ++j) {
    const double lo = width * static_cast<double>(j);
    const double hi = j + 1 == slabs ? twist.beta : width * static_cast<double>(j + 1);
    obs.slab_measures[j] = red_region_measure(twist, graph, lo, hi).value;
  }
  for (const Cross& c : state.red_crosses.crosses()) {
    auto j = static_cast<std::size_t>(c.time / width);
    obs.slab_counts[std::min(j, slabs - 1)] += 1;
  }
  return obs;
}

namespace {

// Randomised PIT: u = F(k-1) + U (F(k) - F(k-1)) is uniform when k ~ Poisson(mean).
double poisson_pit(std::uint64_t k, double mean, double u) {
  const auto ki = static_cast<std::int64_t>(k);
  const double lo = poisson_cdf(ki - 1, mean);
  const double hi = poisson_cdf(ki, mean);
  return lo + u * (hi - lo);
}

double uniform_from(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
  return static_cast<double>(mix64(mix64(seed ^ 0x5a17ed) ^ mix64(index * 31 + slot)) >> 11) * 0x1.0p-53;
}

struct BinnedChi2 {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  explicit BinnedChi2(std::size_t bins) : counts(bins, 0) {}
  void add(double u) {
    auto b = static_cast<std::size_t>(u * static_cast<double>(counts.size()));
    counts[std::min(b, counts.size() - 1)] += 1;
    ++total;
  }
  double statistic() const {
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double x2 = 0.0;
    for (auto c : counts) x2 += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
    return x2;
  }
};

}  // namespace

PoissonCheckReport verify_red_poisson(std::span<const RedPoissonObservation> samples, double significance,
                                      std::uint64_t seed) {
  if (samples.size() < 100) throw std::invalid_argument("verify_red_poisson: need at least 100 samples");
  PoissonCheckReport rep;
  rep.n_samples = samples.size();
  rep.significance = significance;
  // Roughly 50 expected observations per cell, between 10 and 50 cells.
  rep.bins = std::clamp<std::size_t>(samples.size() / 50, 10, 50);

  BinnedChi2 whole(rep.bins), slab(rep.bins);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    whole.add(poisson_pit(s.count, s.measure, uniform_from(seed, i, 0)));
    for (std::size_t j = 0; j < s.slab_counts.size(); ++j) {
      slab.add(poisson_pit(s.slab_counts[j], s.slab_measures[j], uniform_from(seed, i, j + 1)));
    }
  }
  const double dof = static_cast<double>(rep.bins - 1);
  rep.statistic = whole.statistic();
  rep.count_p_value = chi_square_sf(rep.statistic, dof);
  if (slab.total > 0) {
    rep.slab_statistic = slab.statistic();
    rep.slab_p_value = chi_square_sf(rep.slab_statistic, dof);
    rep.p_value = std::min(1.0, 2.0 * std::min(rep.count_p_value, rep.slab_p_value));
  } else {
    rep.slab_p_value = 1.0;
    rep.p_value = rep.count_p_value;
  }
  rep.passed = rep.p_value > significance;
  return rep;
}

PoissonCheckReport verify_red_poisson(std::span<const std::pair<ColouringState, TwistData>> samples,
                                      const FiniteGraph& graph, double significance, std::uint64_t seed) {
  std::vector<RedPoissonObservation> obs;
  obs.reserve(samples.size());
  for (const auto& [state, twist] : samples) obs.push_back(observe_red_poisson(state, twist, graph));
  return verify_red_poisson(obs, significance, seed);
}

}  // namespace cwip
