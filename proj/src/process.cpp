#include "cwip/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cwip {

// CrossConfig

CrossConfig::CrossConfig(std::size_t n, double beta, std::vector<Cross> crosses)
    : n_(n), beta_(beta), crosses_(std::move(crosses)) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("CrossConfig: beta must be finite and >= 0");
  for (std::size_t i = 0; i < crosses_.size(); ++i) {
    crosses_[i] = Cross::make(crosses_[i].x, crosses_[i].y, crosses_[i].time);
    validate(crosses_[i]);
    if (i > 0 && !(crosses_[i - 1].time < crosses_[i].time)) {
      throw std::invalid_argument("CrossConfig: cross times must be strictly increasing");
    }
  }
}

CrossConfig CrossConfig::from_unsorted(std::size_t n, double beta, std::vector<Cross> crosses) {
  std::sort(crosses.begin(), crosses.end(), [](const Cross& a, const Cross& b) { return a.time < b.time; });
  return CrossConfig(n, beta, std::move(crosses));
}

void CrossConfig::validate(const Cross& c) const {
  if (c.x >= n_ || c.y >= n_) {
    throw std::invalid_argument("CrossConfig: cross references vertex " + std::to_string(std::max(c.x, c.y) + 1) +
                                " > n = " + std::to_string(n_));
  }
  if (c.x == c.y) throw std::invalid_argument("CrossConfig: cross joins a vertex to itself");
  if (!(c.time >= 0.0 && c.time < beta_)) throw std::invalid_argument("CrossConfig: cross time outside [0, beta)");
}

std::size_t CrossConfig::lower_bound(double t) const {
  auto it = std::lower_bound(crosses_.begin(), crosses_.end(), t, [](const Cross& c, double v) { return c.time < v; });
  return static_cast<std::size_t>(it - crosses_.begin());
}

std::size_t CrossConfig::insert(const Cross& raw) {
  const Cross c = Cross::make(raw.x, raw.y, raw.time);
  validate(c);
  const std::size_t pos = lower_bound(c.time);
  if (pos < crosses_.size() && crosses_[pos].time == c.time) {
    throw std::invalid_argument("CrossConfig::insert: duplicate cross time");
  }
  crosses_.insert(crosses_.begin() + static_cast<std::ptrdiff_t>(pos), c);
  return pos;
}

void CrossConfig::erase(std::size_t position) {
  if (position >= crosses_.size()) throw std::out_of_range("CrossConfig::erase");
  crosses_.erase(crosses_.begin() + static_cast<std::ptrdiff_t>(position));
}

// Permutation

Permutation Permutation::identity(std::size_t n) {
  std::vector<Vertex> image(n);
  std::iota(image.begin(), image.end(), Vertex{0});
  Permutation p;
  p.image_ = std::move(image);
  return p;
}

Permutation::Permutation(std::vector<Vertex> image) : image_(std::move(image)) {
  std::vector<char> seen(image_.size(), 0);
  for (Vertex v : image_) {
    if (v >= image_.size() || seen[v]) throw std::invalid_argument("Permutation: image is not a bijection");
    seen[v] = 1;
  }
}

Permutation Permutation::inverse() const {
  std::vector<Vertex> inv(image_.size());
  for (std::size_t x = 0; x < image_.size(); ++x) inv[image_[x]] = static_cast<Vertex>(x);
  Permutation p;
  p.image_ = std::move(inv);
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t x = 0; x < image_.size(); ++x) {
    if (image_[x] != x) return false;
  }
  return true;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) throw std::invalid_argument("compose: size mismatch");
  std::vector<Vertex> image(inner.size());
  for (std::size_t x = 0; x < inner.size(); ++x) image[x] = outer(inner(static_cast<Vertex>(x)));
  return Permutation(std::move(image));
}

std::vector<std::size_t> CycleDecomposition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(c.size());
  return out;
}

// Operations

CrossConfig sample_crosses(const FiniteGraph& graph, double beta, Rng& rng) {
  if (!(beta >= 0.0)) throw std::invalid_argument("sample_crosses: beta must be >= 0");
  const std::size_t n = graph.n();
  if (beta == 0.0 || graph.edge_count() == 0) return CrossConfig(n, beta);

  // Superposition of independent rate-1 processes: a Poisson(beta |E|) count
  // of points, each on a uniform edge at a uniform time.
  const std::uint64_t count = rng.poisson(beta * static_cast<double>(graph.edge_count()));
  std::vector<Cross> crosses;
  crosses.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const Edge e = graph.random_edge(rng);
    double t = rng.uniform() * beta;
    if (t >= beta) t = std::nextafter(beta, 0.0);
    crosses.push_back(Cross{e.x, e.y, t});
  }
  std::sort(crosses.begin(), crosses.end(), [&](const Cross& a, const Cross& b) {
    if (a.time != b.time) return a.time < b.time;
    return graph.edge_index(a.x, a.y) < graph.edge_index(b.x, b.y);
  });
  for (std::size_t i = 1; i < crosses.size(); ++i) {
    if (crosses[i].time <= crosses[i - 1].time) {
      crosses[i].time = std::nextafter(crosses[i - 1].time, beta);
      if (crosses[i].time >= beta) throw std::runtime_error("sample_crosses: unresolvable time tie at beta");
    }
  }
  return CrossConfig(n, beta, std::move(crosses));
}

Permutation compose(const CrossConfig& config) {
  const std::size_t n = config.n();
  // image[z] = current position of the strand that started at z;
  // who[v] = strand currently at v.
  std::vector<Vertex> image(n), who(n);
  std::iota(image.begin(), image.end(), Vertex{0});
  std::iota(who.begin(), who.end(), Vertex{0});
  for (const Cross& c : config.crosses()) {
    const Vertex sx = who[c.x], sy = who[c.y];
    image[sx] = c.y;
    image[sy] = c.x;
    std::swap(who[c.x], who[c.y]);
  }
  return Permutation(std::move(image));
}

Permutation compose(const CrossConfig& config, std::size_t n) {
  for (const Cross& c : config.crosses()) {
    if (c.x >= n || c.y >= n) {
      throw std::invalid_argument("compose: cross references vertex " + std::to_string(std::max(c.x, c.y) + 1) +
                                  " > n = " + std::to_string(n));
    }
  }
  if (n != config.n()) return compose(CrossConfig(n, config.beta(), config.crosses()));
  return compose(config);
}

CycleDecomposition cycle_decompose(const Permutation& pi) {
  const std::size_t n = pi.size();
  CycleDecomposition d;
  std::vector<char> seen(n, 0);
  // Scanning starts in increasing vertex order, so every cycle begins at its
  // smallest vertex and a stable sort by size yields the tie-break.
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<Vertex> cycle;
    Vertex v = static_cast<Vertex>(start);
    do {
      seen[v] = 1;
      cycle.push_back(v);
      v = pi(v);
    } while (v != start);
    d.cycles.push_back(std::move(cycle));
  }
  std::stable_sort(d.cycles.begin(), d.cycles.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  d.cycle_of.assign(n, 0);
  for (std::size_t i = 0; i < d.cycles.size(); ++i) {
    for (Vertex v : d.cycles[i]) d.cycle_of[v] = i;
  }
  return d;
}

std::pair<Vertex, Vertex> preimages_before(const CrossConfig& config, std::size_t position, Vertex x, Vertex y) {
  const auto& cs = config.crosses();
  for (std::size_t i = position; i-- > 0;) {
    const Cross& c = cs[i];
    if (x == c.x) x = c.y;
    else if (x == c.y) x = c.x;
    if (y == c.x) y = c.y;
    else if (y == c.y) y = c.x;
  }
  return {x, y};
}

int insert_delta_cycles(const CrossConfig& config, const Cross& raw) {
  const Cross c = Cross::make(raw.x, raw.y, raw.time);
  if (c.x >= config.n() || c.y >= config.n() || c.x == c.y) {
    throw std::invalid_argument("insert_delta_cycles: invalid cross endpoints");
  }
  const std::size_t pos = config.lower_bound(c.time);
  if (pos < config.size() && config[pos].time == c.time) {
    throw std::invalid_argument("insert_delta_cycles: duplicate cross time");
  }
  // pi' = A tau B = pi o (B^-1 tau B) = pi o (a b).
  const auto [a, b] = preimages_before(config, pos, c.x, c.y);
  const Permutation pi = compose(config);
  for (Vertex v = pi(a); v != a; v = pi(v)) {
    if (v == b) return +1;
  }
  return -1;
}

bool two_point_indicator(const CycleDecomposition& decomp, Vertex x, Vertex y) {
  if (x >= decomp.cycle_of.size() || y >= decomp.cycle_of.size()) {
    throw std::invalid_argument("two_point_indicator: vertex out of range");
  }
  return decomp.cycle_of[x] == decomp.cycle_of[y];
}

}  // namespace cwip
