#include "cwip/loops.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cwip/exact_sum.hpp"

namespace cwip {

double Loop::vertical_length() const {
  ExactSum sum;
  for (const auto& s : segments) {
    sum.add(s.end);
    sum.add(-s.start);
  }
  return sum.value();
}

bool Loop::vertical_length_equals(double beta, std::size_t multiple) const {
  ExactSum sum;
  for (const auto& s : segments) {
    sum.add(s.end);
    sum.add(-s.start);
  }
  sum.add_product(-static_cast<double>(multiple), beta);
  return sum.is_zero();
}

LoopSet build_loops(const CrossConfig& config) {
  const std::size_t n = config.n();
  const double beta = config.beta();
  const auto& cs = config.crosses();

  // Per-vertex cross lists in time order, and each cross's slot in them.
  std::vector<std::vector<std::size_t>> events(n);
  std::vector<std::pair<std::size_t, std::size_t>> slot(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    slot[i] = {events[cs[i].x].size(), events[cs[i].y].size()};
    events[cs[i].x].push_back(i);
    events[cs[i].y].push_back(i);
  }

  LoopSet set;
  set.beta = beta;
  set.loop_of_vertex.assign(n, 0);
  std::vector<char> visited(n, 0);

  for (std::size_t r = 0; r < n; ++r) {
    if (visited[r]) continue;
    Loop loop;
    loop.root = static_cast<Vertex>(r);
    const std::size_t index = set.loops.size();

    Vertex v = loop.root;
    std::size_t next = 0;  // next event slot at v
    double s = 0.0;
    visited[v] = 1;
    set.loop_of_vertex[v] = index;
    loop.time0_vertices.push_back(v);
    while (true) {
      if (next < events[v].size()) {
        const std::size_t ci = events[v][next];
        const Cross& c = cs[ci];
        if (s < c.time) loop.segments.push_back({v, s, c.time});
        const bool at_x = c.x == v;
        v = at_x ? c.y : c.x;
        next = (at_x ? slot[ci].second : slot[ci].first) + 1;
        s = c.time;
      } else {
        if (s < beta) loop.segments.push_back({v, s, beta});
        s = 0.0;
        next = 0;
        if (v == loop.root) break;
        visited[v] = 1;
        set.loop_of_vertex[v] = index;
        loop.time0_vertices.push_back(v);
      }
    }
    set.loops.push_back(std::move(loop));
  }

  const CycleDecomposition decomp = cycle_decompose(compose(config));
  set.loop_of_cycle.reserve(decomp.count());
  for (const auto& cycle : decomp.cycles) set.loop_of_cycle.push_back(set.loop_of_vertex[cycle.front()]);
  return set;
}

Trajectory::Trajectory(const CrossConfig& config) : beta_(config.beta()), paths_(config.n()) {
  const std::size_t n = config.n();
  std::vector<Vertex> who(n);
  std::iota(who.begin(), who.end(), Vertex{0});
  for (std::size_t x = 0; x < n; ++x) paths_[x].emplace_back(0.0, static_cast<Vertex>(x));
  for (const Cross& c : config.crosses()) {
    const Vertex sx = who[c.x], sy = who[c.y];
    paths_[sx].emplace_back(c.time, c.y);
    paths_[sy].emplace_back(c.time, c.x);
    std::swap(who[c.x], who[c.y]);
  }
}

Vertex Trajectory::operator()(Vertex x, double t) const {
  if (!(t >= 0.0 && t <= beta_)) throw std::out_of_range("Trajectory: t outside [0, beta]");
  const auto& p = paths_.at(x);
  // Last breakpoint with time <= t (right-continuity).
  auto it = std::upper_bound(p.begin(), p.end(), t, [](double v, const auto& e) { return v < e.first; });
  return std::prev(it)->second;
}

Permutation Trajectory::at(double t) const {
  std::vector<Vertex> image(paths_.size());
  for (std::size_t x = 0; x < paths_.size(); ++x) image[x] = (*this)(static_cast<Vertex>(x), t);
  return Permutation(std::move(image));
}

Trajectory trajectory(const CrossConfig& config) { return Trajectory(config); }

std::vector<std::pair<std::size_t, std::size_t>> strand_loops_at_crosses(const CrossConfig& config,
                                                                         const LoopSet& loops) {
  const std::size_t n = config.n();
  if (loops.loop_of_vertex.size() != n) throw std::invalid_argument("strand_loops_at_crosses: size mismatch");
  // A strand keeps its loop for its whole life from (z, 0) to (pi(z), beta).
  std::vector<Vertex> who(n);
  std::iota(who.begin(), who.end(), Vertex{0});
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(config.size());
  for (const Cross& c : config.crosses()) {
    out.emplace_back(loops.loop_of_vertex[who[c.x]], loops.loop_of_vertex[who[c.y]]);
    std::swap(who[c.x], who[c.y]);
  }
  return out;
}

}  // namespace cwip
