#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "cwip/graph.hpp"
#include "cwip/process.hpp"
#include "cwip/random.hpp"
#include "fixtures.hpp"

using namespace cwip;

TEST_CASE("complete graph edge ranking round-trips") {
  const FiniteGraph g = FiniteGraph::complete(7);
  CHECK(g.is_complete());
  CHECK(g.edge_count() == 21);
  std::set<std::pair<Vertex, Vertex>> seen;
  for (std::uint64_t i = 0; i < g.edge_count(); ++i) {
    const Edge e = g.edge(i);
    CHECK(e.x < e.y);
    CHECK(g.edge_index(e.x, e.y) == i);
    CHECK(g.has_edge(e.y, e.x));
    seen.insert({e.x, e.y});
  }
  CHECK(seen.size() == 21);
  CHECK_FALSE(g.has_edge(3, 3));
}

TEST_CASE("explicit graphs are validated") {
  CHECK_THROWS_AS(FiniteGraph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteGraph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteGraph(3, {{0, 3}}), std::invalid_argument);
  const FiniteGraph empty(4, {});
  CHECK(empty.edge_count() == 0);
  CHECK_FALSE(empty.is_complete());
  const FiniteGraph path(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(path.neighbours(1).size() == 2);
  const std::vector<char> member{1, 1, 0, 1};
  CHECK(path.edges_within(member) == 1);
  CHECK(FiniteGraph::complete(4).edges_within(member) == 3);
  const FiniteGraph full(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK(full.is_complete());
}

TEST_CASE("derived seeds are deterministic and tag dependent") {
  CHECK(derive_seed(7, "replica", 3) == derive_seed(7, "replica", 3));
  CHECK(derive_seed(7, "replica", 3) != derive_seed(7, "replica", 4));
  CHECK(derive_seed(7, "replica", 3) != derive_seed(7, "chain", 3));
  CHECK(derive_seed(7, "replica", 3) != derive_seed(8, "replica", 3));
}

TEST_CASE("sample_crosses with beta = 0 is empty") {
  Rng rng(1);
  const auto c = sample_crosses(FiniteGraph::complete(5), 0.0, rng);
  CHECK(c.empty());
  CHECK(compose(c, 5).is_identity());
}

TEST_CASE("sample_crosses: K4 at beta = 1 has mean count 6") {
  Rng rng(11);
  const FiniteGraph g = FiniteGraph::complete(4);
  const int trials = 10000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto c = sample_crosses(g, 1.0, rng);
    sum += static_cast<double>(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      CHECK(c[j].time >= 0.0);
      CHECK(c[j].time < 1.0);
      if (j) CHECK(c[j - 1].time < c[j].time);
    }
  }
  const double se = std::sqrt(6.0 / trials);
  CHECK(std::abs(sum / trials - 6.0) < 3.0 * se);
}

TEST_CASE("sample_crosses: single edge at beta = 2 is empty with probability e^-2") {
  Rng rng(12);
  const FiniteGraph g(2, {{0, 1}});
  const int trials = 10000;
  int empty = 0;
  for (int i = 0; i < trials; ++i) empty += sample_crosses(g, 2.0, rng).empty() ? 1 : 0;
  const double p = std::exp(-2.0);
  CHECK(std::abs(empty / double(trials) - p) < 3.0 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("sample_crosses: mean |omega| on K_n at beta = lambda/n is lambda (n-1)/2") {
  Rng rng(13);
  const std::size_t n = 30;
  const double lambda = 1.5;
  const int trials = 4000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) sum += double(sample_crosses(FiniteGraph::complete(n), lambda / n, rng).size());
  const double mean = lambda * (n - 1) / 2.0;
  CHECK(std::abs(sum / trials - mean) < 3.0 * std::sqrt(mean / trials));
}

TEST_CASE("CrossConfig validation") {
  CHECK_THROWS_AS(fixtures::config(3, 1.0, {{1, 2, 0.5}, {2, 3, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(fixtures::config(3, 1.0, {{1, 2, 0.5}, {2, 3, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(fixtures::config(3, 1.0, {{1, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fixtures::config(3, 1.0, {{1, 2, -0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(fixtures::config(3, 1.0, {{1, 4, 0.1}}), std::invalid_argument);
  auto c = fixtures::config(3, 1.0, {{1, 2, 0.5}});
  CHECK_THROWS_AS(c.insert(Cross::make(1, 2, 0.5)), std::invalid_argument);
  CHECK(c.insert(Cross::make(1, 2, 0.25)) == 0);
  CHECK(c.size() == 2);
  c.erase(0);
  CHECK(c == fixtures::config(3, 1.0, {{1, 2, 0.5}}));
}

TEST_CASE("Permutation validation") {
  CHECK_THROWS_AS(Permutation(std::vector<Vertex>{0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation(std::vector<Vertex>{0, 3, 1}), std::invalid_argument);
  const Permutation p = fixtures::perm({2, 3, 1});
  CHECK(compose(p, p.inverse()).is_identity());
}

TEST_CASE("compose: empty config is the identity") { CHECK(compose(CrossConfig(5, 1.0), 5).is_identity()); }

TEST_CASE("compose applies the earliest transposition first") {
  const auto c = fixtures::config(3, 1.0, {{1, 2, 0.2}, {2, 3, 0.5}});
  const Permutation pi = compose(c, 3);
  CHECK(pi(0) == 2);
  CHECK(pi(2) == 1);
  CHECK(pi(1) == 0);
  CHECK(cycle_decompose(pi).count() == 1);
}

TEST_CASE("compose rejects vertices beyond n") {
  const auto c = fixtures::config(5, 1.0, {{1, 5, 0.2}});
  CHECK_THROWS_AS(compose(c, 3), std::invalid_argument);
}

TEST_CASE("figure configuration: pi = (1,3)(2,6,7,4)(9,10), ell = 5") {
  const Permutation pi = compose(fixtures::figure_one());
  CHECK(pi == fixtures::perm({3, 6, 1, 2, 5, 7, 4, 8, 10, 9}));
  const CycleDecomposition d = cycle_decompose(pi);
  CHECK(d.count() == 5);
  CHECK(d.sizes() == std::vector<std::size_t>{4, 2, 2, 1, 1});
  CHECK(d.cycles[0] == std::vector<Vertex>{1, 5, 6, 3});
  CHECK(d.cycles[1] == std::vector<Vertex>{0, 2});  // tie broken by smallest vertex
  CHECK(d.cycles[2] == std::vector<Vertex>{8, 9});
  CHECK(d.cycles[3] == std::vector<Vertex>{4});
  CHECK(d.cycles[4] == std::vector<Vertex>{7});
}

TEST_CASE("cycle_decompose: identity and a single n-cycle") {
  const auto id = cycle_decompose(Permutation::identity(7));
  CHECK(id.count() == 7);
  CHECK(id.largest() == 1);
  const auto full = cycle_decompose(fixtures::perm({2, 3, 4, 5, 6, 1}));
  CHECK(full.count() == 1);
  CHECK(full.largest() == 6);
}

TEST_CASE("two_point_indicator") {
  const auto id = cycle_decompose(Permutation::identity(4));
  CHECK_FALSE(two_point_indicator(id, 0, 1));
  CHECK(two_point_indicator(id, 2, 2));
  const auto d = cycle_decompose(compose(fixtures::figure_one()));
  CHECK(two_point_indicator(d, 1, 6));
  CHECK_FALSE(two_point_indicator(d, 0, 8));
  CHECK_THROWS_AS(two_point_indicator(d, 0, 10), std::invalid_argument);
}

TEST_CASE("insert_delta_cycles examples") {
  CHECK(insert_delta_cycles(CrossConfig(4, 1.0), Cross::make(0, 3, 0.3)) == -1);
  const auto one = fixtures::config(2, 1.0, {{1, 2, 0.2}});
  CHECK(insert_delta_cycles(one, Cross::make(0, 1, 0.7)) == +1);
  CHECK_THROWS_AS(insert_delta_cycles(one, Cross::make(0, 1, 0.2)), std::invalid_argument);
}

TEST_CASE("insert_delta_cycles agrees with recomputation") {
  Rng rng(21);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    const double beta = 0.05 + 2.0 * rng.uniform() / static_cast<double>(n);
    CrossConfig c = fixtures::random_config(rng, n, beta);
    const Vertex x = static_cast<Vertex>(rng.below(n));
    Vertex y = static_cast<Vertex>(rng.below(n - 1));
    if (y >= x) ++y;
    const Cross add = Cross::make(x, y, rng.uniform() * c.beta());
    const std::size_t before = cycle_decompose(compose(c)).count();
    const int delta = insert_delta_cycles(c, add);
    CHECK((delta == 1 || delta == -1));
    c.insert(add);
    CHECK(static_cast<long>(cycle_decompose(compose(c)).count()) - static_cast<long>(before) == delta);
  }
}

TEST_CASE("cycle count parity and partition over random configurations") {
  Rng rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const auto c = fixtures::random_config(rng, n, 3.0 / static_cast<double>(n));
    const auto d = cycle_decompose(compose(c));
    CHECK((d.count() % 2) == ((n + c.size()) % 2));
    std::size_t total = 0;
    std::vector<int> hit(n, 0);
    for (std::size_t i = 0; i < d.cycles.size(); ++i) {
      total += d.cycles[i].size();
      if (i) CHECK(d.cycles[i - 1].size() >= d.cycles[i].size());
      for (Vertex v : d.cycles[i]) {
        ++hit[v];
        CHECK(d.cycle_of[v] == i);
      }
    }
    CHECK(total == n);
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  }
}
