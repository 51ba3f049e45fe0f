#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cwip/distributions.hpp"
#include "cwip/stats.hpp"
#include "fixtures.hpp"

using namespace cwip;

namespace {

Permutation random_permutation(std::size_t n, Rng& rng) {
  std::vector<Vertex> image(n);
  std::iota(image.begin(), image.end(), Vertex{0});
  std::shuffle(image.begin(), image.end(), rng.engine());
  return Permutation(std::move(image));
}

std::vector<std::int64_t> poisson_draws(double mu, std::size_t count, Rng& rng) {
  std::vector<std::int64_t> out(count);
  for (auto& v : out) v = static_cast<std::int64_t>(rng.poisson(mu));
  return out;
}

}  // namespace

TEST_CASE("TranspositionGraph: identity and a single n-cycle") {
  TranspositionGraph id(Permutation::identity(6));
  CHECK(id.base_edges().empty());
  CHECK(id.component_count() == 6);
  TranspositionGraph cyc(fixtures::perm({2, 3, 4, 5, 6, 1}));
  CHECK(cyc.base_edges().size() == 5);
  CHECK(cyc.component_count() == 1);
}

TEST_CASE("TranspositionGraph: base components are the cycles, and cycles stay inside components") {
  Rng rng(81);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const Permutation phi = random_permutation(n, rng);
    TranspositionGraph g(phi);
    const auto d = cycle_decompose(phi);
    CHECK(g.component_count() == d.count());
    for (Vertex v = 0; v < n; ++v) CHECK(g.component_size(v) == d.cycles[d.cycle_of[v]].size());
    CHECK(g.cycles_within_components());

    const CrossConfig sigma = fixtures::random_config(rng, n, 2.0 / static_cast<double>(n));
    std::size_t components = g.component_count();
    for (const Cross& c : sigma.crosses()) {
      g.apply(c.x, c.y);
      CHECK(g.cycles_within_components());
      CHECK(g.component_count() <= components);
      components = g.component_count();
    }
    CHECK(g.current() == compose(compose(sigma), phi));
    CHECK(g.dynamic_edges().size() == sigma.size());
    const TranspositionGraph built = build_transposition_graph(phi, sigma);
    CHECK(built.current() == g.current());
    for (std::size_t k = 1; k <= n; ++k) {
      const VertexMass m = vertex_mass(g, k);
      CHECK(m.mass_cycles <= m.mass_components);
      CHECK(m.mass_components <= n);
      CHECK(m.defect == m.mass_components - m.mass_cycles);
      CHECK(m.mass_cycles == vertex_mass(cycle_decompose(g.current()), k));
    }
    const VertexMass one = vertex_mass(g, 1);
    CHECK(one.mass_cycles == n);
    CHECK(one.mass_components == n);
    CHECK_THROWS_AS(vertex_mass(g, 0), std::invalid_argument);
    CHECK_THROWS_AS(vertex_mass(g, n + 1), std::invalid_argument);
  }
}

TEST_CASE("vertex_mass at k = n") {
  TranspositionGraph full(fixtures::perm({2, 3, 4, 1}));
  CHECK(vertex_mass(full, 4).mass_cycles == 4);
  TranspositionGraph split(fixtures::perm({2, 1, 4, 3}));
  CHECK(vertex_mass(split, 4).mass_components == 0);
  split.apply(1, 2);  // joins the components; the product is a 4-cycle
  CHECK(vertex_mass(split, 4).mass_components == 4);
  CHECK(vertex_mass(split, 4).mass_cycles == 4);
}

TEST_CASE("vertex mass defect bound") {
  CHECK(vertex_mass_defect_bound(400, 2.0 / 400, 8) == doctest::Approx(256.0));
  Rng rng(82);
  const std::size_t n = 400, k = 8;
  const double t = 2.0 / n;
  double total = 0.0;
  const int reps = 50;
  for (int i = 0; i < reps; ++i) {
    TranspositionGraph g = build_transposition_graph(random_permutation(n, rng), fixtures::random_config(rng, n, t));
    total += static_cast<double>(vertex_mass(g, k).defect);
  }
  CHECK(total / reps <= vertex_mass_defect_bound(n, t, k));
}

TEST_CASE("largest_cycle_experiment: record invariants and monotone tail") {
  ExperimentConfig c;
  c.n = 60;
  c.lambda = 2.0;
  c.replicas = 60;
  c.weight = WeightSpec::constant(2.0);
  c.burn_in_sweeps = 40;
  c.seed = 83;
  const CycleStats s = largest_cycle_experiment(c);
  REQUIRE(s.records.size() == 60);
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    CHECK(r.replica == i);
    CHECK(std::accumulate(r.sizes.begin(), r.sizes.end(), std::size_t{0}) == c.n);
    CHECK(std::is_sorted(r.sizes.rbegin(), r.sizes.rend()));
    CHECK(r.c1 >= r.c2);
    CHECK(r.c1 >= 1);
    CHECK(r.ell == r.sizes.size());
  }
  for (std::size_t j = 1; j < delta_grid.size(); ++j) CHECK(s.summary.p_c1_at_least[j] <= s.summary.p_c1_at_least[j - 1]);
  CHECK(s.summary.mean_ci.low <= s.summary.mean_c1_fraction);
  CHECK(s.summary.mean_ci.high >= s.summary.mean_c1_fraction);
  CHECK(s.moves.birth_proposed > 0);
}

TEST_CASE("largest_cycle_experiment is independent of the thread count") {
  ExperimentConfig c;
  c.n = 40;
  c.lambda = 1.5;
  c.replicas = 24;
  c.samples_per_chain = 4;
  c.weight = WeightSpec::constant(1.5);
  c.burn_in_sweeps = 20;
  c.seed = 84;
  c.threads = 1;
  const auto a = largest_cycle_experiment(c);
  c.threads = 4;
  const auto b = largest_cycle_experiment(c);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].sizes == b.records[i].sizes);
  CHECK(a.summary.mean_c1_fraction == b.summary.mean_c1_fraction);
  CHECK(a.mean_ess_ell.has_value());
}

TEST_CASE("largest_cycle_experiment: misconfiguration") {
  ExperimentConfig c;
  c.n = 10;
  c.sampler = SamplerKind::direct;
  c.weight = WeightSpec::constant(2.0);
  CHECK_THROWS_AS(largest_cycle_experiment(c), std::invalid_argument);
  c.weight = WeightSpec::constant(1.0);
  c.n = 1;
  CHECK_THROWS_AS(largest_cycle_experiment(c), std::invalid_argument);
  CHECK_THROWS_AS(parse_sampler_kind("gibbs"), std::invalid_argument);
  CHECK(parse_sampler_kind("rejection") == SamplerKind::rejection);
}

TEST_CASE("subcritical theta = 1 has no large cycles") {
  ExperimentConfig c;
  c.n = 1000;
  c.lambda = 0.5;
  c.replicas = 200;
  c.sampler = SamplerKind::direct;
  c.seed = 85;
  c.bootstrap_resamples = 0;
  CHECK(largest_cycle_experiment(c).summary.median_c1_fraction < 0.02);
}

TEST_CASE("twisted interchange experiment") {
  Rng rng(86);
  // No crosses: the cycles of phi itself.
  const Permutation phi = random_permutation(30, rng);
  const auto none = twisted_interchange_experiment(phi, 1e-12, 20, 1, 1);
  for (const auto& r : none.records) CHECK(r.c1 == cycle_decompose(phi).largest());

  // phi = id matches the plain interchange process.
  const auto twisted = twisted_interchange_experiment(Permutation::identity(50), 1.5, 800, 2, 1);
  ExperimentConfig c;
  c.n = 50;
  c.lambda = 1.5;
  c.replicas = 800;
  c.sampler = SamplerKind::direct;
  c.seed = 3;
  c.bootstrap_resamples = 0;
  const auto plain = largest_cycle_experiment(c);
  std::vector<std::int64_t> a, b;
  for (const auto& r : twisted.records) a.push_back(std::int64_t(r.c1));
  for (const auto& r : plain.records) b.push_back(std::int64_t(r.c1));
  CHECK(chi_square_two_sample(a, b).p_value > 0.001);

  // A perfect matching at lambda = 2 still produces a macroscopic cycle.
  std::vector<Vertex> image(1000);
  for (Vertex v = 0; v < 1000; ++v) image[v] = v ^ 1u;
  const auto matched = twisted_interchange_experiment(Permutation(image), 2.0, 100, 4, 1);
  CHECK(matched.summary.p_c1_at_least[2] >= 0.95);
}

TEST_CASE("distribution tests: power and underpowered input") {
  Rng rng(87);
  const auto a = poisson_draws(4.0, 10000, rng);
  const auto b = poisson_draws(5.0, 10000, rng);
  CHECK(chi_square_two_sample(a, b).p_value < 1e-6);
  CHECK(chi_square_gof(a, [](std::int64_t k) { return poisson_pmf(k, 5.0); }).p_value < 1e-6);
  CHECK(chi_square_gof(a, [](std::int64_t k) { return poisson_pmf(k, 4.0); }).p_value > 0.001);
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  CHECK(ks_two_sample(x, y).p_value < 1e-6);
  const std::vector<double> small(50, 1.0);
  CHECK_THROWS_AS(ks_two_sample(small, x), std::invalid_argument);
  CHECK_THROWS_AS(chi_square_gof(std::vector<std::int64_t>(99, 1), [](std::int64_t) { return 0.5; }), std::invalid_argument);
}

TEST_CASE("distribution tests: split halves give roughly uniform p-values") {
  Rng rng(88);
  std::vector<double> ks, chi;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> u(400);
    for (auto& v : u) v = rng.uniform();
    ks.push_back(ks_two_sample(std::span(u).first(200), std::span(u).last(200)).p_value);
    const auto counts = poisson_draws(3.0, 400, rng);
    chi.push_back(chi_square_two_sample(std::span(counts).first(200), std::span(counts).last(200)).p_value);
  }
  for (const auto* ps : {&ks, &chi}) {
    const double mean = std::accumulate(ps->begin(), ps->end(), 0.0) / ps->size();
    CHECK(mean > 0.4);
    CHECK(mean < 0.62);
    const auto low = std::count_if(ps->begin(), ps->end(), [](double p) { return p < 0.05; });
    CHECK(low < 25);
  }
  std::vector<double> u(1000);
  for (auto& v : u) v = rng.uniform();
  CHECK(ks_one_sample(u, [](double v) { return std::clamp(v, 0.0, 1.0); }).p_value > 0.001);
  CHECK(ks_one_sample(u, [](double v) { return std::clamp(v * v, 0.0, 1.0); }).p_value < 1e-6);
}

TEST_CASE("total variation") {
  std::map<std::string, std::size_t> a{{"x", 3}, {"y", 1}}, b{{"x", 1}, {"z", 1}};
  CHECK(total_variation_distance(a, b) == doctest::Approx(0.5 * (0.25 + 0.25 + 0.5)));
  std::vector<std::string> s(1000), t(1000);
  Rng rng(89);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = std::to_string(rng.below(4));
    t[i] = std::to_string(rng.below(4));
  }
  const auto r = total_variation(s, t, 300, 1);
  CHECK(r.statistic < 0.1);
  REQUIRE(r.ci.has_value());
  CHECK(r.ci->low <= r.ci->high);
  CHECK(cycle_type_key({3, 2, 1}) == "3,2,1");
}

TEST_CASE("colouring diagnostics: closed-form cases") {
  Rng rng(90);
  const std::size_t n = 40;
  const auto singles = cycle_decompose(Permutation::identity(n));
  const auto c = recolouring_check(singles, 2.0, 4000, rng);
  CHECK(c.expected_mean == 20.0);
  CHECK(c.exact_variance == doctest::Approx(10.0));
  CHECK(c.mean_ok);
  CHECK(c.variance_ok);
  CHECK(c.variance == doctest::Approx(10.0).epsilon(0.1));

  std::vector<Vertex> image(n);
  for (Vertex v = 0; v < n; ++v) image[v] = (v + 1) % n;
  const auto full = recolouring_check(cycle_decompose(Permutation(image)), 2.0, 4000, rng);
  CHECK(full.exact_variance == doctest::Approx(0.25 * n * n));
  CHECK(full.variance <= full.variance_bound);
  CHECK(full.mean_ok);
}

TEST_CASE("colouring diagnostics over P_theta samples") {
  SamplerConfig sc;
  sc.n = 50;
  sc.lambda = 3.0;
  sc.weight = WeightSpec::constant(2.0);
  sc.burn_in_sweeps = 50;
  sc.thinning_sweeps = 2;
  sc.seed = 91;
  std::vector<CycleDecomposition> decomps;
  for (const auto& c : mcmc_sample(sc, 100)) decomps.push_back(cycle_decompose(compose(c)));
  const auto d = colouring_diagnostics(decomps, 2.0, 1000, 5);
  CHECK(d.passed);
  CHECK(d.variance_failures == 0);
  CHECK(d.checks.size() == 100);
  CHECK_THROWS_AS(colouring_diagnostics(std::span(decomps).first(99), 2.0, 10, 5), std::invalid_argument);
}

TEST_CASE("bootstrap interval and median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  std::vector<double> xs(500);
  Rng rng(92);
  for (auto& x : xs) x = rng.uniform();
  const auto mean = [](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  const Interval ci = bootstrap_interval(xs, mean, 1000, 3);
  CHECK(ci.low < 0.5);
  CHECK(ci.high > 0.5);
  CHECK(ci.high - ci.low < 0.1);
}
