#include <doctest.h>

#include <stdexcept>

#include <clocale>
#include <cstring>
#include <sstream>

#include "cwip/io.hpp"
#include "fixtures.hpp"

using namespace cwip;

TEST_CASE("format_real uses 12 significant digits") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(123456789.123456) == "123456789.123");
  CHECK(format_real(1e-20) == "1e-20");
}

TEST_CASE("format_exact round-trips") {
  Rng rng(101);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform() * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
    CHECK(std::stod(format_exact(x)) == x);
  }
}

TEST_CASE("CrossConfig JSONL round trip is bit exact") {
  Rng rng(102);
  std::vector<CrossConfig> configs;
  std::stringstream ss;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.below(20);
    configs.push_back(fixtures::random_config(rng, n, 3.0 * rng.uniform() / static_cast<double>(n) + 1e-3));
    write_cross_config(ss, configs.back());
  }
  const auto back = read_cross_configs(ss);
  REQUIRE(back.size() == configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    CHECK(back[i] == configs[i]);
    CHECK(back[i].beta() == configs[i].beta());
  }
}

TEST_CASE("CrossConfig JSONL uses 1-based vertices") {
  std::stringstream ss;
  write_cross_config(ss, fixtures::config(3, 0.5, {{1, 3, 0.25}}));
  CHECK(ss.str() == "{\"n\":3,\"beta\":0.5}\n{\"x\":1,\"y\":3,\"t\":0.25}\n");
  const CrossConfig c = read_cross_config(ss);
  CHECK(c[0].x == 0);
  CHECK(c[0].y == 2);
}

TEST_CASE("CrossConfig JSONL errors") {
  std::stringstream no_header("{\"x\":1,\"y\":2,\"t\":0.1}\n");
  CHECK_THROWS_AS(read_cross_configs(no_header), std::runtime_error);
  std::stringstream zero("{\"n\":3,\"beta\":1}\n{\"x\":0,\"y\":2,\"t\":0.1}\n");
  CHECK_THROWS_AS(read_cross_configs(zero), std::runtime_error);
  std::stringstream garbage("{\"n\":3,\n");
  CHECK_THROWS_AS(read_cross_configs(garbage), std::runtime_error);
  std::stringstream late("{\"n\":3,\"beta\":1}\n{\"x\":1,\"y\":2,\"t\":1.5}\n");
  CHECK_THROWS_AS(read_cross_configs(late), std::invalid_argument);
  std::stringstream two("{\"n\":3,\"beta\":1}\n{\"n\":3,\"beta\":1}\n");
  CHECK_THROWS_AS(read_cross_config(two), std::runtime_error);
}

TEST_CASE("loops serialise with 1-based vertices") {
  const auto j = loops_to_json(build_loops(fixtures::config(2, 1.0, {{1, 2, 0.5}})));
  CHECK(j["beta"] == 1.0);
  REQUIRE(j["loops"].size() == 1);
  const auto& segs = j["loops"][0];
  REQUIRE(segs.size() == 4);
  CHECK(segs[0]["vertex"] == 1);
  CHECK(segs[0]["start"] == 0.0);
  CHECK(segs[0]["end"] == 0.5);
  CHECK(segs[1]["vertex"] == 2);
}

TEST_CASE("cycle CSV") {
  CycleStats s;
  s.n = 4;
  s.lambda = 1.5;
  s.theta = 2.0;
  ReplicaRecord r;
  r.replica = 0;
  r.ell = 2;
  r.c1 = 3;
  r.c2 = 1;
  s.records.push_back(r);
  std::ostringstream out;
  write_cycle_csv_header(out);
  write_cycle_csv_rows(out, s);
  CHECK(out.str() == "replica,n,lambda,theta,ell,c1,c2,c1_over_n\n0,4,1.5,2,2,3,1,0.75\n");
}

TEST_CASE("formatting ignores the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
    CHECK(format_real(0.5) == "0.5");
    std::setlocale(LC_NUMERIC, saved.c_str());
  }
  CHECK(format_real(0.5) == "0.5");
}

TEST_CASE("manifest json") {
  RunManifest m;
  m.subcommand = "gw";
  m.seed = 3;
  m.params = {{"lambda", "2"}};
  const auto j = manifest_to_json(m);
  CHECK(j["finished"].is_null());
  CHECK(j["params"]["lambda"] == "2");
  CHECK(utc_timestamp().size() == 20);
}
