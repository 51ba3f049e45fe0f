#include "cwip/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace cwip {

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

std::string format_exact(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_cross_config(std::ostream& out, const CrossConfig& config) {
  out << "{\"n\":" << config.n() << ",\"beta\":" << format_exact(config.beta()) << "}\n";
  for (const Cross& c : config.crosses()) {
    out << "{\"x\":" << c.x + 1 << ",\"y\":" << c.y + 1 << ",\"t\":" << format_exact(c.time) << "}\n";
  }
}

std::vector<CrossConfig> read_cross_configs(std::istream& in) {
  std::vector<CrossConfig> out;
  std::size_t n = 0;
  double beta = 0.0;
  bool open = false;
  std::vector<Cross> crosses;
  const auto flush = [&] {
    if (open) out.emplace_back(n, beta, std::move(crosses));
    crosses.clear();
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (rec.contains("n")) {
      flush();
      n = rec.at("n").get<std::size_t>();
      beta = rec.at("beta").get<double>();
      open = true;
    } else {
      if (!open) throw std::runtime_error("line " + std::to_string(line_no) + ": cross before header");
      const auto x = rec.at("x").get<std::int64_t>();
      const auto y = rec.at("y").get<std::int64_t>();
      if (x < 1 || y < 1) throw std::runtime_error("line " + std::to_string(line_no) + ": vertices are 1-based");
      crosses.push_back(Cross::make(static_cast<Vertex>(x - 1), static_cast<Vertex>(y - 1), rec.at("t").get<double>()));
    }
  }
  flush();
  return out;
}

CrossConfig read_cross_config(std::istream& in) {
  auto all = read_cross_configs(in);
  if (all.size() != 1) throw std::runtime_error("expected exactly one configuration, found " + std::to_string(all.size()));
  return std::move(all.front());
}

nlohmann::json loops_to_json(const LoopSet& loops) {
  nlohmann::json out = nlohmann::json::object();
  out["beta"] = loops.beta;
  nlohmann::json list = nlohmann::json::array();
  for (const Loop& loop : loops.loops) {
    nlohmann::json segs = nlohmann::json::array();
    for (const LoopSegment& s : loop.segments) {
      segs.push_back({{"vertex", s.vertex + 1}, {"start", s.start}, {"end", s.end}});
    }
    list.push_back(std::move(segs));
  }
  out["loops"] = std::move(list);
  return out;
}

void write_cycle_csv_header(std::ostream& out) { out << "replica,n,lambda,theta,ell,c1,c2,c1_over_n\n"; }

void write_cycle_csv_rows(std::ostream& out, const CycleStats& stats) {
  const std::string lambda = format_real(stats.lambda);
  const std::string theta = format_real(stats.theta);
  for (const auto& r : stats.records) {
    out << r.replica << ',' << stats.n << ',' << lambda << ',' << theta << ',' << r.ell << ',' << r.c1 << ',' << r.c2
        << ',' << format_real(static_cast<double>(r.c1) / static_cast<double>(stats.n)) << '\n';
  }
}

nlohmann::json summary_to_json(const CycleStats& stats) {
  const auto& s = stats.summary;
  nlohmann::json p = nlohmann::json::object();
  for (std::size_t j = 0; j < delta_grid.size(); ++j) p[format_real(delta_grid[j])] = s.p_c1_at_least[j];
  nlohmann::json out = {
      {"n", stats.n},
      {"lambda", stats.lambda},
      {"theta", stats.theta},
      {"replicas", stats.records.size()},
      {"mean_c1_over_n", s.mean_c1_fraction},
      {"mean_c1_over_n_ci", {s.mean_ci.low, s.mean_ci.high}},
      {"median_c1_over_n", s.median_c1_fraction},
      {"median_c1_over_n_ci", {s.median_ci.low, s.median_ci.high}},
      {"p_c1_at_least", p},
      {"two_point_12", s.two_point_12},
      {"two_point_12_stderr", s.two_point_12_stderr},
      {"mean_ell", s.mean_ell},
      {"mean_crosses", s.mean_crosses},
  };
  const auto& m = stats.moves;
  if (m.birth_proposed + m.death_proposed > 0) {
    out["acceptance"] = {{"birth", m.birth_rate()}, {"death", m.death_rate()}, {"shift", m.shift_rate()}};
  }
  if (stats.mean_ess_ell) out["mean_ess_ell"] = *stats.mean_ess_ell;
  return out;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  return {
      {"subcommand", m.subcommand},
      {"params", m.params},
      {"seed", m.seed},
      {"version", m.version},
      {"started", m.started},
      {"finished", m.finished.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.finished)},
      {"outputs", m.outputs},
  };
}

void write_json_file(const std::string& path, const nlohmann::json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << value.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

}  // namespace cwip
