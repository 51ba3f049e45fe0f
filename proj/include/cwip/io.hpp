#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwip/loops.hpp"
#include "cwip/process.hpp"
#include "cwip/stats.hpp"

namespace cwip {

/// 12 significant digits, locale independent.
std::string format_real(double x);

/// Shortest representation that parses back to the same double.
std::string format_exact(double x);

/// JSONL: a header {"n":..,"beta":..} followed by one {"x":..,"y":..,"t":..}
/// per cross, vertices 1-based. Several configurations may follow each other.
void write_cross_config(std::ostream& out, const CrossConfig& config);
std::vector<CrossConfig> read_cross_configs(std::istream& in);
CrossConfig read_cross_config(std::istream& in);

nlohmann::json loops_to_json(const LoopSet& loops);

/// One row per replica: replica,n,lambda,theta,ell,c1,c2,c1_over_n.
void write_cycle_csv_header(std::ostream& out);
void write_cycle_csv_rows(std::ostream& out, const CycleStats& stats);

nlohmann::json summary_to_json(const CycleStats& stats);

struct RunManifest {
  std::string subcommand;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string version;
  std::string started;
  std::string finished;  // empty until the run completes
  std::vector<std::string> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
void write_json_file(const std::string& path, const nlohmann::json& value);
nlohmann::json read_json_file(const std::string& path);
std::string utc_timestamp();

}  // namespace cwip
