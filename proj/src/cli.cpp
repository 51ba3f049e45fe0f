#include "cwip/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cwip/colouring.hpp"
#include "cwip/io.hpp"
#include "cwip/oracle.hpp"
#include "cwip/parallel.hpp"
#include "cwip/sampler.hpp"
#include "cwip/stats.hpp"

#ifndef CWIP_VERSION
#define CWIP_VERSION "0.0.0"
#endif

namespace cwip::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Params {
  // sample, verify-*, gw
  std::size_t n = 100;
  double lambda = 1.0;
  double theta = 1.0;
  // sweep
  std::vector<std::size_t> ns{100};
  std::vector<double> lambdas{1.0};
  std::vector<double> thetas{1.0};

  std::optional<double> field_h;
  std::size_t burn_in = 200;
  std::size_t thin = 5;
  std::size_t replicas = 100;
  std::size_t samples_per_chain = 1;
  double shift_probability = 0.0;
  std::string sampler = "mcmc";
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::size_t samples = 10000;
  std::size_t twist_samples = 100000;
  double beta = 0.5;
  std::string pairs = "all";
  double significance = 0.01;
  double tolerance = 0.02;
  double sample_theta = 0.0;  // 0: same as theta
  std::string out;
  std::string config;
  std::string in;
  bool dump_loops = false;
  bool spool = false;
};

// Run context shared by subcommands.
struct Run {
  std::string subcommand;
  CLI::App* app = nullptr;
  Params p;
  std::ostream* out = nullptr;
  RunManifest manifest;

  bool writes_files() const { return !p.out.empty(); }
  std::string path(const std::string& name) const { return (fs::path(p.out) / name).string(); }

  void begin(std::vector<std::string> outputs) {
    manifest.subcommand = subcommand;
    manifest.seed = p.seed;
    manifest.version = CWIP_VERSION;
    manifest.params = collect_params();
    manifest.started = utc_timestamp();
    if (!writes_files()) return;
    fs::create_directories(p.out);
    manifest.outputs = std::move(outputs);
    write_json_file(path("manifest.json"), manifest_to_json(manifest));
  }

  void finish() {
    if (!writes_files()) return;
    manifest.finished = utc_timestamp();
    write_json_file(path("manifest.json"), manifest_to_json(manifest));
  }

  json collect_params() const {
    json params = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name == "out" || name == "config") continue;
      std::string value;
      if (opt->get_type_size() == 0) {
        value = opt->count() > 0 ? "true" : "false";
      } else if (opt->count() > 0) {
        const auto& rs = opt->results();
        for (std::size_t i = 0; i < rs.size(); ++i) value += (i ? "," : "") + rs[i];
      } else {
        value = opt->get_default_str();
      }
      params[name] = value;
    }
    return params;
  }
};

WeightSpec weight_of(const Params& p, double theta, std::size_t n, double lambda) {
  (void)n;
  // Loops are at most n beta = lambda long.
  if (p.field_h) return WeightSpec::external_field(*p.field_h, lambda);
  return WeightSpec::constant(theta);
}

ExperimentConfig experiment_of(const Params& p, std::size_t n, double lambda, double theta, std::uint64_t seed) {
  ExperimentConfig c;
  c.n = n;
  c.lambda = lambda;
  c.weight = weight_of(p, theta, n, lambda);
  c.replicas = p.replicas;
  c.sampler = parse_sampler_kind(p.sampler);
  c.burn_in_sweeps = p.burn_in;
  c.thinning_sweeps = p.thin;
  c.samples_per_chain = p.samples_per_chain;
  c.shift_probability = p.shift_probability;
  c.seed = seed;
  c.threads = p.threads;
  return c;
}

// Subcommands

int cmd_sample(Run& run) {
  const Params& p = run.p;
  std::vector<std::string> outputs{"cycles.csv", "summary.json"};
  if (p.spool) outputs.emplace_back("samples.jsonl");
  if (p.dump_loops) outputs.emplace_back("loops.jsonl");
  if ((p.spool || p.dump_loops) && !run.writes_files()) {
    throw std::invalid_argument("--spool and --dump-loops need --out");
  }
  run.begin(outputs);

  ExperimentConfig cfg = experiment_of(p, p.n, p.lambda, p.theta, p.seed);
  cfg.keep_configs = p.spool || p.dump_loops;
  const CycleStats stats = largest_cycle_experiment(cfg);
  const auto& s = stats.summary;

  std::ostream& o = *run.out;
  o << "n = " << p.n << ", lambda = " << format_real(p.lambda) << ", beta = " << format_real(p.lambda / static_cast<double>(p.n))
    << ", replicas = " << stats.records.size() << ", sampler = " << p.sampler << "\n";
  o << "mean |C1|/n = " << format_real(s.mean_c1_fraction) << " [" << format_real(s.mean_ci.low) << ", "
    << format_real(s.mean_ci.high) << "]\n";
  o << "median |C1|/n = " << format_real(s.median_c1_fraction) << " [" << format_real(s.median_ci.low) << ", "
    << format_real(s.median_ci.high) << "]\n";
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    o << "P(|C1| >= " << format_real(delta_grid[j]) << " n) = " << format_real(s.p_c1_at_least[j]) << "\n";
  }
  const double half = 1.96 * s.two_point_12_stderr;
  o << "P(1<->2) = " << format_real(s.two_point_12) << " +- " << format_real(s.two_point_12_stderr) << " (95% CI ["
    << format_real(s.two_point_12 - half) << ", " << format_real(s.two_point_12 + half) << "])\n";
  if (p.n == 2 && cfg.weight.is_constant()) {
    o << "analytic P(1<->2) = " << format_real(analytic_two_point_n2(cfg.weight.theta(), p.lambda / 2.0)) << "\n";
  }
  o << "mean ell = " << format_real(s.mean_ell) << ", mean crosses = " << format_real(s.mean_crosses) << "\n";
  if (stats.moves.birth_proposed + stats.moves.death_proposed > 0) {
    o << "acceptance: birth " << format_real(stats.moves.birth_rate()) << ", death "
      << format_real(stats.moves.death_rate()) << "\n";
  }
  if (stats.mean_ess_ell) o << "mean ESS(ell) per chain = " << format_real(*stats.mean_ess_ell) << "\n";

  if (run.writes_files()) {
    std::ofstream csv(run.path("cycles.csv"), std::ios::binary);
    write_cycle_csv_header(csv);
    write_cycle_csv_rows(csv, stats);
    write_json_file(run.path("summary.json"), summary_to_json(stats));
    if (p.spool) {
      std::ofstream f(run.path("samples.jsonl"), std::ios::binary);
      for (const auto& c : stats.configs) write_cross_config(f, c);
    }
    if (p.dump_loops) {
      std::ofstream f(run.path("loops.jsonl"), std::ios::binary);
      for (std::size_t i = 0; i < stats.configs.size(); ++i) {
        json rec = loops_to_json(build_loops(stats.configs[i]));
        rec["replica"] = i;
        f << rec.dump() << '\n';
      }
    }
  }
  run.finish();
  return exit_ok;
}

int cmd_sweep(Run& run) {
  const Params& p = run.p;
  run.begin({"sweep.csv", "sweep_summary.json"});
  std::ostringstream csv;
  write_cycle_csv_header(csv);
  json cells = json::array();
  std::size_t cell = 0;
  std::ostream& o = *run.out;
  o << "n,lambda,theta,mean_c1_over_n,median_c1_over_n,p_c1_at_least_0.01\n";
  for (std::size_t n : p.ns) {
    for (double lambda : p.lambdas) {
      for (double theta : p.thetas) {
        const CycleStats stats = largest_cycle_experiment(experiment_of(p, n, lambda, theta, derive_seed(p.seed, "cell", cell++)));
        write_cycle_csv_rows(csv, stats);
        cells.push_back(summary_to_json(stats));
        o << n << ',' << format_real(lambda) << ',' << format_real(stats.theta) << ','
          << format_real(stats.summary.mean_c1_fraction) << ',' << format_real(stats.summary.median_c1_fraction) << ','
          << format_real(stats.summary.p_c1_at_least[0]) << '\n';
      }
    }
  }
  if (run.writes_files()) {
    std::ofstream f(run.path("sweep.csv"), std::ios::binary);
    f << csv.str();
    write_json_file(run.path("sweep_summary.json"), cells);
  }
  run.finish();
  return exit_ok;
}

int cmd_verify_colouring(Run& run) {
  const Params& p = run.p;
  run.begin({"report.json"});
  RedPoissonExperiment cfg;
  cfg.n = p.n;
  cfg.lambda = p.lambda;
  cfg.colour_theta = p.theta;
  cfg.sample_theta = p.sample_theta > 0.0 ? p.sample_theta : p.theta;
  cfg.samples = p.samples;
  cfg.sampler = parse_sampler_kind(p.sampler);
  cfg.burn_in_sweeps = p.burn_in;
  cfg.seed = p.seed;
  cfg.threads = p.threads;
  const auto obs = red_poisson_observations(cfg);
  const PoissonCheckReport r = verify_red_poisson(obs, p.significance, derive_seed(p.seed, "pit"));
  const json report = {
      {"test", "red_poisson"},
      {"statistic", r.statistic},
      {"p_value", r.p_value},
      {"count_p_value", r.count_p_value},
      {"slab_statistic", r.slab_statistic},
      {"slab_p_value", r.slab_p_value},
      {"bins", r.bins},
      {"n_samples", r.n_samples},
      {"significance", r.significance},
      {"passed", r.passed},
      {"parameters",
       {{"n", p.n}, {"lambda", p.lambda}, {"theta", p.theta}, {"sample_theta", cfg.sample_theta}, {"seed", p.seed}}},
  };
  *run.out << report.dump(2) << '\n';
  if (run.writes_files()) write_json_file(run.path("report.json"), report);
  run.finish();
  return r.passed ? exit_ok : exit_verification_failed;
}

int cmd_verify_twist(Run& run) {
  const Params& p = run.p;
  run.begin({"report.json"});
  const TwistComparison cmp = twist_comparison(p.n, p.lambda, p.theta, p.twist_samples, p.seed, p.threads);
  const TestReport tv = total_variation(cmp.direct, cmp.reconstructed, 1000, derive_seed(p.seed, "tv"));
  const bool passed = tv.statistic < p.tolerance;
  const json report = {
      {"test", "twist_total_variation"},
      {"statistic", tv.statistic},
      {"ci", {tv.ci->low, tv.ci->high}},
      {"tolerance", p.tolerance},
      {"n_samples", p.twist_samples},
      {"phi_tilde_nontrivial", cmp.phi_tilde_nontrivial},
      {"passed", passed},
      {"parameters", {{"n", p.n}, {"lambda", p.lambda}, {"theta", p.theta}, {"seed", p.seed}}},
  };
  *run.out << report.dump(2) << '\n';
  if (run.writes_files()) write_json_file(run.path("report.json"), report);
  run.finish();
  return passed ? exit_ok : exit_verification_failed;
}

std::vector<std::pair<Vertex, Vertex>> parse_pairs(const std::string& spec, std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (spec == "all") {
    for (Vertex x = 0; x < n; ++x) {
      for (Vertex y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
    }
    return pairs;
  }
  std::stringstream ss(spec);
  std::string item;
  std::vector<long> values;
  while (std::getline(ss, item, ',')) values.push_back(std::stol(item));
  if (values.size() != 2) throw std::invalid_argument("--pairs expects 'all' or 'x,y'");
  if (values[0] < 1 || values[1] < 1 || values[0] > static_cast<long>(n) || values[1] > static_cast<long>(n)) {
    throw std::invalid_argument("--pairs: vertex out of range");
  }
  pairs.emplace_back(static_cast<Vertex>(values[0] - 1), static_cast<Vertex>(values[1] - 1));
  return pairs;
}

int cmd_xcheck_quantum(Run& run) {
  const Params& p = run.p;
  run.begin({"xcheck.csv"});
  const FiniteGraph graph = FiniteGraph::complete(p.n);
  const QuantumModel model(graph, p.beta);
  const auto pairs = parse_pairs(p.pairs, p.n);
  const WeightSpec weight = WeightSpec::constant(2.0);

  std::vector<std::vector<char>> hits(p.samples);
  parallel_for(p.samples, p.threads, [&](std::size_t i) {
    Rng rng(derive_seed(p.seed, "xcheck", i));
    const CycleDecomposition d = cycle_decompose(compose(rejection_sample(graph, p.beta, weight, rng)));
    hits[i].reserve(pairs.size());
    for (const auto& [x, y] : pairs) hits[i].push_back(two_point_indicator(d, x, y) ? 1 : 0);
  });

  std::ostringstream csv;
  csv << "pair,quantum,quarter_mc,mc_stderr,z\n";
  bool passed = true;
  const auto count = static_cast<double>(p.samples);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    double same = 0.0;
    for (const auto& h : hits) same += h[j];
    const double prob = same / count;
    const double quarter = 0.25 * prob;
    const double se = 0.25 * std::sqrt(prob * (1.0 - prob) / count);
    const double q = model.correlation(pairs[j].first, pairs[j].second);
    const double z = se > 0.0 ? (q - quarter) / se : (std::abs(q - quarter) < 1e-12 ? 0.0 : INFINITY);
    passed = passed && std::abs(z) <= 3.0;
    csv << pairs[j].first + 1 << '-' << pairs[j].second + 1 << ',' << format_real(q) << ',' << format_real(quarter)
        << ',' << format_real(se) << ',' << format_real(z) << '\n';
  }
  *run.out << csv.str();
  if (run.writes_files()) {
    std::ofstream f(run.path("xcheck.csv"), std::ios::binary);
    f << csv.str();
  }
  run.finish();
  return passed ? exit_ok : exit_verification_failed;
}

int cmd_gw(Run& run) {
  const Params& p = run.p;
  run.begin({"gw.json"});
  const SurvivalResult r = gw_survival(p.lambda);
  *run.out << "lambda = " << format_real(r.lambda) << "\nz = " << format_real(r.z)
           << "\nresidual = " << format_real(r.residual) << '\n';
  if (run.writes_files()) {
    write_json_file(run.path("gw.json"), {{"lambda", r.lambda}, {"z", r.z}, {"residual", r.residual}});
  }
  run.finish();
  return exit_ok;
}

struct SweepRow {
  std::size_t n = 0;
  std::string lambda, theta;
  double c1_over_n = 0.0;
};

std::vector<SweepRow> read_sweep_csv(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + file);
  std::string line;
  std::getline(in, line);
  if (line != "replica,n,lambda,theta,ell,c1,c2,c1_over_n") throw std::runtime_error(file + ": unexpected header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 8) throw std::runtime_error(file + ": malformed row '" + line + "'");
    rows.push_back({std::stoul(f[1]), f[2], f[3], std::stod(f[7])});
  }
  return rows;
}

int cmd_report(Run& run) {
  const Params& p = run.p;
  if (p.in.empty()) throw std::invalid_argument("report needs --in DIR (a sweep output directory)");
  run.begin({"table.txt", "plot.csv"});
  const auto rows = read_sweep_csv((fs::path(p.in) / "sweep.csv").string());

  using Key = std::tuple<double, std::size_t, double>;  // theta, n, lambda
  std::map<Key, std::vector<double>> groups;
  std::map<Key, std::pair<std::string, std::string>> labels;
  for (const auto& r : rows) {
    const Key k{std::stod(r.theta), r.n, std::stod(r.lambda)};
    groups[k].push_back(r.c1_over_n);
    labels[k] = {r.theta, r.lambda};
  }
  std::ostringstream table, plot;
  table << "theta     n  lambda  replicas  mean|C1|/n  median|C1|/n  P(|C1|>=0.01n)\n";
  plot << "theta,n,lambda,mean_c1_over_n,ci_low,ci_high\n";
  std::size_t g = 0;
  for (const auto& [key, xs] : groups) {
    const auto& [theta, n, lambda] = key;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double med = median(xs);
    const auto hits = std::count_if(xs.begin(), xs.end(), [](double v) { return v >= 0.01; });
    const Interval ci = bootstrap_interval(
        xs, [](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); },
        1000, derive_seed(p.seed, "report", g++));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%5s %5zu %7s %9zu %11.4f %13.4f %15.3f\n", labels[key].first.c_str(), n,
                  labels[key].second.c_str(), xs.size(), mean, med, static_cast<double>(hits) / static_cast<double>(xs.size()));
    table << buf;
    plot << labels[key].first << ',' << n << ',' << labels[key].second << ',' << format_real(mean) << ','
         << format_real(ci.low) << ',' << format_real(ci.high) << '\n';
  }
  *run.out << table.str();
  if (run.writes_files()) {
    std::ofstream(run.path("table.txt"), std::ios::binary) << table.str();
    std::ofstream(run.path("plot.csv"), std::ios::binary) << plot.str();
  } else {
    *run.out << '\n' << plot.str();
  }
  run.finish();
  return exit_ok;
}

// Options

void add_common(CLI::App* sub, Params& p) {
  sub->add_option("--seed", p.seed, "Master seed");
  sub->add_option("--threads", p.threads, "Worker threads (0 = all cores)");
  sub->add_option("--out", p.out, "Output directory for manifest and results");
  sub->add_option("--config", p.config, "JSON file with option values, or a manifest.json");
}

void add_sampler_options(CLI::App* sub, Params& p) {
  sub->add_option("--field-h", p.field_h, "External field h: loop weight 2cosh(h |loop|)");
  sub->add_option("--burn-in", p.burn_in, "MCMC burn-in sweeps");
  sub->add_option("--thin", p.thin, "MCMC thinning sweeps")->check(CLI::PositiveNumber);
  sub->add_option("--replicas", p.replicas, "Replica count")->check(CLI::PositiveNumber);
  sub->add_option("--samples-per-chain", p.samples_per_chain, "Thinned samples taken from each MCMC chain")
      ->check(CLI::PositiveNumber);
  sub->add_option("--shift-prob", p.shift_probability, "Probability of a time-shift proposal")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--sampler", p.sampler, "direct, rejection or mcmc")
      ->check(CLI::IsMember({"direct", "rejection", "mcmc"}));
}

// Token form of a JSON config value.
std::string token_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + token_of(v[i]);
    return s;
  }
  return v.dump();
}

// Splices values from --config into the argument list; explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
  }
  if (file.empty()) return args;
  json cfg;
  try {
    cfg = read_json_file(file);
  } catch (const std::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  if (cfg.contains("params")) cfg = cfg["params"];
  if (!cfg.is_object()) throw CLI::ValidationError("--config", "expected a JSON object");
  std::vector<std::string> out(args.begin(), args.begin() + 1);
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config" || key == "out") continue;
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    const std::string token = token_of(value);
    if (token.empty()) continue;
    if (key == "dump-loops" || key == "spool") {
      if (token == "true") out.push_back(flag);
      continue;
    }
    out.push_back(flag + "=" + token);
  }
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle-weighted interchange process simulations", "cwip"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", CWIP_VERSION);

  Params p;
  std::map<std::string, CLI::App*> subs;
  const auto add = [&](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    subs[name] = s;
    add_common(s, p);
    return s;
  };

  CLI::App* sample = add("sample", "Draw replicas and report cycle statistics");
  sample->add_option("--n", p.n, "Vertex count")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  sample->add_option("--lambda", p.lambda, "beta = lambda / n")->check(CLI::PositiveNumber);
  sample->add_option("--theta", p.theta, "Cycle weight")->check(CLI::Range(1.0, 1e6));
  add_sampler_options(sample, p);
  sample->add_flag("--dump-loops", p.dump_loops, "Write the loop decomposition of every sample");
  sample->add_flag("--spool", p.spool, "Write every sample as JSONL");

  CLI::App* sweep = add("sweep", "Cycle statistics over a grid of (n, lambda, theta)");
  sweep->add_option("--n", p.ns, "Vertex counts")->delimiter(',');
  sweep->add_option("--lambda", p.lambdas, "lambda values")->delimiter(',');
  sweep->add_option("--theta", p.thetas, "theta values")->delimiter(',');
  add_sampler_options(sweep, p);

  CLI::App* colour = add("verify-colouring", "Poisson test of the red crosses against the red region measure");
  colour->add_option("--n", p.n, "Vertex count")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  colour->add_option("--lambda", p.lambda, "beta = lambda / n")->check(CLI::PositiveNumber);
  colour->add_option("--theta", p.theta, "Colouring weight, r = 1/theta")->check(CLI::Range(1.0, 1e6));
  colour->add_option("--sample-theta", p.sample_theta, "Sampling weight if different (negative control)");
  colour->add_option("--samples", p.samples, "Sample count")->check(CLI::Range(100, 100000000));
  colour->add_option("--sampler", p.sampler, "rejection or mcmc")->check(CLI::IsMember({"direct", "rejection", "mcmc"}));
  colour->add_option("--burn-in", p.burn_in, "MCMC burn-in sweeps");
  colour->add_option("--significance", p.significance, "Test level")->check(CLI::Range(0.0, 1.0));

  CLI::App* twist = add("verify-twist", "Red permutation law versus phi~ o sigma_beta");
  twist->add_option("--n", p.n, "Vertex count")->check(CLI::Range(2, 12));
  twist->add_option("--lambda", p.lambda, "beta = lambda / n")->check(CLI::PositiveNumber);
  twist->add_option("--theta", p.theta, "Cycle weight")->check(CLI::Range(1.0, 1e6));
  twist->add_option("--samples", p.twist_samples, "Sample count")->check(CLI::Range(100, 100000000));
  twist->add_option("--tolerance", p.tolerance, "Largest accepted total variation distance");

  CLI::App* xq = add("xcheck-quantum", "Heisenberg correlations against 1/4 P_2(x <-> y)");
  xq->add_option("--n", p.n, "Vertex count (at most 12)")->check(CLI::Range(2, 12));
  xq->add_option("--beta", p.beta, "Inverse temperature")->check(CLI::NonNegativeNumber);
  xq->add_option("--pairs", p.pairs, "'all' or 'x,y' (1-based)");
  xq->add_option("--samples", p.samples, "Rejection samples")->check(CLI::Range(100, 100000000));

  CLI::App* gw = add("gw", "Galton-Watson survival probability z(lambda)");
  gw->add_option("--lambda", p.lambda, "Poisson offspring mean")->check(CLI::PositiveNumber);

  CLI::App* report = add("report", "Summary table and plot CSV of a sweep directory");
  report->add_option("--in", p.in, "Directory holding sweep.csv")->required();

  std::vector<std::string> args;
  try {
    args = raw_args;
    if (!args.empty()) {
      const auto sub_it = subs.find(args.front());
      if (sub_it != subs.end()) args = expand_config(args);
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  Run run;
  run.p = p;
  run.out = &out;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) {
      run.subcommand = name;
      run.app = sub;
    }
  }
  try {
    if (run.subcommand == "sample") return cmd_sample(run);
    if (run.subcommand == "sweep") return cmd_sweep(run);
    if (run.subcommand == "verify-colouring") return cmd_verify_colouring(run);
    if (run.subcommand == "verify-twist") return cmd_verify_twist(run);
    if (run.subcommand == "xcheck-quantum") return cmd_xcheck_quantum(run);
    if (run.subcommand == "gw") return cmd_gw(run);
    if (run.subcommand == "report") return cmd_report(run);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_verification_failed;
  }
  return exit_usage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace cwip::cli
