#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cwip/cli.hpp"
#include "cwip/colouring.hpp"
#include "cwip/io.hpp"
#include "cwip/loops.hpp"
#include "cwip/oracle.hpp"
#include "cwip/sampler.hpp"
#include "cwip/stats.hpp"

namespace py = pybind11;
using namespace cwip;

namespace {

std::vector<std::tuple<Vertex, Vertex, double>> cross_tuples(const CrossConfig& c) {
  std::vector<std::tuple<Vertex, Vertex, double>> out;
  out.reserve(c.size());
  for (const auto& x : c.crosses()) out.emplace_back(x.x, x.y, x.time);
  return out;
}

CrossConfig from_tuples(std::size_t n, double beta, const std::vector<std::tuple<Vertex, Vertex, double>>& crosses) {
  std::vector<Cross> cs;
  cs.reserve(crosses.size());
  for (const auto& [x, y, t] : crosses) cs.push_back(Cross::make(x, y, t));
  return CrossConfig::from_unsorted(n, beta, std::move(cs));
}

WeightSpec weight_of(double theta, std::optional<double> field_h, double lambda) {
  return field_h ? WeightSpec::external_field(*field_h, lambda) : WeightSpec::constant(theta);
}

}  // namespace

PYBIND11_MODULE(_cwip, m) {
  m.doc() = "Cycle-weighted interchange process on the complete graph. Vertices are 0-based.";

  py::class_<CrossConfig>(m, "CrossConfig")
      .def(py::init(&from_tuples), py::arg("n"), py::arg("beta"), py::arg("crosses") = std::vector<std::tuple<Vertex, Vertex, double>>{})
      .def_property_readonly("n", &CrossConfig::n)
      .def_property_readonly("beta", &CrossConfig::beta)
      .def_property_readonly("crosses", &cross_tuples)
      .def("__len__", &CrossConfig::size)
      .def("__eq__", [](const CrossConfig& a, const CrossConfig& b) { return a == b; })
      .def("to_jsonl", [](const CrossConfig& c) {
        std::ostringstream out;
        write_cross_config(out, c);
        return out.str();
      })
      .def_static("from_jsonl", [](const std::string& text) {
        std::istringstream in(text);
        return read_cross_config(in);
      });

  m.def("sample_crosses", [](std::size_t n, double beta, std::uint64_t seed) {
    Rng rng(seed);
    return sample_crosses(FiniteGraph::complete(n), beta, rng);
  }, py::arg("n"), py::arg("beta"), py::arg("seed") = 0, "Poisson crosses on K_n over [0, beta).");

  m.def("permutation", [](const CrossConfig& c) { return compose(c).image(); },
        "Images of the composed permutation, earliest cross first.");
  m.def("cycles", [](const CrossConfig& c) { return cycle_decompose(compose(c)).cycles; },
        "Cycles of the permutation, largest first.");
  m.def("cycle_count", [](const CrossConfig& c) { return cycle_decompose(compose(c)).count(); });
  m.def("insert_delta_cycles", [](const CrossConfig& c, Vertex x, Vertex y, double t) {
    return insert_delta_cycles(c, Cross::make(x, y, t));
  });
  m.def("loop_lengths", [](const CrossConfig& c) {
    std::vector<double> out;
    for (const auto& loop : build_loops(c).loops) out.push_back(loop.vertical_length());
    return out;
  }, "Vertical length of every loop, ordered by root.");

  m.def("rejection_sample", [](std::size_t n, double beta, double theta, std::uint64_t seed) {
    Rng rng(seed);
    return rejection_sample(FiniteGraph::complete(n), beta, WeightSpec::constant(theta), rng);
  }, py::arg("n"), py::arg("beta"), py::arg("theta"), py::arg("seed") = 0);

  m.def("mcmc_sample", [](std::size_t n, double lambda, double theta, std::size_t count, std::size_t burn_in_sweeps,
                          std::size_t thinning_sweeps, std::uint64_t seed, std::optional<double> field_h) {
    SamplerConfig c;
    c.n = n;
    c.lambda = lambda;
    c.weight = weight_of(theta, field_h, lambda);
    c.burn_in_sweeps = burn_in_sweeps;
    c.thinning_sweeps = thinning_sweeps;
    c.seed = seed;
    return mcmc_sample(c, count);
  }, py::arg("n"), py::arg("lambda_"), py::arg("theta"), py::arg("count"), py::arg("burn_in_sweeps") = 200,
     py::arg("thinning_sweeps") = 5, py::arg("seed") = 0, py::arg("field_h") = py::none());

  m.def("largest_cycle_experiment", [](std::size_t n, double lambda, double theta, std::size_t replicas,
                                       const std::string& sampler, std::size_t burn_in_sweeps,
                                       std::size_t samples_per_chain, std::uint64_t seed, std::size_t threads) {
    ExperimentConfig c;
    c.n = n;
    c.lambda = lambda;
    c.weight = WeightSpec::constant(theta);
    c.replicas = replicas;
    c.sampler = parse_sampler_kind(sampler);
    c.burn_in_sweeps = burn_in_sweeps;
    c.samples_per_chain = samples_per_chain;
    c.seed = seed;
    c.threads = threads;
    const auto s = largest_cycle_experiment(c);
    py::dict out;
    std::vector<std::size_t> c1, ell;
    for (const auto& r : s.records) {
      c1.push_back(r.c1);
      ell.push_back(r.ell);
    }
    out["c1"] = c1;
    out["ell"] = ell;
    out["mean_c1_fraction"] = s.summary.mean_c1_fraction;
    out["median_c1_fraction"] = s.summary.median_c1_fraction;
    out["mean_ci"] = std::make_pair(s.summary.mean_ci.low, s.summary.mean_ci.high);
    out["two_point_12"] = s.summary.two_point_12;
    out["two_point_12_stderr"] = s.summary.two_point_12_stderr;
    return out;
  }, py::arg("n"), py::arg("lambda_"), py::arg("theta"), py::arg("replicas"), py::arg("sampler") = "mcmc",
     py::arg("burn_in_sweeps") = 200, py::arg("samples_per_chain") = 1, py::arg("seed") = 0, py::arg("threads") = 0);

  m.def("colour", [](const CrossConfig& c, double theta, std::uint64_t seed) {
    Rng rng(seed);
    const auto state = classify_crosses(c, build_loops(c), colour_cycles(cycle_decompose(compose(c)), theta, rng));
    const auto twist = compute_twist(state.mixed_crosses, state.red_vertices_t0);
    py::dict out;
    out["red_vertices"] = state.red_vertices_t0;
    out["red"] = state.red_crosses;
    out["white"] = state.white_crosses;
    out["mixed"] = state.mixed_crosses;
    out["phi_tilde"] = twist.phi_tilde.image();
    return out;
  }, py::arg("config"), py::arg("theta"), py::arg("seed") = 0,
     "Colours loops red with probability 1/theta and splits the crosses.");

  m.def("analytic_two_point_n2", &analytic_two_point_n2, py::arg("theta"), py::arg("beta"));
  m.def("heisenberg_correlation", [](std::size_t n, double beta, std::size_t x, std::size_t y) {
    return QuantumModel(FiniteGraph::complete(n), beta).correlation(x, y);
  }, py::arg("n"), py::arg("beta"), py::arg("x"), py::arg("y"), "<S3_x S3_y> on K_n, n <= 12.");
  m.def("gw_survival", [](double lambda) { return gw_survival(lambda).z; }, py::arg("lambda_"));
  m.def("pd1_largest_part_mean", [](std::size_t draws, std::uint64_t seed) {
    const auto e = pd1_largest_part_mean(draws, seed);
    return std::make_pair(e.mean, e.standard_error);
  }, py::arg("draws"), py::arg("seed") = 0);
  m.attr("pd1_largest_part_reference") = pd1_largest_part_reference;

  m.def("cli", [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command line tool in process; returns (exit code, stdout, stderr).");
}
