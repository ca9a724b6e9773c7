#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <fstream>

#include "slcs2/harness.hpp"
#include "slcs2/serialize.hpp"
#include "slcs2/stats.hpp"

namespace py = pybind11;
using namespace slcs2;

namespace {

struct PyRunResult {
    std::string env, range, algo;
    uint64_t seed = 0;
    std::string specHash;
    std::vector<double> bestByGeneration;
    double finalBest = -1.0;
    int generationsRun = 0;
    long evaluations = 0, operations = 0;
    size_t archiveSize = 0;
    double wallClockSec = 0;
    std::string bestText;
};

std::string hash_hex(uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

PyRunResult py_run_instance(const std::string& configJson, uint64_t seed,
                            const std::string& eventLogPath, const std::string& snapshotPath) {
    ExperimentConfig cfg = parse_config(configJson);
    std::ofstream ev, sn;
    InstanceSinks sinks;
    if (!eventLogPath.empty()) {
        ev.open(eventLogPath);
        if (!ev) throw std::runtime_error("cannot write " + eventLogPath);
        sinks.finalEventLog = &ev;
    }
    if (!snapshotPath.empty()) {
        sn.open(snapshotPath);
        if (!sn) throw std::runtime_error("cannot write " + snapshotPath);
        sinks.archiveSnapshots = &sn;
    }
    RunRecord r = run_instance(cfg, seed, sinks);

    PyRunResult out;
    out.env = r.env;
    out.range = r.range;
    out.algo = r.algo;
    out.seed = r.seed;
    out.specHash = hash_hex(r.specHash);
    out.bestByGeneration = r.bestByGeneration;
    out.finalBest = r.finalBest;
    out.generationsRun = r.generationsRun;
    out.evaluations = r.evaluations;
    out.operations = r.operations;
    out.archiveSize = r.archiveSize;
    out.wallClockSec = r.wallClockSec;
    if (!r.best.ruleSets.empty()) out.bestText = solution_to_text(r.best, cfg.evolution.grammar);
    return out;
}

Genome to_genome(const std::vector<uint32_t>& digits) {
    Genome g;
    g.digits = digits;
    return g;
}

GrammarConfig variant_config(const std::string& variant) {
    GrammarConfig gc;
    auto v = parse_grammar_variant(variant);
    if (!v) throw std::invalid_argument("unknown grammar variant \"" + variant + "\"");
    gc.variant = *v;
    return gc;
}

} // namespace

PYBIND11_MODULE(_slcs2, m) {
    m.doc() = "swarm packet-ferrying simulator and rule-evolution harness";
    m.attr("__version__") = "0.1.0";

    py::class_<PyRunResult>(m, "RunResult")
        .def_readonly("env", &PyRunResult::env)
        .def_readonly("range", &PyRunResult::range)
        .def_readonly("algo", &PyRunResult::algo)
        .def_readonly("seed", &PyRunResult::seed)
        .def_readonly("spec_hash", &PyRunResult::specHash)
        .def_readonly("best_by_generation", &PyRunResult::bestByGeneration)
        .def_readonly("final_best", &PyRunResult::finalBest)
        .def_readonly("generations_run", &PyRunResult::generationsRun)
        .def_readonly("evaluations", &PyRunResult::evaluations)
        .def_readonly("operations", &PyRunResult::operations)
        .def_readonly("archive_size", &PyRunResult::archiveSize)
        .def_readonly("wall_clock_sec", &PyRunResult::wallClockSec)
        .def_readonly("best_text", &PyRunResult::bestText)
        .def("__repr__", [](const PyRunResult& r) {
            return "<RunResult " + r.algo + " " + r.env + "/" + r.range + " seed " +
                   std::to_string(r.seed) + " best " + std::to_string(r.finalBest) + ">";
        });

    py::class_<MannWhitney>(m, "RankTest")
        .def_readonly("u", &MannWhitney::u)
        .def_readonly("p_two_sided", &MannWhitney::pTwoSided)
        .def_readonly("p_first_greater", &MannWhitney::pFirstGreater)
        .def_readonly("exact", &MannWhitney::exact);

    py::class_<SampleSummary>(m, "Summary")
        .def_readonly("n", &SampleSummary::n)
        .def_readonly("mean", &SampleSummary::mean)
        .def_readonly("ci_lo", &SampleSummary::ciLo)
        .def_readonly("ci_hi", &SampleSummary::ciHi);

    m.def("canonical_config",
          [](const std::string& text) { return canonical_config(parse_config(text)); },
          py::arg("config_json"),
          "normalize a JSON config to its canonical key-sorted single-line form");
    m.def("spec_hash",
          [](const std::string& text) { return hash_hex(spec_hash(parse_config(text))); },
          py::arg("config_json"), "hex id of the canonical config, as stamped into results rows");

    m.def("run_instance", &py_run_instance, py::arg("config_json"), py::arg("seed"),
          py::arg("event_log_path") = "", py::arg("snapshot_path") = "",
          py::call_guard<py::gil_scoped_release>(),
          "one seeded instance of the configured algorithm, initial solution to generation limit");

    m.def("decode_rule",
          [](const std::vector<uint32_t>& cond, const std::vector<uint32_t>& act,
             const std::string& variant) {
              return rule_text(make_rule(to_genome(cond), to_genome(act), variant_config(variant)));
          },
          py::arg("condition_digits"), py::arg("action_digits"), py::arg("variant") = "standard",
          "decode a condition/action genome pair into the canonical rule text");

    m.def("random_solution_text",
          [](uint64_t seed, int agents, int rules, const std::string& variant) {
              GrammarConfig gc = variant_config(variant);
              Rng rng(seed);
              return solution_to_text(random_solution(rng, agents, rules, gc), gc);
          },
          py::arg("seed"), py::arg("agents"), py::arg("rules"), py::arg("variant") = "standard");

    m.def("behavior_distance",
          [](const std::string& textA, const std::string& textB) {
              return behavior_distance(solution_from_text(textA), solution_from_text(textB));
          },
          py::arg("solution_a"), py::arg("solution_b"),
          "index-aligned rule-overlap distance between two serialized solutions, in [0,1]");

    m.def("solution_fitness",
          [](const std::string& text) { return solution_from_text(text).fitness; },
          py::arg("solution"), "fitness recorded in a serialized solution's meta line");

    m.def("rank_test",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              return mann_whitney(a, b);
          },
          py::arg("a"), py::arg("b"),
          "two-sample rank test; exact for small samples, normal approximation otherwise");

    m.def("summarize",
          [](const std::vector<double>& xs, double confidence) {
              return summarize_samples(xs, confidence);
          },
          py::arg("samples"), py::arg("confidence") = 0.90,
          "sample mean with a Student-t confidence interval");
}
