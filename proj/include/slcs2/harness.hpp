#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slcs2/archive.hpp"
#include "slcs2/config.hpp"

namespace slcs2 {

struct RunRecord {
    uint64_t specHash = 0;
    std::string env, range, algo;
    uint64_t seed = 0;
    std::vector<double> bestByGeneration;  // [0] is right after the initial evaluation
    double finalBest = -1.0;
    int generationsRun = 0;
    long evaluations = 0;  // evaluate() calls, initial included
    long operations = 0;   // simulated operations (kappa re-runs counted)
    long rulesKept = 0, rulesImported = 0, rulesFresh = 0;  // offspring provenance
    size_t archiveSize = 0;
    double wallClockSec = 0;
    Solution best;
};

struct InstanceSinks {
    std::ostream* archiveSnapshots = nullptr;  // one JSON line per generation
    std::ostream* finalEventLog = nullptr;     // JSONL replay of the best solution
};

// One seeded instance of the chosen algorithm, from initial random solution
// to the generation limit. Fully deterministic given (cfg, seed).
RunRecord run_instance(const ExperimentConfig& cfg, uint64_t seed,
                       const InstanceSinks& sinks = {});

void write_results_header(std::ostream& out);
void write_results_row(std::ostream& out, const RunRecord& r);

// "0..9" (inclusive range) or "0,3,7"
std::vector<uint64_t> parse_seed_list(const std::string& text);

} // namespace slcs2
