#include "slcs2/harness.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "slcs2/operation.hpp"

namespace slcs2 {

namespace {

constexpr uint64_t kEvoStream = 0xe701;
constexpr uint64_t kDemoStream = 0xd390;

uint64_t world_seed(uint64_t instanceSeed, int gen, int evalIdx) {
    uint64_t tag = ((uint64_t)(uint32_t)(gen + 1) << 32) | (uint32_t)evalIdx;
    return Rng::derive(instanceSeed, tag);
}

void audit_origins(const Solution& child, RunRecord& rec) {
    for (const RuleSet& rs : child.ruleSets)
        for (const Rule& r : rs) {
            if (r.origin == RuleOrigin::Kept) ++rec.rulesKept;
            else if (r.origin == RuleOrigin::Imported) ++rec.rulesImported;
            else ++rec.rulesFresh;
        }
}

void run_vf(const ExperimentConfig& cfg, uint64_t seed, const InstanceSinks& sinks,
            RunRecord& rec) {
    World w(cfg.world, world_seed(seed, 0, 0));
    VirtualForcePolicy policy(cfg.learning);
    EventLogger log;
    const EventLogger* logPtr = nullptr;
    if (sinks.finalEventLog) {
        log = [&](const std::string& line) { *sinks.finalEventLog << line << '\n'; };
        logPtr = &log;
    }
    OperationResult op = run_operation(w, policy, cfg.learning, logPtr);
    const double fit = compute_fitness(op);
    rec.bestByGeneration = {fit};
    rec.finalBest = fit;
    rec.evaluations = 1;
    rec.operations = 1;
    rec.best.fitness = fit;
    rec.best.evaluated = true;
}

void run_evolving(const ExperimentConfig& cfg, uint64_t seed, const InstanceSinks& sinks,
                  RunRecord& rec) {
    Rng evoRng(Rng::derive(seed, kEvoStream));
    const GrammarConfig& gc = cfg.evolution.grammar;
    int gen = 0;

    OperationRunner runner = [&](const Solution& s, int evalIdx) {
        World w(cfg.world, world_seed(seed, gen, evalIdx));
        RuleSwarmPolicy policy(s.ruleSets, cfg.learning);
        EvaluationOutcome out;
        out.op = run_operation(w, policy, cfg.learning, nullptr);
        out.finalRules = policy.rule_sets();
        ++rec.operations;
        return out;
    };

    Solution init = random_solution(evoRng, cfg.world.swarmSize, cfg.ruleCount, gc);
    evaluate(init, runner, cfg.kappa);
    ++rec.evaluations;
    double best = init.fitness;
    Solution bestSol = init;
    rec.bestByGeneration.push_back(best);

    EvolutionParams params = cfg.evolution;
    const bool hillClimb = cfg.algorithm == "slcs2_no_novelty";
    if (cfg.algorithm == "slcs2_no_exchange") params.exchange = false;

    NoveltyArchive arch(cfg.omega0);
    Solution incumbent;  // hill-climbing state
    if (hillClimb) {
        incumbent = std::move(init);
    } else {
        arch.update(std::move(init));
        if (sinks.archiveSnapshots) *sinks.archiveSnapshots << arch.snapshot_line(0) << '\n';
    }

    for (gen = 1; gen <= cfg.generationLimit; ++gen) {
        Solution& parent = hillClimb ? incumbent : arch.select_next();
        Solution child = evolve(parent, params, evoRng);
        audit_origins(child, rec);
        evaluate(child, runner, cfg.kappa);
        ++rec.evaluations;
        if (child.fitness > best) {
            best = child.fitness;
            bestSol = child;
        }
        rec.bestByGeneration.push_back(best);
        if (hillClimb) {
            if (child.fitness >= incumbent.fitness) incumbent = std::move(child);
        } else {
            arch.update(std::move(child));
            if (sinks.archiveSnapshots) *sinks.archiveSnapshots << arch.snapshot_line(gen) << '\n';
        }
    }

    rec.finalBest = best;
    rec.archiveSize = hillClimb ? 0 : arch.size();
    rec.best = std::move(bestSol);

    if (sinks.finalEventLog) {
        World w(cfg.world, Rng::derive(seed, kDemoStream));
        RuleSwarmPolicy policy(rec.best.ruleSets, cfg.learning);
        EventLogger log = [&](const std::string& line) { *sinks.finalEventLog << line << '\n'; };
        run_operation(w, policy, cfg.learning, &log);
    }
}

} // namespace

RunRecord run_instance(const ExperimentConfig& cfg, uint64_t seed, const InstanceSinks& sinks) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.specHash = spec_hash(cfg);
    rec.env = to_string(cfg.world.type);
    rec.range = to_string(cfg.world.range);
    rec.algo = cfg.algorithm;
    rec.seed = seed;
    rec.generationsRun = cfg.algorithm == "vf_baseline" ? 0 : cfg.generationLimit;

    if (cfg.algorithm == "vf_baseline") run_vf(cfg, seed, sinks, rec);
    else run_evolving(cfg, seed, sinks, rec);

    rec.wallClockSec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

void write_results_header(std::ostream& out) {
    out << "spec_hash,env,range,seed,algo,best_fitness,generations_run,wall_clock\n";
}

void write_results_row(std::ostream& out, const RunRecord& r) {
    char fit[64];
    std::snprintf(fit, sizeof fit, "%.17g", r.finalBest);
    char wall[64];
    std::snprintf(wall, sizeof wall, "%.3f", r.wallClockSec);
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", (unsigned long long)r.specHash);
    out << hash << ',' << r.env << ',' << r.range << ',' << r.seed << ',' << r.algo << ','
        << fit << ',' << r.generationsRun << ',' << wall << '\n';
}

std::vector<uint64_t> parse_seed_list(const std::string& text) {
    auto parse_one = [](const std::string& tok) -> uint64_t {
        size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::logic_error&) {
            throw std::runtime_error("bad seed \"" + tok + "\"");
        }
        if (used != tok.size()) throw std::runtime_error("bad seed \"" + tok + "\"");
        return v;
    };

    std::vector<uint64_t> out;
    const size_t dots = text.find("..");
    if (dots != std::string::npos) {
        uint64_t lo = parse_one(text.substr(0, dots));
        uint64_t hi = parse_one(text.substr(dots + 2));
        if (hi < lo) throw std::runtime_error("seed range is reversed");
        for (uint64_t s = lo; s <= hi; ++s) out.push_back(s);
        return out;
    }
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(parse_one(tok));
    if (out.empty()) throw std::runtime_error("empty seed list");
    return out;
}

} // namespace slcs2
