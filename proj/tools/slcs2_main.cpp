#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "slcs2/harness.hpp"
#include "slcs2/serialize.hpp"
#include "slcs2/stats.hpp"

namespace fs = std::filesystem;
using namespace slcs2;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string run_tag(const ExperimentConfig& cfg, uint64_t seed) {
    return cfg.algorithm + "_" + to_string(cfg.world.type) + "_" + to_string(cfg.world.range) +
           "_s" + std::to_string(seed);
}

int cmd_evolve(const std::string& configPath, const std::string& env, const std::string& range,
               const std::string& seeds, const std::string& grammar, const std::string& algo,
               const std::string& out, std::string profile, int generations, int kappa,
               int swarm, int packets, int rules, bool quiet, const CLI::App& cmd) {
    ExperimentConfig cfg = parse_config(configPath.empty() ? "{}" : slurp(configPath));
    if (profile.empty()) profile = configPath.empty() ? "desk" : "none";

    if (cmd.count("--env")) cfg.world.type = parse_env_type(env);
    if (cmd.count("--range")) {
        cfg.world.range = parse_range_class(range);
        cfg.world.sourceSinkDistance = default_distance(cfg.world.range);
        cfg.world.timeLimit = default_time_limit(cfg.world.range);
    }
    if (cmd.count("--grammar")) {
        auto v = parse_grammar_variant(grammar);
        if (!v) throw std::runtime_error("unknown grammar variant \"" + grammar + "\"");
        cfg.evolution.grammar.variant = *v;
    }
    if (cmd.count("--algo")) cfg.algorithm = algo;

    if (profile == "desk") {
        cfg.generationLimit = 50;
        cfg.kappa = 2;
        cfg.world.timeLimit = cfg.world.range == RangeClass::Short ? 4000 : 8000;
    } else if (profile == "paper") {
        cfg.generationLimit = 500;
        cfg.kappa = 3;
        cfg.world.timeLimit = default_time_limit(cfg.world.range);
    } else if (profile != "none") {
        throw std::runtime_error("profile must be desk, paper or none");
    }

    if (cmd.count("--generations")) cfg.generationLimit = generations;
    if (cmd.count("--kappa")) cfg.kappa = kappa;
    if (cmd.count("--swarm")) cfg.world.swarmSize = swarm;
    if (cmd.count("--packets")) cfg.world.packets = packets;
    if (cmd.count("--rules")) cfg.ruleCount = rules;
    if (cmd.count("--seeds")) cfg.seeds = parse_seed_list(seeds);
    validate_config(cfg);

    fs::create_directories(out);
    const fs::path csvPath = fs::path(out) / "results.csv";
    const bool fresh = !fs::exists(csvPath) || fs::file_size(csvPath) == 0;
    std::ofstream csv(csvPath, std::ios::app);
    if (!csv) throw std::runtime_error("cannot write " + csvPath.string());
    if (fresh) write_results_header(csv);

    const bool archived = cfg.algorithm == "slcs2" || cfg.algorithm == "slcs2_no_exchange";
    for (uint64_t seed : cfg.seeds) {
        const std::string tag = run_tag(cfg, seed);
        std::ofstream snaps, events;
        InstanceSinks sinks;
        if (archived) {
            snaps.open(fs::path(out) / ("snapshots_" + tag + ".jsonl"));
            sinks.archiveSnapshots = &snaps;
        }
        events.open(fs::path(out) / ("eventlog_" + tag + ".jsonl"));
        sinks.finalEventLog = &events;

        RunRecord rec = run_instance(cfg, seed, sinks);
        write_results_row(csv, rec);
        csv.flush();

        if (!rec.best.ruleSets.empty()) {
            std::ofstream rulesOut(fs::path(out) / ("best_" + tag + ".rules"));
            rulesOut << solution_to_text(rec.best, cfg.evolution.grammar);
        }
        std::ofstream traj(fs::path(out) / ("trajectory_" + tag + ".csv"));
        traj << "generation,best_fitness\n";
        for (size_t g = 0; g < rec.bestByGeneration.size(); ++g) {
            char fit[64];
            std::snprintf(fit, sizeof fit, "%.17g", rec.bestByGeneration[g]);
            traj << g << ',' << fit << '\n';
        }
        if (!quiet)
            std::cout << tag << "  best=" << rec.finalBest << "  evals=" << rec.evaluations
                      << "  wall=" << rec.wallClockSec << "s\n";
    }
    if (!quiet) std::cout << "results: " << csvPath.string() << "\n";
    return 0;
}

struct ResultRow {
    std::string env, range, algo;
    double bestFitness = 0;
};

std::vector<ResultRow> read_results(const std::string& in) {
    fs::path path(in);
    if (fs::is_directory(path)) path /= "results.csv";
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::vector<ResultRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        if (cols.size() != 8) throw std::runtime_error("malformed results row: " + line);
        rows.push_back({cols[1], cols[2], cols[4], std::stod(cols[5])});
    }
    return rows;
}

int cmd_stats(const std::string& in, const std::string& pairs) {
    std::vector<ResultRow> rows = read_results(in);
    if (rows.empty()) throw std::runtime_error("no result rows");

    // cell = env/range; samples per algorithm within each cell
    std::map<std::string, std::map<std::string, std::vector<double>>> cells;
    std::map<std::string, std::vector<double>> pooled;
    for (const ResultRow& r : rows) {
        cells[r.env + "/" + r.range][r.algo].push_back(r.bestFitness);
        pooled[r.algo].push_back(r.bestFitness);
    }

    std::cout.setf(std::ios::fixed);
    std::cout.precision(4);
    for (const auto& [cell, byAlgo] : cells) {
        std::cout << "== " << cell << "\n";
        for (const auto& [algo, xs] : byAlgo) {
            SampleSummary s = summarize_samples(xs);
            std::cout << "  " << algo << ": n=" << s.n << " mean=" << s.mean << " ci90=["
                      << s.ciLo << ", " << s.ciHi << "]\n";
        }
    }
    std::cout << "== overall\n";
    for (const auto& [algo, xs] : pooled) {
        SampleSummary s = summarize_samples(xs);
        std::cout << "  " << algo << ": n=" << s.n << " mean=" << s.mean << " ci90=[" << s.ciLo
                  << ", " << s.ciHi << "]\n";
    }

    if (!pairs.empty()) {
        const size_t comma = pairs.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("--pairs wants \"algoA,algoB\"");
        const std::string a = pairs.substr(0, comma), b = pairs.substr(comma + 1);
        std::cout << "== " << a << " vs " << b << "\n";
        for (const auto& [cell, byAlgo] : cells) {
            auto ia = byAlgo.find(a), ib = byAlgo.find(b);
            if (ia == byAlgo.end() || ib == byAlgo.end()) {
                std::cout << "  " << cell << ": missing samples\n";
                continue;
            }
            PairVerdict v = compare_samples(ia->second, ib->second);
            const char* who = v.winner == 0 ? a.c_str() : v.winner == 1 ? b.c_str() : "tie";
            std::cout << "  " << cell << ": p=" << v.pTwoSided << " higher=" << who << " "
                      << (v.winner < 0 ? "" : v.significant ? "(significantly superior)"
                                                            : "(non-significantly superior)")
                      << "\n";
        }
        if (pooled.count(a) && pooled.count(b)) {
            PairVerdict v = compare_samples(pooled[a], pooled[b]);
            const char* who = v.winner == 0 ? a.c_str() : v.winner == 1 ? b.c_str() : "tie";
            std::cout << "  overall: p=" << v.pTwoSided << " higher=" << who << " "
                      << (v.winner < 0 ? "" : v.significant ? "(significantly superior)"
                                                            : "(non-significantly superior)")
                      << "\n";
        }
    }
    return 0;
}

int cmd_replay(const std::string& logPath, const std::string& outPath) {
    std::ifstream in(logPath);
    if (!in) throw std::runtime_error("cannot open " + logPath);
    std::ofstream out(outPath);
    if (!out) throw std::runtime_error("cannot write " + outPath);
    out << "t,agent,x,y,packet\n";

    long steps = 0, transfers = 0, delivered = 0;
    int sinkId = -1;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        if (j.contains("init")) {
            sinkId = j["init"]["agents"].get<int>() + 1;
            continue;
        }
        ++steps;
        const long t = j["t"].get<long>();
        const auto& pos = j["pos"];
        const auto& hold = j["hold"];
        for (size_t i = 0; i < pos.size(); ++i) {
            char x[64], y[64];
            std::snprintf(x, sizeof x, "%.17g", pos[i][0].get<double>());
            std::snprintf(y, sizeof y, "%.17g", pos[i][1].get<double>());
            out << t << ',' << i << ',' << x << ',' << y << ',' << hold[i].get<int>() << '\n';
        }
        for (const auto& tx : j["tx"]) {
            ++transfers;
            if (tx["to"].get<int>() == sinkId) ++delivered;
        }
    }
    std::cout << "steps=" << steps << " transfers=" << transfers << " delivered=" << delivered
              << " plotdata=" << outPath << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"seeded swarm packet-ferrying simulator and rule-evolution harness"};
    app.require_subcommand(1);

    // evolve
    std::string configPath, env = "open", range = "short", seeds = "0..9";
    std::string grammar = "standard", algo = "slcs2", out = "results", profile;
    int generations = 0, kappa = 0, swarm = 0, packets = 0, rules = 0;
    bool quiet = false;
    CLI::App* evolve = app.add_subcommand("evolve", "run seeded evolution instances");
    evolve->add_option("--config", configPath, "JSON config file (cli flags override it)");
    evolve->add_option("--env", env, "open|jammed|urban|urban_jammed");
    evolve->add_option("--range", range, "short|long (sets distance and time limit)");
    evolve->add_option("--seeds", seeds, "e.g. 0..9 or 1,5,7");
    evolve->add_option("--grammar", grammar, "standard|channel|power|both");
    evolve->add_option("--algo", algo, "slcs2|slcs2_no_novelty|slcs2_no_exchange|vf_baseline");
    evolve->add_option("--out", out, "output directory");
    evolve->add_option("--profile", profile,
                       "desk|paper|none; desk = 50 gens, kappa 2, short ops "
                       "(default: desk, or none with --config)");
    evolve->add_option("--generations", generations, "generation limit");
    evolve->add_option("--kappa", kappa, "max re-evaluations per solution");
    evolve->add_option("--swarm", swarm, "agent count");
    evolve->add_option("--packets", packets, "packets staged at the source");
    evolve->add_option("--rules", rules, "rules per agent rule-set");
    evolve->add_flag("--quiet", quiet, "suppress progress lines");

    // stats
    std::string statsIn = "results", pairs;
    CLI::App* stats = app.add_subcommand("stats", "summarize results.csv");
    stats->add_option("--in", statsIn, "results directory or csv path");
    stats->add_option("--pairs", pairs, "two algorithms to compare, e.g. slcs2,vf_baseline");

    // replay
    std::string logPath, plotData = "plotdata.csv";
    CLI::App* replay = app.add_subcommand("replay", "convert an event log to plot data");
    replay->add_option("--log", logPath, "JSONL event log")->required();
    replay->add_option("--plotdata", plotData, "output CSV path");

    CLI11_PARSE(app, argc, argv);
    try {
        if (evolve->parsed())
            return cmd_evolve(configPath, env, range, seeds, grammar, algo, out, profile,
                              generations, kappa, swarm, packets, rules, quiet, *evolve);
        if (stats->parsed()) return cmd_stats(statsIn, pairs);
        if (replay->parsed()) return cmd_replay(logPath, plotData);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
