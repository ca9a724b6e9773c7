#include "slcs2/config.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <stdexcept>

namespace slcs2 {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("config: " + msg); }

void expect_keys(const json& j, const char* section, std::initializer_list<const char*> known) {
    for (const auto& kv : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (kv.key() == k) { ok = true; break; }
        if (!ok) fail(std::string("unknown key \"") + kv.key() + "\" in " + section);
    }
}

void read_radio(const json& j, RadioConfig& r) {
    expect_keys(j, "environment.radio",
                {"txPowerDbm", "refLossDb", "refDistance", "pathLossExponent",
                 "shadowingSigmaDb", "wallLossDb", "noiseFloorDbm", "snirThresholdDb",
                 "noiseTriggerDbm", "detectionMarginDb"});
    if (j.contains("txPowerDbm")) r.txPowerDbm = j["txPowerDbm"].get<double>();
    if (j.contains("refLossDb")) r.refLossDb = j["refLossDb"].get<double>();
    if (j.contains("refDistance")) r.refDistance = j["refDistance"].get<double>();
    if (j.contains("pathLossExponent")) r.pathLossExponent = j["pathLossExponent"].get<double>();
    if (j.contains("shadowingSigmaDb")) r.shadowingSigmaDb = j["shadowingSigmaDb"].get<double>();
    if (j.contains("wallLossDb")) r.wallLossDb = j["wallLossDb"].get<double>();
    if (j.contains("noiseFloorDbm")) r.noiseFloorDbm = j["noiseFloorDbm"].get<double>();
    if (j.contains("snirThresholdDb")) r.snirThresholdDb = j["snirThresholdDb"].get<double>();
    if (j.contains("noiseTriggerDbm")) r.noiseTriggerDbm = j["noiseTriggerDbm"].get<double>();
    if (j.contains("detectionMarginDb")) r.detectionMarginDb = j["detectionMarginDb"].get<double>();
}

void read_environment(const json& j, WorldConfig& w) {
    expect_keys(j, "environment",
                {"type", "range", "distance", "timeLimit", "swarmSize", "packets",
                 "corridorHeight", "edgeMargin", "agentSpeed", "agentRadius", "spawnRadius",
                 "obstacleSenseRange", "radio"});
    if (j.contains("type")) w.type = parse_env_type(j["type"].get<std::string>());
    if (j.contains("range")) {
        w.range = parse_range_class(j["range"].get<std::string>());
        w.sourceSinkDistance = default_distance(w.range);
        w.timeLimit = default_time_limit(w.range);
    }
    if (j.contains("distance")) w.sourceSinkDistance = j["distance"].get<double>();
    if (j.contains("timeLimit")) w.timeLimit = j["timeLimit"].get<long>();
    if (j.contains("swarmSize")) w.swarmSize = j["swarmSize"].get<int>();
    if (j.contains("packets")) w.packets = j["packets"].get<int>();
    if (j.contains("corridorHeight")) w.corridorHeight = j["corridorHeight"].get<double>();
    if (j.contains("edgeMargin")) w.edgeMargin = j["edgeMargin"].get<double>();
    if (j.contains("agentSpeed")) w.agentSpeed = j["agentSpeed"].get<double>();
    if (j.contains("agentRadius")) w.agentRadius = j["agentRadius"].get<double>();
    if (j.contains("spawnRadius")) w.spawnRadius = j["spawnRadius"].get<double>();
    if (j.contains("obstacleSenseRange")) w.obstacleSenseRange = j["obstacleSenseRange"].get<double>();
    if (j.contains("radio")) read_radio(j["radio"], w.radio);
}

void read_learning(const json& j, LearningConfig& l) {
    expect_keys(j, "learning",
                {"alphaGrasp", "alphaQ", "betaQ", "lambda", "bpMax", "costMove", "costComm",
                 "distanceThreshold", "knowledgeSharePeriod"});
    if (j.contains("alphaGrasp")) l.alphaGrasp = j["alphaGrasp"].get<double>();
    if (j.contains("alphaQ")) l.alphaQ = j["alphaQ"].get<double>();
    if (j.contains("betaQ")) l.betaQ = j["betaQ"].get<double>();
    if (j.contains("lambda")) l.lambda = j["lambda"].get<double>();
    if (j.contains("bpMax")) l.bpMax = j["bpMax"].get<int>();
    if (j.contains("costMove")) l.costMove = j["costMove"].get<double>();
    if (j.contains("costComm")) l.costComm = j["costComm"].get<double>();
    if (j.contains("distanceThreshold")) l.distanceThreshold = j["distanceThreshold"].get<double>();
    if (j.contains("knowledgeSharePeriod"))
        l.knowledgeSharePeriod = j["knowledgeSharePeriod"].get<long>();
}

void read_evolution(const json& j, ExperimentConfig& cfg) {
    expect_keys(j, "evolution",
                {"rho", "exchange", "grammar", "ruleCount", "kappa", "omega0", "digitMax",
                 "genomeLength", "maxConditionDepth", "maxWraps"});
    if (j.contains("rho")) cfg.evolution.rho = j["rho"].get<double>();
    if (j.contains("exchange")) cfg.evolution.exchange = j["exchange"].get<bool>();
    if (j.contains("grammar")) {
        auto v = parse_grammar_variant(j["grammar"].get<std::string>());
        if (!v) fail("unknown grammar variant \"" + j["grammar"].get<std::string>() + "\"");
        cfg.evolution.grammar.variant = *v;
    }
    if (j.contains("ruleCount")) cfg.ruleCount = j["ruleCount"].get<int>();
    if (j.contains("kappa")) cfg.kappa = j["kappa"].get<int>();
    if (j.contains("omega0")) cfg.omega0 = j["omega0"].get<double>();
    if (j.contains("digitMax")) cfg.evolution.grammar.digitMax = j["digitMax"].get<uint32_t>();
    if (j.contains("genomeLength"))
        cfg.evolution.grammar.genomeLength = j["genomeLength"].get<size_t>();
    if (j.contains("maxConditionDepth"))
        cfg.evolution.grammar.maxConditionDepth = j["maxConditionDepth"].get<int>();
    if (j.contains("maxWraps")) cfg.evolution.grammar.maxWraps = j["maxWraps"].get<int>();
}

void read_run(const json& j, ExperimentConfig& cfg) {
    expect_keys(j, "run", {"generations", "algorithm", "seeds"});
    if (j.contains("generations")) cfg.generationLimit = j["generations"].get<int>();
    if (j.contains("algorithm")) cfg.algorithm = j["algorithm"].get<std::string>();
    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<uint64_t>>();
}

} // namespace

ExperimentConfig parse_config(const std::string& jsonText) {
    ExperimentConfig cfg;
    json j;
    try {
        j = json::parse(jsonText);
        if (!j.is_object()) fail("top level must be an object");
        expect_keys(j, "top level", {"environment", "learning", "evolution", "run"});
        if (j.contains("environment")) read_environment(j["environment"], cfg.world);
        if (j.contains("learning")) read_learning(j["learning"], cfg.learning);
        if (j.contains("evolution")) read_evolution(j["evolution"], cfg);
        if (j.contains("run")) read_run(j["run"], cfg);
    } catch (const json::exception& e) {
        fail(e.what());
    }
    validate_config(cfg);
    return cfg;
}

std::string canonical_config(const ExperimentConfig& cfg) {
    json j;
    json& env = j["environment"];
    env["type"] = to_string(cfg.world.type);
    env["range"] = to_string(cfg.world.range);
    env["distance"] = cfg.world.sourceSinkDistance;
    env["timeLimit"] = cfg.world.timeLimit;
    env["swarmSize"] = cfg.world.swarmSize;
    env["packets"] = cfg.world.packets;
    env["corridorHeight"] = cfg.world.corridorHeight;
    env["edgeMargin"] = cfg.world.edgeMargin;
    env["agentSpeed"] = cfg.world.agentSpeed;
    env["agentRadius"] = cfg.world.agentRadius;
    env["spawnRadius"] = cfg.world.spawnRadius;
    env["obstacleSenseRange"] = cfg.world.obstacleSenseRange;
    json& r = env["radio"];
    r["txPowerDbm"] = cfg.world.radio.txPowerDbm;
    r["refLossDb"] = cfg.world.radio.refLossDb;
    r["refDistance"] = cfg.world.radio.refDistance;
    r["pathLossExponent"] = cfg.world.radio.pathLossExponent;
    r["shadowingSigmaDb"] = cfg.world.radio.shadowingSigmaDb;
    r["wallLossDb"] = cfg.world.radio.wallLossDb;
    r["noiseFloorDbm"] = cfg.world.radio.noiseFloorDbm;
    r["snirThresholdDb"] = cfg.world.radio.snirThresholdDb;
    r["noiseTriggerDbm"] = cfg.world.radio.noiseTriggerDbm;
    r["detectionMarginDb"] = cfg.world.radio.detectionMarginDb;
    json& l = j["learning"];
    l["alphaGrasp"] = cfg.learning.alphaGrasp;
    l["alphaQ"] = cfg.learning.alphaQ;
    l["betaQ"] = cfg.learning.betaQ;
    l["lambda"] = cfg.learning.lambda;
    l["bpMax"] = cfg.learning.bpMax;
    l["costMove"] = cfg.learning.costMove;
    l["costComm"] = cfg.learning.costComm;
    l["distanceThreshold"] = cfg.learning.distanceThreshold;
    l["knowledgeSharePeriod"] = cfg.learning.knowledgeSharePeriod;
    json& e = j["evolution"];
    e["rho"] = cfg.evolution.rho;
    e["exchange"] = cfg.evolution.exchange;
    e["grammar"] = to_string(cfg.evolution.grammar.variant);
    e["digitMax"] = cfg.evolution.grammar.digitMax;
    e["genomeLength"] = cfg.evolution.grammar.genomeLength;
    e["maxConditionDepth"] = cfg.evolution.grammar.maxConditionDepth;
    e["maxWraps"] = cfg.evolution.grammar.maxWraps;
    e["ruleCount"] = cfg.ruleCount;
    e["kappa"] = cfg.kappa;
    e["omega0"] = cfg.omega0;
    json& run = j["run"];
    run["generations"] = cfg.generationLimit;
    run["algorithm"] = cfg.algorithm;
    run["seeds"] = cfg.seeds;
    return j.dump();
}

uint64_t spec_hash(const ExperimentConfig& cfg) {
    const std::string s = canonical_config(cfg);
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void validate_config(const ExperimentConfig& cfg) {
    const WorldConfig& w = cfg.world;
    if (w.packets <= 0) fail("packets must be positive");
    if (w.timeLimit <= 0) fail("timeLimit must be positive");
    if (w.sourceSinkDistance <= 0) fail("distance must be positive");
    if (w.swarmSize < 0) fail("swarmSize must be >= 0");
    if (w.swarmSize == 0 && cfg.algorithm != "vf_baseline")
        fail("swarmSize 0 only makes sense for vf_baseline");
    if (w.agentSpeed <= 0) fail("agentSpeed must be positive");
    if (w.radio.refDistance <= 0) fail("radio.refDistance must be positive");
    if (w.radio.pathLossExponent <= 0) fail("radio.pathLossExponent must be positive");
    if (w.radio.shadowingSigmaDb < 0) fail("radio.shadowingSigmaDb must be >= 0");

    const LearningConfig& l = cfg.learning;
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!unit(l.alphaGrasp) || !unit(l.alphaQ) || !unit(l.betaQ))
        fail("alphaGrasp/alphaQ/betaQ must lie in [0,1]");
    if (!(l.lambda > 0.0 && l.lambda < 1.0)) fail("lambda must lie in (0,1)");
    if (l.bpMax < 1) fail("bpMax must be >= 1");
    if (l.costMove < 0 || l.costComm < 0) fail("action costs must be >= 0");
    if (std::pow(l.lambda, l.bpMax) > 0.05 + 1e-12)
        fail("lambda^bpMax exceeds 0.05; the credit window would truncate too much");
    if (l.distanceThreshold <= 0) fail("distanceThreshold must be positive");
    if (l.knowledgeSharePeriod < 1) fail("knowledgeSharePeriod must be >= 1");

    if (cfg.evolution.rho <= 0) fail("rho must be positive");
    const GrammarConfig& g = cfg.evolution.grammar;
    if (g.genomeLength < 1) fail("genomeLength must be >= 1");
    if (g.digitMax < 1) fail("digitMax must be >= 1");
    if (g.maxConditionDepth < 0) fail("maxConditionDepth must be >= 0");
    if (g.maxWraps < 1) fail("maxWraps must be >= 1");
    if (cfg.ruleCount < 1) fail("ruleCount must be >= 1");
    if (cfg.kappa < 1) fail("kappa must be >= 1");
    if (cfg.omega0 < 0) fail("omega0 must be >= 0");
    if (cfg.generationLimit < 1) fail("generations must be >= 1");

    if (std::find_if(std::begin(kAlgorithms), std::end(kAlgorithms),
                     [&](const char* a) { return cfg.algorithm == a; }) ==
        std::end(kAlgorithms))
        fail("unknown algorithm \"" + cfg.algorithm + "\"");
    if (cfg.seeds.empty()) fail("seeds must not be empty");
    std::set<uint64_t> uniq(cfg.seeds.begin(), cfg.seeds.end());
    if (uniq.size() != cfg.seeds.size()) fail("seeds must be distinct");
}

} // namespace slcs2
