#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slcs2/agent.hpp"
#include "slcs2/evolution.hpp"
#include "slcs2/world.hpp"

namespace slcs2 {

inline constexpr const char* kAlgorithms[] = {"slcs2", "slcs2_no_novelty",
                                              "slcs2_no_exchange", "vf_baseline"};

struct ExperimentConfig {
    WorldConfig world;
    LearningConfig learning;
    EvolutionParams evolution;
    double omega0 = 0.5;
    int kappa = 3;
    int ruleCount = 100;
    int generationLimit = 500;
    std::string algorithm = "slcs2";
    std::vector<uint64_t> seeds{0};
};

// Partial JSON document; absent keys keep their defaults. Validates before
// returning and throws std::runtime_error with a readable message.
ExperimentConfig parse_config(const std::string& jsonText);

// key-sorted single-line JSON covering every semantically relevant field
std::string canonical_config(const ExperimentConfig& cfg);

// FNV-1a over the canonical form; the id stamped into results rows
uint64_t spec_hash(const ExperimentConfig& cfg);

void validate_config(const ExperimentConfig& cfg);  // throws std::runtime_error

} // namespace slcs2
