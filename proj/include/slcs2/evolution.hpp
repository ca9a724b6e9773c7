#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "slcs2/operation.hpp"

namespace slcs2 {

struct Solution {
    std::vector<RuleSet> ruleSets;         // one per agent, fixed size
    double fitness = 0.0;                  // mean over evaluationCount operations
    bool evaluated = false;
    std::vector<double> contributions;     // mean delivered-packet touches per agent
    int evaluationCount = 0;
    int phi = 0;                           // evolution attempts on this solution
    long insertionIndex = -1;              // archive bookkeeping
};

Solution random_solution(Rng& rng, int swarmSize, int ruleCount, const GrammarConfig& grammar);

double compute_fitness(const OperationResult& res);

// one full deployment of a solution: the operation outcome plus the rule sets
// carrying their end-of-operation learning statistics
struct EvaluationOutcome {
    OperationResult op;
    std::vector<RuleSet> finalRules;
};

using OperationRunner = std::function<EvaluationOutcome(const Solution&, int evalIdx)>;

// runs up to kappa operations, stopping early once the running mean fitness
// drops to zero or below; stores mean fitness, contributions and rule stats
void evaluate(Solution& s, const OperationRunner& run, int kappa);

// contribution split around the mean; a full-house promotes everyone, so one
// member is demoted at random to keep the offspring distinct from its parent
std::pair<std::vector<int>, std::vector<int>> split_quality(const std::vector<double>& contributions,
                                                            Rng& rng);

// roulette wheel over hq contributions, uniform when they are all zero
int select_donor(const std::vector<int>& hq, const std::vector<double>& contributions, Rng& rng);

// slot split for crossover: how many low-error rules survive and how many
// high-strength donor rules come across, the rest being random refills
std::pair<int, int> crossover_counts(int ruleCount, double fit, int phi, double rho, double u);

struct EvolutionParams {
    double rho = 10.0;       // exploration pressure divisor
    bool exchange = true;    // false: no donor imports (ablation)
    GrammarConfig grammar;
};

RuleSet crossover(const RuleSet& lqSet, const RuleSet& donorSet, double fit, int phi,
                  const EvolutionParams& params, Rng& rng);

// produces the offspring and bumps the parent's exploration counter
Solution evolve(Solution& parent, const EvolutionParams& params, Rng& rng);

} // namespace slcs2
