#include "slcs2/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slcs2 {

Solution random_solution(Rng& rng, int swarmSize, int ruleCount, const GrammarConfig& grammar) {
    Solution s;
    s.ruleSets.resize(swarmSize);
    for (RuleSet& rs : s.ruleSets) {
        rs.reserve(ruleCount);
        for (int j = 0; j < ruleCount; ++j) rs.push_back(random_rule(rng, grammar));
    }
    s.contributions.assign(swarmSize, 0.0);
    return s;
}

double compute_fitness(const OperationResult& res) {
    return (double)res.delivered / (double)res.packets -
           (double)res.stepsUsed / (double)res.timeLimit;
}

void evaluate(Solution& s, const OperationRunner& run, int kappa) {
    int n = (int)s.ruleSets.size();
    s.fitness = 0.0;
    s.contributions.assign(n, 0.0);
    s.evaluationCount = 0;

    for (int k = 0; k < kappa; ++k) {
        EvaluationOutcome out = run(s, k);
        double fit = compute_fitness(out.op);
        double w = 1.0 / (double)(k + 1);

        s.fitness += (fit - s.fitness) * w;
        for (int i = 0; i < n; ++i)
            s.contributions[i] += ((double)out.op.contributions[i] - s.contributions[i]) * w;
        for (int i = 0; i < n; ++i) {
            RuleSet& mine = s.ruleSets[i];
            const RuleSet& got = out.finalRules[i];
            for (size_t j = 0; j < mine.size(); ++j) {
                if (k == 0) {
                    mine[j].q = got[j].q;
                    mine[j].strength = got[j].strength;
                    mine[j].error = got[j].error;
                    mine[j].uses = got[j].uses;
                } else {
                    mine[j].q += (got[j].q - mine[j].q) * w;
                    mine[j].strength += (got[j].strength - mine[j].strength) * w;
                    mine[j].error += (got[j].error - mine[j].error) * w;
                    mine[j].uses = (uint32_t)std::lround(
                        (double)mine[j].uses + ((double)got[j].uses - (double)mine[j].uses) * w);
                }
            }
        }
        s.evaluationCount = k + 1;
        if (s.fitness <= 0.0) break;
    }
    s.evaluated = true;
}

std::pair<std::vector<int>, std::vector<int>> split_quality(const std::vector<double>& contributions,
                                                            Rng& rng) {
    int n = (int)contributions.size();
    double mean = std::accumulate(contributions.begin(), contributions.end(), 0.0) / (double)n;
    std::vector<int> hq, lq;
    for (int i = 0; i < n; ++i) {
        if (contributions[i] >= mean - 1e-12)
            hq.push_back(i);
        else
            lq.push_back(i);
    }
    if (lq.empty()) {
        int demoted = hq[rng.uniform_int(0, (int)hq.size() - 1)];
        hq.erase(std::find(hq.begin(), hq.end(), demoted));
        lq.push_back(demoted);
    }
    return {hq, lq};
}

int select_donor(const std::vector<int>& hq, const std::vector<double>& contributions, Rng& rng) {
    double total = 0.0;
    for (int i : hq) total += contributions[i];
    if (total <= 0.0) return hq[rng.uniform_int(0, (int)hq.size() - 1)];
    double r = rng.uniform01() * total;
    double acc = 0.0;
    for (int i : hq) {
        acc += contributions[i];
        if (r < acc) return i;
    }
    return hq.back();
}

std::pair<int, int> crossover_counts(int ruleCount, double fit, int phi, double rho, double u) {
    double frac = std::clamp(fit / 2.0 - (double)phi / rho, 0.0, 1.0);
    int keep = (int)std::floor((double)ruleCount * frac);
    int imports = (int)std::floor((double)(ruleCount - keep) * u);
    return {keep, imports};
}

RuleSet crossover(const RuleSet& lqSet, const RuleSet& donorSet, double fit, int phi,
                  const EvolutionParams& params, Rng& rng) {
    int ruleCount = (int)lqSet.size();
    double u = rng.uniform01();
    auto [keep, imports] = crossover_counts(ruleCount, fit, phi, params.rho, u);
    if (!params.exchange) imports = 0;

    std::vector<int> byError(ruleCount), byStrength(ruleCount);
    std::iota(byError.begin(), byError.end(), 0);
    std::iota(byStrength.begin(), byStrength.end(), 0);
    std::stable_sort(byError.begin(), byError.end(),
                     [&](int a, int b) { return lqSet[a].error < lqSet[b].error; });
    std::stable_sort(byStrength.begin(), byStrength.end(),
                     [&](int a, int b) { return donorSet[a].strength > donorSet[b].strength; });

    RuleSet child;
    child.reserve(ruleCount);
    std::vector<int> keptIdx(byError.begin(), byError.begin() + keep);
    std::sort(keptIdx.begin(), keptIdx.end());
    for (int idx : keptIdx) {
        Rule r = lqSet[idx];
        r.origin = RuleOrigin::Kept;
        child.push_back(std::move(r));
    }
    for (int k = 0; k < imports; ++k) {
        Rule r = donorSet[byStrength[k]];
        r.reset_stats();
        r.origin = RuleOrigin::Imported;
        child.push_back(std::move(r));
    }
    while ((int)child.size() < ruleCount) child.push_back(random_rule(rng, params.grammar));
    return child;
}

Solution evolve(Solution& parent, const EvolutionParams& params, Rng& rng) {
    Solution child = parent;
    child.evaluated = false;
    child.evaluationCount = 0;
    child.phi = 0;
    child.insertionIndex = -1;

    auto [hq, lq] = split_quality(parent.contributions, rng);
    for (int i : lq) {
        int donor = select_donor(hq, parent.contributions, rng);
        child.ruleSets[i] =
            crossover(parent.ruleSets[i], parent.ruleSets[donor], parent.fitness, parent.phi,
                      params, rng);
    }
    ++parent.phi;
    return child;
}

} // namespace slcs2
