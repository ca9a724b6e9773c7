#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "slcs2/agent.hpp"

namespace slcs2 {

struct PolicyDecision {
    std::optional<Action> action;  // symbolic action, grounded via resolve_action
    std::optional<Vec2> moveDir;   // direct steering, for scripted controllers
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual void begin(const World& world) { (void)world; }
    virtual PolicyDecision choose(int agent, const Observation& obs, Rng& rng) = 0;
    virtual void feedback(int agent, double reward) { (void)agent; (void)reward; }
    virtual void finish() {}
};

// runs one rule set per agent with GRASP selection and online q / strength /
// error updates; the Q target is applied one step late, when the next
// shortlist (and thus max q_{t+1}) is known
class RuleSwarmPolicy : public Policy {
public:
    RuleSwarmPolicy(std::vector<RuleSet> ruleSets, LearningConfig cfg);

    void begin(const World& world) override;
    PolicyDecision choose(int agent, const Observation& obs, Rng& rng) override;
    void feedback(int agent, double reward) override;
    void finish() override;

    const std::vector<RuleSet>& rule_sets() const { return rules_; }

private:
    struct Mind {
        std::deque<std::vector<int>> history;  // front = newest step's matched set
        std::vector<int> pendingMatched;
        double pendingReward = 0.0;
        bool hasPending = false;
    };
    void push_history(Mind& m, std::vector<int> matched);
    void flush_pending(int agent, double maxNext);

    std::vector<RuleSet> rules_;
    LearningConfig cfg_;
    RadioConfig radio_;
    std::vector<Mind> minds_;
};

// hand-written chain controller: agents spread into equidistant relay slots
// between source and sink and hand packets down the line
class VirtualForcePolicy : public Policy {
public:
    explicit VirtualForcePolicy(LearningConfig cfg) : cfg_(cfg) {}

    void begin(const World& world) override;
    PolicyDecision choose(int agent, const Observation& obs, Rng& rng) override;

private:
    LearningConfig cfg_;
    RadioConfig radio_;
    int swarm_ = 0;
    long step_ = 0;
    Vec2 source_, sink_;
};

} // namespace slcs2
