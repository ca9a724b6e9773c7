#include "slcs2/policy.hpp"

#include <algorithm>

namespace slcs2 {

RuleSwarmPolicy::RuleSwarmPolicy(std::vector<RuleSet> ruleSets, LearningConfig cfg)
    : rules_(std::move(ruleSets)), cfg_(cfg) {}

void RuleSwarmPolicy::begin(const World& world) {
    radio_ = world.config().radio;
    for (RuleSet& rs : rules_)
        for (Rule& r : rs) r.reset_stats();
    minds_.assign(rules_.size(), Mind{});
}

void RuleSwarmPolicy::push_history(Mind& m, std::vector<int> matched) {
    m.history.push_front(std::move(matched));
    while ((int)m.history.size() > cfg_.bpMax + 1) m.history.pop_back();
}

void RuleSwarmPolicy::flush_pending(int agent, double maxNext) {
    Mind& m = minds_[agent];
    if (!m.hasPending) return;
    error_update(rules_[agent], m.pendingMatched, m.pendingReward, cfg_.alphaQ);
    q_update(rules_[agent], m.pendingMatched, m.pendingReward, maxNext, cfg_.alphaQ, cfg_.betaQ);
    m.hasPending = false;
}

PolicyDecision RuleSwarmPolicy::choose(int agent, const Observation& obs, Rng& rng) {
    RuleSet& rs = rules_[agent];
    Mind& m = minds_[agent];
    std::vector<int> sl = shortlist(rs, obs, radio_);

    double maxNext = 0.0;
    if (!sl.empty()) {
        maxNext = rs[sl[0]].q;
        for (int idx : sl) maxNext = std::max(maxNext, rs[idx].q);
    }
    flush_pending(agent, maxNext);

    if (sl.empty()) {
        push_history(m, {});
        return {};
    }
    int sel = grasp_select(rs, sl, cfg_.alphaGrasp, rng);
    std::vector<int> matched;
    for (int idx : sl)
        if (rs[idx].action == rs[sel].action) matched.push_back(idx);
    for (int idx : matched) ++rs[idx].uses;
    push_history(m, matched);

    PolicyDecision d;
    d.action = rs[sel].action;
    return d;
}

void RuleSwarmPolicy::feedback(int agent, double reward) {
    Mind& m = minds_[agent];
    strength_update(rules_[agent], m.history, reward, cfg_.lambda, cfg_.bpMax);
    m.pendingMatched = m.history.front();
    m.pendingReward = reward;
    m.hasPending = true;
}

void RuleSwarmPolicy::finish() {
    for (int i = 0; i < (int)rules_.size(); ++i) {
        flush_pending(i, 0.0);
        finalize_strength(rules_[i]);
    }
}

void VirtualForcePolicy::begin(const World& world) {
    radio_ = world.config().radio;
    swarm_ = world.swarm_size();
    source_ = world.source_pos();
    sink_ = world.sink_pos();
    step_ = 0;
}

PolicyDecision VirtualForcePolicy::choose(int agent, const Observation& obs, Rng&) {
    if (agent == 0) ++step_;
    PolicyDecision d;

    if (obs.hasPacket) {
        if (obs.sinkInRange) {
            Action a;
            a.kind = Action::Kind::Send;
            a.sendTarget = CommTarget::Sink;
            d.action = a;
            return d;
        }
        const NeighborInfo* next = obs.neighbor(obs.sinkNeighborId);
        if (next && next->isAgent && !next->hasPacket && next->pos.dist(obs.sinkPos) < obs.dSink) {
            Action a;
            a.kind = Action::Kind::Send;
            a.sendTarget = CommTarget::SinkNeighbor;
            d.action = a;
            return d;
        }
        d.moveDir = (obs.sinkPos - obs.pos);
        return d;
    }

    // empty-handed: one agent per step may ask the source for a packet, so
    // simultaneous requests do not trample each other
    if (obs.sourceInRange && step_ % std::max(swarm_, 1) == (long)agent) {
        Action a;
        a.kind = Action::Kind::Collect;
        d.action = a;
        return d;
    }

    // drift to this agent's relay slot on the source-sink line
    Vec2 axis = sink_ - source_;
    Vec2 slot = source_ + axis * ((double)(agent + 1) / (double)(swarm_ + 1));
    Vec2 force = slot - obs.pos;
    for (const NeighborInfo& nb : obs.neighbors) {
        if (!nb.isAgent || nb.dist >= 10.0 || nb.dist < 1e-9) continue;
        force = force + (obs.pos - nb.pos).unit() * (10.0 - nb.dist);
    }
    if (force.norm() < 0.5) return d;  // close enough, hold position
    d.moveDir = force;
    return d;
}

} // namespace slcs2
