#include "slcs2/agent.hpp"

#include <algorithm>
#include <cmath>

namespace slcs2 {

void AgentMemory::remember(int id, const Vec2& pos, bool isAgent, long t) {
    Entry& e = known[id];
    if (t >= e.seen) e = Entry{pos, isAgent, t};
}

void AgentMemory::merge(const AgentMemory& other) {
    for (const auto& [id, e] : other.known) {
        auto it = known.find(id);
        if (it == known.end() || e.seen > it->second.seen) known[id] = e;
    }
}

const NeighborInfo* Observation::neighbor(int id) const {
    for (const NeighborInfo& n : neighbors)
        if (n.id == id) return &n;
    return nullptr;
}

namespace {

int channel_index(int channel) {
    for (int k = 0; k < (int)kChannels.size(); ++k)
        if (kChannels[k] == channel) return k;
    return 0;
}

} // namespace

std::vector<Observation> perceive_all(World& world, std::vector<AgentMemory>& memories,
                                      const LearningConfig& cfg) {
    const WorldConfig& wc = world.config();
    const RadioConfig& radio = wc.radio;
    int n = world.swarm_size();
    std::vector<Observation> out(n);

    for (int i = 0; i < n; ++i) {
        Observation& o = out[i];
        const AgentBody& self = world.agents()[i];
        o.pos = self.pos;
        o.sourcePos = world.source_pos();
        o.sinkPos = world.sink_pos();
        o.hasPacket = self.packet >= 0;
        o.dThreshold = cfg.distanceThreshold;
        o.netRange = comm_range(radio);
        o.dSink = self.pos.dist(world.sink_pos());
        o.dSource = self.pos.dist(world.source_pos());

        for (int k = 0; k < 3; ++k) {
            double mw = dbm_to_mw(radio.noiseFloorDbm);
            for (const Jammer& j : world.jammers())
                if (j.jammedChannel == kChannels[k])
                    mw += dbm_to_mw(j.powerDbm -
                                    path_loss(radio, j.pos, self.pos, world.walls(), world.rng()));
            o.channelNoiseDbm[k] = mw_to_dbm(mw);
        }
        o.interferenceDbm = o.channelNoiseDbm[channel_index(self.channel)];

        // beacons go out on the first channel; whoever decodes one gains a neighbor
        double beaconNoiseMw = dbm_to_mw(o.channelNoiseDbm[0]);
        auto hear = [&](int id, const Vec2& pos, bool isAgent, bool hasPacket) {
            double rx = radio.txPowerDbm - path_loss(radio, pos, self.pos, world.walls(), world.rng());
            double snir = rx - mw_to_dbm(beaconNoiseMw);
            if (snir >= radio.snirThresholdDb)
                o.neighbors.push_back({id, pos, isAgent, hasPacket, self.pos.dist(pos)});
        };
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            hear(j, world.agents()[j].pos, true, world.agents()[j].packet >= 0);
        }
        hear(world.source_id(), world.source_pos(), false, world.packets_at_source() > 0);
        hear(world.sink_id(), world.sink_pos(), false, false);
    }

    // memory: record what was just seen, and swap notes on a fixed cadence
    for (int i = 0; i < n; ++i)
        for (const NeighborInfo& nb : out[i].neighbors)
            memories[i].remember(nb.id, nb.pos, nb.isAgent, world.now());
    if (world.now() > 0 && world.now() % cfg.knowledgeSharePeriod == 0) {
        std::vector<AgentMemory> snapshot = memories;
        for (int i = 0; i < n; ++i)
            for (const NeighborInfo& nb : out[i].neighbors)
                if (nb.isAgent) memories[i].merge(snapshot[nb.id]);
    }

    for (int i = 0; i < n; ++i) {
        Observation& o = out[i];
        const Vec2 pos = o.pos;

        for (const NeighborInfo& nb : o.neighbors) {
            if (o.closestNeighborId < 0 || nb.dist < o.dClosest) {
                o.closestNeighborId = nb.id;
                o.dClosest = nb.dist;
            }
            if (!nb.isAgent) {
                if (nb.id == world.source_id()) { o.sourceInRange = true; o.sourceId = nb.id; }
                if (nb.id == world.sink_id()) { o.sinkInRange = true; o.sinkId = nb.id; }
            }
        }
        auto directional = [&](const Vec2& goal, int& outId, double& outDist) {
            Vec2 want = goal - pos;
            if (want.norm() < 1e-9) return;
            double bestCos = 0.0;
            for (const NeighborInfo& nb : o.neighbors) {
                Vec2 d = nb.pos - pos;
                if (d.norm() < 1e-9) continue;
                double c = d.dot(want) / (d.norm() * want.norm());
                if (c > bestCos + 1e-12) {
                    bestCos = c;
                    outId = nb.id;
                    outDist = nb.dist;
                }
            }
        };
        directional(o.sourcePos, o.sourceNeighborId, o.dSourceNeighbor);
        directional(o.sinkPos, o.sinkNeighborId, o.dSinkNeighbor);

        double bestAgent = -1.0;
        for (const auto& [id, e] : memories[i].known) {
            if (!e.isAgent || id == i) continue;
            double d = pos.dist(e.pos);
            if (bestAgent < 0 || d < bestAgent) {
                bestAgent = d;
                o.closestKnownAgent = e.pos;
            }
        }

        double bestObs = -1.0;
        for (const Wall& w : world.walls()) {
            Vec2 p = closest_point_on_segment(pos, w.a, w.b);
            double d = pos.dist(p);
            if (d <= wc.obstacleSenseRange && (bestObs < 0 || d < bestObs)) {
                bestObs = d;
                o.nearestObstacle = p;
            }
        }
    }
    return out;
}

bool condition_holds(const Condition& c, const Observation& obs, const RadioConfig& radio) {
    switch (c.kind) {
        case Condition::Kind::And:
            return condition_holds(*c.left, obs, radio) && condition_holds(*c.right, obs, radio);
        case Condition::Kind::NoiseBelow: {
            double noise = obs.interferenceDbm;
            if (c.channel) {
                int k = channel_index(*c.channel);
                noise = obs.channelNoiseDbm[k];
            }
            return noise <= radio.noiseTriggerDbm;
        }
        case Condition::Kind::HasPacket: return obs.hasPacket;
        case Condition::Kind::NoPacket: return !obs.hasPacket;
        case Condition::Kind::NetworkNodeNear:
            return obs.sourceInRange || obs.sinkInRange;
        case Condition::Kind::NoNetworkNodeNear:
            return !(obs.sourceInRange || obs.sinkInRange);
        case Condition::Kind::Compare: {
            double lhs;
            switch (c.metric) {
                case DistanceMetric::SourceNeighbor:
                    if (obs.dSourceNeighbor < 0) return false;
                    lhs = obs.dSourceNeighbor;
                    break;
                case DistanceMetric::SinkNeighbor:
                    if (obs.dSinkNeighbor < 0) return false;
                    lhs = obs.dSinkNeighbor;
                    break;
                case DistanceMetric::ClosestNeighbor:
                    if (obs.dClosest < 0) return false;
                    lhs = obs.dClosest;
                    break;
                case DistanceMetric::Sink: lhs = obs.dSink; break;
                case DistanceMetric::Source: lhs = obs.dSource; break;
                default: return false;
            }
            double rhs;
            switch (c.ref) {
                case DistanceRef::SourceNeighbor:
                    if (obs.dSourceNeighbor < 0) return false;
                    rhs = obs.dSourceNeighbor;
                    break;
                case DistanceRef::SinkNeighbor:
                    if (obs.dSinkNeighbor < 0) return false;
                    rhs = obs.dSinkNeighbor;
                    break;
                case DistanceRef::ClosestNeighbor:
                    if (obs.dClosest < 0) return false;
                    rhs = obs.dClosest;
                    break;
                case DistanceRef::Threshold: rhs = obs.dThreshold; break;
                case DistanceRef::NetRange: rhs = obs.netRange; break;
                case DistanceRef::ChannelNoise: rhs = obs.interferenceDbm; break;
                default: return false;
            }
            switch (c.op) {
                case CompareOp::Less: return lhs < rhs;
                case CompareOp::Greater: return lhs > rhs;
                case CompareOp::Equal: return std::fabs(lhs - rhs) <= 1e-9;
            }
            return false;
        }
    }
    return false;
}

std::vector<int> shortlist(const RuleSet& rules, const Observation& obs, const RadioConfig& radio) {
    std::vector<int> out;
    for (int i = 0; i < (int)rules.size(); ++i)
        if (condition_holds(*rules[i].condition, obs, radio)) out.push_back(i);
    return out;
}

int grasp_select(const RuleSet& rules, std::span<const int> indices, double alphaGrasp, Rng& rng) {
    double qMax = rules[indices[0]].q, qMin = qMax;
    for (int idx : indices) {
        qMax = std::max(qMax, rules[idx].q);
        qMin = std::min(qMin, rules[idx].q);
    }
    double cut = qMax - alphaGrasp * (qMax - qMin);
    std::vector<int> candidates;
    for (int idx : indices)
        if (rules[idx].q >= cut - 1e-12) candidates.push_back(idx);
    return candidates[rng.uniform_int(0, (int)candidates.size() - 1)];
}

ResolvedCommand resolve_action(const Action& a, const Observation& obs) {
    ResolvedCommand cmd;
    cmd.channel = a.channel;
    cmd.powerFrac = a.powerFrac;
    if (a.kind == Action::Kind::Move) {
        cmd.kind = a.direction == MoveDirection::Orbit ? ResolvedCommand::Kind::Orbit
                                                       : ResolvedCommand::Kind::Move;
        std::optional<Vec2> target;
        switch (a.moveTarget) {
            case MoveTarget::SourceNeighbor:
                if (const NeighborInfo* nb = obs.neighbor(obs.sourceNeighborId)) target = nb->pos;
                break;
            case MoveTarget::SinkNeighbor:
                if (const NeighborInfo* nb = obs.neighbor(obs.sinkNeighborId)) target = nb->pos;
                break;
            case MoveTarget::ClosestNeighbor:
                if (const NeighborInfo* nb = obs.neighbor(obs.closestNeighborId)) target = nb->pos;
                break;
            case MoveTarget::Source: target = obs.sourcePos; break;
            case MoveTarget::Sink: target = obs.sinkPos; break;
            case MoveTarget::ClosestKnownAgent: target = obs.closestKnownAgent; break;
            case MoveTarget::Obstacle: target = obs.nearestObstacle; break;
        }
        if (target) {
            if (a.direction == MoveDirection::Orbit) {
                cmd.orbitCenter = *target;
                cmd.orbitValid = true;
            } else {
                Vec2 d = *target - obs.pos;
                if (d.norm() > 1e-9)
                    cmd.dir = a.direction == MoveDirection::Toward ? d.unit() : d.unit() * -1.0;
            }
        }
        return cmd;
    }
    if (a.kind == Action::Kind::Collect) {
        cmd.kind = ResolvedCommand::Kind::Collect;
        cmd.receiver = obs.sourceInRange ? obs.sourceId : -1;
        return cmd;
    }
    cmd.kind = ResolvedCommand::Kind::Send;
    switch (a.sendTarget) {
        case CommTarget::SourceNeighbor: cmd.receiver = obs.sourceNeighborId; break;
        case CommTarget::SinkNeighbor: cmd.receiver = obs.sinkNeighborId; break;
        case CommTarget::ClosestNeighbor: cmd.receiver = obs.closestNeighborId; break;
        case CommTarget::Source: cmd.receiver = obs.sourceInRange ? obs.sourceId : -1; break;
        case CommTarget::Sink: cmd.receiver = obs.sinkInRange ? obs.sinkId : -1; break;
    }
    return cmd;
}

double signed_log10(double x) {
    if (x > 0) return std::log10(x + 1.0);
    if (x < 0) return -std::log10(-x + 1.0);
    return 0.0;
}

double compute_reward(const RewardInputs& in, const LearningConfig& cfg) {
    double rho = signed_log10(in.anyPacketEvent ? in.packetDelta : 0.0);
    if (!in.anyPacketEvent) rho += in.sourceDelta;
    return rho - (in.isComm ? cfg.costComm : cfg.costMove);
}

void error_update(RuleSet& rules, std::span<const int> matched, double reward, double alphaQ) {
    for (int idx : matched) {
        Rule& r = rules[idx];
        r.error = r.error * (1.0 - alphaQ) + alphaQ * std::fabs(reward - r.q);
    }
}

void q_update(RuleSet& rules, std::span<const int> matched, double reward, double maxNext,
              double alphaQ, double betaQ) {
    for (int idx : matched) {
        Rule& r = rules[idx];
        r.q = r.q * (1.0 - alphaQ) + alphaQ * (reward + betaQ * maxNext);
    }
}

void strength_update(RuleSet& rules, const std::deque<std::vector<int>>& matchedHistory,
                     double reward, double lambda, int bpMax) {
    double delta = signed_log10(reward);
    if (delta == 0.0) return;
    double w = 1.0;
    int depth = std::min((int)matchedHistory.size() - 1, bpMax);
    for (int t = 0; t <= depth; ++t, w *= lambda)
        for (int idx : matchedHistory[t]) rules[idx].strength += w * delta;
}

void finalize_strength(RuleSet& rules) {
    for (Rule& r : rules)
        if (r.uses > 0) r.strength /= (double)r.uses;
}

} // namespace slcs2
