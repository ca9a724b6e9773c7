#include "slcs2/operation.hpp"

#include <json.hpp>

namespace slcs2 {

namespace {

using nlohmann::json;

json init_record(const World& w) {
    const WorldConfig& cfg = w.config();
    json walls = json::array();
    for (const Wall& wall : w.walls())
        walls.push_back({wall.a.x, wall.a.y, wall.b.x, wall.b.y});
    json jams = json::array();
    for (const Jammer& j : w.jammers()) jams.push_back({j.pos.x, j.pos.y});
    return json{{"init",
                 {{"w", cfg.width()},
                  {"h", cfg.height()},
                  {"agents", w.swarm_size()},
                  {"packets", cfg.packets},
                  {"T", cfg.timeLimit},
                  {"source", {w.source_pos().x, w.source_pos().y}},
                  {"sink", {w.sink_pos().x, w.sink_pos().y}},
                  {"walls", walls},
                  {"jammers", jams}}}};
}

json step_record(const World& w, const StepReport& rep, long t) {
    json pos = json::array(), hold = json::array();
    for (const AgentBody& a : w.agents()) {
        pos.push_back({a.pos.x, a.pos.y});
        hold.push_back(a.packet);
    }
    json tx = json::array();
    for (const TransferRecord& tr : rep.transfers)
        tx.push_back({{"from", tr.from}, {"to", tr.to}, {"p", tr.packet}, {"ch", tr.channel}});
    json jam = json::array();
    for (int ch : rep.jammedChannels) jam.push_back(ch);
    return json{{"t", t}, {"pos", pos}, {"hold", hold}, {"tx", tx}, {"jam", jam}};
}

} // namespace

OperationResult run_operation(World& world, Policy& policy, const LearningConfig& learn,
                              const EventLogger* log) {
    const WorldConfig& cfg = world.config();
    int n = world.swarm_size();
    std::vector<AgentMemory> memories(n);
    policy.begin(world);
    if (log && *log) (*log)(init_record(world).dump());

    std::vector<ResolvedCommand> cmds(n);
    std::vector<double> prevPacketDist(cfg.packets, 0.0);
    std::vector<double> prevSourceDist(n, 0.0);
    std::vector<int> heldAtStart(n, -1);

    while (world.now() < cfg.timeLimit && world.delivered_count() < cfg.packets) {
        std::vector<Observation> obs = perceive_all(world, memories, learn);

        for (int p = 0; p < cfg.packets; ++p) {
            const PacketState& ps = world.packets()[p];
            if (ps.phase == PacketPhase::Held)
                prevPacketDist[p] = world.agents()[ps.holder].pos.dist(world.sink_pos());
            else
                prevPacketDist[p] = world.source_pos().dist(world.sink_pos());
        }
        for (int i = 0; i < n; ++i) {
            prevSourceDist[i] = world.agents()[i].pos.dist(world.source_pos());
            heldAtStart[i] = world.agents()[i].packet;
        }

        for (int i = 0; i < n; ++i) {
            PolicyDecision d = policy.choose(i, obs[i], world.rng());
            if (d.action) {
                cmds[i] = resolve_action(*d.action, obs[i]);
            } else if (d.moveDir && d.moveDir->norm() > 1e-9) {
                cmds[i] = ResolvedCommand{};
                cmds[i].kind = ResolvedCommand::Kind::Move;
                cmds[i].dir = d.moveDir->unit();
            } else {
                cmds[i] = ResolvedCommand{};
            }
        }

        StepReport rep = world.resolve(cmds);

        for (int i = 0; i < n; ++i) {
            if (!rep.commanded[i]) continue;
            RewardInputs in;
            in.isComm = cmds[i].kind == ResolvedCommand::Kind::Send ||
                        cmds[i].kind == ResolvedCommand::Kind::Collect;
            const Vec2& now = world.agents()[i].pos;
            bool transferredAway = false;
            for (const TransferRecord& tr : rep.transfers) {
                if (tr.from == i) {
                    in.anyPacketEvent = true;
                    transferredAway = true;
                    in.packetDelta +=
                        prevPacketDist[tr.packet] - world.node_pos(tr.to).dist(world.sink_pos());
                }
                if (tr.to == i) {
                    in.anyPacketEvent = true;
                    in.packetDelta += prevPacketDist[tr.packet] - now.dist(world.sink_pos());
                }
            }
            if (heldAtStart[i] >= 0 && !transferredAway) {
                in.anyPacketEvent = true;
                in.packetDelta += prevPacketDist[heldAtStart[i]] - now.dist(world.sink_pos());
            }
            if (!in.anyPacketEvent)
                in.sourceDelta = prevSourceDist[i] - now.dist(world.source_pos());
            policy.feedback(i, compute_reward(in, learn));
        }

        if (log && *log) (*log)(step_record(world, rep, world.now()).dump());
        world.advance_time();
    }
    policy.finish();

    OperationResult res;
    res.delivered = world.delivered_count();
    res.packets = cfg.packets;
    res.stepsUsed = world.now();
    res.timeLimit = cfg.timeLimit;
    res.contributions = world.contribution_counts();
    return res;
}

} // namespace slcs2
