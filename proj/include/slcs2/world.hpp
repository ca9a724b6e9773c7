#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slcs2/geometry.hpp"
#include "slcs2/radio.hpp"
#include "slcs2/rng.hpp"

namespace slcs2 {

enum class EnvType { Open, Urban, OpenJammed, UrbanJammed };
enum class RangeClass { Short, Long };

std::string to_string(EnvType t);
std::string to_string(RangeClass r);
EnvType parse_env_type(const std::string& s);
RangeClass parse_range_class(const std::string& s);

inline bool env_has_walls(EnvType t) { return t == EnvType::Urban || t == EnvType::UrbanJammed; }
inline bool env_has_jammer(EnvType t) { return t == EnvType::OpenJammed || t == EnvType::UrbanJammed; }

struct WorldConfig {
    EnvType type = EnvType::Open;
    RangeClass range = RangeClass::Short;
    double sourceSinkDistance = 600.0;  // 600 short, 1000 long
    double corridorHeight = 400.0;
    double edgeMargin = 100.0;          // space behind source and sink
    int swarmSize = 10;
    int packets = 20;
    long timeLimit = 20000;
    double agentSpeed = 1.0;
    double agentRadius = 0.5;
    double spawnRadius = 25.0;
    double obstacleSenseRange = 50.0;
    RadioConfig radio;

    double width() const { return sourceSinkDistance + 2.0 * edgeMargin; }
    double height() const { return corridorHeight; }
};

// picks the canonical distance for a range class
double default_distance(RangeClass r);
long default_time_limit(RangeClass r);

struct Jammer {
    Vec2 pos;
    double powerDbm = 20.0;
    double detectionRange = 0.0;  // computed from the radio model
    int jammedChannel = 0;        // 0 = idle this step
};

struct AgentBody {
    Vec2 pos;
    int packet = -1;   // held packet id, -1 when empty-handed
    int channel = 1;
};

enum class PacketPhase { AtSource, Held, Delivered };

struct PacketState {
    PacketPhase phase = PacketPhase::AtSource;
    int holder = -1;
    std::set<int> touchedBy;  // agents that carried it at least one step
};

// a fully grounded per-step command, all symbolic targets already resolved
struct ResolvedCommand {
    enum class Kind { Idle, Move, Orbit, Send, Collect };
    Kind kind = Kind::Idle;
    Vec2 dir{};            // Move: unit direction; zero vector means "hold position"
    Vec2 orbitCenter{};
    bool orbitValid = false;
    int receiver = -1;     // Send: destination node id; -1 when the target could not be resolved
    int channel = 1;
    double powerFrac = 1.0;
};

struct TransferRecord {
    int from = -1;   // node id (agents are 0..n-1, then source, then sink)
    int to = -1;
    int packet = -1;
    int channel = 1;
};

struct StepReport {
    std::vector<TransferRecord> transfers;
    std::vector<int> jammedChannels;       // one entry per jammer, 0 = idle
    std::vector<char> moved;               // per agent: attempted a move this step
    std::vector<char> commanded;           // per agent: any non-idle command
    std::vector<char> commFailed;          // send/collect that opened radio but no packet moved
};

class World {
public:
    World(const WorldConfig& cfg, uint64_t seed);

    const WorldConfig& config() const { return cfg_; }
    int swarm_size() const { return (int)agents_.size(); }
    int source_id() const { return (int)agents_.size(); }
    int sink_id() const { return (int)agents_.size() + 1; }
    Vec2 node_pos(int id) const;
    const Vec2& source_pos() const { return source_; }
    const Vec2& sink_pos() const { return sink_; }
    const std::vector<Wall>& walls() const { return walls_; }
    const std::vector<Jammer>& jammers() const { return jammers_; }
    // scenario setup / replay hooks
    Jammer& jammer(size_t i) { return jammers_[i]; }
    void set_walls(std::vector<Wall> walls) { walls_ = std::move(walls); }
    const std::vector<AgentBody>& agents() const { return agents_; }
    AgentBody& agent(int i) { return agents_[i]; }
    const std::vector<PacketState>& packets() const { return packets_; }
    int packets_at_source() const { return (int)sourceQueue_.size(); }
    int delivered_count() const { return delivered_; }
    long now() const { return t_; }
    void advance_time() { ++t_; }
    Rng& rng() { return rng_; }

    // phases 3..5 of one step: movement, jammer scan, communication
    StepReport resolve(const std::vector<ResolvedCommand>& cmds);

    // per-agent contribution counts over delivered packets
    std::vector<int> contribution_counts() const;

    // collision-aware single-agent displacement (exposed for tests)
    Vec2 move_with_collisions(const Vec2& from, const Vec2& disp) const;

    bool position_clear(const Vec2& p) const;

private:
    void jammer_step(const std::vector<struct Transmission>& txs, StepReport& rep);

    WorldConfig cfg_;
    Rng rng_;
    Vec2 source_, sink_;
    std::vector<Wall> walls_;
    std::vector<Jammer> jammers_;
    std::vector<AgentBody> agents_;
    std::vector<PacketState> packets_;
    std::vector<int> sourceQueue_;  // packet ids still at the source, back = next out
    int delivered_ = 0;
    long t_ = 0;
};

// axis-aligned rectangular buildings, up to six wall segments each, rejected
// when the footprint would swallow the source or sink
std::vector<Wall> generate_urban(const WorldConfig& cfg, Rng& rng, int* buildingCount = nullptr);

Vec2 place_jammer(const WorldConfig& cfg, std::span<const Wall> walls, const Vec2& source, const Vec2& sink, Rng& rng);

} // namespace slcs2
