#pragma once

#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "slcs2/grammar.hpp"
#include "slcs2/world.hpp"

namespace slcs2 {

struct LearningConfig {
    double alphaGrasp = 0.3;
    double alphaQ = 0.2;
    double betaQ = 0.9;
    double lambda = 0.5;
    int bpMax = 5;
    double costMove = 0.05;
    double costComm = 0.1;
    double distanceThreshold = 50.0;  // d_th
    int knowledgeSharePeriod = 25;
};

struct NeighborInfo {
    int id = -1;
    Vec2 pos;
    bool isAgent = false;
    bool hasPacket = false;
    double dist = 0.0;
};

// long-term memory of nodes seen directly or learned from neighbors
struct AgentMemory {
    struct Entry {
        Vec2 pos;
        bool isAgent = false;
        long seen = -1;
    };
    std::map<int, Entry> known;

    void remember(int id, const Vec2& pos, bool isAgent, long t);
    void merge(const AgentMemory& other);
};

struct Observation {
    double interferenceDbm = -1e9;          // NI on the agent's current channel
    std::array<double, 3> channelNoiseDbm;  // per channel in kChannels order
    bool hasPacket = false;
    std::vector<NeighborInfo> neighbors;    // N, sorted by id

    int sourceNeighborId = -1;   // so
    int sinkNeighborId = -1;     // si
    int closestNeighborId = -1;  // c
    double dSourceNeighbor = -1, dSinkNeighbor = -1, dClosest = -1;  // <0 = undefined
    double dSink = 0, dSource = 0;
    double dThreshold = 50;
    double netRange = 0;
    int sourceId = -1, sinkId = -1;  // node ids, valid only when the flag below is set
    bool sourceInRange = false, sinkInRange = false;

    std::optional<Vec2> closestKnownAgent;  // from K, excluding self
    std::optional<Vec2> nearestObstacle;    // closest obstacle point within sensor reach

    Vec2 pos;       // own position (targets resolve relative to it)
    Vec2 sourcePos, sinkPos;

    const NeighborInfo* neighbor(int id) const;
};

// phase 1 for the whole swarm: beacons, noise sampling, memory maintenance
std::vector<Observation> perceive_all(World& world, std::vector<AgentMemory>& memories,
                                      const LearningConfig& cfg);

bool condition_holds(const Condition& c, const Observation& obs, const RadioConfig& radio);

std::vector<int> shortlist(const RuleSet& rules, const Observation& obs, const RadioConfig& radio);

// restricted-candidate pick over the shortlist; returns the chosen rule index
int grasp_select(const RuleSet& rules, std::span<const int> indices, double alphaGrasp, Rng& rng);

// grounds symbolic targets against the observation
ResolvedCommand resolve_action(const Action& a, const Observation& obs);

struct RewardInputs {
    double packetDelta = 0.0;   // summed sink-distance improvement of held/sent/received packets
    bool anyPacketEvent = false;
    double sourceDelta = 0.0;   // own movement toward the source
    bool isComm = false;        // action cost class
};

double signed_log10(double x);
double compute_reward(const RewardInputs& in, const LearningConfig& cfg);

void error_update(RuleSet& rules, std::span<const int> matched, double reward, double alphaQ);
void q_update(RuleSet& rules, std::span<const int> matched, double reward, double maxNext,
              double alphaQ, double betaQ);

// matchedHistory front = newest step; index t' uses weight lambda^t'
void strength_update(RuleSet& rules, const std::deque<std::vector<int>>& matchedHistory,
                     double reward, double lambda, int bpMax);
void finalize_strength(RuleSet& rules);

} // namespace slcs2
