#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slcs2/rng.hpp"

namespace slcs2 {

// Grammar variants: the base grammar, plus extensions that let rules pick the
// radio channel, the transmit power level, or both.
enum class GrammarVariant { Standard, Channel, Power, Both };

inline bool variant_has_channel(GrammarVariant v) {
    return v == GrammarVariant::Channel || v == GrammarVariant::Both;
}
inline bool variant_has_power(GrammarVariant v) {
    return v == GrammarVariant::Power || v == GrammarVariant::Both;
}

struct Genome {
    std::vector<uint32_t> digits;
    bool valid() const { return !digits.empty(); }
};

struct GrammarConfig {
    GrammarVariant variant = GrammarVariant::Standard;
    uint32_t digitMax = 255;       // random digits are drawn from [0, digitMax]
    std::size_t genomeLength = 16; // digits per genome in random_rule
    int maxConditionDepth = 3;     // conjunction nesting cap
    int maxWraps = 4;              // genome read passes before recursion is cut off
};

// first operand of a distance comparison
enum class DistanceMetric { SourceNeighbor, SinkNeighbor, ClosestNeighbor, Sink, Source };
// second operand
enum class DistanceRef { SourceNeighbor, SinkNeighbor, ClosestNeighbor, Threshold, NetRange, ChannelNoise };
enum class CompareOp { Less, Greater, Equal };

struct Condition {
    enum class Kind {
        And,              // both children must hold
        NoiseBelow,       // noise level <= trigger threshold
        HasPacket,
        NoPacket,
        NetworkNodeNear,  // a network node is in the neighbourhood
        NoNetworkNodeNear,
        Compare           // distance comparison
    };

    Kind kind = Kind::NoiseBelow;
    std::unique_ptr<Condition> left, right; // And
    std::optional<int> channel;             // NoiseBelow under channel grammars
    DistanceMetric metric = DistanceMetric::SourceNeighbor;
    CompareOp op = CompareOp::Less;
    DistanceRef ref = DistanceRef::SourceNeighbor;

    Condition() = default;
    Condition(Condition&&) = default;
    Condition& operator=(Condition&&) = default;
    std::unique_ptr<Condition> clone() const;
};

enum class MoveDirection { Toward, Away, Orbit };
enum class MoveTarget { SourceNeighbor, SinkNeighbor, ClosestNeighbor, Source, Sink, ClosestKnownAgent, Obstacle };
enum class CommTarget { SourceNeighbor, SinkNeighbor, ClosestNeighbor, Source, Sink };

struct Action {
    enum class Kind { Move, Collect, Send };
    Kind kind = Kind::Move;
    MoveDirection direction = MoveDirection::Toward; // Move
    MoveTarget moveTarget = MoveTarget::SourceNeighbor;
    CommTarget sendTarget = CommTarget::SourceNeighbor; // Send
    int channel = 1;         // one of {1, 6, 11}; fixed to 1 outside channel grammars
    double powerFrac = 1.0;  // 0.5 or 1.0; fixed to 1.0 outside power grammars

    bool is_comm() const { return kind != Kind::Move; }
};

bool operator==(const Action& a, const Action& b);
bool structurally_equal(const Condition& a, const Condition& b);

enum class RuleOrigin { Random, Kept, Imported };

struct Rule {
    std::shared_ptr<const Condition> condition;
    Action action;
    Genome conditionGenome, actionGenome;
    // learning statistics, reset at the start of every operation
    double q = 0.0;        // expected discounted reward of firing this rule
    double strength = 0.0; // back-propagated reward credit
    double error = 0.0;    // running |reward - q| estimate
    uint32_t uses = 0;     // times selected / action-matched
    RuleOrigin origin = RuleOrigin::Random;

    void reset_stats() { q = 0.0; strength = 0.0; error = 0.0; uses = 0; }
};

using RuleSet = std::vector<Rule>;

// Decoding consumes one genome digit per production that offers more than one
// option (digit % optionCount); singleton productions are free. Reads wrap to
// the genome start; once maxWraps passes have been consumed, or a conjunction
// sits at maxConditionDepth, the recursive conjunction option is dropped from
// the option list so the decode always terminates.
Condition decode_condition(const Genome& g, const GrammarConfig& cfg);
Action decode_action(const Genome& g, const GrammarConfig& cfg);

Rule make_rule(Genome conditionGenome, Genome actionGenome, const GrammarConfig& cfg);
Rule random_rule(Rng& rng, const GrammarConfig& cfg);

std::string to_string(const Condition& c);
std::string to_string(const Action& a);
std::string rule_text(const Rule& r); // "COND => ACTION", canonical; doubles as the structural key

const char* to_string(GrammarVariant v);
std::optional<GrammarVariant> parse_grammar_variant(const std::string& s);

inline constexpr std::array<int, 3> kChannels{1, 6, 11};
inline constexpr std::array<double, 2> kPowerLevels{0.5, 1.0};

} // namespace slcs2
