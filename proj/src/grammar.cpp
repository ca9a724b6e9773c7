#include "slcs2/grammar.hpp"

#include <sstream>
#include <stdexcept>

namespace slcs2 {

namespace {

// Sequential digit reader with wrap-around. budget_spent() turns true once
// maxWraps full passes have been read; the condition decoder then stops
// offering the recursive conjunction option so the derivation bottoms out.
class Cursor {
public:
    Cursor(const Genome& g, int maxWraps)
        : digits_(g.digits), budget_(g.digits.size() * static_cast<std::size_t>(maxWraps)) {
        if (digits_.empty()) throw std::invalid_argument("decode: empty genome");
    }

    uint32_t next() {
        uint32_t d = digits_[reads_ % digits_.size()];
        ++reads_;
        return d;
    }

    uint32_t choose(uint32_t options) { return options <= 1 ? 0 : next() % options; }
    bool budget_spent() const { return reads_ >= budget_; }
    std::size_t reads() const { return reads_; }

private:
    const std::vector<uint32_t>& digits_;
    std::size_t budget_;
    std::size_t reads_ = 0;
};

int decode_channel(Cursor& c) { return kChannels[c.choose(3)]; }
double decode_power(Cursor& c) { return kPowerLevels[c.choose(2)]; }

Condition decode_condition_at(Cursor& c, int depth, const GrammarConfig& cfg) {
    Condition out;
    bool allowAnd = depth < cfg.maxConditionDepth && !c.budget_spent();
    uint32_t pick = c.choose(allowAnd ? 5u : 4u);
    if (!allowAnd) ++pick; // option list shifted past the conjunction

    switch (pick) {
    case 0:
        out.kind = Condition::Kind::And;
        out.left = std::make_unique<Condition>(decode_condition_at(c, depth + 1, cfg));
        out.right = std::make_unique<Condition>(decode_condition_at(c, depth + 1, cfg));
        break;
    case 1:
        out.kind = Condition::Kind::NoiseBelow;
        if (variant_has_channel(cfg.variant)) out.channel = decode_channel(c);
        break;
    case 2:
        out.kind = c.choose(2) == 0 ? Condition::Kind::HasPacket : Condition::Kind::NoPacket;
        break;
    case 3:
        out.kind = c.choose(2) == 0 ? Condition::Kind::NetworkNodeNear : Condition::Kind::NoNetworkNodeNear;
        break;
    default:
        out.kind = Condition::Kind::Compare;
        out.metric = static_cast<DistanceMetric>(c.choose(5));
        out.op = static_cast<CompareOp>(c.choose(3));
        out.ref = static_cast<DistanceRef>(c.choose(variant_has_channel(cfg.variant) || variant_has_power(cfg.variant) ? 6u : 5u));
        break;
    }
    return out;
}

Action decode_action_at(Cursor& c, const GrammarConfig& cfg) {
    Action a;
    if (c.choose(2) == 0) {
        a.kind = Action::Kind::Move;
        a.direction = static_cast<MoveDirection>(c.choose(3));
        a.moveTarget = static_cast<MoveTarget>(c.choose(7));
        return a;
    }
    if (c.choose(2) == 0) {
        a.kind = Action::Kind::Collect;
    } else {
        a.kind = Action::Kind::Send;
        a.sendTarget = static_cast<CommTarget>(c.choose(5));
    }
    if (variant_has_channel(cfg.variant)) a.channel = decode_channel(c);
    if (variant_has_power(cfg.variant)) a.powerFrac = decode_power(c);
    return a;
}

const char* metric_name(DistanceMetric m) {
    switch (m) {
    case DistanceMetric::SourceNeighbor: return "d_so";
    case DistanceMetric::SinkNeighbor: return "d_si";
    case DistanceMetric::ClosestNeighbor: return "d_c";
    case DistanceMetric::Sink: return "d_sink";
    case DistanceMetric::Source: return "d_source";
    }
    return "?";
}

const char* ref_name(DistanceRef r) {
    switch (r) {
    case DistanceRef::SourceNeighbor: return "d_so";
    case DistanceRef::SinkNeighbor: return "d_si";
    case DistanceRef::ClosestNeighbor: return "d_c";
    case DistanceRef::Threshold: return "d_th";
    case DistanceRef::NetRange: return "net";
    case DistanceRef::ChannelNoise: return "xi";
    }
    return "?";
}

const char* op_name(CompareOp o) {
    switch (o) {
    case CompareOp::Less: return "<";
    case CompareOp::Greater: return ">";
    case CompareOp::Equal: return "=";
    }
    return "?";
}

const char* move_target_name(MoveTarget t) {
    switch (t) {
    case MoveTarget::SourceNeighbor: return "so";
    case MoveTarget::SinkNeighbor: return "si";
    case MoveTarget::ClosestNeighbor: return "c";
    case MoveTarget::Source: return "source";
    case MoveTarget::Sink: return "sink";
    case MoveTarget::ClosestKnownAgent: return "v_close";
    case MoveTarget::Obstacle: return "o";
    }
    return "?";
}

const char* comm_target_name(CommTarget t) {
    switch (t) {
    case CommTarget::SourceNeighbor: return "so";
    case CommTarget::SinkNeighbor: return "si";
    case CommTarget::ClosestNeighbor: return "c";
    case CommTarget::Source: return "source";
    case CommTarget::Sink: return "sink";
    }
    return "?";
}

} // namespace

std::unique_ptr<Condition> Condition::clone() const {
    auto c = std::make_unique<Condition>();
    c->kind = kind;
    c->channel = channel;
    c->metric = metric;
    c->op = op;
    c->ref = ref;
    if (left) c->left = left->clone();
    if (right) c->right = right->clone();
    return c;
}

Condition decode_condition(const Genome& g, const GrammarConfig& cfg) {
    Cursor c(g, cfg.maxWraps);
    return decode_condition_at(c, 0, cfg);
}

Action decode_action(const Genome& g, const GrammarConfig& cfg) {
    Cursor c(g, cfg.maxWraps);
    return decode_action_at(c, cfg);
}

Rule make_rule(Genome conditionGenome, Genome actionGenome, const GrammarConfig& cfg) {
    Rule r;
    r.condition = std::shared_ptr<const Condition>(
        std::make_shared<Condition>(decode_condition(conditionGenome, cfg)));
    r.action = decode_action(actionGenome, cfg);
    r.conditionGenome = std::move(conditionGenome);
    r.actionGenome = std::move(actionGenome);
    return r;
}

Rule random_rule(Rng& rng, const GrammarConfig& cfg) {
    Genome cg, ag;
    cg.digits.reserve(cfg.genomeLength);
    ag.digits.reserve(cfg.genomeLength);
    for (std::size_t i = 0; i < cfg.genomeLength; ++i) cg.digits.push_back(rng.uniform_digit(cfg.digitMax));
    for (std::size_t i = 0; i < cfg.genomeLength; ++i) ag.digits.push_back(rng.uniform_digit(cfg.digitMax));
    Rule r = make_rule(std::move(cg), std::move(ag), cfg);
    r.origin = RuleOrigin::Random;
    return r;
}

bool operator==(const Action& a, const Action& b) {
    if (a.kind != b.kind || a.channel != b.channel || a.powerFrac != b.powerFrac) return false;
    switch (a.kind) {
    case Action::Kind::Move: return a.direction == b.direction && a.moveTarget == b.moveTarget;
    case Action::Kind::Send: return a.sendTarget == b.sendTarget;
    case Action::Kind::Collect: return true;
    }
    return false;
}

bool structurally_equal(const Condition& a, const Condition& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Condition::Kind::And:
        return structurally_equal(*a.left, *b.left) && structurally_equal(*a.right, *b.right);
    case Condition::Kind::NoiseBelow:
        return a.channel == b.channel;
    case Condition::Kind::Compare:
        return a.metric == b.metric && a.op == b.op && a.ref == b.ref;
    default:
        return true;
    }
}

std::string to_string(const Condition& c) {
    switch (c.kind) {
    case Condition::Kind::And:
        return "(" + to_string(*c.left) + " & " + to_string(*c.right) + ")";
    case Condition::Kind::NoiseBelow:
        if (c.channel) return "noise(ch " + std::to_string(*c.channel) + ") <= P_rs";
        return "NI <= P_rs";
    case Condition::Kind::HasPacket: return "has packet";
    case Condition::Kind::NoPacket: return "no packet";
    case Condition::Kind::NetworkNodeNear: return "network node near";
    case Condition::Kind::NoNetworkNodeNear: return "no network node near";
    case Condition::Kind::Compare: {
        std::string s = metric_name(c.metric);
        s += " ";
        s += op_name(c.op);
        s += " ";
        s += ref_name(c.ref);
        return s;
    }
    }
    return "?";
}

std::string to_string(const Action& a) {
    std::string s;
    switch (a.kind) {
    case Action::Kind::Move:
        s = "move ";
        s += a.direction == MoveDirection::Toward ? "toward"
             : a.direction == MoveDirection::Away ? "away"
                                                  : "orbit";
        s += " ";
        s += move_target_name(a.moveTarget);
        break;
    case Action::Kind::Collect:
        s = "collect from source";
        break;
    case Action::Kind::Send:
        s = "send to ";
        s += comm_target_name(a.sendTarget);
        break;
    }
    if (a.channel != 1) s += " ch " + std::to_string(a.channel);
    if (a.powerFrac != 1.0) s += " pw 50%";
    return s;
}

std::string rule_text(const Rule& r) { return to_string(*r.condition) + " => " + to_string(r.action); }

const char* to_string(GrammarVariant v) {
    switch (v) {
    case GrammarVariant::Standard: return "standard";
    case GrammarVariant::Channel: return "channel";
    case GrammarVariant::Power: return "power";
    case GrammarVariant::Both: return "both";
    }
    return "?";
}

std::optional<GrammarVariant> parse_grammar_variant(const std::string& s) {
    if (s == "standard") return GrammarVariant::Standard;
    if (s == "channel") return GrammarVariant::Channel;
    if (s == "power") return GrammarVariant::Power;
    if (s == "both") return GrammarVariant::Both;
    return std::nullopt;
}

} // namespace slcs2
