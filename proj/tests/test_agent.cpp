#include <doctest.h>

#include <cmath>
#include <set>

#include "slcs2/policy.hpp"

using namespace slcs2;

namespace {

WorldConfig quiet_config() {
    WorldConfig cfg;
    cfg.radio.shadowingSigmaDb = 0.0;
    return cfg;
}

Observation quiet_obs() {
    Observation o;
    o.interferenceDbm = -96.0;
    o.channelNoiseDbm = {-96.0, -96.0, -96.0};
    o.netRange = 158.0;
    return o;
}

Rule cond_rule(std::vector<uint32_t> cond, std::vector<uint32_t> act,
               const GrammarConfig& cfg = GrammarConfig{}) {
    return make_rule(Genome{std::move(cond)}, Genome{std::move(act)}, cfg);
}

} // namespace

TEST_CASE("isolated agent perceives an empty neighborhood") {
    WorldConfig cfg = quiet_config();
    cfg.swarmSize = 1;
    World w(cfg, 4);
    w.agent(0).pos = {400.0, 200.0};  // 300 m from both endpoints
    std::vector<AgentMemory> mems(1);
    LearningConfig learn;
    auto obs = perceive_all(w, mems, learn);
    CHECK(obs[0].neighbors.empty());
    CHECK(obs[0].dSourceNeighbor < 0);
    CHECK(obs[0].dSinkNeighbor < 0);
    CHECK(obs[0].dClosest < 0);
    CHECK(!obs[0].sourceInRange);
    CHECK(obs[0].interferenceDbm == doctest::Approx(-96.0));
}

TEST_CASE("close neighbor lands in N with its true distance") {
    WorldConfig cfg = quiet_config();
    cfg.swarmSize = 2;
    World w(cfg, 4);
    w.agent(0).pos = {400.0, 200.0};
    w.agent(1).pos = {410.0, 200.0};
    std::vector<AgentMemory> mems(2);
    LearningConfig learn;
    auto obs = perceive_all(w, mems, learn);
    REQUIRE(obs[0].neighbors.size() == 1);
    CHECK(obs[0].neighbors[0].id == 1);
    CHECK(obs[0].dClosest == doctest::Approx(10.0));
    CHECK(obs[0].closestNeighborId == 1);
    // and the directional picks agree: the only candidate points sinkward
    CHECK(obs[0].sinkNeighborId == 1);
    CHECK(obs[0].sourceNeighborId == -1);  // cosine toward source is negative
}

TEST_CASE("a jammed channel blanks the neighborhood") {
    WorldConfig cfg = quiet_config();
    cfg.type = EnvType::OpenJammed;
    cfg.swarmSize = 2;
    World w(cfg, 8);
    REQUIRE(w.jammers().size() == 1);
    w.agent(0).pos = {300.0, 200.0};
    w.agent(1).pos = {440.0, 200.0};  // 140 m: inside range, thin margin
    w.jammer(0).pos = {450.0, 200.0};

    LearningConfig learn;
    {
        w.jammer(0).jammedChannel = 0;
        std::vector<AgentMemory> mems(2);
        auto obs = perceive_all(w, mems, learn);
        CHECK(obs[1].neighbor(0) != nullptr);
        CHECK(obs[1].interferenceDbm == doctest::Approx(-96.0));
    }
    {
        w.jammer(0).jammedChannel = 1;
        std::vector<AgentMemory> mems(2);
        auto obs = perceive_all(w, mems, learn);
        CHECK(obs[1].neighbors.empty());
        CHECK(obs[1].interferenceDbm > -60.0);  // the jam is 10 m away
    }
}

TEST_CASE("memory spreads along the swarm on the sharing cadence") {
    WorldConfig cfg = quiet_config();
    cfg.swarmSize = 3;
    World w(cfg, 6);
    w.agent(0).pos = {200.0, 200.0};
    w.agent(1).pos = {300.0, 200.0};
    w.agent(2).pos = {400.0, 200.0};  // 200 m from agent 0: never heard directly
    std::vector<AgentMemory> mems(3);
    LearningConfig learn;

    for (int t = 0; t < 25; ++t) {
        auto obs = perceive_all(w, mems, learn);
        if (w.now() < 24) CHECK(mems[0].known.count(2) == 0);
        w.advance_time();
    }
    // t=25: exchange happens during perception
    auto obs = perceive_all(w, mems, learn);
    CHECK(mems[0].known.count(2) == 1);
    REQUIRE(obs[0].closestKnownAgent.has_value());
    CHECK(obs[0].closestKnownAgent->x == doctest::Approx(300.0));
}

TEST_CASE("condition evaluation over crafted observations") {
    GrammarConfig gc;
    RadioConfig radio;
    Observation o = quiet_obs();

    Condition quietCond = decode_condition(Genome{{1}}, gc);  // NI <= P_rs
    CHECK(condition_holds(quietCond, o, radio));
    o.interferenceDbm = -80.0;
    CHECK(!condition_holds(quietCond, o, radio));

    Condition hasP = decode_condition(Genome{{2, 0}}, gc);
    Condition noP = decode_condition(Genome{{2, 1}}, gc);
    CHECK(!condition_holds(hasP, o, radio));
    CHECK(condition_holds(noP, o, radio));
    o.hasPacket = true;
    CHECK(condition_holds(hasP, o, radio));
    CHECK(!condition_holds(noP, o, radio));

    Condition nodeNear = decode_condition(Genome{{3, 0}}, gc);
    Condition nodeFar = decode_condition(Genome{{3, 1}}, gc);
    CHECK(!condition_holds(nodeNear, o, radio));
    CHECK(condition_holds(nodeFar, o, radio));
    o.sinkInRange = true;
    CHECK(condition_holds(nodeNear, o, radio));
    CHECK(!condition_holds(nodeFar, o, radio));

    Condition dSoLess = decode_condition(Genome{{4, 0, 0, 3}}, gc);  // d_so < d_th
    CHECK(to_string(dSoLess) == "d_so < d_th");
    CHECK(!condition_holds(dSoLess, o, radio));  // undefined -> false
    o.dSourceNeighbor = 30.0;
    CHECK(condition_holds(dSoLess, o, radio));
    o.dSourceNeighbor = 70.0;
    CHECK(!condition_holds(dSoLess, o, radio));

    // conjunction: quiet channel AND holding a packet
    Condition both = decode_condition(Genome{{0, 1, 2, 0}}, gc);
    o.interferenceDbm = -96.0;
    CHECK(condition_holds(both, o, radio));
    o.hasPacket = false;
    CHECK(!condition_holds(both, o, radio));
}

TEST_CASE("shortlist keeps exactly the rules whose conditions hold") {
    GrammarConfig gc;
    RadioConfig radio;
    RuleSet rules;
    rules.push_back(cond_rule({2, 0}, {0, 0, 4}));     // has packet
    rules.push_back(cond_rule({2, 1}, {0, 0, 4}));     // no packet
    rules.push_back(cond_rule({4, 2, 0, 3}, {1, 0})); // d_c < d_th
    rules.push_back(cond_rule({1}, {1, 0}));           // quiet channel

    Observation o = quiet_obs();
    o.hasPacket = false;  // d_c undefined
    std::vector<int> sl = shortlist(rules, o, radio);
    CHECK(sl == std::vector<int>{1, 3});

    o.hasPacket = true;
    o.dClosest = 12.0;
    sl = shortlist(rules, o, radio);
    CHECK(sl == std::vector<int>{0, 2, 3});

    o.interferenceDbm = -50.0;
    o.dClosest = -1.0;
    o.hasPacket = false;
    sl = shortlist(rules, o, radio);
    CHECK(sl == std::vector<int>{1});
}

TEST_CASE("rules touching undefined observables never pass the shortlist") {
    GrammarConfig gc;
    RadioConfig radio;
    Observation o = quiet_obs();  // no neighbors at all
    Rng rng(99);
    auto tokens = [](const std::string& s) {
        std::set<std::string> out;
        std::string cur;
        for (char ch : s) {
            if (std::isalnum((unsigned char)ch) || ch == '_') cur += ch;
            else if (!cur.empty()) { out.insert(cur); cur.clear(); }
        }
        if (!cur.empty()) out.insert(cur);
        return out;
    };
    int passed = 0;
    for (int k = 0; k < 3000; ++k) {
        RuleSet one;
        one.push_back(random_rule(rng, gc));
        std::vector<int> sl = shortlist(one, o, radio);
        if (sl.empty()) continue;
        ++passed;
        std::set<std::string> tk = tokens(to_string(*one[0].condition));
        CHECK(!tk.count("d_so"));
        CHECK(!tk.count("d_si"));
        CHECK(!tk.count("d_c"));
    }
    CHECK(passed > 100);  // the check must actually exercise passing rules
}

TEST_CASE("restricted candidate selection follows the cutoff law") {
    RuleSet rules;
    for (double q : {4.0, 2.0, 0.0}) {
        Rule r = cond_rule({1}, {1, 0});
        r.q = q;
        rules.push_back(std::move(r));
    }
    std::vector<int> idx{0, 1, 2};
    Rng rng(5);

    SUBCASE("alpha=0.5 keeps the top two, evenly") {
        int hits[3] = {0, 0, 0};
        const int draws = 100000;
        for (int k = 0; k < draws; ++k) ++hits[grasp_select(rules, idx, 0.5, rng)];
        CHECK(hits[2] == 0);
        // 3 sigma around one half
        CHECK(std::abs(hits[0] / (double)draws - 0.5) < 3.0 * std::sqrt(0.25 / draws));
        CHECK(std::abs(hits[1] / (double)draws - 0.5) < 3.0 * std::sqrt(0.25 / draws));
    }
    SUBCASE("alpha=0 exploits the argmax only") {
        for (int k = 0; k < 2000; ++k) CHECK(grasp_select(rules, idx, 0.0, rng) == 0);
    }
    SUBCASE("alpha=1 explores uniformly") {
        int hits[3] = {0, 0, 0};
        const int draws = 90000;
        for (int k = 0; k < draws; ++k) ++hits[grasp_select(rules, idx, 1.0, rng)];
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(hits[i] / (double)draws - 1.0 / 3.0) <
                  3.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / draws));
    }
}

TEST_CASE("symbolic targets ground against the observation") {
    Observation o = quiet_obs();
    o.pos = {0.0, 0.0};
    o.sinkPos = {100.0, 0.0};
    o.sourcePos = {-50.0, 0.0};

    Action toward;
    toward.kind = Action::Kind::Move;
    toward.direction = MoveDirection::Toward;
    toward.moveTarget = MoveTarget::Sink;
    ResolvedCommand c = resolve_action(toward, o);
    CHECK(c.kind == ResolvedCommand::Kind::Move);
    CHECK(c.dir.x == doctest::Approx(1.0));
    CHECK(c.dir.y == doctest::Approx(0.0));

    toward.direction = MoveDirection::Away;
    c = resolve_action(toward, o);
    CHECK(c.dir.x == doctest::Approx(-1.0));

    toward.direction = MoveDirection::Orbit;
    c = resolve_action(toward, o);
    CHECK(c.kind == ResolvedCommand::Kind::Orbit);
    CHECK(c.orbitValid);
    CHECK(c.orbitCenter.x == doctest::Approx(100.0));

    // unresolved neighbor target: an executed move with zero displacement
    Action toSo;
    toSo.kind = Action::Kind::Move;
    toSo.moveTarget = MoveTarget::SourceNeighbor;
    c = resolve_action(toSo, o);
    CHECK(c.kind == ResolvedCommand::Kind::Move);
    CHECK(c.dir.norm() == doctest::Approx(0.0));

    Action sendSi;
    sendSi.kind = Action::Kind::Send;
    sendSi.sendTarget = CommTarget::SinkNeighbor;
    sendSi.channel = 6;
    c = resolve_action(sendSi, o);
    CHECK(c.kind == ResolvedCommand::Kind::Send);
    CHECK(c.receiver == -1);
    CHECK(c.channel == 6);

    o.neighbors.push_back({7, {10.0, 0.0}, true, false, 10.0});
    o.sinkNeighborId = 7;
    c = resolve_action(sendSi, o);
    CHECK(c.receiver == 7);

    Action collect;
    collect.kind = Action::Kind::Collect;
    c = resolve_action(collect, o);
    CHECK(c.kind == ResolvedCommand::Kind::Collect);
    CHECK(c.receiver == -1);
    o.sourceInRange = true;
    o.sourceId = 10;
    c = resolve_action(collect, o);
    CHECK(c.receiver == 10);
}

TEST_CASE("reward arithmetic: packet progress, homing term, action cost") {
    LearningConfig cfg;
    cfg.costMove = 0.1;
    cfg.costComm = 0.1;

    RewardInputs held;
    held.packetDelta = 10.0;
    held.anyPacketEvent = true;
    CHECK(compute_reward(held, cfg) == doctest::Approx(std::log10(11.0) - 0.1));

    RewardInputs nothing;
    CHECK(compute_reward(nothing, cfg) == doctest::Approx(-0.1));

    RewardInputs homing;
    homing.sourceDelta = 5.0;
    CHECK(compute_reward(homing, cfg) == doctest::Approx(4.9));

    RewardInputs backward;
    backward.packetDelta = -10.0;
    backward.anyPacketEvent = true;
    CHECK(compute_reward(backward, cfg) == doctest::Approx(-std::log10(11.0) - 0.1));

    // packet events mute the homing term
    RewardInputs both = held;
    both.sourceDelta = 5.0;
    CHECK(compute_reward(both, cfg) == doctest::Approx(std::log10(11.0) - 0.1));
}

TEST_CASE("q update follows the one-step lookahead blend") {
    RuleSet rules;
    rules.push_back(cond_rule({1}, {1, 0}));
    std::vector<int> all{0};

    q_update(rules, all, 1.0, 0.0, 0.5, 0.9);
    CHECK(rules[0].q == doctest::Approx(0.5));

    rules[0].q = 3.0;
    q_update(rules, all, 1.0, 0.0, 0.0, 0.9);  // alpha 0: identity
    CHECK(rules[0].q == doctest::Approx(3.0));

    rules[0].q = 1.0;
    q_update(rules, all, 1.0, 1.0, 0.5, 0.9);
    CHECK(rules[0].q == doctest::Approx(1.45));
}

TEST_CASE("prediction error blends toward absolute surprise") {
    RuleSet rules;
    rules.push_back(cond_rule({1}, {1, 0}));
    std::vector<int> all{0};

    error_update(rules, all, 1.0, 0.5);  // q=0: |1-0| blended at half
    CHECK(rules[0].error == doctest::Approx(0.5));

    rules[0].q = 1.0;
    for (int k = 0; k < 40; ++k) error_update(rules, all, 1.0, 0.5);
    CHECK(rules[0].error == doctest::Approx(0.0).epsilon(1e-9));

    double before = rules[0].error;
    error_update(rules, all, 123.0, 0.0);
    CHECK(rules[0].error == doctest::Approx(before));
}

TEST_CASE("strength credit decays geometrically into the past") {
    RuleSet rules;
    rules.push_back(cond_rule({1}, {1, 0}));
    rules.push_back(cond_rule({2, 1}, {1, 0}));

    std::deque<std::vector<int>> hist;
    hist.push_front({0});  // t-1
    hist.push_front({0});  // t
    strength_update(rules, hist, 9.0, 0.5, 5);
    CHECK(rules[0].strength == doctest::Approx(1.5));  // log10(10) * (1 + 0.5)
    CHECK(rules[1].strength == doctest::Approx(0.0));

    strength_update(rules, hist, 0.0, 0.5, 5);
    CHECK(rules[0].strength == doctest::Approx(1.5));  // zero reward adds nothing

    // horizon: depth 2 is beyond bpMax=1
    rules[0].strength = 0.0;
    hist.clear();
    hist.push_front({0});
    hist.push_front({});
    hist.push_front({});
    strength_update(rules, hist, 9.0, 0.5, 1);
    CHECK(rules[0].strength == doctest::Approx(0.0));
}

TEST_CASE("per-operation strength settles to credit per use") {
    RuleSet rules;
    rules.push_back(cond_rule({1}, {1, 0}));
    rules.push_back(cond_rule({2, 1}, {1, 0}));
    rules.push_back(cond_rule({2, 0}, {1, 0}));
    rules[0].strength = 3.0;
    rules[0].uses = 3;
    rules[1].strength = 5.0;
    rules[1].uses = 0;  // never fired: untouched
    rules[2].strength = -2.0;
    rules[2].uses = 4;
    finalize_strength(rules);
    CHECK(rules[0].strength == doctest::Approx(1.0));
    CHECK(rules[1].strength == doctest::Approx(5.0));
    CHECK(rules[2].strength == doctest::Approx(-0.5));
}

TEST_CASE("two-armed bandit: q settles on the discounted fixed point") {
    RuleSet rules;
    rules.push_back(cond_rule({1}, {0, 0, 4}));  // arm 0
    rules.push_back(cond_rule({1}, {0, 1, 4}));  // arm 1, different action
    const double rho[2] = {1.0, 0.5};
    Rng rng(3);
    for (int step = 0; step < 5000; ++step) {
        int arm = grasp_select(rules, std::vector<int>{0, 1}, 1.0, rng);
        double maxNext = std::max(rules[0].q, rules[1].q);
        std::vector<int> matched{arm};
        q_update(rules, matched, rho[arm], maxNext, 0.1, 0.9);
    }
    CHECK(rules[0].q == doctest::Approx(10.0).epsilon(0.01));
    CHECK(rules[1].q == doctest::Approx(9.5).epsilon(0.01));
}

TEST_CASE("windowed credit equals eligibility traces when the window covers the trace") {
    const int T = 10, R = 5;
    Rng rng(17);
    std::vector<std::vector<int>> matched(T);
    std::vector<double> rewards(T);
    for (int t = 0; t < T; ++t) {
        for (int r = 0; r < R; ++r)
            if (rng.uniform01() < 0.4) matched[t].push_back(r);
        rewards[t] = rng.uniform(-2.0, 2.0);
    }
    const double lambda = 0.5;

    RuleSet rules;
    for (int r = 0; r < R; ++r) rules.push_back(cond_rule({1}, {1, 0}));
    std::deque<std::vector<int>> hist;
    for (int t = 0; t < T; ++t) {
        hist.push_front(matched[t]);
        strength_update(rules, hist, rewards[t], lambda, T);
    }

    // classical accumulating traces on the same episode
    std::vector<double> trace(R, 0.0), zeta(R, 0.0);
    for (int t = 0; t < T; ++t) {
        for (int r = 0; r < R; ++r) trace[r] *= lambda;
        for (int r : matched[t]) trace[r] += 1.0;
        double delta = signed_log10(rewards[t]);
        for (int r = 0; r < R; ++r) zeta[r] += trace[r] * delta;
    }
    for (int r = 0; r < R; ++r)
        CHECK(rules[r].strength == doctest::Approx(zeta[r]).epsilon(1e-12));
}

TEST_CASE("rule policy applies the delayed lookahead update") {
    WorldConfig wc = quiet_config();
    wc.swarmSize = 1;
    World w(wc, 1);

    LearningConfig cfg;
    cfg.alphaQ = 0.5;
    cfg.betaQ = 0.9;
    cfg.lambda = 0.5;
    cfg.bpMax = 5;

    // two always-true rules sharing one action: both always matched
    RuleSet rs;
    rs.push_back(cond_rule({1}, {0, 0, 4}));
    rs.push_back(cond_rule({1}, {0, 0, 4}));
    RuleSwarmPolicy policy({rs}, cfg);
    policy.begin(w);

    Observation o = quiet_obs();
    Rng rng(2);

    PolicyDecision d1 = policy.choose(0, o, rng);
    REQUIRE(d1.action.has_value());
    policy.feedback(0, 1.0);

    policy.choose(0, o, rng);  // flushes (rho=1, maxNext=0): q 0 -> 0.5
    CHECK(policy.rule_sets()[0][0].q == doctest::Approx(0.5));
    CHECK(policy.rule_sets()[0][0].error == doctest::Approx(0.5));
    policy.feedback(0, -0.5);

    policy.choose(0, o, rng);  // flushes (rho=-0.5, maxNext=0.5)
    CHECK(policy.rule_sets()[0][0].q == doctest::Approx(0.225));
    CHECK(policy.rule_sets()[0][0].error == doctest::Approx(0.75));

    policy.finish();  // no pending reward left; only the per-use division runs
    const Rule& r0 = policy.rule_sets()[0][0];
    CHECK(r0.q == doctest::Approx(0.225));
    CHECK(r0.uses == 3);
    double zeta = (std::log10(2.0) - 1.5 * std::log10(1.5)) / 3.0;
    CHECK(r0.strength == doctest::Approx(zeta));

    // an empty shortlist idles and freezes learning state
    Observation loud = quiet_obs();
    loud.interferenceDbm = -50.0;
    PolicyDecision d4 = policy.choose(0, loud, rng);
    CHECK(!d4.action.has_value());
    CHECK(policy.rule_sets()[0][0].q == doctest::Approx(0.225));
}
