#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "slcs2/archive.hpp"

using namespace slcs2;

namespace {

// distinct rules built from enumerated action genomes, stable across runs
std::vector<Rule> rule_pool(const GrammarConfig& gc, int k) {
    std::vector<Rule> pool;
    std::unordered_set<std::string> seen;
    for (uint32_t d = 0; d < 3 && (int)pool.size() < k; ++d)
        for (uint32_t t = 0; t < 7 && (int)pool.size() < k; ++t) {
            Rule r = make_rule(Genome{{2, 0}}, Genome{{0, d, t}}, gc);
            if (seen.insert(rule_text(r)).second) pool.push_back(r);
        }
    REQUIRE((int)pool.size() == k);
    return pool;
}

RuleSet pick(const std::vector<Rule>& pool, std::initializer_list<int> idx) {
    RuleSet rs;
    for (int i : idx) rs.push_back(pool[i]);
    return rs;
}

Solution make_sol(double f, std::vector<RuleSet> sets) {
    Solution s;
    s.ruleSets = std::move(sets);
    s.fitness = f;
    s.evaluated = true;
    return s;
}

struct OracleKeys {
    std::vector<std::vector<std::string>> lists;
    std::vector<std::unordered_set<std::string>> sets;
};

OracleKeys keys_of(const Solution& s) {
    OracleKeys k;
    k.lists.resize(s.ruleSets.size());
    k.sets.resize(s.ruleSets.size());
    for (size_t n = 0; n < s.ruleSets.size(); ++n)
        for (const Rule& r : s.ruleSets[n]) {
            k.lists[n].push_back(rule_text(r));
            k.sets[n].insert(k.lists[n].back());
        }
    return k;
}

double oracle_db(const OracleKeys& a, const OracleKeys& b) {
    if (a.lists.empty()) return 0.0;
    double acc = 0.0;
    for (size_t n = 0; n < a.lists.size(); ++n) {
        size_t total = a.lists[n].size() + b.lists[n].size();
        if (total == 0) continue;
        size_t miss = 0;
        for (const std::string& t : a.lists[n])
            if (!b.sets[n].count(t)) ++miss;
        for (const std::string& t : b.lists[n])
            if (!a.sets[n].count(t)) ++miss;
        acc += (double)miss / (double)total;
    }
    return acc / (double)a.lists.size();
}

} // namespace

TEST_CASE("domination effect weighs fitness gap against novelty") {
    GrammarConfig gc;
    auto pool = rule_pool(gc, 4);
    Solution x = make_sol(0.5, {pick(pool, {0, 1})});
    Solution y = make_sol(0.2, {pick(pool, {2, 3})});
    CHECK(domination_effect(x, y, 0.2) == doctest::Approx(0.1));
    CHECK(domination_effect(x, y, 0.2) > 0.0);
    CHECK(domination_effect(x, x, 0.7) == 0.0);
    CHECK(domination_effect(x, y, 1e9) < 0.0);
}

TEST_CASE("behavior distance counts unmatched rules per agent slot") {
    GrammarConfig gc;
    auto pool = rule_pool(gc, 6);

    SUBCASE("identical solutions measure zero") {
        Solution a = make_sol(0.1, {pick(pool, {0, 1}), pick(pool, {2, 3})});
        CHECK(behavior_distance(a, a) == 0.0);
    }
    SUBCASE("stats and genome digits are invisible") {
        Rule viaWrap = make_rule(Genome{{7, 0}}, Genome{{0, 0, 0}}, gc);  // 7 wraps onto option 2
        Rule direct = make_rule(Genome{{2, 0}}, Genome{{0, 0, 0}}, gc);
        REQUIRE(rule_text(viaWrap) == rule_text(direct));
        viaWrap.q = 9.0;
        viaWrap.strength = -3.0;
        viaWrap.uses = 77;
        Solution a = make_sol(0.4, {{viaWrap}});
        Solution b = make_sol(-0.4, {{direct}});
        CHECK(behavior_distance(a, b) == 0.0);
    }
    SUBCASE("disjoint sets at every index measure one") {
        Solution a = make_sol(0.1, {pick(pool, {0, 1}), pick(pool, {2})});
        Solution b = make_sol(0.2, {pick(pool, {3, 4}), pick(pool, {5})});
        CHECK(behavior_distance(a, b) == 1.0);
    }
    SUBCASE("half-overlap pair") {
        Solution a = make_sol(0.0, {pick(pool, {0, 1})});
        Solution b = make_sol(0.0, {pick(pool, {0, 2})});
        CHECK(behavior_distance(a, b) == doctest::Approx(0.5));
    }
    SUBCASE("alignment is strictly by agent index") {
        Solution a = make_sol(0.0, {pick(pool, {0, 1}), pick(pool, {2, 3})});
        Solution b = make_sol(0.0, {pick(pool, {2, 3}), pick(pool, {0, 1})});
        CHECK(behavior_distance(a, b) == 1.0);
    }
    SUBCASE("swarm size mismatch is rejected") {
        Solution a = make_sol(0.0, {pick(pool, {0})});
        Solution b = make_sol(0.0, {pick(pool, {0}), pick(pool, {1})});
        CHECK_THROWS_AS((void)behavior_distance(a, b), std::invalid_argument);
    }
}

TEST_CASE("behavior distance symmetry fuzz") {
    GrammarConfig gc;
    Rng rng(77);
    auto pool = rule_pool(gc, 12);
    for (int trial = 0; trial < 500; ++trial) {
        auto draw = [&] {
            std::vector<RuleSet> sets(2);
            for (RuleSet& rs : sets) {
                int count = rng.uniform_int(0, 6);
                for (int j = 0; j < count; ++j) rs.push_back(pool[rng.uniform_int(0, 11)]);
            }
            return make_sol(rng.uniform(-1.0, 1.0), std::move(sets));
        };
        Solution a = draw(), b = draw();
        double ab = behavior_distance(a, b);
        CHECK(ab == behavior_distance(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(behavior_distance(a, a) == 0.0);
    }
}

TEST_CASE("archive intake, eviction and the size-adaptive weight") {
    GrammarConfig gc;
    auto pool = rule_pool(gc, 10);

    SUBCASE("first solution always lands") {
        NoveltyArchive arch(0.5);
        CHECK(arch.update(make_sol(-0.9, {pick(pool, {0})})));
        CHECK(arch.size() == 1);
        CHECK(arch.member(0).fitness == doctest::Approx(-0.9));
        CHECK(arch.member(0).insertionIndex == 0);
        CHECK(arch.omega() == doctest::Approx(0.5));
    }
    SUBCASE("a clone with worse fitness bounces off") {
        NoveltyArchive arch(0.5);
        std::vector<RuleSet> sets{pick(pool, {0, 1})};
        REQUIRE(arch.update(make_sol(0.9, sets)));
        CHECK(!arch.update(make_sol(0.1, sets)));  // e(y,x) = 0.8 > 0
        CHECK(arch.size() == 1);
        CHECK(arch.member(0).fitness == doctest::Approx(0.9));
    }
    SUBCASE("newcomer evicts exactly the members it dominates") {
        NoveltyArchive arch(0.5);
        REQUIRE(arch.update(make_sol(0.50, {pick(pool, {0, 1})})));
        REQUIRE(arch.update(make_sol(0.52, {pick(pool, {2, 3})})));
        REQUIRE(arch.update(make_sol(0.54, {pick(pool, {4, 5})})));
        REQUIRE(arch.size() == 3);
        CHECK(arch.omega() == doctest::Approx(0.5 / 3));
        // 0.70 beats 0.50 and 0.52 by more than omega*1, but not 0.54
        CHECK(arch.update(make_sol(0.70, {pick(pool, {6, 7})})));
        REQUIRE(arch.size() == 2);
        CHECK(arch.member(0).fitness == doctest::Approx(0.54));
        CHECK(arch.member(1).fitness == doctest::Approx(0.70));
        CHECK(arch.omega() == doctest::Approx(0.25));
    }
    SUBCASE("weight growth after insertion can sweep the newcomer back out") {
        NoveltyArchive arch(0.5);
        REQUIRE(arch.update(make_sol(0.60, {pick(pool, {0, 1})})));
        // admitted under omega=0.5, but at size 2 omega=0.25 < gap 0.30
        CHECK(!arch.update(make_sol(0.30, {pick(pool, {2, 3})})));
        CHECK(arch.size() == 1);
        CHECK(arch.member(0).fitness == doctest::Approx(0.60));
    }
    SUBCASE("a strictly better solution replaces everything when gaps beat the weight") {
        NoveltyArchive arch(0.5);
        REQUIRE(arch.update(make_sol(0.50, {pick(pool, {0, 1})})));
        REQUIRE(arch.update(make_sol(0.52, {pick(pool, {2, 3})})));
        REQUIRE(arch.update(make_sol(0.54, {pick(pool, {4, 5})})));
        CHECK(arch.update(make_sol(0.75, {pick(pool, {6, 7})})));  // gaps > 1/6
        CHECK(arch.size() == 1);
        CHECK(arch.member(0).fitness == doctest::Approx(0.75));

        NoveltyArchive coexist(0.5);
        REQUIRE(coexist.update(make_sol(0.50, {pick(pool, {0, 1})})));
        REQUIRE(coexist.update(make_sol(0.52, {pick(pool, {2, 3})})));
        REQUIRE(coexist.update(make_sol(0.54, {pick(pool, {4, 5})})));
        CHECK(coexist.update(make_sol(0.56, {pick(pool, {6, 7})})));  // gaps < 1/6
        CHECK(coexist.size() == 4);
    }
}

TEST_CASE("selection rotates through least-evolved members, oldest first") {
    GrammarConfig gc;
    auto pool = rule_pool(gc, 6);
    NoveltyArchive arch(0.5);
    REQUIRE(arch.update(make_sol(0.50, {pick(pool, {0, 1})})));
    REQUIRE(arch.update(make_sol(0.52, {pick(pool, {2, 3})})));
    REQUIRE(arch.update(make_sol(0.54, {pick(pool, {4, 5})})));
    REQUIRE(arch.size() == 3);

    Solution& first = arch.select_next();  // all phi=0, oldest wins
    CHECK(first.insertionIndex == 0);
    first.phi = 3;
    Solution& second = arch.select_next();  // 0 vs 0, older of the rest
    CHECK(second.insertionIndex == 1);
    second.phi = 1;
    Solution& third = arch.select_next();
    CHECK(third.insertionIndex == 2);
    third.phi = 2;
    // phi = {3,1,2} -> the phi=1 member
    CHECK(arch.select_next().insertionIndex == 1);
}

TEST_CASE("zero weight degenerates to a greedy fitness filter") {
    GrammarConfig gc;
    auto pool = rule_pool(gc, 10);
    const std::vector<double> fits{0.1, 0.3, 0.3, 0.2, -0.4};
    std::vector<Solution> sols;
    for (int i = 0; i < 5; ++i)
        sols.push_back(make_sol(fits[i], {pick(pool, {2 * i, 2 * i + 1})}));

    std::vector<int> order{0, 1, 2, 3, 4};
    int checked = 0;
    do {
        NoveltyArchive arch(0.0);
        for (int i : order) arch.update(sols[i]);
        std::vector<double> got;
        for (size_t m = 0; m < arch.size(); ++m) got.push_back(arch.member(m).fitness);
        std::sort(got.begin(), got.end());
        REQUIRE(got == std::vector<double>{0.3, 0.3});
        ++checked;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(checked == 120);
}

TEST_CASE("streamed updates never leave a dominated pair behind") {
    GrammarConfig gc;
    Rng rng(4242);
    auto pool = rule_pool(gc, 14);
    NoveltyArchive arch(0.5);
    std::unordered_map<long, OracleKeys> keyCache;
    std::unordered_map<long, double> fitByIns;
    int admitted = 0, bounced = 0;
    size_t peak = 0;

    for (int step = 0; step < 10000; ++step) {
        std::vector<RuleSet> sets(2);
        for (RuleSet& rs : sets)
            for (int j = 0; j < 4; ++j) rs.push_back(pool[rng.uniform_int(0, 13)]);
        Solution x = make_sol(rng.uniform(-1.0, 1.0), std::move(sets));
        arch.update(x) ? ++admitted : ++bounced;
        peak = std::max(peak, arch.size());

        const double w = arch.omega();
        for (size_t i = 0; i < arch.size(); ++i) {
            const Solution& s = arch.member(i);
            if (!keyCache.count(s.insertionIndex)) {
                keyCache.emplace(s.insertionIndex, keys_of(s));
                fitByIns[s.insertionIndex] = s.fitness;
            }
        }
        double maxE = -1e300;
        for (size_t i = 0; i < arch.size(); ++i)
            for (size_t j = 0; j < arch.size(); ++j) {
                if (i == j) continue;
                long a = arch.member(i).insertionIndex;
                long b = arch.member(j).insertionIndex;
                double e = fitByIns[a] - fitByIns[b] - w * oracle_db(keyCache[a], keyCache[b]);
                maxE = std::max(maxE, e);
            }
        REQUIRE(maxE <= 0.0);
    }
    CHECK(admitted > 50);
    CHECK(bounced > 50);
    CHECK(peak >= 2);
}

TEST_CASE("snapshot line carries membership, weight and nearest-neighbor spread") {
    GrammarConfig gc;
    auto pool = rule_pool(gc, 8);
    NoveltyArchive arch(0.5);
    REQUIRE(arch.update(make_sol(0.50, {pick(pool, {0, 1})})));

    nlohmann::json solo = nlohmann::json::parse(arch.snapshot_line(0));
    CHECK(solo["generation"] == 0);
    CHECK(solo["memberCount"] == 1);
    CHECK(solo["omega"].get<double>() == doctest::Approx(0.5));
    REQUIRE(solo["members"].size() == 1);
    CHECK(solo["members"][0]["nearestDb"].is_null());

    REQUIRE(arch.update(make_sol(0.52, {pick(pool, {1, 2})})));  // half overlap
    nlohmann::json j = nlohmann::json::parse(arch.snapshot_line(7));
    CHECK(j["generation"] == 7);
    CHECK(j["memberCount"] == 2);
    CHECK(j["omega"].get<double>() == doctest::Approx(0.25));
    REQUIRE(j["members"].size() == 2);
    CHECK(j["members"][0]["fitness"].get<double>() == doctest::Approx(0.50));
    CHECK(j["members"][0]["phi"] == 0);
    CHECK(j["members"][0]["nearestDb"].get<double>() == doctest::Approx(0.5));
    CHECK(j["members"][1]["nearestDb"].get<double>() == doctest::Approx(0.5));
}
