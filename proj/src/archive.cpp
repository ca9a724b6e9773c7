#include "slcs2/archive.hpp"

#include <algorithm>
#include <json.hpp>
#include <stdexcept>

namespace slcs2 {

namespace {

// (misses of A in B + misses of B in A) / (|A|+|B|); empty vs empty is 0
double set_mismatch(const std::vector<std::string>& textsA,
                    const std::unordered_set<std::string>& keysA,
                    const std::vector<std::string>& textsB,
                    const std::unordered_set<std::string>& keysB) {
    size_t total = textsA.size() + textsB.size();
    if (total == 0) return 0.0;
    size_t miss = 0;
    for (const std::string& t : textsA)
        if (!keysB.count(t)) ++miss;
    for (const std::string& t : textsB)
        if (!keysA.count(t)) ++miss;
    return (double)miss / (double)total;
}

} // namespace

double behavior_distance(const Solution& a, const Solution& b) {
    if (a.ruleSets.size() != b.ruleSets.size())
        throw std::invalid_argument("behavior_distance: swarm sizes differ");
    if (a.ruleSets.empty()) return 0.0;
    double acc = 0.0;
    for (size_t n = 0; n < a.ruleSets.size(); ++n) {
        std::vector<std::string> ta, tb;
        std::unordered_set<std::string> ka, kb;
        for (const Rule& r : a.ruleSets[n]) {
            ta.push_back(rule_text(r));
            ka.insert(ta.back());
        }
        for (const Rule& r : b.ruleSets[n]) {
            tb.push_back(rule_text(r));
            kb.insert(tb.back());
        }
        acc += set_mismatch(ta, ka, tb, kb);
    }
    return acc / (double)a.ruleSets.size();
}

double domination_effect(const Solution& x, const Solution& y, double omega) {
    return x.fitness - y.fitness - omega * behavior_distance(x, y);
}

double NoveltyArchive::omega() const {
    return omega0_ / (double)std::max<size_t>(1, entries_.size());
}

NoveltyArchive::Entry NoveltyArchive::make_entry(Solution&& s) {
    Entry e;
    e.sol = std::move(s);
    e.uid = nextUid_++;
    e.texts.resize(e.sol.ruleSets.size());
    e.keys.resize(e.sol.ruleSets.size());
    for (size_t n = 0; n < e.sol.ruleSets.size(); ++n) {
        for (const Rule& r : e.sol.ruleSets[n]) {
            e.texts[n].push_back(rule_text(r));
            e.keys[n].insert(e.texts[n].back());
        }
    }
    return e;
}

double NoveltyArchive::pair_distance(const Entry& a, const Entry& b) const {
    if (a.texts.size() != b.texts.size())
        throw std::invalid_argument("archive: swarm sizes differ");
    uint64_t lo = (uint64_t)std::min(a.uid, b.uid);
    uint64_t hi = (uint64_t)std::max(a.uid, b.uid);
    uint64_t key = (lo << 32) | hi;
    auto it = distCache_.find(key);
    if (it != distCache_.end()) return it->second;
    double acc = 0.0;
    if (!a.texts.empty()) {
        for (size_t n = 0; n < a.texts.size(); ++n)
            acc += set_mismatch(a.texts[n], a.keys[n], b.texts[n], b.keys[n]);
        acc /= (double)a.texts.size();
    }
    distCache_.emplace(key, acc);
    return acc;
}

bool NoveltyArchive::update(Solution x) {
    Entry ex = make_entry(std::move(x));
    const double w = omega();  // weight at intake, before membership changes

    for (const Entry& y : entries_) {
        double e = y.sol.fitness - ex.sol.fitness - w * pair_distance(y, ex);
        if (e > 0.0) return false;  // rejected, collection untouched
    }

    ex.sol.insertionIndex = nextInsertion_++;
    const long xuid = ex.uid;
    const double xf = ex.sol.fitness;
    entries_.push_back(std::move(ex));

    // the newcomer evicts whoever it dominates, still under the intake weight
    std::vector<long> doomed;
    for (const Entry& y : entries_) {
        if (y.uid == xuid) continue;
        if (xf - y.sol.fitness - w * pair_distance(entries_.back(), y) > 0.0)
            doomed.push_back(y.uid);
    }
    if (!doomed.empty())
        entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                      [&](const Entry& e) {
                                          return std::find(doomed.begin(), doomed.end(),
                                                           e.uid) != doomed.end();
                                      }),
                       entries_.end());

    sweep();
    for (const Entry& e : entries_)
        if (e.uid == xuid) return true;
    return false;
}

// Membership changes move the weight, which can expose new dominations.
// Re-scan in insertion order, dropping one loser at a time, until stable.
void NoveltyArchive::sweep() {
    bool removed = true;
    while (removed) {
        removed = false;
        const double w = omega();
        for (size_t i = 0; i < entries_.size() && !removed; ++i) {
            for (size_t j = 0; j < entries_.size(); ++j) {
                if (i == j) continue;
                double e = entries_[i].sol.fitness - entries_[j].sol.fitness -
                           w * pair_distance(entries_[i], entries_[j]);
                if (e > 0.0) {
                    entries_.erase(entries_.begin() + (long)j);
                    removed = true;
                    break;
                }
            }
        }
    }
}

Solution& NoveltyArchive::select_next() {
    if (entries_.empty()) throw std::logic_error("select_next: empty archive");
    size_t best = 0;
    for (size_t i = 1; i < entries_.size(); ++i) {
        const Solution& s = entries_[i].sol;
        const Solution& b = entries_[best].sol;
        if (s.phi < b.phi || (s.phi == b.phi && s.insertionIndex < b.insertionIndex))
            best = i;
    }
    return entries_[best].sol;
}

std::string NoveltyArchive::snapshot_line(long generation) const {
    nlohmann::json j;
    j["generation"] = generation;
    j["memberCount"] = entries_.size();
    j["omega"] = omega();
    nlohmann::json arr = nlohmann::json::array();
    for (size_t i = 0; i < entries_.size(); ++i) {
        nlohmann::json m;
        m["fitness"] = entries_[i].sol.fitness;
        m["phi"] = entries_[i].sol.phi;
        if (entries_.size() > 1) {
            double best = 2.0;
            for (size_t k = 0; k < entries_.size(); ++k)
                if (k != i) best = std::min(best, pair_distance(entries_[i], entries_[k]));
            m["nearestDb"] = best;
        } else {
            m["nearestDb"] = nullptr;
        }
        arr.push_back(std::move(m));
    }
    j["members"] = std::move(arr);
    return j.dump();
}

} // namespace slcs2
