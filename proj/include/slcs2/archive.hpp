#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "slcs2/evolution.hpp"

namespace slcs2 {

// Mean per-agent rule-set mismatch, in [0,1]. Rule identity is the decoded
// condition/action pair; learning stats and genome digits don't count.
// Rule-sets are compared index-aligned only. Throws on swarm-size mismatch.
double behavior_distance(const Solution& a, const Solution& b);

// e(x,y) = f(x) - f(y) - omega * db(x,y). x dominates y iff e > 0 (strict).
double domination_effect(const Solution& x, const Solution& y, double omega);

// Pareto collection over (fitness, behavioural novelty). The novelty weight
// shrinks as the collection grows, so a crowded archive culls harder.
class NoveltyArchive {
public:
    explicit NoveltyArchive(double omega0 = 0.5) : omega0_(omega0) {}

    double omega0() const { return omega0_; }
    double omega() const;

    size_t size() const { return entries_.size(); }
    const Solution& member(size_t i) const { return entries_[i].sol; }

    // Admits x unless some member dominates it, then evicts members x
    // dominates. Returns whether x now sits in the archive.
    bool update(Solution x);

    // Member with the fewest evolution attempts; oldest insertion wins ties.
    // The reference stays valid until the next update().
    Solution& select_next();

    // One JSON object (no newline) describing the current membership.
    std::string snapshot_line(long generation) const;

private:
    struct Entry {
        Solution sol;
        long uid = 0;
        std::vector<std::vector<std::string>> texts;        // per agent, per rule
        std::vector<std::unordered_set<std::string>> keys;  // per agent
    };

    Entry make_entry(Solution&& s);
    double pair_distance(const Entry& a, const Entry& b) const;
    void sweep();

    double omega0_ = 0.5;
    std::vector<Entry> entries_;  // kept in insertion order
    long nextUid_ = 0;
    long nextInsertion_ = 0;
    mutable std::unordered_map<uint64_t, double> distCache_;
};

} // namespace slcs2
