#pragma once

#include <vector>

namespace slcs2 {

struct MannWhitney {
    double u = 0;              // U statistic of the first sample
    double pTwoSided = 1;
    double pFirstGreater = 1;  // one-sided: first sample stochastically larger
    bool exact = false;
};

// Exact rank-permutation p when the smaller sample has <= 8 points (and the
// pool is not absurdly large); normal approximation with tie correction
// otherwise. Throws on an empty sample.
MannWhitney mann_whitney(const std::vector<double>& a, const std::vector<double>& b);
MannWhitney mann_whitney_exact(const std::vector<double>& a, const std::vector<double>& b);
MannWhitney mann_whitney_approx(const std::vector<double>& a, const std::vector<double>& b);

struct SampleSummary {
    int n = 0;
    double mean = 0;
    double ciLo = 0, ciHi = 0;  // Student-t interval, degenerate when n < 2
};
SampleSummary summarize_samples(const std::vector<double>& xs, double confidence = 0.90);

struct PairVerdict {
    int winner = -1;           // sample with the higher mean, -1 on an exact tie
    bool significant = false;  // higher mean + disjoint CIs + p below alpha
    double pTwoSided = 1;
    SampleSummary first, second;
};
PairVerdict compare_samples(const std::vector<double>& a, const std::vector<double>& b,
                            double alpha = 0.1, double confidence = 0.90);

} // namespace slcs2
