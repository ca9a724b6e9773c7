#include "slcs2/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slcs2 {

namespace {

struct Pooled {
    std::vector<long> doubled;  // doubled midranks, pool order: a then b
    std::vector<long> tieRuns;
    long n = 0, m = 0;
    long N() const { return n + m; }

    double rank_sum_a() const {
        long d = 0;
        for (long i = 0; i < n; ++i) d += doubled[i];
        return 0.5 * (double)d;
    }
    double u_a() const { return rank_sum_a() - 0.5 * (double)(n * (n + 1)); }
};

// doubled midranks are exact integers even through ties
Pooled pool_ranks(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("mann_whitney: empty sample");
    Pooled p;
    p.n = (long)a.size();
    p.m = (long)b.size();
    std::vector<std::pair<double, long>> all;
    all.reserve(p.N());
    for (long i = 0; i < p.n; ++i) all.push_back({a[i], i});
    for (long i = 0; i < p.m; ++i) all.push_back({b[i], p.n + i});
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    p.doubled.assign(p.N(), 0);
    for (long i = 0; i < p.N();) {
        long j = i;
        while (j < p.N() && all[j].first == all[i].first) ++j;
        long dmid = i + j + 1;  // ranks i+1 .. j averaged, doubled
        for (long k = i; k < j; ++k) p.doubled[all[k].second] = dmid;
        p.tieRuns.push_back(j - i);
        i = j;
    }
    return p;
}

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

} // namespace

MannWhitney mann_whitney_exact(const std::vector<double>& a, const std::vector<double>& b) {
    Pooled p = pool_ranks(a, b);
    const long N = p.N();
    MannWhitney out;
    out.exact = true;
    out.u = p.u_a();

    // walk the subset-sum distribution of the smaller side's rank sum
    const bool aSmall = p.n <= p.m;
    const long k = aSmall ? p.n : p.m;
    long dObs = 0;
    for (long i = 0; i < N; ++i)
        if ((i < p.n) == aSmall) dObs += p.doubled[i];

    const long maxS = 2 * k * N;  // loose cap on a k-subset of doubled ranks
    std::vector<std::vector<unsigned __int128>> dp(
        (size_t)k + 1, std::vector<unsigned __int128>((size_t)maxS + 1, 0));
    dp[0][0] = 1;
    for (long item : p.doubled)
        for (long j = k; j >= 1; --j)
            for (long s = maxS; s >= item; --s)
                if (dp[j - 1][s - item]) dp[j][s] += dp[j - 1][s - item];

    // doubled U of the small side, its mirror, and the two tail masses
    const long kk1 = k * (k + 1);
    const long duObs = dObs - kk1;
    const long duMax = 2 * k * (N - k);
    const long lo = std::min(duObs, duMax - duObs);
    const long hi = std::max(duObs, duMax - duObs);
    unsigned __int128 cLo = 0, cHi = 0, cGe = 0, total = 0;
    for (long s = 0; s <= maxS; ++s) {
        if (!dp[k][s]) continue;
        const long du = s - kk1;
        total += dp[k][s];
        if (du <= lo) cLo += dp[k][s];
        if (du >= hi) cHi += dp[k][s];
        if (du >= duObs) cGe += dp[k][s];
    }
    const double tot = (double)(long double)total;
    out.pTwoSided = clamp01(((double)(long double)cLo + (double)(long double)cHi) / tot);
    // one-sided tail for "a greater"; flip to the lower tail when b drove the walk
    double pg = (double)(long double)cGe / tot;
    if (!aSmall) {
        unsigned __int128 cLe = 0;
        for (long s = 0; s <= maxS; ++s)
            if (dp[k][s] && s - kk1 <= duObs) cLe += dp[k][s];
        pg = (double)(long double)cLe / tot;
    }
    out.pFirstGreater = clamp01(pg);
    return out;
}

MannWhitney mann_whitney_approx(const std::vector<double>& a, const std::vector<double>& b) {
    Pooled p = pool_ranks(a, b);
    MannWhitney out;
    out.exact = false;
    out.u = p.u_a();
    const double n = (double)p.n, m = (double)p.m, N = (double)p.N();
    const double mu = 0.5 * n * m;
    double tieTerm = 0;
    for (long t : p.tieRuns) tieTerm += (double)t * t * t - (double)t;
    const double var = n * m / 12.0 * ((N + 1.0) - tieTerm / (N * (N - 1.0)));
    if (var <= 0.0) return out;  // fully tied pool: p = 1 both ways
    const double sigma = std::sqrt(var);
    const double z2 = std::max(0.0, (std::abs(out.u - mu) - 0.5) / sigma);
    out.pTwoSided = clamp01(std::erfc(z2 / std::sqrt(2.0)));
    const double zg = (out.u - mu - 0.5) / sigma;
    out.pFirstGreater = clamp01(0.5 * std::erfc(zg / std::sqrt(2.0)));
    return out;
}

MannWhitney mann_whitney(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size(), m = b.size();
    if (std::min(n, m) <= 8 && n + m <= 1024) return mann_whitney_exact(a, b);
    return mann_whitney_approx(a, b);
}

SampleSummary summarize_samples(const std::vector<double>& xs, double confidence) {
    SampleSummary s;
    s.n = (int)xs.size();
    if (xs.empty()) return s;
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / (double)s.n;
    s.ciLo = s.ciHi = s.mean;
    if (s.n < 2) return s;
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(ss / (double)(s.n - 1));
    if (sd == 0.0) return s;
    boost::math::students_t dist((double)(s.n - 1));
    const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
    const double half = t * sd / std::sqrt((double)s.n);
    s.ciLo = s.mean - half;
    s.ciHi = s.mean + half;
    return s;
}

PairVerdict compare_samples(const std::vector<double>& a, const std::vector<double>& b,
                            double alpha, double confidence) {
    PairVerdict v;
    v.first = summarize_samples(a, confidence);
    v.second = summarize_samples(b, confidence);
    v.pTwoSided = mann_whitney(a, b).pTwoSided;
    if (v.first.mean > v.second.mean) v.winner = 0;
    else if (v.second.mean > v.first.mean) v.winner = 1;
    if (v.winner == 0)
        v.significant = v.first.ciLo > v.second.ciHi && v.pTwoSided < alpha;
    else if (v.winner == 1)
        v.significant = v.second.ciLo > v.first.ciHi && v.pTwoSided < alpha;
    return v;
}

} // namespace slcs2
