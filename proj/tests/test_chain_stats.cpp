#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ldg/chain_stats.hpp"
#include "oracles.hpp"

using namespace ldg;

namespace {

Chain chain_of(const std::vector<double>& x) {
    Chain c;
    for (double v : x) {
        c.samples.push_back({v});
        c.accepted.push_back(true);
    }
    return c;
}

std::vector<double> iid(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
    auto e = iid(n, seed);
    std::vector<double> x(n);
    x[0] = e[0];
    for (std::size_t t = 1; t < n; ++t) x[t] = phi * x[t - 1] + e[t];
    return x;
}

}  // namespace

TEST(BurnIn, Boundaries) {
    const auto c = chain_of(std::vector<double>(10000, 1.0));
    EXPECT_EQ(discard_burn_in(c, 0).size(), 10000u);
    EXPECT_EQ(discard_burn_in(c, 200).size(), 9800u);
    EXPECT_EQ(discard_burn_in(c, 9999).size(), 1u);
    EXPECT_THROW(discard_burn_in(c, 10000), ValidationError);

    auto ramp = chain_of({1, 2, 3, 4, 5});
    const auto seg = discard_burn_in(ramp, 2);
    EXPECT_EQ(seg.samples.front()[0], 3.0);
}

TEST(Summary, SmallExamples) {
    const auto s = summary(chain_of({1, 2, 3}));
    EXPECT_DOUBLE_EQ(s.coords[0].mean, 2.0);
    EXPECT_DOUBLE_EQ(s.coords[0].median, 2.0);
    EXPECT_DOUBLE_EQ(s.coords[0].std, 1.0);
    EXPECT_FALSE(s.rho_ab.has_value());
    EXPECT_DOUBLE_EQ(median({4, 1, 3, 2}), 2.5);
    EXPECT_DOUBLE_EQ(sample_std({5.0}), 0.0);
}

TEST(Summary, BivariateCorrelation) {
    Chain c;
    c.proposal = ProposalConfig::bivariate(1, 1, 0);
    const auto a = iid(5000, 1), b = iid(5000, 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        c.samples.push_back({a[i], 0.8 * a[i] + 0.6 * b[i]});
        c.accepted.push_back(true);
    }
    const auto s = summary(c);
    ASSERT_TRUE(s.rho_ab.has_value());
    EXPECT_NEAR(*s.rho_ab, 0.8, 0.02);
    EXPECT_DOUBLE_EQ(pearson({1, 2, 3}, {2, 4, 6}), 1.0);
    EXPECT_DOUBLE_EQ(pearson({1, 2, 3}, {3, 2, 1}), -1.0);
}

TEST(Summary, PermutationInvariantMeanMedianStd) {
    auto x = iid(999, 3);
    const auto s0 = summary(chain_of(x));
    std::mt19937_64 rng(1);
    std::shuffle(x.begin(), x.end(), rng);
    const auto s1 = summary(chain_of(x));
    EXPECT_NEAR(s0.coords[0].mean, s1.coords[0].mean, 1e-14);
    EXPECT_EQ(s0.coords[0].median, s1.coords[0].median);
    EXPECT_NEAR(s0.coords[0].std, s1.coords[0].std, 1e-14);
}

TEST(Autocovariance, LagZeroAndIndependence) {
    const auto x = iid(20000, 4);
    const double m = mean(x);
    double pv = 0.0;
    for (double v : x) pv += (v - m) * (v - m);
    EXPECT_NEAR(autocovariance(x, 0), pv / x.size(), 1e-12);
    EXPECT_LT(std::abs(autocovariance(x, 1)), 3.0 / std::sqrt(x.size()));
    EXPECT_THROW(autocovariance(x, x.size()), ValidationError);
}

TEST(CltVariance, IidAndAr1AndAlternating) {
    const auto x = iid(50000, 5);
    EXPECT_NEAR(clt_variance(x).gamma_sq, autocovariance(x, 0), 0.1);

    // AR(1) with phi = 0.5 has asymptotic variance (1/(1-phi^2)) (1+phi)/(1-phi) = 4.
    const auto y = ar1(200000, 0.5, 6);
    const auto g = clt_variance(y, 30);
    EXPECT_FALSE(g.floored);
    EXPECT_NEAR(g.gamma_sq, 4.0, 0.25);
    EXPECT_GT(g.gamma_sq, autocovariance(y, 0));

    std::vector<double> alt;
    for (int i = 0; i < 100; ++i) alt.push_back(i % 2 == 0 ? 1.0 : -1.0);
    const auto a = clt_variance(alt, 1);
    EXPECT_TRUE(a.floored);
    EXPECT_NEAR(a.gamma_sq, 1e-6, 1e-12);
    EXPECT_THROW(clt_variance(alt, 0), ValidationError);
}

TEST(ConfidenceInterval, ConstantAndNestingAndLevels) {
    const std::vector<double> c(100, 3.0);
    const auto z = confidence_interval(c, 0.0);
    EXPECT_EQ(z.lo, 3.0);
    EXPECT_EQ(z.hi, 3.0);
    EXPECT_TRUE(z.contains(3.0));

    const auto x = iid(1000, 7);
    const double g = clt_variance(x).gamma_sq;
    const auto c90 = confidence_interval(x, g, 0.90), c95 = confidence_interval(x, g, 0.95),
               c99 = confidence_interval(x, g, 0.99);
    EXPECT_LT(c99.lo, c95.lo);
    EXPECT_LT(c95.lo, c90.lo);
    EXPECT_GT(c99.hi, c95.hi);
    EXPECT_GT(c95.hi, c90.hi);
    EXPECT_NEAR(c95.width(), 2 * 1.96 * std::sqrt(g / 1000.0), 1e-14);
    EXPECT_THROW(confidence_interval(x, g, 0.5), ValidationError);
}

TEST(ConfidenceInterval, CoverageOnAr1) {
    int hits = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const auto y = ar1(4000, 0.5, 100 + r);
        const auto ci = confidence_interval(y, clt_variance(y, 15).gamma_sq, 0.95);
        hits += ci.contains(0.0) ? 1 : 0;
    }
    EXPECT_GT(hits, 0.88 * reps);
}

TEST(Ks, StatisticMatchesBruteForce) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> d(0, 20);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> a(37), b(53);
        // Integer values force ties.
        for (auto& v : a) v = d(rng);
        for (auto& v : b) v = d(rng) + (trial % 3);
        EXPECT_NEAR(ks_statistic(a, b), oracle::ks_brute(a, b), 1e-15);
    }
}

TEST(Ks, IdenticalAndDisjointWindows) {
    auto w = iid(1000, 9);
    std::vector<double> x = w;
    x.insert(x.end(), w.begin(), w.end());
    const auto same = ks_stationarity(x);
    ASSERT_EQ(same.size(), 1u);
    EXPECT_EQ(same[0].statistic, 0.0);
    EXPECT_TRUE(same[0].pass);
    EXPECT_NEAR(same[0].critical, 1.36 * std::sqrt(2.0 / 100.0), 1e-15);

    std::vector<double> y = w;
    for (double v : w) y.push_back(v + 100.0);
    const auto apart = ks_stationarity(y);
    EXPECT_EQ(apart[0].statistic, 1.0);
    EXPECT_FALSE(apart[0].pass);

    EXPECT_THROW(ks_stationarity(iid(1999, 1)), InsufficientLength);
}

TEST(Ks, WindowCountAndIidPassRate) {
    const auto x = iid(9800, 10);
    const auto w = ks_stationarity(x);
    EXPECT_EQ(w.size(), 8u);
    EXPECT_GE(ks_pass_count(w), 6u);
}

TEST(Histogram, CountsAndEdges) {
    const auto h1 = histogram({2.5, 2.5, 2.5}, 1);
    ASSERT_EQ(h1.counts.size(), 1u);
    EXPECT_EQ(h1.counts[0], 3u);

    const auto x = iid(5000, 11);
    const auto h = histogram(x);
    EXPECT_EQ(h.counts.size(), 40u);
    EXPECT_EQ(h.edges.size(), 41u);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    EXPECT_EQ(total, x.size());
    EXPECT_EQ(h.edges.front(), *std::min_element(x.begin(), x.end()));
    EXPECT_EQ(h.edges.back(), *std::max_element(x.begin(), x.end()));

    const auto y = iid(5000, 12);
    const auto h2 = bivariate_histogram(x, y, 10);
    total = 0;
    for (auto c : h2.counts) total += c;
    EXPECT_EQ(total, x.size());
    EXPECT_EQ(h2.at(0, 0) + h2.at(9, 9), h2.counts[0] + h2.counts[99]);
}

TEST(RunningStats, CheckpointsAndPrefixes) {
    const auto x = ar1(9800, 0.3, 13);
    const auto cps = default_checkpoints(x.size());
    EXPECT_EQ(cps.front(), 500u);
    EXPECT_EQ(cps[cps.size() - 2], 9500u);
    EXPECT_EQ(cps.back(), 9800u);

    const auto full = running_stats(x, {x.size()});
    const auto s = chain_stats(chain_of(x));
    EXPECT_DOUBLE_EQ(full[0].mean, s.coords[0].mean);
    EXPECT_DOUBLE_EQ(full[0].median, s.coords[0].median);
    EXPECT_DOUBLE_EQ(full[0].ci.lo, s.coords[0].ci.lo);

    const auto one = running_stats(x, {1});
    EXPECT_EQ(one[0].mean, x[0]);
    EXPECT_EQ(one[0].median, x[0]);

    const auto r = running_stats(x, cps);
    EXPECT_GT(r[1].ci.width(), r.back().ci.width());
    EXPECT_THROW(running_stats(x, {x.size() + 1}), ValidationError);
}

TEST(ChainStats, JsonKeys) {
    Chain c = chain_of(iid(3000, 14));
    c.accepted[0] = false;
    const auto j = to_json(chain_stats(c));
    EXPECT_TRUE(j.contains("alpha"));
    EXPECT_TRUE(j["alpha"].contains("mean"));
    EXPECT_TRUE(j["alpha"].contains("standard deviation"));
    EXPECT_TRUE(j["alpha"].contains("ci"));
    EXPECT_NEAR(j["acceptance rate"].get<double>(), 2999.0 / 3000.0, 1e-15);
    EXPECT_EQ(j["n_used"], 3000);
}
