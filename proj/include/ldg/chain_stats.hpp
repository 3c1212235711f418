#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ldg/errors.hpp"
#include "ldg/mcmc.hpp"

namespace ldg {

class InsufficientLength : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.95;

    [[nodiscard]] double width() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

struct CoordinateStats {
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;
    double gamma_sq = 0.0;
    bool gamma_floored = false;
    ConfidenceInterval ci;
};

struct ChainStats {
    std::vector<CoordinateStats> coords;
    std::optional<double> rho_ab;
    std::optional<double> acceptance;
    std::size_t n_used = 0;
};

/// Samples m+1 .. end (1-based) of the chain.
inline Chain discard_burn_in(const Chain& chain, std::size_t m) {
    require(m < chain.size(), "discard_burn_in: burn-in must be shorter than the chain");
    Chain seg = chain;
    const auto off = static_cast<std::ptrdiff_t>(m);
    seg.samples.assign(chain.samples.begin() + off, chain.samples.end());
    seg.accepted.assign(chain.accepted.begin() + off, chain.accepted.end());
    if (chain.log_target.size() == chain.size()) {
        seg.log_target.assign(chain.log_target.begin() + off, chain.log_target.end());
    }
    return seg;
}

inline double mean(const std::vector<double>& x) {
    require(!x.empty(), "mean: empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double median(std::vector<double> x) {
    require(!x.empty(), "median: empty sample");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

/// Sample standard deviation with denominator n-1; zero for a single sample.
inline double sample_std(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "pearson: need two equally sized samples");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Mean, median, std per coordinate and the correlation for 2D segments.
inline ChainStats summary(const Chain& segment) {
    require(segment.size() > 0, "summary: empty segment");
    ChainStats s;
    s.n_used = segment.size();
    const int dim = static_cast<int>(segment.samples.front().size());
    for (int c = 0; c < dim; ++c) {
        const auto x = segment.coordinate(c);
        CoordinateStats cs;
        cs.mean = mean(x);
        cs.median = median(x);
        cs.std = sample_std(x);
        s.coords.push_back(cs);
    }
    if (dim == 2 && segment.size() >= 2) s.rho_ab = pearson(segment.coordinate(0), segment.coordinate(1));
    return s;
}

/// (1/n) sum_t (x_t - mean)(x_{t+k} - mean).
inline double autocovariance(const std::vector<double>& x, std::size_t k) {
    require(k < x.size(), "autocovariance: lag must be below the segment length");
    const double m = mean(x);
    double s = 0.0;
    for (std::size_t t = 0; t + k < x.size(); ++t) s += (x[t] - m) * (x[t + k] - m);
    return s / static_cast<double>(x.size());
}

struct CltVariance {
    double gamma_sq = 0.0;
    bool floored = false;
};

inline constexpr int kDefaultGammaLags = 15;

inline CltVariance clt_variance(const std::vector<double>& x, int k_max = kDefaultGammaLags) {
    require(k_max >= 1, "clt_variance: k_max must be at least 1");
    const double var = autocovariance(x, 0);
    double g = var;
    const auto kmax = std::min<std::size_t>(static_cast<std::size_t>(k_max), x.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k) g += 2.0 * autocovariance(x, k);
    if (g <= 0.0) return {var * 1e-6, true};
    return {g, false};
}

inline double normal_quantile(double level) {
    if (std::abs(level - 0.90) < 1e-9) return 1.6449;
    if (std::abs(level - 0.95) < 1e-9) return 1.96;
    if (std::abs(level - 0.99) < 1e-9) return 2.5758;
    throw ValidationError("confidence level must be one of 0.90, 0.95, 0.99");
}

/// mean +- q sqrt(gamma_sq / n).
inline ConfidenceInterval confidence_interval(const std::vector<double>& x, double gamma_sq, double level = 0.95) {
    const double m = mean(x);
    const double half = normal_quantile(level) * std::sqrt(std::max(gamma_sq, 0.0) / static_cast<double>(x.size()));
    return {m - half, m + half, level};
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

inline double ks_critical_value(std::size_t m1, std::size_t m2, double c_alpha = 1.36) {
    const double a = static_cast<double>(m1);
    const double b = static_cast<double>(m2);
    return c_alpha * std::sqrt((a + b) / (a * b));
}

struct KsWindow {
    std::size_t first_window = 0;  ///< compares windows first_window and first_window + 1
    double statistic = 0.0;
    double critical = 0.0;
    bool pass = false;
};

/// Splits x into disjoint windows of `period` samples, thins each by `g` and
/// compares consecutive thinned batches.
inline std::vector<KsWindow> ks_stationarity(const std::vector<double>& x, std::size_t period = 1000,
                                             std::size_t g = 10, double c_alpha = 1.36) {
    require(period >= 1 && g >= 1 && g <= period, "ks_stationarity: need 1 <= g <= period");
    const std::size_t windows = x.size() / period;
    if (windows < 2) throw InsufficientLength("ks_stationarity: segment shorter than two periods");
    auto batch = [&](std::size_t w) {
        std::vector<double> b;
        for (std::size_t i = w * period; i < (w + 1) * period; i += g) b.push_back(x[i]);
        return b;
    };
    std::vector<KsWindow> out;
    auto prev = batch(0);
    for (std::size_t w = 1; w < windows; ++w) {
        auto cur = batch(w);
        KsWindow r;
        r.first_window = w - 1;
        r.statistic = ks_statistic(prev, cur);
        r.critical = ks_critical_value(prev.size(), cur.size(), c_alpha);
        r.pass = r.statistic < r.critical;
        out.push_back(r);
        prev = std::move(cur);
    }
    return out;
}

inline std::size_t ks_pass_count(const std::vector<KsWindow>& w) {
    return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](const KsWindow& k) { return k.pass; }));
}

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
};

struct Histogram2D {
    std::vector<double> edges_x;
    std::vector<double> edges_y;
    std::vector<std::size_t> counts;  ///< row-major, counts[i * bins_y + j]
    std::size_t bins_x = 0;
    std::size_t bins_y = 0;

    [[nodiscard]] std::size_t at(std::size_t i, std::size_t j) const { return counts[i * bins_y + j]; }
};

namespace detail {

inline std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
    std::vector<double> e(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    e.back() = hi;
    return e;
}

inline std::size_t bin_of(double v, double lo, double hi, std::size_t bins) {
    if (hi <= lo) return 0;
    const auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    return std::min(b, bins - 1);
}

}  // namespace detail

inline Histogram histogram(const std::vector<double>& x, std::size_t bins = 40) {
    require(bins >= 1, "histogram: need at least one bin");
    require(!x.empty(), "histogram: empty sample");
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    Histogram h;
    h.edges = detail::uniform_edges(*lo_it, *hi_it, bins);
    h.counts.assign(bins, 0);
    for (double v : x) ++h.counts[detail::bin_of(v, *lo_it, *hi_it, bins)];
    return h;
}

inline Histogram2D bivariate_histogram(const std::vector<double>& x, const std::vector<double>& y,
                                       std::size_t bins = 40) {
    require(bins >= 1, "bivariate_histogram: need at least one bin");
    require(x.size() == y.size() && !x.empty(), "bivariate_histogram: need equally sized nonempty samples");
    const auto [xl, xh] = std::minmax_element(x.begin(), x.end());
    const auto [yl, yh] = std::minmax_element(y.begin(), y.end());
    Histogram2D h;
    h.bins_x = h.bins_y = bins;
    h.edges_x = detail::uniform_edges(*xl, *xh, bins);
    h.edges_y = detail::uniform_edges(*yl, *yh, bins);
    h.counts.assign(bins * bins, 0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        ++h.counts[detail::bin_of(x[k], *xl, *xh, bins) * bins + detail::bin_of(y[k], *yl, *yh, bins)];
    }
    return h;
}

struct RunningPoint {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    ConfidenceInterval ci;
};

/// Statistics over prefixes x[0..N) for each checkpoint N.
inline std::vector<RunningPoint> running_stats(const std::vector<double>& x, const std::vector<std::size_t>& checkpoints,
                                               int k_max = kDefaultGammaLags, double level = 0.95) {
    std::vector<RunningPoint> out;
    for (std::size_t n : checkpoints) {
        require(n >= 1 && n <= x.size(), "running_stats: checkpoint outside the segment");
        const std::vector<double> prefix(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
        RunningPoint p;
        p.n = n;
        p.mean = mean(prefix);
        p.median = median(prefix);
        const double g = n >= 2 ? clt_variance(prefix, k_max).gamma_sq : 0.0;
        p.ci = confidence_interval(prefix, g, level);
        out.push_back(p);
    }
    return out;
}

/// 500, 1000, ..., below n, then n itself.
inline std::vector<std::size_t> default_checkpoints(std::size_t n, std::size_t step = 500) {
    std::vector<std::size_t> c;
    for (std::size_t k = step; k < n; k += step) c.push_back(k);
    c.push_back(n);
    return c;
}

/// Full statistics of a post-burn-in segment, including gamma^2 and CIs.
inline ChainStats chain_stats(const Chain& segment, int k_max = kDefaultGammaLags, double level = 0.95) {
    ChainStats s = summary(segment);
    for (std::size_t c = 0; c < s.coords.size(); ++c) {
        const auto x = segment.coordinate(static_cast<int>(c));
        const auto g = x.size() >= 2 ? clt_variance(x, k_max) : CltVariance{};
        s.coords[c].gamma_sq = g.gamma_sq;
        s.coords[c].gamma_floored = g.floored;
        s.coords[c].ci = confidence_interval(x, g.gamma_sq, level);
    }
    if (!segment.accepted.empty()) s.acceptance = acceptance_rate(segment);
    return s;
}

// -- persistence --------------------------------------------------------------

inline nlohmann::json to_json(const ChainStats& s, const std::vector<std::string>& names = {"alpha", "beta"}) {
    nlohmann::json j;
    for (std::size_t c = 0; c < s.coords.size(); ++c) {
        const auto& cs = s.coords[c];
        j[names.at(c)] = {{"mean", cs.mean},
                          {"median", cs.median},
                          {"standard deviation", cs.std},
                          {"gamma_sq", cs.gamma_sq},
                          {"gamma_sq_floored", cs.gamma_floored},
                          {"ci", {{"lo", cs.ci.lo}, {"hi", cs.ci.hi}, {"level", cs.ci.level}}}};
    }
    if (s.acceptance) j["acceptance rate"] = *s.acceptance;
    if (s.rho_ab) j["correlation"] = *s.rho_ab;
    j["n_used"] = s.n_used;
    return j;
}

inline void write_histogram_csv(const Histogram& h, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1]) << ',' << h.counts[i] << '\n';
    }
}

inline void write_histogram_csv(const Histogram2D& h, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    out << "alpha_lo,alpha_hi,beta_lo,beta_hi,count\n";
    for (std::size_t i = 0; i < h.bins_x; ++i) {
        for (std::size_t j = 0; j < h.bins_y; ++j) {
            out << format_double(h.edges_x[i]) << ',' << format_double(h.edges_x[i + 1]) << ','
                << format_double(h.edges_y[j]) << ',' << format_double(h.edges_y[j + 1]) << ',' << h.at(i, j) << '\n';
        }
    }
}

inline void write_ks_csv(const std::vector<KsWindow>& w, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    out << "window_a,window_b,statistic,critical,pass\n";
    for (const auto& k : w) {
        out << k.first_window << ',' << k.first_window + 1 << ',' << format_double(k.statistic) << ','
            << format_double(k.critical) << ',' << (k.pass ? 1 : 0) << '\n';
    }
}

inline void write_running_csv(const std::vector<RunningPoint>& r, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    out << "n,mean,median,ci_lo,ci_hi\n";
    for (const auto& p : r) {
        out << p.n << ',' << format_double(p.mean) << ',' << format_double(p.median) << ',' << format_double(p.ci.lo)
            << ',' << format_double(p.ci.hi) << '\n';
    }
}

}  // namespace ldg
