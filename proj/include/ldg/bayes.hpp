#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ldg/errors.hpp"
#include "ldg/forward.hpp"
#include "ldg/qfield.hpp"

namespace ldg {

/// A point in parameter space: (alpha) or (alpha, beta).
using ParamVector = std::vector<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class DegenerateObservation : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// -----------------------------------------------------------------------------
// Prior
// -----------------------------------------------------------------------------

/// Prior on (0, inf)^d. All variants are unnormalized and vanish outside the
/// positive orthant.
struct Prior {
    enum class Kind { UniformPositive, GaussianTruncated, BivariateGaussianTruncated };

    Kind kind = Kind::UniformPositive;
    ParamVector center;
    ParamVector sigma;
    double rho = 0.0;

    static Prior uniform() { return {}; }

    static Prior gaussian(ParamVector center, ParamVector sigma) {
        require(center.size() == sigma.size() && !center.empty(), "gaussian prior: center/sigma size mismatch");
        for (double s : sigma) require(s > 0.0, "gaussian prior: sigma must be positive");
        return {Kind::GaussianTruncated, std::move(center), std::move(sigma), 0.0};
    }

    static Prior bivariate(double center_alpha, double center_beta, double sigma_alpha, double sigma_beta,
                           double rho) {
        require(sigma_alpha > 0.0 && sigma_beta > 0.0, "bivariate prior: sigmas must be positive");
        require(std::abs(rho) < 1.0, "bivariate prior: |rho| must be below 1");
        return {Kind::BivariateGaussianTruncated, {center_alpha, center_beta}, {sigma_alpha, sigma_beta}, rho};
    }

    [[nodiscard]] std::string describe() const {
        switch (kind) {
            case Kind::UniformPositive: return "uniform";
            case Kind::GaussianTruncated: return "gaussian";
            case Kind::BivariateGaussianTruncated: return "bivariate-gaussian";
        }
        return "?";
    }
};

inline double log_prior(const Prior& prior, const ParamVector& theta) {
    for (double t : theta) {
        if (!(t > 0.0)) return kNegInf;
    }
    switch (prior.kind) {
        case Prior::Kind::UniformPositive: return 0.0;
        case Prior::Kind::GaussianTruncated: {
            require(prior.center.size() == theta.size(), "log_prior: dimension mismatch");
            double lp = 0.0;
            for (std::size_t i = 0; i < theta.size(); ++i) {
                const double z = (theta[i] - prior.center[i]) / prior.sigma[i];
                lp -= 0.5 * z * z;
            }
            return lp;
        }
        case Prior::Kind::BivariateGaussianTruncated: {
            require(theta.size() == 2, "log_prior: bivariate prior needs a 2D point");
            const double za = (theta[0] - prior.center[0]) / prior.sigma[0];
            const double zb = (theta[1] - prior.center[1]) / prior.sigma[1];
            const double r = prior.rho;
            return -0.5 * (za * za - 2.0 * r * za * zb + zb * zb) / (1.0 - r * r);
        }
    }
    return kNegInf;
}

// -----------------------------------------------------------------------------
// Observation and error model
// -----------------------------------------------------------------------------

struct Provenance {
    double alpha_true = 0.0;
    double beta_true = 0.0;
    std::string branch;
    int mesh_n = 0;
    std::uint64_t seed = 0;
};

struct Observation {
    QField field;
    std::optional<Provenance> provenance;
};

/// Per-component variances sigma11^2, sigma12^2 of the observed nodal values.
struct ErrorModel {
    double sigma11_sq = 1.0;
    double sigma12_sq = 1.0;
};

namespace detail {

inline double population_variance(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size());
}

}  // namespace detail

inline ErrorModel error_variances(const Observation& obs) {
    require(obs.field.size() >= 2, "error_variances: need at least two nodes");
    ErrorModel e{detail::population_variance(obs.field.q11), detail::population_variance(obs.field.q12)};
    if (e.sigma11_sq < 1e-14 || e.sigma12_sq < 1e-14) {
        throw DegenerateObservation("error_variances: an observed component is constant (variance below 1e-14)");
    }
    return e;
}

/// -1/2 (|E1|^2 / sigma11^2 + |E2|^2 / sigma12^2) over all nodes.
inline double gaussian_misfit(const QField& observed, const QField& model, const ErrorModel& err) {
    require(observed.size() == model.size(), "gaussian_misfit: field sizes differ");
    double e1 = 0.0;
    double e2 = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d1 = observed.q11[i] - model.q11[i];
        const double d2 = observed.q12[i] - model.q12[i];
        e1 += d1 * d1;
        e2 += d2 * d2;
    }
    return -0.5 * (e1 / err.sigma11_sq + e2 / err.sigma12_sq);
}

// -----------------------------------------------------------------------------
// Forward model with warm start
// -----------------------------------------------------------------------------

/// The parameter-to-field map F(theta) through the discrete PDE.
///
/// Holds the only mutable state of a posterior evaluation: the warm-start
/// slot. Each solve starts from the slot (the solution at the last committed
/// parameter point) and falls back to `fallback` (normally the observation)
/// when that fails. When the fallback is a diagonal or rotated field, a
/// warm-started result of another class is re-solved from the fallback and
/// the result on the fallback's class is kept. One instance per chain.
class ForwardModel {
  public:
    struct Diagnostics {
        long solves = 0;
        long failures = 0;
        long fallbacks = 0;
        long branch_restarts = 0;
        long newton_iterations = 0;
    };

    /// dimension 1: theta = (alpha), beta fixed at `fixed_beta`; dimension 2: theta = (alpha, beta).
    ForwardModel(std::shared_ptr<const Mesh> mesh, BCSpec bc, QField fallback, int dimension, double fixed_beta,
                 SolverConfig cfg = {})
        : problem_(std::move(mesh), bc),
          fallback_(std::move(fallback)),
          warm_(fallback_),
          dimension_(dimension),
          fixed_beta_(fixed_beta),
          cfg_(cfg) {
        require(dimension == 1 || dimension == 2, "ForwardModel: dimension must be 1 or 2");
        require(dimension == 2 || fixed_beta > 0.0, "ForwardModel: fixed beta must be positive");
        cfg_.validate();
        fallback_.mesh = problem_.mesh_ptr();
        warm_.mesh = problem_.mesh_ptr();
        const auto c = classify_branch(fallback_);
        if (c != BranchClass::Other) branch_ = c;
    }

    [[nodiscard]] int dimension() const noexcept { return dimension_; }
    [[nodiscard]] const Mesh& mesh() const noexcept { return problem_.mesh(); }
    [[nodiscard]] const Diagnostics& diagnostics() const noexcept { return diag_; }
    [[nodiscard]] const SolverConfig& solver_config() const noexcept { return cfg_; }

    [[nodiscard]] ReducedParams to_params(const ParamVector& theta) const {
        require(static_cast<int>(theta.size()) == dimension_, "ForwardModel: parameter dimension mismatch");
        return dimension_ == 1 ? ReducedParams{theta[0], fixed_beta_} : ReducedParams{theta[0], theta[1]};
    }

    /// Solves at theta. On success the solution is held as pending and
    /// returned; nullptr when neither start converges.
    const QField* solve(const ParamVector& theta) {
        const auto p = to_params(theta);
        if (!p.valid()) return nullptr;
        ++diag_.solves;
        auto report = problem_.newton_solve(warm_, p, cfg_);
        diag_.newton_iterations += report.iterations;
        if (!report.converged) {
            ++diag_.fallbacks;
            report = problem_.newton_solve(fallback_, p, cfg_);
            diag_.newton_iterations += report.iterations;
        } else if (branch_ && classify_branch(report.solution) != *branch_) {
            ++diag_.branch_restarts;
            auto retry = problem_.newton_solve(fallback_, p, cfg_);
            diag_.newton_iterations += retry.iterations;
            if (retry.converged && classify_branch(retry.solution) == *branch_) report = std::move(retry);
        }
        if (!report.converged) {
            ++diag_.failures;
            has_pending_ = false;
            return nullptr;
        }
        pending_ = std::move(report.solution);
        has_pending_ = true;
        return &pending_;
    }

    /// Promotes the most recent successful solve to the warm-start slot.
    void commit() {
        if (has_pending_) warm_ = pending_;
    }

    void reset_warm_start() { warm_ = fallback_; }

  private:
    DiscreteProblem problem_;
    QField fallback_;
    QField warm_;
    QField pending_;
    bool has_pending_ = false;
    std::optional<BranchClass> branch_;
    int dimension_;
    double fixed_beta_;
    SolverConfig cfg_;
    Diagnostics diag_;
};

/// Log-likelihood through the forward map; -inf when the solve fails.
inline double log_likelihood(const Observation& obs, const ErrorModel& err, const ParamVector& theta,
                             ForwardModel& forward) {
    const QField* model = forward.solve(theta);
    if (model == nullptr) return kNegInf;
    return gaussian_misfit(obs.field, *model, err);
}

inline double log_posterior(const Prior& prior, const Observation& obs, const ErrorModel& err,
                            const ParamVector& theta, ForwardModel& forward) {
    const double lp = log_prior(prior, theta);
    if (lp == kNegInf) return kNegInf;
    return lp + log_likelihood(obs, err, theta, forward);
}

/// Bundles the ingredients of an unnormalized log-posterior as a callable.
class Posterior {
  public:
    Posterior(Prior prior, Observation obs, ForwardModel& forward)
        : prior_(std::move(prior)), obs_(std::move(obs)), err_(error_variances(obs_)), forward_(&forward) {}

    double operator()(const ParamVector& theta) const { return log_posterior(prior_, obs_, err_, theta, *forward_); }

    /// Call after an MCMC acceptance so the next solve warm-starts there.
    void accepted() const { forward_->commit(); }

    [[nodiscard]] const Prior& prior() const noexcept { return prior_; }
    [[nodiscard]] const Observation& observation() const noexcept { return obs_; }
    [[nodiscard]] const ErrorModel& error_model() const noexcept { return err_; }
    [[nodiscard]] ForwardModel& forward() const noexcept { return *forward_; }

  private:
    Prior prior_;
    Observation obs_;
    ErrorModel err_;
    ForwardModel* forward_;
};

// -----------------------------------------------------------------------------
// Grid evaluation: profile likelihood and quadrature oracle
// -----------------------------------------------------------------------------

/// Evaluates `f` on a sorted 1D grid, walking outward from `start` so each
/// solve warm-starts from its neighbour. Returns values in grid order.
inline std::vector<double> evaluate_outward(const std::vector<double>& grid, std::size_t start,
                                            const std::function<double(double)>& f,
                                            const std::function<void()>& reset = {}) {
    std::vector<double> out(grid.size(), kNegInf);
    if (grid.empty()) return out;
    start = std::min(start, grid.size() - 1);
    for (std::size_t i = start + 1; i-- > 0;) out[i] = f(grid[i]);
    if (reset) reset();
    for (std::size_t i = start + 1; i < grid.size(); ++i) out[i] = f(grid[i]);
    return out;
}

inline std::size_t nearest_index(const std::vector<double>& grid, double value) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(grid[i] - value) < std::abs(grid[best] - value)) best = i;
    }
    return best;
}

struct ProfileCurve {
    std::vector<double> grid;
    std::vector<double> log_likelihood;
    std::vector<double> normalized;  ///< exp(logL - max logL)
    std::size_t peak_index = 0;
    double flatness_ratio = 1.0;  ///< normalized value at the endpoint farthest from the peak
    double left_tail = 1.0;       ///< normalized value at grid.front()
    double right_tail = 1.0;      ///< normalized value at grid.back()
};

namespace detail {

inline ProfileCurve finish_profile(std::vector<double> grid, std::vector<double> logl) {
    ProfileCurve c;
    c.grid = std::move(grid);
    c.log_likelihood = std::move(logl);
    const auto peak = std::max_element(c.log_likelihood.begin(), c.log_likelihood.end());
    c.peak_index = static_cast<std::size_t>(peak - c.log_likelihood.begin());
    const double max_l = *peak;
    c.normalized.reserve(c.grid.size());
    for (double l : c.log_likelihood) c.normalized.push_back(max_l == kNegInf ? 0.0 : std::exp(l - max_l));
    c.left_tail = c.normalized.front();
    c.right_tail = c.normalized.back();
    const double peak_at = c.grid[c.peak_index];
    const bool right_farther = std::abs(c.grid.back() - peak_at) >= std::abs(c.grid.front() - peak_at);
    c.flatness_ratio = right_farther ? c.right_tail : c.left_tail;
    return c;
}

}  // namespace detail

/// Normalized likelihood along a 1D alpha grid (beta fixed by the forward model).
inline ProfileCurve profile_scan(const Observation& obs, const std::vector<double>& grid, ForwardModel& forward) {
    require(!grid.empty(), "profile_scan: grid must be nonempty");
    require(std::is_sorted(grid.begin(), grid.end()), "profile_scan: grid must be sorted");
    require(forward.dimension() == 1, "profile_scan: expects a one-parameter forward model");
    const auto err = error_variances(obs);
    const std::size_t start =
        obs.provenance ? nearest_index(grid, obs.provenance->alpha_true) : grid.size() / 2;
    forward.reset_warm_start();
    auto logl = evaluate_outward(
        grid, start,
        [&](double a) {
            const double l = log_likelihood(obs, err, {a}, forward);
            forward.commit();
            return l;
        },
        [&] { forward.reset_warm_start(); });
    return detail::finish_profile(grid, std::move(logl));
}

struct QuadratureMoments {
    ParamVector mean;
    ParamVector median;
    double log_normalizer = 0.0;  ///< log of the trapezoidal integral of the unnormalized posterior
    double edge_mass = 0.0;       ///< fraction of mass in the outermost grid cells
    bool mass_escape = false;     ///< edge_mass above 1%
};

namespace detail {

inline double trapezoid_integral(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

/// Median of a density tabulated on x, using the piecewise-linear density's exact CDF.
inline double density_median(const std::vector<double>& x, const std::vector<double>& p) {
    const double total = trapezoid_integral(x, p);
    double cum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double dx = x[i] - x[i - 1];
        const double cell = 0.5 * dx * (p[i] + p[i - 1]);
        if (cum + cell >= 0.5 * total && cell > 0.0) {
            // Solve p0 s + (p1 - p0) s^2 / (2 dx) = target for s in [0, dx].
            const double target = 0.5 * total - cum;
            const double a = 0.5 * (p[i] - p[i - 1]) / dx;
            const double b = p[i - 1];
            double s;
            if (std::abs(a) < 1e-300) {
                s = target / b;
            } else {
                s = (-b + std::sqrt(std::max(0.0, b * b + 4.0 * a * target))) / (2.0 * a);
            }
            return x[i - 1] + std::clamp(s, 0.0, dx);
        }
        cum += cell;
    }
    return x.back();
}

}  // namespace detail

/// Trapezoidal posterior moments on a sorted 1D grid for an arbitrary
/// unnormalized log-density.
inline QuadratureMoments quadrature_moments_1d(const std::vector<double>& grid, const std::vector<double>& log_density) {
    require(grid.size() >= 3 && grid.size() == log_density.size(), "quadrature_moments: need >= 3 grid points");
    const double max_l = *std::max_element(log_density.begin(), log_density.end());
    require(max_l > kNegInf, "quadrature_moments: posterior vanishes on the whole grid");
    std::vector<double> p(grid.size());
    std::vector<double> xp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        p[i] = std::exp(log_density[i] - max_l);
        xp[i] = grid[i] * p[i];
    }
    const double z = detail::trapezoid_integral(grid, p);
    QuadratureMoments m;
    m.mean = {detail::trapezoid_integral(grid, xp) / z};
    m.median = {detail::density_median(grid, p)};
    m.log_normalizer = std::log(z) + max_l;
    const std::size_t n = grid.size();
    const double edge = 0.5 * (grid[1] - grid[0]) * (p[0] + p[1]) + 0.5 * (grid[n - 1] - grid[n - 2]) * (p[n - 1] + p[n - 2]);
    m.edge_mass = edge / z;
    m.mass_escape = m.edge_mass > 0.01;
    return m;
}

/// Tensor-product version: log_density[i * beta_grid.size() + j] at (alpha_grid[i], beta_grid[j]).
inline QuadratureMoments quadrature_moments_2d(const std::vector<double>& alpha_grid,
                                               const std::vector<double>& beta_grid,
                                               const std::vector<double>& log_density) {
    const std::size_t na = alpha_grid.size();
    const std::size_t nb = beta_grid.size();
    require(na >= 3 && nb >= 3 && log_density.size() == na * nb, "quadrature_moments_2d: bad grid sizes");
    const double max_l = *std::max_element(log_density.begin(), log_density.end());
    require(max_l > kNegInf, "quadrature_moments_2d: posterior vanishes on the whole grid");

    std::vector<double> marg_a(na, 0.0);
    std::vector<double> marg_b(nb, 0.0);
    std::vector<double> row(nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) row[j] = std::exp(log_density[i * nb + j] - max_l);
        marg_a[i] = detail::trapezoid_integral(beta_grid, row);
    }
    std::vector<double> col(na);
    for (std::size_t j = 0; j < nb; ++j) {
        for (std::size_t i = 0; i < na; ++i) col[i] = std::exp(log_density[i * nb + j] - max_l);
        marg_b[j] = detail::trapezoid_integral(alpha_grid, col);
    }
    auto ma = quadrature_moments_1d(alpha_grid, [&] {
        std::vector<double> l(na);
        for (std::size_t i = 0; i < na; ++i) l[i] = marg_a[i] > 0.0 ? std::log(marg_a[i]) : kNegInf;
        return l;
    }());
    auto mb = quadrature_moments_1d(beta_grid, [&] {
        std::vector<double> l(nb);
        for (std::size_t j = 0; j < nb; ++j) l[j] = marg_b[j] > 0.0 ? std::log(marg_b[j]) : kNegInf;
        return l;
    }());
    QuadratureMoments m;
    m.mean = {ma.mean[0], mb.mean[0]};
    m.median = {ma.median[0], mb.median[0]};
    m.log_normalizer = ma.log_normalizer + max_l;
    m.edge_mass = std::max(ma.edge_mass, mb.edge_mass);
    m.mass_escape = ma.mass_escape || mb.mass_escape;
    return m;
}

/// Posterior moments by grid quadrature through the PDE forward map.
inline QuadratureMoments quadrature_moments(const Prior& prior, const Observation& obs,
                                            const std::vector<double>& grid, ForwardModel& forward) {
    require(forward.dimension() == 1, "quadrature_moments: expects a one-parameter forward model");
    require(std::is_sorted(grid.begin(), grid.end()), "quadrature_moments: grid must be sorted");
    const auto err = error_variances(obs);
    const std::size_t start =
        obs.provenance ? nearest_index(grid, obs.provenance->alpha_true) : grid.size() / 2;
    forward.reset_warm_start();
    auto logp = evaluate_outward(
        grid, start,
        [&](double a) {
            const double l = log_posterior(prior, obs, err, {a}, forward);
            forward.commit();
            return l;
        },
        [&] { forward.reset_warm_start(); });
    return quadrature_moments_1d(grid, logp);
}

}  // namespace ldg
