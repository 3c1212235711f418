#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldg/config.hpp"

namespace ldg {

/// Published summary numbers for one row of a results table.
struct ReferenceRow {
    std::optional<double> mean_alpha;
    std::optional<double> median_alpha;
    std::optional<double> std_alpha;
    std::optional<double> mean_beta;
    std::optional<double> median_beta;
    std::optional<double> correlation;
    std::optional<double> acceptance;
};

/// Pass/fail rules applied to a sampled row.
struct Tolerances {
    std::optional<double> alpha_rel_err;    ///< |mean_alpha - alpha*| / alpha*
    std::optional<double> beta_rel_err;     ///< |mean_beta - beta*| / beta*
    std::optional<double> acceptance_abs;   ///< |rate - published rate|
    std::optional<double> correlation_min;  ///< exclusive
    std::optional<double> correlation_max;  ///< exclusive
    std::optional<double> alpha_bias_max;   ///< 0 < (mean_alpha - alpha*) / alpha* <= max
    bool alpha_in_ci = false;
    std::optional<std::string> std_below;   ///< this row's std must be below the named preset's
};

struct Preset {
    ExperimentConfig config;
    std::string label;
    ReferenceRow published;
    Tolerances tol;
};

namespace detail {

inline ExperimentConfig base_1d(const std::string& name, const std::string& branch, const std::string& prior) {
    ExperimentConfig c;
    c.name = name;
    c.branch = branch;
    c.alpha_true = 0.004;
    c.beta_true = 1.0;
    c.dimension = 1;
    c.prior = prior;
    c.prior_center_alpha = 0.004;
    c.prior_center_beta = 1.0;
    c.prior_sigma_alpha = 0.0005;
    c.proposal_sigma_alpha = 0.001;
    c.init_alpha = 0.005;
    c.init_beta = 1.0;
    return c;
}

inline ExperimentConfig base_2d(const std::string& name, const std::string& branch, const std::string& prior,
                                double alpha, double beta) {
    ExperimentConfig c;
    c.name = name;
    c.branch = branch;
    c.alpha_true = alpha;
    c.beta_true = beta;
    c.dimension = 2;
    c.prior = prior;
    c.prior_center_alpha = alpha;
    c.prior_center_beta = beta;
    c.prior_sigma_alpha = 0.0005;
    c.prior_sigma_beta = 0.1;
    c.prior_rho = 0.5;
    c.proposal_rho = 0.8;
    c.proposal_sigma_beta = 0.1;
    if (alpha > 0.002) {
        c.proposal_sigma_alpha = 0.001;
        c.init_alpha = 0.01;
        c.init_beta = 0.5;
    } else {
        c.proposal_sigma_alpha = 0.005;
        c.init_alpha = 0.005;
        c.init_beta = 0.8;
    }
    return c;
}

inline ExperimentConfig base_vortex(const std::string& name, double alpha) {
    ExperimentConfig c;
    c.name = name;
    c.bc = "vortex";
    c.branch = "vortex";
    c.alpha_true = alpha;
    c.beta_true = 1.0;
    c.dimension = 1;
    c.prior = "uniform";
    c.prior_center_alpha = alpha;
    c.prior_center_beta = 1.0;
    c.proposal_sigma_alpha = 0.5 * alpha;
    c.init_alpha = 1.25 * alpha;
    c.chain_length = 30000;
    c.profile_lo = 0.1 * alpha;
    c.profile_hi = 2.0 * alpha;
    c.profile_points = 101;
    return c;
}

inline std::vector<Preset> build_presets() {
    std::vector<Preset> p;
    Tolerances t1;
    t1.alpha_rel_err = 0.10;
    t1.acceptance_abs = 0.10;
    t1.alpha_in_ci = true;

    auto gp = [](Tolerances t, const std::string& up) {
        t.std_below = up;
        return t;
    };

    p.push_back({base_1d("table2-up", "D1", "uniform"), "D1, UP",
                 {0.0040195, 0.0040126, 0.0004108, {}, {}, {}, 0.65}, t1});
    p.push_back({base_1d("table2-gp", "D1", "gaussian"), "D1, GP",
                 {0.0039962, 0.0039969, 0.0002121, {}, {}, {}, 0.45}, gp(t1, "table2-up")});
    p.push_back({base_1d("table3-up", "R4", "uniform"), "R4, UP",
                 {0.0039951, 0.0039996, 0.0004258, {}, {}, {}, 0.66}, t1});
    p.push_back({base_1d("table3-gp", "R4", "gaussian"), "R4, GP",
                 {0.0040011, 0.0039999, 0.0002129, {}, {}, {}, 0.44}, gp(t1, "table3-up")});

    Tolerances t4;
    t4.alpha_rel_err = 0.10;
    t4.beta_rel_err = 0.02;
    t4.correlation_min = 0.6;
    t4.acceptance_abs = 0.08;
    p.push_back({base_2d("table4-d1-up", "D1", "uniform", 0.004, 0.6), "D1, UP",
                 {0.0041841, 0.0041460, {}, 0.6060851, 0.6054822, 0.8654732, 0.17}, t4});
    p.push_back({base_2d("table4-d1-gp", "D1", "gaussian", 0.004, 0.6), "D1, GP",
                 {0.0040616, 0.0040508, {}, 0.6017940, 0.6020828, 0.8332836, 0.14}, t4});
    p.push_back({base_2d("table4-r4-up", "R4", "uniform", 0.004, 0.6), "R4, UP",
                 {0.0041191, 0.0041147, {}, 0.6085217, 0.6077666, 0.9258516, 0.22}, t4});
    p.push_back({base_2d("table4-r4-gp", "R4", "gaussian", 0.004, 0.6), "R4, GP",
                 {0.0040311, 0.0040217, {}, 0.6023924, 0.6016717, 0.9064120, 0.19}, t4});

    Tolerances t5d;
    t5d.alpha_rel_err = 0.15;
    t5d.beta_rel_err = 0.015;
    t5d.correlation_min = 0.3;
    t5d.correlation_max = 0.7;
    Tolerances t5r = t5d;
    t5r.alpha_rel_err.reset();
    t5r.alpha_bias_max = 0.30;
    p.push_back({base_2d("table5-d1-up", "D1", "uniform", 0.0008, 1.4), "D1, UP",
                 {0.0008587, 0.0008478, {}, 1.4044713, 1.4055363, 0.4372786, 0.16}, t5d});
    p.push_back({base_2d("table5-d1-gp", "D1", "gaussian", 0.0008, 1.4), "D1, GP",
                 {0.0008596, 0.0008417, {}, 1.4037591, 1.4046242, 0.4318876, 0.15}, t5d});
    p.push_back({base_2d("table5-r4-up", "R4", "uniform", 0.0008, 1.4), "R4, UP",
                 {0.0009278, 0.0008725, {}, 1.4134830, 1.4139106, 0.4805958, 0.31}, t5r});
    p.push_back({base_2d("table5-r4-gp", "R4", "gaussian", 0.0008, 1.4), "R4, GP",
                 {0.0009292, 0.0008886, {}, 1.4113185, 1.4106873, 0.4865024, 0.30}, t5r});

    p.push_back({base_vortex("fig14-a1", 1.0), "vortex, alpha* = 1", {}, {}});
    p.push_back({base_vortex("fig14-a01", 0.1), "vortex, alpha* = 0.1", {}, {}});
    p.push_back({base_vortex("fig14-a001", 0.01), "vortex, alpha* = 0.01", {}, {}});
    return p;
}

}  // namespace detail

inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = detail::build_presets();
    return all;
}

inline const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.config.name == name) return p;
    }
    throw ValidationError("unknown preset '" + name + "'");
}

/// Presets making up each reproducible table or figure.
inline std::vector<std::string> bundle_presets(const std::string& id) {
    if (id == "table2") return {"table2-up", "table2-gp"};
    if (id == "table3") return {"table3-up", "table3-gp"};
    if (id == "table4") return {"table4-d1-up", "table4-d1-gp", "table4-r4-up", "table4-r4-gp"};
    if (id == "table5") return {"table5-d1-up", "table5-d1-gp", "table5-r4-up", "table5-r4-gp"};
    if (id == "fig5") return {"table2-up"};
    if (id == "fig14") return {"fig14-a1", "fig14-a01", "fig14-a001"};
    throw ValidationError("unknown reproduction target '" + id + "' (expected table2..table5, fig5, fig14)");
}

/// Thresholds for the running-statistics and identifiability figures.
struct FigureRules {
    double min_ci_shrink = 2.0;        ///< CI width at N=1000 over width at the full segment
    std::size_t checkpoint_step = 500;
    std::size_t shrink_from = 1000;
    double plateau_above = 0.5;        ///< flatness ratio for a non-identifiable profile
    double peaked_below = 0.01;        ///< flatness ratio for an identifiable profile
    double credible_level = 0.95;      ///< central sample interval used to check that a chain brackets alpha*
};

inline const FigureRules& figure_rules() {
    static const FigureRules r;
    return r;
}

}  // namespace ldg
