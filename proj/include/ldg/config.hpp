#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "ldg/chain_stats.hpp"
#include "ldg/errors.hpp"
#include "ldg/forward.hpp"
#include "ldg/mcmc.hpp"

namespace ldg {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// One experiment: synthetic data, prior, sampler and post-processing settings.
struct ExperimentConfig {
    std::string name = "custom";

    int mesh_n = 32;
    int observation_mesh_n = 0;  ///< 0: observe on the inversion mesh
    std::string bc = "tangent";  ///< tangent | vortex
    double bc_d = 0.06;
    double vortex_a1 = 0.25;
    double vortex_a2 = 0.75;
    std::string branch = "D1";  ///< D1 D2 R1..R4 WORS for tangent, vortex for the vortex BC

    double alpha_true = 0.004;
    double beta_true = 1.0;
    int dimension = 1;  ///< 1: infer alpha with beta = beta_true; 2: infer (alpha, beta)

    std::string prior = "uniform";  ///< uniform | gaussian
    double prior_center_alpha = 0.004;
    double prior_center_beta = 1.0;
    double prior_sigma_alpha = 0.0005;
    double prior_sigma_beta = 0.1;
    double prior_rho = 0.5;

    double proposal_sigma_alpha = 0.001;
    double proposal_sigma_beta = 0.1;
    double proposal_rho = 0.8;
    double init_alpha = 0.005;
    double init_beta = 1.0;

    int chain_length = 10000;
    int burn_in = 200;
    std::uint64_t seed = 20240601;

    int gamma_lags = 15;
    double ci_level = 0.95;
    int ks_period = 1000;
    int ks_step = 10;
    int histogram_bins = 40;

    double profile_lo = 0.0;  ///< 0: alpha_true / 10
    double profile_hi = 0.0;  ///< 0: 2 alpha_true
    int profile_points = 101;

    double residual_tol = 1e-10;
    int max_newton = 30;

    std::string out_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;

    [[nodiscard]] BCSpec bc_spec() const { return bc == "vortex" ? vortex_bc(vortex_a1, vortex_a2) : tangent_bc(bc_d); }

    [[nodiscard]] Prior prior_spec() const {
        if (prior == "uniform") return Prior::uniform();
        if (dimension == 1) return Prior::gaussian({prior_center_alpha}, {prior_sigma_alpha});
        return Prior::bivariate(prior_center_alpha, prior_center_beta, prior_sigma_alpha, prior_sigma_beta, prior_rho);
    }

    [[nodiscard]] ProposalConfig proposal_spec() const {
        return dimension == 1 ? ProposalConfig::univariate(proposal_sigma_alpha)
                              : ProposalConfig::bivariate(proposal_sigma_alpha, proposal_sigma_beta, proposal_rho);
    }

    [[nodiscard]] ParamVector init_point() const {
        return dimension == 1 ? ParamVector{init_alpha} : ParamVector{init_alpha, init_beta};
    }

    [[nodiscard]] SolverConfig solver_config() const {
        SolverConfig s;
        s.residual_tol = residual_tol;
        s.max_iter = max_newton;
        return s;
    }

    [[nodiscard]] std::vector<double> profile_grid() const {
        const double lo = profile_lo > 0.0 ? profile_lo : 0.1 * alpha_true;
        const double hi = profile_hi > 0.0 ? profile_hi : 2.0 * alpha_true;
        std::vector<double> g(static_cast<std::size_t>(profile_points));
        for (int i = 0; i < profile_points; ++i) g[i] = lo + (hi - lo) * i / (profile_points - 1);
        return g;
    }

    void validate() const {
        require(mesh_n >= 2, "config: mesh_n must be at least 2");
        require(observation_mesh_n == 0 || (observation_mesh_n >= mesh_n && observation_mesh_n % mesh_n == 0),
                "config: observation_mesh_n must be 0 or a multiple of mesh_n");
        require(bc == "tangent" || bc == "vortex", "config: bc must be tangent or vortex");
        if (bc == "tangent") {
            require(bc_d > 0.0 && bc_d < 0.5, "config: bc_d must lie in (0, 1/2)");
            require(branch != "vortex", "config: branch vortex needs the vortex bc");
            branch_kind_from_string(branch);
        } else {
            require(vortex_a1 > 0.0 && vortex_a1 < 1.0 && vortex_a2 > 0.0 && vortex_a2 < 1.0,
                    "config: vortex centre must be interior");
            require(branch == "vortex", "config: the vortex bc uses branch = vortex");
        }
        require(alpha_true > 0.0 && beta_true > 0.0, "config: true parameters must be positive");
        require(dimension == 1 || dimension == 2, "config: dimension must be 1 or 2");
        require(prior == "uniform" || prior == "gaussian", "config: prior must be uniform or gaussian");
        if (prior == "gaussian") {
            require(prior_sigma_alpha > 0.0, "config: prior_sigma_alpha must be positive");
            if (dimension == 2) {
                require(prior_sigma_beta > 0.0, "config: prior_sigma_beta must be positive");
                require(std::abs(prior_rho) < 1.0, "config: |prior_rho| must be below 1");
            }
        }
        proposal_spec().validate();
        require(init_alpha > 0.0 && (dimension == 1 || init_beta > 0.0), "config: initial point must be positive");
        require(burn_in >= 0, "config: burn_in must be nonnegative");
        require(chain_length >= burn_in + 100, "config: chain_length must be at least burn_in + 100");
        require(gamma_lags >= 1, "config: gamma_lags must be at least 1");
        normal_quantile(ci_level);
        require(ks_period >= 1 && ks_step >= 1 && ks_step <= ks_period, "config: need 1 <= ks_step <= ks_period");
        require(histogram_bins >= 1, "config: histogram_bins must be at least 1");
        require(profile_points >= 2, "config: profile_points must be at least 2");
        require(profile_lo >= 0.0 && profile_hi >= 0.0, "config: profile bounds must be nonnegative");
        require(profile_grid().front() < profile_grid().back(), "config: profile grid must be increasing");
        solver_config().validate();
    }
};

namespace detail {

struct ConfigField {
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    require(pos == v.size() && !v.empty(), "config: " + key + " expects a number, got '" + v + "'");
    return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    require(pos == v.size() && !v.empty(), "config: " + key + " expects an integer, got '" + v + "'");
    return out;
}

template <class T>
ConfigField field(T ExperimentConfig::*member) {
    ConfigField f;
    if constexpr (std::is_same_v<T, std::string>) {
        f.get = [member](const ExperimentConfig& c) { return c.*member; };
        f.set = [member](ExperimentConfig& c, const std::string& v) { c.*member = v; };
    } else if constexpr (std::is_same_v<T, double>) {
        f.get = [member](const ExperimentConfig& c) { return format_double(c.*member); };
        f.set = [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_double("value", v); };
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        f.get = [member](const ExperimentConfig& c) { return std::to_string(c.*member); };
        f.set = [member](ExperimentConfig& c, const std::string& v) {
            require(!v.empty() && v.find_first_not_of("0123456789") == std::string::npos,
                    "config: seed expects a nonnegative integer, got '" + v + "'");
            c.*member = std::stoull(v);
        };
    } else {
        f.get = [member](const ExperimentConfig& c) { return std::to_string(c.*member); };
        f.set = [member](ExperimentConfig& c, const std::string& v) { c.*member = static_cast<T>(parse_int("value", v)); };
    }
    return f;
}

/// Keys in emission order.
inline const std::vector<std::pair<std::string, ConfigField>>& config_fields() {
    using C = ExperimentConfig;
    static const std::vector<std::pair<std::string, ConfigField>> fields = {
        {"name", field(&C::name)},
        {"mesh_n", field(&C::mesh_n)},
        {"observation_mesh_n", field(&C::observation_mesh_n)},
        {"bc", field(&C::bc)},
        {"bc_d", field(&C::bc_d)},
        {"vortex_a1", field(&C::vortex_a1)},
        {"vortex_a2", field(&C::vortex_a2)},
        {"branch", field(&C::branch)},
        {"alpha_true", field(&C::alpha_true)},
        {"beta_true", field(&C::beta_true)},
        {"dimension", field(&C::dimension)},
        {"prior", field(&C::prior)},
        {"prior_center_alpha", field(&C::prior_center_alpha)},
        {"prior_center_beta", field(&C::prior_center_beta)},
        {"prior_sigma_alpha", field(&C::prior_sigma_alpha)},
        {"prior_sigma_beta", field(&C::prior_sigma_beta)},
        {"prior_rho", field(&C::prior_rho)},
        {"proposal_sigma_alpha", field(&C::proposal_sigma_alpha)},
        {"proposal_sigma_beta", field(&C::proposal_sigma_beta)},
        {"proposal_rho", field(&C::proposal_rho)},
        {"init_alpha", field(&C::init_alpha)},
        {"init_beta", field(&C::init_beta)},
        {"chain_length", field(&C::chain_length)},
        {"burn_in", field(&C::burn_in)},
        {"seed", field(&C::seed)},
        {"gamma_lags", field(&C::gamma_lags)},
        {"ci_level", field(&C::ci_level)},
        {"ks_period", field(&C::ks_period)},
        {"ks_step", field(&C::ks_step)},
        {"histogram_bins", field(&C::histogram_bins)},
        {"profile_lo", field(&C::profile_lo)},
        {"profile_hi", field(&C::profile_hi)},
        {"profile_points", field(&C::profile_points)},
        {"residual_tol", field(&C::residual_tol)},
        {"max_newton", field(&C::max_newton)},
        {"out_dir", field(&C::out_dir)},
    };
    return fields;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parses `key = value` lines; '#' starts a comment. Unknown keys are errors.
/// When the prior centre is not given it follows the true parameters.
inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    const auto& fields = detail::config_fields();
    bool center_a = false, center_b = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, "config line " + std::to_string(lineno) + ": expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == key; });
        require(it != fields.end(), "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            it->second.set(c, value);
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineno) + " (" + key + "): " + e.what());
        }
        center_a |= key == "prior_center_alpha";
        center_b |= key == "prior_center_beta";
    }
    if (!center_a) c.prior_center_alpha = c.alpha_true;
    if (!center_b) c.prior_center_beta = c.beta_true;
    return c;
}

inline std::string emit_config(const ExperimentConfig& c) {
    std::string out;
    for (const auto& [key, f] : detail::config_fields()) out += key + " = " + f.get(c) + "\n";
    return out;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// FNV-1a over the emitted config text.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : emit_config(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Stages for sub-seed derivation.
inline constexpr std::uint64_t kStageObservation = 1;
inline constexpr std::uint64_t kStageChain = 2;

}  // namespace ldg
