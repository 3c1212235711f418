#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ldg/bayes.hpp"
#include "ldg/chain_stats.hpp"
#include "ldg/config.hpp"
#include "ldg/forward.hpp"
#include "ldg/mcmc.hpp"
#include "ldg/presets.hpp"

namespace ldg {

namespace fs = std::filesystem;
using nlohmann::json;

class BranchMismatch : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Optional progress sink; receives one line per pipeline stage.
using Logger = std::function<void(const std::string&)>;

inline json to_json(const SolveReport& r) {
    json j{{"converged", r.converged},
           {"iterations", r.iterations},
           {"residual_history", r.residual_history},
           {"branch_class", to_string(r.branch_class)},
           {"branch_mismatch", r.branch_mismatch}};
    if (r.failure) {
        j["failure"] = *r.failure == SolverError::Kind::NonConvergence ? "non-convergence" : "singular-linear-solve";
    }
    return j;
}

inline json provenance_json(const ExperimentConfig& c) {
    return {{"config_hash", hex64(config_hash(c))}, {"seed", c.seed}, {"artifact_version", kArtifactVersion},
            {"preset", c.name}};
}

inline void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open " + path.string() + " for writing");
    out << text;
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// -----------------------------------------------------------------------------
// Observation
// -----------------------------------------------------------------------------

struct GeneratedObservation {
    Observation observation;
    SolveReport report;
};

inline std::shared_ptr<const Mesh> inversion_mesh(const ExperimentConfig& c) {
    return std::make_shared<const Mesh>(build_unit_square_mesh(c.mesh_n));
}

/// Restricts a field on the refined structured mesh to the coincident nodes of `coarse`.
inline QField restrict_to(const QField& fine, std::shared_ptr<const Mesh> coarse) {
    const int nf = fine.mesh->structured_n();
    const int nc = coarse->structured_n();
    require(nf > 0 && nc > 0 && nf % nc == 0, "restrict_to: meshes must be nested structured meshes");
    const int r = nf / nc;
    QField out(coarse);
    for (int j = 0; j <= nc; ++j) {
        for (int i = 0; i <= nc; ++i) {
            out.set(j * (nc + 1) + i, fine.at((j * r) * (nf + 1) + i * r));
        }
    }
    return out;
}

/// Solves the forward problem at the true parameters. Throws SolverError when
/// Newton fails and BranchMismatch when the solution lands on another branch.
inline GeneratedObservation generate_observation(const ExperimentConfig& c) {
    c.validate();
    const int n_obs = c.observation_mesh_n > 0 ? c.observation_mesh_n : c.mesh_n;
    auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(n_obs));
    const auto bc = c.bc_spec();
    DiscreteProblem problem(mesh, bc);
    const auto seed = c.bc == "vortex" ? BranchSeed::from_field(vortex_extension_seed(mesh, bc))
                                       : BranchSeed::named(branch_kind_from_string(c.branch));
    auto report = solve_branch(problem, seed, {c.alpha_true, c.beta_true}, c.solver_config());
    if (!report.converged) {
        throw SolverError(report.failure.value_or(SolverError::Kind::NonConvergence),
                          "observation solve failed for " + c.branch + " at alpha=" + fmt(c.alpha_true) +
                              ", beta=" + fmt(c.beta_true));
    }
    if (report.branch_mismatch) {
        throw BranchMismatch("seed " + c.branch + " converged to a " + to_string(report.branch_class) + " solution");
    }
    Observation obs;
    obs.field = n_obs == c.mesh_n ? report.solution : restrict_to(report.solution, inversion_mesh(c));
    obs.provenance = Provenance{c.alpha_true, c.beta_true, c.branch, c.mesh_n, derive_seed(c.seed, kStageObservation)};
    return {std::move(obs), std::move(report)};
}

inline json to_json(const Provenance& p) {
    return {{"alpha_true", p.alpha_true}, {"beta_true", p.beta_true}, {"branch", p.branch},
            {"mesh_n", p.mesh_n},         {"seed", p.seed}};
}

inline void write_observation(const GeneratedObservation& g, const ExperimentConfig& c, const fs::path& dir) {
    fs::create_directories(dir);
    write_qfield_csv(g.observation.field, (dir / "observation.csv").string());
    json j = to_json(*g.observation.provenance);
    j["solve_report"] = to_json(g.report);
    j["provenance"] = provenance_json(c);
    write_json(dir / "observation.json", j);
    write_mesh_csv(*g.observation.field.mesh, (dir / "mesh_nodes.csv").string(), (dir / "mesh_triangles.csv").string());
}

/// Reads observation.csv (and observation.json when present) onto the config's mesh.
inline Observation read_observation(const ExperimentConfig& c, const fs::path& dir) {
    Observation obs;
    obs.field = read_qfield_csv((dir / "observation.csv").string(), inversion_mesh(c));
    if (fs::exists(dir / "observation.json")) {
        std::ifstream in(dir / "observation.json");
        const auto j = json::parse(in);
        obs.provenance = Provenance{j.at("alpha_true").get<double>(), j.at("beta_true").get<double>(),
                                    j.at("branch").get<std::string>(), j.at("mesh_n").get<int>(),
                                    j.at("seed").get<std::uint64_t>()};
    }
    return obs;
}

/// Uses the observation in `dir` if one exists, otherwise generates and writes it.
inline Observation obtain_observation(const ExperimentConfig& c, const fs::path& dir, const Logger& log = {}) {
    if (fs::exists(dir / "observation.csv")) {
        if (log) log("reading observation from " + (dir / "observation.csv").string());
        return read_observation(c, dir);
    }
    if (log) log("generating observation (" + c.branch + ", alpha*=" + fmt(c.alpha_true) + ")");
    auto g = generate_observation(c);
    write_observation(g, c, dir);
    return std::move(g.observation);
}

// -----------------------------------------------------------------------------
// Sampling
// -----------------------------------------------------------------------------

struct SampleResult {
    Chain chain;
    Chain segment;
    ChainStats stats;
    std::vector<KsWindow> ks;
    ForwardModel::Diagnostics forward;
    std::uint64_t chain_seed = 0;
};

inline SampleResult run_sampling(const ExperimentConfig& c, const Observation& obs) {
    c.validate();
    require(obs.field.mesh->structured_n() == c.mesh_n, "observation mesh does not match mesh_n");
    ForwardModel forward(obs.field.mesh, c.bc_spec(), obs.field, c.dimension, c.beta_true, c.solver_config());
    Posterior posterior(c.prior_spec(), obs, forward);

    SampleResult r;
    r.chain_seed = derive_seed(c.seed, kStageChain);
    r.chain = run_chain(posterior, c.init_point(), c.chain_length, c.proposal_spec(), r.chain_seed,
                        [&] { posterior.accepted(); });
    r.chain.target = "posterior " + c.prior_spec().describe() + " prior, " + c.bc + " bc, branch " + c.branch +
                     ", alpha*=" + fmt(c.alpha_true) + ", beta*=" + fmt(c.beta_true) +
                     ", mesh n=" + std::to_string(c.mesh_n);
    r.segment = discard_burn_in(r.chain, static_cast<std::size_t>(c.burn_in));
    r.stats = chain_stats(r.segment, c.gamma_lags, c.ci_level);
    r.stats.acceptance = acceptance_rate(r.chain);
    const auto alpha = r.segment.coordinate(0);
    if (alpha.size() >= 2 * static_cast<std::size_t>(c.ks_period)) {
        r.ks = ks_stationarity(alpha, static_cast<std::size_t>(c.ks_period), static_cast<std::size_t>(c.ks_step));
    }
    r.forward = forward.diagnostics();
    return r;
}

inline json stats_json(const ExperimentConfig& c, const SampleResult& r) {
    json j = to_json(r.stats);
    j["ks"] = {{"windows", r.ks.size()}, {"passed", ks_pass_count(r.ks)}};
    j["forward"] = {{"solves", r.forward.solves},
                    {"failures", r.forward.failures},
                    {"fallbacks", r.forward.fallbacks},
                    {"branch_restarts", r.forward.branch_restarts},
                    {"newton_iterations", r.forward.newton_iterations}};
    j["chain_seed"] = r.chain_seed;
    j["provenance"] = provenance_json(c);
    return j;
}

/// Stats JSON, KS table and histogram CSVs for a chain segment.
inline void write_stats_outputs(const ExperimentConfig& c, const SampleResult& r, const fs::path& dir) {
    fs::create_directories(dir);
    write_json(dir / "stats.json", stats_json(c, r));
    write_ks_csv(r.ks, (dir / "ks.csv").string());
    const auto alpha = r.segment.coordinate(0);
    const auto bins = static_cast<std::size_t>(c.histogram_bins);
    write_histogram_csv(histogram(alpha, bins), (dir / "hist_alpha.csv").string());
    if (r.segment.dimension() == 2) {
        const auto beta = r.segment.coordinate(1);
        write_histogram_csv(histogram(beta, bins), (dir / "hist_beta.csv").string());
        write_histogram_csv(bivariate_histogram(alpha, beta, bins), (dir / "hist_alpha_beta.csv").string());
    }
}

inline void write_sample_outputs(const ExperimentConfig& c, const SampleResult& r, const fs::path& dir) {
    fs::create_directories(dir);
    write_chain(r.chain, (dir / "chain.csv").string(), (dir / "chain.json").string());
    write_stats_outputs(c, r, dir);
    write_text(dir / "config.txt", emit_config(c));
}

/// Recomputes statistics for a chain read back from disk.
inline SampleResult stats_from_chain(const ExperimentConfig& c, Chain chain) {
    SampleResult r;
    r.chain = std::move(chain);
    r.segment = discard_burn_in(r.chain, static_cast<std::size_t>(c.burn_in));
    r.stats = chain_stats(r.segment, c.gamma_lags, c.ci_level);
    r.stats.acceptance = acceptance_rate(r.chain);
    const auto alpha = r.segment.coordinate(0);
    if (alpha.size() >= 2 * static_cast<std::size_t>(c.ks_period)) {
        r.ks = ks_stationarity(alpha, static_cast<std::size_t>(c.ks_period), static_cast<std::size_t>(c.ks_step));
    }
    return r;
}

// -----------------------------------------------------------------------------
// Profile
// -----------------------------------------------------------------------------

enum class Identifiability { Plateau, FatTail, Peaked };

inline std::string to_string(Identifiability v) {
    switch (v) {
        case Identifiability::Plateau: return "plateau";
        case Identifiability::FatTail: return "fat-tail";
        case Identifiability::Peaked: return "peaked";
    }
    return "?";
}

inline Identifiability identifiability_verdict(double flatness, const FigureRules& rules = figure_rules()) {
    if (flatness > rules.plateau_above) return Identifiability::Plateau;
    if (flatness < rules.peaked_below) return Identifiability::Peaked;
    return Identifiability::FatTail;
}

struct ProfileResult {
    ProfileCurve curve;
    Identifiability verdict = Identifiability::Peaked;
};

inline ProfileResult run_profile(const ExperimentConfig& c, const Observation& obs) {
    c.validate();
    ForwardModel forward(obs.field.mesh, c.bc_spec(), obs.field, 1, c.beta_true, c.solver_config());
    ProfileResult r;
    r.curve = profile_scan(obs, c.profile_grid(), forward);
    r.verdict = identifiability_verdict(r.curve.flatness_ratio);
    return r;
}

inline void write_profile_outputs(const ExperimentConfig& c, const ProfileResult& r, const fs::path& dir) {
    fs::create_directories(dir);
    std::string csv = "theta,normalized_likelihood\n";
    for (std::size_t i = 0; i < r.curve.grid.size(); ++i) {
        csv += format_double(r.curve.grid[i]) + "," + format_double(r.curve.normalized[i]) + "\n";
    }
    write_text(dir / "profile.csv", csv);
    write_json(dir / "profile.json", {{"flatness_ratio", r.curve.flatness_ratio},
                                      {"verdict", to_string(r.verdict)},
                                      {"peak", r.curve.grid[r.curve.peak_index]},
                                      {"left_tail", r.curve.left_tail},
                                      {"right_tail", r.curve.right_tail},
                                      {"provenance", provenance_json(c)}});
}

// -----------------------------------------------------------------------------
// Reproduction
// -----------------------------------------------------------------------------

struct Check {
    std::string name;
    double value = 0.0;
    std::string target;
    bool pass = false;
};

inline json to_json(const Check& c) {
    return {{"check", c.name}, {"value", c.value}, {"target", c.target}, {"pass", c.pass}};
}

struct ReproduceRow {
    std::string preset;
    std::string label;
    json ours;
    json published;
    std::vector<Check> checks;
};

struct ReproduceReport {
    std::string id;
    std::vector<ReproduceRow> rows;
    std::vector<Check> checks;  ///< bundle-level checks
    std::map<std::string, SampleResult> samples;
    std::map<std::string, ProfileResult> profiles;

    [[nodiscard]] bool passed() const {
        for (const auto& r : rows) {
            for (const auto& c : r.checks) {
                if (!c.pass) return false;
            }
        }
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

inline json published_json(const ReferenceRow& p) {
    json j = json::object();
    auto put = [&](const char* k, const std::optional<double>& v) {
        if (v) j[k] = *v;
    };
    put("mean_alpha", p.mean_alpha);
    put("median_alpha", p.median_alpha);
    put("std_alpha", p.std_alpha);
    put("mean_beta", p.mean_beta);
    put("median_beta", p.median_beta);
    put("correlation", p.correlation);
    put("acceptance", p.acceptance);
    return j;
}

inline json ours_json(const SampleResult& r) {
    json j{{"mean_alpha", r.stats.coords[0].mean},
           {"median_alpha", r.stats.coords[0].median},
           {"std_alpha", r.stats.coords[0].std},
           {"ci_alpha", {r.stats.coords[0].ci.lo, r.stats.coords[0].ci.hi}},
           {"acceptance", *r.stats.acceptance}};
    if (r.stats.coords.size() == 2) {
        j["mean_beta"] = r.stats.coords[1].mean;
        j["median_beta"] = r.stats.coords[1].median;
        j["std_beta"] = r.stats.coords[1].std;
        j["correlation"] = r.stats.rho_ab.value_or(0.0);
    }
    return j;
}

/// Applies a preset's tolerances to its sampled statistics.
inline std::vector<Check> evaluate_row(const Preset& p, const SampleResult& r,
                                       const std::map<std::string, SampleResult>& others) {
    std::vector<Check> out;
    const auto& c = p.config;
    const auto& a = r.stats.coords[0];
    const double rel_a = (a.mean - c.alpha_true) / c.alpha_true;
    if (p.tol.alpha_rel_err) {
        out.push_back({"alpha mean relative error", std::abs(rel_a), "<= " + fmt(*p.tol.alpha_rel_err),
                       std::abs(rel_a) <= *p.tol.alpha_rel_err});
    }
    if (p.tol.alpha_bias_max) {
        out.push_back({"alpha mean bias", rel_a, "in (0, " + fmt(*p.tol.alpha_bias_max) + "]",
                       rel_a > 0.0 && rel_a <= *p.tol.alpha_bias_max});
    }
    if (p.tol.alpha_in_ci) {
        out.push_back({"alpha* in CI", c.alpha_true, "[" + fmt(a.ci.lo) + ", " + fmt(a.ci.hi) + "]",
                       a.ci.contains(c.alpha_true)});
    }
    if (p.tol.beta_rel_err && r.stats.coords.size() == 2) {
        const double rel_b = std::abs(r.stats.coords[1].mean - c.beta_true) / c.beta_true;
        out.push_back({"beta mean relative error", rel_b, "<= " + fmt(*p.tol.beta_rel_err), rel_b <= *p.tol.beta_rel_err});
    }
    if ((p.tol.correlation_min || p.tol.correlation_max) && r.stats.rho_ab) {
        const double rho = *r.stats.rho_ab;
        const double lo = p.tol.correlation_min.value_or(-1.0);
        const double hi = p.tol.correlation_max.value_or(1.0);
        out.push_back({"correlation", rho, "in (" + fmt(lo) + ", " + fmt(hi) + ")", rho > lo && rho < hi});
    }
    if (p.tol.acceptance_abs && p.published.acceptance) {
        const double ar = *r.stats.acceptance;
        out.push_back({"acceptance rate", ar,
                       fmt(*p.published.acceptance) + " +- " + fmt(*p.tol.acceptance_abs),
                       std::abs(ar - *p.published.acceptance) <= *p.tol.acceptance_abs});
    }
    if (p.tol.std_below) {
        const auto it = others.find(*p.tol.std_below);
        if (it != others.end()) {
            const double ref = it->second.stats.coords[0].std;
            out.push_back({"alpha std below " + *p.tol.std_below, a.std, "< " + fmt(ref), a.std < ref});
        }
    }
    return out;
}

/// Central sample interval containing `level` of the segment.
inline std::pair<double, double> credible_interval(std::vector<double> x, double level) {
    require(!x.empty(), "credible_interval: empty sample");
    std::sort(x.begin(), x.end());
    const double tail = 0.5 * (1.0 - level);
    const auto idx = [&](double q) {
        return static_cast<std::size_t>(std::clamp(std::floor(q * static_cast<double>(x.size() - 1) + 0.5), 0.0,
                                                   static_cast<double>(x.size() - 1)));
    };
    return {x[idx(tail)], x[idx(1.0 - tail)]};
}

struct ReproduceOptions {
    fs::path out_dir = "out";
    std::optional<std::uint64_t> seed;  ///< overrides every preset's root seed
    Logger log;
};

namespace detail {

inline ExperimentConfig preset_config(const std::string& name, const ReproduceOptions& o) {
    ExperimentConfig c = find_preset(name).config;
    if (o.seed) c.seed = *o.seed;
    c.out_dir = (o.out_dir / name).string();
    return c;
}

inline SampleResult sample_preset(const ExperimentConfig& c, const ReproduceOptions& o) {
    const fs::path dir = c.out_dir;
    const auto obs = obtain_observation(c, dir, o.log);
    if (o.log) o.log("sampling " + c.name + " (" + std::to_string(c.chain_length) + " steps)");
    auto r = run_sampling(c, obs);
    write_sample_outputs(c, r, dir);
    if (o.log) {
        o.log(c.name + ": mean alpha " + fmt(r.stats.coords[0].mean) + ", acceptance " + fmt(*r.stats.acceptance));
    }
    return r;
}

inline void reproduce_table(const std::string& id, const ReproduceOptions& o, ReproduceReport& rep) {
    for (const auto& name : bundle_presets(id)) rep.samples.emplace(name, sample_preset(preset_config(name, o), o));
    for (const auto& name : bundle_presets(id)) {
        const auto& p = find_preset(name);
        const auto& r = rep.samples.at(name);
        rep.rows.push_back({name, p.label, ours_json(r), published_json(p.published), evaluate_row(p, r, rep.samples)});
    }
}

inline void reproduce_fig5(const ReproduceOptions& o, ReproduceReport& rep) {
    const auto c = preset_config("table2-up", o);
    const auto& r = rep.samples.emplace("table2-up", sample_preset(c, o)).first->second;
    const auto& rules = figure_rules();
    const auto alpha = r.segment.coordinate(0);
    const auto points = running_stats(alpha, default_checkpoints(alpha.size(), rules.checkpoint_step), c.gamma_lags,
                                      c.ci_level);
    write_running_csv(points, (o.out_dir / "running_stats.csv").string());

    double w_first = 0.0;
    std::size_t inside = 0;
    for (const auto& p : points) {
        if (p.n == rules.shrink_from) w_first = p.ci.width();
        inside += p.ci.contains(c.alpha_true) ? 1 : 0;
    }
    const double ratio = w_first / points.back().ci.width();
    rep.checks.push_back({"CI width ratio N=" + std::to_string(rules.shrink_from) + " / N=" +
                              std::to_string(points.back().n),
                          ratio, ">= " + fmt(rules.min_ci_shrink), ratio >= rules.min_ci_shrink});
    rep.checks.push_back({"checkpoints with alpha* in CI", static_cast<double>(inside),
                          "== " + std::to_string(points.size()), inside == points.size()});
}

inline void reproduce_fig14(const ReproduceOptions& o, ReproduceReport& rep) {
    const auto& rules = figure_rules();
    for (const auto& name : bundle_presets("fig14")) {
        const auto c = preset_config(name, o);
        const fs::path dir = c.out_dir;
        const auto obs = obtain_observation(c, dir, o.log);
        if (o.log) o.log("profile " + name);
        auto prof = run_profile(c, obs);
        write_profile_outputs(c, prof, dir);
        rep.profiles.emplace(name, prof);
        rep.samples.emplace(name, sample_preset(c, o));
    }

    const auto& p1 = rep.profiles.at("fig14-a1");
    const auto& p3 = rep.profiles.at("fig14-a001");
    rep.checks.push_back({"alpha*=1 profile flatness", p1.curve.flatness_ratio, "> " + fmt(rules.plateau_above),
                          p1.curve.flatness_ratio > rules.plateau_above});
    rep.checks.push_back({"alpha*=0.01 profile flatness", p3.curve.flatness_ratio, "< " + fmt(rules.peaked_below),
                          p3.curve.flatness_ratio < rules.peaked_below});

    const auto& c1 = rep.samples.at("fig14-a1");
    const auto a1 = find_preset("fig14-a1").config.alpha_true;
    const std::size_t fails = c1.ks.size() - ks_pass_count(c1.ks);
    const double width = c1.stats.coords[0].ci.width();
    const bool diverges = 2 * fails >= c1.ks.size() || width > a1;
    rep.checks.push_back({"alpha*=1 chain: KS windows failed", static_cast<double>(fails),
                          ">= half of " + std::to_string(c1.ks.size()) + " or CI width > alpha* (width " + fmt(width) +
                              ")",
                          diverges});

    const auto& c3 = rep.samples.at("fig14-a001");
    const auto a3 = find_preset("fig14-a001").config.alpha_true;
    const std::size_t passes = ks_pass_count(c3.ks);
    rep.checks.push_back({"alpha*=0.01 chain: KS windows passed", static_cast<double>(passes),
                          "> half of " + std::to_string(c3.ks.size()), 2 * passes > c3.ks.size()});
    const auto [lo, hi] = credible_interval(c3.segment.coordinate(0), rules.credible_level);
    rep.checks.push_back({"alpha*=0.01 chain brackets alpha*", a3,
                          "in central " + fmt(100 * rules.credible_level) + "% sample interval [" + fmt(lo) + ", " +
                              fmt(hi) + "]",
                          lo <= a3 && a3 <= hi});
}

}  // namespace detail

inline json to_json(const ReproduceReport& r, const ReproduceOptions& o) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json checks = json::array();
        for (const auto& c : row.checks) checks.push_back(to_json(c));
        rows.push_back({{"preset", row.preset}, {"label", row.label}, {"ours", row.ours}, {"published", row.published},
                        {"checks", checks}});
    }
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    json prov = json::object();
    for (const auto& [name, s] : r.samples) {
        auto c = detail::preset_config(name, o);
        prov[name] = provenance_json(c);
    }
    for (const auto& [name, s] : r.profiles) prov[name] = provenance_json(detail::preset_config(name, o));
    json j{{"id", r.id}, {"rows", rows}, {"checks", checks}, {"passed", r.passed()}, {"provenance", prov}};
    j["notes"] = "Gaussian priors are centred at the true parameters (alpha*, beta*).";
    return j;
}

/// Runs a table or figure bundle, writes comparison.json and returns the report.
inline ReproduceReport reproduce(const std::string& id, const ReproduceOptions& o) {
    bundle_presets(id);
    ReproduceReport rep;
    rep.id = id;
    fs::create_directories(o.out_dir);
    if (id == "fig5") {
        detail::reproduce_fig5(o, rep);
    } else if (id == "fig14") {
        detail::reproduce_fig14(o, rep);
    } else {
        detail::reproduce_table(id, o, rep);
    }
    write_json(o.out_dir / "comparison.json", to_json(rep, o));
    return rep;
}

inline void print_report(const ReproduceReport& r, std::ostream& os) {
    os << "== " << r.id << " ==\n";
    for (const auto& row : r.rows) {
        os << row.preset << " (" << row.label << ")\n";
        os << "  ours     : " << row.ours.dump() << "\n";
        os << "  published: " << row.published.dump() << "\n";
        for (const auto& c : row.checks) {
            os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " = " << fmt(c.value) << " (" << c.target
               << ")\n";
        }
    }
    for (const auto& c : r.checks) {
        os << "[" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " = " << fmt(c.value) << " (" << c.target << ")\n";
    }
    os << (r.passed() ? "all checks passed" : "some checks failed") << "\n";
}

}  // namespace ldg
