#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ldg/ldg.hpp"

namespace {

enum Exit : int { kOk = 0, kValidation = 2, kSolver = 3, kTolerance = 4 };

struct Common {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_common(CLI::App* cmd, Common& o) {
    cmd->add_option("--config", o.config_path, "experiment config file (key = value)");
    cmd->add_option("--preset", o.preset, "embedded preset, e.g. table2-up, table5-r4-gp, fig14-a1");
    cmd->add_option("--seed", o.seed, "root seed; overrides the config");
    cmd->add_option("--out", o.out, "output directory; overrides the config");
}

ldg::ExperimentConfig resolve(const Common& o) {
    if (!o.config_path.empty() && !o.preset.empty()) {
        throw ldg::ValidationError("use either --config or --preset, not both");
    }
    ldg::ExperimentConfig c;
    if (!o.config_path.empty()) {
        c = ldg::load_config(o.config_path);
    } else if (!o.preset.empty()) {
        c = ldg::find_preset(o.preset).config;
    }
    if (o.seed) c.seed = *o.seed;
    if (!o.out.empty()) c.out_dir = o.out;
    c.validate();
    return c;
}

void log_line(const std::string& s) { std::cerr << "[ldgbayes] " << s << std::endl; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian identification of reduced Landau-de Gennes parameters"};
    app.require_subcommand(1);

    Common gen_o, sample_o, profile_o, stats_o, repro_o;
    std::string chain_path;
    std::string target;

    auto* gen = app.add_subcommand("generate", "solve at the true parameters and write the observation");
    add_common(gen, gen_o);
    auto* sample = app.add_subcommand("sample", "run the sampler and write chain, stats, KS table and histograms");
    add_common(sample, sample_o);
    auto* profile = app.add_subcommand("profile", "scan the likelihood along alpha and classify identifiability");
    add_common(profile, profile_o);
    auto* stats = app.add_subcommand("stats", "recompute statistics for an existing chain CSV");
    add_common(stats, stats_o);
    stats->add_option("--chain", chain_path, "chain CSV (default: <out>/chain.csv)");
    auto* repro = app.add_subcommand("reproduce", "rerun a table or figure and compare with the published numbers");
    repro->add_option("target", target, "table2 | table3 | table4 | table5 | fig5 | fig14")->required();
    repro->add_option("--seed", repro_o.seed, "root seed for every preset in the bundle");
    repro->add_option("--out", repro_o.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*gen) {
            const auto c = resolve(gen_o);
            auto g = ldg::generate_observation(c);
            ldg::write_observation(g, c, c.out_dir);
            ldg::write_text(std::filesystem::path(c.out_dir) / "config.txt", ldg::emit_config(c));
            std::cout << "observation written to " << c.out_dir << " (" << g.report.iterations << " Newton iterations, "
                      << ldg::to_string(g.report.branch_class) << ")\n";
        } else if (*sample) {
            const auto c = resolve(sample_o);
            const auto obs = ldg::obtain_observation(c, c.out_dir, log_line);
            const auto r = ldg::run_sampling(c, obs);
            ldg::write_sample_outputs(c, r, c.out_dir);
            std::cout << ldg::stats_json(c, r).dump(2) << "\n";
        } else if (*profile) {
            const auto c = resolve(profile_o);
            const auto obs = ldg::obtain_observation(c, c.out_dir, log_line);
            const auto r = ldg::run_profile(c, obs);
            ldg::write_profile_outputs(c, r, c.out_dir);
            std::cout << "flatness ratio " << r.curve.flatness_ratio << ", verdict " << ldg::to_string(r.verdict)
                      << "\n";
        } else if (*stats) {
            const auto c = resolve(stats_o);
            const auto path = chain_path.empty() ? (std::filesystem::path(c.out_dir) / "chain.csv").string() : chain_path;
            auto chain = ldg::read_chain_csv(path);
            const auto r = ldg::stats_from_chain(c, std::move(chain));
            ldg::write_stats_outputs(c, r, c.out_dir);
            std::cout << ldg::stats_json(c, r).dump(2) << "\n";
        } else if (*repro) {
            ldg::ReproduceOptions o;
            o.out_dir = repro_o.out.empty() ? std::filesystem::path("out") / target : std::filesystem::path(repro_o.out);
            o.seed = repro_o.seed;
            o.log = log_line;
            const auto rep = ldg::reproduce(target, o);
            ldg::print_report(rep, std::cout);
            return rep.passed() ? kOk : kTolerance;
        }
    } catch (const ldg::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ldg::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    } catch (const ldg::BranchMismatch& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
