#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(LDGBAYES_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const auto dir = fs::temp_directory_path() / ("ldg_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.txt") << body << "out_dir = " << (dir / "out").string() << "\n";
    return dir;
}

const char* kSmall =
    "mesh_n = 8\nalpha_true = 0.02\nproposal_sigma_alpha = 0.004\ninit_alpha = 0.025\n"
    "chain_length = 400\nburn_in = 100\nks_period = 100\nprofile_points = 5\n";

}  // namespace

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("sample --preset no-such-preset"), 2);
    EXPECT_EQ(run("sample --config /nonexistent.txt"), 2);
    EXPECT_EQ(run("reproduce table9"), 2);
    const auto dir = write_config("both", kSmall);
    EXPECT_EQ(run("sample --preset table2-up --config " + (dir / "config.txt").string()), 2);
    const auto bad = write_config("bad", "alpha_true = -3\n");
    EXPECT_EQ(run("generate --config " + (bad / "config.txt").string()), 2);
    fs::remove_all(dir);
    fs::remove_all(bad);
}

TEST(Cli, HelpExitsWithZero) { EXPECT_EQ(run("--help"), 0); }

TEST(Cli, SolverFailureExitsWithThree) {
    const auto dir = write_config("solver", std::string(kSmall) + "max_newton = 1\n");
    EXPECT_EQ(run("generate --config " + (dir / "config.txt").string()), 3);
    const auto mismatch = write_config("mismatch", "mesh_n = 8\nalpha_true = 10\n");
    EXPECT_EQ(run("generate --config " + (mismatch / "config.txt").string()), 3);
    fs::remove_all(dir);
    fs::remove_all(mismatch);
}

TEST(Cli, GenerateSampleStatsProfile) {
    const auto dir = write_config("ok", kSmall);
    const auto cfg = (dir / "config.txt").string();
    const auto out = dir / "out";
    EXPECT_EQ(run("generate --config " + cfg), 0);
    EXPECT_TRUE(fs::exists(out / "observation.csv"));
    EXPECT_EQ(run("sample --config " + cfg + " --seed 7"), 0);
    EXPECT_TRUE(fs::exists(out / "chain.csv"));
    EXPECT_TRUE(fs::exists(out / "stats.json"));
    fs::remove(out / "stats.json");
    EXPECT_EQ(run("stats --config " + cfg), 0);
    EXPECT_TRUE(fs::exists(out / "stats.json"));
    EXPECT_EQ(run("profile --config " + cfg), 0);
    EXPECT_TRUE(fs::exists(out / "profile.csv"));

    const auto other = dir / "other";
    EXPECT_EQ(run("sample --config " + cfg + " --out " + other.string()), 0);
    EXPECT_TRUE(fs::exists(other / "chain.csv"));
    fs::remove_all(dir);
}
