#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               fmt::format("beliefnet_cli_{}_{}", ::testing::UnitTest::GetInstance()->current_test_info()->name(),
                           ::getpid());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Outcome run(const std::string& args) const {
        const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const auto cmd = fmt::format("cd '{}' && '{}' {} > '{}' 2> '{}'", dir_.string(),
                                     BELIEFNET_BINARY, args, out.string(), err.string());
        const int raw = std::system(cmd.c_str());
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, MarkovPrintsStatesAndMatrix) {
    const auto r = run("markov --scenario 1 --alpha 1.5 --beta 1");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("5 states:"), std::string::npos);
    EXPECT_NE(r.out.find("2u+3v"), std::string::npos);
    EXPECT_NE(r.out.find("3u+2v"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "markov_manifest.ini"));
    EXPECT_EQ(slurp(dir_ / "markov_curve.csv").substr(0, 11), "m,u,v,flip\n");

    const auto r2 = run("markov --scenario 2 --export-m 20");
    ASSERT_EQ(r2.status, 0) << r2.err;
    EXPECT_NE(r2.out.find("20 states:"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "markov_matrix.csv"));
}

TEST_F(Cli, SimulateZeroStepsWritesEmptyTrajectory) {
    const auto r = run("simulate --graph star --n 2 --steps 0");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(slurp(dir_ / "trajectory.csv"), "step,adoption_fraction\n");
    EXPECT_NE(slurp(dir_ / "simulate_manifest.ini").find("steps = 0"), std::string::npos);
}

TEST_F(Cli, SimulateTwoCommunityExportsGraph) {
    const auto r = run("simulate --graph two-community --n 30 --m-edges 60 --steps 300 "
                       "--snapshot-every 100 --export-graph true --out-dir out");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto traj = slurp(dir_ / "out" / "trajectory.csv");
    EXPECT_EQ(traj.substr(0, traj.find('\n')), "step,adoption_fraction,belief_0,belief_1,belief_2");
    EXPECT_EQ(std::count(traj.begin(), traj.end(), '\n'), 4);
    EXPECT_EQ(slurp(dir_ / "out" / "graph.edges").substr(0, 11), "# nodes 30\n");
}

TEST_F(Cli, Fig2WritesSchemaAndReplaysFromManifest) {
    const auto r = run("fig2 --scenario 2 --n 6 --runs 2 --repeats 2 --steps 200 --out-dir a");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto csv = slurp(dir_ / "a" / "fig2.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "scenario,variant,m,mean_flip,std_flip,analytical");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);

    const auto replay = run("fig2 --config a/fig2_manifest.ini --workers 2 --out-dir b");
    ASSERT_EQ(replay.status, 0) << replay.err;
    EXPECT_EQ(slurp(dir_ / "b" / "fig2.csv"), csv);
}

TEST_F(Cli, Fig4WritesBothTables) {
    const auto r = run("fig4 --n 20 --m-edges 40 --ensembles 1 --rho0-grid 0.1 --omega-grid 0.2,0.4 "
                       "--cross-rho0 0.1 --budget-per-node 20 --window-per-node 5");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto phase = slurp(dir_ / "fig4_phase.csv");
    const auto cross = slurp(dir_ / "fig4_cross.csv");
    EXPECT_EQ(phase.substr(0, phase.find('\n')), "rho0,omega,rho_inf_mean,rho_inf_stderr,phase");
    EXPECT_EQ(std::count(phase.begin(), phase.end(), '\n'), 3);
    EXPECT_EQ(cross.substr(0, cross.find('\n')), "rho0,omega,rho_inf_mean,rho_inf_stderr,phase");
}

TEST_F(Cli, ExitStatusDistinguishesConfigErrors) {
    auto r = run("fig2 --alpha -1");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;

    r = run("simulate --graph star --n 5 --m 9");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("m:"), std::string::npos) << r.err;

    r = run("frobnicate");
    EXPECT_EQ(r.status, 1);
    r = run("fig2 --no-such-flag 3");
    EXPECT_EQ(r.status, 1);
    r = run("fig2 --config missing.ini");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos) << r.err;

    r = run("--help");
    EXPECT_EQ(r.status, 0);
}

TEST_F(Cli, RuntimeFailureExitsTwo) {
    // The output directory path is an existing regular file.
    std::ofstream(dir_ / "blocker") << "x";
    const auto r = run("markov --out-dir blocker");
    EXPECT_EQ(r.status, 2) << r.err;
}
