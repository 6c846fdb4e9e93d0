#include "commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace roughgron;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& leaf = "") {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const fs::path dir = fs::temp_directory_path() / "roughgron_cli_test" / info->name() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& file) {
    const std::string text = slurp(file);
    return text.substr(0, text.find('\n'));
}

void write_text(const fs::path& file, const std::string& text) { std::ofstream(file) << text; }

} // namespace

TEST(Cli, UsageAndExitCodes) {
    const Outcome none = invoke({});
    EXPECT_EQ(none.code, 2);
    EXPECT_NE(none.err.find("usage"), std::string::npos);
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({"lift", "--help"}).code, 0);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"run-all", "--suite", "nightly"}).code, 2);
    const Outcome missing = invoke({"lift", "--driver", "/nonexistent/path.csv"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("/nonexistent/path.csv"), std::string::npos);
}

TEST(Cli, LiftWritesRoughPathAndIsDeterministic) {
    const fs::path a = scratch("a"), b = scratch("b");
    const Outcome r = invoke({"lift", "--driver", "brownian:3,64,2", "--output", a.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("max relative Chen defect"), std::string::npos);
    EXPECT_EQ(first_line(a / "rough_path.csv"), "s,t,X1_1,X1_2,X2_11,X2_12,X2_21,X2_22");
    ASSERT_EQ(invoke({"lift", "--driver", "brownian:3,64,2", "--output", b.string()}).code, 0);
    EXPECT_EQ(slurp(a / "rough_path.csv"), slurp(b / "rough_path.csv"));

    std::ifstream is(a / "rough_path.csv");
    EXPECT_EQ(csv::read_rough_path(is, 2.5).size(), 65u);
}

TEST(Cli, LiftFromPathCsv) {
    const fs::path dir = scratch();
    write_text(dir / "path.csv", "t,x_1\n0,0\n0.5,1\n1,0\n");
    ASSERT_EQ(invoke({"lift", "--driver", (dir / "path.csv").string(), "--all-pairs", "--output", dir.string()}).code, 0);
    std::ifstream is(dir / "rough_path.csv");
    const csv::Table t = csv::read_table(is);
    ASSERT_EQ(t.rows.size(), 3u);
    // one-dimensional lifts carry half the squared increment
    EXPECT_EQ(t.rows[0][3], 0.5);
    EXPECT_EQ(t.rows[1][2], 0.0);
    EXPECT_EQ(t.rows[1][3], 0.0);
    EXPECT_EQ(t.rows[2][2], -1.0);
}

TEST(Cli, PvarOfTent) {
    const fs::path dir = scratch();
    write_text(dir / "tent.csv", "t,x_1\n0,0\n0.5,1\n1,0\n");
    const Outcome r = invoke({"pvar", "--input", (dir / "tent.csv").string(), "--p", "2", "--table", "--output", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "pvar " + csv::format_number(std::sqrt(2.0)) + "\n");
    EXPECT_EQ(first_line(dir / "pvar_control.csv"), "s,t,omega");
    EXPECT_EQ(invoke({"pvar", "--input", (dir / "tent.csv").string(), "--p", "0.5"}).code, 2);
}

TEST(Cli, GronwallCheckPassAndFail) {
    const fs::path dir = scratch();
    write_text(dir / "g_const.csv", "t,G\n0,1\n0.5,1\n1,1\n");
    write_text(dir / "omega.csv", "s,t,omega\n0,0.5,0.5\n0,1,1\n0.5,1,0.5\n");
    const Outcome ok = invoke({"gronwall-check", "--g", (dir / "g_const.csv").string(), "--omega1", (dir / "omega.csv").string(),
                               "--C", "1", "--L", "1", "--kappa", "1", "--output", dir.string()});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(ok.out.rfind("PASS", 0), 0u) << ok.out;
    EXPECT_NE(slurp(dir / "certificate.txt").find("applicable"), std::string::npos);

    // a jump the hypothesis cannot absorb
    write_text(dir / "g_jump.csv", "t,G\n0,1\n0.5,1\n1,50\n");
    const Outcome bad = invoke({"gronwall-check", "--g", (dir / "g_jump.csv").string(), "--omega1", (dir / "omega.csv").string(),
                                "--C", "1", "--L", "1", "--kappa", "1", "--output", dir.string()});
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(bad.out.rfind("FAIL", 0), 0u) << bad.out;

    write_text(dir / "omega_short.csv", "s,t,omega\n0,0.5,0.5\n");
    EXPECT_EQ(invoke({"gronwall-check", "--g", (dir / "g_const.csv").string(), "--omega1",
                      (dir / "omega_short.csv").string(), "--C", "1", "--L", "1", "--kappa", "1"})
                  .code,
              2);
}

TEST(Cli, GronwallCheckWithPvarControl) {
    const fs::path dir = scratch();
    write_text(dir / "g.csv", "t,G\n0,1\n0.5,1\n1,1\n");
    write_text(dir / "x.csv", "t,x_1\n0,0\n0.5,0.3\n1,0.1\n");
    const Outcome r = invoke({"gronwall-check", "--g", (dir / "g.csv").string(), "--omega1",
                              "pvar:" + (dir / "x.csv").string() + ":2:3", "--C", "1", "--L", "1", "--kappa", "1",
                              "--output", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, SolveRdeOutputs) {
    const fs::path dir = scratch();
    const Outcome r = invoke({"solve-rde", "--driver", "brownian:5,128,1", "--field", "sin", "--depth", "4", "--output", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(dir / "trajectory.csv"), "t,y_1");
    EXPECT_EQ(first_line(dir / "scaling.csv"), "depth,sup_ratio");
    std::ifstream is(dir / "trajectory.csv");
    EXPECT_EQ(csv::read_table(is).rows.size(), 129u);

    write_text(dir / "huge.csv", "t,x_1\n0,0\n1,1e200\n");
    const Outcome blow = invoke({"solve-rde", "--driver", (dir / "huge.csv").string(), "--field", "linear", "--output", dir.string()});
    EXPECT_EQ(blow.code, 1);
    EXPECT_NE(blow.out.find("truncated"), std::string::npos);
}

TEST(Cli, SolveRdeCustomTable) {
    const fs::path dir = scratch();
    write_text(dir / "f.csv", "y,f\n-5,1\n0,0.5\n5,1\n");
    const Outcome r = invoke({"solve-rde", "--driver", "brownian:2,64,1", "--field", "custom-table", "--table",
                              (dir / "f.csv").string(), "--output", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(invoke({"solve-rde", "--driver", "brownian:2,64,1", "--field", "custom-table"}).code, 2);
}

TEST(Cli, SolveReflectedSchemes) {
    const fs::path dir = scratch();
    const Outcome proj = invoke({"solve-reflected", "--driver", "brownian:7,256,1", "--field", "constant", "--y0", "0.2",
                                 "--output", dir.string()});
    ASSERT_EQ(proj.code, 0) << proj.err;
    EXPECT_EQ(first_line(dir / "trajectory.csv"), "t,y,m");
    std::ifstream is(dir / "trajectory.csv");
    for (const auto& row : csv::read_table(is).rows) {
        EXPECT_GE(row[1], 0.0);
    }
    const Outcome pen = invoke({"solve-reflected", "--driver", "brownian:7,256,1", "--field", "constant", "--y0", "0.2",
                                "--scheme", "penalized", "--output", dir.string()});
    EXPECT_EQ(pen.code, 0) << pen.err;
    EXPECT_NE(pen.out.find("epsilon = 0.0625"), std::string::npos) << pen.out;
    EXPECT_EQ(invoke({"solve-reflected", "--driver", "brownian:7,256,1", "--y0", "-1"}).code, 2);
}

TEST(Cli, UniquenessProbe) {
    const fs::path dir = scratch();
    const Outcome flat = invoke({"uniqueness-probe", "--driver", "brownian:1,64,1", "--field", "constant", "--field-param", "0",
                                 "--strides", "4,2,1", "--output", dir.string()});
    EXPECT_EQ(first_line(dir / "probe.csv"), "h,sup_distance");
    EXPECT_EQ(flat.code, 0);
    // additive noise pushes both schemes to the boundary, where they differ by about sqrt(h)
    const Outcome pushed = invoke({"uniqueness-probe", "--driver", "brownian:1,256,1", "--field", "constant", "--y0", "0.2",
                                   "--strides", "4,2,1", "--output", dir.string()});
    EXPECT_EQ(pushed.code, 1) << pushed.out;
    EXPECT_EQ(invoke({"uniqueness-probe", "--driver", "brownian:1,64,1", "--strides", "4,0"}).code, 2);
}

TEST(Cli, SolveHeatAndEnergyCheck) {
    const fs::path a = scratch("a"), b = scratch("b");
    const std::vector<std::string> base{"--nx", "32", "--T", "0.01", "--V", "0.5", "--driver", "brownian:4"};
    auto with = [&](std::string sub, const fs::path& dir) {
        std::vector<std::string> args{std::move(sub)};
        args.insert(args.end(), base.begin(), base.end());
        args.push_back("--output");
        args.push_back(dir.string());
        return args;
    };
    const Outcome heat = invoke(with("solve-heat", a));
    ASSERT_EQ(heat.code, 0) << heat.err;
    EXPECT_EQ(first_line(a / "energy.csv"), "t,G");
    EXPECT_EQ(first_line(a / "snapshots.csv").substr(0, 10), "t,u_1,u_2,");
    ASSERT_EQ(invoke(with("solve-heat", b)).code, 0);
    EXPECT_EQ(slurp(a / "energy.csv"), slurp(b / "energy.csv"));
    EXPECT_EQ(slurp(a / "snapshots.csv"), slurp(b / "snapshots.csv"));

    const Outcome energy = invoke(with("energy-check", a));
    EXPECT_EQ(energy.code, 0) << energy.out << energy.err;
    EXPECT_NE(energy.out.find("certificate {"), std::string::npos);
    EXPECT_NE(slurp(a / "certificate.txt").find("greedy_intervals"), std::string::npos);
}

TEST(Cli, HeatRefusesCflViolation) {
    const fs::path dir = scratch();
    const Outcome r = invoke({"solve-heat", "--nx", "64", "--dt", "0.001", "--T", "0.01", "--output", dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(invoke({"solve-heat", "--nx", "64", "--nu", "2"}).code, 2);
}

TEST(Cli, ConfigFileDrivesSubcommand) {
    const fs::path dir = scratch();
    write_text(dir / "lift.ini", "driver = brownian:3,16,1\noutput = " + dir.string() + "\n");
    EXPECT_EQ(invoke({"lift", "--config", (dir / "lift.ini").string()}).code, 0);
    EXPECT_TRUE(fs::exists(dir / "rough_path.csv"));
    write_text(dir / "bad.ini", "driver = brownian:3,16,1\nstep = 2\n");
    const Outcome bad = invoke({"lift", "--config", (dir / "bad.ini").string()});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("valid keys"), std::string::npos);
}

TEST(Mutation, AlteredSuiteOutputIsCaught) {
    experiments::SuiteFiles first{{"summary.csv", "id,name\n1,x\n"}, {"criterion_1_x.csv", "a\n0.5\n"}};
    EXPECT_TRUE(experiments::determinism(first, first).passed);
    experiments::SuiteFiles flipped = first;
    flipped["criterion_1_x.csv"] = "a\n0.6\n";
    EXPECT_FALSE(experiments::determinism(first, flipped).passed);
    flipped = first;
    flipped.erase("summary.csv");
    EXPECT_FALSE(experiments::determinism(first, flipped).passed);
}

TEST(Mutation, CorruptedConstantsFailChecks) {
    const fs::path dir = scratch();
    write_text(dir / "g.csv", "t,G\n0,1\n0.5,1\n1,1\n");
    write_text(dir / "omega.csv", "s,t,omega\n0,0.5,0.5\n0,1,1\n0.5,1,0.5\n");
    const std::vector<std::string> good{"gronwall-check", "--g", (dir / "g.csv").string(), "--omega1",
                                        (dir / "omega.csv").string(), "--C", "1", "--L", "1", "--kappa", "1",
                                        "--output", dir.string()};
    ASSERT_EQ(invoke(good).code, 0);
    // the same run against a G whose constant value was overwritten midway
    write_text(dir / "g.csv", "t,G\n0,1\n0.5,1e6\n1,1\n");
    EXPECT_EQ(invoke(good).code, 1);

    // one level-2 entry nudged on one step breaks geometricity
    const auto [path, rp] = brownian_sample_lift(3, 8, 2, 1.0, 2.5);
    std::stringstream ss;
    csv::write_rough_path(ss, rp);
    csv::Table t = csv::read_table(ss);
    t.rows[3][5] += 1e-3;
    std::istringstream back(experiments::table_text(t));
    const RoughPath mutated = csv::read_rough_path(back, 2.5);
    double worst = 0.0;
    for (std::size_t k = 1; k < mutated.size(); ++k) {
        worst = std::max(worst, geometricity_defect_at(mutated, 0, k) / geometricity_scale(mutated, 0, k));
    }
    EXPECT_GT(worst, 1e-6);
}
