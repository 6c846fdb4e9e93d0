#include "roughgron/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace roughgron;

namespace {

std::filesystem::path scratch_file(const std::string& body) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const auto dir = std::filesystem::temp_directory_path() / "roughgron_config_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / (std::string(info->name()) + ".ini");
    std::ofstream(file) << body;
    return file;
}

ExperimentConfig parse(std::vector<std::string> args) { return parse_config(args); }

std::string error_of(std::vector<std::string> args) {
    try {
        parse_config(args);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Config, FileValuesAreRead) {
    const auto file = scratch_file("driver = brownian:3,64,1\np = 2.5\nall-pairs = true\nseed = 9\n");
    const ExperimentConfig cfg = parse({"lift", "--config", file.string()});
    EXPECT_EQ(cfg.subcommand, "lift");
    EXPECT_EQ(cfg.real("p"), 2.5);
    EXPECT_EQ(cfg.text("driver"), "brownian:3,64,1");
    EXPECT_TRUE(cfg.flag("all-pairs"));
    EXPECT_EQ(cfg.seed, 9u);
}

TEST(Config, ExponentOutsideRangeRejected) {
    const auto file = scratch_file("driver = brownian:3,64,1\np = 3.5\n");
    const std::string msg = error_of({"lift", "--config", file.string()});
    EXPECT_NE(msg.find("[2, 3)"), std::string::npos) << msg;
    EXPECT_FALSE(error_of({"solve-rde", "--driver", "x.csv", "--p", "1.9"}).empty());
}

TEST(Config, FlagOverridesFile) {
    const auto file = scratch_file("driver = brownian:3,64,1\np = 2.8\n");
    EXPECT_EQ(parse({"lift", "--config", file.string(), "--p", "2.2"}).real("p"), 2.2);
    EXPECT_EQ(parse({"lift", "--p", "2.2", "--config", file.string()}).real("p"), 2.2);
}

TEST(Config, UnknownKeyListsValidKeys) {
    const auto file = scratch_file("driver = brownian:3,64,1\nmesh_size = 4\n");
    const std::string msg = error_of({"lift", "--config", file.string()});
    EXPECT_NE(msg.find("mesh_size"), std::string::npos) << msg;
    EXPECT_NE(msg.find("valid keys: config, output, seed, driver, all-pairs, p"), std::string::npos) << msg;
    EXPECT_FALSE(error_of({"lift", "--driver", "a.csv", "--bogus", "1"}).empty());
}

TEST(Config, MissingRequiredAndBadValues) {
    EXPECT_NE(error_of({"lift"}).find("driver"), std::string::npos);
    EXPECT_FALSE(error_of({"solve-rde", "--driver", "x.csv", "--mesh", "-2"}).empty());
    EXPECT_FALSE(error_of({"solve-rde", "--driver", "x.csv", "--mesh", "1.5"}).empty());
    EXPECT_FALSE(error_of({"solve-rde", "--driver", "x.csv", "--y0", "abc"}).empty());
    EXPECT_FALSE(error_of({"solve-rde", "--driver", "x.csv", "--field", "cubic"}).empty());
    EXPECT_FALSE(error_of({"run-all", "--suite", "nightly"}).empty());
    EXPECT_FALSE(error_of({"lift", "--driver", "x.csv", "--seed", "-1"}).empty());
}

TEST(Config, UnknownOrMissingSubcommand) {
    EXPECT_NE(error_of({"integrate"}).find("unknown subcommand 'integrate'"), std::string::npos);
    EXPECT_NE(error_of({}).find("missing subcommand"), std::string::npos);
}

TEST(Config, DefaultsAndTypedAccess) {
    const ExperimentConfig cfg = parse({"solve-heat"});
    EXPECT_EQ(cfg.integer("nx"), 128u);
    EXPECT_EQ(cfg.real("T"), 0.02);
    EXPECT_EQ(cfg.text("driver"), "brownian");
    EXPECT_FALSE(cfg.flag("force"));
    EXPECT_FALSE(cfg.optional_real("C").has_value());
    EXPECT_EQ(cfg.output_dir, std::filesystem::path("."));
    EXPECT_THROW(cfg.text("nothing"), ConfigError);
}

TEST(Config, CommaValuesStayWhole) {
    const auto file = scratch_file("driver = brownian:1,64,1\nstrides = 8,4,2,1\n");
    const ExperimentConfig cfg = parse({"uniqueness-probe", "--config", file.string()});
    EXPECT_EQ(cfg.text("driver"), "brownian:1,64,1");
    EXPECT_EQ(cfg.text("strides"), "8,4,2,1");
}

TEST(Config, HelpRequested) {
    EXPECT_THROW(parse({"solve-heat", "--help"}), HelpRequested);
    EXPECT_NE(usage().find("energy-check"), std::string::npos);
}
