#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "overdisp_cli/commands.hpp"

using namespace overdisp::cli;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Result r;
    r.code = run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempConfig {
public:
    explicit TempConfig(const std::string& text) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("overdisp_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".cfg");
        std::ofstream(path_) << text;
    }
    ~TempConfig() { std::filesystem::remove(path_); }
    std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kDet = "model.service.kind = det\nmodel.service.D = 0.5\nmodel.u = 1\n";

}  // namespace

TEST(Cli, ConstantsCsv) {
    TempConfig cfg(kDet);
    const auto r = invoke({"--config", cfg.path(), "constants"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out,
              "service,theta_star,chi_plus,vbar2,sigma_plus_sq,theta_circ,chi_circ,sigma_circ_sq,"
              "tau_star,chi_minus,wbar1,sigma_minus_sq,c,v1,w2\n"
              "det,0.693,-0.193,0.250,1.000,0.288,-0.085,3.000,0.500,-0.153,0.125,2.000,0.500,"
              "-1.000,-0.375\n");
}

TEST(Cli, ApproximateCsv) {
    TempConfig cfg(std::string(kDet) + "scaling.f = 5/2\nscaling.n = 30\n");
    const auto r = invoke({"--config", cfg.path(), "approximate"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("5/2,30,fast,1,"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find(",4.435e-04,"), std::string::npos) << r.out;
}

TEST(Cli, UnsupportedOrderExitsWithFour) {
    TempConfig cfg(std::string(kDet) + "scaling.f = 6/5\nscaling.n = 30\n");
    const auto r = invoke({"--config", cfg.path(), "approximate"});
    EXPECT_EQ(r.code, kExitUnsupportedOrder);
    EXPECT_NE(r.err.find("vbar_3"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitWithTwo) {
    TempConfig unknown("model.colour = red\n");
    EXPECT_EQ(invoke({"--config", unknown.path(), "constants"}).code, kExitConfig);
    TempConfig not_rare("model.service.kind = det\nmodel.service.D = 0.5\nmodel.u = 0.4\n");
    EXPECT_EQ(invoke({"--config", not_rare.path(), "constants"}).code, kExitConfig);
    EXPECT_EQ(invoke({"--config", "/nonexistent/overdisp.cfg", "constants"}).code, kExitConfig);
    EXPECT_EQ(invoke({"table"}).code, kExitConfig);
    EXPECT_EQ(invoke({"--table", "5", "table"}).code, kExitConfig);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitConfig);
    EXPECT_EQ(invoke({}).code, kExitConfig);
    TempConfig few_samples(std::string(kDet) + "scaling.f = 1\nscaling.n = 20\nmc.samples = 10\n");
    EXPECT_EQ(invoke({"--config", few_samples.path(), "simulate"}).code, kExitConfig);
}

TEST(Cli, HelpExitsWithZero) {
    EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(Cli, SolverFailureExitsWithThree) {
    // With nu this large the load is tiny and the fast twist runs into the
    // Gamma domain boundary.
    TempConfig cfg("model.service.kind = exp\nmodel.service.nu = 1e6\nmodel.u = 1\n");
    const auto r = invoke({"--config", cfg.path(), "constants"});
    EXPECT_EQ(r.code, kExitSolver) << r.out;
}

TEST(Cli, InvalidThreadOverrideIsConfigError) {
    TempConfig cfg(std::string(kDet) + "scaling.f = 1\nscaling.n = 20\nmc.samples = 200\n");
    ::setenv("OVERDISP_THREADS", "zero", 1);
    EXPECT_EQ(invoke({"--config", cfg.path(), "simulate"}).code, kExitConfig);
    ::setenv("OVERDISP_THREADS", "0", 1);
    EXPECT_EQ(invoke({"--config", cfg.path(), "simulate"}).code, kExitConfig);
    ::setenv("OVERDISP_THREADS", "3", 1);
    const auto threaded = invoke({"--config", cfg.path(), "simulate"});
    ::unsetenv("OVERDISP_THREADS");
    const auto single = invoke({"--config", cfg.path(), "simulate"});
    EXPECT_EQ(threaded.code, kExitOk);
    EXPECT_EQ(threaded.out, single.out);
}

TEST(Cli, SimulateIsDeterministicAndSeedOverrides) {
    TempConfig cfg(std::string(kDet) + "scaling.f = 1\nscaling.n = 50\nmc.samples = 2000\n");
    const auto a = invoke({"--config", cfg.path(), "simulate"});
    const auto b = invoke({"--config", cfg.path(), "simulate"});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto c = invoke({"--config", cfg.path(), "--seed", "99", "simulate"});
    EXPECT_NE(a.out, c.out);
    EXPECT_NE(c.out.find(",99,"), std::string::npos);
}

TEST(Cli, SimulateLeavesApproximationBlankOutsideSupportedOrders) {
    TempConfig cfg(std::string(kDet) + "scaling.f = 6/5\nscaling.n = 20\nmc.samples = 500\n");
    const auto r = invoke({"--config", cfg.path(), "simulate"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.substr(r.out.size() - 3), ",,\n");
}

TEST(Cli, JsonOutputReingestsIdentically) {
    for (const char* command : {"constants", "approximate", "simulate"}) {
        TempConfig cfg(std::string(kDet) +
                       "scaling.f = 5/3\nscaling.n = 30\nmc.samples = 1000\noutput.precision = 5\n");
        const auto first = invoke({"--config", cfg.path(), "--format", "json", command});
        ASSERT_EQ(first.code, kExitOk) << first.err;
        const auto doc = nlohmann::json::parse(first.out);
        EXPECT_EQ(doc.at("command"), command);
        TempConfig again(first.out);
        const auto second = invoke({"--config", again.path(), command});
        ASSERT_EQ(second.code, kExitOk) << second.err;
        EXPECT_EQ(first.out, second.out) << command;
    }
}

TEST(Cli, OutputPathWritesFile) {
    const auto target = std::filesystem::temp_directory_path() / "overdisp_cli_out.csv";
    TempConfig cfg(std::string(kDet) + "output.path = \"" + target.string() + "\"\n");
    const auto r = invoke({"--config", cfg.path(), "constants"});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(read_file(target.string()).substr(0, 8), "service,");
    std::filesystem::remove(target);
}

TEST(Cli, PrecisionOption) {
    TempConfig cfg(kDet);
    const auto r = invoke({"--config", cfg.path(), "--precision", "5", "constants"});
    EXPECT_NE(r.out.find("det,0.69315,"), std::string::npos) << r.out;
}

TEST(Tables, MatchGoldenFiles) {
    for (int t = 1; t <= 4; ++t) {
        const std::string golden =
            read_file(std::string(OVERDISP_GOLDEN_DIR) + "/table" + std::to_string(t) + ".csv");
        ASSERT_FALSE(golden.empty()) << t;
        EXPECT_EQ(cmd_table(t, OutputFormat::Csv, 3), golden) << "table " << t;
    }
}

TEST(Tables, JsonHoldsRoundedValues) {
    const auto doc = nlohmann::json::parse(cmd_table(2, OutputFormat::Json, 3));
    EXPECT_EQ(doc.at("table"), 2);
    EXPECT_EQ(doc.at("rows").at(0).at("cells").at(4).at("xi").get<double>(), 4.435e-4);
    const auto t1 = nlohmann::json::parse(cmd_table(1, OutputFormat::Json, 3));
    EXPECT_EQ(t1.at("rows").at(0).at("chi_circ").get<double>(), -0.085);
}
