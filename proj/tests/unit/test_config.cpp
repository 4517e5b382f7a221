#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "overdisp_cli/config.hpp"

using namespace overdisp;
using namespace overdisp::cli;

namespace {

const char* kSample = R"(# balanced deterministic example
model.subordinator.kind = gamma
model.subordinator.r = 1
model.subordinator.mu = 1
model.service.kind = "det"   # quoted
model.service.D = 0.5
model.u = 1.0
scaling.f = 5/3
scaling.n = 30
mc.samples = 20000
mc.grid_cells = 512
mc.seed = 42
mc.method = plain
mc.workers = 2
output.format = json
output.precision = 4
)";

}  // namespace

TEST(ConfigText, ParsesAllKeys) {
    const RunConfig c = parse_config_text(kSample);
    EXPECT_EQ(c.service_kind, "det");
    EXPECT_EQ(c.D, 0.5);
    EXPECT_EQ(c.u, 1.0);
    ASSERT_TRUE(c.f);
    EXPECT_EQ(c.f->to_string(), "5/3");
    EXPECT_EQ(c.n, 30);
    EXPECT_EQ(c.mc.samples, 20000);
    EXPECT_EQ(c.mc.grid_cells, 512);
    EXPECT_EQ(c.mc.seed, 42u);
    EXPECT_EQ(c.mc.method, McMethod::Plain);
    EXPECT_EQ(c.mc.workers, 2);
    EXPECT_EQ(c.format, OutputFormat::Json);
    EXPECT_EQ(c.precision, 4);
    EXPECT_FALSE(c.path);
}

TEST(ConfigText, Defaults) {
    const RunConfig c = parse_config_text("");
    EXPECT_EQ(c.r, 1.0);
    EXPECT_EQ(c.mu, 1.0);
    EXPECT_EQ(c.precision, 3);
    EXPECT_EQ(c.format, OutputFormat::Csv);
    EXPECT_EQ(c.mc.method, McMethod::ImportanceSampled);
}

TEST(ConfigText, Rejections) {
    EXPECT_THROW(parse_config_text("model.colour = red"), ConfigError);
    EXPECT_THROW(parse_config_text("model.u = 1\nmodel.u = 2"), ConfigError);
    EXPECT_THROW(parse_config_text("model.u = one"), ConfigError);
    EXPECT_THROW(parse_config_text("model.u"), ConfigError);
    EXPECT_THROW(parse_config_text("= 3"), ConfigError);
    EXPECT_THROW(parse_config_text("model.service.kind = \"det"), ConfigError);
    EXPECT_THROW(parse_config_text("model.subordinator.kind = stable"), ConfigError);
    EXPECT_THROW(parse_config_text("model.service.kind = weibull"), ConfigError);
    EXPECT_THROW(parse_config_text("model.service.kind = exp\nmodel.service.D = 1"), ConfigError);
    EXPECT_THROW(parse_config_text("model.service.kappa = 2"), ConfigError);
    EXPECT_THROW(parse_config_text("model.service.kind = exp\nmodel.service.nu = 1\n"
                                   "model.service.z1_plus = 0.5"),
                 ConfigError);
    EXPECT_THROW(parse_config_text("scaling.f = 1/0"), ConfigError);
    EXPECT_THROW(parse_config_text("scaling.n = 2.5"), ConfigError);
    EXPECT_THROW(parse_config_text("mc.method = fancy"), ConfigError);
    EXPECT_THROW(parse_config_text("mc.workers = 0"), ConfigError);
    EXPECT_THROW(parse_config_text("mc.seed = -1"), ConfigError);
    EXPECT_THROW(parse_config_text("output.precision = 18"), ConfigError);
    EXPECT_THROW(parse_config_text("output.format = xml"), ConfigError);
}

TEST(ConfigText, HashInsideQuotesIsKept) {
    const RunConfig c = parse_config_text("output.path = \"out#1.csv\" # trailing");
    EXPECT_EQ(c.path, "out#1.csv");
}

TEST(ConfigJson, RoundTripsThroughToJson) {
    const RunConfig a = parse_config_text(kSample);
    const nlohmann::json j = to_json(a);
    const RunConfig b = parse_config_json(j);
    EXPECT_EQ(to_json(b), j);
    const RunConfig c = parse_config_json(nlohmann::json{{"config", j}, {"result", 1}});
    EXPECT_EQ(to_json(c), j);
}

TEST(ConfigJson, RejectsStructuredValues) {
    EXPECT_THROW(parse_config_json(nlohmann::json::array()), ConfigError);
    EXPECT_THROW(parse_config_json(nlohmann::json{{"model.u", nlohmann::json::array()}}),
                 ConfigError);
    EXPECT_THROW(parse_config_json(nlohmann::json{{"nope", 1}}), ConfigError);
}

TEST(ConfigFile, DetectsFormat) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto text_path = dir / "overdisp_test_config.txt";
    const auto json_path = dir / "overdisp_test_config.json";
    {
        std::ofstream(text_path) << kSample;
        std::ofstream(json_path) << "  " << to_json(parse_config_text(kSample)).dump(2);
    }
    EXPECT_EQ(to_json(load_config_file(text_path.string())),
              to_json(load_config_file(json_path.string())));
    {
        std::ofstream(json_path) << "{ broken";
    }
    EXPECT_THROW(load_config_file(json_path.string()), ConfigError);
    EXPECT_THROW(load_config_file((dir / "overdisp_missing_file").string()), ConfigError);
    std::filesystem::remove(text_path);
    std::filesystem::remove(json_path);
}

TEST(BuildModel, ServiceKinds) {
    auto base = [](const std::string& extra) {
        return parse_config_text("model.u = 1\n" + extra);
    };
    EXPECT_DOUBLE_EQ(build_model(base("model.service.kind = det\nmodel.service.D = 0.5"), false).c(),
                     0.5);
    EXPECT_NEAR(build_model(base("model.service.kind = exp\nmodel.service.z1_plus = 0.5"), false).c(),
                0.5, 1e-14);
    EXPECT_NEAR(build_model(base("model.service.kind = powerlaw\nmodel.service.kappa = 2"), false).c(),
                1.0 / 3.0, 1e-14);
    const Model m = build_model(base("model.service.kind = det\nmodel.service.D = 0.5"), false);
    EXPECT_EQ(m.n(), 1.0);
}

TEST(BuildModel, MissingOrInvalid) {
    EXPECT_THROW(build_model(parse_config_text("model.u = 1"), false), ConfigError);
    EXPECT_THROW(build_model(parse_config_text("model.service.kind = det\nmodel.service.D = 0.5"), false),
                 ConfigError);
    EXPECT_THROW(build_model(parse_config_text("model.u = 1\nmodel.service.kind = det"), false),
                 ConfigError);
    EXPECT_THROW(build_model(parse_config_text("model.u = 1\nmodel.service.kind = exp"), false),
                 ConfigError);
    EXPECT_THROW(build_model(parse_config_text("model.u = 0.3\nmodel.service.kind = det\n"
                                               "model.service.D = 0.5"),
                             false),
                 ConfigError);
    EXPECT_THROW(build_model(parse_config_text("model.u = 1\nmodel.service.kind = exp\n"
                                               "model.service.z1_plus = 1.5"),
                             false),
                 ConfigError);
    EXPECT_THROW(build_model(parse_config_text("model.u = 1\nmodel.service.kind = det\n"
                                               "model.service.D = 0.5"),
                             true),
                 ConfigError);
}
