#include "dmcone/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>

using namespace dmcone;
using dmcone::cli::json;
using dmcone::cli::run;

namespace {

std::string data(const std::string& name) { return std::string(DMCONE_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("dmcone_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

void expect_error(const cli::CommandResult& r, const char* code) {
    EXPECT_EQ(r.status, "error");
    EXPECT_EQ(r.exit_code(), 2);
    EXPECT_EQ(r.payload.value("code", std::string()), code) << r.payload.dump();
}

struct ScopedEnv {
    std::string name;
    ScopedEnv(std::string n, const char* value) : name(std::move(n)) { setenv(name.c_str(), value, 1); }
    ~ScopedEnv() { unsetenv(name.c_str()); }
};

} // namespace

TEST(Run, EmptyArgvIsUnknownCommandWithUsage) {
    auto r = run({});
    expect_error(r, "UnknownCommand");
    EXPECT_NE(r.payload["usage"].get<std::string>().find("validate"), std::string::npos);
}

TEST(Run, UnknownCommand) { expect_error(run({"frobnicate"}), "UnknownCommand"); }

TEST(Run, BadFlag) {
    expect_error(run({"strata", "--weights", data("six_thirds.json"), "--bogus"}), "BadFlag");
    expect_error(run({"validate"}), "BadFlag");
}

TEST(Run, EnvelopeShape) {
    auto r = run({"validate", "--weights", data("six_thirds.json"), "--json"});
    auto j = r.to_json();
    for (const char* key : {"command", "status", "payload", "diagnostics", "schema"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["schema"], "validate.schema.json");
    EXPECT_EQ(j["command"], "validate --weights " + data("six_thirds.json"));
    EXPECT_TRUE(j["diagnostics"].contains("tolerances"));
}

TEST(Validate, SixThirds) {
    auto r = run({"validate", "--weights", data("six_thirds.json")});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(r.payload["n"], 3);
    EXPECT_EQ(r.payload["sum"], "2/1");
    EXPECT_EQ(r.payload["cusps"], 10);
}

TEST(Validate, Errors) {
    expect_error(run({"validate", "--weights", "/nonexistent/w.json"}), "FileNotFound");
    expect_error(run({"validate", "--weights", temp_file("broken.json", "[\"1/3\",")}), "ParseError");
    expect_error(run({"validate", "--weights", temp_file("floats.json", "[0.5, 0.5, 0.5, 0.5]")}), "ParseError");
    auto r = run({"validate", "--weights", temp_file("sum.json", "[\"1/3\",\"1/3\",\"1/3\",\"1/3\"]")});
    expect_error(r, "SumNotTwo");
}

TEST(Validate, AcceptsObjectForm) {
    auto r = run({"validate", "--weights", temp_file("object.json", R"({"weights": ["1/2","1/2","1/2","1/2"]})")});
    EXPECT_EQ(r.status, "ok");
    EXPECT_EQ(r.payload["cusps"], 3);
}

TEST(Strata, AsymmetricFourPoints) {
    auto r = run({"strata", "--weights", data("generic4.json"), "--max-codim", "1"});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    ASSERT_EQ(r.payload["count"], 3);
    const auto& first = r.payload["strata"][0];
    EXPECT_EQ(first["blocks"], json::parse("[[1,2],[3],[4]]"));
    EXPECT_EQ(first["kind"], "StableStratum");
    EXPECT_EQ(first["density"], "1/5");
}

TEST(Strata, RationalsAreStrings) {
    auto r = run({"strata", "--weights", data("six_thirds.json")});
    const std::regex rational(R"(-?\d+/\d+)");
    ASSERT_GT(r.payload["count"].get<int>(), 15);
    for (const auto& s : r.payload["strata"]) {
        ASSERT_TRUE(s["density"].is_string());
        EXPECT_TRUE(std::regex_match(s["density"].get<std::string>(), rational));
        for (const auto& f : s["factors"]) EXPECT_TRUE(f["density"].is_string());
    }
}

TEST(Cusps, SixThirds) {
    auto r = run({"cusps", "--weights", data("six_thirds.json")});
    ASSERT_EQ(r.payload["count"], 10);
    for (const auto& c : r.payload["cusps"]) EXPECT_EQ(c["model"], "SegreCone(1,1)");
    auto mixed = run({"cusps", "--weights", data("mixed_segre.json")});
    ASSERT_EQ(mixed.payload["count"], 1);
    EXPECT_EQ(mixed.payload["cusps"][0]["model"], "SegreCone(2,1)");
}

TEST(Density, CpdPreset) {
    auto r = run({"density", "--preset", "cpd", "--dim", "2", "--weights", data("cp2_point_weights.json")});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    const Rational s = Rational(1) / Rational(5) + Rational(1) / Rational(6) + Rational(1) / Rational(7) + Rational(1) / Rational(8);
    EXPECT_EQ(r.payload["nu"], pow(Rational(1) - s, 3).str());
    auto flat = run({"density", "--preset", "cpd", "--dim", "3"});
    EXPECT_EQ(flat.payload["nu"], "1/1");
}

TEST(Density, DataFile) {
    auto r = run({"density", "--data", data("li_sun_conic.json")});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    EXPECT_EQ(r.payload["nu"], "125/729");
    EXPECT_EQ(r.payload["gamma"], "5/9");  // (3 + 2(1/3 - 1)) / 3
}

TEST(Density, Errors) {
    expect_error(run({"density"}), "BadFlag");
    expect_error(run({"density", "--preset", "cpd"}), "BadFlag");
    auto bad = temp_file("notklt.json", R"({"n":1,"index":2,"divisors":[{"degree":3,"beta":"1/10"}],"c1n":"2"})");
    expect_error(run({"density", "--data", bad}), "NotKlt");
}

TEST(Bmy, CompleteQuadrilateralKernel) {
    auto r = run({"bmy", "--preset", "complete-quadrilateral", "--symbolic", "--kernel"});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    EXPECT_EQ(r.payload["kernel"]["kernel_dim"], 4);
    EXPECT_EQ(r.payload["form"]["matrix"].size(), 6u);
    EXPECT_FALSE(r.payload.contains("numeric"));
}

TEST(Bmy, ArrangementFileMatchesPreset) {
    auto file = run({"bmy", "--arrangement", data("complete_quadrilateral.json"), "--symbolic", "--kernel"});
    auto preset = run({"bmy", "--preset", "complete-quadrilateral", "--symbolic", "--kernel"});
    ASSERT_EQ(file.status, "ok") << file.payload.dump();
    EXPECT_EQ(file.payload["kernel"]["kernel_dim"], 4);
    // Same lines, same names up to the L/H prefix: compare the forms entrywise.
    EXPECT_EQ(file.payload["form"]["matrix"], preset.payload["form"]["matrix"]);
}

TEST(Bmy, NumericDefects) {
    auto dm = run({"bmy", "--preset", "dm", "--dim", "2", "--weights", data("cp2_point_weights.json")});
    ASSERT_EQ(dm.status, "ok") << dm.payload.dump();
    EXPECT_EQ(dm.payload["numeric"]["defect"], "0/1");
    auto lines = run({"bmy", "--arrangement", data("four_general_lines.json")});
    ASSERT_EQ(lines.status, "ok") << lines.payload.dump();
    EXPECT_EQ(lines.payload["numeric"]["defect"], "4/25");
}

TEST(Bmy, Errors) {
    expect_error(run({"bmy"}), "BadFlag");
    expect_error(run({"bmy", "--preset", "dm"}), "BadFlag");
    auto bad = temp_file("bad_arr.json", R"({"n":2,"divisors":[{"name":"A"}],"intersections":[{"divisors":["A","B"],"type":"double"}]})");
    expect_error(run({"bmy", "--arrangement", bad}), "ParseError");
}

TEST(Verify, List) {
    auto r = run({"verify", "--list"});
    ASSERT_EQ(r.status, "ok");
    EXPECT_EQ(r.payload["models"].size(), metric::catalog().size());
}

TEST(Verify, CuspPasses) {
    auto r = run({"verify", "--model", "cusp", "--samples", "5"});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    EXPECT_EQ(r.payload["verdict"], "pass");
    EXPECT_EQ(r.payload["constant"], -3.0);
    EXPECT_EQ(r.payload["samples"], 5);
}

TEST(Verify, ConeNegativeControlFails) {
    auto r = run({"verify", "--model", "cone", "--gamma", "3/4", "--samples", "4"});
    EXPECT_EQ(r.status, "fail");
    EXPECT_EQ(r.exit_code(), 1);
    auto ok = run({"verify", "--model", "cone", "--samples", "4"});
    EXPECT_EQ(ok.status, "ok");
}

TEST(Verify, ChscAndLambda) {
    EXPECT_EQ(run({"verify", "--model", "chsc", "--beta", "3/4", "--lambda", "-1", "--samples", "6"}).status, "ok");
    EXPECT_EQ(run({"verify", "--model", "lambda", "--beta", "1/2", "--lambda", "-1", "--samples", "4"}).status, "ok");
}

TEST(Verify, ConeToCuspTable) {
    auto r = run({"verify", "--model", "cone-to-cusp", "--samples", "17"});
    EXPECT_EQ(r.payload["rows"].size(), 6u);
    EXPECT_TRUE(r.payload["monotone"].get<bool>());
    EXPECT_EQ(r.status, "fail");  // 1.06e-5 at rho = 0.1 exceeds 1e-5
    EXPECT_EQ(run({"verify", "--model", "cone-to-cusp", "--samples", "17", "--tol", "2e-5"}).status, "ok");
}

TEST(Verify, Errors) {
    expect_error(run({"verify"}), "BadFlag");
    expect_error(run({"verify", "--model", "nope"}), "BadFlag");
    expect_error(run({"verify", "--model", "lambda", "--lambda", "2"}), "BadFlag");
    expect_error(run({"verify", "--model", "chsc", "--beta", "0.5"}), "BadFlag");
}

TEST(Verify, EnvironmentOverridesTolerance) {
    ScopedEnv env("DMCONE_TOL_NESTED", "1e-30");
    auto r = run({"verify", "--model", "cusp", "--samples", "3"});
    EXPECT_EQ(r.status, "fail");
    EXPECT_EQ(r.diagnostics["tolerances"]["nested"], 1e-30);
    EXPECT_EQ(r.diagnostics["tolerances"]["source"]["nested"], "DMCONE_TOL_NESTED");
}

TEST(Verify, MalformedEnvironmentIsAnError) {
    ScopedEnv env("DMCONE_TOL_SINGLE", "tight");
    expect_error(run({"verify", "--model", "cusp-1d"}), "BadFlag");
}

TEST(Periods, ClassicalPair) {
    auto r = run({"periods", "--weights", data("generic4.json"), "--z", "0.3,0.8"});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    ASSERT_EQ(r.payload["periods"].size(), 2u);
    const auto& p = r.payload["periods"][0];
    EXPECT_EQ(p["from"], 2);
    EXPECT_EQ(p["to"], 3);
    EXPECT_TRUE(p.contains("error"));
    auto cfg = ConfigurationPoint::make(WeightSystem::validate({Rational(3) / Rational(10), Rational(1) / Rational(2),
                                                                Rational(11) / Rational(20), Rational(13) / Rational(20)}),
                                        {cplx(0.3, 0.8)});
    const auto direct = period(cfg, 2, 3).value;
    EXPECT_DOUBLE_EQ(p["value"][0].get<double>(), direct.real());
    EXPECT_DOUBLE_EQ(p["value"][1].get<double>(), direct.imag());
}

TEST(Periods, SegmentThroughPuncture) {
    expect_error(run({"periods", "--weights", data("generic4.json"), "--z", "2,0", "--segment", "1,2"}), "PunctureOnSegment");
    expect_error(run({"periods", "--weights", data("generic4.json"), "--z", "abc"}), "BadFlag");
}

TEST(Wp, CurvatureOnDefaultGrid) {
    auto r = run({"wp", "--weights", data("generic4.json"), "--grid", "default", "--curvature"});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    EXPECT_EQ(r.payload["values"].size(), 12u);
    EXPECT_LT(r.payload["curvature"]["mean"].get<double>(), 0);
    EXPECT_LE(r.payload["curvature"]["spread"].get<double>(), 1e-3);
}

TEST(Wp, GridSpecsAndOracle) {
    auto r = run({"wp", "--weights", data("generic4.json"), "--grid", "0.3,0.8;1.4,0.9", "--method", "oracle"});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    EXPECT_EQ(r.payload["method"], "area-oracle");
    EXPECT_GT(r.payload["values"][0]["area"].get<double>(), 0);
    auto ranged = run({"wp", "--weights", data("generic4.json"), "--grid", "-0.4:1.4:4,0.5:1.4:3", "--method", "oracle"});
    EXPECT_EQ(ranged.payload["values"].size(), 12u);
    expect_error(run({"wp", "--weights", data("generic4.json"), "--grid", "0:1"}), "BadFlag");
    expect_error(run({"wp", "--weights", data("six_thirds.json"), "--grid", "default"}), "InvalidArgument");
}

TEST(ScMap, BetaValue) {
    auto r = run({"sc-map", "--z", "1,0"});
    ASSERT_EQ(r.status, "ok") << r.payload.dump();
    const double beta = std::tgamma(1.0 / 3) * std::tgamma(1.0 / 3) / std::tgamma(2.0 / 3);
    EXPECT_NEAR(r.payload["value"][0].get<double>(), beta, 1e-12);
    expect_error(run({"sc-map", "--z", "0.5,-1"}), "OutOfDomain");
}

TEST(Report, SelectedCriteria) {
    auto ok = run({"report", "--only", "3,5"});
    EXPECT_EQ(ok.status, "ok");
    EXPECT_EQ(ok.payload["criteria"].size(), 2u);
    auto red = run({"report", "--only", "11"});
    EXPECT_EQ(red.status, "fail");
    EXPECT_EQ(red.payload["criteria"][0]["verdict"], "FAIL");
}

TEST(Run, Deterministic) {
    const std::vector<std::vector<std::string>> cases{
        {"strata", "--weights", data("six_thirds.json")},
        {"verify", "--model", "cone", "--samples", "3"},
        {"wp", "--weights", data("generic4.json"), "--grid", "default"},
    };
    for (const auto& args : cases) EXPECT_EQ(run(args).to_json().dump(), run(args).to_json().dump());
}
