#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "etalab/cli.hpp"
#include "support.hpp"

using namespace etalab;
using etalab::testing::dec;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    std::filesystem::path cache = std::filesystem::path(::testing::TempDir()) / "etalab_cli_cache";

    void SetUp() override { std::filesystem::remove_all(cache); }

    Outcome call(std::vector<std::string> args, bool with_cache = true) {
        args.insert(args.begin(), "etalab");
        if (with_cache) {
            args.push_back("--cache-dir");
            args.push_back(cache.string());
        }
        std::vector<const char*> argv;
        for (const auto& a : args) {
            argv.push_back(a.c_str());
        }
        std::ostringstream out, err;
        const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
        return {code, out.str(), err.str()};
    }
};

}  // namespace

TEST_F(Cli, ReferenceConstantExperiment) {
    const Outcome o = call({"experiment", "q", "--set", "grid:-2.5+5i;2+1i;1+2i;2;3", "--digits", "30"});
    EXPECT_EQ(o.code, 0) << o.out << o.err;
    EXPECT_NE(o.out.find("9.99999999999994309955"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("9.51329600849516775"), std::string::npos) << o.out;
}

TEST_F(Cli, BadSetIsAUsageError) {
    const Outcome o = call({"experiment", "q", "--set", "grid:bad"});
    EXPECT_EQ(o.code, 3);
    EXPECT_NE(o.err.find("--set"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(call({"experiment", "nonsense", "--a", "1+1i"}).code, 3);
    EXPECT_EQ(call({"experiment", "sn", "--N", "5"}).code, 3);
    EXPECT_EQ(call({"experiment", "sn", "--a", "1 + 1i", "--N", "5"}).code, 3);
    EXPECT_EQ(call({"experiment", "sn", "--a", "1+1i", "--N", "5", "--format", "xml"}).code, 3);
    EXPECT_EQ(call({"experiment", "genchar", "--a", "1+1i", "--N", "5", "--l", "1", "--perm", "x"}).code, 3);
    EXPECT_EQ(call({"verify", "nonsense"}).code, 3);
    EXPECT_EQ(call({"verify", "paper", "--digits", "5"}).code, 3);
    EXPECT_EQ(call({"bogus"}).code, 3);
    EXPECT_EQ(call({"cache", "shred"}).code, 3);
    const Outcome missing = call({"experiment", "sn", "--N", "5", "--format", "json"});
    EXPECT_NE(missing.err.find("--a"), std::string::npos);
}

TEST_F(Cli, HelpIsNotAnError) {
    const Outcome o = call({"--help"}, false);
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("experiment"), std::string::npos);
}

TEST_F(Cli, CsvHasRadiusColumns) {
    const Outcome o = call({"experiment", "sn", "--a", "0.4+17i", "--N", "30", "--variant", "plain", "--format", "csv"});
    ASSERT_EQ(o.code, 0) << o.err;
    std::istringstream in(o.out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_NE(header.find("value_rad"), std::string::npos);
    EXPECT_NE(header.find("delta_rad"), std::string::npos);
    EXPECT_NE(row.find(",S,"), std::string::npos);
    // |S_30 - 1| at six certified digits.
    EXPECT_NE(row.find("1.71269e-43"), std::string::npos) << row;
}

TEST_F(Cli, JsonReportIsDeterministic) {
    const std::vector<std::string> args{"experiment", "conj3", "--a", "0.4+17i", "--l", "1", "--m", "1", "--N", "12",
                                        "--format", "json"};
    const Outcome a = call(args);
    const Outcome b = call(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["config"]["command"], "experiment");
    EXPECT_EQ(j["config"]["target"], "conj3");
    EXPECT_EQ(j["results"].size(), 1u);
    EXPECT_EQ(j["results"][0]["rows"].size(), 2u);
    EXPECT_TRUE(j["results"][0]["rows"][0]["value"]["rad"].is_string());
    EXPECT_FALSE(j.contains("seconds"));
    EXPECT_FALSE(j["results"][0].contains("seconds"));

    std::vector<std::string> timed = args;
    timed.push_back("--timing");
    const auto t = nlohmann::json::parse(call(timed).out);
    EXPECT_TRUE(t.contains("seconds"));
}

TEST_F(Cli, CacheAdministration) {
    const Outcome fresh = call({"cache", "info"});
    EXPECT_EQ(fresh.code, 0);
    EXPECT_NE(fresh.out.find("0 entries"), std::string::npos) << fresh.out;

    EXPECT_EQ(call({"eval", "--a", "0.5+14i", "--K", "4"}).code, 0);
    const Outcome one = call({"cache", "info"});
    EXPECT_NE(one.out.find("1 entries"), std::string::npos) << one.out;

    EXPECT_EQ(call({"cache", "clear"}).code, 0);
    EXPECT_NE(call({"cache", "info"}).out.find("0 entries"), std::string::npos);
}

TEST_F(Cli, EnvironmentSelectsTheCacheDirectory) {
    ::setenv("ETALAB_CACHE_DIR", cache.string().c_str(), 1);
    EXPECT_EQ(call({"eval", "--a", "2", "--K", "1"}, false).code, 0);
    ::unsetenv("ETALAB_CACHE_DIR");
    EXPECT_EQ(DerivCache(cache).list().size(), 1u);
}

TEST_F(Cli, EvalPrintsDerivatives) {
    const Outcome o = call({"eval", "--a", "0.5+14i", "--K", "2", "--digits", "25", "--no-cache"}, false);
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("1.2220891770754763065992"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("eta^(2)"), std::string::npos);
    const Outcome z = call({"eval", "--a", "2", "--K", "0", "--function", "zeta", "--no-cache"}, false);
    EXPECT_NE(z.out.find("1.644934066848226436"), std::string::npos) << z.out;
}

TEST_F(Cli, OutFileReceivesTheReport) {
    const auto file = std::filesystem::path(::testing::TempDir()) / "etalab_report.json";
    std::filesystem::remove(file);
    const Outcome o = call({"experiment", "r3eq", "--a", "0.4+17i", "--N", "6", "--format", "json", "--out", file.string()});
    EXPECT_EQ(o.code, 0);
    EXPECT_TRUE(o.out.empty());
    std::ifstream in(file);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["results"][0]["name"], "r3eq");
}

TEST(CliFormat, DigitsNeverExceedTheRadius) {
    const Ball b = dec("1.234567890123", "0", 128).with_added_rad(Mag::from_double_up(1e-6));
    EXPECT_EQ(cli::certified_string(b, 20), "1.23457e0");
    EXPECT_EQ(cli::certified_string(Ball(0, 64).with_added_rad(Mag::pow2(-5)), 20), "0");
    // A small imaginary part has fewer certified digits than the real part.
    const Ball z = dec("1", "1e-15", 256).with_added_rad(Mag::from_double_up(1e-25));
    EXPECT_EQ(cli::certified_string(z, 30), "1.000000000000000000000000e0+1.000000000e-15i");
    EXPECT_EQ(cli::certified_string(Ball(3, 64), 5), "3.0000e0");
}

TEST(CliFormat, ExitCodeFollowsTheWorstCheck) {
    cli::Report r;
    r.config.command = "verify";
    r.config.target = "engine";
    r.checks.push_back(Check{"a", "first", CheckStatus::pass, "ok", {}});
    r.checks.push_back(Check{"b", "second", CheckStatus::inconclusive, "undecided", {}});
    const std::string table = cli::render_table(r);
    EXPECT_NE(table.find("[inconclusive] b"), std::string::npos);
    EXPECT_NE(table.find("1 passed, 0 failed, 1 inconclusive"), std::string::npos);
    EXPECT_EQ(combine(CheckStatus::inconclusive, CheckStatus::fail), CheckStatus::fail);
    EXPECT_EQ(combine(CheckStatus::pass, CheckStatus::inconclusive), CheckStatus::inconclusive);
}
