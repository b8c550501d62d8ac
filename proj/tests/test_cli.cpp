#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bac/cli.hpp"
#include "bac/report.hpp"
#include "support.hpp"

using bactest::fixture;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "bac");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = bac::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return (fs::temp_directory_path() / ("bac_test_" + name)).string(); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, ConsistentTasksExitZero) {
    auto r = cli({"check-tasks", "--stories", fixture("cli/consistent.story"), "--scenarios", fixture("cli/search.scen"),
                  "--models", fixture("cli/home.hmst")});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("check-tasks: 3 steps, 3 passed"), std::string::npos);
}

TEST(Cli, AmbiguousPrototypeExitOne) {
    auto r = cli({"check-proto", "--stories", fixture("cli/companies.story"), "--prototype", fixture("cli/companies.bmml")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("More than one element to represent the same field"), std::string::npos);
}

TEST(Cli, MissingPageMapExitTwo) {
    auto r = cli({"check-gui", "--stories", fixture("cli/consistent.story")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--page-map"), std::string::npos);
}

TEST(Cli, UsageAndIoErrorsExitTwo) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"lint"}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"lint", "--stories", "/nonexistent/x.story"}).code, 2);
    EXPECT_EQ(cli({"check-proto", "--stories", fixture("cli/companies.story"), "--prototype", "/nonexistent.bmml"}).code, 2);
    EXPECT_EQ(cli({"check-gui", "--stories", fixture("cli/consistent.story"), "--page-map", fixture("cli/page_map.json"),
                   "--mode", "sideways"})
                  .code,
              2);
    EXPECT_EQ(cli({"lint", "--stories", fixture("cli/consistent.story"), "--catalog", fixture("cli/home.html")}).code, 2);
    EXPECT_EQ(cli({"check-all", "--stories", fixture("cli/consistent.story"), "--prototype", fixture("cli/home.bmml")}).code, 2);
}

TEST(Cli, LintOutput) {
    auto r = cli({"lint", "--stories", fixture("lint")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("return_tickets.story:13: no step is matching: When I set the date"), std::string::npos);
    EXPECT_NE(r.out.find("lint: 9 steps, 1 not recognized"), std::string::npos);
    auto clean = cli({"lint", "--stories", fixture("cli/consistent.story")});
    EXPECT_EQ(clean.code, 0);
}

TEST(Cli, CheckAllConcatenates) {
    std::vector<std::string> common = {"--stories", fixture("case_study/flight_search.story")};
    std::vector<std::string> tasks = {"--scenarios", fixture("case_study/full_options.scen"), "--models", fixture("case_study/book_flights.hmst")};
    std::vector<std::string> proto = {"--prototype", fixture("case_study/flight_search.bmml")};
    std::vector<std::string> gui = {"--page-map", fixture("case_study/page_map.json")};
    auto cat = [](std::vector<std::string> a, const std::vector<std::string>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    auto t = cli(cat(cat({"check-tasks"}, common), tasks));
    auto p = cli(cat(cat({"check-proto"}, common), proto));
    auto g = cli(cat(cat({"check-gui"}, common), gui));
    auto all = cli(cat(cat(cat(cat({"check-all"}, common), tasks), proto), gui));
    EXPECT_EQ(all.out, t.out + p.out + g.out);
    EXPECT_EQ(all.code, 1);
}

TEST(Cli, ExitCodeMatchesReport) {
    struct Case {
        std::vector<std::string> args;
    };
    std::vector<Case> cases = {
        {{"check-tasks", "--stories", fixture("cli/consistent.story"), "--scenarios", fixture("cli/search.scen"), "--models",
          fixture("cli/home.hmst")}},
        {{"check-proto", "--stories", fixture("cli/companies.story"), "--prototype", fixture("cli/companies.bmml")}},
        {{"check-gui", "--stories", fixture("cli/consistent.story"), "--page-map", fixture("cli/page_map.json")}},
        {{"check-gui", "--stories", fixture("cli/pending.story"), "--page-map", fixture("cli/page_map.json")}},
        {{"check-gui", "--stories", fixture("cli/pending.story"), "--page-map", fixture("cli/page_map.json"), "--pending",
          "1:3", "--pending", "1:4"}},
        {{"check-gui", "--stories", fixture("lint/return_tickets.story"), "--page-map", fixture("cli/page_map.json")}},
    };
    auto path = temp_path("exit.json");
    for (auto c : cases) {
        c.args.push_back("--report-out");
        c.args.push_back(path);
        auto r = cli(c.args);
        ASSERT_NE(r.code, 2) << r.err;
        auto report = bac::parse_json_report(slurp(path));
        EXPECT_EQ(r.code == 0, !bac::has_inconsistencies(report.results)) << r.out;
    }
    std::remove(path.c_str());
}

TEST(Cli, PendingMarkersFromFlags) {
    auto r = cli({"check-gui", "--stories", fixture("cli/pending.story"), "--page-map", fixture("cli/page_map.json"),
                  "--pending", "1:3", "--pending", "1:4"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("2 pending"), std::string::npos) << r.out;
}

TEST(Cli, WriteEnrichedAndPreferIt) {
    auto dir = fs::temp_directory_path() / "bac_test_enriched";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::copy_file(fixture("cli/search.scen"), dir / "search.scen");
    auto r = cli({"check-tasks", "--stories", fixture("cli/consistent.story"), "--scenarios", dir.string(), "--models",
                  fixture("cli/home.hmst"), "--write-enriched"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "search.enriched.scen"));
    auto again = cli({"check-tasks", "--stories", fixture("cli/consistent.story"), "--scenarios", dir.string(), "--models",
                      fixture("cli/home.hmst")});
    EXPECT_EQ(again.out, r.out);
    fs::remove_all(dir);
}

TEST(Cli, ExpandPaths) {
    auto stories = bac::expand_paths({fixture("taxonomy/task")}, ".story");
    EXPECT_EQ(stories.size(), 6u);
    EXPECT_TRUE(std::is_sorted(stories.begin(), stories.end()));
}

TEST(Cli, ReportFileWritten) {
    auto path = temp_path("report.json");
    auto r = cli({"check-gui", "--stories", fixture("case_study/flight_search_gui.story"), "--page-map",
                  fixture("case_study/page_map.json"), "--report-out", path});
    EXPECT_EQ(r.code, 1);
    auto report = bac::parse_json_report(slurp(path));
    EXPECT_EQ(report.summary.at(bac::Artifact::FinalGui).inconsistent, 1);
    EXPECT_EQ(report.summary.at(bac::Artifact::FinalGui).not_performed, 10);
    std::remove(path.c_str());
}
