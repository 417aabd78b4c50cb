#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kmbias/cli.hpp"
#include "kmbias/io.hpp"
#include "kmbias/oracles.hpp"

using namespace kmbias;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "kmbias_cli_test";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("top-level usage") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);

    const CliResult help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(help.out.find("reproduce") != std::string::npos);
    CHECK(help.out.find("oracle") != std::string::npos);

    CHECK(cli({"simulate", "--help"}).code == 0);
    CHECK(cli({"simulate", "--no-such-flag", "1"}).code == 2);
}

TEST_CASE("simulate prints the summary and enforces the config") {
    const CliResult run = cli({"simulate", "--scenario", "1", "--n", "2000", "--p",
                               "0.4", "--dropout", "beta:5,2", "--seed", "42"});
    CHECK(run.code == 0);
    CHECK(run.out.find("scenario 1") != std::string::npos);
    CHECK(run.out.find("dropout         40.000%") != std::string::npos);
    CHECK(run.out.find("S(ams)") != std::string::npos);

    // Invalid share: usage error naming the flag.
    const CliResult bad_p = cli({"simulate", "--scenario", "1", "--n", "100", "--p",
                                 "1.5", "--dropout", "uniform"});
    CHECK(bad_p.code == 2);
    CHECK(bad_p.err.find("--p") != std::string::npos);

    CHECK(cli({"simulate", "--n", "10"}).code == 2);  // scenario missing
    const CliResult extraneous =
        cli({"simulate", "--scenario", "2", "--n", "10", "--t-study", "3", "--p", "0.2"});
    CHECK(extraneous.code == 2);
    CHECK(extraneous.err.find("--p") != std::string::npos);
}

TEST_CASE("simulate config file with flag overrides") {
    TempDir dir;
    write_text_file(dir.file("run.cfg"),
                    "scenario=2\n"
                    "n=3000\n"
                    "t-study=3\n"
                    "seed=5\n");
    const CliResult from_file = cli({"simulate", "--config", dir.file("run.cfg")});
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("scenario 2  n=3000  seed=5") != std::string::npos);

    const CliResult overridden =
        cli({"simulate", "--config", dir.file("run.cfg"), "--n", "4000"});
    CHECK(overridden.code == 0);
    CHECK(overridden.out.find("n=4000") != std::string::npos);

    CHECK(cli({"simulate", "--config", dir.file("nope.cfg")}).code == 1);
}

TEST_CASE("simulate artifacts round-trip through analyze") {
    TempDir dir;
    const std::string dump = dir.file("data.csv");
    const std::string summary = dir.file("summary.csv");
    const std::string curve = dir.file("curve.csv");

    const CliResult sim =
        cli({"simulate", "--scenario", "1", "--n", "100000", "--p", "0.4", "--dropout",
             "beta:5,2", "--seed", "42", "--dump", dump, "--out-summary", summary,
             "--out-curve", curve});
    REQUIRE(sim.code == 0);
    CHECK(fs::exists(dump));
    CHECK(fs::exists(summary));
    CHECK(fs::exists(curve));

    const std::string curve_back = dir.file("curve_back.csv");
    const CliResult analysis =
        cli({"analyze", dump, "--at", "1.0", "--out-curve-all", curve_back});
    REQUIRE(analysis.code == 0);
    // Round-trip: the ingested breakdown equals the generating run's and
    // the re-fitted curve is byte-identical to the one simulate wrote.
    CHECK(analysis.out.find("dropout         40.000%") != std::string::npos);
    CHECK(analysis.out.find("failures        60.000%") != std::string::npos);
    CHECK(read_text_file(curve_back) == read_text_file(curve));

    // The biased fit sits well above 0.5 at t = ams; excluding the
    // dropouts restores the uncensored empirical law.
    const auto grab = [&](const char* key) {
        const std::size_t at = analysis.out.find(key);
        REQUIRE(at != std::string::npos);
        return std::stod(analysis.out.substr(at + std::string(key).size()));
    };
    const double all = grab("all-censored-equal = ");
    const double excluded = grab("dropouts-excluded = ");
    CHECK(all > 0.58);
    CHECK(all < 0.64);
    CHECK(std::fabs(excluded - 0.5) < 0.01);

    // The summary CSV carries the same s_at_ams the console reported.
    std::ifstream summary_in(summary);
    std::string header, row;
    std::getline(summary_in, header);
    std::getline(summary_in, row);
    CHECK(row.rfind("1,100000,42,", 0) == 0);
}

TEST_CASE("analyze reports parse errors with line numbers") {
    TempDir dir;
    write_text_file(dir.file("bad.csv"), "time,status\n1,lost-to-follow-up\n");
    const CliResult result = cli({"analyze", dir.file("bad.csv")});
    CHECK(result.code == 1);
    CHECK(result.err.find("bad.csv:2") != std::string::npos);
    CHECK(result.err.find("administrative") != std::string::npos);

    CHECK(cli({"analyze", dir.file("missing.csv")}).code == 1);
}

TEST_CASE("reproduce refuses small cohorts with a usage error") {
    const CliResult tiny = cli({"reproduce", "--table", "1", "--n", "100"});
    CHECK(tiny.code == 2);
    CHECK(tiny.err.find("100000") != std::string::npos);

    CHECK(cli({"reproduce", "--table", "9", "--n", "100000"}).code == 2);
    CHECK(cli({"reproduce"}).code == 2);  // --table is required
}

TEST_CASE("reproduce emits the markdown and csv reports") {
    TempDir dir;
    const std::string csv_path = dir.file("report.csv");
    const CliResult run = cli({"reproduce", "--table", "3", "--n", "150000", "--seed",
                               "42", "--out-csv", csv_path});
    CHECK((run.code == 0 || run.code == 1));  // tolerance gate is the acceptance's job
    CHECK(run.out.find("Table 3") != std::string::npos);
    CHECK(run.out.find("| 16 |") != std::string::npos);
    REQUIRE(fs::exists(csv_path));
    const std::string csv = read_text_file(csv_path);
    CHECK(csv.rfind("table,row,", 0) == 0);
    CHECK(csv.find(",s_at_ams,") != std::string::npos);
}

TEST_CASE("plot renders deterministic SVG from curve files") {
    TempDir dir;
    const std::string curve = dir.file("curve.csv");
    REQUIRE(cli({"simulate", "--scenario", "2", "--n", "5000", "--t-study", "3",
                 "--seed", "11", "--out-curve", curve})
                .code == 0);

    const std::string svg_path = dir.file("plot.svg");
    const CliResult first =
        cli({"plot", "--curve", curve + ":fit", "--out", svg_path, "--title", "demo"});
    REQUIRE(first.code == 0);
    const std::string once = read_text_file(svg_path);
    CHECK(once.rfind("<svg", 0) == 0);
    CHECK(once.find("demo") != std::string::npos);
    CHECK(once.find(">fit<") != std::string::npos);

    REQUIRE(cli({"plot", "--curve", curve + ":fit", "--out", svg_path, "--title",
                 "demo"})
                .code == 0);
    CHECK(read_text_file(svg_path) == once);  // byte-identical re-render

    // Missing and empty inputs are I/O errors naming the file.
    const CliResult missing =
        cli({"plot", "--curve", dir.file("none.csv"), "--out", svg_path});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("none.csv") != std::string::npos);

    write_text_file(dir.file("empty.csv"), "time,survival\n");
    const CliResult empty =
        cli({"plot", "--curve", dir.file("empty.csv"), "--out", svg_path});
    CHECK(empty.code == 1);
    CHECK(empty.err.find("no curve points") != std::string::npos);
}

TEST_CASE("oracle subcommands") {
    const CliResult fraction =
        cli({"oracle", "fraction", "--scenario", "2", "--t-study", "3"});
    REQUIRE(fraction.code == 0);
    CHECK(std::stod(fraction.out) ==
          doctest::Approx(admin_fraction_s2(std::numbers::ln2, 3.0)).epsilon(1e-12));

    const CliResult with_window = cli({"oracle", "fraction", "--scenario", "3",
                                       "--t-study", "3", "--t-recruitment", "0.5"});
    REQUIRE(with_window.code == 0);
    CHECK(std::stod(with_window.out) ==
          doctest::Approx(admin_fraction_s3(std::numbers::ln2, 3.0, 0.5)).epsilon(1e-12));

    CHECK(cli({"oracle", "fraction", "--scenario", "3", "--t-study", "3"}).code == 2);
    CHECK(cli({"oracle", "fraction", "--scenario", "1", "--t-study", "3"}).code == 2);
    CHECK(cli({"oracle"}).code == 2);

    const CliResult limit = cli({"oracle", "limit", "--p", "0", "--dropout", "uniform",
                                 "--points", "5", "--t-max", "4"});
    REQUIRE(limit.code == 0);
    std::istringstream in(limit.out);
    const PlotCurve curve = read_step_curve_csv(in, "stdout");
    REQUIRE(curve.times.size() == 5);
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        CHECK(curve.survival[i] ==
              doctest::Approx(std::exp(-std::numbers::ln2 * curve.times[i]))
                  .epsilon(1e-9));
    }
    CHECK(cli({"oracle", "limit", "--p", "2", "--dropout", "uniform"}).code == 2);
}

TEST_CASE("dataset dumps are byte-identical across worker counts") {
    TempDir dir;
    const std::string one = dir.file("one.csv");
    const std::string five = dir.file("five.csv");
    const std::vector<std::string> base = {"simulate", "--scenario", "4",    "--n",
                                           "50000",    "--p",        "0.3",  "--dropout",
                                           "uniform",  "--t-study",  "3",    "--t-recruitment",
                                           "0.5",      "--seed",     "123"};
    auto with = [&](const char* threads, const std::string& path) {
        std::vector<std::string> args = base;
        args.insert(args.end(), {"--threads", threads, "--dump", path});
        return cli(args);
    };
    REQUIRE(with("1", one).code == 0);
    REQUIRE(with("5", five).code == 0);
    CHECK(read_text_file(one) == read_text_file(five));
}
