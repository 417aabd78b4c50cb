#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "kmbias/io.hpp"
#include "kmbias/scenarios.hpp"

using namespace kmbias;

TEST_CASE("format_double round-trips exactly") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> dist(0.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = dist(rng);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("dataset CSV round-trips bit-for-bit") {
    ScenarioConfig config;
    config.scenario = Scenario::S4;
    config.n = 2000;
    config.p = 0.3;
    config.dropout = DropoutSpec::parse("beta:2,5");
    config.t_study = 3.0;
    config.t_recruitment = 0.5;
    config.seed = 8;
    const SurvivalDataset data = run_scenario(config);

    std::ostringstream out;
    write_dataset_csv(out, data);
    std::istringstream in(out.str());
    const SurvivalDataset back = read_dataset_csv(in, "mem.csv");
    CHECK(back.records() == data.records());
    CHECK_FALSE(back.provenance().has_value());  // provenance is not serialized

    // Writing the re-read dataset reproduces the same bytes.
    std::ostringstream out2;
    write_dataset_csv(out2, back);
    CHECK(out2.str() == out.str());
}

TEST_CASE("dataset parse errors carry source and line number") {
    const auto error_of = [](const std::string& content) -> std::string {
        std::istringstream in(content);
        try {
            read_dataset_csv(in, "bad.csv");
            return {};
        } catch (const std::runtime_error& e) {
            return e.what();
        }
    };

    CHECK(error_of("").find("bad.csv:1") != std::string::npos);
    CHECK(error_of("wrong,header\n").find("bad.csv:1") != std::string::npos);
    CHECK(error_of("time,status\n1.5\n").find("bad.csv:2") != std::string::npos);
    CHECK(error_of("time,status\n1.5,failure\nx,failure\n").find("bad.csv:3") !=
          std::string::npos);
    CHECK(error_of("time,status\n-2,failure\n").find("non-negative") !=
          std::string::npos);

    const std::string vocab = error_of("time,status\n1,lost-to-follow-up\n");
    CHECK(vocab.find("bad.csv:2") != std::string::npos);
    CHECK(vocab.find("lost-to-follow-up") != std::string::npos);
    CHECK(vocab.find("failure") != std::string::npos);
    CHECK(vocab.find("dropout") != std::string::npos);
    CHECK(vocab.find("administrative") != std::string::npos);

    // Blank lines and CRLF endings are tolerated.
    std::istringstream fine("time,status\r\n1,failure\r\n\r\n2,dropout\r\n");
    const SurvivalDataset data = read_dataset_csv(fine, "fine.csv");
    CHECK(data.size() == 2);
    CHECK(data.records()[1].status == Status::DropoutCensored);
}

TEST_CASE("km curve CSV is readable as a step curve") {
    const SurvivalDataset data({{1, Status::Failure},
                                {2, Status::DropoutCensored},
                                {3, Status::Failure},
                                {4, Status::Failure}});
    const KmCurve curve = fit_km(data, CensorPolicy::AllCensoredEqual);
    std::ostringstream out;
    write_km_curve_csv(out, curve);

    std::istringstream in(out.str());
    const PlotCurve plot = read_step_curve_csv(in, "curve.csv");
    CHECK(plot.times == curve.event_times);
    CHECK(plot.survival == curve.survival);
}

TEST_CASE("limit curve CSV is readable as a step curve") {
    LimitCurve curve;
    curve.times = {0.0, 1.0, 2.0};
    curve.survival = {1.0, 0.6, 0.35};
    std::ostringstream out;
    write_limit_curve_csv(out, curve);
    CHECK(out.str() == "time,survival\n0,1\n1,0.6\n2,0.35\n");

    std::istringstream in(out.str());
    const PlotCurve plot = read_step_curve_csv(in, "limit.csv");
    CHECK(plot.times == curve.times);
    CHECK(plot.survival == curve.survival);
}

TEST_CASE("step-curve parse errors") {
    const auto error_of = [](const std::string& content) -> std::string {
        std::istringstream in(content);
        try {
            read_step_curve_csv(in, "c.csv");
            return {};
        } catch (const std::runtime_error& e) {
            return e.what();
        }
    };
    CHECK(error_of("nope\n").find("c.csv:1") != std::string::npos);
    CHECK(error_of("time,survival\n1\n").find("c.csv:2") != std::string::npos);
    CHECK(error_of("time,survival\n1,2\n").find("[0, 1]") != std::string::npos);
    CHECK(error_of("time,survival\n2,0.5\n1,0.4\n").find("strictly increasing") !=
          std::string::npos);
    // A file with a header but no rows is an I/O error naming the file.
    CHECK(error_of("time,survival\n").find("c.csv") != std::string::npos);
    CHECK(error_of("time,survival\n").find("no curve points") != std::string::npos);
}

TEST_CASE("summary CSV has config columns only with provenance") {
    ScenarioConfig config;
    config.scenario = Scenario::S2;
    config.n = 4000;
    config.t_study = 3.0;
    config.seed = 12;
    const SurvivalDataset data = run_scenario(config);
    const SimulationSummary summary = summarize(data, config.lambda);

    std::ostringstream with;
    write_summary_csv(with, config, summary);
    const std::string text = with.str();
    const std::string header = text.substr(0, text.find('\n'));
    const std::string row = text.substr(text.find('\n') + 1);
    CHECK(std::count(header.begin(), header.end(), ',') ==
          std::count(row.begin(), row.end(), ','));
    CHECK(row.rfind("2,4000,12,", 0) == 0);

    std::ostringstream without;
    write_summary_csv(without, std::nullopt, summary);
    CHECK(without.str().find("\n,,,,,,,,") != std::string::npos);
}

TEST_CASE("file helpers report the path") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "kmbias_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "hello.txt").string();

    write_text_file(path, "payload");
    CHECK(read_text_file(path) == "payload");

    try {
        read_text_file((dir / "missing.txt").string());
        CHECK(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
    }
    try {
        write_text_file((dir / "no_such_dir" / "f.txt").string(), "x");
        CHECK(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("f.txt") != std::string::npos);
    }
    fs::remove_all(dir);
}
