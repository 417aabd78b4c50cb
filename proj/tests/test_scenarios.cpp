#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kmbias/oracles.hpp"
#include "kmbias/random.hpp"
#include "kmbias/scenarios.hpp"

using namespace kmbias;

namespace {

ScenarioConfig s1_config(std::int64_t n, double p, const char* law,
                         std::uint64_t seed) {
    ScenarioConfig config;
    config.scenario = Scenario::S1;
    config.n = n;
    config.p = p;
    config.dropout = DropoutSpec::parse(law);
    config.seed = seed;
    return config;
}

ScenarioConfig s3_config(std::int64_t n, double t_study, double t_recruitment,
                         std::uint64_t seed) {
    ScenarioConfig config;
    config.scenario = Scenario::S3;
    config.n = n;
    config.t_study = t_study;
    config.t_recruitment = t_recruitment;
    config.seed = seed;
    return config;
}

// The generator keys each subject's draws by (subject, role); role 0
// is the latent failure time. Reconstructing it here lets the tests
// see the latent value behind a censored record.
double latent_failure_time(const ScenarioConfig& config, std::int64_t subject) {
    RandomStream stream(config.seed, static_cast<std::uint64_t>(subject));
    return sample_exponential(stream, config.lambda);
}

}  // namespace

TEST_CASE("scenario 1 censors an exact round(p*n) subset") {
    for (double p : {0.0, 0.2, 0.4, 0.6, 1.0}) {
        const ScenarioConfig config = s1_config(1001, p, "beta:5,2", 11);
        const SurvivalDataset data = run_scenario(config);
        const auto counts = data.counts();
        CHECK(counts.dropouts == std::llround(p * 1001));
        CHECK(counts.failures == 1001 - counts.dropouts);
        CHECK(counts.administrative == 0);
        CHECK(data.provenance() == config);
    }
}

TEST_CASE("scenario 1 fixture: exact records for a pinned seed") {
    const SurvivalDataset data = run_scenario(s1_config(5, 0.4, "beta:5,2", 42));
    REQUIRE(data.size() == 5);
    const auto& r = data.records();
    CHECK(r[0] == SubjectRecord{1.5308983328754786, Status::Failure});
    CHECK(r[1] == SubjectRecord{0.165453700641126, Status::DropoutCensored});
    CHECK(r[2] == SubjectRecord{1.4247271719878136, Status::Failure});
    CHECK(r[3] == SubjectRecord{1.3433101849840468, Status::Failure});
    CHECK(r[4] == SubjectRecord{0.10888591755138795, Status::DropoutCensored});
}

TEST_CASE("scenario 3 fixture: exact records for a pinned seed") {
    const SurvivalDataset data = run_scenario(s3_config(4, 3.0, 0.5, 7));
    REQUIRE(data.size() == 4);
    const auto& r = data.records();
    CHECK(r[0] == SubjectRecord{2.6990135971354676, Status::AdministrativeCensored});
    CHECK(r[1] == SubjectRecord{0.9195208865650083, Status::Failure});
    CHECK(r[2] == SubjectRecord{0.41666037306956943, Status::Failure});
    CHECK(r[3] == SubjectRecord{1.4316315624739606, Status::Failure});
}

TEST_CASE("dropout happens strictly before the subject's latent failure") {
    const ScenarioConfig config = s1_config(5000, 0.5, "uniform", 99);
    const SurvivalDataset data = run_scenario(config);
    std::int64_t i = 0;
    for (const SubjectRecord& record : data.records()) {
        const double latent = latent_failure_time(config, i++);
        if (record.status == Status::DropoutCensored) {
            CHECK(record.time < latent);
            CHECK(record.time >= 0.0);
        } else {
            CHECK(record.time == latent);
        }
    }
}

TEST_CASE("scenario 2 matches its closed-form censoring fraction") {
    ScenarioConfig config;
    config.scenario = Scenario::S2;
    config.n = 40000;
    config.t_study = 3.0;
    config.seed = 5;
    const SurvivalDataset data = run_scenario(config);

    for (const SubjectRecord& record : data.records()) {
        CHECK(record.time < 3.0);  // every residual window is below t_study
    }
    const double expected = admin_fraction_s2(config.lambda, 3.0);
    const double observed =
        static_cast<double>(data.counts().administrative) / static_cast<double>(config.n);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(config.n));
    CHECK(std::fabs(observed - expected) < 5.0 * se);
}

TEST_CASE("scenario 3 censors inside the residual entry window") {
    const ScenarioConfig config = s3_config(40000, 3.0, 0.5, 6);
    const SurvivalDataset data = run_scenario(config);
    for (const SubjectRecord& record : data.records()) {
        if (record.status == Status::AdministrativeCensored) {
            CHECK(record.time >= 2.5);  // t_study - t_recruitment
            CHECK(record.time < 3.0);
        } else {
            CHECK(record.time < 3.0);
        }
    }
    const double expected = admin_fraction_s3(config.lambda, 3.0, 0.5);
    const double observed =
        static_cast<double>(data.counts().administrative) / static_cast<double>(config.n);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(config.n));
    CHECK(std::fabs(observed - expected) < 5.0 * se);
}

TEST_CASE("scenario reduction: recruitment window equal to the study") {
    // With R = T the entry window of scenario 3 is the whole study, so
    // the draw-by-draw behaviour coincides with scenario 2.
    ScenarioConfig s2;
    s2.scenario = Scenario::S2;
    s2.n = 5000;
    s2.t_study = 3.0;
    s2.seed = 17;

    const SurvivalDataset from_s3 = run_scenario(s3_config(5000, 3.0, 3.0, 17));
    const SurvivalDataset from_s2 = run_scenario(s2);
    CHECK(from_s3.records() == from_s2.records());
}

TEST_CASE("scenario reduction: p = 0 turns scenario 4 into scenario 3") {
    ScenarioConfig s4;
    s4.scenario = Scenario::S4;
    s4.n = 5000;
    s4.p = 0.0;
    s4.dropout = DropoutSpec::unit_uniform();
    s4.t_study = 3.0;
    s4.t_recruitment = 0.5;
    s4.seed = 23;

    const SurvivalDataset from_s4 = run_scenario(s4);
    const SurvivalDataset from_s3 = run_scenario(s3_config(5000, 3.0, 0.5, 23));
    CHECK(from_s4.records() == from_s3.records());
}

TEST_CASE("scenario 4 labels by whichever risk cuts follow-up first") {
    ScenarioConfig config;
    config.scenario = Scenario::S4;
    config.n = 20000;
    config.p = 0.3;
    config.dropout = DropoutSpec::parse("beta:2,5");
    config.t_study = 3.0;
    config.t_recruitment = 0.5;
    config.seed = 31;
    const SurvivalDataset data = run_scenario(config);

    const auto counts = data.counts();
    CHECK(counts.failures > 0);
    CHECK(counts.dropouts > 0);
    CHECK(counts.administrative > 0);
    // Dropout can only shrink relative to the selected share: some of
    // the round(p*n) selected subjects hit the study end first.
    CHECK(counts.dropouts <= std::llround(0.3 * 20000));
    for (const SubjectRecord& record : data.records()) {
        CHECK(record.time < 3.0);
        if (record.status == Status::AdministrativeCensored) {
            CHECK(record.time >= 2.5);
        }
    }
}

TEST_CASE("results do not depend on the worker count") {
    ScenarioConfig config;
    config.scenario = Scenario::S4;
    config.n = 30000;
    config.p = 0.4;
    config.dropout = DropoutSpec::parse("beta:5,2");
    config.t_study = 3.0;
    config.t_recruitment = 0.5;
    config.seed = 77;

    const SurvivalDataset one = run_scenario(config, 1);
    const SurvivalDataset seven = run_scenario(config, 7);
    const SurvivalDataset defaulted = run_scenario(config);
    CHECK(one.records() == seven.records());
    CHECK(one.records() == defaulted.records());
}

TEST_CASE("run_scenario validates its config") {
    ScenarioConfig bad;
    bad.scenario = Scenario::S1;
    bad.n = 100;
    bad.p = 1.5;
    bad.dropout = DropoutSpec::unit_uniform();
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
}

TEST_CASE("summarize reports the fit at the actual median survival") {
    const ScenarioConfig config = s1_config(50000, 0.4, "beta:5,2", 3);
    const SurvivalDataset data = run_scenario(config);
    const SimulationSummary summary = summarize(data, config.lambda);

    CHECK(summary.ams == doctest::Approx(1.0));
    const KmCurve curve = fit_km(data, CensorPolicy::AllCensoredEqual);
    CHECK(summary.s_at_ams == survival_at(curve, summary.ams).value);
    CHECK(summary.median == median_survival(curve));
    REQUIRE(summary.ms_over_ams.has_value());
    CHECK(*summary.ms_over_ams == doctest::Approx(*summary.median / summary.ams));
    CHECK(summary.breakdown.pct_failures + summary.breakdown.pct_censored() ==
          doctest::Approx(100.0));
    // The bias direction is upward: dropout inflates the estimate.
    CHECK(summary.s_at_ams > 0.55);

    CHECK_THROWS_AS(summarize(data, 0.0), std::invalid_argument);
}
