#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmbias/config.hpp"
#include "kmbias/scenarios.hpp"

namespace kmbias {

/// The four bundled reference tables (large-n results for the four
/// censoring scenarios, all at lambda = ln 2 so ams = 1):
///   1: pure dropout censoring, three dropout laws x P in {20,40,60}
///   2: administrative censoring, entry uniform over a study of
///      length T in {1,...,6}
///   3: administrative censoring with a recruitment window,
///      T in {3..6} x R in {0.5..2}
///   4: dropout plus administrative censoring at T=3, R=0.5
enum class TableId : int { T1 = 1, T2 = 2, T3 = 3, T4 = 4 };

TableId table_from_int(int id);

/// One reference row: the scenario knobs it was produced with plus the
/// expected outputs; fields not reported by that table stay nullopt.
struct ReferenceRow {
    int index = 0;  ///< 1-based position within the table
    std::optional<std::string> dropout;
    std::optional<double> p;  ///< dropout share, percent
    std::optional<double> t_study;
    std::optional<double> t_recruitment;

    std::optional<double> pct_censored;
    std::optional<double> s_at_ams;
    std::optional<double> ms_over_ams;
    std::optional<double> pct_administrative;
    std::optional<double> pct_dropout;
};

const std::vector<ReferenceRow>& reference_table(TableId table);
std::string table_title(TableId table);

/// One compared quantity within a row.
struct MetricResult {
    std::string name;
    double simulated = 0.0;
    double reference = 0.0;
    double abs_diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RowResult {
    ReferenceRow ref;
    ScenarioConfig config;
    SimulationSummary summary;
    std::vector<MetricResult> metrics;
    bool pass = false;
};

struct TableReport {
    TableId table = TableId::T1;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    std::vector<RowResult> rows;
    bool pass = false;
    double elapsed_seconds = 0.0;
};

/// Re-runs every row of a reference table at cohort size n and checks
/// the simulated quantities against the stored values. Tolerances:
/// S(ams) +-0.01 and ms/ams +-0.03 everywhere; censoring percentages
/// +-0.3 points for tables 2/3, +-0.5 points for table 4, and exact up
/// to the round(p*n) selection for table 1. Per-row seeds are derived
/// as seed + row index. Throws std::invalid_argument when n < 10^5:
/// smaller cohorts cannot meet the tolerances and would only produce
/// noise.
TableReport reproduce_table(TableId table, std::int64_t n, std::uint64_t seed,
                            int threads = 0);

std::string table_report_markdown(const TableReport& report);
std::string table_report_csv(const TableReport& report);

}  // namespace kmbias
