#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmbias/config.hpp"

namespace kmbias {

/// Why a subject's follow-up ended.
enum class Status : std::uint8_t {
    Failure = 0,                 ///< the event of interest was observed
    DropoutCensored = 1,         ///< subject left the study early
    AdministrativeCensored = 2,  ///< study ended before the event
};

const char* status_name(Status status);
Status status_from_name(const std::string& name);

struct SubjectRecord {
    double time = 0.0;
    Status status = Status::Failure;

    bool operator==(const SubjectRecord&) const = default;
};

/// An observed cohort: one record per subject, with optional provenance
/// describing the simulation that produced it. Construction validates
/// that every time is finite and non-negative; the container may be
/// empty, but estimation operations reject empty input.
class SurvivalDataset {
public:
    SurvivalDataset() = default;
    explicit SurvivalDataset(std::vector<SubjectRecord> records,
                             std::optional<ScenarioConfig> provenance = std::nullopt);

    const std::vector<SubjectRecord>& records() const { return records_; }
    const std::optional<ScenarioConfig>& provenance() const { return provenance_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    struct StatusCounts {
        std::int64_t failures = 0;
        std::int64_t dropouts = 0;
        std::int64_t administrative = 0;
    };
    StatusCounts counts() const;

private:
    std::vector<SubjectRecord> records_;
    std::optional<ScenarioConfig> provenance_;
};

/// How censored records enter the product-limit estimate.
enum class CensorPolicy {
    /// Both censoring kinds are treated as plain right-censoring.
    AllCensoredEqual,
    /// Dropout-censored subjects are removed entirely before fitting;
    /// administrative censoring is still handled as right-censoring.
    ExcludeDropouts,
};

/// Product-limit estimate as a right-continuous step function. The
/// arrays are parallel and indexed by distinct failure time:
/// survival[i] is the estimate on [event_times[i], event_times[i+1]).
/// Before the first failure the estimate is 1.
struct KmCurve {
    std::vector<double> event_times;     ///< strictly increasing
    std::vector<double> survival;        ///< non-increasing, within [0, 1]
    std::vector<std::int64_t> at_risk;   ///< risk-set size just before each time
    std::vector<std::int64_t> deaths;    ///< failures at each time
    std::int64_t n_total = 0;            ///< subjects entering the fit
    double t_max_observed = 0.0;         ///< largest time of any record
    bool reaches_zero = false;           ///< true when the estimate hits 0
};

/// Fits the Kaplan-Meier estimator. At tied times, failures are
/// processed before censorings (both leave the risk set after the tied
/// time point). Throws std::runtime_error when no records remain after
/// applying the policy.
KmCurve fit_km(const SurvivalDataset& data, CensorPolicy policy);

/// A survival probability together with a flag telling whether the
/// query time lies beyond the largest observed time, where the step
/// function is extrapolated as constant.
struct SurvivalValue {
    double value = 1.0;
    bool beyond_data = false;
};

/// Evaluates the fitted step curve at time t (right-continuous).
/// Throws std::invalid_argument for negative or non-finite t.
SurvivalValue survival_at(const KmCurve& curve, double t);

/// Smallest event time with survival <= 0.5, or nullopt when the curve
/// never reaches 0.5.
std::optional<double> median_survival(const KmCurve& curve);

/// Share of subjects per status, in percent of the whole cohort.
struct CensoringBreakdown {
    std::int64_t n_total = 0;
    std::int64_t n_failures = 0;
    std::int64_t n_dropout = 0;
    std::int64_t n_administrative = 0;
    double pct_failures = 0.0;
    double pct_dropout = 0.0;
    double pct_administrative = 0.0;
    double pct_censored() const { return pct_dropout + pct_administrative; }
};

/// Throws std::invalid_argument on an empty dataset.
CensoringBreakdown censoring_breakdown(const SurvivalDataset& data);

/// Compares the two censoring policies on a common time grid. The gap
/// vector holds |S_all(t) - S_excluded(t)| per evaluation time.
struct SensitivityReport {
    KmCurve curve_all;
    KmCurve curve_excluded;
    std::vector<double> eval_times;
    std::vector<double> gaps;
    double max_abs_gap = 0.0;
};

SensitivityReport dropout_sensitivity(const SurvivalDataset& data,
                                      const std::vector<double>& eval_times);

}  // namespace kmbias
