#include "kmbias/survival.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kmbias {

const char* status_name(Status status) {
    switch (status) {
        case Status::Failure: return "failure";
        case Status::DropoutCensored: return "dropout";
        case Status::AdministrativeCensored: return "administrative";
    }
    throw std::invalid_argument("unknown status value");
}

Status status_from_name(const std::string& name) {
    if (name == "failure") return Status::Failure;
    if (name == "dropout") return Status::DropoutCensored;
    if (name == "administrative") return Status::AdministrativeCensored;
    throw std::invalid_argument("invalid status '" + name +
                                "' (allowed: failure, dropout, administrative)");
}

SurvivalDataset::SurvivalDataset(std::vector<SubjectRecord> records,
                                 std::optional<ScenarioConfig> provenance)
    : records_(std::move(records)), provenance_(std::move(provenance)) {
    for (const SubjectRecord& record : records_) {
        if (!std::isfinite(record.time) || record.time < 0.0) {
            throw std::invalid_argument("subject times must be finite and non-negative");
        }
    }
}

SurvivalDataset::StatusCounts SurvivalDataset::counts() const {
    StatusCounts counts;
    for (const SubjectRecord& record : records_) {
        switch (record.status) {
            case Status::Failure: ++counts.failures; break;
            case Status::DropoutCensored: ++counts.dropouts; break;
            case Status::AdministrativeCensored: ++counts.administrative; break;
        }
    }
    return counts;
}

KmCurve fit_km(const SurvivalDataset& data, CensorPolicy policy) {
    // Collapse to (time, censored) pairs under the chosen policy.
    struct Observation {
        double time;
        bool censored;
    };
    std::vector<Observation> observations;
    observations.reserve(data.size());
    for (const SubjectRecord& record : data.records()) {
        if (policy == CensorPolicy::ExcludeDropouts &&
            record.status == Status::DropoutCensored) {
            continue;
        }
        observations.push_back({record.time, record.status != Status::Failure});
    }
    if (observations.empty()) {
        throw std::runtime_error(
            "Kaplan-Meier fit needs at least one record after applying the "
            "censoring policy");
    }

    // Failures sort before censorings at the same time, so a tied block
    // contributes its failures while the censored subjects are still in
    // the risk set.
    std::sort(observations.begin(), observations.end(),
              [](const Observation& a, const Observation& b) {
                  if (a.time != b.time) return a.time < b.time;
                  return a.censored < b.censored;
              });

    KmCurve curve;
    curve.n_total = static_cast<std::int64_t>(observations.size());
    curve.t_max_observed = observations.back().time;

    std::int64_t at_risk = curve.n_total;
    double survival = 1.0;
    std::size_t i = 0;
    while (i < observations.size()) {
        const double time = observations[i].time;
        std::int64_t deaths = 0;
        std::int64_t leaving = 0;
        for (; i < observations.size() && observations[i].time == time; ++i) {
            deaths += observations[i].censored ? 0 : 1;
            ++leaving;
        }
        if (deaths > 0) {
            survival *= 1.0 - static_cast<double>(deaths) / static_cast<double>(at_risk);
            curve.event_times.push_back(time);
            curve.survival.push_back(survival);
            curve.at_risk.push_back(at_risk);
            curve.deaths.push_back(deaths);
        }
        at_risk -= leaving;
    }
    curve.reaches_zero = !curve.survival.empty() && curve.survival.back() == 0.0;
    return curve;
}

SurvivalValue survival_at(const KmCurve& curve, double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw std::invalid_argument("survival_at: time must be finite and non-negative");
    }
    SurvivalValue result;
    result.beyond_data = t > curve.t_max_observed;
    // Right-continuous lookup: the step at event_times[i] already counts.
    const auto after =
        std::upper_bound(curve.event_times.begin(), curve.event_times.end(), t);
    if (after == curve.event_times.begin()) {
        result.value = 1.0;
    } else {
        result.value = curve.survival[static_cast<std::size_t>(
            std::distance(curve.event_times.begin(), after) - 1)];
    }
    return result;
}

std::optional<double> median_survival(const KmCurve& curve) {
    // survival is non-increasing, so the first index at or below 0.5 is
    // found by binary search.
    const auto at_or_below = std::partition_point(
        curve.survival.begin(), curve.survival.end(),
        [](double s) { return s > 0.5; });
    if (at_or_below == curve.survival.end()) return std::nullopt;
    return curve.event_times[static_cast<std::size_t>(
        std::distance(curve.survival.begin(), at_or_below))];
}

CensoringBreakdown censoring_breakdown(const SurvivalDataset& data) {
    if (data.empty()) {
        throw std::invalid_argument("censoring_breakdown: dataset is empty");
    }
    const SurvivalDataset::StatusCounts counts = data.counts();
    CensoringBreakdown breakdown;
    breakdown.n_total = static_cast<std::int64_t>(data.size());
    breakdown.n_failures = counts.failures;
    breakdown.n_dropout = counts.dropouts;
    breakdown.n_administrative = counts.administrative;
    const double denom = static_cast<double>(breakdown.n_total);
    breakdown.pct_failures = 100.0 * static_cast<double>(counts.failures) / denom;
    breakdown.pct_dropout = 100.0 * static_cast<double>(counts.dropouts) / denom;
    breakdown.pct_administrative =
        100.0 * static_cast<double>(counts.administrative) / denom;
    return breakdown;
}

SensitivityReport dropout_sensitivity(const SurvivalDataset& data,
                                      const std::vector<double>& eval_times) {
    SensitivityReport report;
    report.curve_all = fit_km(data, CensorPolicy::AllCensoredEqual);
    report.curve_excluded = fit_km(data, CensorPolicy::ExcludeDropouts);
    report.eval_times = eval_times;
    report.gaps.reserve(eval_times.size());
    for (double t : eval_times) {
        const double gap = std::fabs(survival_at(report.curve_all, t).value -
                                     survival_at(report.curve_excluded, t).value);
        report.gaps.push_back(gap);
        report.max_abs_gap = std::max(report.max_abs_gap, gap);
    }
    return report;
}

}  // namespace kmbias
