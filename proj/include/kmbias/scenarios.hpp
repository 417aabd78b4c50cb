#pragma once

#include <cstdint>
#include <optional>

#include "kmbias/config.hpp"
#include "kmbias/survival.hpp"

namespace kmbias {

/// Runs the simulation described by `config` (which must validate) and
/// returns one record per subject. `threads <= 0` picks a worker count
/// automatically. Results are bit-identical for every worker count:
/// each subject draws from its own counter-based streams, keyed by
/// subject index and the role of the draw, so the partition into
/// worker ranges cannot influence any value.
///
/// Scenario 1: latent failure times are Exp(lambda); an exact
/// round(p*n) subset of subjects (chosen uniformly without
/// replacement) drops out at a random fraction of its own failure
/// time, drawn via the dropout law. Scenario 2 censors at a uniform
/// residual time in (0, t_study); scenario 3 at a residual time
/// uniform in (t_study - t_recruitment, t_study); scenario 4 combines
/// scenario 1 dropout with scenario 3 administrative censoring,
/// whichever cuts follow-up first.
SurvivalDataset run_scenario(const ScenarioConfig& config, int threads = 0);

/// Headline numbers for one simulated cohort: censoring breakdown plus
/// the two bias-facing quantities, the Kaplan-Meier estimate at the
/// actual median survival (ams = ln 2 / lambda) and the estimated
/// median expressed in units of ams (absent when the curve never
/// reaches 0.5).
struct SimulationSummary {
    CensoringBreakdown breakdown;
    double ams = 0.0;
    double s_at_ams = 0.0;
    bool s_at_ams_beyond_data = false;
    std::optional<double> median;
    std::optional<double> ms_over_ams;
};

/// Fits with CensorPolicy::AllCensoredEqual (the estimator under
/// study) and evaluates the summary quantities. `lambda` fixes the
/// time unit; pass the value the data was generated with.
SimulationSummary summarize(const SurvivalDataset& data, double lambda);

}  // namespace kmbias
