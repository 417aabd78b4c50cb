#pragma once

#include <vector>

#include "kmbias/random.hpp"
#include "kmbias/survival.hpp"

namespace kmbias {

/// Closed-form expected administrative-censoring fraction when entry
/// is uniform over the whole study of length t_study:
///   P(censored) = (1 - exp(-lambda * t_study)) / (lambda * t_study).
double admin_fraction_s2(double lambda, double t_study);

/// Same, with recruitment restricted to an initial window of length
/// t_recruitment (0 < t_recruitment <= t_study):
///   P(censored) = exp(-lambda*(t_study - t_recruitment))
///                 * (1 - exp(-lambda*t_recruitment))
///                 / (lambda * t_recruitment).
/// Reduces exactly to admin_fraction_s2 at t_recruitment == t_study.
double admin_fraction_s3(double lambda, double t_study, double t_recruitment);

/// A survival function tabulated on an explicit grid (no risk-set
/// sizes: this is a population quantity, not an estimate).
struct LimitCurve {
    std::vector<double> times;
    std::vector<double> survival;
};

/// Large-sample limit of the Kaplan-Meier estimate under the dropout
/// scenario, evaluated on `grid` (non-negative, strictly increasing).
/// With dropout prevalence p and dropout times equal to a random
/// fraction of the subject's own failure time, the censoring is
/// dependent and the estimator converges to exp(-H(t)) where H is the
/// integral of the observable "failure subhazard"
///   h(t) = (1-p) lambda e^{-lambda t} / Pr(observed time > t),
/// not the true cumulative hazard; the mismatch is the bias under
/// study. At p == 0 this reduces to exp(-lambda t).
LimitCurve km_limit_scenario1(double p, const DropoutSpec& dropout, double lambda,
                              const std::vector<double>& grid);

/// Textbook O(n^2) product-limit evaluation (all censored records
/// treated alike), sharing no code with fit_km. Intended as a test
/// oracle; refuses datasets above 10^4 records.
KmCurve brute_force_km(const SurvivalDataset& data);

}  // namespace kmbias
