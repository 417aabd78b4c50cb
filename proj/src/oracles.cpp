#include "kmbias/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kmbias/integrate.hpp"

namespace kmbias {

namespace {

void check_rate(double lambda) {
    if (!std::isfinite(lambda) || lambda <= 0.0) {
        throw std::invalid_argument("lambda must be positive and finite");
    }
}

}  // namespace

double admin_fraction_s2(double lambda, double t_study) {
    check_rate(lambda);
    if (!std::isfinite(t_study) || t_study <= 0.0) {
        throw std::invalid_argument("t_study must be positive and finite");
    }
    // expm1 keeps the small-lambda*t limit (-> 1) accurate.
    const double x = lambda * t_study;
    return -std::expm1(-x) / x;
}

double admin_fraction_s3(double lambda, double t_study, double t_recruitment) {
    check_rate(lambda);
    if (!std::isfinite(t_study) || t_study <= 0.0) {
        throw std::invalid_argument("t_study must be positive and finite");
    }
    if (!std::isfinite(t_recruitment) || t_recruitment <= 0.0 ||
        t_recruitment > t_study) {
        throw std::invalid_argument("t_recruitment must lie in (0, t_study]");
    }
    const double x = lambda * t_recruitment;
    return std::exp(-lambda * (t_study - t_recruitment)) * (-std::expm1(-x) / x);
}

LimitCurve km_limit_scenario1(double p, const DropoutSpec& dropout, double lambda,
                              const std::vector<double>& grid) {
    check_rate(lambda);
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw std::invalid_argument("p must lie in [0, 1]");
    }
    if (grid.empty()) {
        throw std::invalid_argument("evaluation grid must not be empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0 ||
            (i > 0 && grid[i] <= grid[i - 1])) {
            throw std::invalid_argument(
                "evaluation grid must be non-negative and strictly increasing");
        }
    }

    // The subject keeps a multiplier m of its own failure time, so the
    // dropout time is m*T. With fraction u ~ Beta(alpha, beta) the
    // multiplier m = 1 - u follows Beta(beta, alpha); the quadrature
    // below assumes that density is bounded.
    double dens_a = 1.0;  // multiplier density ~ v^(dens_a-1) (1-v)^(dens_b-1)
    double dens_b = 1.0;
    double dens_norm = 1.0;
    if (dropout.kind == DropoutSpec::Kind::Beta) {
        dens_a = dropout.beta;
        dens_b = dropout.alpha;
        if (dens_a < 1.0 || dens_b < 1.0) {
            throw std::invalid_argument(
                "limit curve requires beta dropout parameters >= 1 (bounded "
                "multiplier density)");
        }
        dens_norm = std::exp(std::lgamma(dens_a + dens_b) - std::lgamma(dens_a) -
                             std::lgamma(dens_b));
    }
    const auto multiplier_density = [&](double v) {
        return dens_norm * std::pow(v, dens_a - 1.0) * std::pow(1.0 - v, dens_b - 1.0);
    };

    // P(m*T > s) = integral over v of exp(-lambda*s/v) * density(v).
    // Multipliers below lambda*s/45 contribute at most exp(-45) ~ 3e-20
    // and are clipped away so the integrand stays well scaled.
    const auto dropout_survivor = [&](double s) {
        if (s <= 0.0) return 1.0;
        const double x = lambda * s;
        const double lo = x / 45.0;
        if (lo >= 1.0) return 0.0;
        const auto integrand = [&](double v) {
            return std::exp(-x / v) * multiplier_density(v);
        };
        return integrate(integrand, lo, 1.0, 1e-10);
    };

    // Observable failure subhazard: failures occur only among the 1-p
    // never-dropout subjects, while the at-risk probability mixes both
    // groups. Integrating it yields the limit of the cumulative hazard
    // the estimator actually sees.
    const auto subhazard = [&](double s) {
        if (p == 1.0) return 0.0;
        const double failure_density = (1.0 - p) * lambda * std::exp(-lambda * s);
        const double at_risk =
            (1.0 - p) * std::exp(-lambda * s) + p * dropout_survivor(s);
        return failure_density / at_risk;
    };

    LimitCurve curve;
    curve.times = grid;
    curve.survival.reserve(grid.size());
    const double total_len = std::max(grid.back(), 1e-300);
    double cumulative = 0.0;
    double prev = 0.0;
    for (double t : grid) {
        if (t > prev) {
            const double tol = 1e-8 * ((t - prev) / total_len) + 1e-14;
            cumulative += integrate(subhazard, prev, t, tol);
        }
        curve.survival.push_back(std::exp(-cumulative));
        prev = t;
    }
    return curve;
}

KmCurve brute_force_km(const SurvivalDataset& data) {
    if (data.size() > 10000) {
        throw std::invalid_argument(
            "brute_force_km is a test oracle; it accepts at most 10^4 records");
    }
    if (data.empty()) {
        throw std::runtime_error("brute_force_km needs at least one record");
    }
    const std::vector<SubjectRecord>& records = data.records();

    std::vector<double> failure_times;
    for (const SubjectRecord& record : records) {
        if (record.status == Status::Failure) failure_times.push_back(record.time);
    }
    std::sort(failure_times.begin(), failure_times.end());
    failure_times.erase(std::unique(failure_times.begin(), failure_times.end()),
                        failure_times.end());

    KmCurve curve;
    curve.n_total = static_cast<std::int64_t>(records.size());
    for (const SubjectRecord& record : records) {
        curve.t_max_observed = std::max(curve.t_max_observed, record.time);
    }

    double survival = 1.0;
    for (double t : failure_times) {
        // Everyone whose observed time is >= t is still at risk just
        // before t; ties censored exactly at t leave afterwards.
        std::int64_t at_risk = 0;
        std::int64_t deaths = 0;
        for (const SubjectRecord& record : records) {
            if (record.time >= t) ++at_risk;
            if (record.time == t && record.status == Status::Failure) ++deaths;
        }
        survival *= 1.0 - static_cast<double>(deaths) / static_cast<double>(at_risk);
        curve.event_times.push_back(t);
        curve.survival.push_back(survival);
        curve.at_risk.push_back(at_risk);
        curve.deaths.push_back(deaths);
    }
    curve.reaches_zero = !curve.survival.empty() && curve.survival.back() == 0.0;
    return curve;
}

}  // namespace kmbias
