#include "kmbias/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kmbias/random.hpp"

namespace kmbias {

namespace {

// Substream roles. The role tag lives in the top byte of the stream
// id, leaving 2^56 subject indices per role.
constexpr std::uint64_t kRoleFailure = 0;      // latent failure time
constexpr std::uint64_t kRoleSelect = 1;       // dropout-subset priority
constexpr std::uint64_t kRoleDropout = 2;      // dropout fraction
constexpr std::uint64_t kRoleEntry = 3;        // residual admin time
constexpr int kRoleShift = 56;

std::uint64_t stream_id(std::int64_t subject, std::uint64_t role) {
    return static_cast<std::uint64_t>(subject) | (role << kRoleShift);
}

int resolve_threads(int threads, std::int64_t n) {
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
    }
    // No point spawning workers for tiny cohorts.
    const std::int64_t cap = std::max<std::int64_t>(1, n / 1024);
    return static_cast<int>(std::min<std::int64_t>(threads, cap));
}

// Applies fn(begin, end) over a partition of [0, n) using `threads`
// workers. fn must only touch per-subject state.
template <typename Fn>
void parallel_over_subjects(std::int64_t n, int threads, Fn&& fn) {
    if (threads <= 1) {
        fn(std::int64_t{0}, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    const std::int64_t chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const std::int64_t begin = std::min<std::int64_t>(n, w * chunk);
        const std::int64_t end = std::min<std::int64_t>(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (std::thread& worker : workers) worker.join();
}

// Marks exactly round(p * n) subjects as dropout-prone, uniformly
// without replacement. Every subject draws one priority value from its
// selection stream and the k smallest priorities win, so membership is
// a pure function of (seed, subject) and in particular independent of
// the worker partition. Returns a bitmask vector.
std::vector<char> select_dropout_subjects(const ScenarioConfig& config, int threads) {
    const std::int64_t n = config.n;
    const std::int64_t k = std::llround(*config.p * static_cast<double>(n));
    std::vector<char> selected(static_cast<std::size_t>(n), 0);
    if (k <= 0) return selected;
    if (k >= n) {
        std::fill(selected.begin(), selected.end(), 1);
        return selected;
    }

    std::vector<double> priorities(static_cast<std::size_t>(n));
    parallel_over_subjects(n, threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            RandomStream stream(config.seed, stream_id(i, kRoleSelect));
            priorities[static_cast<std::size_t>(i)] = stream.next_unit();
        }
    });

    // Find the k-th smallest priority; everything strictly below it is
    // in. Ties at the threshold (possible only in principle) are
    // broken by subject index so the choice stays deterministic.
    std::vector<double> order(priorities);
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end());
    const double threshold = order[static_cast<std::size_t>(k - 1)];

    std::int64_t below = 0;
    for (double value : priorities) below += value < threshold ? 1 : 0;
    std::int64_t ties_to_take = k - below;
    for (std::int64_t i = 0; i < n; ++i) {
        const double value = priorities[static_cast<std::size_t>(i)];
        if (value < threshold) {
            selected[static_cast<std::size_t>(i)] = 1;
        } else if (value == threshold && ties_to_take > 0) {
            selected[static_cast<std::size_t>(i)] = 1;
            --ties_to_take;
        }
    }
    return selected;
}

}  // namespace

SurvivalDataset run_scenario(const ScenarioConfig& config, int threads) {
    config.validate();
    const std::int64_t n = config.n;
    if (n > (std::int64_t{1} << kRoleShift)) {
        throw std::invalid_argument("--n exceeds the supported maximum of 2^56");
    }
    threads = resolve_threads(threads, n);

    const bool with_dropout =
        config.scenario == Scenario::S1 || config.scenario == Scenario::S4;
    const bool with_admin =
        config.scenario == Scenario::S2 || config.scenario == Scenario::S3 ||
        config.scenario == Scenario::S4;

    std::vector<char> selected;
    if (with_dropout) selected = select_dropout_subjects(config, threads);

    // Residual observation window: scenario 2 recruits uniformly over
    // the whole study, scenario 3 (and 4) over an initial window of
    // length t_recruitment, so the time left at entry is uniform on
    // (t_study - t_recruitment, t_study).
    double entry_lo = 0.0;
    double entry_hi = 0.0;
    if (with_admin) {
        entry_hi = *config.t_study;
        entry_lo = config.scenario == Scenario::S2 ? 0.0 : entry_hi - *config.t_recruitment;
    }

    std::vector<SubjectRecord> records(static_cast<std::size_t>(n));
    parallel_over_subjects(n, threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            RandomStream failure_stream(config.seed, stream_id(i, kRoleFailure));
            const double failure_time = sample_exponential(failure_stream, config.lambda);

            double time = failure_time;
            Status status = Status::Failure;
            if (with_dropout && selected[static_cast<std::size_t>(i)]) {
                RandomStream dropout_stream(config.seed, stream_id(i, kRoleDropout));
                const double fraction =
                    sample_unit_fraction(dropout_stream, *config.dropout);
                time = dropout_time_from_fraction(fraction, failure_time);
                status = Status::DropoutCensored;
            }
            if (with_admin) {
                RandomStream entry_stream(config.seed, stream_id(i, kRoleEntry));
                const double window =
                    sample_uniform_interval(entry_stream, entry_lo, entry_hi);
                if (time > window) {
                    time = window;
                    status = Status::AdministrativeCensored;
                }
            }
            records[static_cast<std::size_t>(i)] = {time, status};
        }
    });

    return SurvivalDataset(std::move(records), config);
}

SimulationSummary summarize(const SurvivalDataset& data, double lambda) {
    if (!std::isfinite(lambda) || lambda <= 0.0) {
        throw std::invalid_argument("summarize: lambda must be positive and finite");
    }
    SimulationSummary summary;
    summary.breakdown = censoring_breakdown(data);
    summary.ams = std::numbers::ln2 / lambda;

    const KmCurve curve = fit_km(data, CensorPolicy::AllCensoredEqual);
    const SurvivalValue at_ams = survival_at(curve, summary.ams);
    summary.s_at_ams = at_ams.value;
    summary.s_at_ams_beyond_data = at_ams.beyond_data;
    summary.median = median_survival(curve);
    if (summary.median) summary.ms_over_ams = *summary.median / summary.ams;
    return summary;
}

}  // namespace kmbias
