#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

#include "kmbias/random.hpp"

namespace kmbias {

enum class Scenario : int { S1 = 1, S2 = 2, S3 = 3, S4 = 4 };

/// Full specification of one simulation run. Field requirements depend
/// on the scenario:
///   S1: p, dropout              (pure dropout censoring)
///   S2: t_study                 (administrative, whole-study entry)
///   S3: t_study, t_recruitment  (administrative, entry window)
///   S4: all of the above        (dropout + administrative)
/// Times are expressed in the same unit as 1/lambda; with the default
/// lambda = ln 2 the actual median survival (ams) is exactly 1.
struct ScenarioConfig {
    Scenario scenario = Scenario::S1;
    std::int64_t n = 0;
    std::optional<double> p;
    std::optional<DropoutSpec> dropout;
    double lambda = std::numbers::ln2;
    std::optional<double> t_study;
    std::optional<double> t_recruitment;
    std::uint64_t seed = 0;

    /// Actual median survival of Exp(lambda): ln(2)/lambda.
    double ams() const { return std::numbers::ln2 / lambda; }

    /// Throws std::invalid_argument naming the offending flag when a
    /// required field is missing, an unused field is set, or a value is
    /// out of range.
    void validate() const;

    /// Flat key=value text form; keys match the CLI flags
    /// (scenario, n, p, dropout, lambda, t-study, t-recruitment, seed).
    std::string to_kv() const;
    static ScenarioConfig from_kv(const std::string& text);

    bool operator==(const ScenarioConfig&) const = default;
};

}  // namespace kmbias
