#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kmbias/oracles.hpp"
#include "kmbias/scenarios.hpp"
#include "kmbias/survival.hpp"

namespace kmbias {

/// Shortest decimal form that round-trips the exact double (so file
/// output is byte-deterministic across platforms and worker counts).
std::string format_double(double value);

/// Whole-file helpers; both throw std::runtime_error naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Dataset CSV: header `time,status`, one row per subject, status one
/// of failure|dropout|administrative.
void write_dataset_csv(std::ostream& out, const SurvivalDataset& data);

/// Parse errors carry `source_name:line`; the line count includes the
/// header line.
SurvivalDataset read_dataset_csv(std::istream& in, const std::string& source_name);

/// Fitted-curve CSV: header `time,survival,at_risk`.
void write_km_curve_csv(std::ostream& out, const KmCurve& curve);

/// Limit-curve CSV: header `time,survival`.
void write_limit_curve_csv(std::ostream& out, const LimitCurve& curve);

/// A step function read back for plotting; accepts either curve
/// format (the at_risk column is ignored).
struct PlotCurve {
    std::vector<double> times;     ///< strictly increasing
    std::vector<double> survival;  ///< values in [0, 1]
    std::string label;
};

PlotCurve read_step_curve_csv(std::istream& in, const std::string& source_name);

/// One-row summary CSV, config columns left empty when the dataset has
/// no simulation provenance.
void write_summary_csv(std::ostream& out, const std::optional<ScenarioConfig>& config,
                       const SimulationSummary& summary);

}  // namespace kmbias
