#include "kmbias/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace kmbias {

std::string format_double(double value) {
    std::array<char, 32> buffer;
    const auto [end, ec] =
        std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("failed to format a number");
    return std::string(buffer.data(), end);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream content;
    content << in.rdbuf();
    if (in.bad()) throw std::runtime_error("failed while reading file: " + path);
    return content.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed while writing file: " + path);
}

namespace {

[[noreturn]] void parse_fail(const std::string& source, int line,
                             const std::string& message) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + message);
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_field_double(const std::string& source, int line, const std::string& field,
                          const std::string& column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        parse_fail(source, line, "invalid " + column + " value '" + field + "'");
    }
    return value;
}

}  // namespace

void write_dataset_csv(std::ostream& out, const SurvivalDataset& data) {
    out << "time,status\n";
    std::string buffer;
    for (const SubjectRecord& record : data.records()) {
        buffer += format_double(record.time);
        buffer += ',';
        buffer += status_name(record.status);
        buffer += '\n';
        if (buffer.size() >= 1 << 20) {
            out << buffer;
            buffer.clear();
        }
    }
    out << buffer;
}

SurvivalDataset read_dataset_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) {
        parse_fail(source_name, 1, "missing header (expected 'time,status')");
    }
    if (strip_cr(line) != "time,status") {
        parse_fail(source_name, 1, "bad header '" + strip_cr(line) +
                                       "' (expected 'time,status')");
    }
    std::vector<SubjectRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 2) {
            parse_fail(source_name, line_no,
                       "expected 2 fields (time,status), got " +
                           std::to_string(fields.size()));
        }
        const double time = parse_field_double(source_name, line_no, fields[0], "time");
        if (!std::isfinite(time) || time < 0.0) {
            parse_fail(source_name, line_no,
                       "time must be finite and non-negative, got '" + fields[0] + "'");
        }
        Status status;
        try {
            status = status_from_name(fields[1]);
        } catch (const std::invalid_argument& error) {
            parse_fail(source_name, line_no, error.what());
        }
        records.push_back({time, status});
    }
    return SurvivalDataset(std::move(records));
}

void write_km_curve_csv(std::ostream& out, const KmCurve& curve) {
    out << "time,survival,at_risk\n";
    std::string buffer;
    for (std::size_t i = 0; i < curve.event_times.size(); ++i) {
        buffer += format_double(curve.event_times[i]);
        buffer += ',';
        buffer += format_double(curve.survival[i]);
        buffer += ',';
        buffer += std::to_string(curve.at_risk[i]);
        buffer += '\n';
    }
    out << buffer;
}

void write_limit_curve_csv(std::ostream& out, const LimitCurve& curve) {
    out << "time,survival\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        out << format_double(curve.times[i]) << ',' << format_double(curve.survival[i])
            << '\n';
    }
}

PlotCurve read_step_curve_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) {
        parse_fail(source_name, 1,
                   "missing header (expected 'time,survival[,at_risk]')");
    }
    const std::string header = strip_cr(line);
    std::size_t expected_fields;
    if (header == "time,survival") {
        expected_fields = 2;
    } else if (header == "time,survival,at_risk") {
        expected_fields = 3;
    } else {
        parse_fail(source_name, 1,
                   "bad header '" + header + "' (expected 'time,survival[,at_risk]')");
    }

    PlotCurve curve;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != expected_fields) {
            parse_fail(source_name, line_no,
                       "expected " + std::to_string(expected_fields) +
                           " fields, got " + std::to_string(fields.size()));
        }
        const double time = parse_field_double(source_name, line_no, fields[0], "time");
        const double survival =
            parse_field_double(source_name, line_no, fields[1], "survival");
        if (!std::isfinite(time) || time < 0.0) {
            parse_fail(source_name, line_no, "time must be finite and non-negative");
        }
        if (!std::isfinite(survival) || survival < 0.0 || survival > 1.0) {
            parse_fail(source_name, line_no, "survival must lie in [0, 1]");
        }
        if (!curve.times.empty() && time <= curve.times.back()) {
            parse_fail(source_name, line_no, "times must be strictly increasing");
        }
        curve.times.push_back(time);
        curve.survival.push_back(survival);
    }
    if (curve.times.empty()) {
        throw std::runtime_error(source_name + ": no curve points");
    }
    return curve;
}

void write_summary_csv(std::ostream& out, const std::optional<ScenarioConfig>& config,
                       const SimulationSummary& summary) {
    out << "scenario,n,seed,lambda,p,dropout,t_study,t_recruitment,ams,"
           "n_failures,n_dropout,n_administrative,"
           "pct_failures,pct_dropout,pct_administrative,pct_censored,"
           "s_at_ams,median,ms_over_ams\n";
    const auto optional_number = [](const std::optional<double>& value) {
        return value ? format_double(*value) : std::string();
    };
    if (config) {
        out << static_cast<int>(config->scenario) << ',' << config->n << ','
            << config->seed << ',' << format_double(config->lambda) << ','
            << optional_number(config->p) << ','
            << (config->dropout ? config->dropout->to_string() : std::string()) << ','
            << optional_number(config->t_study) << ','
            << optional_number(config->t_recruitment) << ',';
    } else {
        out << ",,,,,,,,";
    }
    const CensoringBreakdown& b = summary.breakdown;
    out << format_double(summary.ams) << ',' << b.n_failures << ',' << b.n_dropout
        << ',' << b.n_administrative << ',' << format_double(b.pct_failures) << ','
        << format_double(b.pct_dropout) << ',' << format_double(b.pct_administrative)
        << ',' << format_double(b.pct_censored()) << ','
        << format_double(summary.s_at_ams) << ',' << optional_number(summary.median)
        << ',' << optional_number(summary.ms_over_ams) << '\n';
}

}  // namespace kmbias
