#include "kmbias/config.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kmbias {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw std::invalid_argument(message);
}

void require_positive(double value, const char* flag) {
    if (!std::isfinite(value) || value <= 0.0) {
        fail(std::string(flag) + " must be a positive finite number");
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    const int id = static_cast<int>(scenario);
    if (id < 1 || id > 4) fail("--scenario must be 1, 2, 3, or 4");
    if (n < 1) fail("--n must be at least 1");
    require_positive(lambda, "--lambda");

    const bool wants_dropout = scenario == Scenario::S1 || scenario == Scenario::S4;
    const bool wants_study = scenario == Scenario::S2 || scenario == Scenario::S3 ||
                             scenario == Scenario::S4;
    const bool wants_recruitment = scenario == Scenario::S3 || scenario == Scenario::S4;

    if (wants_dropout) {
        if (!p) fail("--p is required for scenario " + std::to_string(id));
        if (!std::isfinite(*p) || *p < 0.0 || *p > 1.0) {
            fail("--p must lie in [0, 1]");
        }
        if (!dropout) fail("--dropout is required for scenario " + std::to_string(id));
    } else {
        if (p) fail("--p does not apply to scenario " + std::to_string(id));
        if (dropout) fail("--dropout does not apply to scenario " + std::to_string(id));
    }

    if (wants_study) {
        if (!t_study) fail("--t-study is required for scenario " + std::to_string(id));
        require_positive(*t_study, "--t-study");
    } else if (t_study) {
        fail("--t-study does not apply to scenario " + std::to_string(id));
    }

    if (wants_recruitment) {
        if (!t_recruitment) {
            fail("--t-recruitment is required for scenario " + std::to_string(id));
        }
        require_positive(*t_recruitment, "--t-recruitment");
        if (*t_recruitment > *t_study) {
            fail("--t-recruitment must not exceed --t-study");
        }
    } else if (t_recruitment) {
        fail("--t-recruitment does not apply to scenario " + std::to_string(id));
    }
}

std::string ScenarioConfig::to_kv() const {
    std::ostringstream out;
    out.precision(17);
    out << "scenario=" << static_cast<int>(scenario) << '\n';
    out << "n=" << n << '\n';
    if (p) out << "p=" << *p << '\n';
    if (dropout) out << "dropout=" << dropout->to_string() << '\n';
    out << "lambda=" << lambda << '\n';
    if (t_study) out << "t-study=" << *t_study << '\n';
    if (t_recruitment) out << "t-recruitment=" << *t_recruitment << '\n';
    out << "seed=" << seed << '\n';
    return out.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r");
    if (from == std::string::npos) return {};
    const auto to = s.find_last_not_of(" \t\r");
    return s.substr(from, to - from + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        fail("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::int64_t parsed = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        fail("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_uint64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t parsed = std::stoull(value, &used);
        if (used != value.size() || value.find('-') != std::string::npos) {
            throw std::invalid_argument(value);
        }
        return parsed;
    } catch (const std::exception&) {
        fail("config key '" + key + "': expected a non-negative integer, got '" + value +
             "'");
    }
}

}  // namespace

ScenarioConfig ScenarioConfig::from_kv(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("config line " + std::to_string(line_no) + ": expected key=value, got '" +
                 line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "scenario") {
            const std::int64_t raw = parse_int64(key, value);
            if (raw < 1 || raw > 4) {
                fail("config key 'scenario': must be 1, 2, 3, or 4");
            }
            cfg.scenario = static_cast<Scenario>(static_cast<int>(raw));
        } else if (key == "n") {
            cfg.n = parse_int64(key, value);
        } else if (key == "p") {
            cfg.p = parse_double(key, value);
        } else if (key == "dropout") {
            cfg.dropout = DropoutSpec::parse(value);
        } else if (key == "lambda") {
            cfg.lambda = parse_double(key, value);
        } else if (key == "t-study") {
            cfg.t_study = parse_double(key, value);
        } else if (key == "t-recruitment") {
            cfg.t_recruitment = parse_double(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_uint64(key, value);
        } else {
            fail("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace kmbias
