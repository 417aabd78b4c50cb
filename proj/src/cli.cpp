#include "kmbias/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kmbias/io.hpp"
#include "kmbias/oracles.hpp"
#include "kmbias/scenarios.hpp"
#include "kmbias/svg.hpp"
#include "kmbias/tables.hpp"

namespace kmbias {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string fixed(double value, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
    return buffer;
}

// Writes through a std::ofstream with explicit error reporting, so a
// bad path surfaces as a runtime error naming the file.
template <typename WriteFn>
void write_file_with(const std::string& path, WriteFn&& write) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open file for writing: " + path);
    write(file);
    file.flush();
    if (!file) throw std::runtime_error("failed while writing file: " + path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open file: " + path);
    return file;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    int scenario = 0;
    std::int64_t n = 1000000;
    double p = 0.0;
    std::string dropout;
    double lambda = std::numbers::ln2;
    double t_study = 0.0;
    double t_recruitment = 0.0;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string config_path;
    std::string out_summary;
    std::string out_curve;
    std::string out_svg;
    std::string dump_path;
};

void print_summary(std::ostream& out, const ScenarioConfig& config,
                   const SimulationSummary& summary) {
    out << "scenario " << static_cast<int>(config.scenario) << "  n=" << config.n
        << "  seed=" << config.seed << "  lambda=" << format_double(config.lambda)
        << "  (ams=" << format_double(summary.ams) << ")\n";
    if (config.dropout) {
        out << "dropout law " << config.dropout->to_string() << "  p="
            << format_double(*config.p) << "\n";
    }
    if (config.t_study) {
        out << "study length " << format_double(*config.t_study);
        if (config.t_recruitment) {
            out << "  recruitment window " << format_double(*config.t_recruitment);
        }
        out << "\n";
    }
    const CensoringBreakdown& b = summary.breakdown;
    out << "failures        " << fixed(b.pct_failures, 3) << "%  (" << b.n_failures
        << ")\n";
    out << "dropout         " << fixed(b.pct_dropout, 3) << "%  (" << b.n_dropout
        << ")\n";
    out << "administrative  " << fixed(b.pct_administrative, 3) << "%  ("
        << b.n_administrative << ")\n";
    out << "censored total  " << fixed(b.pct_censored(), 3) << "%\n";
    out << "S(ams)          " << fixed(summary.s_at_ams, 5)
        << (summary.s_at_ams_beyond_data ? "  [beyond observed data]" : "") << "\n";
    if (summary.median) {
        out << "median survival " << fixed(*summary.median, 5)
            << "  (ms/ams = " << fixed(*summary.ms_over_ams, 5) << ")\n";
    } else {
        out << "median survival not reached (curve stays above 0.5)\n";
    }
}

int cmd_simulate(const SimulateArgs& args, const CLI::App& cmd, std::ostream& out) {
    ScenarioConfig config;
    const bool have_file = cmd.count("--config") > 0;
    if (have_file) config = ScenarioConfig::from_kv(read_text_file(args.config_path));

    // Explicit flags override the config file; without a file the
    // flag defaults (n, seed, lambda) apply as-is.
    const auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
    if (given("--scenario")) {
        if (args.scenario < 1 || args.scenario > 4) {
            throw std::invalid_argument("--scenario must be 1, 2, 3, or 4");
        }
        config.scenario = static_cast<Scenario>(args.scenario);
    } else if (!have_file) {
        throw std::invalid_argument("--scenario is required (or provide --config)");
    }
    if (!have_file || given("--n")) config.n = args.n;
    if (!have_file || given("--seed")) config.seed = args.seed;
    if (!have_file || given("--lambda")) config.lambda = args.lambda;
    if (given("--p")) config.p = args.p;
    if (given("--dropout")) config.dropout = DropoutSpec::parse(args.dropout);
    if (given("--t-study")) config.t_study = args.t_study;
    if (given("--t-recruitment")) config.t_recruitment = args.t_recruitment;

    config.validate();
    const SurvivalDataset data = run_scenario(config, args.threads);
    const SimulationSummary summary = summarize(data, config.lambda);
    print_summary(out, config, summary);

    if (!args.dump_path.empty()) {
        write_file_with(args.dump_path,
                        [&](std::ostream& f) { write_dataset_csv(f, data); });
        out << "wrote dataset to " << args.dump_path << "\n";
    }
    if (!args.out_summary.empty()) {
        write_file_with(args.out_summary, [&](std::ostream& f) {
            write_summary_csv(f, config, summary);
        });
        out << "wrote summary to " << args.out_summary << "\n";
    }
    if (!args.out_curve.empty() || !args.out_svg.empty()) {
        const KmCurve curve = fit_km(data, CensorPolicy::AllCensoredEqual);
        if (!args.out_curve.empty()) {
            write_file_with(args.out_curve,
                            [&](std::ostream& f) { write_km_curve_csv(f, curve); });
            out << "wrote curve to " << args.out_curve << "\n";
        }
        if (!args.out_svg.empty()) {
            PlotCurve plot;
            plot.times = curve.event_times;
            plot.survival = curve.survival;
            plot.label = "KM estimate";
            PlotOptions options;
            options.title = "scenario " + std::to_string(static_cast<int>(config.scenario)) +
                            ", n = " + std::to_string(config.n) +
                            ", seed = " + std::to_string(config.seed);
            options.x_max = 4.0 * summary.ams;
            options.ams_guide = summary.ams;
            const std::string svg = render_survival_svg({plot}, options);
            write_text_file(args.out_svg, svg);
            out << "wrote plot to " << args.out_svg << "\n";
        }
    }
    return kExitOk;
}

// --------------------------------------------------------------- reproduce

struct ReproduceArgs {
    int table = 0;
    std::int64_t n = 1000000;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string out_csv;
    std::string out_md;
};

int cmd_reproduce(const ReproduceArgs& args, std::ostream& out) {
    const TableReport report =
        reproduce_table(table_from_int(args.table), args.n, args.seed, args.threads);
    const std::string markdown = table_report_markdown(report);
    out << markdown;
    if (!args.out_md.empty()) write_text_file(args.out_md, markdown);
    if (!args.out_csv.empty()) write_text_file(args.out_csv, table_report_csv(report));
    return report.pass ? kExitOk : kExitRuntime;
}

// -------------------------------------------------------------------- plot

struct PlotArgs {
    std::vector<std::string> curve_specs;
    std::string out_path;
    std::string title;
    double x_min = 0.0;
    double x_max = 4.0;
    double ams = 1.0;
    bool no_guides = false;
    std::size_t max_vertices = 2000;
};

int cmd_plot(const PlotArgs& args, std::ostream& out) {
    std::vector<PlotCurve> curves;
    for (const std::string& spec : args.curve_specs) {
        // A curve argument is "path" or "path:label".
        std::string path = spec;
        std::string label;
        const std::size_t colon = spec.rfind(':');
        if (colon != std::string::npos && colon + 1 < spec.size() &&
            spec.find('/', colon) == std::string::npos) {
            path = spec.substr(0, colon);
            label = spec.substr(colon + 1);
        }
        if (label.empty()) label = std::filesystem::path(path).stem().string();
        std::ifstream file = open_input(path);
        PlotCurve curve = read_step_curve_csv(file, path);
        curve.label = label;
        curves.push_back(std::move(curve));
    }
    PlotOptions options;
    options.title = args.title;
    options.x_min = args.x_min;
    options.x_max = args.x_max;
    options.ams_guide = args.ams;
    options.show_guides = !args.no_guides;
    options.max_vertices_per_curve = args.max_vertices;
    write_text_file(args.out_path, render_survival_svg(curves, options));
    out << "wrote " << args.out_path << " (" << curves.size() << " curve"
        << (curves.size() == 1 ? "" : "s") << ")\n";
    return kExitOk;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string dataset_path;
    double lambda = std::numbers::ln2;
    std::vector<double> at_times;
    int grid_points = 201;
    std::string out_curve_all;
    std::string out_curve_excluded;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
    std::ifstream file = open_input(args.dataset_path);
    const SurvivalDataset data = read_dataset_csv(file, args.dataset_path);
    if (data.empty()) {
        throw std::runtime_error(args.dataset_path + ": dataset has no records");
    }
    if (args.grid_points < 2) {
        throw std::invalid_argument("--grid-points must be at least 2");
    }

    const CensoringBreakdown breakdown = censoring_breakdown(data);
    out << "dataset " << args.dataset_path << "  (" << breakdown.n_total
        << " records)\n";
    out << "failures        " << fixed(breakdown.pct_failures, 3) << "%  ("
        << breakdown.n_failures << ")\n";
    out << "dropout         " << fixed(breakdown.pct_dropout, 3) << "%  ("
        << breakdown.n_dropout << ")\n";
    out << "administrative  " << fixed(breakdown.pct_administrative, 3) << "%  ("
        << breakdown.n_administrative << ")\n";

    // Sensitivity grid: the user's --at times when given, otherwise a
    // uniform grid over the observed range.
    const KmCurve probe = fit_km(data, CensorPolicy::AllCensoredEqual);
    std::vector<double> grid = args.at_times;
    if (grid.empty()) {
        for (int j = 0; j < args.grid_points; ++j) {
            grid.push_back(probe.t_max_observed * j /
                           static_cast<double>(args.grid_points - 1));
        }
    }
    const SensitivityReport report = dropout_sensitivity(data, grid);

    const double ams = std::numbers::ln2 / args.lambda;
    out << "ams = " << format_double(ams) << " (lambda = "
        << format_double(args.lambda) << ")\n";
    for (double t : args.at_times) {
        const SurvivalValue all = survival_at(report.curve_all, t);
        const SurvivalValue excluded = survival_at(report.curve_excluded, t);
        out << "S(" << format_double(t) << ")  all-censored-equal = "
            << fixed(all.value, 5) << (all.beyond_data ? " [beyond data]" : "")
            << "   dropouts-excluded = " << fixed(excluded.value, 5)
            << (excluded.beyond_data ? " [beyond data]" : "")
            << "   gap = " << fixed(std::fabs(all.value - excluded.value), 5) << "\n";
    }
    out << "max |gap| between censoring policies over "
        << report.eval_times.size() << " grid points: "
        << fixed(report.max_abs_gap, 5) << "\n";

    if (!args.out_curve_all.empty()) {
        write_file_with(args.out_curve_all, [&](std::ostream& f) {
            write_km_curve_csv(f, report.curve_all);
        });
        out << "wrote all-censored-equal curve to " << args.out_curve_all << "\n";
    }
    if (!args.out_curve_excluded.empty()) {
        write_file_with(args.out_curve_excluded, [&](std::ostream& f) {
            write_km_curve_csv(f, report.curve_excluded);
        });
        out << "wrote dropouts-excluded curve to " << args.out_curve_excluded << "\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------------ oracle

struct OracleFractionArgs {
    int scenario = 0;
    double lambda = std::numbers::ln2;
    double t_study = 0.0;
    double t_recruitment = 0.0;
    bool has_recruitment = false;
};

int cmd_oracle_fraction(const OracleFractionArgs& args, std::ostream& out) {
    double fraction = 0.0;
    if (args.scenario == 2) {
        if (args.has_recruitment) {
            throw std::invalid_argument("--t-recruitment does not apply to scenario 2");
        }
        fraction = admin_fraction_s2(args.lambda, args.t_study);
    } else if (args.scenario == 3) {
        if (!args.has_recruitment) {
            throw std::invalid_argument("--t-recruitment is required for scenario 3");
        }
        fraction = admin_fraction_s3(args.lambda, args.t_study, args.t_recruitment);
    } else {
        throw std::invalid_argument(
            "--scenario must be 2 or 3 (closed forms exist only for administrative "
            "censoring)");
    }
    out << format_double(fraction) << "\n";
    return kExitOk;
}

struct OracleLimitArgs {
    double p = 0.0;
    std::string dropout;
    double lambda = std::numbers::ln2;
    double t_max = 4.0;
    int points = 100;
    std::string out_path;
};

int cmd_oracle_limit(const OracleLimitArgs& args, std::ostream& out) {
    if (args.points < 2) throw std::invalid_argument("--points must be at least 2");
    if (!(args.t_max > 0.0)) throw std::invalid_argument("--t-max must be positive");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(args.points));
    for (int j = 0; j < args.points; ++j) {
        grid.push_back(args.t_max * j / static_cast<double>(args.points - 1));
    }
    const LimitCurve curve = km_limit_scenario1(
        args.p, DropoutSpec::parse(args.dropout), args.lambda, grid);
    if (args.out_path.empty()) {
        write_limit_curve_csv(out, curve);
    } else {
        write_file_with(args.out_path,
                        [&](std::ostream& f) { write_limit_curve_csv(f, curve); });
        out << "wrote limit curve to " << args.out_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "Monte Carlo study of censoring-induced bias in Kaplan-Meier estimates"};
    app.name("kmbias");
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one censoring scenario and summarize the fitted KM curve");
    simulate->add_option("--scenario", sim.scenario,
                         "censoring scenario: 1 dropout, 2 administrative (uniform "
                         "entry), 3 administrative (recruitment window), 4 combined");
    simulate->add_option("--n", sim.n, "cohort size")->capture_default_str();
    simulate->add_option("--p", sim.p, "dropout share in [0,1] (scenarios 1 and 4)");
    simulate->add_option("--dropout", sim.dropout,
                         "dropout fraction law: uniform or beta:A,B");
    simulate->add_option("--lambda", sim.lambda, "exponential failure rate")
        ->capture_default_str();
    simulate->add_option("--t-study", sim.t_study, "study length in ams units");
    simulate->add_option("--t-recruitment", sim.t_recruitment,
                         "recruitment window in ams units");
    simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
    simulate->add_option("--threads", sim.threads,
                         "worker threads (0 = auto; results do not depend on this)");
    simulate->add_option("--config", sim.config_path,
                         "key=value file with the same keys as the flags");
    simulate->add_option("--out-summary", sim.out_summary, "write a one-row summary CSV");
    simulate->add_option("--out-curve", sim.out_curve, "write the fitted KM curve CSV");
    simulate->add_option("--out-svg", sim.out_svg, "write a step plot of the fit");
    simulate->add_option("--dump", sim.dump_path, "write the raw dataset CSV");

    ReproduceArgs rep;
    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "re-run a bundled reference table and diff against it");
    reproduce->add_option("--table", rep.table, "reference table, 1-4")->required();
    reproduce->add_option("--n", rep.n, "cohort size per row (>= 100000)")
        ->capture_default_str();
    reproduce->add_option("--seed", rep.seed, "base seed; row i uses seed + i")
        ->capture_default_str();
    reproduce->add_option("--threads", rep.threads, "worker threads (0 = auto)");
    reproduce->add_option("--out-csv", rep.out_csv,
                          "write the per-metric comparison as CSV");
    reproduce->add_option("--out-md", rep.out_md, "also write the markdown report");

    PlotArgs plot;
    CLI::App* plot_cmd =
        app.add_subcommand("plot", "render survival curve CSVs as an SVG step plot");
    plot_cmd->add_option("--curve", plot.curve_specs,
                         "curve CSV, optionally path:label (repeatable)")
        ->required();
    plot_cmd->add_option("--out", plot.out_path, "output SVG path")->required();
    plot_cmd->add_option("--title", plot.title, "plot title");
    plot_cmd->add_option("--x-min", plot.x_min, "left edge of the time axis")
        ->capture_default_str();
    plot_cmd->add_option("--x-max", plot.x_max, "right edge of the time axis")
        ->capture_default_str();
    plot_cmd->add_option("--ams", plot.ams, "vertical guide position")
        ->capture_default_str();
    plot_cmd->add_flag("--no-guides", plot.no_guides,
                       "omit the S=0.5 and t=ams guide lines");
    plot_cmd->add_option("--max-vertices", plot.max_vertices,
                         "downsampling budget per curve")
        ->capture_default_str();

    AnalyzeArgs analyze;
    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "fit an external dataset under both censoring policies");
    analyze_cmd->add_option("dataset", analyze.dataset_path, "dataset CSV (time,status)")
        ->required();
    analyze_cmd->add_option("--lambda", analyze.lambda,
                            "failure rate used to report ams")
        ->capture_default_str();
    analyze_cmd->add_option("--at", analyze.at_times,
                            "report S(t) at these times (repeatable)");
    analyze_cmd->add_option("--grid-points", analyze.grid_points,
                            "sensitivity grid size when --at is not given")
        ->capture_default_str();
    analyze_cmd->add_option("--out-curve-all", analyze.out_curve_all,
                            "write the all-censored-equal curve CSV");
    analyze_cmd->add_option("--out-curve-excluded", analyze.out_curve_excluded,
                            "write the dropouts-excluded curve CSV");

    CLI::App* oracle = app.add_subcommand(
        "oracle", "closed-form censoring fractions and the dropout limit curve");
    oracle->require_subcommand(1);
    OracleFractionArgs fraction;
    CLI::App* fraction_cmd = oracle->add_subcommand(
        "fraction", "expected administrative-censoring fraction (scenarios 2 and 3)");
    fraction_cmd->add_option("--scenario", fraction.scenario, "2 or 3")->required();
    fraction_cmd->add_option("--lambda", fraction.lambda, "exponential failure rate")
        ->capture_default_str();
    fraction_cmd->add_option("--t-study", fraction.t_study, "study length")->required();
    fraction_cmd->add_option("--t-recruitment", fraction.t_recruitment,
                             "recruitment window (scenario 3)");
    OracleLimitArgs limit;
    CLI::App* limit_cmd = oracle->add_subcommand(
        "limit", "large-sample limit of the KM estimate under dropout censoring");
    limit_cmd->add_option("--p", limit.p, "dropout share in [0,1]")->required();
    limit_cmd->add_option("--dropout", limit.dropout,
                          "dropout fraction law: uniform or beta:A,B")
        ->required();
    limit_cmd->add_option("--lambda", limit.lambda, "exponential failure rate")
        ->capture_default_str();
    limit_cmd->add_option("--t-max", limit.t_max, "grid upper end")
        ->capture_default_str();
    limit_cmd->add_option("--points", limit.points, "grid size")
        ->capture_default_str();
    limit_cmd->add_option("--out", limit.out_path,
                          "write the curve CSV here instead of stdout");

    try {
        std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);  // prints the help text for the right (sub)command
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, *simulate, out);
        if (reproduce->parsed()) return cmd_reproduce(rep, out);
        if (plot_cmd->parsed()) return cmd_plot(plot, out);
        if (analyze_cmd->parsed()) return cmd_analyze(analyze, out);
        if (oracle->parsed()) {
            fraction.has_recruitment = fraction_cmd->count("--t-recruitment") > 0;
            if (fraction_cmd->parsed()) return cmd_oracle_fraction(fraction, out);
            if (limit_cmd->parsed()) return cmd_oracle_limit(limit, out);
        }
        err << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace kmbias
