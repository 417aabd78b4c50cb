// Python bindings for the survival-bias toolkit: simulation, the
// product-limit estimator, the closed-form/limit oracles, CSV I/O and
// an in-process entry point to the command-line interface.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kmbias/cli.hpp"
#include "kmbias/config.hpp"
#include "kmbias/io.hpp"
#include "kmbias/oracles.hpp"
#include "kmbias/random.hpp"
#include "kmbias/scenarios.hpp"
#include "kmbias/survival.hpp"
#include "kmbias/tables.hpp"

namespace py = pybind11;
using namespace kmbias;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& values) {
    // The (count, pointer) constructor copies the buffer.
    return py::array_t<T>(static_cast<py::ssize_t>(values.size()), values.data());
}

ScenarioConfig make_config(int scenario, std::int64_t n, std::optional<double> p,
                           const std::optional<std::string>& dropout, double lambda,
                           std::optional<double> t_study,
                           std::optional<double> t_recruitment, std::uint64_t seed) {
    ScenarioConfig config;
    if (scenario < 1 || scenario > 4) {
        throw std::invalid_argument("scenario must be 1, 2, 3 or 4");
    }
    config.scenario = static_cast<Scenario>(scenario);
    config.n = n;
    config.p = p;
    if (dropout) config.dropout = DropoutSpec::parse(*dropout);
    config.lambda = lambda;
    config.t_study = t_study;
    config.t_recruitment = t_recruitment;
    config.seed = seed;
    config.validate();
    return config;
}

CensorPolicy policy_from_name(const std::string& name) {
    if (name == "all") return CensorPolicy::AllCensoredEqual;
    if (name == "exclude-dropouts") return CensorPolicy::ExcludeDropouts;
    throw std::invalid_argument("policy must be 'all' or 'exclude-dropouts'");
}

}  // namespace

PYBIND11_MODULE(_kmbias, m) {
    m.doc() = "Kaplan-Meier censoring-bias toolkit (C++ core)";

    py::class_<SurvivalDataset>(m, "Dataset")
        .def(py::init([](py::array_t<double, py::array::c_style | py::array::forcecast> times,
                         py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>
                             statuses) {
                 if (times.ndim() != 1 || statuses.ndim() != 1 ||
                     times.shape(0) != statuses.shape(0)) {
                     throw std::invalid_argument(
                         "times and statuses must be 1-d arrays of equal length");
                 }
                 std::vector<SubjectRecord> records(
                     static_cast<std::size_t>(times.shape(0)));
                 for (py::ssize_t i = 0; i < times.shape(0); ++i) {
                     const std::uint8_t code = statuses.data()[i];
                     if (code > 2) {
                         throw std::invalid_argument(
                             "status codes are 0=failure, 1=dropout, 2=administrative");
                     }
                     records[static_cast<std::size_t>(i)] = {
                         times.data()[i], static_cast<Status>(code)};
                 }
                 return SurvivalDataset{std::move(records)};
             }),
             py::arg("times"), py::arg("statuses"))
        .def_property_readonly("times",
                               [](const SurvivalDataset& d) {
                                   std::vector<double> t;
                                   t.reserve(d.size());
                                   for (const auto& r : d.records()) t.push_back(r.time);
                                   return to_array(t);
                               })
        .def_property_readonly("statuses",
                               [](const SurvivalDataset& d) {
                                   std::vector<std::uint8_t> s;
                                   s.reserve(d.size());
                                   for (const auto& r : d.records())
                                       s.push_back(static_cast<std::uint8_t>(r.status));
                                   return to_array(s);
                               })
        .def_property_readonly("provenance",
                               [](const SurvivalDataset& d) -> std::optional<std::string> {
                                   if (!d.provenance()) return std::nullopt;
                                   return d.provenance()->to_kv();
                               })
        .def("counts",
             [](const SurvivalDataset& d) {
                 const auto c = d.counts();
                 py::dict out;
                 out["failures"] = c.failures;
                 out["dropouts"] = c.dropouts;
                 out["administrative"] = c.administrative;
                 return out;
             })
        .def("__len__", &SurvivalDataset::size);

    py::class_<KmCurve>(m, "KmCurve")
        .def_property_readonly("event_times",
                               [](const KmCurve& c) { return to_array(c.event_times); })
        .def_property_readonly("survival",
                               [](const KmCurve& c) { return to_array(c.survival); })
        .def_property_readonly("at_risk",
                               [](const KmCurve& c) { return to_array(c.at_risk); })
        .def_property_readonly("deaths",
                               [](const KmCurve& c) { return to_array(c.deaths); })
        .def_readonly("n_total", &KmCurve::n_total)
        .def_readonly("t_max_observed", &KmCurve::t_max_observed)
        .def_readonly("reaches_zero", &KmCurve::reaches_zero);

    py::class_<CensoringBreakdown>(m, "CensoringBreakdown")
        .def_readonly("n_total", &CensoringBreakdown::n_total)
        .def_readonly("n_failures", &CensoringBreakdown::n_failures)
        .def_readonly("n_dropout", &CensoringBreakdown::n_dropout)
        .def_readonly("n_administrative", &CensoringBreakdown::n_administrative)
        .def_readonly("pct_failures", &CensoringBreakdown::pct_failures)
        .def_readonly("pct_dropout", &CensoringBreakdown::pct_dropout)
        .def_readonly("pct_administrative", &CensoringBreakdown::pct_administrative)
        .def("pct_censored", &CensoringBreakdown::pct_censored);

    py::class_<SimulationSummary>(m, "SimulationSummary")
        .def_readonly("breakdown", &SimulationSummary::breakdown)
        .def_readonly("ams", &SimulationSummary::ams)
        .def_readonly("s_at_ams", &SimulationSummary::s_at_ams)
        .def_readonly("s_at_ams_beyond_data", &SimulationSummary::s_at_ams_beyond_data)
        .def_readonly("median", &SimulationSummary::median)
        .def_readonly("ms_over_ams", &SimulationSummary::ms_over_ams);

    m.def(
        "simulate",
        [](int scenario, std::int64_t n, std::optional<double> p,
           std::optional<std::string> dropout, double lambda_,
           std::optional<double> t_study, std::optional<double> t_recruitment,
           std::uint64_t seed, int threads) {
            return run_scenario(make_config(scenario, n, p, dropout, lambda_, t_study,
                                            t_recruitment, seed),
                                threads);
        },
        py::arg("scenario"), py::arg("n"), py::arg("p") = std::nullopt,
        py::arg("dropout") = std::nullopt, py::arg("lambda_") = std::numbers::ln2,
        py::arg("t_study") = std::nullopt, py::arg("t_recruitment") = std::nullopt,
        py::arg("seed") = 42, py::arg("threads") = 0,
        "Simulate one cohort under censoring scenario 1-4.");

    m.def(
        "fit_km",
        [](const SurvivalDataset& data, const std::string& policy) {
            return fit_km(data, policy_from_name(policy));
        },
        py::arg("dataset"), py::arg("policy") = "all",
        "Kaplan-Meier fit; policy 'all' or 'exclude-dropouts'.");

    m.def(
        "survival_at",
        [](const KmCurve& curve, double t) {
            const SurvivalValue v = survival_at(curve, t);
            return py::make_tuple(v.value, v.beyond_data);
        },
        py::arg("curve"), py::arg("t"),
        "Step-function value at t plus a beyond-the-data flag.");

    m.def("median_survival", &median_survival, py::arg("curve"),
          "Smallest event time with survival <= 0.5, or None.");

    m.def("censoring_breakdown", &censoring_breakdown, py::arg("dataset"));

    m.def("summarize", &summarize, py::arg("dataset"), py::arg("lambda_"),
          "Breakdown plus S(ams) and median/ams for one cohort.");

    m.def("admin_fraction_s2", &admin_fraction_s2, py::arg("lambda_"),
          py::arg("t_study"));
    m.def("admin_fraction_s3", &admin_fraction_s3, py::arg("lambda_"),
          py::arg("t_study"), py::arg("t_recruitment"));

    m.def(
        "km_limit_scenario1",
        [](double p, const std::string& dropout, double lambda_,
           const std::vector<double>& grid) {
            const LimitCurve curve =
                km_limit_scenario1(p, DropoutSpec::parse(dropout), lambda_, grid);
            return py::make_tuple(to_array(curve.times), to_array(curve.survival));
        },
        py::arg("p"), py::arg("dropout"), py::arg("lambda_"), py::arg("grid"),
        "Large-sample limit of the estimator under dropout censoring.");

    m.def(
        "dropout_mean",
        [](const std::string& spec) { return DropoutSpec::parse(spec).mean(); },
        py::arg("spec"), "Mean dropout fraction of 'uniform' or 'beta:A,B'.");

    m.def(
        "read_dataset_csv",
        [](const std::string& path) {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open " + path);
            return read_dataset_csv(in, path);
        },
        py::arg("path"));

    m.def(
        "write_dataset_csv",
        [](const std::string& path, const SurvivalDataset& data) {
            std::ostringstream buffer;
            write_dataset_csv(buffer, data);
            write_text_file(path, buffer.str());
        },
        py::arg("path"), py::arg("dataset"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"),
        "In-process CLI invocation; returns (exit_code, stdout, stderr).");
}
