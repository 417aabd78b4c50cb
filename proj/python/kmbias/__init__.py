"""Kaplan-Meier censoring-bias toolkit.

Thin Python wrapper over the compiled core: cohort simulation under the
four censoring scenarios, the product-limit estimator, closed-form and
limit-curve oracles, dataset CSV I/O, and an in-process entry point to
the command-line interface.
"""

try:
    from ._kmbias import (  # type: ignore[attr-defined]
        CensoringBreakdown,
        Dataset,
        KmCurve,
        SimulationSummary,
        admin_fraction_s2,
        admin_fraction_s3,
        censoring_breakdown,
        dropout_mean,
        fit_km,
        km_limit_scenario1,
        median_survival,
        read_dataset_csv,
        run_cli,
        simulate,
        summarize,
        survival_at,
        write_dataset_csv,
    )
except ImportError:  # extension built outside the package (plain CMake builds)
    from _kmbias import (  # type: ignore[no-redef]
        CensoringBreakdown,
        Dataset,
        KmCurve,
        SimulationSummary,
        admin_fraction_s2,
        admin_fraction_s3,
        censoring_breakdown,
        dropout_mean,
        fit_km,
        km_limit_scenario1,
        median_survival,
        read_dataset_csv,
        run_cli,
        simulate,
        summarize,
        survival_at,
        write_dataset_csv,
    )

STATUS_FAILURE = 0
STATUS_DROPOUT = 1
STATUS_ADMINISTRATIVE = 2

__all__ = [
    "CensoringBreakdown",
    "Dataset",
    "KmCurve",
    "SimulationSummary",
    "STATUS_ADMINISTRATIVE",
    "STATUS_DROPOUT",
    "STATUS_FAILURE",
    "admin_fraction_s2",
    "admin_fraction_s3",
    "censoring_breakdown",
    "dropout_mean",
    "fit_km",
    "km_limit_scenario1",
    "median_survival",
    "read_dataset_csv",
    "run_cli",
    "simulate",
    "summarize",
    "survival_at",
    "write_dataset_csv",
]
