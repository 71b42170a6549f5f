"""Validation study: simulated measurements, baselines, statistics and sensitivity."""

from opcost.validation.sensitivity import (
    Crossover,
    GridResult,
    SweepResult,
    grid_axis,
    perturbation_stability,
    robustness_grid,
    sweep_profile,
    weight_sweep,
)
from opcost.validation.simulation import (
    Baseline,
    SimulatedMeasurement,
    WorkloadClass,
    classify_workload,
    predict,
    simulate,
)
from opcost.validation.stats import AccuracyStats, accuracy, accuracy_stats, kendall, rankdata, spearman
from opcost.validation.study import run_study, synthetic_cohort

__all__ = [
    "AccuracyStats",
    "Baseline",
    "Crossover",
    "GridResult",
    "SimulatedMeasurement",
    "SweepResult",
    "WorkloadClass",
    "accuracy",
    "accuracy_stats",
    "classify_workload",
    "grid_axis",
    "kendall",
    "perturbation_stability",
    "predict",
    "rankdata",
    "robustness_grid",
    "run_study",
    "simulate",
    "spearman",
    "sweep_profile",
    "synthetic_cohort",
    "weight_sweep",
]
