"""Seeded end-to-end validation study over a synthetic algorithm cohort."""

from __future__ import annotations

import json
from typing import Any, Sequence

from opcost.cost_model import CostTable, InstructionClass as IC, builtin_profiles, load_bundled_table
from opcost.parsers.base import CountVector
from opcost.scoring import aggregate_raw, normalize_cohort, Cohort
from opcost.validation.sensitivity import perturbation_stability
from opcost.validation.simulation import (
    Baseline,
    WorkloadClass,
    classify_workload,
    predict,
    simulate,
)
from opcost.validation.stats import AccuracyStats, accuracy_stats, spearman

STUDY_SCHEMA_VERSION = "1"

# Instruction mixes by share of compute units.  Mixes within a workload class
# differ in energy per instruction, as real kernels do.
_MIXES: dict[str, dict[IC, float]] = {
    "arith_light": {
        IC.ARITH_ADD: 0.45, IC.LOGIC_AND: 0.05, IC.LOGIC_XOR: 0.05, IC.CMP: 0.15,
        IC.BRANCH_COND: 0.15, IC.MEM_LOAD: 0.15,
    },
    "arith_heavy": {IC.ARITH_DIV: 0.60, IC.ARITH_MUL: 0.30, IC.ARITH_ADD: 0.10},
    "vector": {IC.SIMD_MUL_WIDE: 0.40, IC.SIMD_ADD: 0.30, IC.SIMD_ADD_INT: 0.20, IC.ARITH_ADD: 0.10},
    "scan": {IC.MEM_LOAD: 0.45, IC.CMP: 0.15, IC.BRANCH_COND: 0.15, IC.ARITH_ADD: 0.15, IC.MEM_STORE: 0.10},
    "shuffle": {IC.MEM_LOAD: 0.30, IC.MEM_STORE: 0.30, IC.MEM_MOVE: 0.15, IC.CMP: 0.10, IC.BRANCH_COND: 0.15},
    "calls": {IC.CONTROL_CALL: 0.35, IC.ARITH_ADD: 0.20, IC.BRANCH_COND: 0.15, IC.CMP: 0.10, IC.MEM_LOAD: 0.20},
    "branchy": {IC.BRANCH_COND: 0.30, IC.CMP: 0.30, IC.ARITH_SUB: 0.20, IC.ARITH_DIV: 0.20},
}

# (name, mix, size level); CU grows by SIZE_RATIO per level.
_ROSTER: tuple[tuple[str, str, int], ...] = (
    ("Constant_O(1)_Formula", "arith_light", 0),
    ("Quadratic_Formula", "arith_heavy", 1),
    ("Sum_Loops", "vector", 2),
    ("Factorial_Iterative", "arith_light", 3),
    ("Power_Loops", "arith_heavy", 4),
    ("Factorial_Recursive", "vector", 5),
    ("Nested_Loops", "arith_light", 6),
    ("Linear_Search", "scan", 0),
    ("Binary_Search", "shuffle", 1),
    ("Insertion_Sort", "scan", 2),
    ("Bubble_Sort", "shuffle", 3),
    ("Quick_Sort", "scan", 4),
    ("Merge_Sort", "shuffle", 5),
    ("Heap_Sort", "scan", 6),
    ("GCD_Euclid", "branchy", 0),
    ("Fibonacci_Recursive", "calls", 1),
    ("Sqrt_O(sqrt_n)_PrimalityTest", "branchy", 2),
    ("Hanoi_Tower", "calls", 3),
    ("Prime_Sieve", "branchy", 4),
    ("Matrix_Transpose", "calls", 5),
)

BASE_CU = 60.0
SIZE_RATIO = 1.6


def synthetic_cohort(table: CostTable | None = None) -> list[tuple[str, CountVector]]:
    """Twenty named algorithm artifacts with deterministic instruction counts.

    Each artifact targets a compute-unit budget ``BASE_CU * SIZE_RATIO**level``
    split across its mix; counts are rounded to integers.
    """
    table = table or load_bundled_table("x86_64")
    out = []
    for name, mix, level in _ROSTER:
        budget = BASE_CU * SIZE_RATIO**level
        counts = {cls: max(1, round(budget * share / table.base_cost(cls).cu)) for cls, share in _MIXES[mix].items()}
        out.append((name, CountVector(counts)))
    return out


def _stats(pred: Sequence[float], meas: Sequence[float]) -> AccuracyStats:
    return accuracy_stats(list(pred), list(meas))


def run_study(
    seed: int = 42,
    table: CostTable | None = None,
    artifacts: Sequence[tuple[str, CountVector]] | None = None,
    stability_trials: int = 200,
) -> dict[str, Any]:
    """Compare MODEL and the B1-B3 baselines against simulated measurements."""
    table = table or load_bundled_table("x86_64")
    artifacts = list(artifacts) if artifacts is not None else synthetic_cohort(table)
    raws = [(aid, aggregate_raw(counts, table)) for aid, counts in artifacts]
    measured = simulate(raws, seed)
    times = [m.time for m in measured]
    energies = [m.energy for m in measured]

    baselines: dict[str, Any] = {}
    by_workload: dict[str, Any] = {}
    for b in Baseline:
        preds = [predict(b, counts, table) for _, counts in artifacts]
        tp = [p[0] for p in preds]
        ep = [p[1] for p in preds]
        baselines[b.value] = {"time": _stats(tp, times).as_dict(), "energy": _stats(ep, energies).as_dict()}
        per_class = {}
        for wc in WorkloadClass:
            idx = [i for i, m in enumerate(measured) if m.workload is wc]
            if len(idx) < 2:
                continue
            per_class[wc.value] = {
                "n": len(idx),
                "spearman_time": spearman([tp[i] for i in idx], [times[i] for i in idx]),
                "spearman_energy": spearman([ep[i] for i in idx], [energies[i] for i in idx]),
            }
        by_workload[b.value] = per_class

    norms = normalize_cohort(Cohort(tuple(raws)))
    stability = {
        p.name: perturbation_stability(norms, p, 0.2, stability_trials, seed) for p in builtin_profiles()
    }
    return {
        "schema_version": STUDY_SCHEMA_VERSION,
        "seed": seed,
        "architecture": table.architecture,
        "table_version": table.version,
        "artifacts": [
            {
                "id": aid,
                "workload": classify_workload(aid).value,
                "cu_total": raw.cu,
                "eu_total": raw.eu,
                "usd_total": raw.usd,
                "time_s": m.time,
                "energy_j": m.energy,
                "counts": counts.to_dict(),
            }
            for (aid, counts), (_, raw), m in zip(artifacts, raws, measured)
        ],
        "baselines": baselines,
        "by_workload": by_workload,
        "stability": {"magnitude": 0.2, "trials": stability_trials, "flipped_pair_fraction": stability},
    }


def study_to_json(study: dict[str, Any]) -> bytes:
    return (json.dumps(study, indent=2) + "\n").encode("utf-8")


def render_study_text(study: dict[str, Any]) -> str:
    lines = [f"validation study  seed={study['seed']}  arch={study['architecture']}  n={len(study['artifacts'])}", ""]
    header = f"{'Model':<7}{'MAE time':>12}{'MAPE time':>11}{'rho time':>10}{'tau time':>10}" \
             f"{'MAE energy':>12}{'MAPE energy':>13}{'rho energy':>12}{'tau energy':>12}"
    lines.append(header)
    for name, s in study["baselines"].items():
        t, e = s["time"], s["energy"]
        lines.append(
            f"{name:<7}{t['mae']:>12.4g}{t['mape']:>10.2f}%{t['spearman']:>10.3f}{t['kendall']:>10.3f}"
            f"{e['mae']:>12.4g}{e['mape']:>12.2f}%{e['spearman']:>12.3f}{e['kendall']:>12.3f}"
        )
    lines += ["", "Spearman by workload class (time / energy)"]
    for name, per in study["by_workload"].items():
        cells = "  ".join(
            f"{wc}: {v['spearman_time']:.3f} / {v['spearman_energy']:.3f}" for wc, v in per.items()
        )
        lines.append(f"  {name:<6} {cells}")
    lines += ["", "Pairwise-swap fraction under +/-20% weight noise"]
    for name, frac in study["stability"]["flipped_pair_fraction"].items():
        lines.append(f"  {name:<11} {frac:.4f}")
    return "\n".join(lines) + "\n"
