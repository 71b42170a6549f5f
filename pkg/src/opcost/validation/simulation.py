"""Workload classification, simulated measurements and baseline predictors."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from opcost.cost_model import CostTable, classes_in_group
from opcost.errors import InvalidArgumentError
from opcost.parsers.base import CountVector
from opcost.scoring import RawTotals, aggregate_raw

TIME_PER_CU = 1e-3  # seconds per compute unit
JOULES_PER_EU = 1.0
NOISE_SD = 0.05
NOISE_BOUND = 0.15
MEM_PENALTY = (1.2, 1.8)


class WorkloadClass(Enum):
    COMPUTE_BOUND = "compute_bound"
    MEMORY_BOUND = "memory_bound"
    MIXED = "mixed"


_COMPUTE_KEYS = ("loops", "factorial", "formula")
_MEMORY_KEYS = ("sort", "search")


def classify_workload(name: str) -> WorkloadClass:
    lowered = name.lower()
    if any(k in lowered for k in _COMPUTE_KEYS):
        return WorkloadClass.COMPUTE_BOUND
    if any(k in lowered for k in _MEMORY_KEYS):
        return WorkloadClass.MEMORY_BOUND
    return WorkloadClass.MIXED


@dataclass(frozen=True)
class SimulatedMeasurement:
    artifact_id: str
    workload: WorkloadClass
    time: float  # seconds
    energy: float  # joules


def _truncated_normal(rng: np.random.Generator, sd: float, bound: float) -> float:
    if sd == 0:
        return 0.0
    while True:
        x = float(rng.normal(0.0, sd))
        if -bound < x < bound:
            return x


def simulate(
    artifacts: Sequence[tuple[str, RawTotals]],
    seed: int,
    noise_sd: float = NOISE_SD,
    noise_bound: float = NOISE_BOUND,
    mem_penalty: tuple[float, float] = MEM_PENALTY,
    time_per_cu: float = TIME_PER_CU,
    joules_per_eu: float = JOULES_PER_EU,
) -> list[SimulatedMeasurement]:
    """Synthetic "measured" time and energy for each artifact.

    Both are linear in the predicted CU / EU with independent truncated
    normal noise.  Memory-bound artifacts draw one slow-memory penalty that
    multiplies both time and energy; mixed workloads behave as compute-bound.
    Draws happen in artifact order from a single generator seeded by ``seed``.
    """
    lo, hi = mem_penalty
    if not 0 < lo <= hi:
        raise InvalidArgumentError(f"memory penalty range must satisfy 0 < lo <= hi, got {mem_penalty}")
    rng = np.random.default_rng(seed)
    out = []
    for aid, raw in artifacts:
        if not raw.cu > 0:
            raise InvalidArgumentError(f"artifact {aid!r} has non-positive cu_total {raw.cu!r}")
        workload = classify_workload(aid)
        nu_time = _truncated_normal(rng, noise_sd, noise_bound)
        nu_energy = _truncated_normal(rng, noise_sd, noise_bound)
        penalty = 1.0
        if workload is WorkloadClass.MEMORY_BOUND:
            penalty = lo if lo == hi else float(rng.uniform(lo, hi))
        time = time_per_cu * raw.cu * (1 + nu_time) * penalty
        energy = joules_per_eu * raw.eu * (1 + nu_energy) * penalty
        out.append(SimulatedMeasurement(aid, workload, time, energy))
    return out


class Baseline(Enum):
    MODEL = "MODEL"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"

    @classmethod
    def parse(cls, tag: str) -> "Baseline":
        try:
            return cls(tag.upper())
        except (ValueError, AttributeError):
            raise InvalidArgumentError(f"unknown baseline {tag!r}; expected MODEL, B1, B2 or B3") from None


_MEMORY_CLASSES = frozenset(classes_in_group("memory"))
MEMORY_PENALTY_FACTOR = 10.0


def predict(baseline: Baseline | str, counts: CountVector, table: CostTable) -> tuple[float, float]:
    """(time proxy, energy proxy) for one artifact under a predictor.

    MODEL uses the cost table's CU and EU totals; B1 counts instructions;
    B2 counts with memory-group instructions weighted 10x; B3 uses the
    table's USD total as a single monetised schedule for both targets.
    """
    if not isinstance(baseline, Baseline):
        baseline = Baseline.parse(baseline)
    if baseline is Baseline.MODEL:
        raw = aggregate_raw(counts, table)
        return raw.cu, raw.eu
    if baseline is Baseline.B1:
        n = float(counts.total())
        return n, n
    if baseline is Baseline.B2:
        weighted = sum(
            n * (MEMORY_PENALTY_FACTOR if cls in _MEMORY_CLASSES else 1.0) for cls, n in counts.items()
        )
        return float(weighted), float(weighted)
    raw = aggregate_raw(counts, table)
    return raw.usd, raw.usd
