"""Raw metric totals, cohort min-max normalization and profile-weighted scores.

Lower composite (csc) is cheaper; the efficiency score inverts it onto a
0-100 scale so that the cheapest artifact in a cohort scores 100.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from opcost.cost_model import (
    METRICS,
    WEIGHT_SUM_TOLERANCE,
    CostTable,
    CostVector,
    InstructionClass,
    MemoryTier,
    MetricKind,
    Profile,
    TierPrior,
    lookup_cost,
)
from opcost.errors import InvalidArgumentError, ValidationError
from opcost.parsers.base import CountVector

EPSILON = 1e-9


@dataclass(frozen=True)
class RawTotals:
    cu: float = 0.0
    eu: float = 0.0
    co2: float = 0.0
    usd: float = 0.0

    def __post_init__(self) -> None:
        for name in ("cu", "eu", "co2", "usd"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidArgumentError(f"raw total {name} must be finite and non-negative, got {v!r}")

    def __getitem__(self, metric: MetricKind) -> float:
        return getattr(self, metric.name.lower())

    def __add__(self, other: "RawTotals") -> "RawTotals":
        return RawTotals(self.cu + other.cu, self.eu + other.eu, self.co2 + other.co2, self.usd + other.usd)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.cu, self.eu, self.co2, self.usd)

    @classmethod
    def from_cost(cls, v: CostVector) -> "RawTotals":
        return cls(v.cu, v.eu, v.co2, v.usd)


ZERO_TOTALS = RawTotals()

# Tier priors implied by a PTX state-space qualifier; None defers to the
# caller's prior (or the table default).
SPACE_PRIORS: dict[str, TierPrior | None] = {
    "shared": TierPrior.point(MemoryTier.L1),
    "const": TierPrior.point(MemoryTier.L1),
    "param": TierPrior.point(MemoryTier.L1),
    "local": TierPrior.point(MemoryTier.DRAM),
    "global": None,
}


def space_prior(space: str) -> TierPrior | None:
    return SPACE_PRIORS.get(space)


def aggregate_breakdown(
    counts: CountVector,
    table: CostTable,
    priors: Mapping[InstructionClass, TierPrior] | None = None,
    force_tier: MemoryTier | None = None,
) -> dict[InstructionClass, RawTotals]:
    """Per-class contribution ``n_k * cost_k`` to the raw totals.

    ``force_tier`` assigns every tierable instruction to one tier, ignoring
    priors and space hints; uncertainty bands use it.
    """
    priors = priors or {}
    for cls in priors:
        if not cls.tierable:
            raise InvalidArgumentError(f"a tier prior was given for non-tierable class {cls.value}")
    out: dict[InstructionClass, RawTotals] = {}
    hints = counts.spaces
    for cls, n in counts.items():
        if cls.tierable and table.has_tiers(cls):
            if force_tier is not None:
                cost = lookup_cost(table, cls, TierPrior.point(force_tier)).scaled(n)
            else:
                hinted = 0
                cost = None
                for (hcls, space), m in sorted(hints.items(), key=lambda kv: kv[0][1]):
                    if hcls is not cls:
                        continue
                    prior = space_prior(space) or priors.get(cls)
                    part = lookup_cost(table, cls, prior).scaled(m)
                    cost = part if cost is None else cost + part
                    hinted += m
                if n > hinted:
                    part = lookup_cost(table, cls, priors.get(cls)).scaled(n - hinted)
                    cost = part if cost is None else cost + part
        else:
            cost = lookup_cost(table, cls).scaled(n)
        out[cls] = RawTotals.from_cost(cost)
    return out


def aggregate_raw(
    counts: CountVector,
    table: CostTable,
    priors: Mapping[InstructionClass, TierPrior] | None = None,
) -> RawTotals:
    """Raw totals per metric: sum over classes of count times per-class cost."""
    total = ZERO_TOTALS
    for part in aggregate_breakdown(counts, table, priors).values():
        total = total + part
    return total


@dataclass(frozen=True)
class Cohort:
    members: tuple[tuple[str, RawTotals], ...]
    epsilon: float = EPSILON

    def __post_init__(self) -> None:
        members = tuple((str(i), r) for i, r in self.members)
        ids = [i for i, _ in members]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise InvalidArgumentError(f"duplicate artifact ids in cohort: {dupes}")
        object.__setattr__(self, "members", members)

    def bounds(self) -> dict[MetricKind, tuple[float, float]]:
        if not self.members:
            raise InvalidArgumentError("cannot normalize an empty cohort")
        out = {}
        for m in METRICS:
            values = [r[m] for _, r in self.members]
            out[m] = (min(values), max(values))
        return out


def _norm(x: float, lo: float, hi: float, eps: float) -> float:
    return (x - lo) / (hi - lo + eps)


def normalize_cohort(cohort: Cohort) -> dict[str, dict[MetricKind, float]]:
    """Min-max normalize every metric within the cohort; values lie in [0, 1)."""
    bounds = cohort.bounds()
    return {
        aid: {m: _norm(raw[m], *bounds[m], cohort.epsilon) for m in METRICS}
        for aid, raw in cohort.members
    }


def _check_weights(profile: Profile) -> None:
    w = profile.weights
    if len(w) != 4 or any(not (x > 0) for x in w) or abs(math.fsum(w) - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise InvalidArgumentError(f"profile {profile.name!r} weights {w} are not a positive unit-sum vector")


def composite(normalized: Mapping[MetricKind, float], profile: Profile) -> float:
    """Profile-weighted sum of normalized metrics (csc)."""
    _check_weights(profile)
    total = 0.0
    for m, w in zip(METRICS, profile.weights):
        total += w * normalized[m]
    return total


@dataclass(frozen=True)
class GradeScale:
    """Score cut points: the first ``(threshold, label)`` with ``score >= threshold`` wins."""

    grades: tuple[tuple[float, str], ...] = (
        (97.0, "A+"), (93.0, "A"), (90.0, "A-"), (87.0, "B+"), (83.0, "B"), (80.0, "B-"),
        (77.0, "C+"), (73.0, "C"), (70.0, "C-"), (60.0, "D"),
    )
    floor_grade: str = "F"
    ratings: tuple[tuple[float, str], ...] = ((90.0, "Excellent"), (75.0, "Good"), (60.0, "Fair"))
    floor_rating: str = "Poor"

    def __post_init__(self) -> None:
        for name in ("grades", "ratings"):
            cuts = [float(t) for t, _ in getattr(self, name)]
            if cuts != sorted(cuts, reverse=True):
                raise ValidationError(f"{name} thresholds must be in descending order: {cuts}")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "GradeScale":
        """Override cut points from ``{"grades": {"A+": 95, ...}, "ratings": {...}}``."""
        base = cls()
        grades = _apply_overrides(base.grades, data.get("grades"), "grades")
        ratings = _apply_overrides(base.ratings, data.get("ratings"), "ratings")
        return cls(grades, base.floor_grade, ratings, base.floor_rating)

    def grade(self, score: float) -> str:
        return next((label for t, label in self.grades if score >= t), self.floor_grade)

    def rating(self, score: float) -> str:
        return next((label for t, label in self.ratings if score >= t), self.floor_rating)


def _apply_overrides(cuts, overrides, what):
    if not overrides:
        return cuts
    labels = {label for _, label in cuts}
    unknown = set(overrides) - labels
    if unknown:
        raise ValidationError(f"unknown {what} labels in threshold overrides: {sorted(unknown)}")
    return tuple((float(overrides.get(label, t)), label) for t, label in cuts)


DEFAULT_GRADES = GradeScale()


def efficiency_and_grade(csc: float, scale: GradeScale = DEFAULT_GRADES) -> tuple[float, str, str]:
    if not (0.0 <= csc <= 1.0):
        raise InvalidArgumentError(f"composite score must lie in [0, 1], got {csc!r}")
    score = round(100.0 * (1.0 - csc), 2)
    return score, scale.grade(score), scale.rating(score)


@dataclass(frozen=True)
class CompositeResult:
    artifact_id: str
    raw: RawTotals
    normalized: Mapping[MetricKind, float]
    csc: float
    efficiency_score: float
    grade: str
    rating: str
    band: tuple[float, float] | None = None


def uncertainty_band(
    counts: CountVector,
    table: CostTable,
    cohort: Cohort,
    profile: Profile,
    priors: Mapping[InstructionClass, TierPrior] | None = None,
) -> tuple[float, float]:
    """csc range between the all-L1 and all-DRAM tier assignments.

    Normalization bounds stay at the cohort's expected-cost values; the
    normalized values are clipped to [0, 1].
    """
    bounds = cohort.bounds()

    def csc_of(raw: RawTotals) -> float:
        norms = {m: min(max(_norm(raw[m], *bounds[m], cohort.epsilon), 0.0), 1.0) for m in METRICS}
        return composite(norms, profile)

    expected = csc_of(aggregate_raw(counts, table, priors))
    if not any(cls.tierable and table.has_tiers(cls) for cls, _ in counts.items()):
        return expected, expected
    low_raw = ZERO_TOTALS
    for part in aggregate_breakdown(counts, table, priors, force_tier=MemoryTier.L1).values():
        low_raw = low_raw + part
    high_raw = ZERO_TOTALS
    for part in aggregate_breakdown(counts, table, priors, force_tier=MemoryTier.DRAM).values():
        high_raw = high_raw + part
    low, high = csc_of(low_raw), csc_of(high_raw)
    return min(low, expected, high), max(low, expected, high)


def score_cohort(
    artifacts: Sequence[tuple[str, CountVector]],
    table: CostTable,
    profile: Profile,
    priors: Mapping[InstructionClass, TierPrior] | None = None,
    grades: GradeScale = DEFAULT_GRADES,
    bands: bool = False,
) -> list[CompositeResult]:
    """Score every artifact against the others; output keeps input order."""
    if not artifacts:
        raise InvalidArgumentError("cannot score an empty artifact list")
    raws = [(aid, aggregate_raw(counts, table, priors)) for aid, counts in artifacts]
    return score_totals(raws, profile, grades, table=table if bands else None,
                        counts=dict(artifacts) if bands else None, priors=priors)


def score_totals(
    raws: Sequence[tuple[str, RawTotals]],
    profile: Profile,
    grades: GradeScale = DEFAULT_GRADES,
    table: CostTable | None = None,
    counts: Mapping[str, CountVector] | None = None,
    priors: Mapping[InstructionClass, TierPrior] | None = None,
) -> list[CompositeResult]:
    """Normalize precomputed raw totals and grade them.

    Bands are attached when both ``table`` and ``counts`` are supplied.
    """
    cohort = Cohort(tuple(raws))
    norms = normalize_cohort(cohort)
    results = []
    for aid, raw in cohort.members:
        csc = composite(norms[aid], profile)
        score, grade, rating = efficiency_and_grade(csc, grades)
        band = None
        if table is not None and counts is not None:
            band = uncertainty_band(counts[aid], table, cohort, profile, priors)
        results.append(CompositeResult(aid, raw, norms[aid], csc, score, grade, rating, band))
    return results
