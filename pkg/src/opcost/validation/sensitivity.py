"""Weight sweeps, perturbation stability and EU/price robustness grids."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from opcost.cost_model import METRICS, CostTable, MetricKind, Profile, scale_table
from opcost.errors import InvalidArgumentError
from opcost.parsers.base import CountVector
from opcost.reporting import rank
from opcost.scoring import aggregate_raw, composite, score_totals

log = logging.getLogger(__name__)


def sweep_profile(base: Profile, metric: MetricKind, w: float) -> Profile:
    """``base`` with ``metric`` set to ``w`` and the other weights rescaled to fill ``1 - w``."""
    if not 0 < w < 1:
        raise InvalidArgumentError(f"swept weight must lie in (0, 1), got {w!r}")
    rest = 1.0 - base[metric]
    weights = tuple(w if m is metric else base[m] * (1.0 - w) / rest for m in METRICS)
    return Profile(f"{base.name}[{metric.value}={w:.6g}]", weights)


@dataclass(frozen=True)
class Crossover:
    w: float
    leader_before: str
    leader_after: str


@dataclass(frozen=True)
class SweepResult:
    metric: MetricKind
    ids: tuple[str, str]
    points: tuple[tuple[float, float, float], ...]  # (w, score_a, score_b)
    crossovers: tuple[Crossover, ...]

    def to_dict(self) -> dict:
        return {
            "metric": self.metric.value,
            "artifacts": list(self.ids),
            "points": [{"w": w, "score_a": a, "score_b": b} for w, a, b in self.points],
            "crossovers": [
                {"w": c.w, "leader_before": c.leader_before, "leader_after": c.leader_after}
                for c in self.crossovers
            ],
        }

    def to_csv(self) -> str:
        a, b = self.ids
        lines = [f"w,score_{a},score_{b}"]
        lines += [f"{w!r},{sa!r},{sb!r}" for w, sa, sb in self.points]
        return "\n".join(lines) + "\n"


def weight_sweep(
    norms_a: Mapping[MetricKind, float],
    norms_b: Mapping[MetricKind, float],
    metric: MetricKind,
    base_profile: Profile,
    w_range: tuple[float, float] = (0.1, 0.7),
    steps: int = 121,
    ids: tuple[str, str] = ("A", "B"),
) -> SweepResult:
    """Scores of two artifacts as one weight moves across ``w_range``.

    Scores are ``100 * (1 - csc)`` without rounding.  A crossover is reported
    wherever the leader changes between grid points, located by linear
    interpolation of the score difference.
    """
    if steps < 2:
        raise InvalidArgumentError(f"a sweep needs at least 2 steps, got {steps}")
    lo, hi = w_range
    if not 0 < lo < hi < 1:
        raise InvalidArgumentError(f"sweep range must satisfy 0 < lo < hi < 1, got {w_range}")
    points = []
    for i in range(steps):
        w = lo + (hi - lo) * i / (steps - 1)
        profile = sweep_profile(base_profile, metric, w)
        points.append((w, 100.0 * (1.0 - composite(norms_a, profile)), 100.0 * (1.0 - composite(norms_b, profile))))

    a, b = ids
    crossovers = []
    prev = None  # (index, diff) of last grid point with a strict leader
    for i, (w, sa, sb) in enumerate(points):
        d = sa - sb
        if d == 0:
            continue
        if prev is not None and (prev[1] > 0) != (d > 0):
            j, dj = prev
            if j + 1 < i:
                # Exact tie on the grid between the two leaders.
                cross_w = points[j + 1][0]
            else:
                wj = points[j][0]
                cross_w = wj + (w - wj) * dj / (dj - d)
            before, after = (a, b) if dj > 0 else (b, a)
            crossovers.append(Crossover(cross_w, before, after))
        prev = (i, d)
    return SweepResult(metric, ids, tuple(points), tuple(crossovers))


def _order(cscs: Mapping[str, float]) -> dict[str, int]:
    ranked = sorted(cscs, key=lambda aid: (cscs[aid], aid))
    return {aid: pos for pos, aid in enumerate(ranked)}


def perturbation_stability(
    norms: Mapping[str, Mapping[MetricKind, float]],
    profile: Profile,
    magnitude: float = 0.2,
    trials: int = 200,
    seed: int = 42,
) -> float:
    """Mean fraction of artifact pairs whose order flips under weight noise.

    Each trial multiplies every weight by an independent factor drawn from
    ``U[1 - magnitude, 1 + magnitude]`` and renormalizes.  Trial ``t`` uses
    its own child seed, so results do not depend on evaluation order.
    """
    ids = sorted(norms)
    if len(ids) < 2:
        raise InvalidArgumentError("perturbation stability needs at least two artifacts")
    if not 0 <= magnitude < 1:
        raise InvalidArgumentError(f"magnitude must lie in [0, 1), got {magnitude!r}")
    if trials < 1:
        raise InvalidArgumentError(f"trials must be positive, got {trials}")
    base_csc = {aid: composite(norms[aid], profile) for aid in ids}
    if len(set(base_csc.values())) == 1:
        log.warning("all artifacts have the same composite score; stability is trivially 0")
        return 0.0
    base_order = _order(base_csc)
    pairs = [(x, y) for i, x in enumerate(ids) for y in ids[i + 1:]]
    w = np.asarray(profile.weights)
    flipped_total = 0.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        factors = rng.uniform(1.0 - magnitude, 1.0 + magnitude, size=4)
        perturbed = w * factors
        p = Profile("perturbed", tuple(float(x) for x in perturbed / perturbed.sum()))
        order = _order({aid: composite(norms[aid], p) for aid in ids})
        flips = sum(
            (base_order[x] < base_order[y]) != (order[x] < order[y]) for x, y in pairs
        )
        flipped_total += flips / len(pairs)
    return flipped_total / trials


@dataclass
class GridResult:
    eu_scales: list[float]
    price_scales: list[float]
    usd_leader: list[list[str]]
    composite_leader: list[list[str]]
    usd: list[list[dict[str, float]]] = field(default_factory=list)
    scores: list[list[dict[str, float]]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "eu_scales": self.eu_scales,
            "price_scales": self.price_scales,
            "usd_leader": self.usd_leader,
            "composite_leader": self.composite_leader,
            "usd": self.usd,
            "scores": self.scores,
        }

    def to_csv(self) -> str:
        ids = sorted(self.usd[0][0]) if self.usd else []
        header = ["eu_scale", "price_scale", "usd_leader", "composite_leader"]
        header += [f"usd_{i}" for i in ids] + [f"score_{i}" for i in ids]
        lines = [",".join(header)]
        for r, e in enumerate(self.eu_scales):
            for c, p in enumerate(self.price_scales):
                row = [repr(e), repr(p), self.usd_leader[r][c], self.composite_leader[r][c]]
                row += [repr(self.usd[r][c][i]) for i in ids] + [repr(self.scores[r][c][i]) for i in ids]
                lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def grid_axis(lo: float, hi: float, n: int) -> list[float]:
    """``n`` evenly spaced values; rounded to 12 places so that e.g. 1.0 is hit exactly."""
    if n < 1:
        raise InvalidArgumentError(f"grid dimension must be at least 1, got {n}")
    if n == 1:
        return [round((lo + hi) / 2, 12)]
    return [round(lo + (hi - lo) * i / (n - 1), 12) for i in range(n)]


def robustness_grid(
    artifacts: Sequence[tuple[str, CountVector]],
    table: CostTable,
    profile: Profile,
    eu_scales: tuple[float, float] = (0.8, 1.2),
    price_scales: tuple[float, float] = (0.7, 1.3),
    grid: tuple[int, int] = (5, 7),
) -> GridResult:
    """Cheapest-USD and best-composite artifact for every (EU scale, price scale) cell."""
    if not artifacts:
        raise InvalidArgumentError("robustness grid needs at least one artifact")
    rows, cols = grid
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"empty grid {grid}")
    eus = grid_axis(*eu_scales, rows)
    prices = grid_axis(*price_scales, cols)
    out = GridResult(eus, prices, [], [])
    for e in eus:
        usd_row, comp_row, usd_cells, score_cells = [], [], [], []
        for p in prices:
            scaled = scale_table(table, e, p)
            raws = [(aid, aggregate_raw(counts, scaled)) for aid, counts in artifacts]
            results = score_totals(raws, profile)
            usd_row.append(min(raws, key=lambda item: (item[1].usd, item[0]))[0])
            comp_row.append(rank(results)[0].artifact_id)
            usd_cells.append({aid: raw.usd for aid, raw in raws})
            score_cells.append({r.artifact_id: r.efficiency_score for r in results})
        out.usd_leader.append(usd_row)
        out.composite_leader.append(comp_row)
        out.usd.append(usd_cells)
        out.scores.append(score_cells)
    return out
