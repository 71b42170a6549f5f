"""Rank correlations and scale-fitted error statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from opcost.errors import InvalidArgumentError, UndefinedCorrelationError


@dataclass(frozen=True)
class AccuracyStats:
    mae: float
    mape: float  # percent
    spearman: float
    kendall: float

    def as_dict(self) -> dict[str, float]:
        return {"mae": self.mae, "mape": self.mape, "spearman": self.spearman, "kendall": self.kendall}


def _check_pair(xs: Sequence[float], ys: Sequence[float]) -> None:
    if len(xs) != len(ys):
        raise InvalidArgumentError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise InvalidArgumentError("at least two observations are required")


def rankdata(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of the average-tie rank vectors."""
    _check_pair(xs, ys)
    rx, ry = rankdata(xs), rankdata(ys)
    n = len(rx)
    mx, my = sum(rx) / n, sum(ry) / n
    dx = [r - mx for r in rx]
    dy = [r - my for r in ry]
    sxx = sum(d * d for d in dx)
    syy = sum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("spearman correlation undefined: an input has constant ranks")
    rho = sum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def kendall(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Kendall tau-b."""
    _check_pair(xs, ys)
    n = len(xs)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    denom = math.sqrt((concordant + discordant + ties_x) * (concordant + discordant + ties_y))
    if denom == 0:
        raise UndefinedCorrelationError("kendall correlation undefined: an input has constant ranks")
    tau = (concordant - discordant) / denom
    return max(-1.0, min(1.0, tau))


def fit_scale(predicted: Sequence[float], measured: Sequence[float]) -> float:
    """Least-squares factor ``a`` minimising ``sum((a*p - m)**2)``."""
    pp = math.fsum(p * p for p in predicted)
    if pp == 0:
        raise InvalidArgumentError("predicted values are all zero; no scale can be fitted")
    return math.fsum(p * m for p, m in zip(predicted, measured)) / pp


def accuracy(predicted: Sequence[float], measured: Sequence[float]) -> tuple[float, float]:
    """(MAE, MAPE%) of scale-fitted predictions against measurements."""
    _check_pair(predicted, measured)
    if any(not (m > 0) for m in measured):
        raise InvalidArgumentError("measured values must all be positive")
    a = fit_scale(predicted, measured)
    residuals = [abs(a * p - m) for p, m in zip(predicted, measured)]
    n = len(residuals)
    mae = math.fsum(residuals) / n
    mape = 100.0 * math.fsum(r / m for r, m in zip(residuals, measured)) / n
    return mae, mape


def accuracy_stats(predicted: Sequence[float], measured: Sequence[float]) -> AccuracyStats:
    mae, mape = accuracy(predicted, measured)
    return AccuracyStats(mae, mape, spearman(predicted, measured), kendall(predicted, measured))
