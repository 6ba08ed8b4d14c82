"""Population-level statistics: percentile ladders, effect sizes,
significance, confidence intervals, renormalization, and cross-media
comparison tables."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.special import stdtr

from .errors import DegenerateGroupsError, StatsError

LARGE_EFFECT_D = 0.8
SIGNIFICANT_P = 0.001


class PopulationStats:
    """Per-name sorted value ladders with n / mean / sample sd."""

    def __init__(self, values: Mapping[str, Sequence[float]]):
        self._sorted: dict[str, np.ndarray] = {}
        self._mean: dict[str, float] = {}
        self._sd: dict[str, float] = {}
        for name, column in values.items():
            arr = np.sort(np.asarray(column, dtype=np.float64))
            if arr.size < 1:
                raise StatsError(f"no values for {name!r}")
            self._sorted[name] = arr
            self._mean[name] = float(arr.mean())
            self._sd[name] = float(arr.std(ddof=1)) if arr.size > 1 else 0.0

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._sorted)

    def _column(self, name: str) -> np.ndarray:
        try:
            return self._sorted[name]
        except KeyError:
            raise StatsError(f"unknown trait {name!r}") from None

    def n(self, name: str) -> int:
        return int(self._column(name).size)

    def mean(self, name: str) -> float:
        self._column(name)
        return self._mean[name]

    def sd(self, name: str) -> float:
        self._column(name)
        return self._sd[name]

    def values(self, name: str) -> np.ndarray:
        return self._column(name).copy()

    def percentile_rank(self, name: str, value: float) -> float:
        """Midrank percentile of ``value`` against the ladder:
        100 * (count_less + 0.5 * count_equal) / n."""
        arr = self._column(name)
        lo = int(np.searchsorted(arr, value, side="left"))
        hi = int(np.searchsorted(arr, value, side="right"))
        return 100.0 * (lo + 0.5 * (hi - lo)) / arr.size

    def percentile_ranks(self, name: str, values) -> np.ndarray:
        """Vectorized midrank percentiles (same convention)."""
        arr = self._column(name)
        v = np.asarray(values, dtype=np.float64)
        lo = np.searchsorted(arr, v, side="left")
        hi = np.searchsorted(arr, v, side="right")
        return 100.0 * (lo + 0.5 * (hi - lo)) / arr.size

    def summary(self) -> dict[str, dict]:
        return {
            name: {"n": int(arr.size), "mean": self._mean[name], "sd": self._sd[name]}
            for name, arr in self._sorted.items()
        }


def save_stats_json(stats: PopulationStats, path) -> None:
    """Serialize summary statistics as JSON mapping name -> {n, mean, sd}."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(stats.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_stats_json(path) -> dict[str, dict]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    for name, entry in doc.items():
        if not {"n", "mean", "sd"} <= set(entry):
            raise StatsError(f"stats file {path}: entry {name!r} missing n/mean/sd")
    return doc


def cohens_d(a, b) -> float:
    """Standardized mean difference (mean_a - mean_b) / pooled sd."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise StatsError("cohens_d needs at least 2 values per group")
    va = float(a.var(ddof=1))
    vb = float(b.var(ddof=1))
    pooled = math.sqrt(((a.size - 1) * va + (b.size - 1) * vb) / (a.size + b.size - 2))
    if pooled == 0.0:
        raise DegenerateGroupsError("both groups are constant; d is undefined")
    return (float(a.mean()) - float(b.mean())) / pooled


def welch_p(a, b) -> float:
    """Two-sided Welch's t-test p-value.

    t = (mean_a - mean_b) / sqrt(s_a^2/n_a + s_b^2/n_b) with
    Welch-Satterthwaite degrees of freedom; p from the Student-t
    survival function. Returns exactly 1.0 when t == 0.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise StatsError("welch_p needs at least 2 values per group")
    va = float(a.var(ddof=1))
    vb = float(b.var(ddof=1))
    if va == 0.0 and vb == 0.0:
        raise DegenerateGroupsError("both groups have zero variance")
    qa = va / a.size
    qb = vb / b.size
    t = (float(a.mean()) - float(b.mean())) / math.sqrt(qa + qb)
    if t == 0.0:
        return 1.0
    df = (qa + qb) ** 2 / (qa ** 2 / (a.size - 1) + qb ** 2 / (b.size - 1))
    return float(2.0 * stdtr(df, -abs(t)))


def mean_ci95(values) -> tuple[float, float]:
    """Normal-approximation 95% CI of the mean: mean +/- 1.96 * s/sqrt(n)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        raise StatsError("mean_ci95 needs at least 2 values")
    half = 1.96 * float(arr.std(ddof=1)) / math.sqrt(arr.size)
    m = float(arr.mean())
    return (m - half, m + half)


def renormalize(x: float, src: tuple[float, float], dst: tuple[float, float]) -> float:
    """Map ``x`` from one population's (mean, sd) to another's:
    dst_mean + dst_sd * (x - src_mean) / src_sd."""
    src_mean, src_sd = src
    dst_mean, dst_sd = dst
    if src_sd == 0.0:
        raise StatsError("source sd is zero; renormalization undefined")
    if src_sd < 0.0 or dst_sd < 0.0:
        raise StatsError("standard deviations must be non-negative")
    return dst_mean + dst_sd * (x - src_mean) / src_sd


@dataclass
class MediaComparisonRow:
    """One trait/category compared across two media. ``ratio`` is the
    non-baseline mean over the baseline mean, or None when the baseline
    mean is zero."""

    name: str
    mean_a: float
    mean_b: float
    ratio: float | None
    cohens_d: float
    p_value: float
    ci95_a: tuple[float, float]
    ci95_b: tuple[float, float]
    large_effect: bool
    significant: bool


def compare_media(
    table_a: Mapping[str, Sequence[float]],
    table_b: Mapping[str, Sequence[float]],
    baseline: str = "b",
    d_threshold: float = LARGE_EFFECT_D,
    p_threshold: float = SIGNIFICANT_P,
) -> list[MediaComparisonRow]:
    """Compare two per-author value tables name by name.

    Produces one row per shared name, ratio relative to the baseline
    side's mean, rows sorted by |d| descending (ties by name).
    """
    if baseline not in ("a", "b"):
        raise ValueError("baseline must be 'a' or 'b'")
    shared = sorted(set(table_a) & set(table_b))
    if not shared:
        raise StatsError("tables share no trait/category names")
    rows = []
    for name in shared:
        col_a = np.asarray(table_a[name], dtype=np.float64)
        col_b = np.asarray(table_b[name], dtype=np.float64)
        if col_a.size < 2 or col_b.size < 2:
            raise StatsError(f"column {name!r} has fewer than 2 values")
        mean_a = float(col_a.mean())
        mean_b = float(col_b.mean())
        base, other = (mean_b, mean_a) if baseline == "b" else (mean_a, mean_b)
        ratio = other / base if base != 0.0 else None
        d = cohens_d(col_a, col_b)
        p = welch_p(col_a, col_b)
        rows.append(MediaComparisonRow(
            name=name,
            mean_a=mean_a,
            mean_b=mean_b,
            ratio=ratio,
            cohens_d=d,
            p_value=p,
            ci95_a=mean_ci95(col_a),
            ci95_b=mean_ci95(col_b),
            large_effect=abs(d) > d_threshold,
            significant=p < p_threshold,
        ))
    rows.sort(key=lambda r: (-abs(r.cohens_d), r.name))
    return rows
