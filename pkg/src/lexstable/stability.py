"""Sample-size stability profiling.

For each author the "full sample" (most recent base_size messages or
words) is scored and turned into trait values; a shared percentile
ladder is built from all authors' full-sample values. Subsamples of
each requested size are then scored the same way, and variability is
the absolute difference, in percentile points on that shared ladder,
between the subsample's value and the author's full-sample value.
Curves aggregate mean / sd / 95th-percentile variability per size.

Subsample seeds are derived as
derive_seed(derive_seed(master_seed, author_id), size, index), so runs
are bit-reproducible regardless of thread count or schedule.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import IneligibleAuthorError, PlanError, StatsError
from .ingest import AuthorCorpus, Message
from .lexicon import Lexicon, count_matrix
from .rng import Stream, derive_seed
from .stats import PopulationStats
from .traits import TraitModel, weight_matrix

UNITS = ("messages", "words")
MODES = ("random", "contiguous")
ANCHORS = ("latest", "earliest")


@dataclass(frozen=True)
class SubsamplePlan:
    """What to subsample: unit (messages or words), mode (random or
    temporally contiguous blocks), the base size constituting an
    author's full sample, the subsample sizes, and the master seed.
    ``anchor`` picks which end of the corpus the full sample comes
    from."""

    unit: str
    mode: str
    base_size: int
    sizes: tuple[int, ...]
    master_seed: int
    anchor: str = "latest"

    def __post_init__(self):
        if self.unit not in UNITS:
            raise PlanError(f"unit must be one of {UNITS}")
        if self.mode not in MODES:
            raise PlanError(f"mode must be one of {MODES}")
        if self.anchor not in ANCHORS:
            raise PlanError(f"anchor must be one of {ANCHORS}")
        if self.base_size < 2:
            raise PlanError("base_size must be >= 2")
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes:
            raise PlanError("sizes must be non-empty")
        if any(s < 1 for s in self.sizes):
            raise PlanError("sizes must be positive")
        if any(b >= c for b, c in zip(self.sizes, self.sizes[1:])):
            raise PlanError("sizes must be strictly ascending")
        for s in self.sizes:
            if 2 * s > self.base_size:
                raise PlanError(
                    f"size {s} exceeds base/2 ({self.base_size // 2}); "
                    "at least two subsamples must fit"
                )


@dataclass
class VariabilityPoint:
    size: int
    n_observations: int
    mean_variability: float
    sd_variability: float
    p95_empirical: float
    p95_parametric: float


@dataclass
class StabilityCurve:
    trait_name: str
    mode: str
    unit: str
    points: list[VariabilityPoint]


def full_sample(corpus: AuthorCorpus, plan: SubsamplePlan) -> list[Message]:
    """The base_size most recent (or earliest, per plan.anchor) units of
    the corpus; word unit includes the message that crosses the
    threshold. Raises IneligibleAuthorError below base size."""
    msgs = corpus.messages
    if plan.unit == "messages":
        if len(msgs) < plan.base_size:
            raise IneligibleAuthorError(
                f"author {corpus.author_id!r} has {len(msgs)} messages; "
                f"base size is {plan.base_size}"
            )
        return msgs[: plan.base_size] if plan.anchor == "earliest" else msgs[-plan.base_size:]
    words = np.array([m.word_count for m in msgs], dtype=np.int64)
    if int(words.sum()) < plan.base_size:
        raise IneligibleAuthorError(
            f"author {corpus.author_id!r} has {int(words.sum())} words; "
            f"base size is {plan.base_size}"
        )
    if plan.anchor == "earliest":
        stop = int(np.searchsorted(np.cumsum(words), plan.base_size, side="left"))
        return msgs[: stop + 1]
    start = int(np.searchsorted(np.cumsum(words[::-1]), plan.base_size, side="left"))
    return msgs[len(msgs) - start - 1:]


def _contiguous_indices(word_counts: np.ndarray, plan: SubsamplePlan, size: int) -> list[np.ndarray]:
    n = word_counts.size
    if plan.unit == "messages":
        return [np.arange(i * size, (i + 1) * size) for i in range(plan.base_size // size)]
    target = plan.base_size // size
    blocks: list[np.ndarray] = []
    i = 0
    while len(blocks) < target and i < n:
        acc = 0
        j = i
        while j < n and acc < size:
            acc += int(word_counts[j])
            j += 1
        if acc < size:
            break  # trailing remainder, discarded
        blocks.append(np.arange(i, j))
        i = j
    return blocks


def _random_indices(
    word_counts: np.ndarray,
    plan: SubsamplePlan,
    size: int,
    author_seed: int,
    n_subsamples: int,
) -> list[np.ndarray]:
    n = word_counts.size
    picks = []
    for index in range(n_subsamples):
        perm = Stream(derive_seed(author_seed, size, index)).permutation(n)
        if plan.unit == "messages":
            picks.append(perm[:size])
        else:
            cw = np.cumsum(word_counts[perm])
            stop = int(np.searchsorted(cw, size, side="left"))
            picks.append(perm[: stop + 1])
    return picks


def _subsample_indices(
    word_counts: np.ndarray, plan: SubsamplePlan, size: int, author_seed: int
) -> list[np.ndarray]:
    blocks = _contiguous_indices(word_counts, plan, size)
    if plan.mode == "contiguous":
        return blocks
    # Random mode draws the same number of subsamples as contiguous mode
    # would produce, so the two modes compare equal observation counts.
    return _random_indices(word_counts, plan, size, author_seed, len(blocks))


def make_subsamples(
    corpus: AuthorCorpus, plan: SubsamplePlan, size: int, author_seed: int
) -> list[list[Message]]:
    """Subsample message lists for one author at one size.

    Contiguous mode partitions the full sample, earliest first, into
    floor(base/size) disjoint consecutive blocks (word unit: blocks
    accumulate messages until the size is reached, crossing message
    included; a short trailing remainder is discarded). Random mode
    draws the same number of subsamples uniformly without replacement
    within each subsample (overlap across subsamples allowed), seeded
    per (author, size, index).
    """
    if size < 1:
        raise PlanError("size must be positive")
    if 2 * size > plan.base_size:
        raise PlanError(f"size {size} exceeds base/2 ({plan.base_size // 2})")
    full = full_sample(corpus, plan)
    words = np.array([m.word_count for m in full], dtype=np.int64)
    return [[full[i] for i in idx] for idx in _subsample_indices(words, plan, size, author_seed)]


def trait_variability(
    full_value: float, sub_value: float, stats: PopulationStats, trait: str
) -> float:
    """Absolute percentile-point difference between the subsample's and
    the full sample's rank on the shared population ladder."""
    return abs(stats.percentile_rank(trait, sub_value) - stats.percentile_rank(trait, full_value))


@dataclass
class _AuthorData:
    key: tuple[str, str]
    counts: np.ndarray     # full-sample per-message category counts
    words: np.ndarray      # full-sample per-message token counts
    full_values: np.ndarray


def _author_values(freq: np.ndarray, W, b) -> np.ndarray:
    if W is None:
        return freq
    return freq @ W + b


def _pmap(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_stability(
    corpora: Sequence[AuthorCorpus],
    plan: SubsamplePlan,
    lexicon: Lexicon,
    model: TraitModel | None = None,
    threads: int = 1,
) -> list[StabilityCurve]:
    """Run the full stability experiment for one plan.

    Produces one curve per trait (or per lexicon category when no model
    is given), points ordered by size. Authors below the plan's base
    size, or whose full sample has no tokens, are excluded; fewer than
    two eligible authors is an error. Subsamples that tokenize to
    nothing are skipped, which n_observations reflects.

    Results are byte-identical for any ``threads`` >= 1: per-author work
    is independent and aggregation runs in sorted author order.
    """
    if model is not None:
        W, b = weight_matrix(model, lexicon)
        names = list(model.trait_names)
    else:
        W, b = None, None
        names = list(lexicon.category_names)

    ordered = sorted(corpora, key=lambda c: (c.author_id, c.medium))

    def prepare(corpus: AuthorCorpus) -> _AuthorData | None:
        try:
            full = full_sample(corpus, plan)
        except IneligibleAuthorError:
            return None
        M, w = count_matrix(full, lexicon)
        total = int(w.sum())
        if total == 0:
            return None
        freq = 100.0 * M.sum(axis=0) / total
        return _AuthorData(
            key=(corpus.author_id, corpus.medium),
            counts=M,
            words=w,
            full_values=_author_values(freq, W, b),
        )

    authors = [a for a in _pmap(prepare, ordered, threads) if a is not None]
    if len(authors) < 2:
        raise StatsError(
            f"{len(authors)} eligible author(s); at least 2 are required to "
            "build a population ladder"
        )

    ladder = PopulationStats({
        name: [a.full_values[j] for a in authors] for j, name in enumerate(names)
    })
    full_ranks = {
        a.key: np.array([ladder.percentile_rank(name, a.full_values[j])
                         for j, name in enumerate(names)])
        for a in authors
    }

    def profile(author: _AuthorData) -> dict[int, np.ndarray]:
        seed = derive_seed(plan.master_seed, author.key[0])
        out: dict[int, np.ndarray] = {}
        for size in plan.sizes:
            rows = []
            for idx in _subsample_indices(author.words, plan, size, seed):
                tokens = int(author.words[idx].sum())
                if tokens == 0:
                    continue  # skipped observation
                rows.append(100.0 * author.counts[idx].sum(axis=0) / tokens)
            if not rows:
                out[size] = np.zeros((0, len(names)))
                continue
            values = _author_values(np.vstack(rows), W, b)
            ranks = np.column_stack([
                ladder.percentile_ranks(name, values[:, j])
                for j, name in enumerate(names)
            ])
            out[size] = np.abs(ranks - full_ranks[author.key][None, :])
        return out

    per_author = _pmap(profile, authors, threads)

    curves = []
    for name in sorted(names):
        col = names.index(name)
        points = []
        for size in plan.sizes:
            obs = np.concatenate([res[size][:, col] for res in per_author])
            if obs.size == 0:
                raise StatsError(f"no usable observations at size {size}")
            mean = float(obs.mean())
            sd = float(obs.std(ddof=1)) if obs.size > 1 else 0.0
            points.append(VariabilityPoint(
                size=size,
                n_observations=int(obs.size),
                mean_variability=mean,
                sd_variability=sd,
                p95_empirical=float(np.percentile(obs, 95.0)),
                p95_parametric=mean + 1.645 * sd,
            ))
        curves.append(StabilityCurve(trait_name=name, mode=plan.mode, unit=plan.unit, points=points))
    return curves


def run_stability_modes(
    corpora: Sequence[AuthorCorpus],
    plan: SubsamplePlan,
    lexicon: Lexicon,
    model: TraitModel | None = None,
    threads: int = 1,
    modes: Sequence[str] = MODES,
) -> list[StabilityCurve]:
    """Run several modes of the same plan and merge the curves."""
    curves: list[StabilityCurve] = []
    for mode in modes:
        curves.extend(run_stability(corpora, replace(plan, mode=mode), lexicon, model, threads))
    curves.sort(key=lambda c: (c.trait_name, c.unit, c.mode))
    return curves


def minimum_sample_size(
    curve: StabilityCurve, threshold: float, statistic: str = "mean"
) -> int | None:
    """Smallest size whose chosen statistic is <= threshold, or None."""
    attr = {"mean": "mean_variability", "p95_empirical": "p95_empirical"}.get(statistic)
    if attr is None:
        raise ValueError("statistic must be 'mean' or 'p95_empirical'")
    if not curve.points:
        raise ValueError("curve has no points")
    for point in sorted(curve.points, key=lambda p: p.size):
        if getattr(point, attr) <= threshold:
            return point.size
    return None
