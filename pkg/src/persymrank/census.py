"""Exhaustive rank statistics for matrix families over GF(2).

The sweep enumerates every parameter vector of a family shape and tallies
ranks (or joint ranks along the shape's nested chain) exactly. The hot path
runs on numpy: a batch of parameter counters becomes a vector of uint64
lanes, and a branchless elimination updates per-lane row bases one column
at a time, so the cost is a few vector ops per matrix row and column
instead of a Python-level loop per matrix. Batches are disjoint counter
ranges, so the sweep shards trivially across threads and the merged tallies
do not depend on scheduling.

All public results use arbitrary-precision Python integers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import families
from .families import FamilyShape, PersymPlusRows, Single

__all__ = [
    "BudgetError",
    "DEFAULT_BUDGET",
    "JointRankTable",
    "RankDistribution",
    "diagonal_sigma",
    "invertible_fraction",
    "joint_rank_census",
    "rank_census",
]

DEFAULT_BUDGET = 34
_BATCH_BITS = 20
_ENGINE_MAX_BITS = 62

_ONE = np.uint64(1)
_ALLONES = np.uint64(0xFFFFFFFFFFFFFFFF)


class BudgetError(RuntimeError):
    """Raised when a sweep would exceed the allowed work budget.

    Attributes:
        needed_log2: log2 of the number of rank computations required.
        budget_log2: the configured limit.
    """

    def __init__(self, needed_log2: int, budget_log2: int, what: str):
        self.needed_log2 = needed_log2
        self.budget_log2 = budget_log2
        super().__init__(
            f"{what} needs 2^{needed_log2} rank computations; "
            f"budget allows 2^{budget_log2} (raise the budget to proceed)"
        )


@dataclass(frozen=True)
class RankDistribution:
    """Exact rank tally of a family: counts[i] = number of parameter
    vectors whose matrix has rank i."""

    shape: FamilyShape
    counts: Mapping[int, int]

    @property
    def param_bits(self) -> int:
        return families.param_bits(self.shape)

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        return {
            "shape": families.format_shape(self.shape),
            "param_bits": self.param_bits,
            "counts": {str(i): str(self.counts[i]) for i in sorted(self.counts)},
        }


@dataclass(frozen=True)
class JointRankTable:
    """Joint tally of ranks along a shape's nested chain.

    counts maps a rank tuple (one entry per chain stage, full shape last)
    to the number of parameter vectors realizing it; zero tuples are
    omitted.
    """

    shape: FamilyShape
    chain: tuple[FamilyShape, ...]
    counts: Mapping[tuple[int, ...], int]

    @property
    def param_bits(self) -> int:
        return families.param_bits(self.shape)

    def total(self) -> int:
        return sum(self.counts.values())

    def marginal(self) -> dict[int, int]:
        """Distribution of the final (full-shape) rank."""
        out: dict[int, int] = {}
        for tup, c in self.counts.items():
            out[tup[-1]] = out.get(tup[-1], 0) + c
        return out

    def to_json_dict(self) -> dict:
        keys = sorted(self.counts)
        return {
            "shape": families.format_shape(self.shape),
            "param_bits": self.param_bits,
            "chain": [families.format_shape(s) for s in self.chain],
            "counts": {
                ",".join(map(str, tup)): str(self.counts[tup]) for tup in keys
            },
        }


@dataclass(frozen=True)
class _Pass:
    """One elimination pass: a column width and row stages; the per-lane
    rank is snapshotted after each stage."""

    cols: int
    stages: tuple[tuple[tuple[int, int], ...], ...]  # stage -> (segment, shift)


@dataclass(frozen=True)
class _Plan:
    passes: tuple[_Pass, ...]
    radix: int
    nstages: int


def _persym_refs(segment: int, rows: int) -> list[tuple[int, int]]:
    return [(segment, i) for i in range(rows)]


def _all_row_refs(shape: FamilyShape) -> list[tuple[int, int]]:
    if isinstance(shape, PersymPlusRows):
        refs = _persym_refs(0, 1 + shape.m)
        refs += [(1, t * shape.k) for t in range(shape.n)]
        return refs
    refs = []
    for seg, rows in enumerate(families.block_rows(shape)):
        refs += _persym_refs(seg, rows)
    return refs


def _rank_plan(shape: FamilyShape) -> _Plan:
    stage = tuple(_all_row_refs(shape))
    return _Plan(
        passes=(_Pass(shape.k, (stage,)),),
        radix=shape.k + 1,
        nstages=1,
    )


def _joint_plan(shape: FamilyShape) -> _Plan:
    chain = families.nested_chain(shape)  # validates the shape
    k = shape.k
    if isinstance(shape, Single):
        s = shape.s
        stages = (tuple(_persym_refs(0, s - 1)), ((0, s - 1),))
        passes = (_Pass(k - 1, stages), _Pass(k, stages))
    elif isinstance(shape, PersymPlusRows):
        stages = [tuple(_persym_refs(0, 1 + shape.m))]
        stages += [((1, t * k),) for t in range(shape.n)]
        passes = (_Pass(k, tuple(stages)),)
    else:
        rows = families.block_rows(shape)
        base: list[tuple[int, int]] = []
        for seg, r in enumerate(rows):
            base += _persym_refs(seg, r - 1)
        stages = [tuple(base)]
        stages += [((seg, r - 1),) for seg, r in enumerate(rows)]
        passes = (_Pass(k, tuple(stages)),)
    return _Plan(passes=passes, radix=k + 1, nstages=len(chain))


def _batch_tally(
    plan: _Plan,
    offsets: tuple[int, ...],
    lengths: tuple[int, ...],
    lo: int,
    hi: int,
) -> np.ndarray:
    """Tally stage-rank keys for parameter counters in [lo, hi)."""
    x = np.arange(lo, hi, dtype=np.uint64)
    segs = [
        (x >> np.uint64(off)) & np.uint64((1 << ln) - 1)
        for off, ln in zip(offsets, lengths)
    ]
    radix = np.uint64(plan.radix)
    key = np.zeros(x.shape, dtype=np.uint64)
    for p in plan.passes:
        cmask = np.uint64((1 << p.cols) - 1)
        basis = [np.zeros(x.shape, dtype=np.uint64) for _ in range(p.cols)]
        rnk = np.zeros(x.shape, dtype=np.uint64)
        for stage in p.stages:
            for seg_idx, shift in stage:
                w = (segs[seg_idx] >> np.uint64(shift)) & cmask
                # Branchless insertion elimination, highest column first.
                # At step c every lane of w has no bits above c; a lane
                # either reduces against the stored basis row, or becomes
                # the new basis row for column c and is cleared.
                for c in range(p.cols - 1, -1, -1):
                    b = basis[c]
                    cc = np.uint64(c)
                    bit = (w >> cc) & _ONE
                    bex = (b >> cc) & _ONE
                    w = w ^ (b & ((bit & bex) * _ALLONES))
                    ins = bit & (_ONE - bex)
                    insmask = ins * _ALLONES
                    basis[c] = b | (w & insmask)
                    rnk = rnk + ins
                    w = w & ~insmask
            key = key * radix + rnk
    return np.bincount(key.astype(np.int64), minlength=plan.radix**plan.nstages)


def _sweep(
    shape: FamilyShape, plan: _Plan, budget: int, threads: int | None, what: str
) -> list[int]:
    bits = families.param_bits(shape)
    if bits > min(budget, _ENGINE_MAX_BITS):
        raise BudgetError(bits, min(budget, _ENGINE_MAX_BITS), what)
    lengths = families.segment_lengths(shape)
    offsets = []
    off = 0
    for ln in lengths:
        offsets.append(off)
        off += ln
    total = 1 << bits
    step = 1 << min(bits, _BATCH_BITS)
    ranges = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(ranges) == 1:
        parts = [
            _batch_tally(plan, tuple(offsets), lengths, lo, hi) for lo, hi in ranges
        ]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda r: _batch_tally(plan, tuple(offsets), lengths, *r), ranges
                )
            )
    acc = parts[0].astype(object)
    for part in parts[1:]:
        acc = acc + part
    out = [int(v) for v in acc]
    if sum(out) != total:
        raise RuntimeError(f"census tally lost mass for {shape!r}")
    return out


_census_cache: dict[FamilyShape, RankDistribution] = {}
_joint_cache: dict[FamilyShape, JointRankTable] = {}


def rank_census(
    shape: FamilyShape,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> RankDistribution:
    """Exact rank distribution over the shape's full parameter space.

    Args:
        shape: family to sweep.
        budget: refuse sweeps needing more than 2**budget rank computations.
        threads: worker threads (default: cpu count).

    Raises:
        BudgetError: when 2**param_bits exceeds the budget.
    """
    cached = _census_cache.get(shape)
    if cached is not None:
        return cached
    tallies = _sweep(shape, _rank_plan(shape), budget, threads, f"census of {shape}")
    counts = {i: tallies[i] for i in range(families.max_rank(shape) + 1)}
    if sum(counts.values()) != 1 << families.param_bits(shape):
        raise RuntimeError(f"rank tally outside 0..max_rank for {shape!r}")
    dist = RankDistribution(shape, counts)
    _census_cache[shape] = dist
    return dist


def joint_rank_census(
    shape: FamilyShape,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> JointRankTable:
    """Joint distribution of ranks along the shape's nested chain."""
    cached = _joint_cache.get(shape)
    if cached is not None:
        return cached
    plan = _joint_plan(shape)
    chain = families.nested_chain(shape)
    tallies = _sweep(
        shape, plan, budget, threads, f"joint census of {shape}"
    )
    counts: dict[tuple[int, ...], int] = {}
    for key, c in enumerate(tallies):
        if c == 0:
            continue
        digits = []
        v = key
        for _ in range(plan.nstages):
            digits.append(v % plan.radix)
            v //= plan.radix
        counts[tuple(reversed(digits))] = c
    table = JointRankTable(shape, chain, counts)
    _joint_cache[shape] = table
    return table


def diagonal_sigma(
    shape: FamilyShape,
    i: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> int:
    """Count of parameter vectors whose whole nested chain has rank i."""
    table = joint_rank_census(shape, budget=budget, threads=threads)
    return table.counts.get((i,) * len(table.chain), 0)


def invertible_fraction(
    shape: FamilyShape,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> Fraction:
    """Fraction of parameter vectors giving a full-rank square matrix."""
    rows = families.total_rows(shape)
    if rows != shape.k:
        raise ValueError(
            f"invertible_fraction needs a square stack, got {rows} rows x {shape.k} cols"
        )
    dist = rank_census(shape, budget=budget, threads=threads)
    return Fraction(dist.counts.get(shape.k, 0), 1 << dist.param_bits)
