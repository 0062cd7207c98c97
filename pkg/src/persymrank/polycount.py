"""Brute-force counts of solutions to shifted-product systems.

count_solutions enumerates every tuple (y_1, ..., y_q) of binary
polynomials of degree under k. For one degree cap b, the companion
tuples (c_1, ..., c_q) with deg c_i <= b and y_1 c_1 + ... + y_q c_q = 0
form the kernel of a linear map whose matrix rows are the shifted words
y_i * T**d, so their number is a power of two read off one rank. A cap
carried with multiplicity w contributes that kernel count w times over.

This is a deliberately literal second route to the values the integral
machinery reaches through rank tallies of block families; the two must
agree wherever both are affordable.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .census import DEFAULT_BUDGET, BudgetError
from .formulas import DomainError

__all__ = ["count_solutions"]


def _check_args(k: int, z_bounds: Sequence[tuple[int, int]], q: int) -> None:
    if k < 1:
        raise DomainError(f"needs k >= 1, got {k}")
    if q < 1:
        raise DomainError(f"needs q >= 1, got {q}")
    if not z_bounds:
        raise DomainError("needs at least one degree cap")
    for bound, mult in z_bounds:
        if bound < 0:
            raise DomainError(f"degree caps must be nonnegative, got {bound}")
        if mult < 1:
            raise DomainError(f"cap multiplicities must be positive, got {mult}")


def _tuple_exponent(
    ys: Sequence[int], q: int, caps: Sequence[tuple[int, int]], top: int
) -> int:
    """log2 of the number of companion tuples for one y-tuple.

    Runs a single incremental elimination over the shifted words,
    snapshotting the rank each time a requested cap is passed.
    """
    pivots: dict[int, int] = {}
    rank = 0
    exponent = 0
    pos = 0
    for d in range(top + 1):
        for y in ys:
            w = y << d
            while w:
                lead = w.bit_length() - 1
                p = pivots.get(lead)
                if p is None:
                    pivots[lead] = w
                    rank += 1
                    break
                w ^= p
        while pos < len(caps) and caps[pos][0] == d:
            bound, mult = caps[pos]
            exponent += mult * (q * (bound + 1) - rank)
            pos += 1
    return exponent


def _count_range(
    start: int, stop: int, k: int, q: int, caps: Sequence[tuple[int, int]], top: int
) -> int:
    mask = (1 << k) - 1
    total = 0
    for packed in range(start, stop):
        ys = [(packed >> (i * k)) & mask for i in range(q)]
        total += 1 << _tuple_exponent(ys, q, caps, top)
    return total


def count_solutions(
    k: int,
    z_bounds: Sequence[tuple[int, int]],
    q: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> int:
    """Number of solution tuples of the shifted-product system.

    Args:
        k: the y variables carry k coefficient bits each.
        z_bounds: list of (degree cap, multiplicity) pairs; each pair
            adds multiplicity-many independent companion tuples under
            the same cap.
        q: how many y variables the products are summed over.
        budget: refuse enumerations of more than 2**budget y-tuples;
            the gate is on q*k, the work actually enumerated, not on
            the full solution search space. Oversized requests should
            go through the integral route instead, which scales with
            the coefficient space rather than with q.
        threads: split the y-tuple range into this many chunks summed
            in fixed order, so results never depend on scheduling.
    """
    _check_args(k, z_bounds, q)
    if q * k > budget:
        raise BudgetError(
            q * k,
            budget,
            "solution-count enumeration (the integral route avoids this sweep)",
        )
    caps = sorted(z_bounds)
    top = caps[-1][0]
    span = 1 << (q * k)
    if threads is None or threads <= 1 or span < 1 << 12:
        return _count_range(0, span, k, q, caps, top)
    chunk = -(-span // threads)
    starts = range(0, span, chunk)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda a: _count_range(a, min(a + chunk, span), k, q, caps, top),
            starts,
        )
        return sum(parts)
