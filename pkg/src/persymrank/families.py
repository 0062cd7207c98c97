"""Parameterized families of stacked structured matrices over GF(2).

A persymmetric block with r rows and k columns is defined by a coefficient
vector a_1 .. a_{k+r-1}; its entry in row i, column j (1-based) is
a_{i+j-1}. Row i is therefore a k-bit window into the packed coefficient
word, shifted by i-1. The shapes below describe stacks of such blocks,
optionally with unconstrained rows, and fix how the defining bits of a
whole stack pack into a single integer counter so the full parameter space
can be enumerated by increment.

Packing convention: segments are concatenated little-endian, so segment 0
occupies the least significant bits of the counter, and bit j of a segment
holds coefficient a_{j+1} of that block (for the unconstrained-row segment,
bit t*k + j holds entry j of extra row t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .gf2core import BitMatrix, pack_bits

__all__ = [
    "Double",
    "FamilyShape",
    "PersymPlusRows",
    "Single",
    "Triple",
    "block_rows",
    "double_matrix",
    "format_shape",
    "from_param_int",
    "matrix_from_segments",
    "max_rank",
    "nested_chain",
    "param_bits",
    "parse_shape",
    "persym_matrix",
    "persym_plus_rows",
    "segment_lengths",
    "segment_values",
    "total_rows",
    "triple_matrix",
]


def _require_nonneg(**dims: int) -> None:
    for name, value in dims.items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")


@dataclass(frozen=True)
class Single:
    """One persymmetric block with s rows and k columns."""

    s: int
    k: int

    def __post_init__(self) -> None:
        _require_nonneg(s=self.s, k=self.k)


@dataclass(frozen=True)
class PersymPlusRows:
    """A (1+m)-row persymmetric block stacked with n unconstrained k-bit rows."""

    n: int
    m: int
    k: int

    def __post_init__(self) -> None:
        _require_nonneg(n=self.n, m=self.m, k=self.k)


@dataclass(frozen=True)
class Double:
    """Two stacked persymmetric blocks with s and s+m rows, k columns each."""

    s: int
    m: int
    k: int

    def __post_init__(self) -> None:
        _require_nonneg(s=self.s, m=self.m, k=self.k)


@dataclass(frozen=True)
class Triple:
    """Three stacked persymmetric blocks with s, s+m and s+m+l rows."""

    s: int
    m: int
    l: int
    k: int

    def __post_init__(self) -> None:
        _require_nonneg(s=self.s, m=self.m, l=self.l, k=self.k)


FamilyShape = Union[Single, PersymPlusRows, Double, Triple]


def _block_param_len(rows: int, k: int) -> int:
    """Coefficient count of a persymmetric block; empty blocks take none."""
    if rows == 0 or k == 0:
        return 0
    return k + rows - 1


def block_rows(shape: FamilyShape) -> tuple[int, ...]:
    """Row count of each stacked block, top block first.

    Unconstrained rows count as one 1-row block each.
    """
    if isinstance(shape, Single):
        return (shape.s,)
    if isinstance(shape, PersymPlusRows):
        return (1 + shape.m,) + (1,) * shape.n
    if isinstance(shape, Double):
        return (shape.s, shape.s + shape.m)
    if isinstance(shape, Triple):
        return (shape.s, shape.s + shape.m, shape.s + shape.m + shape.l)
    raise TypeError(f"not a family shape: {shape!r}")


def segment_lengths(shape: FamilyShape) -> tuple[int, ...]:
    """Bit length of each parameter segment, in packing order."""
    k = shape.k
    if isinstance(shape, Single):
        return (_block_param_len(shape.s, k),)
    if isinstance(shape, PersymPlusRows):
        return (_block_param_len(1 + shape.m, k), shape.n * k)
    if isinstance(shape, Double):
        return (
            _block_param_len(shape.s, k),
            _block_param_len(shape.s + shape.m, k),
        )
    if isinstance(shape, Triple):
        return (
            _block_param_len(shape.s, k),
            _block_param_len(shape.s + shape.m, k),
            _block_param_len(shape.s + shape.m + shape.l, k),
        )
    raise TypeError(f"not a family shape: {shape!r}")


def param_bits(shape: FamilyShape) -> int:
    """Total number of defining bits of the shape's parameter space."""
    return sum(segment_lengths(shape))


def total_rows(shape: FamilyShape) -> int:
    return sum(block_rows(shape))


def max_rank(shape: FamilyShape) -> int:
    return min(total_rows(shape), shape.k)


def segment_values(shape: FamilyShape, x: int) -> tuple[int, ...]:
    """Split a parameter counter into per-segment integers."""
    bits = param_bits(shape)
    if x < 0 or x >> bits:
        raise ValueError(f"parameter counter {x} outside {bits} bits")
    out = []
    for length in segment_lengths(shape):
        out.append(x & ((1 << length) - 1))
        x >>= length
    return tuple(out)


def _persym_words(seg: int, rows: int, k: int) -> list[int]:
    mask = (1 << k) - 1
    return [(seg >> i) & mask for i in range(rows)]


def persym_matrix(s: int, k: int, alpha: Sequence[int]) -> BitMatrix:
    """Persymmetric s x k matrix from coefficients a_1 .. a_{k+s-1}.

    Args:
        s: row count.
        k: column count.
        alpha: 0/1 coefficients; entry (i, j) (1-based) is alpha[i+j-2].
    """
    _require_nonneg(s=s, k=k)
    expected = _block_param_len(s, k)
    if len(alpha) != expected:
        raise ValueError(f"need {expected} coefficients for a {s}x{k} block, got {len(alpha)}")
    seg = pack_bits(alpha)
    return BitMatrix(tuple(_persym_words(seg, s, k)), k)


def persym_plus_rows(
    n: int, m: int, k: int, alpha: Sequence[int], rowbits: Sequence[int]
) -> BitMatrix:
    """A (1+m) x k persymmetric block over n unconstrained rows.

    Args:
        alpha: k+m coefficients of the persymmetric block.
        rowbits: n*k bits; extra row t is rowbits[t*k : (t+1)*k].
    """
    _require_nonneg(n=n, m=m, k=k)
    if len(rowbits) != n * k:
        raise ValueError(f"need {n * k} extra-row bits, got {len(rowbits)}")
    top = persym_matrix(1 + m, k, alpha)
    raw = pack_bits(rowbits)
    mask = (1 << k) - 1
    extra = tuple((raw >> (t * k)) & mask for t in range(n))
    return BitMatrix(top.data + extra, k)


def double_matrix(
    s: int, m: int, k: int, alpha: Sequence[int], beta: Sequence[int]
) -> BitMatrix:
    """Stack of persymmetric blocks with s rows (alpha) and s+m rows (beta)."""
    top = persym_matrix(s, k, alpha)
    bottom = persym_matrix(s + m, k, beta)
    return BitMatrix(top.data + bottom.data, k)


def triple_matrix(
    s: int,
    m: int,
    l: int,
    k: int,
    alpha: Sequence[int],
    beta: Sequence[int],
    gamma: Sequence[int],
) -> BitMatrix:
    """Stack of three persymmetric blocks with s, s+m and s+m+l rows."""
    a = persym_matrix(s, k, alpha)
    b = persym_matrix(s + m, k, beta)
    c = persym_matrix(s + m + l, k, gamma)
    return BitMatrix(a.data + b.data + c.data, k)


def matrix_from_segments(shape: FamilyShape, segs: Sequence[int]) -> BitMatrix:
    """Build the shape's matrix from per-segment packed integers."""
    lengths = segment_lengths(shape)
    if len(segs) != len(lengths):
        raise ValueError(f"expected {len(lengths)} segments, got {len(segs)}")
    for seg, length in zip(segs, lengths):
        if seg < 0 or seg >> length:
            raise ValueError(f"segment value {seg} outside {length} bits")
    k = shape.k
    if isinstance(shape, PersymPlusRows):
        words = _persym_words(segs[0], 1 + shape.m, k)
        mask = (1 << k) - 1
        words += [(segs[1] >> (t * k)) & mask for t in range(shape.n)]
    else:
        words = []
        for seg, rows in zip(segs, block_rows(shape)):
            words += _persym_words(seg, rows, k)
    return BitMatrix(tuple(words), k)


def from_param_int(shape: FamilyShape, x: int) -> BitMatrix:
    """Build the shape's matrix from a single parameter counter."""
    return matrix_from_segments(shape, segment_values(shape, x))


def _double_of_blocks(a: int, b: int, k: int) -> Double:
    lo, hi = sorted((a, b))
    return Double(lo, hi - lo, k)


def _triple_of_blocks(a: int, b: int, c: int, k: int) -> Triple:
    x, y, z = sorted((a, b, c))
    return Triple(x, y - x, z - y, k)


def nested_chain(shape: FamilyShape) -> tuple[FamilyShape, ...]:
    """Sub-shapes whose joint ranks the family's rank statistics track.

    Each entry is obtained from the same parameter vector by truncating
    block rows (and, for Single, also the last column); the last entry is
    always the full shape. Where a truncation makes block row counts
    decrease down the stack, the returned shape is the equivalent sorted
    stack, which has the same rank statistics because row order never
    affects rank.
    """
    k = shape.k
    if isinstance(shape, Single):
        s = shape.s
        if s < 1 or k < 1:
            raise ValueError(f"no nested rank chain for degenerate shape {shape!r}")
        return (
            Single(s - 1, k - 1),
            Single(s, k - 1),
            Single(s - 1, k),
            Single(s, k),
        )
    if isinstance(shape, PersymPlusRows):
        return tuple(PersymPlusRows(j, shape.m, k) for j in range(shape.n + 1))
    if isinstance(shape, Double):
        s, m = shape.s, shape.m
        if s < 1:
            raise ValueError(f"no nested rank chain for degenerate shape {shape!r}")
        return (
            _double_of_blocks(s - 1, s + m - 1, k),
            _double_of_blocks(s, s + m - 1, k),
            Double(s, m, k),
        )
    if isinstance(shape, Triple):
        s, m, l = shape.s, shape.m, shape.l
        if s < 1:
            raise ValueError(f"no nested rank chain for degenerate shape {shape!r}")
        return (
            _triple_of_blocks(s - 1, s + m - 1, s + m + l - 1, k),
            _triple_of_blocks(s, s + m - 1, s + m + l - 1, k),
            _triple_of_blocks(s, s + m, s + m + l - 1, k),
            Triple(s, m, l, k),
        )
    raise TypeError(f"not a family shape: {shape!r}")


_KIND_FIELDS = {
    "single": ("s", "k"),
    "rows": ("n", "m", "k"),
    "double": ("s", "m", "k"),
    "triple": ("s", "m", "l", "k"),
}


def format_shape(shape: FamilyShape) -> str:
    """Canonical text form, e.g. ``double:s=3,m=2,k=4``."""
    if isinstance(shape, Single):
        return f"single:s={shape.s},k={shape.k}"
    if isinstance(shape, PersymPlusRows):
        return f"rows:n={shape.n},m={shape.m},k={shape.k}"
    if isinstance(shape, Double):
        return f"double:s={shape.s},m={shape.m},k={shape.k}"
    if isinstance(shape, Triple):
        return f"triple:s={shape.s},m={shape.m},l={shape.l},k={shape.k}"
    raise TypeError(f"not a family shape: {shape!r}")


def parse_shape(text: str) -> FamilyShape:
    """Parse the canonical text form produced by format_shape.

    Key=value pairs may appear in any order but must cover the kind's
    fields exactly.
    """
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    if not sep or kind not in _KIND_FIELDS:
        known = ", ".join(sorted(_KIND_FIELDS))
        raise ValueError(f"cannot parse shape {text!r}; expected one of: {known}")
    fields = _KIND_FIELDS[kind]
    seen: dict[str, int] = {}
    for part in rest.split(","):
        name, eq, value = part.partition("=")
        name = name.strip()
        if not eq or name not in fields or name in seen:
            raise ValueError(f"bad shape parameter {part!r} in {text!r}")
        try:
            seen[name] = int(value)
        except ValueError:
            raise ValueError(f"shape parameter {part!r} is not an integer") from None
    missing = [f for f in fields if f not in seen]
    if missing:
        raise ValueError(f"shape {text!r} is missing {', '.join(missing)}")
    if kind == "single":
        return Single(seen["s"], seen["k"])
    if kind == "rows":
        return PersymPlusRows(seen["n"], seen["m"], seen["k"])
    if kind == "double":
        return Double(seen["s"], seen["m"], seen["k"])
    return Triple(seen["s"], seen["m"], seen["l"], seen["k"])
