"""Bit-packed exact linear algebra over GF(2).

A matrix row is a Python integer read little-endian: bit j of the row word
is the entry in column j. Padding bits at positions >= cols must be zero,
which keeps equality and rank independent of storage width. All operations
are pure and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "BitMatrix",
    "bilinear",
    "from_lists",
    "leading_rows",
    "pack_bits",
    "rank",
    "rank_of_words",
    "unpack_bits",
    "vstack",
]


def pack_bits(bits: Iterable[int]) -> int:
    """Pack an iterable of 0/1 values into an integer, index 0 in the low bit."""
    word = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit values must be 0 or 1, got {b!r}")
        word |= b << j
    return word


def unpack_bits(word: int, n: int) -> tuple[int, ...]:
    """Expand the low n bits of word into a tuple of 0/1 values."""
    return tuple((word >> j) & 1 for j in range(n))


@dataclass(frozen=True)
class BitMatrix:
    """Immutable dense GF(2) matrix holding one packed integer per row.

    Attributes:
        data: row words, top row first.
        cols: number of columns; every row word must fit in this many bits.
    """

    data: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        if self.cols < 0:
            raise ValueError("cols must be nonnegative")
        limit = 1 << self.cols
        for idx, word in enumerate(self.data):
            if not 0 <= word < limit:
                raise ValueError(f"row {idx} does not fit in {self.cols} columns")

    @property
    def rows(self) -> int:
        return len(self.data)

    def entry(self, i: int, j: int) -> int:
        """Entry in row i, column j (0-based)."""
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return (self.data[i] >> j) & 1

    def row_bits(self, i: int) -> tuple[int, ...]:
        """Row i as a tuple of 0/1 values."""
        return unpack_bits(self.data[i], self.cols)


def from_lists(entries: Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
    """Build a BitMatrix from nested sequences of 0/1 entries.

    Args:
        entries: rows as bit sequences, all of equal length.
        cols: column count; required when entries is empty, otherwise it
            must match the row length.
    """
    if cols is None:
        if not entries:
            raise ValueError("cols is required for a matrix with no rows")
        cols = len(entries[0])
    data = []
    for row in entries:
        if len(row) != cols:
            raise ValueError(f"expected {cols} entries per row, got {len(row)}")
        data.append(pack_bits(row))
    return BitMatrix(tuple(data), cols)


def vstack(parts: Sequence[BitMatrix]) -> BitMatrix:
    """Stack matrices vertically, first part on top.

    Args:
        parts: nonempty sequence of matrices sharing a column count.
    """
    if not parts:
        raise ValueError("vstack needs at least one part")
    cols = parts[0].cols
    for p in parts[1:]:
        if p.cols != cols:
            raise ValueError(f"column count mismatch: {p.cols} != {cols}")
    data: list[int] = []
    for p in parts:
        data.extend(p.data)
    return BitMatrix(tuple(data), cols)


def leading_rows(m: BitMatrix, r: int) -> BitMatrix:
    """First r rows of m, same column count."""
    if not 0 <= r <= m.rows:
        raise ValueError(f"cannot take {r} leading rows of a {m.rows}-row matrix")
    return BitMatrix(m.data[:r], m.cols)


def rank_of_words(words: Iterable[int]) -> int:
    """Rank over GF(2) of packed row words, by incremental elimination."""
    pivots: dict[int, int] = {}
    r = 0
    for word in words:
        w = word
        while w:
            lead = w.bit_length() - 1
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = w
                r += 1
                break
            w ^= p
    return r


def rank(m: BitMatrix) -> int:
    """Row rank of m over GF(2). Empty matrices have rank 0."""
    return rank_of_words(m.data)


def bilinear(m: BitMatrix, z: Sequence[int], y: Sequence[int]) -> int:
    """Evaluate the bilinear form z^T M y over GF(2).

    Args:
        m: the matrix.
        z: 0/1 vector indexed by rows.
        y: 0/1 vector indexed by columns.

    Returns:
        The single bit sum of z_i * M[i][j] * y_j over all i, j.
    """
    if len(z) != m.rows:
        raise ValueError(f"z has length {len(z)}, expected {m.rows}")
    if len(y) != m.cols:
        raise ValueError(f"y has length {len(y)}, expected {m.cols}")
    zw = pack_bits(z)
    yw = pack_bits(y)
    acc = 0
    for i, word in enumerate(m.data):
        if (zw >> i) & 1:
            acc ^= word
    return (acc & yw).bit_count() & 1
