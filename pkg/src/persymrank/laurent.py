"""Signed character sums over truncated inverse-power series.

A point stores finitely many coefficients of a series in inverse powers
of a formal variable. Pairing a point against the product of two binary
polynomials reads off one residue coefficient, and attaching a sign to
that bit gives a character value. The sums evaluated here have the form

    S(points) = sum over y and c_1 .. c_r of
                prod_f sign(residue(point_f, y * c_f))

where y and each companion variable c_f range over binary polynomials
under degree caps. Every covered sum can be computed two independent
ways: literally (exp_sum_direct) and through the rank of a stacked
coefficient matrix (exp_sum_rank). Averaging integer powers of S over
all coefficient choices gives exact moment values (integral_moment),
which in turn count solutions of systems of polynomial equations.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from . import census, families, formulas
from .census import DEFAULT_BUDGET, BudgetError
from .families import Double, PersymPlusRows, Single, Triple
from .formulas import DomainError, NotCoveredError
from .gf2core import rank_of_words

__all__ = [
    "Factor",
    "LaurentPoint",
    "SumShape",
    "bits_of_point",
    "block_with_rows",
    "block_with_unit",
    "bounded_double",
    "bounded_single",
    "bounded_triple",
    "character",
    "coset_bits",
    "exact_single",
    "exp_sum_direct",
    "exp_sum_rank",
    "family_for",
    "integral_moment",
    "point_from_bits",
    "required_depth",
    "residue_bilinear",
]


class LaurentPoint(NamedTuple):
    """A truncated tail of a series in inverse powers.

    Bit i of coeffs is the coefficient of the (i+1)-th inverse power, so
    bit 0 is the residue coefficient itself. depth says how many
    coefficients are meaningful; two points agreeing on their first
    depth coefficients describe the same truncation.
    """

    coeffs: int
    depth: int


class Factor(NamedTuple):
    """One companion variable of a character sum.

    The variable runs over binary polynomials of degree at most bound,
    or of degree exactly bound when exact is set. The zero polynomial
    has degree minus infinity: it falls under every <= cap and under no
    == cap.
    """

    bound: int
    exact: bool = False


class SumShape(NamedTuple):
    """Variable ranges of a character sum.

    The shared variable y runs over polynomials of degree at most k - 1
    (exactly k - 1 when y_exact is set) and pairs with every factor's
    companion variable.
    """

    k: int
    y_exact: bool
    factors: tuple[Factor, ...]


def _check_point(point: LaurentPoint) -> None:
    if point.depth < 0:
        raise DomainError(f"point depth must be nonnegative, got {point.depth}")
    if point.coeffs < 0 or point.coeffs >> point.depth:
        raise DomainError(
            f"point coefficients use more than the declared {point.depth} bits"
        )


def _check_shape(shape: SumShape) -> None:
    if shape.k < 1:
        raise DomainError(f"shape needs k >= 1, got {shape.k}")
    if not shape.factors:
        raise DomainError("shape needs at least one factor")
    for f in shape.factors:
        if f.bound < 0:
            raise DomainError(f"factor bound must be nonnegative, got {f.bound}")


def point_from_bits(text: str) -> LaurentPoint:
    """Parse a point from a coefficient string like "10110".

    Character j of the string (0-based) is the coefficient of the
    (j+1)-th inverse power; the string length sets the depth.
    """
    coeffs = 0
    for j, ch in enumerate(text):
        if ch == "1":
            coeffs |= 1 << j
        elif ch != "0":
            raise DomainError(f"coefficient string must be 0/1, got {text!r}")
    return LaurentPoint(coeffs, len(text))


def bits_of_point(point: LaurentPoint) -> str:
    """Inverse of point_from_bits."""
    _check_point(point)
    return "".join(str((point.coeffs >> j) & 1) for j in range(point.depth))


def bounded_single(s: int, k: int) -> SumShape:
    """One companion capped at degree s - 1, everything bounded."""
    if s < 1:
        raise DomainError(f"needs s >= 1, got {s}")
    return SumShape(k, False, (Factor(s - 1),))


def exact_single(s: int, k: int) -> SumShape:
    """One companion pinned to degree s - 1 exactly, y pinned to k - 1."""
    if s < 1:
        raise DomainError(f"needs s >= 1, got {s}")
    return SumShape(k, True, (Factor(s - 1, True),))


def block_with_unit(m: int, k: int) -> SumShape:
    """A companion capped at degree m plus one pinned degree-zero factor.

    The pinned factor's only value is the constant 1, so it contributes
    a bare sign to each term instead of an inner sum.
    """
    if m < 0:
        raise DomainError(f"needs m >= 0, got {m}")
    return SumShape(k, False, (Factor(m), Factor(0, True)))


def block_with_rows(n: int, m: int, k: int) -> SumShape:
    """A companion capped at degree m plus n companions capped at zero."""
    if n < 0 or m < 0:
        raise DomainError(f"needs n, m >= 0, got n={n} m={m}")
    return SumShape(k, False, (Factor(m),) + tuple(Factor(0) for _ in range(n)))


def bounded_double(s: int, m: int, k: int) -> SumShape:
    """Two bounded companions with degree caps s - 1 and s + m - 1."""
    if s < 1 or m < 0:
        raise DomainError(f"needs s >= 1 and m >= 0, got s={s} m={m}")
    return SumShape(k, False, (Factor(s - 1), Factor(s + m - 1)))


def bounded_triple(s: int, m: int, l: int, k: int) -> SumShape:
    """Three bounded companions with caps s - 1, s + m - 1, s + m + l - 1."""
    if s < 1 or m < 0 or l < 0:
        raise DomainError(f"needs s >= 1 and m, l >= 0, got s={s} m={m} l={l}")
    return SumShape(
        k, False, (Factor(s - 1), Factor(s + m - 1), Factor(s + m + l - 1))
    )


def required_depth(shape: SumShape, which: int) -> int:
    """Coefficients a point must carry to serve the given factor.

    The product of y (degree < k) with a companion of degree at most b
    touches the first k + b inverse-power coefficients.
    """
    _check_shape(shape)
    if not 0 <= which < len(shape.factors):
        raise DomainError(f"shape has {len(shape.factors)} factors, no index {which}")
    return shape.k + shape.factors[which].bound


def coset_bits(shape: SumShape) -> int:
    """Total meaningful coefficient bits across all of a shape's points.

    Character sums are constant when every point moves within its class
    of the first required_depth coefficients, so averaging over these
    bits integrates over the whole coefficient space.
    """
    _check_shape(shape)
    return sum(shape.k + f.bound for f in shape.factors)


def character(residue_bit: int) -> int:
    """Sign attached to one residue bit: +1 for 0 and -1 for 1."""
    if residue_bit not in (0, 1):
        raise DomainError(f"residue bit must be 0 or 1, got {residue_bit}")
    return 1 - 2 * residue_bit


def _clmul(a: int, b: int) -> int:
    """Product of two binary polynomials (carry-less multiply)."""
    acc = 0
    shift = 0
    while b:
        if b & 1:
            acc ^= a << shift
        b >>= 1
        shift += 1
    return acc


def residue_bilinear(point: LaurentPoint, y: int, z: int) -> int:
    """Residue bit of the point's tail times the polynomial y * z.

    Coefficient j of the product y * z lands on the point's (j+1)-th
    inverse-power coefficient, so the bit returned is the parity of the
    overlap between the product and the point's coefficient word. The
    point must be deep enough to cover the product's degree.
    """
    _check_point(point)
    if y < 0 or z < 0:
        raise DomainError("polynomial words must be nonnegative")
    prod = _clmul(y, z)
    if prod >> point.depth:
        raise DomainError(
            f"product needs {prod.bit_length()} coefficients, "
            f"point has depth {point.depth}"
        )
    return (prod & point.coeffs).bit_count() & 1


def _check_points(shape: SumShape, points: Sequence[LaurentPoint]) -> None:
    if len(points) != len(shape.factors):
        raise DomainError(
            f"shape has {len(shape.factors)} factors, got {len(points)} points"
        )
    for which, (factor, point) in enumerate(zip(shape.factors, points)):
        _check_point(point)
        need = shape.k + factor.bound
        if point.depth < need:
            raise DomainError(
                f"factor {which} needs point depth {need}, got {point.depth}"
            )


def _var_range(bound: int, exact: bool) -> range:
    """Packed-word range of the polynomials under one degree cap."""
    lo = (1 << bound) if exact else 0
    return range(lo, 1 << (bound + 1))


def exp_sum_direct(
    shape: SumShape, points: Sequence[LaurentPoint], *, budget: int = DEFAULT_BUDGET
) -> int:
    """Character sum by literal nested enumeration.

    For each y the inner factor sums are independent and multiply. Work
    grows like 2**k times the total companion space, so a budget guard
    refuses shapes that would enumerate more than 2**budget terms.
    """
    _check_shape(shape)
    _check_points(shape, points)
    work = sum(1 << (f.bound + 1) for f in shape.factors) << shape.k
    if work > 1 << budget:
        raise BudgetError((work - 1).bit_length(), budget, "direct character sum")
    total = 0
    for y in _var_range(shape.k - 1, shape.y_exact):
        term = 1
        for factor, point in zip(shape.factors, points):
            inner = 0
            for c in _var_range(factor.bound, factor.exact):
                inner += character(residue_bilinear(point, y, c))
            term *= inner
            if term == 0:
                break
        total += term
    return total


def _factor_words(point: LaurentPoint, bound: int, k: int) -> list[int]:
    """Rows of the coefficient block a factor pairs y against.

    Row d, column c holds the point's (d+c+1)-th coefficient, which is
    the persymmetric layout shared with the block families.
    """
    mask = (1 << k) - 1
    seg = point.coeffs & ((1 << (k + bound)) - 1)
    return [(seg >> d) & mask for d in range(bound + 1)]


_ALL_BOUNDED = "all caps <="
_TOP_DEGREE = "single factor, y and factor pinned to top degree"
_GATED_UNIT = "bounded factor plus pinned degree-zero factor"


def _classify(shape: SumShape) -> str | None:
    if not shape.y_exact and all(not f.exact for f in shape.factors):
        return _ALL_BOUNDED
    if shape.y_exact and len(shape.factors) == 1 and shape.factors[0].exact:
        return _TOP_DEGREE
    if (
        not shape.y_exact
        and len(shape.factors) == 2
        and not shape.factors[0].exact
        and shape.factors[1] == Factor(0, True)
    ):
        return _GATED_UNIT
    return None


def family_for(shape: SumShape) -> families.FamilyShape:
    """Block family whose parameter space the shape's points live in.

    Each bounded factor with cap b contributes a persymmetric block of
    b + 1 rows over the shared k columns. Only fully bounded shapes map
    to a family; pinned factors restrict the variable ranges, not the
    coefficient space, and have no family counterpart.
    """
    _check_shape(shape)
    if shape.y_exact or any(f.exact for f in shape.factors):
        raise NotCoveredError("only fully bounded shapes map to a block family")
    heights = sorted(f.bound + 1 for f in shape.factors)
    k = shape.k
    if len(heights) == 1:
        return Single(heights[0], k)
    if len(heights) == 2:
        return Double(heights[0], heights[1] - heights[0], k)
    if len(heights) == 3:
        return Triple(
            heights[0], heights[1] - heights[0], heights[2] - heights[1], k
        )
    if all(h == 1 for h in heights[:-1]):
        return PersymPlusRows(len(heights) - 1, heights[-1] - 1, k)
    raise NotCoveredError(
        f"no block family stacks {len(heights)} blocks of heights {heights}"
    )


def exp_sum_rank(shape: SumShape, points: Sequence[LaurentPoint]) -> int:
    """Character sum evaluated through coefficient-matrix ranks.

    Covered shapes and their closed values:

    * every cap a <= bound: stacking one block per factor gives
      2**(k + rows - rank), where rows counts all companion coefficients;
    * y and a lone factor both pinned to top degree: the value is a
      signed power of two or zero, decided by how the block's rank moves
      when its last row and last column are restored;
    * a bounded factor plus one pinned degree-zero factor: the value is
      2**(k + rows - rank) of the bounded block when appending the
      pinned factor's row keeps that rank, and zero otherwise.

    Shapes outside these cases raise NotCoveredError.
    """
    _check_shape(shape)
    _check_points(shape, points)
    kind = _classify(shape)
    k = shape.k
    if kind == _ALL_BOUNDED:
        words: list[int] = []
        rows = 0
        for factor, point in zip(shape.factors, points):
            words += _factor_words(point, factor.bound, k)
            rows += factor.bound + 1
        return 1 << (k + rows - rank_of_words(words))
    if kind == _TOP_DEGREE:
        s = shape.factors[0].bound + 1
        words = _factor_words(points[0], s - 1, k)
        narrow = (1 << (k - 1)) - 1
        j_trim_both = rank_of_words(w & narrow for w in words[: s - 1])
        j_trim_col = rank_of_words(w & narrow for w in words)
        j_trim_row = rank_of_words(words[: s - 1])
        j_full = rank_of_words(words)
        if not (j_trim_both == j_trim_col == j_trim_row):
            return 0
        j = j_trim_both
        if j_full == j:
            return 1 << (s + k - j - 2)
        if j_full == j + 1:
            return -(1 << (s + k - j - 2))
        return 0
    if kind == _GATED_UNIT:
        m = shape.factors[0].bound
        block = _factor_words(points[0], m, k)
        pinned_row = points[1].coeffs & ((1 << k) - 1)
        r_block = rank_of_words(block)
        r_all = rank_of_words(block + [pinned_row])
        if r_all != r_block:
            return 0
        return 1 << (k + m + 1 - r_block)
    raise NotCoveredError(f"no rank rule for shape {shape}")


def _exact_shift(value: int, bits: int, what: str) -> int:
    if value % (1 << bits):
        raise ArithmeticError(f"{what} is not divisible by 2**{bits}")
    return value >> bits


def integral_moment(
    shape: SumShape,
    q: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> int:
    """Exact average of the character sum's q-th power over all points.

    The average runs over the 2**coset_bits(shape) coefficient classes.
    Because exp_sum_rank depends on a point class only through matrix
    ranks, the integral collapses to a weighted sum over exact rank
    tallies; the final normalization is checked to divide exactly.
    Covered shapes match exp_sum_rank; the result can be negative for
    odd q on top-degree-pinned shapes.
    """
    _check_shape(shape)
    if q < 1:
        raise DomainError(f"needs q >= 1, got {q}")
    kind = _classify(shape)
    k = shape.k
    if kind == _ALL_BOUNDED:
        fam = family_for(shape)
        dist = census.rank_census(fam, budget=budget, threads=threads)
        rows = families.total_rows(fam)
        return formulas.moment(dist, q, k + rows, families.param_bits(fam)).value
    if kind == _TOP_DEGREE:
        s = shape.factors[0].bound + 1
        table = census.joint_rank_census(Single(s, k), budget=budget, threads=threads)
        flip = -1 if q & 1 else 1
        total = 0
        for tup, cnt in table.counts.items():
            if not (tup[0] == tup[1] == tup[2]):
                continue
            j = tup[0]
            if tup[3] == j:
                total += cnt << (q * (s + k - j - 2))
            elif tup[3] == j + 1:
                total += flip * (cnt << (q * (s + k - j - 2)))
        return _exact_shift(total, k + s - 1, f"moment q={q}")
    if kind == _GATED_UNIT:
        m = shape.factors[0].bound
        dist = census.rank_census(Single(1 + m, k), budget=budget, threads=threads)
        total = 0
        for i in sorted(dist.counts):
            cnt = dist.counts[i]
            if cnt:
                # A gate row that keeps rank i lies in a fixed span of
                # size 2**i, and rows correspond one to one with point
                # classes of the pinned factor.
                total += (cnt << i) << (q * (k + m + 1 - i))
        return _exact_shift(total, 2 * k + m, f"moment q={q}")
    raise NotCoveredError(f"no integration rule for shape {shape}")
