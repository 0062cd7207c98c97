"""Literal solution counter checked against the integral machinery."""

import random

import pytest

from persymrank.census import BudgetError
from persymrank.formulas import DomainError, r_q_single_closed
from persymrank.laurent import (
    block_with_rows,
    bounded_double,
    bounded_single,
    bounded_triple,
    integral_moment,
)
from persymrank.polycount import count_solutions


def test_first_power_single_cap_closed_form():
    for k in range(1, 7):
        for m in range(0, 5):
            got = count_solutions(k, [(m, 1)], 1)
            assert got == 2**k + 2 ** (m + 1) - 1


def test_single_cap_matches_closed_moments():
    for k in range(1, 5):
        for m in range(0, min(3, k)):
            for q in range(1, 4):
                got = count_solutions(k, [(m, 1)], q)
                assert got == r_q_single_closed(q, k, m).value


def test_known_counts():
    assert count_solutions(3, [(1, 1)], 2) == 160
    assert count_solutions(4, [(2, 1), (4, 1)], 3) == 35356672
    assert count_solutions(5, [(2, 3)], 3) == 228089856


def test_agrees_with_integral_route_across_shape_kinds():
    cases = [
        (bounded_single(2, 3), 3, [(1, 1)]),
        (bounded_single(3, 4), 2, [(2, 1)]),
        (bounded_double(1, 1, 3), 2, [(0, 1), (1, 1)]),
        (bounded_double(2, 0, 3), 2, [(1, 2)]),
        (bounded_triple(1, 0, 1, 2), 3, [(0, 2), (1, 1)]),
        (bounded_triple(1, 1, 0, 3), 2, [(0, 1), (1, 2)]),
        (block_with_rows(2, 1, 3), 2, [(0, 2), (1, 1)]),
        (block_with_rows(3, 0, 2), 3, [(0, 4)]),
    ]
    for shape, q, z_bounds in cases:
        assert count_solutions(shape.k, z_bounds, q) == integral_moment(shape, q)


def test_multiplicity_flattening_and_cap_order_do_not_matter():
    rng = random.Random(550124)
    for _ in range(10):
        k = rng.randint(1, 3)
        q = rng.randint(1, 2)
        b1 = rng.randint(0, 2)
        b2 = rng.randint(0, 2)
        merged = count_solutions(k, [(b1, 1), (b2, 1), (b1, 1)], q)
        grouped = count_solutions(k, [(b2, 1), (b1, 2)], q)
        assert merged == grouped


def test_threaded_reduction_is_deterministic():
    base = count_solutions(3, [(2, 1), (0, 1)], 3)
    assert count_solutions(3, [(2, 1), (0, 1)], 3, threads=4) == base
    assert count_solutions(3, [(2, 1), (0, 1)], 3, threads=1) == base


def test_budget_gates_on_enumerated_tuples():
    with pytest.raises(BudgetError) as info:
        count_solutions(8, [(1, 1)], 6, budget=34)
    assert info.value.needed_log2 == 48
    assert "integral" in str(info.value)
    # The same caps pass once the budget covers the y-tuple space.
    assert count_solutions(8, [(1, 1)], 2, budget=16) > 0


def test_argument_validation():
    with pytest.raises(DomainError):
        count_solutions(0, [(1, 1)], 1)
    with pytest.raises(DomainError):
        count_solutions(2, [], 1)
    with pytest.raises(DomainError):
        count_solutions(2, [(-1, 1)], 1)
    with pytest.raises(DomainError):
        count_solutions(2, [(1, 0)], 1)
    with pytest.raises(DomainError):
        count_solutions(2, [(1, 1)], 0)
