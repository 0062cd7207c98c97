"""Closed-form rank tables checked against the exhaustive census engine."""

import random

import pytest

from persymrank.census import diagonal_sigma, joint_rank_census, rank_census
from persymrank.families import Double, PersymPlusRows, Single, Triple
from persymrank.formulas import (
    DomainError,
    NotCoveredError,
    REDUCTION_KINDS,
    _one_extra_row_table,
    a_coeff,
    delta_double,
    gamma_double,
    gamma_double_recur,
    gamma_persym,
    gamma_persym_rows,
    gamma_triple,
    gamma_triple_recur,
    joint_persym_formula,
    moment,
    r_q_single_closed,
    reduction_identities,
)


def subspace_count(n, r):
    """Number of r-dimensional subspaces of an n-dimensional binary space,
    computed directly from the product formula."""
    if r < 0 or r > n:
        return 0
    num = den = 1
    for t in range(r):
        num *= (1 << n) - (1 << t)
        den *= (1 << r) - (1 << t)
    assert num % den == 0
    return num // den


# ---------------------------------------------------------------------------
# single window block


def test_single_table_matches_census():
    for s in range(0, 6):
        for k in range(0, 6):
            dist = rank_census(Single(s, k))
            for i in range(min(s, k) + 1):
                assert gamma_persym(s, k, i).value == dist.counts[i], (s, k, i)


def test_single_table_transpose_symmetry():
    rng = random.Random(20260816)
    for _ in range(200):
        s = rng.randrange(0, 12)
        k = rng.randrange(0, 12)
        i = rng.randrange(0, 13)
        assert gamma_persym(s, k, i).value == gamma_persym(k, s, i).value


def test_single_table_mass():
    for s in range(1, 9):
        for k in range(1, 9):
            total = sum(gamma_persym(s, k, i).value for i in range(min(s, k) + 1))
            assert total == 1 << (k + s - 1), (s, k)


def test_single_table_out_of_range_is_zero():
    assert gamma_persym(2, 3, 4).value == 0
    assert gamma_persym(0, 5, 1).value == 0


# ---------------------------------------------------------------------------
# joint rank table over the four-corner truncation chain


def test_joint_table_matches_census_off_the_known_gap():
    for s in range(1, 5):
        for k in range(s, 5):
            table = joint_rank_census(Single(s, k))
            quads = set(table.counts)
            for t1 in range(s):
                for t2 in range(s + 1):
                    for t3 in range(s):
                        for t4 in range(s + 1):
                            quads.add((t1, t2, t3, t4))
            for quad in sorted(quads):
                want = table.counts.get(quad, 0)
                got = joint_persym_formula(s, k, quad).value
                if quad == (0, 0, 0, 1):
                    continue
                assert got == want, (s, k, quad)


def test_joint_table_gap_tuple_has_census_count_one():
    # The listed cases return 0 for the chain tuple (0,0,0,1), but exhaustive
    # enumeration shows exactly one parameter vector lands there: all window
    # entries zero except the last corner coefficient.
    for s in range(1, 5):
        for k in range(s, 5):
            table = joint_rank_census(Single(s, k))
            assert table.counts.get((0, 0, 0, 1), 0) == 1, (s, k)
            assert joint_persym_formula(s, k, (0, 0, 0, 1)).value == 0


def test_joint_full_rank_case_value():
    for s in range(1, 5):
        for k in range(s, 6):
            got = joint_persym_formula(s, k, (s - 1, s, s - 1, s)).value
            assert got == (1 << (k + s - 1)) - (1 << (2 * s - 1)), (s, k)


def test_joint_rejects_tall_blocks():
    with pytest.raises(NotCoveredError):
        joint_persym_formula(4, 3, (0, 0, 0, 0))


# ---------------------------------------------------------------------------
# free rows stacked on a window block


def test_row_extension_coefficients_are_subspace_counts():
    for n in range(1, 9):
        for j in range(n + 1):
            assert a_coeff(n, j).value == subspace_count(n, j), (n, j)


def test_row_extension_matches_census():
    for n in range(0, 3):
        for m in range(0, 3):
            for k in range(1, 5):
                dist = rank_census(PersymPlusRows(n, m, k))
                for i in range(min(k, n + m + 1) + 1):
                    got = gamma_persym_rows(n, m, k, i).value
                    assert got == dist.counts[i], (n, m, k, i)


def test_one_extra_row_spot_table_matches_census_and_expansion():
    for m in range(0, 5):
        for k in range(2, 7):
            dist = rank_census(PersymPlusRows(1, m, k))
            for i in range(min(k, m + 2) + 1):
                spot = _one_extra_row_table(m, k, i)
                assert spot == dist.counts[i], (m, k, i)
                assert spot == gamma_persym_rows(1, m, k, i).value, (m, k, i)


def test_row_extension_domain_errors():
    with pytest.raises(DomainError):
        gamma_persym_rows(1, 1, 3, -1)
    with pytest.raises(DomainError):
        gamma_persym_rows(1, 1, 3, 4)


# ---------------------------------------------------------------------------
# two stacked window blocks


def test_double_table_matches_census():
    for s in range(1, 4):
        for m in range(0, 3):
            for k in range(1, 6):
                dist = rank_census(Double(s, m, k))
                for i in range(min(2 * s + m, k) + 1):
                    got = gamma_double(s, m, k, i).value
                    assert got == dist.counts[i], (s, m, k, i)


def test_double_table_mass_beyond_census_reach():
    for s in range(1, 7):
        for m in range(0, 5):
            for k in (8, 12, 17):
                total = sum(
                    gamma_double(s, m, k, i).value
                    for i in range(min(2 * s + m, k) + 1)
                )
                assert total == 1 << (2 * k + 2 * s + m - 2), (s, m, k)


def test_double_known_small_tables():
    got = [gamma_double(3, 2, 4, i).value for i in range(5)]
    assert got == [1, 9, 78, 648, 15648]
    got = [gamma_double(5, 0, 6, i).value for i in range(7)]
    assert got == [1, 9, 78, 648, 5280, 42624, 999936]


def test_double_rejects_zero_columns():
    with pytest.raises(NotCoveredError):
        gamma_double(2, 1, 0, 0)


def test_sigma_matches_census_diagonal():
    for s in (2, 3):
        for m in range(0, 2):
            for k in range(1, 5):
                from persymrank.formulas import sigma_formula

                cap = min(k, 2 * s + m - 2)
                for i in range(cap + 1):
                    want = diagonal_sigma(Double(s, m, k), i)
                    got = sigma_formula(s, m, k, i).value
                    assert got == want, (s, m, k, i)


def test_double_recurrence_agrees_with_closed_table_and_census():
    for s in (2, 3):
        for m in range(0, 2):
            for k in range(1, 5):
                dist = rank_census(Double(s, m, k))
                for i in range(min(2 * s + m, k) + 1):
                    rec = gamma_double_recur(s, m, k, i).value
                    assert rec == gamma_double(s, m, k, i).value, (s, m, k, i)
                    assert rec == dist.counts[i], (s, m, k, i)


def test_delta_remainder_telescopes():
    # The remainder term must reproduce the difference between the closed
    # value and the three shifted-block contributions it corrects.
    for s in (2, 3):
        for k in range(2, 5):
            for i in range(1, min(2 * s, k) + 1):
                from persymrank.formulas import sigma_formula

                lhs = delta_double(s, 0, k, i).value
                sig = [
                    sigma_formula(s, 0, k, j).value if j >= 0 else 0
                    for j in (i, i - 1, i - 2)
                ]
                assert lhs == sig[0] - 3 * sig[1] + 2 * sig[2], (s, k, i)


# ---------------------------------------------------------------------------
# three stacked window blocks


def test_triple_table_matches_census():
    grids = [(s, m, k) for s in (1, 2) for m in (0, 1, 2) for k in range(1, 6)]
    grids += [(3, 0, k) for k in range(1, 6)]
    grids += [(1, 2, 6)]
    for s, m, k in grids:
        dist = rank_census(Triple(s, m, 0, k))
        for i in range(min(3 * s + 2 * m, k) + 1):
            got = gamma_triple(s, m, k, i).value
            assert got == dist.counts[i], (s, m, k, i)


def test_triple_table_mass_beyond_census_reach():
    for s in range(1, 7):
        for m in range(0, 5):
            for k in (8, 12):
                total = sum(
                    gamma_triple(s, m, k, i).value
                    for i in range(min(3 * s + 2 * m, k) + 1)
                )
                assert total == 1 << (3 * k + 3 * s + 2 * m - 3), (s, m, k)


def test_triple_known_wide_tables():
    for k in range(7, 9):
        got = [gamma_triple(2, 0, k, i).value for i in range(7)]
        assert got == [
            1,
            21,
            7 * (1 << (k + 1)) + 266,
            147 * (1 << (k + 1)) + 1344,
            7 * (1 << (2 * k + 2)) + 651 * (1 << (k + 2)) - 22624,
            105 * (1 << (2 * k + 2)) - 315 * (1 << (k + 5)) + 53760,
            (1 << (3 * k + 3)) - 7 * (1 << (2 * k + 6)) + 7 * (1 << (k + 10)) - 32768,
        ]


def test_triple_known_truncated_tables():
    got = [gamma_triple(2, 0, 6, i).value for i in range(7)]
    assert got == [1, 21, 1162, 20160, 258720, 1128960, 688128]
    got = [gamma_triple(3, 0, 5, i).value for i in range(6)]
    assert got == [1, 21, 378, 6832, 103488, 1986432]
    got = [gamma_triple(3, 4, 10, i).value for i in range(11)]
    assert got == [
        1,
        21,
        378,
        10416,
        140352,
        1994112,
        29598720,
        458661888,
        109389 * (1 << 16),
        213759 * (1 << 19),
        (1 << 44) - 14273 * (1 << 23),
    ]
    got = [gamma_triple(3, 4, 7, i).value for i in range(8)]
    assert got == [
        1,
        21,
        378,
        6832,
        108096,
        1714560,
        27276288,
        (1 << 35) - 3553 * (1 << 13),
    ]


def test_triple_recurrence_matches_closed_table():
    for s in (2, 3):
        for m in (0, 1):
            for k in range(1, 5):
                for i in range(min(3 * s + 2 * m, k) + 1):
                    rec = gamma_triple_recur(s, m, 0, k, i).value
                    assert rec == gamma_triple(s, m, k, i).value, (s, m, k, i)


def test_triple_recurrence_with_unequal_upper_blocks():
    for m in (0, 1):
        for l in (1,):
            for k in range(1, 5):
                dist = rank_census(Triple(2, m, l, k))
                for i in range(min(6 + 2 * m + l, k) + 1):
                    rec = gamma_triple_recur(2, m, l, k, i).value
                    assert rec == dist.counts[i], (m, l, k, i)


# ---------------------------------------------------------------------------
# reduction identities


def test_reduction_kinds_registry():
    assert REDUCTION_KINDS == tuple(sorted(REDUCTION_KINDS))
    assert len(REDUCTION_KINDS) == 7


def test_reduction_identities_hold_on_guard_grids():
    cases = []
    for s in (1, 2):
        for m in (1, 2):
            for j in range(1, m + 1):
                for k in range(s + j, s + j + 3):
                    cases.append(("double-band-shift", (s, m, k, j)))
    for s in (1, 2):
        for m in (0, 1):
            for j in range(0, s):
                for k in range(s + m + 1 + j, s + m + 3 + j):
                    cases.append(("double-top-shift", (s, m, k, j)))
    for s in (2, 3):
        for m in (0, 1):
            for i in range(1, 2 * s + m + 1):
                ks = i + 1 if i <= 2 * s + m - 3 else i
                for k in range(ks, ks + 2):
                    cases.append(("delta-col-stability", (s, m, k, i)))
    for s in (1, 2):
        for m in (0, 1):
            for i in range(0, 2 * s + m + 1):
                for k in range(i + 1, i + 3):
                    cases.append(("double-col-growth", (s, m, k, i)))
    for s in (1, 2):
        for j in range(0, s):
            for k in range(2 * s + 1 + j, 2 * s + 3 + j):
                cases.append(("triple-shift-m0", (s, k, j)))
    for s in (1, 2):
        for i in range(2 * s + 3, 3 * s + 3):
            for k in range(i, i + 2):
                cases.append(("triple-shift-m1", (s, k, i)))
    for s in (1, 2):
        for m in (2, 3):
            for i in range(2 * s + m + 1, 3 * s + 2 * m + 1):
                need_k = i if i == 3 * s + 2 * m else i + 1
                for k in range(need_k, need_k + 2):
                    cases.append(("triple-shift-m2", (s, m, k, i)))
    for kind, args in cases:
        res = reduction_identities(kind, args)
        assert res.ok, (kind, args, res.lhs, res.rhs)


def test_reduction_rejects_unknown_kind():
    with pytest.raises(DomainError):
        reduction_identities("no-such-kind", (1, 2, 3))


# ---------------------------------------------------------------------------
# power-sum moments


def test_moment_reproduces_known_solution_counts():
    d = rank_census(Double(3, 2, 4))
    assert moment(d, 3, 4 + 8, 14).value == 35356672
    d = rank_census(Double(5, 0, 6))
    assert moment(d, 4, 6 + 10, 20).value == 37014016 * (1 << 20)
    d = rank_census(Triple(3, 0, 0, 5))
    assert moment(d, 3, 5 + 9, 21).value == 228089856
    counts = {i: gamma_triple(3, 4, 7, i).value for i in range(8)}
    assert moment(counts, 3, 7 + 9 + 8, 35).value == 4243395 * (1 << 29)


def test_moment_accepts_plain_mappings_and_census_results():
    d = rank_census(Single(2, 3))
    via_result = moment(d, 2, 3 + 2, 4).value
    via_mapping = moment(dict(d.counts), 2, 3 + 2, 4).value
    assert via_result == via_mapping


def test_moment_rejects_nonintegral_normalization():
    with pytest.raises(ArithmeticError):
        moment({0: 1}, 1, 1, 5)


def test_single_moment_closed_form_matches_census():
    for q in (1, 2, 3, 4):
        for k in range(1, 5):
            for m in range(0, k):
                d = rank_census(Single(1 + m, k))
                got = moment(d, q, k + 1 + m, k + m).value
                assert got == r_q_single_closed(q, k, m).value, (q, k, m)


def test_single_moment_first_power_formula():
    for k in range(1, 10):
        for m in range(0, k):
            assert (
                r_q_single_closed(1, k, m).value
                == (1 << k) + (1 << (m + 1)) - 1
            ), (k, m)


def test_randomized_mass_and_moment_consistency():
    rng = random.Random(977317)
    for _ in range(40):
        s = rng.randrange(1, 5)
        m = rng.randrange(0, 4)
        k = rng.randrange(1, 14)
        top = min(2 * s + m, k)
        counts = {
            i: gamma_double(s, m, k, i).value for i in range(top + 1)
        }
        bits = 2 * k + 2 * s + m - 2
        assert all(v > 0 for v in counts.values()), (s, m, k)
        assert sum(counts.values()) == 1 << bits, (s, m, k)
        assert gamma_double(s, m, k, top + 1).value == 0, (s, m, k)
        # the first power-sum moment is a count of solution pairs, so the
        # normalization inside moment() must divide exactly
        first = moment(counts, 1, k + 2 * s + m, bits).value
        assert first > 0, (s, m, k)
