"""Acceptance gate: one check per top-level criterion, one line each.

Every criterion prints exactly one "criterion NN: ..." line, PASS or
FAIL, followed by sample diagnostics when something is off. Criterion 2
documents a known genuine gap: the closed joint-rank display misses the
single parameter vector whose whole chain is zero except the full
shape, so that check fails honestly rather than masking the gap.
"""

import itertools

from persymrank import census, families, formulas, laurent, polycount
from persymrank.families import Double, PersymPlusRows, Single, Triple


def _report(num: int, problems: list[str]) -> None:
    status = "PASS" if not problems else f"FAIL ({len(problems)} problems)"
    print(f"criterion {num:02d}: {status}")
    for line in problems[:6]:
        print(f"    {line}")
    assert not problems, f"criterion {num:02d}: {problems[:3]}"


def test_criterion_01_single_block_census_matches_table():
    problems = []
    for s in range(1, 7):
        for k in range(s, 7):
            dist = census.rank_census(Single(s, k))
            for i in range(min(s, k) + 1):
                got = formulas.gamma_persym(s, k, i).value
                if got != dist.counts[i]:
                    problems.append(
                        f"single s={s} k={k} i={i}: census {dist.counts[i]} != table {got}"
                    )
    _report(1, problems)


def test_criterion_02_joint_rank_table_matches_closed_cases():
    problems = []
    for s in range(2, 7):
        for k in range(s, 7):
            table = census.joint_rank_census(Single(s, k))
            ranges = (
                range(min(s - 1, k - 1) + 1),
                range(min(s, k - 1) + 1),
                range(min(s - 1, k) + 1),
                range(min(s, k) + 1),
            )
            for tup in itertools.product(*ranges):
                want = table.counts.get(tup, 0)
                got = formulas.joint_persym_formula(s, k, tup).value
                if want != got:
                    problems.append(
                        f"joint s={s} k={k} ranks={tup}: census {want} != closed {got}"
                    )
    _report(2, problems)


def test_criterion_03_one_extra_row_block_and_its_moments():
    problems = []
    dist = census.rank_census(PersymPlusRows(1, 2, 3))
    if dict(dist.counts) != {0: 1, 1: 13, 2: 66, 3: 176}:
        problems.append(f"census counts {dict(dist.counts)}")
    shape = laurent.block_with_rows(1, 2, 3)
    for q in range(1, 6):
        display = (2 ** (3 * q) + 13 * 2 ** (2 * q) + 66 * 2**q + 176) << (4 * q)
        display >>= 8
        via_census = formulas.moment(dist, q, 7, 8).value
        via_integral = laurent.integral_moment(shape, q)
        if via_census != display:
            problems.append(f"q={q}: census moment {via_census} != display {display}")
        if via_integral != display:
            problems.append(f"q={q}: integral {via_integral} != display {display}")
        if q <= 3:
            brute = polycount.count_solutions(3, [(2, 1), (0, 1)], q)
            if brute != display:
                problems.append(f"q={q}: brute {brute} != display {display}")
    _report(3, problems)


def test_criterion_04_five_extra_rows_table_and_third_moment():
    problems = []
    want = {0: 1, 1: 561, 2: 65670, 3: 3731208, 4: 63311424}
    for i, value in want.items():
        got = formulas.gamma_persym_rows(5, 2, 4, i).value
        if got != value:
            problems.append(f"closed i={i}: {got} != {value}")
    dist = census.rank_census(PersymPlusRows(5, 2, 4))
    if dict(dist.counts) != want:
        problems.append(f"census counts {dict(dist.counts)}")
    moment3 = laurent.integral_moment(laurent.block_with_rows(5, 2, 4), 3)
    if moment3 != 24413824:
        problems.append(f"third moment {moment3} != 24413824")
    _report(4, problems)


def test_criterion_05_two_block_closed_tables_match_census():
    problems = []
    for s in range(1, 5):
        for m in range(0, 4):
            for k in range(1, 8):
                dist = census.rank_census(Double(s, m, k))
                for i in range(min(2 * s + m, k) + 1):
                    try:
                        got = formulas.gamma_double(s, m, k, i).value
                    except formulas.NotCoveredError:
                        continue
                    if got != dist.counts[i]:
                        problems.append(
                            f"double s={s} m={m} k={k} i={i}: "
                            f"census {dist.counts[i]} != table {got}"
                        )
    for (s, m, k), want in [
        ((3, 2, 4), [1, 9, 78, 648, 15648]),
        ((5, 0, 6), [1, 9, 78, 648, 5280, 42624, 999936]),
    ]:
        got = [formulas.gamma_double(s, m, k, i).value for i in range(len(want))]
        if got != want:
            problems.append(f"example table s={s} m={m} k={k}: {got} != {want}")
    _report(5, problems)


def test_criterion_06_two_block_recurrence_and_shift_identities():
    problems = []
    for s in (2, 3):
        for m in (0, 1, 2):
            for k in range(1, 7):
                dist = census.rank_census(Double(s, m, k))
                for i in range(min(2 * s + m, k) + 1):
                    got = formulas.gamma_double_recur(s, m, k, i).value
                    if got != dist.counts[i]:
                        problems.append(
                            f"recurrence s={s} m={m} k={k} i={i}: "
                            f"{got} != census {dist.counts[i]}"
                        )
                for i in range(0, 2 * s + m + 1):
                    checks = []
                    if k >= i + 1:
                        checks.append(("double-col-growth", (s, m, k, i)))
                    need = max(1, i + 1 if i <= 2 * s + m - 3 else i)
                    if k >= need:
                        checks.append(("delta-col-stability", (s, m, k, i)))
                    for kind, args in checks:
                        res = formulas.reduction_identities(kind, args)
                        if not res.ok:
                            problems.append(
                                f"{kind} {args}: {res.lhs} != {res.rhs}"
                            )
    _report(6, problems)


def test_criterion_07_two_block_moments_by_independent_routes():
    problems = []
    first = laurent.integral_moment(laurent.bounded_double(3, 2, 4), 3)
    if first != 35356672:
        problems.append(f"census route {first} != 35356672")
    brute = polycount.count_solutions(4, [(2, 1), (4, 1)], 3)
    if brute != 35356672:
        problems.append(f"brute route {brute} != 35356672")
    second = laurent.integral_moment(laurent.bounded_double(5, 0, 6), 4)
    if second != 37014016 << 20:
        problems.append(f"census route {second} != 37014016*2^20")
    _report(7, problems)


def test_criterion_08_three_block_closed_tables():
    problems = []
    for s in (1, 2):
        for m in (0, 1, 2):
            for k in range(1, 7):
                dist = census.rank_census(Triple(s, m, 0, k))
                for i in range(min(3 * s + 2 * m, k) + 1):
                    got = formulas.gamma_triple(s, m, k, i).value
                    if got != dist.counts[i]:
                        problems.append(
                            f"triple s={s} m={m} k={k} i={i}: "
                            f"census {dist.counts[i]} != table {got}"
                        )
    for k in range(7, 11):
        got = formulas.gamma_triple(1, 0, k, 1).value
        if got != 7 * (2**k - 1):
            problems.append(f"three-row rank-1 count at k={k}: {got}")
    wide = [1, 21, 1162, 20160, 258720, 1128960, 688128]
    got = [formulas.gamma_triple(2, 0, 6, i).value for i in range(7)]
    if got != wide:
        problems.append(f"s=2 k=6 table {got} != {wide}")
    spot_tables = {
        (3, 4, 10): [
            1,
            21,
            378,
            10416,
            140352,
            1994112,
            29598720,
            458661888,
            109389 << 16,
            213759 << 19,
            (1 << 44) - (14273 << 23),
        ],
        (3, 4, 7): [
            1,
            21,
            378,
            6832,
            108096,
            1714560,
            27276288,
            (1 << 35) - (3553 << 13),
        ],
    }
    for (s, m, k), want in spot_tables.items():
        got = [
            formulas.gamma_triple(s, m, k, i).value
            for i in range(min(3 * s + 2 * m, k) + 1)
        ]
        if got != want:
            problems.append(f"spot table s={s} m={m} k={k}: {got} != {want}")
    _report(8, problems)


def test_criterion_09_three_block_recurrence_with_unequal_blocks():
    problems = []
    for m in (0, 1):
        for l in (0, 1):
            for k in range(1, 5):
                dist = census.rank_census(Triple(2, m, l, k))
                for i in range(min(6 + 2 * m + l, k) + 1):
                    got = formulas.gamma_triple_recur(2, m, l, k, i).value
                    if got != dist.counts[i]:
                        problems.append(
                            f"triple recurrence m={m} l={l} k={k} i={i}: "
                            f"{got} != census {dist.counts[i]}"
                        )
    _report(9, problems)


def test_criterion_10_three_block_moments():
    problems = []
    want = 3563904 << 6
    via_census = laurent.integral_moment(laurent.bounded_triple(3, 0, 0, 5), 3)
    if via_census != want:
        problems.append(f"census route {via_census} != {want}")
    brute = polycount.count_solutions(5, [(2, 3)], 3)
    if brute != want:
        problems.append(f"brute route {brute} != {want}")
    gammas = {
        i: formulas.gamma_triple(3, 4, 7, i).value for i in range(8)
    }
    big = formulas.moment(gammas, 3, 24, 35).value
    if big != 4243395 << 29:
        problems.append(f"formula route {big} != 4243395*2^29")
    _report(10, problems)


def test_criterion_11_invertible_square_fractions():
    from fractions import Fraction

    problems = []
    for s, m in [(1, 0), (1, 1), (2, 0)]:
        k = 2 * s + m
        frac = census.invertible_fraction(Double(s, m, k))
        if frac != Fraction(3, 8):
            problems.append(f"two-block s={s} m={m}: {frac} != 3/8")
        closed = Fraction(
            formulas.gamma_double(s, m, k, k).value, 1 << (2 * k + 2 * s + m - 2)
        )
        if closed != Fraction(3, 8):
            problems.append(f"two-block closed s={s} m={m}: {closed} != 3/8")
    for s, m in [(1, 0), (1, 1)]:
        k = 3 * s + 2 * m
        frac = census.invertible_fraction(Triple(s, m, 0, k))
        if frac != Fraction(21, 64):
            problems.append(f"three-block s={s} m={m}: {frac} != 21/64")
        closed = Fraction(
            formulas.gamma_triple(s, m, k, k).value,
            1 << (3 * k + 3 * s + 2 * m - 3),
        )
        if closed != Fraction(21, 64):
            problems.append(f"three-block closed s={s} m={m}: {closed} != 21/64")
    _report(11, problems)


def test_criterion_12_character_sums_match_rank_rules_exhaustively():
    problems = []
    shapes = [
        laurent.bounded_single(2, 3),
        laurent.exact_single(3, 3),
        laurent.block_with_unit(1, 2),
        laurent.block_with_rows(1, 1, 2),
        laurent.bounded_double(1, 1, 2),
        laurent.bounded_triple(1, 0, 0, 2),
    ]
    for shape in shapes:
        depths = [shape.k + f.bound for f in shape.factors]
        for combo in itertools.product(*(range(1 << d) for d in depths)):
            pts = tuple(
                laurent.LaurentPoint(x, d) for x, d in zip(combo, depths)
            )
            direct = laurent.exp_sum_direct(shape, pts)
            ranked = laurent.exp_sum_rank(shape, pts)
            if direct != ranked:
                problems.append(f"{shape} points {combo}: {direct} != {ranked}")
    _report(12, problems)


def test_criterion_13_row_extension_coefficients():
    problems = []
    printed = {
        1: (1, 1),
        2: (1, 3, 1),
        3: (1, 7, 7, 1),
        4: (1, 15, 35, 15, 1),
        5: (1, 31, 155, 155, 31, 1),
    }
    for n, want in printed.items():
        got = tuple(formulas.a_coeff(n, j).value for j in range(n + 1))
        if got != want:
            problems.append(f"n={n}: {got} != {want}")
    _report(13, problems)
