"""Command-line front end tying the independent computation routes together.

Four subcommands:

* census: exact rank tally of one block family, optionally the joint
  tally along its nested chain;
* gamma: one rank count through the closed tables, the recurrences, or
  the census, with cross-route agreement reporting;
* verify: named identity suites, each instance printed with both sides;
* count: solution counts of the shifted-product systems through brute
  enumeration, the integral route, the table moment, and the one-line
  closed form where it exists.

Output is JSON by default and CSV with --csv, with counts serialized as
decimal strings. Identical invocations produce byte-identical output.
Exit codes: 0 success, 2 bad arguments or uncovered request, 3 budget
refusal, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import census, families, formulas, laurent, polycount
from .census import DEFAULT_BUDGET, BudgetError
from .families import Double, PersymPlusRows, Single, Triple
from .formulas import DomainError, NotCoveredError

__all__ = ["main"]


# ---------------------------------------------------------------------------
# output plumbing


def _emit(payload: dict, rows: list[list[str]], args) -> None:
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# gamma paths


def _closed_gamma(shape: families.FamilyShape, i: int) -> formulas.FormulaResult:
    if isinstance(shape, Single):
        return formulas.gamma_persym(shape.s, shape.k, i)
    if isinstance(shape, PersymPlusRows):
        return formulas.gamma_persym_rows(shape.n, shape.m, shape.k, i)
    if isinstance(shape, Double):
        return formulas.gamma_double(shape.s, shape.m, shape.k, i)
    if shape.l != 0:
        raise NotCoveredError(
            "closed three-block tables need equal upper blocks (l=0); "
            "the recurrence path covers l>0"
        )
    return formulas.gamma_triple(shape.s, shape.m, shape.k, i)


def _recur_gamma(
    shape: families.FamilyShape, i: int, budget: int
) -> formulas.FormulaResult:
    if isinstance(shape, Double):
        return formulas.gamma_double_recur(shape.s, shape.m, shape.k, i, budget=budget)
    if isinstance(shape, Triple):
        return formulas.gamma_triple_recur(
            shape.s, shape.m, shape.l, shape.k, i, budget=budget
        )
    raise NotCoveredError(
        "recurrences cover two- and three-block stacks; "
        "one-block and block-plus-rows shapes have closed tables instead"
    )


def _census_gamma(
    shape: families.FamilyShape, i: int, budget: int, threads: int | None
) -> formulas.FormulaResult:
    dist = census.rank_census(shape, budget=budget, threads=threads)
    return formulas.FormulaResult(
        dist.counts.get(i, 0), f"exhaustive sweep of 2^{dist.param_bits} parameters"
    )


def _gamma_one(shape, i, path, budget, threads) -> formulas.FormulaResult:
    if path == "closed":
        return _closed_gamma(shape, i)
    if path == "recur":
        return _recur_gamma(shape, i, budget)
    return _census_gamma(shape, i, budget, threads)


def _run_paths(names, evaluate):
    """Evaluate each named route, capturing per-route failures.

    Returns the per-route report, the distinct values reached, and the
    error to surface when no route produced a value.
    """
    report: dict[str, dict[str, str]] = {}
    values = []
    budget_exc = None
    errors = []
    for name in names:
        try:
            res = evaluate(name)
        except NotCoveredError as exc:
            report[name] = {"error": str(exc)}
            errors.append(f"{name}: {exc}")
        except BudgetError as exc:
            report[name] = {"error": str(exc)}
            errors.append(f"{name}: {exc}")
            budget_exc = exc
        else:
            report[name] = {"value": str(res.value), "provenance": res.provenance}
            values.append(res.value)
    if not values:
        if budget_exc is not None:
            raise budget_exc
        raise NotCoveredError("; ".join(errors))
    return report, values


def cmd_gamma(args) -> tuple[dict, list[list[str]], bool]:
    shape = families.parse_shape(args.shape)
    if args.i < 0:
        raise DomainError(f"rank must be nonnegative, got {args.i}")
    names = ["closed", "recur", "census"] if args.path == "all" else [args.path]
    report, values = _run_paths(
        names, lambda p: _gamma_one(shape, args.i, p, args.budget, args.threads)
    )
    agree = all(v == values[0] for v in values)
    payload = {
        "shape": families.format_shape(shape),
        "rank": args.i,
        "paths": report,
    }
    rows = [["path", "value", "provenance"]]
    for name in names:
        entry = report[name]
        rows.append(
            [name, entry.get("value", ""), entry.get("provenance", entry.get("error", ""))]
        )
    if args.path == "all":
        payload["agree"] = agree
        rows.append(["agree", str(agree).lower(), ""])
    if agree:
        payload["value"] = str(values[0])
    return payload, rows, agree


# ---------------------------------------------------------------------------
# census


def cmd_census(args) -> tuple[dict, list[list[str]], bool]:
    shape = families.parse_shape(args.shape)
    if args.joint:
        table = census.joint_rank_census(shape, budget=args.budget, threads=args.threads)
        payload = table.to_json_dict()
        rows = [["ranks", "count"]]
        for tup in sorted(table.counts):
            rows.append([" ".join(map(str, tup)), str(table.counts[tup])])
        return payload, rows, True
    dist = census.rank_census(shape, budget=args.budget, threads=args.threads)
    payload = dist.to_json_dict()
    rows = [["rank", "count"]]
    for i in sorted(dist.counts):
        rows.append([str(i), str(dist.counts[i])])
    return payload, rows, True


# ---------------------------------------------------------------------------
# count


_SYSTEM_KEYS = {
    "single": ("k", "m"),
    "double": ("k", "s", "m"),
    "triple": ("k", "s", "m"),
    "rows": ("n", "k", "m"),
}


def _parse_params(pairs: list[str], keys: tuple[str, ...]) -> dict[str, int]:
    vals: dict[str, int] = {}
    for pair in pairs:
        name, eq, num = pair.partition("=")
        name = name.strip()
        if not eq or name not in keys or name in vals:
            raise DomainError(
                f"bad parameter {pair!r}; expected distinct {', '.join(keys)}"
            )
        try:
            vals[name] = int(num)
        except ValueError:
            raise DomainError(f"parameter {pair!r} is not an integer") from None
    missing = [key for key in keys if key not in vals]
    if missing:
        raise DomainError(f"missing parameters: {', '.join(missing)}")
    return vals


def _system_layout(system: str, p: dict[str, int]):
    """Degree caps, sum shape, and block family of one count system."""
    k = p["k"]
    if system == "single":
        caps = [(p["m"], 1)]
        shape = laurent.bounded_single(p["m"] + 1, k)
        fam = Single(p["m"] + 1, k)
    elif system == "double":
        s, m = p["s"], p["m"]
        caps = [(s - 1, 1), (s + m - 1, 1)]
        shape = laurent.bounded_double(s, m, k)
        fam = Double(s, m, k)
    elif system == "triple":
        s, m = p["s"], p["m"]
        caps = [(s - 1, 1), (s + m - 1, 2)]
        shape = laurent.bounded_triple(s, m, 0, k)
        fam = Triple(s, m, 0, k)
    else:
        n, m = p["n"], p["m"]
        caps = [(m, 1)] + ([(0, n)] if n else [])
        shape = laurent.block_with_rows(n, m, k)
        fam = PersymPlusRows(n, m, k)
    return caps, shape, fam


def _table_moment(fam: families.FamilyShape, q: int) -> formulas.FormulaResult:
    """Moment from the closed rank tables, independent of any census."""
    top = min(families.total_rows(fam), fam.k)
    gammas = {i: _closed_gamma(fam, i).value for i in range(top + 1)}
    res = formulas.moment(
        gammas, q, fam.k + families.total_rows(fam), families.param_bits(fam)
    )
    return formulas.FormulaResult(res.value, "moment of the closed rank tables")


def _count_one(system, p, q, path, budget, threads) -> formulas.FormulaResult:
    caps, shape, fam = _system_layout(system, p)
    if path == "brute":
        v = polycount.count_solutions(p["k"], caps, q, budget=budget, threads=threads)
        return formulas.FormulaResult(v, "literal enumeration of y-tuples")
    if path == "integral":
        v = laurent.integral_moment(shape, q, budget=budget, threads=threads)
        return formulas.FormulaResult(v, "census-weighted character-sum moment")
    if path == "moment":
        return _table_moment(fam, q)
    if system != "single":
        raise NotCoveredError(
            "the one-line closed count covers the single system only"
        )
    return formulas.r_q_single_closed(q, p["k"], p["m"])


def cmd_count(args) -> tuple[dict, list[list[str]], bool]:
    keys = _SYSTEM_KEYS[args.system]
    params = _parse_params(args.params, keys)
    if args.q < 1:
        raise DomainError(f"needs q >= 1, got {args.q}")
    names = (
        ["brute", "integral", "moment", "closed"] if args.path == "all" else [args.path]
    )
    report, values = _run_paths(
        names,
        lambda p: _count_one(args.system, params, args.q, p, args.budget, args.threads),
    )
    agree = all(v == values[0] for v in values)
    payload = {
        "system": args.system,
        "params": {key: params[key] for key in keys},
        "q": args.q,
        "paths": report,
    }
    rows = [["path", "value", "provenance"]]
    for name in names:
        entry = report[name]
        rows.append(
            [name, entry.get("value", ""), entry.get("provenance", entry.get("error", ""))]
        )
    if args.path == "all":
        payload["agree"] = agree
        rows.append(["agree", str(agree).lower(), ""])
    if agree:
        payload["value"] = str(values[0])
    return payload, rows, agree


# ---------------------------------------------------------------------------
# verify suites


def _inst(name: str, lhs, rhs) -> dict:
    return {"name": name, "lhs": str(lhs), "rhs": str(rhs), "ok": lhs == rhs}


def _suite_daykin(args) -> list[dict]:
    max_s = args.max_s if args.max_s is not None else 4
    max_k = args.max_k if args.max_k is not None else 6
    out = []
    for s in range(0, max_s + 1):
        for k in range(1, max_k + 1):
            dist = census.rank_census(Single(s, k), budget=args.budget)
            for i in range(min(s, k) + 1):
                got = formulas.gamma_persym(s, k, i).value
                out.append(_inst(f"single s={s} k={k} i={i}", dist.counts[i], got))
    return out


def _suite_joint(args) -> list[dict]:
    max_s = args.max_s if args.max_s is not None else 3
    max_k = args.max_k if args.max_k is not None else 4
    out = []
    for s in range(1, max_s + 1):
        for k in range(s, max_k + 1):
            table = census.joint_rank_census(Single(s, k), budget=args.budget)
            seen = set(table.counts)
            for j1 in range(min(s - 1, k - 1) + 1):
                for j2 in range(j1, min(s, k - 1) + 1):
                    for j3 in range(j1, min(s - 1, k) + 1):
                        for j4 in range(max(j2, j3), min(s, k) + 1):
                            tup = (j1, j2, j3, j4)
                            want = table.counts.get(tup, 0)
                            got = formulas.joint_persym_formula(s, k, tup).value
                            if want or got or tup in seen:
                                out.append(
                                    _inst(f"joint s={s} k={k} ranks={tup}", want, got)
                                )
    return out


def _suite_rows(args) -> list[dict]:
    max_k = args.max_k if args.max_k is not None else 4
    top = args.max if args.max is not None else 2
    out = []
    for n in range(0, top + 1):
        for m in range(0, top + 1):
            for k in range(1, max_k + 1):
                dist = census.rank_census(PersymPlusRows(n, m, k), budget=args.budget)
                for i in range(min(1 + m + n, k) + 1):
                    got = formulas.gamma_persym_rows(n, m, k, i).value
                    out.append(
                        _inst(f"rows n={n} m={m} k={k} i={i}", dist.counts[i], got)
                    )
    return out


def _suite_double(args) -> list[dict]:
    max_s = args.max_s if args.max_s is not None else 3
    max_k = args.max_k if args.max_k is not None else 6
    out = []
    for s in range(1, max_s + 1):
        for m in range(0, 3):
            for k in range(1, max_k + 1):
                dist = census.rank_census(Double(s, m, k), budget=args.budget)
                for i in range(min(2 * s + m, k) + 1):
                    try:
                        got = formulas.gamma_double(s, m, k, i).value
                    except NotCoveredError:
                        continue
                    out.append(
                        _inst(f"double s={s} m={m} k={k} i={i}", dist.counts[i], got)
                    )
    return out


def _suite_double_recur(args) -> list[dict]:
    max_s = args.max_s if args.max_s is not None else 3
    max_k = args.max_k if args.max_k is not None else 5
    out = []
    for s in range(2, max_s + 1):
        for m in range(0, 3):
            for k in range(1, max_k + 1):
                dist = census.rank_census(Double(s, m, k), budget=args.budget)
                for i in range(min(2 * s + m, k) + 1):
                    got = formulas.gamma_double_recur(s, m, k, i, budget=args.budget)
                    out.append(
                        _inst(
                            f"double-recur s={s} m={m} k={k} i={i}",
                            dist.counts[i],
                            got.value,
                        )
                    )
    return out


def _suite_sigma(args) -> list[dict]:
    max_s = args.max_s if args.max_s is not None else 3
    max_k = args.max_k if args.max_k is not None else 5
    out = []
    for s in range(2, max_s + 1):
        for m in range(0, 3):
            for k in range(1, max_k + 1):
                for i in range(min(2 * s + m, k) + 1):
                    try:
                        got = formulas.sigma_formula(s, m, k, i).value
                    except (DomainError, NotCoveredError):
                        continue
                    want = census.diagonal_sigma(Double(s, m, k), i, budget=args.budget)
                    out.append(_inst(f"sigma s={s} m={m} k={k} i={i}", want, got))
    return out


def _reduction_cases(top: int):
    for s in (1, 2):
        for m in (1, 2):
            for j in range(1, m + 1):
                for k in range(s + j, min(s + j + 3, top + 1)):
                    yield "double-band-shift", (s, m, k, j)
    for s in (1, 2):
        for m in (0, 1):
            for j in range(0, s):
                for k in range(s + m + 1 + j, min(s + m + 3 + j, top + 1)):
                    yield "double-top-shift", (s, m, k, j)
    for s in (2, 3):
        for m in (0, 1):
            for i in range(1, 2 * s + m + 1):
                ks = i + 1 if i <= 2 * s + m - 3 else i
                for k in range(ks, min(ks + 2, top + 1)):
                    yield "delta-col-stability", (s, m, k, i)
    for s in (1, 2):
        for m in (0, 1):
            for i in range(0, 2 * s + m + 1):
                for k in range(i + 1, min(i + 3, top + 1)):
                    yield "double-col-growth", (s, m, k, i)
    for s in (1, 2):
        for j in range(0, s):
            for k in range(2 * s + 1 + j, min(2 * s + 3 + j, top + 1)):
                yield "triple-shift-m0", (s, k, j)
    for s in (1, 2):
        for i in range(2 * s + 3, 3 * s + 3):
            for k in range(i, min(i + 2, top + 1)):
                yield "triple-shift-m1", (s, k, i)
    for s in (1, 2):
        for m in (2, 3):
            for i in range(2 * s + m + 1, 3 * s + 2 * m + 1):
                need_k = i if i == 3 * s + 2 * m else i + 1
                for k in range(need_k, min(need_k + 2, top + 1)):
                    yield "triple-shift-m2", (s, m, k, i)


def _suite_reductions(args) -> list[dict]:
    top = args.max if args.max is not None else 8
    out = []
    for kind, case_args in _reduction_cases(top):
        res = formulas.reduction_identities(kind, case_args, budget=args.budget)
        out.append(_inst(f"{kind} {case_args}", res.lhs, res.rhs))
    return out


def _suite_triple(args) -> list[dict]:
    max_s = args.max_s if args.max_s is not None else 2
    max_k = args.max_k if args.max_k is not None else 5
    grids = [(s, m) for s in range(1, max_s + 1) for m in range(0, 3)]
    if max_s >= 2:
        grids.append((3, 0))
    out = []
    for s, m in grids:
        for k in range(1, max_k + 1):
            dist = census.rank_census(Triple(s, m, 0, k), budget=args.budget)
            for i in range(min(3 * s + 2 * m, k) + 1):
                got = formulas.gamma_triple(s, m, k, i).value
                out.append(
                    _inst(f"triple s={s} m={m} k={k} i={i}", dist.counts[i], got)
                )
    return out


def _suite_triple_recur(args) -> list[dict]:
    max_k = args.max_k if args.max_k is not None else 4
    out = []
    for m in (0, 1):
        for l in (0, 1):
            for k in range(1, max_k + 1):
                dist = census.rank_census(Triple(2, m, l, k), budget=args.budget)
                for i in range(min(6 + 2 * m + l, k) + 1):
                    got = formulas.gamma_triple_recur(2, m, l, k, i, budget=args.budget)
                    out.append(
                        _inst(
                            f"triple-recur s=2 m={m} l={l} k={k} i={i}",
                            dist.counts[i],
                            got.value,
                        )
                    )
    return out


def _suite_fractions(args) -> list[dict]:
    out = []
    for s in (1, 2):
        for m in (0, 1, 2):
            k = 2 * s + m
            frac = Fraction(
                formulas.gamma_double(s, m, k, k).value,
                1 << (2 * k + 2 * s + m - 2),
            )
            out.append(_inst(f"square two-block s={s} m={m}", frac, Fraction(3, 8)))
            k = 3 * s + 2 * m
            frac = Fraction(
                formulas.gamma_triple(s, m, k, k).value,
                1 << (3 * k + 3 * s + 2 * m - 3),
            )
            out.append(_inst(f"square three-block s={s} m={m}", frac, Fraction(21, 64)))
    for shape, want in [
        (Double(1, 0, 2), Fraction(3, 8)),
        (Double(2, 1, 5), Fraction(3, 8)),
        (Triple(1, 0, 0, 3), Fraction(21, 64)),
        (Triple(1, 1, 0, 5), Fraction(21, 64)),
    ]:
        frac = census.invertible_fraction(shape, budget=args.budget)
        out.append(_inst(f"census {families.format_shape(shape)}", frac, want))
    return out


def _shape_text(shape: laurent.SumShape) -> str:
    caps = " ".join(
        ("=" if f.exact else "<=") + str(f.bound) for f in shape.factors
    )
    y = ("=" if shape.y_exact else "<=") + str(shape.k - 1)
    return f"k={shape.k} y{y} caps {caps}"


def _suite_sums(args) -> list[dict]:
    shapes = [
        laurent.bounded_single(2, 3),
        laurent.exact_single(2, 3),
        laurent.block_with_unit(1, 2),
        laurent.bounded_double(1, 1, 2),
        laurent.bounded_triple(1, 0, 0, 2),
    ]
    out = []
    for shape in shapes:
        depths = [shape.k + f.bound for f in shape.factors]
        text = _shape_text(shape)
        for packed in range(1 << sum(depths)):
            pts = []
            rest = packed
            for d in depths:
                pts.append(laurent.LaurentPoint(rest & ((1 << d) - 1), d))
                rest >>= d
            direct = laurent.exp_sum_direct(shape, pts, budget=args.budget)
            ranked = laurent.exp_sum_rank(shape, pts)
            out.append(_inst(f"{text} point {packed}", direct, ranked))
    return out


def _suite_moments(args) -> list[dict]:
    out = []
    for k in range(1, 4):
        for m in range(0, min(3, k)):
            shape = laurent.bounded_single(m + 1, k)
            for q in (1, 2):
                lhs = laurent.integral_moment(shape, q, budget=args.budget)
                brute = polycount.count_solutions(k, [(m, 1)], q, budget=args.budget)
                out.append(_inst(f"single k={k} m={m} q={q} vs brute", lhs, brute))
                closed = formulas.r_q_single_closed(q, k, m).value
                out.append(_inst(f"single k={k} m={m} q={q} vs closed", lhs, closed))
    pairs = [
        (laurent.bounded_double(1, 1, 2), [(0, 1), (1, 1)], 2),
        (laurent.bounded_double(2, 1, 3), [(1, 1), (2, 1)], 2),
        (laurent.bounded_triple(1, 0, 0, 2), [(0, 3)], 3),
        (laurent.bounded_triple(1, 1, 0, 3), [(0, 1), (1, 2)], 2),
        (laurent.block_with_rows(2, 1, 2), [(1, 1), (0, 2)], 2),
    ]
    for shape, caps, q in pairs:
        lhs = laurent.integral_moment(shape, q, budget=args.budget)
        brute = polycount.count_solutions(shape.k, caps, q, budget=args.budget)
        out.append(_inst(f"{_shape_text(shape)} q={q} vs brute", lhs, brute))
    pinned = laurent.exact_single(2, 2)
    lhs = laurent.integral_moment(pinned, 2, budget=args.budget)
    literal = 0
    for x in range(1 << 3):
        literal += laurent.exp_sum_rank(pinned, [laurent.LaurentPoint(x, 3)]) ** 2
    out.append(_inst("pinned top-degree (2,2) q=2 vs literal", lhs * 8, literal))
    return out


SUITES = {
    "daykin": _suite_daykin,
    "joint": _suite_joint,
    "rows": _suite_rows,
    "double": _suite_double,
    "double-recur": _suite_double_recur,
    "sigma": _suite_sigma,
    "reductions": _suite_reductions,
    "triple": _suite_triple,
    "triple-recur": _suite_triple_recur,
    "fractions": _suite_fractions,
    "sums": _suite_sums,
    "moments": _suite_moments,
}


def cmd_verify(args) -> tuple[dict, list[list[str]], bool]:
    instances = SUITES[args.suite](args)
    failures = sum(1 for inst in instances if not inst["ok"])
    payload = {
        "suite": args.suite,
        "checked": len(instances),
        "failures": failures,
        "pass": failures == 0,
        "instances": instances,
    }
    rows = [["instance", "lhs", "rhs", "ok"]]
    for inst in instances:
        rows.append([inst["name"], inst["lhs"], inst["rhs"], str(inst["ok"]).lower()])
    return payload, rows, failures == 0


# ---------------------------------------------------------------------------
# parser and entry point


def _common_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="log2 cap on sweep or enumeration work",
    )
    sp.add_argument("--threads", type=int, default=None, help="worker thread cap")
    sp.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    sp.add_argument("--out", default=None, help="write output to this file")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="persymrank",
        description="Exact rank statistics and solution counts for stacked "
        "persymmetric families over GF(2).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", help="exact rank tally of one block family")
    c.add_argument("shape", help="family, e.g. single:s=2,k=3 or double:s=3,m=2,k=4")
    c.add_argument("--joint", action="store_true", help="joint tally along the chain")
    _common_flags(c)
    c.set_defaults(func=cmd_census)

    g = sub.add_parser("gamma", help="one rank count via table, recurrence, census")
    g.add_argument("shape", help="family, e.g. double:s=3,m=2,k=4")
    g.add_argument("i", type=int, help="rank whose count is requested")
    g.add_argument(
        "--path",
        choices=["closed", "recur", "census", "all"],
        default="all",
        help="which route to evaluate (default: all, with agreement check)",
    )
    _common_flags(g)
    g.set_defaults(func=cmd_gamma)

    v = sub.add_parser("verify", help="run one identity suite")
    v.add_argument("suite", choices=sorted(SUITES), help="suite name")
    v.add_argument("--max-s", type=int, default=None, help="stack-height bound")
    v.add_argument("--max-k", type=int, default=None, help="column bound")
    v.add_argument("--max", type=int, default=None, help="generic size bound")
    _common_flags(v)
    v.set_defaults(func=cmd_verify)

    n = sub.add_parser("count", help="solution count of a shifted-product system")
    n.add_argument("system", choices=sorted(_SYSTEM_KEYS), help="system kind")
    n.add_argument(
        "params",
        nargs="*",
        metavar="key=value",
        help="system dimensions, e.g. k=4 s=3 m=2",
    )
    n.add_argument("--q", type=int, required=True, help="number of summands")
    n.add_argument(
        "--path",
        choices=["brute", "integral", "moment", "closed", "all"],
        default="all",
        help="which route to evaluate (default: all, with agreement check)",
    )
    _common_flags(n)
    n.set_defaults(func=cmd_count)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        payload, rows, ok = args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, NotCoveredError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, rows, args)
    return 0 if ok else 4


if __name__ == "__main__":
    sys.exit(main())
