"""Command line front end.

Exit status: 0 when every check passed, 1 when a checked claim failed,
2 for usage errors and exhausted budgets.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any

from isingbraid import analysis, braid
from isingbraid.braid import BraidSpec, BraidWordError, braid_generator, braid_word_matrix, parse_braid_word
from isingbraid.cyclotomic import UnitaryMatrix
from isingbraid.engine import Budget, BudgetExceeded, IncompleteClosure
from isingbraid.pauli import matrix_to_pauli

SCHEMA = 1
EXIT_OK, EXIT_CLAIM, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("isingbraid")


def _parity(text: str) -> int:
    table = {"+": 1, "-": -1, "+1": 1, "-1": -1, "plus": 1, "minus": -1}
    if text not in table:
        raise argparse.ArgumentTypeError(f"parity must be + or -, got {text!r}")
    return table[text]


def _sign(p: int) -> str:
    return "+" if p > 0 else "-"


def _emit(payload: dict, fmt: str, csv_rows: list[dict] | None = None, pretty: str | None = None) -> None:
    if fmt == "json":
        payload = {"schema": SCHEMA, **payload}
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    elif fmt == "csv":
        rows = csv_rows if csv_rows is not None else [payload]
        buf = io.StringIO()
        fields = list(rows[0].keys()) if rows else []
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v, ensure_ascii=False) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write((pretty if pretty is not None else json.dumps(payload, indent=2, ensure_ascii=False)) + "\n")


def _matrix_payload(u: UnitaryMatrix) -> dict:
    p = matrix_to_pauli(u)
    return {"dim": u.dim, "matrix": u.to_json(), "symbolic": u.pretty(), "pauli": str(p) if p else None}


def _pretty_matrix(u: UnitaryMatrix) -> str:
    cells = u.pretty()
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def _budget(args) -> Budget:
    return Budget.from_env(args.budget_elems, args.budget_mem)


def _parities(args) -> list[int]:
    return [1, -1] if getattr(args, "both", False) else [args.parity]


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args) -> int:
    u = braid_generator(BraidSpec(args.n, args.parity, args.j))
    payload = {"command": "gen", "n": args.n, "j": args.j, "parity": _sign(args.parity), **_matrix_payload(u)}
    _emit(payload, args.format, pretty=f"B_{args.j} (n={args.n}, parity {_sign(args.parity)}):\n" + _pretty_matrix(u))
    return EXIT_OK


def cmd_word(args) -> int:
    word = parse_braid_word(args.word)
    u = braid_word_matrix(word, args.n, args.parity)
    payload = {
        "command": "word",
        "n": args.n,
        "parity": _sign(args.parity),
        "word": braid.format_braid_word(word),
        "identity": u == UnitaryMatrix.identity(u.dim),
        **_matrix_payload(u),
    }
    _emit(payload, args.format, pretty=_pretty_matrix(u))
    return EXIT_OK


def cmd_relations(args) -> int:
    rows, ok = [], True
    for parity in _parities(args):
        for r in braid.check_braid_relations(args.n, parity):
            rows.append({"parity": _sign(parity), "kind": r.kind, "j": r.j, "k": r.k, "holds": r.holds})
            ok &= r.holds
    text = "\n".join(
        f"[{'pass' if r['holds'] else 'FAIL'}] {r['parity']} {r['kind']} B_{r['j']},B_{r['k']}" for r in rows
    )
    _emit({"command": "relations", "n": args.n, "all_pass": ok, "relations": rows}, args.format, rows, text)
    return EXIT_OK if ok else EXIT_CLAIM


def cmd_monodromy(args) -> int:
    reports = [analysis.monodromy_check(args.n, p, _budget(args), args.threads) for p in _parities(args)]
    ok = all(r.equal for r in reports)
    rows = [
        {"parity": _sign(r.parity), "monodromy_order": r.monodromy_order, "pauli_order": r.pauli_order, "equal": r.equal}
        for r in reports
    ]
    text = "\n".join(
        f"n={args.n} parity {row['parity']}: |<A_ij>| = {row['monodromy_order']}, |P_n| = {row['pauli_order']} -> "
        + ("equal" if row["equal"] else "DIFFERENT")
        for row in rows
    )
    payload = {"command": "monodromy", "n": args.n, "equal": ok, "reports": [r.to_dict() for r in reports]}
    for r in payload["reports"]:
        r["parity"] = _sign(r["parity"])
    _emit(payload, args.format, rows, text)
    return EXIT_OK if ok else EXIT_CLAIM


def cmd_table1(args) -> int:
    up_to = args.enumerate_up_to
    if not 0 <= up_to <= args.n_max:
        raise argparse.ArgumentTypeError("--enumerate-up-to must lie in 0..n-max")
    rows = analysis.table1(args.n_max, up_to, args.unitary_up_to, _budget(args), args.threads)
    dicts = [r.to_dict() for r in rows]
    lines = [f"{'n':>2} | {'|B/Z4|':>22} | {'|PC_n|':>30} | braid method / clifford method"]
    for r in rows:
        approx = f"≈{r.braid_projective_order:.1e}" if r.braid_projective_order > 10**8 else ""
        lines.append(
            f"{r.n:>2} | {r.braid_projective_order:>22} | {r.clifford_projective_order:>30} | "
            f"{r.braid_method} / {r.clifford_method}{'' if r.agreement else '  MISMATCH'}"
            f"{'' if r.complete else '  INCOMPLETE'} {approx}"
        )
    for d in dicts:
        d["braid_approx"] = f"{d['braid_projective_order']:.1e}"
        d["clifford_approx"] = f"{d['clifford_projective_order']:.1e}"
    payload = {"command": "table1", "n_max": args.n_max, "enumerate_up_to": up_to, "rows": dicts}
    _emit(payload, args.format, [{k: v for k, v in d.items() if k != "notes"} for d in dicts], "\n".join(lines))
    if not all(r.complete for r in rows):
        return EXIT_USAGE
    return EXIT_OK if all(r.agreement for r in rows) else EXIT_CLAIM


def cmd_ratio(args) -> int:
    series = analysis.ratio_series(args.n_max)
    second = analysis.second_differences(series)
    ok = all(v > 0 for _, v in second)
    rows = [{"n": n, "log10_ratio": f"{v:.6f}"} for n, v in series]
    payload = {
        "command": "ratio",
        "n_max": args.n_max,
        "series": rows,
        "second_differences": [{"n": n, "value": f"{v:.6f}"} for n, v in second],
        "quadratic_growth": ok,
    }
    text = "\n".join(f"{r['n']:>3} {r['log10_ratio']}" for r in rows)
    _emit(payload, args.format, rows, text)
    return EXIT_OK if ok else EXIT_CLAIM


def cmd_swap(args) -> int:
    if args.n > 4 and not args.unitary:
        raise argparse.ArgumentTypeError("symplectic SWAP test supports n <= 4")
    rep = analysis.swap_test(args.n, args.i, args.j, args.parity, args.unitary, _budget(args), args.threads)
    d = rep.to_dict()
    text = (
        f"SWAP({args.i},{args.j}) on n={args.n}: {rep.verdict} "
        f"[{rep.route} closure of order {rep.closure_order}]\nnote: {rep.caveat}"
    )
    _emit({"command": "swap", **d}, args.format, pretty=text)
    return EXIT_OK if d["matches_claim"] else EXIT_CLAIM


def cmd_clifford_check(args) -> int:
    word = parse_braid_word(args.word) if args.word is not None else None
    out: list[dict[str, Any]] = []
    for parity in _parities(args):
        for rec in analysis.clifford_check(args.n, parity, word):
            out.append({"parity": _sign(parity), **rec})
    ok = all(r["clifford"] and r.get("sp_check", False) for r in out)
    text = "\n".join(
        f"[{'pass' if r['clifford'] else 'FAIL'}] {r['parity']} {r['name']}: "
        + (" ".join(r["symplectic"]) if r["clifford"] else "not Clifford")
        for r in out
    )
    _emit({"command": "clifford-check", "n": args.n, "all_clifford": ok, "results": out}, args.format, out, text)
    return EXIT_OK if ok else EXIT_CLAIM


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isingbraid", description="Ising braid group analysis")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_required=True):
        sp.add_argument("--n", type=int, required=n_required, help="number of qubits")
        sp.add_argument("--parity", type=_parity, default=1, help="representation parity (+ or -)")
        sp.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")

    def engine_flags(sp):
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--budget-elems", type=int, default=None)
        sp.add_argument("--budget-mem", type=float, default=None, help="memory cap in MB")
        sp.add_argument("--store-elements", action="store_true")

    s = sub.add_parser("gen", help="print a braid generator")
    common(s)
    s.add_argument("--j", type=int, required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("word", help="evaluate a braid word such as 's1 S2 s3'")
    common(s)
    s.add_argument("word")
    s.set_defaults(func=cmd_word)

    s = sub.add_parser("relations", help="check braid relations")
    common(s)
    s.add_argument("--both", action="store_true")
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("monodromy", help="compare the monodromy closure with the Pauli group")
    common(s)
    engine_flags(s)
    s.add_argument("--both", action="store_true")
    s.set_defaults(func=cmd_monodromy)

    s = sub.add_parser("table1", help="projective braid image vs projective Clifford orders")
    s.add_argument("--n-max", type=int, default=5)
    s.add_argument("--enumerate-up-to", type=int, default=2)
    s.add_argument("--unitary-up-to", type=int, default=2, help="largest n enumerated as unitaries")
    s.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    engine_flags(s)
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("ratio", help="log10 of the Clifford/braid order ratio")
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    s.set_defaults(func=cmd_ratio)

    s = sub.add_parser("swap", help="is SWAP(i, j) realizable by braiding?")
    common(s)
    engine_flags(s)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--unitary", action="store_true", help="test the unitary itself (projective closure)")
    s.set_defaults(func=cmd_swap)

    s = sub.add_parser("clifford-check", help="Clifford test and symplectic images")
    common(s)
    s.add_argument("--word", default=None)
    s.add_argument("--both", action="store_true")
    s.set_defaults(func=cmd_clifford_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (BudgetExceeded, IncompleteClosure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BraidWordError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
