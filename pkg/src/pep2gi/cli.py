"""Command-line front end.

Every command writes one JSON document (or an edge list) to stdout or
--out.  Exit codes: 0 Equivalent / success, 1 NotEquivalent, 2
NotReducible, 3 input or runtime error, 4 self-test failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import census as cen
from .code import LinearCode, Permutation, StructureParams, apply_permutation, classify, code_make
from .field import FieldSpec, field_make, field_of_order
from .graph import WeightedDigraph, export_unweighted, wdg_iso
from .pep import PepTag, pep_brute_force, pep_solve
from .projector import projector

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_NOT_REDUCIBLE = 2
EXIT_ERROR = 3
EXIT_SELF_TEST_FAILED = 4

VERDICT_EXIT = {
    PepTag.EQUIVALENT: EXIT_OK,
    PepTag.NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT,
    PepTag.NOT_REDUCIBLE: EXIT_NOT_REDUCIBLE,
}

DEFAULT_SEED = 20240611


class CliError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_code(path: str) -> LinearCode:
    data = _read_json(path)
    try:
        return LinearCode.from_json(data)
    except (KeyError, TypeError) as exc:
        raise CliError(f"{path}: malformed code file ({exc!r})") from None
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def load_graph(path: str) -> WeightedDigraph:
    data = _read_json(path)
    try:
        return WeightedDigraph.from_json(data)
    except (KeyError, TypeError) as exc:
        raise CliError(f"{path}: malformed graph file ({exc!r})") from None
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def _field_from_args(args) -> FieldSpec:
    if args.modulus:
        coeffs = [int(c) for c in args.modulus.split(",")]
        q = args.q
        p = 2
        while q % p:
            p += 1
        m = len(coeffs) - 1
        if p**m != q:
            raise CliError(f"modulus of degree {m} does not define F_{q}")
        return field_make(p, m, tuple(coeffs))
    return field_of_order(args.q)


def _params(C: LinearCode, a: int, b: int) -> StructureParams | None:
    if a == 1 and b == 0:
        return None
    return StructureParams.of(C.field, a, b, C.n)


# -- commands ------------------------------------------------------------------


def cmd_solve(args) -> tuple[object, int]:
    C1, C2 = load_code(args.code1), load_code(args.code2)
    if C1.field != C2.field:
        raise CliError("codes are over different fields")
    if C1.n != C2.n:
        raise CliError(f"codes have different lengths: {C1.n} vs {C2.n}")
    verdict = pep_solve(C1, C2)
    return verdict.to_json(), VERDICT_EXIT[verdict.tag]


def cmd_classify(args) -> tuple[object, int]:
    return classify(load_code(args.code)).to_json(), EXIT_OK


def cmd_projector(args) -> tuple[object, int]:
    C = load_code(args.code)
    return projector(C, _params(C, args.a, args.b)).to_json(), EXIT_OK


def cmd_iso(args) -> tuple[object, int]:
    A1, A2 = load_graph(args.graph1), load_graph(args.graph2)
    pi = wdg_iso(A1, A2)
    out = {"isomorphic": pi is not None, "permutation": pi.to_json() if pi else None}
    return out, EXIT_OK if pi is not None else EXIT_NOT_EQUIVALENT


def cmd_count(args) -> tuple[object, int]:
    return cen.closed_form_table(args.n, args.k, _field_from_args(args)), EXIT_OK


def cmd_census(args) -> tuple[object, int]:
    field = _field_from_args(args)
    if args.eps is not None and (args.a is not None or args.b is not None):
        raise CliError("--eps and --a/--b are mutually exclusive")
    bilinear = None
    if args.eps is not None:
        bilinear = args.eps
    elif args.a is not None or args.b is not None:
        a = 1 if args.a is None else args.a
        b = 0 if args.b is None else args.b
        bilinear = StructureParams.of(field, a, b, args.n)
    if args.compare and bilinear is not None:
        raise CliError("--compare is defined for the standard inner product only")
    report = cen.grassmannian_census(args.n, args.k, field, bilinear, cap=args.cap, threads=args.threads)
    if args.compare:
        diff = cen.compare_census(report, field)
        return diff, EXIT_OK if diff["pass"] else EXIT_NOT_EQUIVALENT
    return report.to_json(), EXIT_OK


def cmd_export_graph(args) -> tuple[object, int]:
    C = load_code(args.code)
    A = WeightedDigraph(projector(C, _params(C, args.a, args.b)).mat)
    plain = export_unweighted(A)
    if args.format == "json":
        return plain.to_json(), EXIT_OK
    return plain.to_edge_list(), EXIT_OK


def _example_pair() -> tuple[LinearCode, LinearCode]:
    F3 = field_of_order(3)
    C = code_make(F3, [[1, 1, 0, 0], [0, 1, 1, 0]])
    return C, code_make(F3, [[1, 1, 0, 0], [1, 0, 1, 0]])


def self_test(seed: int = DEFAULT_SEED, pairs: int = 40) -> dict:
    """Quick end-to-end checks; the full suites live in tests/."""
    checks = []

    def record(name: str, ok: bool) -> None:
        checks.append({"check": name, "pass": bool(ok)})

    C, Cp = _example_pair()
    v = pep_solve(C, Cp)
    record("worked example solves with b = 1", v.tag is PepTag.EQUIVALENT and v.used_b == 1)
    record("worked example classifies HullOneReducible", classify(C).tag.value == "HullOneReducible")
    F3 = field_of_order(3)
    record("count(4, 2, 3)", cen.closed_form_table(4, 2, F3) == {"n": 4, "k": 2, "q": 3, "L": 90, "K": 24, "L_minus": 90, "gi_reducible": 114})
    r = cen.grassmannian_census(4, 2, F3)
    record("census(4, 2, 3)", (r.total_subspaces, r.lcd_count, r.gi_reducible_count) == (130, 90, 114))
    rng = random.Random(seed)
    agree = True
    for _ in range(pairs):
        q = rng.choice([3, 5])
        f = field_of_order(q)
        n = rng.randint(3, 6)
        k = rng.randint(1, n - 1)
        C1 = code_make(f, [[rng.randrange(q) for _ in range(n)] for _ in range(k)])
        if rng.random() < 0.5:
            img = list(range(n))
            rng.shuffle(img)
            C2 = apply_permutation(C1, Permutation(tuple(img)))
        else:
            C2 = code_make(f, [[rng.randrange(q) for _ in range(n)] for _ in range(k)])
        verdict = pep_solve(C1, C2)
        if verdict.tag is PepTag.NOT_REDUCIBLE:
            continue
        oracle = pep_brute_force(C1, C2)
        agree &= (verdict.tag is PepTag.EQUIVALENT) == (oracle is not None)
    record(f"solver agrees with brute force on {pairs} seeded pairs", agree)
    return {"seed": seed, "checks": checks, "pass": all(c["pass"] for c in checks)}


def cmd_self_test(args) -> tuple[object, int]:
    out = self_test(args.seed)
    return out, EXIT_OK if out["pass"] else EXIT_SELF_TEST_FAILED


# -- output --------------------------------------------------------------------


def _pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val and not _is_flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.append(_pretty(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if obj and all(_is_flat_list(r) for r in obj):
            width = max(len(str(x)) for r in obj for x in r) if any(obj) else 1
            return "\n".join(pad + " ".join(str(x).rjust(width) for x in r) for r in obj)
        return "\n".join(f"{pad}- " + _pretty(item, indent + 1).lstrip() for item in obj)
    return pad + _scalar(obj)


def _is_flat_list(val) -> bool:
    return isinstance(val, list) and all(not isinstance(x, (list, dict)) for x in val)


def _scalar(val) -> str:
    if isinstance(val, list):
        return "[" + ", ".join(str(x) for x in val) + "]"
    if val is None:
        return "-"
    return str(val)


def render(obj, pretty: bool) -> str:
    if isinstance(obj, str):
        return obj
    if pretty:
        return _pretty(obj) + "\n"
    return json.dumps(obj) + "\n"


def _positive(text: str) -> int:
    val = int(text)
    if val <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--pretty", action="store_true", help="human-readable tables instead of JSON")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    common.add_argument("-v", "--verbose", action="store_true", help="print tracebacks on error")

    parser = argparse.ArgumentParser(prog="pep2gi", description="Code equivalence via projector graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="decide permutation equivalence of two codes")
    p.add_argument("code1")
    p.add_argument("code2")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", parents=[common], help="GI-reducibility class of a code")
    p.add_argument("code")
    p.set_defaults(func=cmd_classify)

    def ab(p):
        p.add_argument("--a", type=int, default=1)
        p.add_argument("--b", type=int, default=0)

    p = sub.add_parser("projector", parents=[common], help="projector matrix under aI + bJ")
    p.add_argument("code")
    ab(p)
    p.set_defaults(func=cmd_projector)

    p = sub.add_parser("iso", parents=[common], help="isomorphism of two weighted digraphs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.set_defaults(func=cmd_iso)

    def nkq(p):
        p.add_argument("n", type=int)
        p.add_argument("k", type=int)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--modulus", help="comma-separated coefficients, constant term first")

    p = sub.add_parser("count", parents=[common], help="closed-form counts")
    nkq(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("census", parents=[common], help="exhaustive subspace census")
    nkq(p)
    p.add_argument("--eps", type=int, choices=[1, -1], help="use diag(1, ..., 1, tau_eps)")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--compare", action="store_true", help="diff against the closed forms")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--cap", type=_positive, help=f"subspace cap (default ${cen.CENSUS_CAP_ENV} or 10^7)")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("export-graph", parents=[common], help="unweighted graph of a code's projector")
    p.add_argument("code")
    ab(p)
    p.add_argument("--format", choices=["edgelist", "json"], default="edgelist")
    p.set_defaults(func=cmd_export_graph)

    p = sub.add_parser("self-test", parents=[common], help="quick end-to-end checks")
    p.set_defaults(func=cmd_self_test)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.func(args)
    except (CliError, ValueError, ArithmeticError, cen.CensusCapExceeded) as exc:
        if args.verbose:
            raise
        print(f"pep2gi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = render(out, args.pretty)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
