"""JSON-in, JSON-out command line front end.

Exit codes: 0 success, 2 invalid input, 3 insufficient precision, exhausted
budget, or an oracle cross-check mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import jsonschema

from . import brace, isoclinism, latform, oracle
from .errors import (
    BudgetExceeded,
    InsufficientPrecision,
    NoNondegenerateLift,
    ZpBraceError,
)
from .latform import GramMatrix
from .padic import PAdicCtx

DEFAULT_N = 8

_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_prime = {"type": "integer", "minimum": 3}
_pos = {"type": "integer", "minimum": 1}

SCHEMAS: dict[str, dict] = {
    "gram": {
        "type": "object",
        "required": ["p", "entries"],
        "properties": {"p": _prime, "N": _pos, "entries": _matrix},
    },
    "iso": {
        "type": "object",
        "required": ["p", "theta1", "theta2"],
        "properties": {"p": _prime, "N": _pos, "theta1": _matrix, "theta2": _matrix},
    },
    "verify": {
        "type": "object",
        "required": ["p", "theta"],
        "properties": {
            "p": _prime,
            "N": _pos,
            "theta": _matrix,
            "mode": {"enum": ["torsion_free", "torsion"]},
            "scope": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ["exhaustive", "sampled"]},
                    "k": _pos,
                    "count": _pos,
                },
            },
        },
    },
    "torsion": {
        "type": "object",
        "required": ["p", "t", "entries"],
        "properties": {
            "p": _prime,
            "t": _pos,
            "entries": _matrix,
            "strategy": {"enum": ["plain", "nondegenerate"]},
            "h": _pos,
        },
    },
}
SCHEMAS["isoclinic"] = {
    "type": "object",
    "required": ["form1", "form2"],
    "properties": {"form1": SCHEMAS["torsion"], "form2": SCHEMAS["torsion"]},
}


def _load(args, schema: str) -> dict:
    text = open(args.input).read() if args.input and args.input != "-" else sys.stdin.read()
    payload = json.loads(text)
    jsonschema.validate(payload, SCHEMAS[schema])
    return payload


def _precision(args, payload: dict, default: int = DEFAULT_N) -> int:
    if args.precision is not None:
        return args.precision
    return payload.get("N", default)


def _gram(payload: dict, N: int, key: str = "entries") -> GramMatrix:
    return GramMatrix.from_rows(payload["p"], N, payload[key])


def _torsion_form(payload: dict) -> isoclinism.TorsionForm:
    return isoclinism.TorsionForm.from_rows(payload["p"], payload["t"], payload["entries"])


def _check(out: dict, agree: bool | None) -> None:
    out["cross_check"] = "skipped" if agree is None else ("ok" if agree else "mismatch")


# -- commands ----------------------------------------------------------------

def cmd_jordan(args) -> dict:
    payload = _load(args, "gram")
    G = _gram(payload, _precision(args, payload))
    inv, wit = latform.jordan_split(G)
    out = {"p": G.ctx.p, "N": G.ctx.N, "invariant": inv.to_json(), "witness": wit.to_json()}
    if args.oracle:
        _check(out, oracle.bf_jordan(G) == inv)
    return out


def cmd_disc(args) -> dict:
    payload = _load(args, "gram")
    G = _gram(payload, _precision(args, payload))
    v, d = latform.discriminant(G)
    out = {"p": G.ctx.p, "N": G.ctx.N, "valuation": v, "disc": None if d is None else d.value}
    if args.oracle:
        ref = oracle.bf_jordan(G)
        if ref.radical_rank_at_precision:
            _check(out, v is None)
        else:
            rv = sum(b.scale * b.rank for b in ref.blocks)
            rd = latform.SquareClass.SQUARE
            for b in ref.blocks:
                rd = rd * b.disc
            _check(out, rv >= G.ctx.N and v is None or (rv, rd) == (v, d))
    return out


def cmd_normal_form(args) -> dict:
    payload = _load(args, "gram")
    G = _gram(payload, _precision(args, payload))
    nf = latform.unimodular_normal_form(G)
    out = {"p": G.ctx.p, "N": G.ctx.N, "normal_form": nf.to_json()["entries"]}
    if args.oracle:
        _check(out, oracle.bf_jordan(G) == latform.jordan_invariant(nf))
    return out


def cmd_iso(args) -> dict:
    payload = _load(args, "iso")
    N = _precision(args, payload)
    mode = brace.TorsionFree(N)
    A1 = brace.from_theta(_gram(payload, N, "theta1"), mode)
    A2 = brace.from_theta(_gram(payload, N, "theta2"), mode)
    wit = brace.isomorphic(A1, A2)
    out: dict[str, Any] = {"p": payload["p"], "N": N, "epsilon": None}
    if wit is not None:
        out.update(epsilon=wit.epsilon, transform=[list(r) for r in wit.transform])
    if args.oracle:
        # unimodular forms over Z_p are classified by their reduction mod p,
        # which is the only case the exhaustive search can reach
        p = A1.ctx.p
        if all(latform.discriminant(A.gram().at_precision(1))[0] == 0 for A in (A1, A2)):
            try:
                found = oracle.bf_congruent(A1.theta, A2.theta, p, 1)
                agree = found == (wit is not None)
            except BudgetExceeded:
                agree = None
        else:
            agree = None
        _check(out, agree)
    return out


def cmd_count_unimodular(args) -> dict:
    out = {"n": args.n, "d": args.d, "classes": brace.count_unimodular_classes(args.n, args.d)}
    if args.oracle:
        m, ctx = args.n - args.d, PAdicCtx(3, 2)
        I = GramMatrix.diagonal(ctx.p, ctx.N, [1] * m)
        Q = GramMatrix.diagonal(ctx.p, ctx.N, [1] * (m - 1) + [ctx.q])
        merged = latform.congruent_up_to_unit(I, Q) is not None
        _check(out, out["classes"] == (1 if merged else 2))
    return out


def cmd_verify(args) -> dict:
    payload = _load(args, "verify")
    mode_name = payload.get("mode", "torsion_free")
    N = _precision(args, payload)
    mode = brace.TorsionFree(N) if mode_name == "torsion_free" else brace.Torsion(N)
    A = brace.from_theta(_gram(payload, N, "theta"), mode)
    sc = payload.get("scope", {"kind": "sampled"})
    if sc["kind"] == "exhaustive":
        scope = brace.Exhaustive(sc.get("k"))
    else:
        scope = brace.Sampled(sc.get("count", 1000), args.seed)
    rep = brace.verify_brace(A, scope)
    out = {"algebra": A.to_json(), "report": rep.to_json()}
    if args.oracle:
        try:
            table = oracle.FiniteAlgebraTable.from_product(
                A.ctx.p, A.ctx.N, A.n, lambda a, b: brace.dot(A, a, b))
            agree = oracle.bf_verify_algebra(table).all_pass == rep.all_pass
        except BudgetExceeded:
            agree = None
        _check(out, agree)
    return out


def cmd_stem(args) -> dict:
    payload = _load(args, "torsion")
    S = isoclinism.stem(_torsion_form(payload))
    out = S.to_json()
    if args.oracle:
        try:
            table = oracle.FiniteAlgebraTable.from_product(S.form.p, S.t, S.quotient_rank + 1, S.dot)
            _check(out, oracle.bf_verify_algebra(table).all_pass)
        except BudgetExceeded:
            _check(out, None)
    return out


def cmd_lift(args) -> dict:
    payload = _load(args, "torsion")
    F = _torsion_form(payload)
    N = _precision(args, payload, F.t + isoclinism.PRECISION_MARGIN)
    if payload.get("strategy", "plain") == "plain":
        strategy = isoclinism.Plain()
    else:
        strategy = isoclinism.Nondegenerate(payload.get("h", F.t))
    C = isoclinism.lift(F, N, strategy)
    inv = latform.jordan_invariant(C.gram_lift)
    out = {"covering": C.to_json(), "jordan": inv.to_json()}
    if args.oracle:
        _check(out, C.reduces_to(F) and oracle.bf_jordan(C.gram_lift) == inv)
    return out


def _oracle_invariant(F: isoclinism.TorsionForm, N: int):
    C = isoclinism.lift(F, N, isoclinism.Nondegenerate(F.t + 1))
    return isoclinism.canonical_blocks(oracle.bf_jordan(C.gram_lift).truncated(F.t))


def cmd_invariant(args) -> dict:
    payload = _load(args, "torsion")
    F = _torsion_form(payload)
    N = _precision(args, payload, F.t + isoclinism.PRECISION_MARGIN)
    inv = isoclinism.isoclinism_invariant(F, N)
    out = {"p": F.p, "t": F.t, "invariant": inv.to_json(), "surjective": F.surjective}
    if args.oracle:
        _check(out, _oracle_invariant(F, N) == inv.blocks)
    return out


def cmd_isoclinic(args) -> dict:
    payload = _load(args, "isoclinic")
    F1, F2 = _torsion_form(payload["form1"]), _torsion_form(payload["form2"])
    ans = isoclinism.isoclinic(F1, F2)
    out = {"isoclinic": ans}
    if args.oracle:
        if F1.t != F2.t:
            _check(out, not ans)
        else:
            N = _precision(args, {}, F1.t + isoclinism.PRECISION_MARGIN)
            _check(out, (_oracle_invariant(F1, N) == _oracle_invariant(F2, N)) == ans)
    return out


def cmd_count(args) -> dict:
    out: dict[str, Any] = {"formula": isoclinism.count_isoclinism_formula(args.n, args.t)}
    if args.enumerate or args.oracle:
        out["enumerate"] = isoclinism.count_isoclinism_enumerate(args.n, args.t)
    if args.min_scale_zero:
        out["min_scale_zero"] = isoclinism.count_isoclinism_enumerate(args.n, args.t, True)
    if args.oracle:
        _check(out, out["formula"] == out["enumerate"])
    return out


COMMANDS = {
    "jordan": cmd_jordan,
    "disc": cmd_disc,
    "normal-form": cmd_normal_form,
    "iso": cmd_iso,
    "count-unimodular": cmd_count_unimodular,
    "verify": cmd_verify,
    "stem": cmd_stem,
    "lift": cmd_lift,
    "invariant": cmd_invariant,
    "isoclinic": cmd_isoclinic,
    "count": cmd_count,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision N")
    common.add_argument("--oracle", action="store_true", help="cross-check with brute force")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--input", default="-", help="JSON payload file (default: stdin)")

    parser = argparse.ArgumentParser(prog="zpbrace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "count-unimodular":
            sp.add_argument("n", type=int)
            sp.add_argument("d", type=int)
        elif name == "count":
            sp.add_argument("n", type=int)
            sp.add_argument("t", type=int)
            sp.add_argument("--enumerate", action="store_true")
            sp.add_argument("--min-scale-zero", action="store_true")
    return parser


def _emit(obj: dict, stream) -> None:
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        out = COMMANDS[args.command](args)
    except (InsufficientPrecision, BudgetExceeded, NoNondegenerateLift) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, stdout)
        return 3
    except (json.JSONDecodeError, jsonschema.ValidationError, ZpBraceError, ValueError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        _emit({"error": {"type": type(exc).__name__, "message": msg}}, stdout)
        return 2
    _emit(out, stdout)
    return 3 if out.get("cross_check") == "mismatch" else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
