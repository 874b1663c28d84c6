"""Command-line front end: ``twistcalc <command> [--json]``.

Exit codes: 0 when a relation holds, is forced, or a sweep passes; 1 when it
fails or is infeasible; 2 on usage or input errors.  Every ``--json``
document is an envelope with the keys listed in :data:`ENVELOPE_KEYS`.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Any, Sequence

from twistcalc import characterize, formulas, freegrp, twistlang
from twistcalc.slopes import SurfaceModel
from twistcalc.verdict import Verdict

ENVELOPE_KEYS = ("command", "args", "status", "exit_code", "result", "error", "schema")
SCHEMA_VERSION = 1


class UsageError(Exception):
    """Bad input detected after argument parsing; exits with code 2."""

    def __init__(self, message: str, **info: Any):
        super().__init__(message)
        self.info = info


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _envelope(command: str, args: dict, status: str, exit_code: int, result: Any = None,
              error: dict | None = None) -> dict:
    return {"command": command, "args": args, "status": status, "exit_code": exit_code,
            "result": result, "error": error, "schema": SCHEMA_VERSION}


def _verdict_envelope(command: str, args: dict, v: Verdict) -> dict:
    return _envelope(command, args, v.status.value, v.exit_code, v.to_json())


def _verdict_text(v: Verdict, show_witness: bool = True) -> list[str]:
    lines = [v.summary()]
    if v.normalized is not None:
        j, k = v.normalized
        lines.append(f"normalized exponents: j={j}, k={k}" + (" (inverted)" if v.inverted else ""))
    if v.witness is not None and show_witness:
        lines.append(f"witness ({v.witness.kind}):")
        lines += ["  " + line for line in _render(v.witness.data)]
    return lines


def _render(data: Any) -> list[str]:
    if isinstance(data, dict) and "text" in data and "equals_one" in data:
        return [data["text"]]
    if isinstance(data, dict):
        out = []
        for key, value in data.items():
            sub = _render(value)
            if len(sub) == 1:
                out.append(f"{key}: {sub[0]}")
            else:
                out.append(f"{key}:")
                out += ["  " + line for line in sub]
        return out
    if isinstance(data, list) and data and isinstance(data[0], dict):
        out = []
        for i, item in enumerate(data, 1):
            out.append(f"[{i}]")
            out += ["  " + line for line in _render(item)]
        return out
    return [json.dumps(data) if not isinstance(data, str) else data]


def cmd_feasibility(ns) -> tuple[dict, list[str]]:
    v = characterize.lantern_feasibility(ns.j, ns.k)
    return _verdict_envelope("feasibility", {"j": ns.j, "k": ns.k}, v), _verdict_text(v)


def cmd_two_chain(ns) -> tuple[dict, list[str]]:
    if ns.k == 0:
        raise UsageError("k must be nonzero")
    v = characterize.two_chain_feasibility(ns.k)
    return _verdict_envelope("two-chain", {"k": ns.k}, v), _verdict_text(v)


def cmd_verify(ns) -> tuple[dict, list[str]]:
    args: dict = {"relation": ns.relation, "witness": ns.witness}
    try:
        if ns.relation == "lantern":
            v = freegrp.verify_lantern()
        else:
            if ns.k is None or ns.k == 0:
                raise UsageError("verify two-chain needs a nonzero --k")
            args["k"] = ns.k
            v = freegrp.verify_two_chain(ns.k)
    except freegrp.PresentationError as exc:
        raise UsageError(f"invalid presentation data: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read presentation data: {exc}") from exc
    env = _verdict_envelope("verify", args, v)
    if not ns.witness and env["result"]["witness"] is not None:
        env["result"]["witness"] = None
    return env, _verdict_text(v, show_witness=ns.witness)


def cmd_sweep(ns) -> tuple[dict, list[str]]:
    try:
        model = SurfaceModel.parse(ns.model)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if ns.max_pq < 1 or ns.max_n < 1:
        raise UsageError("--max-pq and --max-n must be at least 1")
    report = formulas.sweep(ns.formula, model, ns.max_pq, ns.max_n)
    args = {"formula": ns.formula, "model": model.value, "max_pq": ns.max_pq, "max_n": ns.max_n}
    status, code = ("pass", 0) if report.passed else ("fail", 1)
    return _envelope("sweep", args, status, code, report.to_json()), report.summary().splitlines()


def _read_expr(expr: str) -> str:
    return sys.stdin.read() if expr == "-" else expr


def cmd_eval(ns) -> tuple[dict, list[str]]:
    text = _read_expr(ns.expr)
    args = {"expr": text.strip(), "bind": ns.bind, "relation": ns.relation}
    try:
        binding = twistlang.load_binding(ns.bind)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", twistlang.ZeroExponentWarning)
            node = twistlang.parse(text)
        notes = [str(w.message) for w in caught]
        if ns.relation:
            if not isinstance(node, twistlang.RelationStatement):
                raise UsageError("--relation needs a statement of the form 'lhs = rhs'")
            v = twistlang.check_relation(node, binding)
            env = _verdict_envelope("eval", args, v)
            lines = _verdict_text(v)
        else:
            if isinstance(node, twistlang.RelationStatement):
                raise UsageError("expression is a relation; pass --relation to check it")
            value = twistlang.evaluate(node, binding)
            rendered = twistlang.render_value(value, binding)
            env = _envelope("eval", args, "value", 0, {"expr": twistlang.pretty(node), "value": rendered})
            lines = [twistlang.pretty(node) + " =", *("  " + line for line in _render(rendered))]
    except twistlang.ParseError as exc:
        raise UsageError(str(exc), line=exc.line, column=exc.column, expected=sorted(exc.expected)) from exc
    except (twistlang.BindingError, freegrp.PresentationError) as exc:
        raise UsageError(str(exc)) from exc
    if notes:
        env["result"]["warnings"] = notes
        lines = [f"warning: {n}" for n in notes] + lines
    return env, lines


def cmd_chain_order(ns) -> tuple[dict, list[str]]:
    if not 2 <= ns.n <= 8:
        raise UsageError("--n must be between 2 and 8")
    r = characterize.chain_homology_order(ns.n)
    status, code = ("matches", 0) if r.matches else ("mismatch", 1)
    sign = "I" if r.sign == 1 else "-I"
    lines = [
        f"{ns.n}-chain: (T_a1 ... T_a{ns.n})_* has order {r.order} on homology",
        f"power {r.sign_order} is {sign}",
        f"expected exponent {r.expected_exponent}: {'matches' if r.matches else 'does not match'}",
    ]
    return _envelope("chain-order", {"n": ns.n}, status, code, r.to_json()), lines


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twistcalc", description="Exact checks of Dehn twist relations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON envelope")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("feasibility", parents=[common], help="can T_x^j T_y^k be a multitwist?")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(run=cmd_feasibility)

    s = sub.add_parser("two-chain", parents=[common], help="can (T_x T_y)^k be a multitwist?")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(run=cmd_two_chain)

    s = sub.add_parser("verify", parents=[common], help="verify a relation in the free-group model")
    s.add_argument("relation", choices=["lantern", "two-chain"])
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--witness", action="store_true", help="show generator images")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="exhaustively check an intersection formula")
    s.add_argument("--formula", type=int, choices=[1, 2, 3], required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--max-pq", type=int, required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.set_defaults(run=cmd_sweep)

    s = sub.add_parser("eval", parents=[common], help="evaluate a twist word or relation")
    s.add_argument("expr", help="expression, or - to read stdin")
    s.add_argument("--bind", required=True, help="binding file or shipped binding name")
    s.add_argument("--relation", action="store_true")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("chain-order", parents=[common], help="order of an n-chain product on homology")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(run=cmd_chain_order)
    return p


def _wants_json(argv: Sequence[str]) -> bool:
    return "--json" in argv


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = _wants_json(argv)
    command = next((a for a in argv if not a.startswith("-")), "")
    try:
        ns = build_parser().parse_args(argv)
        command = ns.command
        env, lines = ns.run(ns)
    except UsageError as exc:
        env = _envelope(command, {}, "error", 2, error={"message": str(exc), **exc.info})
        if as_json:
            print(json.dumps(env, sort_keys=True))
        else:
            print(f"twistcalc: error: {exc}", file=sys.stderr)
        return 2
    if as_json:
        print(json.dumps(env, sort_keys=True))
    else:
        print("\n".join(lines))
    return env["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
