"""Command-line front end.

Exit codes: 0 success, 1 a check came out false, 2 usage or structural
error, 3 search budget exhausted.  Results go to stdout, diagnostics to
stderr.  JSON output carries ``"schema": 1`` and is byte-stable.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import checks
from .clone import BudgetExceeded, GeneratorSet, commutant, generate_clone
from .dadic import DadicFraction, dadic_arith
from .matrix import kron_first, kron_second, matrix_from_json
from .optable import OpTable
from .ordered import (PreorderedRing, SampledMap, affine_extension_check, order_unit_exponent,
                      phi_w, w_of_phi)
from .rig import ExactRig, FiniteRig, rig_from_json, rig_to_json, standard_rig, validate_rig
from .theories import parse_theory, theory_generators

SCHEMA = 1
OK, CHECK_FAILED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; turn that into an exception so main() owns the exit code
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_json(text: str):
    """Inline JSON, or the contents of a file when ``text`` names one."""
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not JSON and not a file: {text[:60]!r} ({exc})") from exc


def _rig(args):
    if getattr(args, "table", None):
        return rig_from_json(_load_json(args.table))
    if args.rig is None:
        return None
    return standard_rig(args.rig)


def _ops_from_doc(doc) -> list[OpTable]:
    if isinstance(doc, dict) and "generators" in doc:
        doc = doc["generators"]
    if isinstance(doc, dict):
        doc = [doc]
    if not isinstance(doc, list):
        raise UsageError("generators must be an operation document or a list of them")
    return [OpTable.from_json(d) for d in doc]


def _generators(text: str, rig) -> GeneratorSet:
    """Resolve ``--gens``: theory name, then file path, then inline JSON."""
    name = text.partition("@")[0]
    if re.fullmatch(r"[a-z][a-z-]*", name) and not os.path.isfile(text):
        t = parse_theory(text, default_rig=rig)
        if rig is not None and t.k != rig.size:
            raise UsageError(f"theory {t} lives on {t.k} elements, --rig has {rig.size}")
        return theory_generators(t)
    ops = _ops_from_doc(_load_json(text))
    if rig is not None:
        k = rig.size
    elif ops:
        k = ops[0].k
    else:
        raise UsageError("an empty generator list needs --rig or --carrier")
    return GeneratorSet(k, tuple(ops))


def _carrier_rig(args):
    rig = _rig(args)
    if rig is not None and not isinstance(rig, FiniteRig):
        raise UsageError(f"{rig.label} is infinite; operation tables need a finite carrier")
    if args.carrier is not None:
        if rig is not None and rig.size != args.carrier:
            raise UsageError("--carrier disagrees with --rig")
        # a bare carrier only fixes the size; theories still need a named rig
        return rig, args.carrier
    return rig, (rig.size if rig is not None else None)


def cmd_rig_validate(args):
    rig = _rig(args)
    if rig is None:
        raise UsageError("rig-validate needs --rig or --table")
    if not isinstance(rig, FiniteRig):
        # exact rigs satisfy the axioms by construction
        return {"rig": rig.label, "finite": False, "ok": True, "failures": []}, OK
    rep = validate_rig(rig)
    doc = {"rig": rig_to_json(rig), "finite": True, **rep.to_json()}
    if rep.ok:
        doc.update(is_ring=rig.is_ring, is_commutative=rig.is_commutative)
    return doc, OK if rep.ok else CHECK_FAILED


def cmd_kron(args):
    rig = _rig(args)
    X = matrix_from_json(_load_json(args.x), rig)
    Y = matrix_from_json(_load_json(args.y), rig)
    K = kron_first(X, Y) if args.which == "first" else kron_second(X, Y)
    doc = K.to_json()
    return {"which": args.which, **doc}, OK


def _slice_command(args, fn):
    rig, k = _carrier_rig(args)
    gens = _generators(args.gens, rig)
    if k is not None and gens.k != k:
        raise UsageError(f"generators live on {gens.k} elements, carrier is {k}")
    if args.arity < 0:
        raise UsageError("--arity must be >= 0")
    return gens, fn(gens)


def cmd_commutant(args):
    try:
        gens, sl = _slice_command(
            args, lambda g: commutant(g, args.arity, budget=args.budget))
    except BudgetExceeded as exc:
        partial = {"complete": False, "budget": exc.budget, "visited": exc.visited,
                   "depth": exc.depth, "found": exc.found}
        return partial, BUDGET
    return _slice_doc(gens, sl), OK


def cmd_clone_gen(args):
    gens, sl = _slice_command(args, lambda g: generate_clone(g, args.arity))
    return _slice_doc(gens, sl), OK


def _slice_doc(gens, sl) -> dict:
    doc = sl.to_json()
    return {"carrier": doc.pop("carrier"), "arity": doc.pop("arity"),
            "generators": [list(g.outputs) for g in gens], **doc}


_PARAM = re.compile(r"^([a-z-]+)\((\d+)\)$")


def cmd_check(args):
    name = args.name
    m = _PARAM.match(name)
    if m:
        name = m.group(1)
        if name == "dadic-identity":
            args.d = int(m.group(2))
        else:
            args.m = int(m.group(2))
    budget = args.budget
    kw = {} if args.max_arity is None else {"max_arity": args.max_arity}

    def need(flag):
        value = getattr(args, flag.replace("-", "_"))
        if value is None:
            raise UsageError(f"check {name} needs --{flag}")
        return value

    try:
        if name == "all":
            report = checks.run_all(budget=budget)
        elif name == "mutual":
            report = checks.mutual(need("left"), need("right"), budget=budget, **kw)
        elif name in ("ring-affine", "modules-mutual"):
            report = checks.CHECKS[name](need("m"), budget=budget, **kw)
        elif name == "dadic-identity":
            report = checks.dadic_identity(need("d"))
        elif name in ("balanced-slat", "uslat-top", "saturation"):
            report = checks.CHECKS[name](budget=budget, **kw)
        elif name in checks.CHECKS:
            report = checks.CHECKS[name]()
        else:
            known = ", ".join(sorted(["all", *checks.CHECKS]))
            raise UsageError(f"unknown check {name!r}; known: {known}")
    except checks.CheckAborted as exc:
        return exc.report, BUDGET
    return report, OK if report["pass"] else CHECK_FAILED


def _values(text: str, rig) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(rig.coerce(v.strip()) for v in text.split(","))


def cmd_affine_ext(args):
    rig = standard_rig(args.rig)
    R = PreorderedRing.natural(rig) if isinstance(rig, ExactRig) else PreorderedRing(rig)
    fmt = rig.format
    if args.w is not None:
        w = _values(args.w, rig)
        if not w:
            raise UsageError("--w needs at least the base point w_0")
        n = len(w) - 1
        probes = []
        for p in args.probe:
            x = _values(p, rig)
            probes.append((x, phi_w(rig, w, x)))
        zero = (rig.zero,) * n
        basis = [tuple(rig.one if i == j else rig.zero for j in range(n)) for i in range(n)]
        phi = SampledMap(n, phi_w(rig, w, zero), tuple(phi_w(rig, w, b) for b in basis),
                         tuple(probes))
    else:
        if args.zero is None:
            raise UsageError("affine-ext needs --w, or --zero with --basis")
        basis = _values(args.basis or "", rig)
        probes = []
        for p in args.probe:
            x, sep, value = p.partition("=")
            if not sep:
                raise UsageError(f"probe {p!r} should look like 'x1,x2=value'")
            probes.append((_values(x, rig), rig.coerce(value.strip())))
        phi = SampledMap(len(basis), rig.coerce(args.zero), basis, tuple(probes))
    res = affine_extension_check(R, phi)
    doc = {
        "rig": rig.label,
        "arity": phi.arity,
        "weights": [fmt(v) for v in w_of_phi(R, phi)],
        "probes": len(phi.probes),
        "holds_on_probes": res.holds,
    }
    if not res.holds:
        doc["violation"] = {"x": [fmt(v) for v in res.witness],
                            "lhs": fmt(res.lhs), "rhs": fmt(res.rhs)}
    return doc, OK if res.holds else CHECK_FAILED


def cmd_dadic(args):
    a = DadicFraction.parse(args.a, args.d)
    b = DadicFraction.parse(args.b, args.d if args.d is not None else a.d) \
        if args.b is not None else None
    if args.op == "order-unit":
        result = order_unit_exponent(a)
    else:
        result = dadic_arith(args.op.replace("-", "_"), a, b)
    if isinstance(result, DadicFraction):
        result = str(result)
    doc = {"op": args.op, "d": a.d, "a": str(a)}
    if b is not None:
        doc["b"] = str(b)
    doc["result"] = result
    return doc, OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clonelab", description=__doc__.split("\n")[0])
    p.add_argument("--format", choices=("json", "table"), default="json")
    # also accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    def rig_opts(sp, table=False):
        sp.add_argument("--rig", help="bool2, zmod<m>, ut2, int, dadic<d>")
        if table:
            sp.add_argument("--table", help="rig document {size, add, mul, zero, one} "
                                            "inline or as a file")

    sp = sub.add_parser("rig-validate", help="check the rig axioms exhaustively")
    rig_opts(sp, table=True)
    sp.set_defaults(fn=cmd_rig_validate)

    sp = sub.add_parser("kron", help="Kronecker product of two matrices")
    rig_opts(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--which", choices=("first", "second"), default="first")
    sp.set_defaults(fn=cmd_kron)

    for name, fn, what in (("commutant", cmd_commutant, "commutant of a generator set"),
                           ("clone-gen", cmd_clone_gen, "clone generated by a set")):
        sp = sub.add_parser(name, help=what)
        rig_opts(sp, table=True)
        sp.add_argument("--carrier", type=int, help="carrier size, for JSON generators")
        sp.add_argument("--gens", required=True,
                        help="theory name (e.g. uslat, aff@zmod3), JSON, or a JSON file")
        sp.add_argument("--arity", type=int, required=True)
        if name == "commutant":
            sp.add_argument("--budget", type=int, help="node budget (default CLONELAB_BUDGET "
                                                       "or 10^8)")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("check", help="run a theorem check")
    sp.add_argument("name", help="all, mutual, balanced-slat, uslat-top, ring-affine, "
                                 "modules-mutual, saturation, dadic-identity, kron-agreement, "
                                 "commutation-laws, ordered, noncommutative")
    sp.add_argument("--m", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--left")
    sp.add_argument("--right")
    sp.add_argument("--max-arity", type=int)
    sp.add_argument("--budget", type=int)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("affine-ext", help="probe the affine extension property")
    sp.add_argument("--rig", required=True)
    sp.add_argument("--w", help="comma list w0,w1,...: sample phi_w itself")
    sp.add_argument("--zero", help="phi(0)")
    sp.add_argument("--basis", help="comma list phi(b_1),...,phi(b_n)")
    sp.add_argument("--probe", action="append", default=[],
                    help="'x1,...,xn=value', or just 'x1,...,xn' with --w")
    sp.set_defaults(fn=cmd_affine_ext)

    sp = sub.add_parser("dadic", help="exact arithmetic in Z[1/d]")
    sp.add_argument("op", choices=("add", "sub", "mul", "neg", "leq", "is-positive",
                                   "order-unit"))
    sp.add_argument("a")
    sp.add_argument("b", nargs="?")
    sp.add_argument("--d", type=int, help="base for plain integer literals")
    sp.set_defaults(fn=cmd_dadic)
    return p


def dump_json(value, indent: str = "") -> str:
    """Indented JSON that keeps arrays of scalars on one line."""
    inner = indent + "  "
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dump_json(v, inner)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return json.dumps(value, separators=(", ", ": "))
        items = [inner + dump_json(v, inner) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + indent + "]"
    return json.dumps(value)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _rows_table(rows: list[dict], indent: str) -> list[str]:
    cols = list(dict.fromkeys(k for r in rows for k in r))
    cells = [cols] + [[_scalar(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
    return [indent + "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
            for row in cells]


def render_table(doc: dict, indent: str = "") -> str:
    """Aligned key/value text; lists of records become column tables."""
    lines = []
    width = max((len(k) for k in doc), default=0)
    for key, value in doc.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{indent}{key}:")
            flat = all(not isinstance(x, dict) for v in value for x in v.values())
            if flat:
                lines.extend(_rows_table(value, indent + "  "))
            else:
                for v in value:
                    lines.append(render_table(v, indent + "  "))
                    lines.append("")
        elif isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(render_table(value, indent + "  "))
        else:
            lines.append(f"{indent}{key.ljust(width)}  {_scalar(value)}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc, code = args.fn(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"clonelab: error: {exc}", file=sys.stderr)
        return USAGE
    out = {"schema": SCHEMA, "command": args.command, **doc}
    if args.format == "json":
        sys.stdout.write(dump_json(out) + "\n")
    else:
        sys.stdout.write(render_table(out) + "\n")
    if code == BUDGET:
        print("clonelab: search budget exhausted; partial report written", file=sys.stderr)
    elif code == CHECK_FAILED:
        print("clonelab: check failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
