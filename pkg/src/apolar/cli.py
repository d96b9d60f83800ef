"""Command-line front end.

Exit status: 0 on success, 1 when a computation fails mathematically (failed
certificate, uncertified rank), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .apolarity import apolar_generators, apolar_rank, dual_context, hilbert_function
from .decomposition import DeltaTable, admissible_tables, delta_table, is_o_sequence, verify_table
from .deform import (DEFAULT_SAMPLES, FamilyError, FamilySpec, ParamFamily, build_family, check_hypotheses,
                     flatness_certificate, tangent_rank, verify_fiber_decomposition)
from .ideals import (IdealError, NotCertified, WeightVector, generating_subset, initial_span,
                     settled_quotient_rank, torsion_witness, truncate_ideal)
from .polycore import ContextError, ParseError, Poly, VarContext, parse_poly
from .polycore.parser import indexed_arity, infer_context
from .report import FAILED
from .standard_form import StandardFormError, diagonalize_quadric, standardize


class UsageError(ValueError):
    pass


@dataclass
class Outcome:
    code: int
    text: str
    doc: object


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace("(", "").replace(")", "").split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _one_poly(args) -> str:
    if not args.poly or len(args.poly) != 1:
        raise UsageError("exactly one -f/--poly is required")
    return args.poly[0]


def _primal(args, texts: Sequence[str]) -> VarContext:
    n = indexed_arity(texts, "x")
    if args.vars is not None:
        if args.vars < n:
            raise UsageError(f"--vars {args.vars} but the input uses x{n}")
        n = args.vars
    return VarContext.primal(max(n, 1))


def _poly(args) -> Poly:
    text = _one_poly(args)
    return parse_poly(text, _primal(args, [text]))


def _general(args) -> tuple[list[Poly], VarContext]:
    if not args.poly:
        raise UsageError("at least one -f/--poly generator is required")
    ctx = infer_context(args.poly, parameter=args.param)
    return [parse_poly(t, ctx) for t in args.poly], ctx


# subcommands


def cmd_hilbert(args) -> Outcome:
    f = _poly(args)
    h = hilbert_function(f)
    return Outcome(0, ",".join(map(str, h)), {"f": str(f), "h": list(h), "rank": sum(h)})


def _table_lines(t: DeltaTable) -> list[str]:
    last = max(0, t.j - 2)
    return [f"D{s}: " + ",".join(map(str, t.rows[s])) for s in range(last + 1)]


def cmd_delta(args) -> Outcome:
    f = _poly(args)
    t = delta_table(f)
    return Outcome(0, "\n".join(_table_lines(t)), t.to_json())


def cmd_apolar(args) -> Outcome:
    f = _poly(args)
    p = apolar_generators(f)
    lines = [str(g) for g in p.generators] + [f"rank {p.algebra_rank}"]
    return Outcome(0, "\n".join(lines), p.to_json())


def cmd_standard_form(args) -> Outcome:
    f = _poly(args)
    r = standardize(f)
    if args.diagonalize:
        r = diagonalize_quadric(r)
    lines = [f"g = {r.g}", "e = " + ",".join(map(str, r.e_vector))]
    lines += [f"phi({v}) = {p}" for v, p in zip(r.phi.ctx.names, r.phi.images)]
    return Outcome(0, "\n".join(lines), r.to_json())


def cmd_tangent(args) -> Outcome:
    f = _poly(args)
    t = tangent_rank(f)
    return Outcome(0, str(t), {"f": str(f), "tangent_rank": t, "rank": apolar_rank(f)})


def cmd_gr(args) -> Outcome:
    gens, ctx = _general(args)
    weights = _ints(args.weights) if args.weights else [1] * ctx.nvars
    cap = args.cap if args.cap is not None else max(int(g.degree) for g in gens) + 1
    I = truncate_ideal(gens, cap, ctx=ctx)
    G = initial_span(I, WeightVector(tuple(weights)), cap)
    forms = generating_subset(G.span.polys(), ctx, cap)
    stable = bool(G.stable) and all(G.stable)
    doc = {"generators": [str(p) for p in forms], "cap": cap, "weights": weights, "stable": stable}
    text = "(" + ", ".join(doc["generators"]) + ")" + ("" if stable else "  [provisional]")
    return Outcome(0, text, doc)


def _report_outcome(reports) -> Outcome:
    code = 1 if any(r.verdict == FAILED for r in reports) else 0
    text = "\n".join(r.render() for r in reports)
    doc = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    return Outcome(code, text, doc)


def _family_from_args(args) -> FamilySpec:
    if args.spec:
        src = args.spec
        if os.path.exists(src):
            with open(src) as fh:
                src = fh.read()
        try:
            return FamilySpec.from_json(src)
        except (KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"malformed family spec: {exc}") from None
    f = _poly(args)
    if not args.dual:
        raise UsageError("-d/--dual is required")
    d = parse_poly(args.dual, dual_context(f.ctx))
    return build_family(f, d, args.m, args.adjoined)


def cmd_family_build(args) -> Outcome:
    s = _family_from_args(args)
    lines = [f"I_t = ({g})" if i == 0 else f"      + ({g})" for i, g in enumerate(s.generators())]
    return Outcome(0, "\n".join(lines), s.to_json())


def cmd_family_check(args) -> Outcome:
    samples = _rationals(args.samples) if args.samples else list(DEFAULT_SAMPLES)
    if args.param and not args.spec and not args.dual:
        gens, ctx = _general(args)
        return _report_outcome([flatness_certificate(ParamFamily(gens, args.param), samples, args.cap)])
    s = _family_from_args(args)
    reports = [check_hypotheses(s)]
    if s.source is not None:
        for lam in samples:
            if lam != 0:
                reports.append(verify_fiber_decomposition(s, lam))
    if args.flatness:
        reports.append(flatness_certificate(s, samples, args.cap))
    return _report_outcome(reports)


def cmd_admissible(args) -> Outcome:
    if not args.h:
        raise UsageError("--h is required")
    h = _ints(args.h)
    j = args.j if args.j is not None else len(h) - 1
    if j != len(h) - 1:
        raise UsageError("--j must equal len(h) - 1")
    tables = admissible_tables(j, h)
    blocks = []
    for k, t in enumerate(tables):
        blocks.append(f"# table {k + 1}\n" + "\n".join(_table_lines(t)))
    text = "\n".join(blocks) + f"\n{len(tables)} table(s)"
    return Outcome(0, text.lstrip("\n"), {"j": j, "h": h, "tables": [t.to_json() for t in tables]})


def cmd_verify_table(args) -> Outcome:
    if not args.table:
        raise UsageError("--table is required")
    t = DeltaTable.from_json(args.table)
    h = _ints(args.h) if args.h else list(t.column_sums())
    return _report_outcome([verify_table(t, h)])


def cmd_osequence(args) -> Outcome:
    if not args.h:
        raise UsageError("--h is required")
    h = _ints(args.h)
    ok = is_o_sequence(h)
    return Outcome(0, "true" if ok else "false", {"h": h, "o_sequence": ok})


def cmd_quotient_rank(args) -> Outcome:
    gens, ctx = _general(args)
    if args.cap is not None:
        I = truncate_ideal(gens, args.cap, ctx=ctx, local=args.local)
        r, cap = I.quotient_rank(), args.cap
    else:
        r, cap = settled_quotient_rank(gens, ctx, local=args.local)
    mode = "local" if args.local else "global"
    return Outcome(0, str(r), {"rank": r, "cap": cap, "mode": mode})


def cmd_torsion(args) -> Outcome:
    if not args.param:
        raise UsageError("--param is required")
    gens, ctx = _general(args)
    cap = args.cap if args.cap is not None else max(int(g.degree) for g in gens) + 1
    w = torsion_witness(truncate_ideal(gens, cap, ctx=ctx), args.param, cap)
    if w is None:
        return Outcome(0, f"none found at cap {cap}", {"witness": None, "cap": cap})
    return Outcome(1, str(w.witness), {"witness": str(w.witness), "cap": cap, "certified": w.certified})


COMMANDS = {
    "hilbert": (cmd_hilbert, "local Hilbert function of the apolar algebra"),
    "delta": (cmd_delta, "symmetric decomposition rows"),
    "apolar": (cmd_apolar, "generators of the apolar ideal"),
    "standard-form": (cmd_standard_form, "standard form of a dual socle generator"),
    "tangent": (cmd_tangent, "tangent space rank at the Hilbert scheme point"),
    "gr": (cmd_gr, "initial forms of an ideal"),
    "family-build": (cmd_family_build, "family obtained by adjoining a variable"),
    "family-check": (cmd_family_check, "hypotheses, fibres and flatness of a family"),
    "admissible": (cmd_admissible, "all numerically admissible decompositions of h"),
    "verify-table": (cmd_verify_table, "structural checks on a decomposition table"),
    "osequence": (cmd_osequence, "Macaulay growth test"),
    "quotient-rank": (cmd_quotient_rank, "rank of the quotient by an ideal"),
    "torsion": (cmd_torsion, "search for parameter torsion"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-f", "--poly", action="append", help="polynomial (repeat for ideal generators)")
    common.add_argument("--vars", type=int, help="number of primal variables x1..xn")
    common.add_argument("--json", action="store_true", help="emit a single JSON document")
    common.add_argument("--cap", type=int, help="degree cap override")
    common.add_argument("--samples", help="parameter samples, e.g. 0,1,-1,2")
    common.add_argument("--batch", help="file with one job per line, run concurrently")
    common.add_argument("--param", help="parameter variable of a family")
    common.add_argument("--weights", help="comma-separated weights for gr")
    common.add_argument("--local", action="store_true", help="power-series (local) quotient rank")
    common.add_argument("-d", "--dual", help="dual operator for family-build/family-check")
    common.add_argument("-m", type=int, default=2, help="power of the adjoined variable")
    common.add_argument("--adjoined", help="name of the adjoined primal variable")
    common.add_argument("--spec", help="family spec as JSON text or a path")
    common.add_argument("--flatness", action="store_true", help="also run the flatness certificate")
    common.add_argument("--diagonalize", action="store_true", help="split the quadric into squares")
    common.add_argument("--h", help="Hilbert function, e.g. 1,4,4,3,1")
    common.add_argument("--j", type=int, help="socle degree")
    common.add_argument("--table", help="table JSON {\"j\": .., \"rows\": [[..]]}")
    p = _Parser(prog="apolar", description="Apolar algebras, decompositions and families.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return p


def _execute(argv: Sequence[str]) -> tuple[Outcome, str]:
    """Run one job; returns the outcome and any message for stderr."""
    try:
        args = build_parser().parse_args(list(argv))
        if args.command is None:
            raise UsageError("a subcommand is required")
        return COMMANDS[args.command][0](args), ""
    except NotCertified as exc:
        return Outcome(1, "", {"error": str(exc)}), f"not certified: {exc}"
    except ArithmeticError as exc:
        return Outcome(1, "", {"error": str(exc)}), f"failed: {exc}"
    except (UsageError, ParseError, ContextError, IdealError, FamilyError, StandardFormError, ValueError) as exc:
        return Outcome(2, "", {"error": str(exc)}), f"error: {exc}"


def _batch_job(line: str) -> tuple[Outcome, str]:
    return _execute(shlex.split(line))


def _run_batch(path: str, as_json: bool, out, err) -> int:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 2
    if as_json:
        lines = [ln if " --json" in f" {ln}" else ln + " --json" for ln in lines]
    workers = min(len(lines), os.cpu_count() or 1) or 1
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_batch_job, lines))
    code = max((o.code for o, _ in results), default=0)
    if as_json:
        doc = [{"job": ln, "exit": o.code, "result": o.doc} for ln, (o, _) in zip(lines, results)]
        print(json.dumps(doc, indent=2), file=out)
    else:
        for ln, (o, msg) in zip(lines, results):
            print(f"$ {ln}", file=out)
            if o.text:
                print(o.text, file=out)
            if msg:
                print(msg, file=err)
    return code


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        pre = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 2
    if pre.command is not None and pre.batch:
        return _run_batch(pre.batch, pre.json, out, err)
    outcome, msg = _execute(argv)
    if msg:
        print(msg, file=err)
    if pre.json:
        print(json.dumps(outcome.doc, indent=2), file=out)
    elif outcome.text:
        print(outcome.text, file=out)
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
