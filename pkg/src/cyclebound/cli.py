"""Command-line interface: batch in, JSON report out.

Only the JSON report goes to stdout (or ``--out``); a short human summary
goes to stderr.  Exit status is 0 on success, 2 when a verdict fails and 1 on
any operational error, which is reported as ``{"error": {...}}``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .arith import ArithError, FieldSpec
from .complex import ComplexError, FacetParseError, SimplicialComplex, format_facets, parse_facets
from .decomp import DecompError, decomposition_forest, validate_tree
from .extremal import (
    BudgetExceeded,
    ExtremalError,
    gamma_bruteforce,
    gamma_partition,
    max_circuit_exact,
    max_circuit_greedy,
    s_profile,
)
from .gen import InvalidParameters, generate, parse_genspec
from .matroid import (
    EXHAUSTIVE_LIMIT,
    LinearMatroid,
    MatrixParseError,
    MatroidError,
    format_matrix,
    guard,
    matroid_from_complex,
    parse_matrix,
)
from .verify import AnalysisOptions, VerifyError, analyze, circuit_witness, frac_text, verify_erdos_gallai, verify_lnpr

COMMANDS = ("generate", "analyze", "max-cycle", "gamma", "decompose", "verify", "oracle")


class UsageError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def detect_format(text: str) -> str:
    for line in text.splitlines():
        body = line.strip()
        if body and not body.startswith("#"):
            return "matrix" if body.split()[0] == "field" else "facets"
    return "facets"


def parse_instance(path: str, format_hint: str = "auto"):
    """Read a facet file or a matrix file; the format is sniffed from the first line."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    fmt = detect_format(text) if format_hint == "auto" else format_hint
    try:
        if fmt == "matrix":
            return parse_matrix(text)
        if fmt == "facets":
            return parse_facets(text)
    except (MatrixParseError, FacetParseError) as exc:
        raise ParseError(exc.line, exc.reason) from None
    raise UsageError(f"unknown format {format_hint!r}")


# ---------------------------------------------------------------------------
# helpers

def _field(args) -> FieldSpec:
    return FieldSpec.parse(args.field if args.field is not None else "2")


def _load(args):
    """Resolve the single input source into ``(instance, genspec)``."""
    if bool(args.input) == bool(args.gen):
        raise UsageError("exactly one of --in or --gen is required")
    if args.gen:
        spec = parse_genspec(args.gen, args.field, args.seed)
        return generate(spec), spec
    inst = parse_instance(args.input, args.format)
    if isinstance(inst, LinearMatroid) and args.field is not None and FieldSpec.parse(args.field) != inst.field:
        raise UsageError(f"--field {args.field} disagrees with matrix field {inst.field}")
    return inst, None


def _matroid(inst, args) -> LinearMatroid:
    if isinstance(inst, LinearMatroid):
        return inst
    d = args.d if getattr(args, "d", None) is not None else inst.dimension
    if d < 1 or d > inst.dimension:
        raise UsageError(f"--d must be between 1 and {inst.dimension}")
    return matroid_from_complex(inst, d, _field(args))


def _source(args, spec) -> dict:
    return {"gen": spec.to_json()} if spec is not None else {"path": args.input}


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        target = Path(out)
        fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# commands

def cmd_generate(args) -> int:
    if not args.gen:
        raise UsageError("generate needs --gen")
    spec = parse_genspec(args.gen, args.field, args.seed)
    inst = generate(spec)
    if isinstance(inst, SimplicialComplex):
        fmt, content = "facets", format_facets(inst)
        info = {"f_vector": list(inst.f_vector)}
    else:
        fmt, content = "matrix", format_matrix(inst)
        info = {"size": inst.size, "rank": inst.rank}
    report = {"instance": spec.to_json(), "format": fmt, **info}
    if args.instance_out:
        Path(args.instance_out).write_text(content)
        report["written"] = args.instance_out
    else:
        report["content"] = content
    _emit(report, args)
    _say(f"generated {spec.family} ({fmt})")
    return 0


def _options(args) -> AnalysisOptions:
    return AnalysisOptions(field=_field(args), budget=args.budget, force=args.force, heuristic=args.heuristic,
                           seed=args.seed, tree=not getattr(args, "no_tree", False))


def _loaded_options(args, inst) -> AnalysisOptions:
    opts = _options(args)
    if isinstance(inst, LinearMatroid):
        opts.field = inst.field
    return opts


def cmd_analyze(args) -> int:
    inst, spec = _load(args)
    rep = analyze(inst, _loaded_options(args, inst), spec=spec)
    data = dict(rep.data)
    if spec is None:
        data["instance"] = _source(args, spec)
    _emit(data, args)
    bad = [v["bound_id"] for v in rep.verdicts if not v["holds"]]
    _say(f"c={data['c']}{'' if data['c_exact'] else ' (lower bound)'} gamma={data['gamma']} "
         f"verdicts={len(rep.verdicts)} failing={bad or 'none'}")
    return 2 if bad else 0


def cmd_max_cycle(args) -> int:
    inst, spec = _load(args)
    M = _matroid(inst, args)
    if M.rank == M.size:
        raise ExtremalError("no circuit: the matroid is independent")
    if args.method == "greedy":
        res = max_circuit_greedy(M, restarts=args.restarts, seed=args.seed)
    else:
        try:
            res = max_circuit_exact(M, budget=args.budget, method=args.method)
        except BudgetExceeded as exc:
            if not args.heuristic:
                raise
            res = max_circuit_greedy(M, restarts=args.restarts, seed=args.seed)
            if exc.best.size > res.size:
                res = exc.best
    report = {
        "instance": _source(args, spec),
        "c": res.size,
        "c_exact": res.exact,
        "method": res.method,
        "nodes_explored": res.nodes_explored,
        "circuit": circuit_witness(M, res.circuit),
    }
    _emit(report, args)
    _say(f"c={res.size} exact={res.exact} method={res.method}")
    return 0


def cmd_gamma(args) -> int:
    inst, spec = _load(args)
    M = _matroid(inst, args)
    cover = gamma_partition(M)
    w = sorted(cover.witness)
    report = {
        "instance": _source(args, spec),
        "gamma": cover.gamma,
        "partition": [M.names(sorted(b)) for b in cover.partition],
        "witness": M.names(w),
        "witness_density": frac_text(Fraction(len(w), M.rank_of(w))) if w else None,
    }
    _emit(report, args)
    _say(f"gamma={cover.gamma}")
    return 0


def cmd_decompose(args) -> int:
    inst, spec = _load(args)
    M = _matroid(inst, args)
    trees = decomposition_forest(M, budget=args.budget)
    reports = [validate_tree(t, args.budget) for t in trees]
    report = {
        "instance": _source(args, spec),
        "trees": [{"tree": t.to_json(), "summary": t.summary(), "validation": r.to_json()}
                  for t, r in zip(trees, reports)],
        "ok": all(r.ok for r in reports),
    }
    if args.dot:
        Path(args.dot).write_text("".join(t.to_dot(f"T{i}") for i, t in enumerate(trees)))
    _emit(report, args)
    _say(f"{len(trees)} tree(s), all checks {'pass' if report['ok'] else 'FAIL'}")
    return 0 if report["ok"] else 2


def cmd_verify(args) -> int:
    if args.lnpr:
        if args.input or args.gen:
            raise UsageError("--lnpr is an input source on its own")
        try:
            n, d, x = (int(t) for t in args.lnpr.split(","))
        except ValueError:
            raise UsageError("--lnpr expects n,d,x") from None
        verdicts = [verify_lnpr(n, d, x, _field(args))]
        source = {"lnpr": {"n": n, "d": d, "x": x}}
    else:
        inst, spec = _load(args)
        source = _source(args, spec)
        if args.eg_k is not None:
            if not isinstance(inst, SimplicialComplex) or inst.dimension > 1:
                raise UsageError("--eg-k needs a graph")
            verdicts = [verify_erdos_gallai(inst, args.eg_k, budget=args.budget)]
        else:
            rep = analyze(inst, _loaded_options(args, inst), spec=spec)
            _emit_verdicts(source, rep.verdicts, args)
            return _verdict_status(rep.verdicts)
    _emit_verdicts(source, [v.to_json() for v in verdicts], args)
    return _verdict_status([v.to_json() for v in verdicts])


def _emit_verdicts(source, verdicts, args) -> None:
    _emit({"instance": source, "verdicts": verdicts, "all_hold": all(v["holds"] for v in verdicts)}, args)
    for v in verdicts:
        tag = "vacuous" if v["vacuous"] else ("holds" if v["holds"] else "FAILS")
        _say(f"{v['bound_id']}: {v['lhs']} {v['relation']} {v['rhs']} {tag}")


def _verdict_status(verdicts) -> int:
    return 0 if all(v["holds"] for v in verdicts) else 2


def cmd_oracle(args) -> int:
    inst, spec = _load(args)
    M = _matroid(inst, args)
    report: dict = {"instance": _source(args, spec), "op": args.op}
    if args.op == "gamma":
        g, dens, arg = gamma_bruteforce(M, force=args.force)
        report.update(gamma=g, density=frac_text(dens), argmax=M.names(sorted(arg)))
    elif args.op == "circuits":
        guard(M.size, EXHAUSTIVE_LIMIT, args.force)
        cl = M.enumerate_circuits(force=True)
        report.update(circuits=[M.names(sorted(C)) for C in cl], count=len(cl))
    elif args.op == "max-circuit":
        guard(M.size, EXHAUSTIVE_LIMIT, args.force)
        cl = list(M.enumerate_circuits(force=True))
        best = min(cl, key=lambda C: (-len(C), sorted(C))) if cl else frozenset()
        report.update(c=len(best), circuit=M.names(sorted(best)))
    elif args.op == "s-profile":
        report.update(s_profile=s_profile(M, force=args.force))
    elif args.op == "components":
        fast = [M.names(sorted(C)) for C in M.components()]
        slow = [M.names(sorted(C)) for C in M.components_bruteforce(force=args.force)]
        report.update(components=fast, bruteforce=slow, agree=fast == slow)
    _emit(report, args)
    _say(f"oracle {args.op} done")
    return 0 if report.get("agree", True) else 2


HANDLERS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "max-cycle": cmd_max_cycle,
    "gamma": cmd_gamma,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    """Usage errors are operational errors: structured JSON and exit 1."""

    def error(self, message):
        sys.stdout.write(json.dumps({"error": {"type": "UsageError", "message": message}},
                                    indent=2, sort_keys=True) + "\n")
        self.print_usage(sys.stderr)
        _say(f"error: {message}")
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="facet or matrix file")
    common.add_argument("--gen", metavar="SPEC", help="generator spec, e.g. complete-complex:n=4,d=2")
    common.add_argument("--format", choices=("auto", "facets", "matrix"), default="auto")
    common.add_argument("--field", metavar="P|rational", help="coefficient field (default 2)")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--budget", type=_positive, default=10 ** 7, help="branch-and-bound node budget")
    common.add_argument("--force", action="store_true", help="lift exhaustive-search guardrails")
    common.add_argument("--heuristic", action="store_true", help="allow a non-exact c")
    common.add_argument("--out", metavar="PATH", help="write the JSON report here")
    common.add_argument("--d", type=int, help="face dimension for complexes (default: top)")

    parser = _Parser(prog="cyclebound", description="Long simple cycles in matroids and complexes")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="build an instance from a generator spec")
    p.add_argument("--instance-out", metavar="PATH", help="write the instance file here")

    p = sub.add_parser("analyze", parents=[common], help="all quantities and verdicts")
    p.add_argument("--no-tree", action="store_true", help="skip the decomposition tree")

    p = sub.add_parser("max-cycle", parents=[common], help="largest circuit")
    p.add_argument("--method", choices=("auto", "branch-and-bound", "cycle-space", "greedy"), default="auto")
    p.add_argument("--restarts", type=_positive, default=32)

    sub.add_parser("gamma", parents=[common], help="covering number by matroid partitioning")

    p = sub.add_parser("decompose", parents=[common], help="decomposition tree and its checks")
    p.add_argument("--dot", metavar="PATH", help="also write the tree as DOT")

    p = sub.add_parser("verify", parents=[common], help="bound verdicts only")
    p.add_argument("--lnpr", metavar="N,D,X", help="check the colex rank bound instead of an instance")
    p.add_argument("--eg-k", type=_positive, help="check the cycle-length bound for this k only")

    p = sub.add_parser("oracle", parents=[common], help="exhaustive reference computations")
    p.add_argument("--op", required=True, choices=("gamma", "circuits", "max-circuit", "s-profile", "components"))
    return parser


ERRORS = (OSError, UsageError, ParseError, ArithError, ComplexError, MatroidError, DecompError,
          InvalidParameters, VerifyError, ValueError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except ERRORS as exc:
        err = {"type": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "line", None) is not None:
            err["line"] = exc.line
        if isinstance(exc, BudgetExceeded):
            err["best"] = {"size": exc.best.size, "circuit": sorted(exc.best.circuit)}
        sys.stdout.write(json.dumps({"error": err}, indent=2, sort_keys=True) + "\n")
        _say(f"error: {err['type']}: {err['message']}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
