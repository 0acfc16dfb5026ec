"""``netdecomp`` command line tool.

Exit status: 0 on success, 1 for bad input (parse/validation/budget errors),
2 when an internal cross-check fails.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

from . import __version__
from .controllability import (DEFAULT_LIMIT, build_K, control, controllable_oracle,
                              enumerate_C2)
from .exceptions import InvariantViolation, NetdecompError
from .observability import build_O, observable_oracle, observe
from .partition import CELLS, partition, report
from .structural import generic_rank, genericity_probe, pattern_of
from .system import load_system


def _table(header, rows) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*map(str, r)) for r in rows]
    return "\n".join(line.rstrip() for line in lines)


def _set(names) -> str:
    return "{" + ", ".join(names) + "}"


def _limit(args):
    return None if args.all else args.limit


def cmd_observe(args, sysm):
    res = observe(sysm)
    if args.json:
        return res.to_json(emit_T=args.emit_T)
    lines = [f"q = rank(O) = {res.q}",
             f"observable ({len(res.observable_set)}) = {_set(sysm.names(res.observable_set))}",
             "trace: " + (", ".join(f"k={r.k} q_k={r.q_k} f_k={r.f_k}" for r in res.trace) or "none"),
             "",
             _table(("node", "observable"),
                    [(lab, "yes" if i in res.observable_set else "no")
                     for i, lab in enumerate(sysm.labels)])]
    if args.emit_T:
        lines += ["", "T ="] + ["  " + " ".join(r) for r in res.T.to_strings()]
    return "\n".join(lines)


def cmd_control(args, sysm):
    res = control(sysm, _limit(args))
    if args.json:
        return res.to_json(emit_T=args.emit_T)
    lines = [f"q = rank(K) = {res.q}", f"h = {res.h}", f"C1 = {_set(sysm.names(res.C1))}",
             f"downstream of drivers = {_set(sysm.names(res.downstream))}", ""]
    rows = []
    for k, c in enumerate(res.choices):
        rows.append((k, _set(sysm.names(c.C2)), _set(sysm.names(c.C)), _set(sysm.names(c.P))))
    lines.append(_table(("choice", "C2", "C", "P"), rows))
    for k, c in enumerate(res.choices):
        if c.W.rows and c.W.cols:
            lines += ["", f"choice {k}: W (rows {_set(sysm.names(c.rest))}, "
                          f"cols {_set(sysm.names(c.C2))})"]
            lines += ["  " + " ".join(r) for r in c.W.to_strings()]
        if args.emit_T:
            lines += ["", f"choice {k}: T ="] + ["  " + " ".join(r) for r in c.T.to_strings()]
            lines += [f"choice {k}: T_inv ="] + ["  " + " ".join(r) for r in c.T_inv.to_strings()]
    return "\n".join(lines)


def cmd_partition(args, sysm):
    obs = observe(sysm)
    if args.choice is not None:
        ctrl = control(sysm, None if args.all else max(args.limit, args.choice + 1))
        if not 0 <= args.choice < len(ctrl.choices):
            raise NetdecompError(f"choice {args.choice} out of range 0..{len(ctrl.choices) - 1}")
        picked = [ctrl.choices[args.choice]]
    else:
        ctrl = control(sysm, _limit(args))
        picked = list(ctrl.choices)
    parts = [partition(obs, ctrl, c) for c in picked]
    if args.json:
        return report(sysm, obs, ctrl, parts)
    blocks = []
    for c, p in zip(picked, parts):
        head = f"C2 = {_set(sysm.names(c.C2))}"
        rows = [(lab, p.cell_of(i)) for i, lab in enumerate(sysm.labels)]
        cells = "\n".join(f"  {name:<10} {_set(sysm.names(p[name]))}" for name in CELLS)
        blocks.append(head + "\n" + cells + "\n\n" + _table(("node", "cell"), rows))
    return "\n\n".join(blocks)


def cmd_oracle(args, sysm):
    obs = observe(sysm, check=False)
    o_set = observable_oracle(sysm)
    K = build_K(sysm)
    brute = controllable_oracle(K, args.cap)
    ctrl = control(sysm, None)
    enum = sorted(sorted(ctrl.C1 | S) for S in enumerate_C2(ctrl.basis, ctrl.C1, None))
    brute_sorted = sorted(sorted(S) for S in brute)
    if o_set != obs.observable_set:
        raise InvariantViolation(
            f"oracle {sysm.names(o_set)} != algorithm {sysm.names(obs.observable_set)}")
    if enum != brute_sorted:
        raise InvariantViolation("brute-force controllable sets differ from the enumeration")
    names = [[sysm.labels[i] for i in S] for S in brute_sorted]
    if args.json:
        return {"observable": sysm.names(o_set), "controllable_sets": names,
                "agrees": True}
    return "\n".join([f"observable (oracle) = {_set(sysm.names(o_set))}",
                      f"controllable sets ({len(names)}):"]
                     + ["  " + _set(s) for s in names] + ["cross-check: ok"])


def cmd_generic_rank(args, sysm):
    M = {"A": lambda: sysm.A, "O": lambda: build_O(sysm), "K": lambda: build_K(sysm)}[args.matrix]()
    value = generic_rank(pattern_of(M))
    if args.json:
        return {"matrix": args.matrix, "shape": [M.rows, M.cols], "generic_rank": value}
    return f"generic rank of {args.matrix} ({M.rows}x{M.cols}) = {value}"


def cmd_probe(args, sysm):
    rep = genericity_probe(sysm, args.samples, args.seed)
    if args.json:
        return rep.to_json()
    return "\n".join([f"samples = {rep.samples}", f"seed = {rep.seed}",
                      f"baseline = {_set(rep.baseline_set)}",
                      f"agreement = {rep.agreement_fraction} "
                      f"({float(rep.agreement_fraction):.4f})",
                      f"disagreeing = {len(rep.disagreeing_samples)}"])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="system document (JSON)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="netdecomp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"netdecomp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("observe", parents=[common], help="observable node set")
    p.add_argument("--emit-T", action="store_true")
    p.set_defaults(func=cmd_observe)

    for name, func, helptext in (("control", cmd_control, "controllable node sets"),
                                 ("partition", cmd_partition, "six-cell decomposition")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--all", action="store_true", help="report every completion")
        g.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
        if name == "control":
            p.add_argument("--emit-T", action="store_true")
        else:
            p.add_argument("--choice", type=int, default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("oracle", parents=[common], help="definition-level cross-check")
    p.add_argument("--cap", type=int, default=100_000, help="max subsets to test")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generic-rank", parents=[common], help="generic rank by matching")
    p.add_argument("--matrix", choices=("A", "O", "K"), default="A")
    p.set_defaults(func=cmd_generic_rank)

    p = sub.add_parser("probe", parents=[common], help="genericity of the observable set")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_probe)
    return parser


def _emit(out, as_json: bool, stream) -> None:
    if as_json:
        stream.write(json.dumps(out, indent=2) + "\n")
    else:
        stream.write(out + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sysm = load_system(args.file)
        out = args.func(args, sysm)
    except InvariantViolation as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)} if args.json
              else f"internal error: {exc}", args.json, _sys.stdout if args.json else _sys.stderr)
        return 2
    except NetdecompError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)} if args.json
              else f"error: {type(exc).__name__}: {exc}", args.json,
              _sys.stdout if args.json else _sys.stderr)
        return 1
    _emit(out, args.json, _sys.stdout)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
