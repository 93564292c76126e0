"""Command-line interface.

Exit codes: 0 ok, 2 bad parameters, 3 infeasible (or solver timeout),
4 representation overflow, 5 DCL violation, 6 non-unit label,
7 incomplete factorization.

Defaults can come from a JSON file named by ``$DYNCOPRIME_CONFIG``. Top-level
keys apply to every subcommand, keys under a subcommand name only to that
one. Flags on the command line win over both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import DclError, ParameterError
from .evolution import (
    DEFAULT_HORIZON,
    Frame,
    evolve,
    graph_period,
    verify_run,
)
from .graphs import FAMILIES, Graph, build_family
from .labelings import (
    Labeling,
    canonical_initial_labeling,
    canonical_scope_note,
    solve_coprime_labeling,
)
from .numtheory import carmichael_numbers_upto, generating_primes, korselt_check
from .transforms import KINDS, TransformSpec, parse_spec, sample_coprime_preservation

CONFIG_ENV = "DYNCOPRIME_CONFIG"

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_INFEASIBLE = 3
EXIT_OVERFLOW = 4
EXIT_VIOLATION = 5
EXIT_NON_UNIT = 6
EXIT_FACTORIZATION = 7


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def to_dot(g: Graph, frames, name: str = "G") -> str:
    """One undirected DOT graph per frame, node label = the vertex's label."""
    chunks = []
    for frame in frames:
        lines = [f'graph "{name}_t{frame.t}" {{', f'  label="t={frame.t}";']
        lines += [f'  {v} [label="{x}"];' for v, x in enumerate(frame.labels)]
        lines += [f"  {a} -- {b};" for a, b in g.edges]
        lines.append("}")
        chunks.append("\n".join(lines) + "\n")
    return "".join(chunks)


def to_table(frames) -> str:
    """Rows of labels, one per frame, in aligned text columns."""
    if not frames:
        return ""
    rows = [["t"] + [str(v) for v in range(len(frames[0].labels))]]
    rows += [[str(f.t)] + [str(x) for x in f.labels] for f in frames]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


# -- input handling ---------------------------------------------------------

def _parse_labels(text: str) -> Labeling:
    path = Path(text)
    if path.is_file():
        return Labeling.from_json(json.loads(path.read_text()))
    try:
        return Labeling(tuple(int(x) for x in text.split(",")))
    except ValueError:
        raise ParameterError(f"--labels is neither a file nor a comma-separated list: {text!r}") from None


def _load_inputs(args, need_labels: bool = True):
    """Resolve (graph, labeling, display name) from --family/--n or --graph."""
    labels = _parse_labels(args.labels) if args.labels else None
    if args.graph:
        data = json.loads(Path(args.graph).read_text())
        g = Graph.from_json(data.get("graph", data))
        if labels is None and "labels" in data:
            labels = Labeling.from_json(data)
        name = Path(args.graph).stem
    elif args.family:
        if args.n is None:
            raise ParameterError("--family needs --n")
        g = build_family(args.family, args.n)
        if labels is None and need_labels:
            labels = canonical_initial_labeling(args.family, args.n)
        name = f"{args.family}{args.n}"
    else:
        raise ParameterError("give either --graph PATH or --family NAME --n N")
    if need_labels and labels is None:
        raise ParameterError("no labeling: pass --labels or a file that contains one")
    if labels is not None and len(labels) != g.n:
        raise ParameterError(f"labeling has {len(labels)} entries, graph has {g.n} vertices")
    return g, labels, name


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--graph", help="graph JSON, or a construct output holding graph and labels")
    p.add_argument("--labels", help="labeling JSON file or comma-separated labels")


def _transform(args) -> TransformSpec:
    return parse_spec(args.transform)


# -- subcommands ------------------------------------------------------------

def cmd_construct(args, out) -> int:
    g = build_family(args.family, args.n)
    result = {"family": args.family, "n": args.n, "graph": g.to_json()}
    if args.solve:
        budget = args.budget if args.budget is not None else g.n
        solved = solve_coprime_labeling(g, budget, args.node_limit, args.time_limit)
        result.update(solved.to_json())
        if solved.status != "feasible":
            out.write(dumps(result))
            return EXIT_INFEASIBLE
        labeling = solved.labeling
    else:
        labeling = canonical_initial_labeling(args.family, args.n)
        note = canonical_scope_note(args.family, args.n)
        if note:
            result["note"] = note
    result.update(labeling.to_json())
    if args.format == "dot":
        out.write(to_dot(g, [Frame(0, labeling.values, "exact")], f"{args.family}{args.n}"))
    elif args.format == "table":
        out.write(to_table([Frame(0, labeling.values, "exact")]))
    else:
        out.write(dumps(result))
    return EXIT_OK


def cmd_evolve(args, out) -> int:
    g, f0, name = _load_inputs(args)
    spec = _transform(args)
    times = [int(x) for x in args.snapshots.split(",")] if args.snapshots else [args.t]
    frames = [evolve(g, f0, spec, t, args.representation, args.modulus) for t in times]
    if args.format == "dot":
        out.write(to_dot(g, frames, name))
    elif args.format == "table":
        out.write(to_table(frames))
    else:
        out.write(dumps({
            "graph": g.to_json(),
            "transform": spec.to_json(),
            "frames": [f.to_json() for f in frames],
        }))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    g, f0, _ = _load_inputs(args)
    spec = _transform(args)
    run = verify_run(
        g, f0, spec, args.horizon, args.representation, args.modulus, args.allow_modular_collisions
    )
    out.write(dumps(run.to_json()))
    return EXIT_OK if run.verified else EXIT_VIOLATION


def cmd_solve(args, out) -> int:
    g, _, _ = _load_inputs(args, need_labels=False)
    budget = args.budget if args.budget is not None else g.n
    result = solve_coprime_labeling(g, budget, args.node_limit, args.time_limit)
    out.write(dumps({"graph": g.to_json(), **result.to_json()}))
    return EXIT_OK if result.status == "feasible" else EXIT_INFEASIBLE


def cmd_period(args, out) -> int:
    n = args.modulus
    if args.generating:
        f0 = Labeling(tuple(generating_primes(n)))
        g = build_family("path", len(f0)) if not (args.graph or args.family) else _load_inputs(args, False)[0]
        if g.n != len(f0):
            raise ParameterError(f"{len(f0)} generating labels do not fit a graph on {g.n} vertices")
    else:
        g, f0, _ = _load_inputs(args)
    report = graph_period(f0, n)
    residues = [x % n for x in f0]
    warnings = []
    if len(set(residues)) != len(residues):
        msg = f"labels collide modulo {n}"
        if not args.allow_modular_collisions:
            raise ParameterError(msg + "; pass --allow-modular-collisions to analyse anyway")
        warnings.append(msg)
    out.write(dumps({
        "graph": g.to_json(),
        "f0": f0.to_json(),
        "period_report": report.to_json(),
        "warnings": warnings,
    }))
    return EXIT_OK


def cmd_carmichael(args, out) -> int:
    if args.scan_upto is not None:
        out.write(dumps({"scan_upto": args.scan_upto, "carmichael": carmichael_numbers_upto(args.scan_upto)}))
        return EXIT_OK
    if args.number is None:
        raise ParameterError("give a number or --scan-upto N")
    out.write(dumps(korselt_check(args.number).to_json()))
    return EXIT_OK


_MAP_EXAMPLES = {
    "power": TransformSpec("power", k=2),
    "prime_index": TransformSpec("prime_index"),
    "modular_power": TransformSpec("modular_power", k=2, m=15),
    "affine": TransformSpec("affine", p=2),
    "additive_shift": TransformSpec("additive_shift", c=1),
}


def cmd_maps(args, out) -> int:
    rows = []
    for kind in KINDS:
        spec = _MAP_EXAMPLES[kind]
        verdict = sample_coprime_preservation(spec, args.bound)
        rows.append({
            "kind": kind,
            "example": spec.to_json(),
            "map": spec.describe(),
            "declared_coprime_preserving": spec.declared_coprime_preserving,
            "box_bound": args.bound,
            "preserved_on_box": verdict.preserved,
            "counterexample": list(verdict.counterexample) if verdict.counterexample else None,
        })
    out.write(dumps({"maps": rows}))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dyncoprime", description="Dynamic coprime labelings of graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a family graph with its canonical or a solved labeling")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--solve", action="store_true", help="search a labeling in {1..budget} instead")
    p.add_argument("--budget", type=int)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--format", choices=("json", "dot", "table"), default="json")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("evolve", help="labels at time t (or several snapshots)")
    _add_input_args(p)
    p.add_argument("--transform", default="power:2")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--snapshots", help="comma-separated times, overrides --t")
    p.add_argument("--representation", choices=("exact", "power-form", "index-form", "modular"), default="exact")
    p.add_argument("--modulus", type=int)
    p.add_argument("--format", choices=("json", "dot", "table"), default="json")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="check the DCL property up to a horizon")
    _add_input_args(p)
    p.add_argument("--transform", default="power:2")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--representation", default="auto")
    p.add_argument("--modulus", type=int)
    p.add_argument("--allow-modular-collisions", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="decide whether a coprime labeling into {1..budget} exists")
    _add_input_args(p)
    p.add_argument("--budget", type=int)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("period", help="vertex orders, graph period and lambda(n)")
    _add_input_args(p)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--generating", action="store_true", help="use primes that generate (Z/nZ)^x as labels")
    p.add_argument("--allow-modular-collisions", action="store_true")
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("carmichael", help="Korselt certificate, or scan for Carmichael numbers")
    p.add_argument("number", type=int, nargs="?")
    p.add_argument("--scan-upto", type=int)
    p.set_defaults(func=cmd_carmichael)

    p = sub.add_parser("maps", help="list transform kinds and their coprime behaviour on a box")
    p.add_argument("--bound", type=int, default=30)
    p.set_defaults(func=cmd_maps)

    return parser


def _apply_config(parser: argparse.ArgumentParser) -> None:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return
    config = json.loads(Path(path).read_text())
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for name, sp in subparsers.choices.items():
        dests = {a.dest for a in sp._actions}
        values = {k.replace("-", "_"): v for k, v in config.items() if not isinstance(v, dict)}
        values.update({k.replace("-", "_"): v for k, v in config.get(name, {}).items()})
        sp.set_defaults(**{k: v for k, v in values.items() if k in dests})


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        _apply_config(parser)
    except (OSError, ValueError) as exc:
        print(f"error: bad config file: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except DclError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
