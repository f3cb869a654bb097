"""Command-line front end.

Subcommands: ingest, bound, check, oracle, export-dot.  All JSON output is
key-sorted and newline-terminated so fixtures diff cleanly; identical inputs
produce byte-identical output regardless of --jobs.

Exit codes: 0 success or passing check, 1 failing check or oracle
disagreement, 2 invalid input, 3 infinite bound.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import assignment as asg
from . import cosheaf, ingest, oracle
from .grid import GridSpec, basic_open, thicken


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_cosheaf(path: str) -> cosheaf.CosheafGraph:
    return cosheaf.from_json_obj(_load_json(path))


def _load_grid(path: str) -> GridSpec:
    obj = _load_json(path)
    if "grid" in obj:
        obj = obj["grid"]
    return GridSpec.from_wire(obj)


def _load_geometric(path: str) -> ingest.GeometricGraph:
    return ingest.GeometricGraph.from_json(Path(path).read_text())


def cmd_ingest(args: argparse.Namespace) -> int:
    g = _load_geometric(args.input)
    grid = _load_grid(args.grid) if args.grid else ingest.fit_grid([g], args.delta)
    F = ingest.build_cosheaf(g, grid)
    Path(args.output).write_text(cosheaf.to_json(F))
    _emit({
        "grid": grid.to_wire(),
        "nodes": F.node_count(),
        "links": F.link_count(),
        "elements_by_dim": {str(k): v for k, v in sorted(F.elements_by_dim().items())},
        "output": args.output,
    })
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    F = _load_cosheaf(args.f)
    G = _load_cosheaf(args.g)
    a = asg.Assignment.from_json_obj(_load_json(args.assignment))
    problems = asg.validate_assignment(F, G, a)
    if problems:
        _emit({"error": "invalid assignment", "violations": problems})
        return 2
    result = asg.basis_loss(F, G, a, jobs=args.jobs)
    sys.stdout.write(asg.result_to_json(result))
    return 3 if math.isinf(result.L_B) else 0


def cmd_check(args: argparse.Namespace) -> int:
    F = _load_cosheaf(args.f)
    G = _load_cosheaf(args.g)
    a = asg.Assignment.from_json_obj(_load_json(args.assignment))
    problems = asg.validate_assignment(F, G, a)
    if problems:
        _emit({"error": "invalid assignment", "violations": problems})
        return 2
    ok, witnesses = asg.loss_report(F, G, a, args.k, jobs=args.jobs)
    _emit({"k": args.k, "pass": ok, "witnesses": [w.to_json_obj() for w in witnesses]})
    return 0 if ok else 1


def cmd_oracle(args: argparse.Namespace) -> int:
    caps = oracle.TinyCaps(max_nodes_per_side=args.cap) if args.cap else oracle.TinyCaps()
    if args.mode in ("exact", "full-loss") and not args.g:
        raise ValueError(f"--g is required for {args.mode}")
    if args.mode == "exact":
        F = _load_cosheaf(args.f)
        G = _load_cosheaf(args.g)
        n_max = args.n_max if args.n_max is not None else 2 * F.grid.L
        got = oracle.exhaustive_interleaving(F, G, n_max, caps)
        _emit({"oracle": {
            "mode": "exact",
            "d_I": got if got is not None else f">{n_max}",
            "n_max": n_max,
        }})
        return 0
    if args.mode == "full-loss":
        if not args.assignment:
            raise asg.AssignmentError("--assignment is required for full-loss")
        F = _load_cosheaf(args.f)
        G = _load_cosheaf(args.g)
        a = asg.Assignment.from_json_obj(_load_json(args.assignment))
        rep = oracle.full_loss(F, G, a, caps)
        _emit({"oracle": {
            "mode": "full-loss",
            "L": cosheaf.fmt_extended(rep.value),
            "consistent_extension": rep.consistent_extension,
            "opens": rep.opens,
        }})
        return 0
    # pi0: geometric graphs in, slice counts cross-checked against direct
    # segment arithmetic over every occupied cell at radii 0..2
    graphs = [_load_geometric(args.f)]
    if args.g:
        graphs.append(_load_geometric(args.g))
    grid = ingest.fit_grid(graphs, args.delta)
    samples = 0
    disagreements = []
    for g in graphs:
        built = ingest.build_cosheaf(g, grid)
        for center in built.occupied_cells():
            for radius in range(3):
                samples += 1
                got = built.slice(center, radius).component_count
                cells = thicken(grid, basic_open(grid, center), radius)
                want, _ = oracle.geometric_pi0(g, grid, cells)
                if got != want:
                    disagreements.append({
                        "cell": cosheaf.cell_to_wire(center),
                        "radius": radius, "slice": got, "pi0": want,
                    })
    _emit({"oracle": {
        "mode": "pi0", "samples": samples,
        "agreements": samples - len(disagreements),
        "disagreements": disagreements,
    }})
    return 0 if not disagreements else 1


def cmd_export_dot(args: argparse.Namespace) -> int:
    F = _load_cosheaf(args.f)
    sys.stdout.write(cosheaf.to_dot(F))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mapperbound")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("ingest", help="build a cosheaf file from a geometric graph")
    q.add_argument("--input", required=True)
    q.add_argument("--delta", type=float, required=True)
    q.add_argument("--grid", help="reuse a grid (GridSpec JSON or any file with a grid key)")
    q.add_argument("--output", required=True)
    q.set_defaults(func=cmd_ingest)

    q = sub.add_parser("bound", help="evaluate the basis loss and the certified bound")
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--assignment", required=True)
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(func=cmd_bound)

    q = sub.add_parser("check", help="per-diagram pass/fail report at a fixed slack")
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--assignment", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("oracle", help="independent desk-scale verifiers")
    q.add_argument("--mode", choices=["exact", "pi0", "full-loss"], required=True)
    q.add_argument("--f", required=True)
    q.add_argument("--g")
    q.add_argument("--assignment")
    q.add_argument("--n-max", type=int, dest="n_max")
    q.add_argument("--cap", type=int)
    q.add_argument("--delta", type=float, default=1.0, help="grid step for pi0 mode")
    q.set_defaults(func=cmd_oracle)

    q = sub.add_parser("export-dot", help="emit the cosheaf graph as DOT text")
    q.add_argument("--f", required=True)
    q.set_defaults(func=cmd_export_dot)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ingest.IngestError, cosheaf.CosheafError, asg.AssignmentError,
            oracle.OracleCapError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
