"""Command-line surface: graph I/O, generators, pipeline subcommands.

Text format (DIMACS-flavored, 1-based vertex ids):

    c <comment>
    p dmc <n> <m> <source>
    a <tail> <head> [capacity]      (capacity omitted means 1)

All JSON written to stdout uses 0-based vertex and edge ids and sorted
keys; diagnostics go to stderr. Exit codes: 0 success, 1 operation
error (including a failed verification), 2 parse or parameter error.
The ARBOR_SEED environment variable supplies the default seed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import generators
from .decomp import DEFAULT_PHI, build_hierarchy, hierarchy_from_json
from .errors import ArborError, InputError, ParameterError, UnsupportedGraphError
from .graphcore import DirectedGraph, cut_values, normalize
from .mincut import approx_rooted_mincut
from .oracle import exact_rooted_mincut, verify_packing
from .packing import PackingResult, pack

__all__ = ["parse_graph", "format_graph", "main"]


@dataclass(frozen=True)
class ParseDiagnostics:
    dropped_self_loops: int
    dropped_source_incoming: int


def parse_graph(text: str) -> tuple[DirectedGraph, ParseDiagnostics]:
    """Parse the text format into a normalized graph plus drop counts."""
    n = m = s = None
    raw: list[tuple[int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if n is not None:
                raise InputError(f"line {lineno}: duplicate problem line")
            if len(fields) != 5 or fields[1] != "dmc":
                raise InputError(f"line {lineno}: expected 'p dmc <n> <m> <s>'")
            try:
                n, m, s = int(fields[2]), int(fields[3]), int(fields[4])
            except ValueError as exc:
                raise InputError(f"line {lineno}: non-integer problem field") from exc
            if n < 1 or m < 0 or not 1 <= s <= n:
                raise InputError(f"line {lineno}: problem line out of range")
        elif fields[0] == "a":
            if n is None:
                raise InputError(f"line {lineno}: arc before problem line")
            if len(fields) not in (3, 4):
                raise InputError(f"line {lineno}: expected 'a <tail> <head> [cap]'")
            try:
                tail, head = int(fields[1]), int(fields[2])
                cap = int(fields[3]) if len(fields) == 4 else 1
            except ValueError as exc:
                raise InputError(f"line {lineno}: non-integer arc field") from exc
            if not (1 <= tail <= n and 1 <= head <= n):
                raise InputError(f"line {lineno}: arc endpoint out of range")
            if cap < 1:
                raise InputError(f"line {lineno}: capacity must be >= 1")
            raw.append((tail - 1, head - 1, cap))
        else:
            raise InputError(f"line {lineno}: unknown line type {fields[0]!r}")
    if n is None:
        raise InputError("missing problem line 'p dmc <n> <m> <s>'")
    if len(raw) != m:
        raise InputError(f"problem line declares {m} arcs, found {len(raw)}")
    loops = sum(1 for u, v, _c in raw if u == v)
    into_source = sum(1 for u, v, _c in raw if v == s - 1 and u != v)
    g = normalize(raw, n, s - 1)
    return g, ParseDiagnostics(loops, into_source)


def format_graph(g: DirectedGraph, comment: str | None = None) -> str:
    """Serialize a graph to the text format (1-based ids)."""
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"c {part}")
    lines.append(f"p dmc {g.n} {g.m} {g.source + 1}")
    for u, v, c in g.edges:
        lines.append(f"a {u + 1} {v + 1} {c}")
    return "\n".join(lines) + "\n"


def _emit(data: dict) -> None:
    sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _load_graph(path: str) -> DirectedGraph:
    text = Path(path).read_text()
    g, diag = parse_graph(text)
    if diag.dropped_self_loops or diag.dropped_source_incoming:
        print(
            f"note: dropped {diag.dropped_self_loops} self-loops and "
            f"{diag.dropped_source_incoming} source-incoming arcs",
            file=sys.stderr,
        )
    return g


def _default_seed() -> int:
    raw = os.environ.get("ARBOR_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"ARBOR_SEED must be an integer, got {raw!r}")


def _phi(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"invalid phi value {text!r}") from exc
    return value


def _cmd_gen(args) -> int:
    params: dict = {}
    if args.kind in ("random_gnm", "dag_layered", "cycle_plus_chords"):
        if args.n is None:
            raise ParameterError(f"{args.kind} requires --n")
        params["n"] = args.n
    if args.kind in ("random_gnm", "dag_layered"):
        if args.m is None:
            raise ParameterError(f"{args.kind} requires --m")
        params["m"] = args.m
    if args.kind == "cycle_plus_chords":
        params["chords"] = args.chords
    if args.kind == "two_cliques_bridge":
        params["half"] = args.half
    if args.kind == "known_packing":
        if args.n is None or args.k is None:
            raise ParameterError("known_packing requires --n and --k")
        params["n"] = args.n
        params["k"] = args.k
    if args.kind != "known_packing":
        params["max_cap"] = args.max_cap
    g = generators.generate(args.kind, args.seed, **params)
    text = format_graph(g, comment=f"kind={args.kind} seed={args.seed}")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_hierarchy(args) -> int:
    g = _load_graph(args.graph)
    hier = build_hierarchy(g, _phi(args.phi), args.seed)
    _emit(hier.to_json_dict())
    return 0


def _cmd_mincut(args) -> int:
    g = _load_graph(args.graph)
    data: dict = {"kind": "mincut"}
    if args.exact:
        value, side = exact_rooted_mincut(g)
        data.update(method="exact", value=value, cut=sorted(side))
    else:
        hier = build_hierarchy(g, _phi(args.phi), args.seed)
        report = approx_rooted_mincut(g, hier, args.seed, args.trials_mult)
        best = report.best
        data.update(
            method="approx",
            value=best.rho,
            cut=sorted(best.vertex_set),
            level=best.level,
            sampled_vertex=best.sampled_vertex,
            seed=args.seed,
        )
        if args.verbose:
            data["candidates"] = [
                {"cut": sorted(c.vertex_set), "value": c.rho, "level": c.level}
                for c in report.candidates
            ]
        if args.ratio:
            exact, _ = exact_rooted_mincut(g)
            data["exact"] = exact
            data["ratio_vs_exact"] = (best.rho / exact) if exact else 1.0
    _emit(data)
    return 0


def _cmd_pack(args) -> int:
    g = _load_graph(args.graph)
    result = pack(g, args.k, _phi(args.phi), args.seed)
    data = result.to_json_dict()
    data["seed"] = args.seed
    _emit(data)
    return 0


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    payload = json.loads(Path(args.result).read_text())
    kind = payload.get("kind")
    if kind == "packing":
        if payload["result"] == "arborescences":
            result = PackingResult(
                kind="arborescences",
                k=int(payload["k"]),
                trees=tuple(tuple(t) for t in payload["trees"]),
                congestion=int(payload["congestion"]),
            )
        else:
            result = PackingResult(
                kind="cut",
                k=int(payload["k"]),
                cut_vertices=frozenset(payload["cut"]),
                cut_delta=int(payload["delta"]),
            )
        report = verify_packing(g, result, int(payload["k"]))
    elif kind == "mincut":
        checks = []
        side = frozenset(payload["cut"])
        value = int(payload["value"])
        checks.append(
            {"name": "cut_nonempty", "ok": bool(side), "detail": ""}
        )
        checks.append(
            {
                "name": "source_excluded",
                "ok": g.source not in side,
                "detail": "",
            }
        )
        rho = cut_values(g, side).rho
        checks.append(
            {
                "name": "value_reeval",
                "ok": rho == value,
                "detail": f"recomputed {rho}",
            }
        )
        exact, _ = exact_rooted_mincut(g)
        checks.append(
            {
                "name": "value_at_least_exact",
                "ok": value >= exact,
                "detail": f"exact {exact}",
            }
        )
        report = {"kind": "verify", "ok": all(c["ok"] for c in checks), "checks": checks}
    elif kind == "hierarchy":
        hier = hierarchy_from_json(payload)
        try:
            hier.validate(g)
            report = {"kind": "verify", "ok": True, "checks": [
                {"name": "hierarchy_invariants", "ok": True, "detail": ""}
            ]}
        except ArborError as exc:
            report = {"kind": "verify", "ok": False, "checks": [
                {"name": "hierarchy_invariants", "ok": False, "detail": str(exc)}
            ]}
    else:
        raise ParameterError(f"cannot verify result of kind {kind!r}")
    _emit(report)
    return 0 if report["ok"] else 1


def _cmd_bench(args) -> int:
    corpus = sorted(Path(args.corpus).glob("*.dmc"))
    if not corpus:
        raise ParameterError(f"no .dmc files under {args.corpus}")
    for path in corpus:
        g = _load_graph(str(path))
        started = time.perf_counter()
        record: dict = {
            "kind": "bench",
            "file": path.name,
            "n": g.n,
            "m": g.m,
            "seed": args.seed,
        }
        hier = build_hierarchy(g, _phi(args.phi), args.seed)
        report = approx_rooted_mincut(g, hier, args.seed, args.trials_mult)
        exact, _ = exact_rooted_mincut(g)
        record["value"] = report.best.rho
        record["exact"] = exact
        record["ratio"] = (report.best.rho / exact) if exact else 1.0
        k = max(1, exact)
        record["k"] = k
        try:
            result = pack(g, k, _phi(args.phi), args.seed)
            record["pack_result"] = result.kind
            record["congestion"] = result.congestion
        except UnsupportedGraphError:
            record["pack_result"] = None
            record["congestion"] = None
        if args.timing:
            record["wall_time_s"] = round(time.perf_counter() - started, 6)
        sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arborpack",
        description="Rooted min-cut approximation and arborescence packing "
        "over directed expander hierarchies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(p) -> None:
        p.add_argument("--seed", type=int, default=_default_seed(),
                       help="RNG seed (default: ARBOR_SEED or 0)")

    def add_phi(p) -> None:
        p.add_argument("--phi", default=str(DEFAULT_PHI),
                       help="expansion target as a fraction (default 1/16)")

    p = sub.add_parser("gen", help="generate a graph in the text format")
    p.add_argument("kind", choices=generators.GENERATOR_KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--half", type=int, default=4)
    p.add_argument("--chords", type=int, default=4)
    p.add_argument("--max-cap", type=int, default=1)
    p.add_argument("--out")
    add_seed(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("hierarchy", help="build and print the hierarchy")
    p.add_argument("graph")
    add_phi(p)
    add_seed(p)
    p.set_defaults(func=_cmd_hierarchy)

    p = sub.add_parser("mincut", help="approximate (or exact) rooted min-cut")
    p.add_argument("graph")
    p.add_argument("--trials-mult", type=int, default=4,
                   help="sampling trials per component are ceil(mult*log2 n)")
    p.add_argument("--exact", action="store_true", help="run the exact oracle")
    p.add_argument("--ratio", action="store_true",
                   help="also compute the exact value and the ratio")
    p.add_argument("--verbose", action="store_true",
                   help="include every candidate examined")
    add_phi(p)
    add_seed(p)
    p.set_defaults(func=_cmd_mincut)

    p = sub.add_parser("pack", help="pack k arborescences or find a cut")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    add_phi(p)
    add_seed(p)
    p.set_defaults(func=_cmd_pack)

    p = sub.add_parser("verify", help="verify a result JSON against a graph")
    p.add_argument("result")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="run mincut+pack over a corpus directory")
    p.add_argument("corpus")
    p.add_argument("--trials-mult", type=int, default=4)
    p.add_argument("--timing", action="store_true",
                   help="include wall time (breaks byte-stability)")
    add_phi(p)
    add_seed(p)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (InputError, ParameterError) as exc:
        _emit({"kind": "error", "error_type": "parameter", "message": str(exc)})
        return 2
    except ArborError as exc:
        _emit({"kind": "error", "error_type": "operation", "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
