"""Command-line entry point.

Subcommands: gen, skeleton, quotient, product, solve, check (frame, skeleton,
rigid), reduce, export, suite. Exit codes: 0 success/yes, 1 proven-no,
2 usage or input error, 3 resource limit hit before an answer. Data goes to
stdout (or -o files); diagnostics and human summaries that would interleave
with data go to stderr. Under --json, stdout carries exactly one JSON
document describing the run.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .graph import (
    Coloring,
    Graph,
    GraphError,
    parse_graph,
    serialize_graph,
    to_dot,
)
from .patterns import SkeletonSpec, grid_skeleton, make_grid, make_wall, wall_skeleton
from .product import build_product
from .reduction import ColEmbInstance, colemb_to_emb, hom_to_colemb
from .rigidity import is_rigid_exhaustive, rigidity_random_search
from .selfcheck import run_selfchecks
from .skeleton import is_skeleton, quotient
from .solver import (
    SearchConfig,
    SearchLimitExceeded,
    find_colored_embedding,
    find_embedding,
    find_endo_counterexample,
    find_homomorphism,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

# exact frame checking is a universal claim; above this size the CLI insists
# on an explicit opt-in rather than silently grinding
FRAME_CHECK_GUARD = 40
EXHAUSTIVE_RIGIDITY_GUARD = 4


@dataclass
class RunReport:
    command: list[str]
    timing: dict[str, float]
    result: dict
    exit_status: int

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "timing": {k: round(v, 6) for k, v in self.timing.items()},
            "result": self.result,
            "exit": self.exit_status,
        }


class _Phases:
    def __init__(self):
        self.timing: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timing[name] = self.timing.get(name, 0.0) + time.perf_counter() - t0


@dataclass
class _Output:
    """Routes artifact text and human lines so --json stdout stays one doc."""

    json_mode: bool
    wrote_data: bool = False
    lines: list[str] = field(default_factory=list)

    def data(self, text: str) -> None:
        # raw artifact on stdout; callers skip this in json mode and embed
        # the artifact in the payload instead
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        self.wrote_data = True

    def say(self, line: str) -> None:
        self.lines.append(line)

    def flush(self, report: RunReport) -> None:
        if self.json_mode:
            json.dump(report.to_json_dict(), sys.stdout, indent=2)
            sys.stdout.write("\n")
            stream = sys.stderr
        else:
            stream = sys.stderr if self.wrote_data else sys.stdout
        for line in self.lines:
            print(line, file=stream)
        if not self.json_mode and report.timing:
            joined = " ".join(f"{k}={v:.3f}s" for k, v in report.timing.items())
            print(f"timing: {joined}", file=sys.stderr)


# --- input helpers ------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from None


def _load_graph(path: str) -> Graph:
    return parse_graph(_read_text(path))


def _load_skeleton(path: str) -> SkeletonSpec:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: not valid JSON: {exc}") from None
    return SkeletonSpec.from_json_dict(doc)


def _load_coloring(path: str) -> Coloring:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: not valid JSON: {exc}") from None
    if isinstance(doc, dict):
        doc = doc.get("colors")
    if not isinstance(doc, list) or not all(isinstance(c, int) for c in doc):
        raise GraphError(
            f"{path}: expected a JSON list of vertex ids (or {{\"colors\": [...]}})"
        )
    return Coloring(tuple(doc))


_COORD_LABEL = re.compile(r"^\((\d+),(\d+)\)$")


def _corner_ids(g: Graph) -> list[int]:
    """The four corner vertices: by (i,j) labels when present, else the
    minimum-degree vertices."""
    coords = {}
    if g.labels is not None:
        for v, lab in enumerate(g.labels):
            m = _COORD_LABEL.match(lab or "")
            if not m:
                coords = {}
                break
            coords[(int(m.group(1)), int(m.group(2)))] = v
    if coords:
        s = max(i for i, _ in coords)
        t = max(j for _, j in coords)
        try:
            return [coords[(i, j)] for i in (1, s) for j in (1, t)]
        except KeyError:
            raise GraphError("coordinate labels do not form a full grid") from None
    if g.n == 0:
        raise GraphError("empty graph has no corners")
    dmin = min(g.degrees)
    return [v for v in range(g.n) if g.degrees[v] == dmin]


def _parse_frame_spec(spec: str, g: Graph) -> frozenset[int]:
    if spec == "corners":
        return frozenset(_corner_ids(g))
    if spec.startswith("@"):
        doc = json.loads(_read_text(spec[1:]))
        if not isinstance(doc, list) or not all(isinstance(v, int) for v in doc):
            raise GraphError(f"{spec[1:]}: expected a JSON list of vertex ids")
        return frozenset(doc)
    try:
        ids = [int(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError:
        raise GraphError(
            f"bad --frame value {spec!r}: expected 'corners', '@file', or ids"
        ) from None
    return frozenset(ids)


def _config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        node_limit=getattr(args, "limit_nodes", None),
        time_limit=getattr(args, "timeout", None),
        workers=getattr(args, "workers", 1),
    )


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise GraphError(f"cannot write {path}: {exc}") from None


def _emit_artifact(
    args: argparse.Namespace,
    out: _Output,
    payload: dict,
    key: str,
    text: str,
) -> None:
    """Send an artifact to -o, the payload (json mode), or stdout."""
    dest = getattr(args, "out", None)
    if dest:
        _write(dest, text)
        payload["path"] = dest
    elif out.json_mode:
        payload[key] = text
    else:
        out.data(text)


# --- subcommand handlers ------------------------------------------------


def _make_pattern(kind: str, s: int, t: int) -> Graph:
    return make_grid(s, t) if kind == "grid" else make_wall(s, t)


def _cmd_gen(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("build"):
        g = _make_pattern(args.kind, args.s, args.t)
    payload = {"kind": args.kind, "s": args.s, "t": args.t, "n": g.n, "m": g.m}
    with phases.phase("serialize"):
        _emit_artifact(args, out, payload, "graph", serialize_graph(g))
    out.say(f"{args.kind} ({args.s},{args.t}): {g.n} vertices, {g.m} edges")
    return payload, EXIT_YES


def _cmd_skeleton(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("build"):
        sk = (
            grid_skeleton(args.s, args.t)
            if args.kind == "grid"
            else wall_skeleton(args.s, args.t)
        )
    doc = sk.to_json_dict()
    payload = {
        "kind": args.kind,
        "s": args.s,
        "t": args.t,
        "frame_size": len(sk.F),
        "contracted_size": len(sk.D),
    }
    if out.json_mode and not getattr(args, "out", None):
        payload["skeleton"] = doc
    else:
        _emit_artifact(args, out, payload, "skeleton", json.dumps(doc, indent=2))
    out.say(f"{args.kind} ({args.s},{args.t}) skeleton: |F|={len(sk.F)} |D|={len(sk.D)}")
    return payload, EXIT_YES


def _cmd_quotient(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("load"):
        g = _load_graph(args.graph)
        sk = _load_skeleton(args.skel)
    with phases.phase("quotient"):
        qr = quotient(g, sk)
    payload = {
        "n": qr.quotient.n,
        "m": qr.quotient.m,
        "old_ids": list(qr.old_ids),
        "removed": len(qr.removed_frame),
        "contracted": len(qr.contracted),
    }
    with phases.phase("serialize"):
        _emit_artifact(args, out, payload, "graph", serialize_graph(qr.quotient))
    out.say(
        f"quotient: {qr.quotient.n} vertices, {qr.quotient.m} edges "
        f"(removed {len(qr.removed_frame)}, contracted {len(qr.contracted)})"
    )
    return payload, EXIT_YES


def _cmd_product(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("load"):
        g = _load_graph(args.graph)
        sk = _load_skeleton(args.skel)
        h = _load_graph(args.host)
        chi = _load_coloring(args.chi)
    with phases.phase("build"):
        p = build_product(g, sk, h, chi)
    counts: dict[str, int] = {}
    for pv in p.vertices:
        counts[str(pv.cls)] = counts.get(str(pv.cls), 0) + 1
    payload = {"n": p.graph.n, "m": p.graph.m, "class_sizes": counts}
    with phases.phase("write"):
        _write(args.out, serialize_graph(p.graph))
        payload["path"] = args.out
        if args.provenance:
            vertices = [
                {
                    "id": i,
                    "class": pv.cls,
                    "base_vertex": pv.g,
                    "h_vertex": pv.h,
                    "h_edge": list(pv.e) if pv.e is not None else None,
                    "label": pv.label(),
                }
                for i, pv in enumerate(p.vertices)
            ]
            _write(
                args.provenance,
                json.dumps({"class_sizes": counts, "vertices": vertices}, indent=2),
            )
            payload["provenance_path"] = args.provenance
    out.say(
        f"product: {p.graph.n} vertices, {p.graph.m} edges, "
        f"classes {counts} -> {args.out}"
    )
    return payload, EXIT_YES


def _cmd_solve(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("load"):
        pattern = _load_graph(args.graph)
        target = _load_graph(args.host)
        chi = _load_coloring(args.chi) if args.chi else None
    if args.mode == "colemb":
        if chi is None:
            raise GraphError("solve colemb needs --chi")
        if chi.domain_size != target.n:
            raise GraphError(
                f"coloring covers {chi.domain_size} vertices, target has {target.n}"
            )
    cfg = _config(args)
    stats: dict = {}
    with phases.phase("search"):
        if args.mode == "hom":
            found = find_homomorphism(pattern, target, cfg, stats=stats)
        elif args.mode == "emb":
            found = find_embedding(pattern, target, cfg, stats=stats)
        else:
            found = find_colored_embedding(pattern, target, chi, cfg, stats=stats)
    payload = {
        "mode": args.mode,
        "found": found is not None,
        "map": None if found is None else list(found.image),
        "nodes": stats.get("nodes"),
    }
    if found is None:
        out.say(f"no {args.mode} exists ({stats.get('nodes', 0)} nodes)")
        return payload, EXIT_NO
    if not out.json_mode:
        out.data("".join(f"{v} {w}\n" for v, w in enumerate(found.image)))
    out.say(f"{args.mode} found ({stats.get('nodes', 0)} nodes)")
    return payload, EXIT_YES


def _require_frame_scale_optin(g: Graph, unsafe: bool) -> None:
    if g.n > FRAME_CHECK_GUARD and not unsafe:
        raise GraphError(
            f"graph has {g.n} vertices; exact frame checking above "
            f"{FRAME_CHECK_GUARD} needs --unsafe (may run long)"
        )


def _cmd_check_frame(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("load"):
        g = _load_graph(args.graph)
        if args.skel:
            frame = _load_skeleton(args.skel).F
        elif args.frame is not None:  # "" is the empty frame, a real question
            frame = _parse_frame_spec(args.frame, g)
        else:
            raise GraphError("check frame needs --skel or --frame")
    _require_frame_scale_optin(g, args.unsafe)
    stats: dict = {}
    with phases.phase("check"):
        witness = find_endo_counterexample(g, frame, _config(args), stats=stats)
    payload = {
        "frame_size": len(frame),
        "is_frame": witness is None,
        "witness": None if witness is None else list(witness.image),
        "nodes": stats.get("nodes"),
    }
    if witness is None:
        out.say(f"frame: every covering endomorphism is surjective ({len(frame)} vertices)")
        return payload, EXIT_YES
    out.say("not a frame: found a non-surjective endomorphism covering the set")
    return payload, EXIT_NO


def _cmd_check_skeleton(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("load"):
        g = _load_graph(args.graph)
        sk = _load_skeleton(args.skel)
    _require_frame_scale_optin(g, args.unsafe)
    with phases.phase("check"):
        rep = is_skeleton(g, sk, _config(args), size_guard=g.n)
    payload = {
        "ok": rep.ok,
        "frame_ok": rep.frame_ok,
        "disjoint_ok": rep.disjoint_ok,
        "degree_ok": rep.degree_ok,
        "degree_violations": list(rep.degree_violations),
    }
    out.say(
        f"skeleton: frame={rep.frame_ok} disjoint={rep.disjoint_ok} "
        f"degree={rep.degree_ok}"
    )
    return payload, EXIT_YES if rep.ok else EXIT_NO


def _cmd_check_rigid(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("load"):
        g = _load_graph(args.graph)
        sk = _load_skeleton(args.skel)
    cfg = _config(args)
    with phases.phase("search"):
        if args.exhaustive:
            guard = g.n if args.unsafe else EXHAUSTIVE_RIGIDITY_GUARD
            verdict = is_rigid_exhaustive(
                g, sk, cfg, max_h=args.max_h, size_guard=guard
            )
        else:
            verdict = rigidity_random_search(
                g, sk, samples=args.samples, seed=args.seed, max_h=args.max_h, cfg=cfg
            )
    payload = {
        "status": verdict.status,
        "samples": verdict.samples,
        "seed": verdict.seed,
        "max_h": verdict.max_h,
        "note": verdict.note,
    }
    if verdict.status == "counterexample":
        assert verdict.witness_h is not None and verdict.witness_chi is not None
        payload["witness"] = {
            "h_n": verdict.witness_h.n,
            "h_edges": [list(e) for e in verdict.witness_h.edges],
            "coloring": list(verdict.witness_chi.color_of),
            "embedding": list(verdict.witness_embedding.image),  # type: ignore[union-attr]
            "missed_frame_vertex": verdict.missed_vertex,
            "sample_index": verdict.sample_index,
        }
        out.say(
            f"counterexample: an embedding misses the copy of frame vertex "
            f"{verdict.missed_vertex}"
        )
        return payload, EXIT_NO
    out.say(f"rigidity: {verdict.status}" + (f" ({verdict.note})" if verdict.note else ""))
    return payload, EXIT_YES


def _cmd_reduce(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    outdir = Path(args.out)
    with phases.phase("load"):
        g = _load_graph(args.graph)
        h = _load_graph(args.host)
        chi = _load_coloring(args.chi)
    with phases.phase("reduce"):
        if args.what == "hom-to-colemb":
            inst = hom_to_colemb(g, h, chi)
            prov_doc = {
                "kind": "hom-to-colemb",
                "pattern_n": inst.pattern.n,
                "host_n": inst.host.n,
                "coloring": list(inst.coloring.color_of),
            }
            pattern_text = serialize_graph(inst.pattern)
            target_text = serialize_graph(inst.host)
        else:
            src = ColEmbInstance(pattern=g, host=h, coloring=chi)
            emb_inst = colemb_to_emb(src, args.family)
            prov = emb_inst.provenance
            assert prov is not None
            counts: dict[str, int] = {}
            for pv in prov.product.vertices:
                counts[str(pv.cls)] = counts.get(str(pv.cls), 0) + 1
            prov_doc = {
                "kind": "colemb-to-emb",
                "family": prov.family,
                "s": prov.s,
                "t": prov.t,
                "skeleton": prov.skel.to_json_dict(),
                "pattern_to_quotient": list(prov.pattern_to_quotient.image),
                "host_coloring": list(prov.product.chi.color_of),
                "class_sizes": counts,
            }
            pattern_text = serialize_graph(emb_inst.pattern)
            target_text = serialize_graph(emb_inst.host)
    with phases.phase("write"):
        try:
            outdir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise GraphError(f"cannot create {outdir}: {exc}") from None
        _write(str(outdir / "pattern.g"), pattern_text)
        _write(str(outdir / "target.g"), target_text)
        _write(str(outdir / "provenance.json"), json.dumps(prov_doc, indent=2))
    payload = {
        "kind": args.what,
        "pattern": str(outdir / "pattern.g"),
        "target": str(outdir / "target.g"),
        "provenance": str(outdir / "provenance.json"),
    }
    out.say(f"{args.what}: wrote pattern.g, target.g, provenance.json to {outdir}")
    return payload, EXIT_YES


def _cmd_export(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("load"):
        g = _load_graph(args.graph)
        classes = None
        if args.skel:
            sk = _load_skeleton(args.skel)
            classes = {"frame": sorted(sk.F), "contracted": sorted(sk.D)}
    payload = {"n": g.n, "m": g.m}
    with phases.phase("serialize"):
        _emit_artifact(args, out, payload, "dot", to_dot(g, classes=classes))
    out.say(f"dot export: {g.n} vertices, {g.m} edges")
    return payload, EXIT_YES


def _cmd_suite(args, phases: _Phases, out: _Output) -> tuple[dict, int]:
    with phases.phase("checks"):
        results = run_selfchecks(quick=args.quick)
    failures = [r for r in results if not r.ok]
    for r in results:
        mark = "ok  " if r.ok else "FAIL"
        line = f"{mark} {r.name:40s} {r.seconds:7.2f}s"
        out.say(line if r.ok else f"{line}  {r.detail}")
    out.say(f"{len(results) - len(failures)}/{len(results)} checks passed")
    payload = {
        "checks": [
            {"name": r.name, "ok": r.ok, "seconds": round(r.seconds, 3), "detail": r.detail}
            for r in results
        ],
        "failures": len(failures),
    }
    return payload, EXIT_YES if not failures else EXIT_NO


# --- parser and dispatch ------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="single JSON report on stdout")
    common.add_argument("--seed", type=int, default=0, help="randomness seed (default 0)")
    common.add_argument("--workers", type=int, default=1, help="parallel workers (default 1)")

    limits = argparse.ArgumentParser(add_help=False)
    limits.add_argument("--limit-nodes", type=int, default=None, metavar="N",
                        help="abort the search after N nodes (exit 3)")
    limits.add_argument("--timeout", type=float, default=None, metavar="S",
                        help="abort the search after S seconds (exit 3)")

    top = argparse.ArgumentParser(
        prog="gridwall",
        description="Pattern graphs, skeleton quotients, product targets, "
        "rigidity checks, and embedding reductions.",
    )
    sub = top.add_subparsers(dest="cmd", required=True, metavar="subcommand")

    p = sub.add_parser("gen", parents=[common], help="generate a pattern graph")
    p.add_argument("kind", choices=("grid", "wall"))
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("-o", "--out", default=None, help="output file (default stdout)")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("skeleton", parents=[common], help="emit a standard skeleton as JSON")
    p.add_argument("kind", choices=("grid", "wall"))
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("-o", "--out", default=None, help="output file (default stdout)")
    p.set_defaults(handler=_cmd_skeleton)

    p = sub.add_parser("quotient", parents=[common], help="remove F and contract D")
    p.add_argument("-g", "--graph", required=True, help="graph file")
    p.add_argument("--skel", required=True, help="skeleton JSON file")
    p.add_argument("-o", "--out", default=None, help="output file (default stdout)")
    p.set_defaults(handler=_cmd_quotient)

    p = sub.add_parser("product", parents=[common], help="build the product target")
    p.add_argument("-g", "--graph", required=True, help="base graph file")
    p.add_argument("--skel", required=True, help="skeleton JSON file")
    p.add_argument("-H", "--host", required=True, help="H graph file")
    p.add_argument("--chi", required=True, help="coloring JSON file")
    p.add_argument("-o", "--out", required=True, help="product graph output file")
    p.add_argument("--provenance", default=None, help="vertex provenance JSON output")
    p.set_defaults(handler=_cmd_product)

    p = sub.add_parser("solve", parents=[common, limits], help="search for a map")
    p.add_argument("mode", choices=("hom", "emb", "colemb"))
    p.add_argument("-g", "--graph", required=True, help="pattern graph file")
    p.add_argument("-H", "--host", required=True, help="target graph file")
    p.add_argument("--chi", default=None, help="coloring JSON (colemb only)")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("check", help="verify frame/skeleton/rigidity properties")
    csub = p.add_subparsers(dest="what", required=True, metavar="what")

    c = csub.add_parser("frame", parents=[common, limits], help="exact frame check")
    c.add_argument("-g", "--graph", required=True, help="graph file")
    c.add_argument("--skel", default=None, help="skeleton JSON (uses its F)")
    c.add_argument("--frame", default=None,
                   help="'corners', comma-separated ids, or @file with a JSON list")
    c.add_argument("--unsafe", action="store_true",
                   help=f"allow graphs above {FRAME_CHECK_GUARD} vertices")
    c.set_defaults(handler=_cmd_check_frame)

    c = csub.add_parser("skeleton", parents=[common, limits], help="skeleton conditions")
    c.add_argument("-g", "--graph", required=True, help="graph file")
    c.add_argument("--skel", required=True, help="skeleton JSON file")
    c.add_argument("--unsafe", action="store_true",
                   help=f"allow graphs above {FRAME_CHECK_GUARD} vertices")
    c.set_defaults(handler=_cmd_check_skeleton)

    c = csub.add_parser("rigid", parents=[common, limits], help="rigidity search")
    c.add_argument("-g", "--graph", required=True, help="graph file")
    c.add_argument("--skel", required=True, help="skeleton JSON file")
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true",
                      help="enumerate every (H, coloring) up to --max-h")
    mode.add_argument("--samples", type=int, default=None, metavar="N",
                      help="randomized search over N instances")
    c.add_argument("--max-h", type=int, default=None, metavar="M",
                   help="largest H vertex count (default 2|V|)")
    c.add_argument("--unsafe", action="store_true",
                   help="lift the exhaustive-mode size guard")
    c.set_defaults(handler=_cmd_check_rigid)

    p = sub.add_parser("reduce", help="instance reductions")
    rsub = p.add_subparsers(dest="what", required=True, metavar="what")

    r = rsub.add_parser("hom-to-colemb", parents=[common],
                        help="partitioned homomorphism to colored embedding")
    r.add_argument("-g", "--graph", required=True, help="pattern graph file")
    r.add_argument("-H", "--host", required=True, help="H graph file")
    r.add_argument("--chi", required=True, help="coloring of H by pattern vertices")
    r.add_argument("-o", "--out", required=True, help="output directory")
    r.set_defaults(handler=_cmd_reduce)

    r = rsub.add_parser("colemb-to-emb", parents=[common],
                        help="colored embedding to plain embedding over a family product")
    r.add_argument("--family", choices=("grid", "wall"), required=True)
    r.add_argument("-g", "--graph", required=True, help="colored pattern graph file")
    r.add_argument("-H", "--host", required=True, help="host graph file")
    r.add_argument("--chi", required=True, help="coloring of the host by pattern vertices")
    r.add_argument("-o", "--out", required=True, help="output directory")
    r.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("export", parents=[common], help="export to DOT")
    p.add_argument("format", choices=("dot",))
    p.add_argument("-g", "--graph", required=True, help="graph file")
    p.add_argument("--skel", default=None, help="skeleton JSON for class highlighting")
    p.add_argument("-o", "--out", default=None, help="output file (default stdout)")
    p.set_defaults(handler=_cmd_export)

    p = sub.add_parser("suite", parents=[common], help="run the invariant checks")
    p.add_argument("--quick", action="store_true", help="fast subset only")
    p.set_defaults(handler=_cmd_suite)

    return top


def dispatch(argv: list[str]) -> RunReport:
    """Parse and run one command; prints output and returns the run report.

    Usage errors raise SystemExit(2) via argparse.
    """
    args = _build_parser().parse_args(argv)
    phases = _Phases()
    out = _Output(json_mode=getattr(args, "json", False))
    try:
        payload, code = args.handler(args, phases, out)
    except SearchLimitExceeded as exc:
        payload = {"error": str(exc), "nodes": exc.nodes, "indeterminate": True}
        print(f"limit exceeded: {exc}", file=sys.stderr)
        code = EXIT_LIMIT
    except GraphError as exc:
        payload = {"error": str(exc)}
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    report = RunReport(
        command=list(argv), timing=phases.timing, result=payload, exit_status=code
    )
    out.flush(report)
    return report


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]).exit_status)


if __name__ == "__main__":
    main()
