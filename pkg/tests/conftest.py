"""Shared brute-force oracles and helpers.

Everything here is deliberately dumb: exhaustive enumeration over all target
tuples, an independent second transcription of the wall construction, and a
line-level DOT checker. The point is to have answers that cannot share a bug
with the package code.
"""

from __future__ import annotations

import itertools
import random
import re
from typing import Iterator, Optional

from gridwall import Coloring, Graph, build_graph

BRUTE_GUARD = 8  # pattern size above which brute enumeration is refused


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p
    ]
    return build_graph(n, edges)


def _edge_ok(target: Graph, x: int, y: int) -> bool:
    return (min(x, y), max(x, y)) in target.edge_set


def brute_maps(
    pattern: Graph,
    target: Graph,
    *,
    injective: bool = False,
    chi: Optional[Coloring] = None,
) -> Iterator[tuple[int, ...]]:
    """Every valid map as an image tuple, in lexicographic order."""
    assert pattern.n <= BRUTE_GUARD, "brute oracle refuses large patterns"
    for img in itertools.product(range(target.n), repeat=pattern.n):
        if injective and len(set(img)) != pattern.n:
            continue
        if chi is not None and any(
            chi.color_of[img[v]] != v for v in range(pattern.n)
        ):
            continue
        if all(_edge_ok(target, img[a], img[b]) for a, b in pattern.edges):
            yield img


def brute_hom_exists(pattern: Graph, target: Graph) -> bool:
    return next(brute_maps(pattern, target), None) is not None


def brute_emb_exists(pattern: Graph, target: Graph) -> bool:
    return next(brute_maps(pattern, target, injective=True), None) is not None


def brute_colemb_exists(pattern: Graph, target: Graph, chi: Coloring) -> bool:
    return next(brute_maps(pattern, target, injective=True, chi=chi), None) is not None


def brute_endo_counterexamples(g: Graph, frame) -> list[tuple[int, ...]]:
    """All non-surjective endomorphisms whose image covers `frame`."""
    out = []
    fset = set(frame)
    for img in brute_maps(g, g):
        image = set(img)
        if fset <= image and len(image) < g.n:
            out.append(img)
    return out


def brute_noncovering_embeddings(pattern: Graph, target: Graph, cover) -> list:
    """All embeddings of pattern into target missing some cover vertex."""
    cset = set(cover)
    return [
        img
        for img in brute_maps(pattern, target, injective=True)
        if cset - set(img)
    ]


# --- independent wall transcription --------------------------------------
#
# A second reading of the brick-wall construction, kept structurally apart
# from the package generator: vertices as (kind, i, j) triples, edges written
# per family straight from the picture, ids assigned in a different order.


def transcribed_wall(s: int, t: int) -> tuple[set[str], set[frozenset[str]]]:
    """Vertex label set and edge set (as label pairs) of the (s,t) wall."""
    verts: set[tuple[str, int, int]] = set()
    for j in range(1, t + 1):
        for i in range(1, s + 2):
            verts.add(("v", i, j))
            if j >= 2:
                verts.add(("u", i, j))
    top_kind = "v" if t % 2 == 1 else "u"
    for i in range(1, s + 2):
        verts.add((top_kind, i, t + 1))

    edges: set[frozenset[tuple[str, int, int]]] = set()
    for i in range(1, s + 1):  # bottom path on v_{.,1}
        edges.add(frozenset({("v", i, 1), ("v", i + 1, 1)}))
    for i in range(1, s + 1):  # top path on row t+1
        edges.add(frozenset({(top_kind, i, t + 1), (top_kind, i + 1, t + 1)}))
    for j in range(2, t + 1):  # brick rows alternate v, u, v, u, ...
        for i in range(1, s + 2):
            edges.add(frozenset({("v", i, j), ("u", i, j)}))
        for i in range(1, s + 1):
            edges.add(frozenset({("u", i, j), ("v", i + 1, j)}))
    for j in range(1, t + 1):  # vertical joints, alternating family by row
        kind = "v" if j % 2 == 1 else "u"
        for i in range(1, s + 2):
            edges.add(frozenset({(kind, i, j), (kind, i, j + 1)}))

    def lab(kind: str, i: int, j: int) -> str:
        return f"{kind}_{{{i},{j}}}"

    return (
        {lab(*v) for v in verts},
        {frozenset(lab(*x) for x in e) for e in edges},
    )


def graph_label_edges(g: Graph) -> set[frozenset[str]]:
    assert g.labels is not None
    return {frozenset({g.labels[u], g.labels[v]}) for u, v in g.edges}


# --- minimal DOT grammar check -------------------------------------------

_DOT_ID = r"[A-Za-z_][A-Za-z0-9_]*"
_DOT_ATTR = rf'{_DOT_ID}=(?:{_DOT_ID}|"(?:[^"\\]|\\.)*")'
_DOT_NODE = re.compile(rf"^({_DOT_ID})\s*\[{_DOT_ATTR}(?:,\s*{_DOT_ATTR})*\];$")
_DOT_EDGE = re.compile(rf"^({_DOT_ID})\s*--\s*({_DOT_ID});$")
_DOT_DEFAULT = re.compile(rf"^{_DOT_ID}\s*\[{_DOT_ATTR}(?:,\s*{_DOT_ATTR})*\];$")


def assert_valid_dot(text: str) -> tuple[int, int]:
    """Check the undirected-DOT shape; returns (node count, edge count).

    Accepts: 'graph {', default-attribute lines, node statements, edge
    statements, '}'. Every edge endpoint must be a declared node.
    """
    lines = text.splitlines()
    assert lines, "empty DOT output"
    assert lines[0].strip() == "graph {", f"bad first line: {lines[0]!r}"
    assert lines[-1].strip() == "}", f"bad last line: {lines[-1]!r}"
    declared: set[str] = set()
    edges = 0
    for ln in lines[1:-1]:
        body = ln.strip()
        if not body:
            continue
        m = _DOT_EDGE.match(body)
        if m:
            assert m.group(1) in declared, f"edge from undeclared node: {body!r}"
            assert m.group(2) in declared, f"edge to undeclared node: {body!r}"
            edges += 1
            continue
        m = _DOT_NODE.match(body)
        if m:
            if m.group(1) != "node":  # 'node [...]' is the default-attr form
                declared.add(m.group(1))
            continue
        raise AssertionError(f"line fits no DOT statement form: {body!r}")
    return len(declared), edges
