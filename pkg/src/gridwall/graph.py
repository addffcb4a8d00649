"""Immutable undirected graphs with dense integer vertex ids.

Vertices are always 0..n-1. Edges are unordered pairs with no self-loops and
no duplicates. Optional per-vertex string labels ride along for display and
for the text format; structural operations ignore them.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    pass


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """An immutable simple graph. Build through build_graph(), not directly."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: Optional[tuple[Optional[str], ...]] = None

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        """Adjacency as bitmasks; bit v of adj_masks[u] set iff uv is an edge."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.neighbor_sets)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def label_ids(self) -> dict[str, int]:
        if self.labels is None:
            return {}
        return {lab: v for v, lab in enumerate(self.labels) if lab is not None}

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return self.neighbor_sets[v]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.degrees[v]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return _normalize_edge(u, v) in self.edge_set

    def label_of(self, v: int) -> Optional[str]:
        self._check_vertex(v)
        return None if self.labels is None else self.labels[v]

    def id_of(self, label: str) -> int:
        try:
            return self.label_ids[label]
        except KeyError:
            raise GraphError(f"no vertex labeled {label!r}") from None

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"vertex {v} out of range [0, {self.n})")

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Optional[Sequence[Optional[str]]] = None,
) -> Graph:
    """Validate, deduplicate, and canonically order the edge list.

    Duplicate edges (in either orientation) collapse to one. Self-loops and
    out-of-range endpoints are errors. Labels, when given, must have one slot
    per vertex and the non-None entries must be unique.
    """
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        if not (0 <= u < n) or not (0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        seen.add(_normalize_edge(u, v))
    lab_tuple: Optional[tuple[Optional[str], ...]] = None
    if labels is not None:
        lab_tuple = tuple(labels)
        if len(lab_tuple) != n:
            raise GraphError(f"expected {n} label slots, got {len(lab_tuple)}")
        named = [lab for lab in lab_tuple if lab is not None]
        if len(named) != len(set(named)):
            raise GraphError("duplicate vertex labels")
    return Graph(n=n, edges=tuple(sorted(seen)), labels=lab_tuple)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on `keep`, relabeled to dense ids.

    Returns (subgraph, old_ids) where old_ids[new_id] is the original vertex.
    """
    old_ids = tuple(sorted(set(keep)))
    for v in old_ids:
        g._check_vertex(v)
    new_id = {old: new for new, old in enumerate(old_ids)}
    edges = [
        (new_id[u], new_id[v])
        for u, v in g.edges
        if u in new_id and v in new_id
    ]
    labels = None
    if g.labels is not None:
        labels = [g.labels[v] for v in old_ids]
    return build_graph(len(old_ids), edges, labels), old_ids


def distance(g: Graph, u: int, v: int) -> Optional[int]:
    """BFS distance, or None if v is unreachable from u."""
    g._check_vertex(u)
    g._check_vertex(v)
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in g.neighbor_sets[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == v:
                    return dist[y]
                queue.append(y)
    return None


def bfs_distances(g: Graph, source: int) -> list[Optional[int]]:
    g._check_vertex(source)
    dist: list[Optional[int]] = [None] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.neighbor_sets[x]:
            if dist[y] is None:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def all_pairs_distances(g: Graph) -> list[list[Optional[int]]]:
    """n x n matrix of BFS distances; None marks unreachable pairs."""
    return [bfs_distances(g, v) for v in range(g.n)]


def enumerate_cycles(g: Graph, k: int) -> list[tuple[int, ...]]:
    """All simple cycles with exactly k vertices, each reported once.

    Canonical form: the vertex sequence starts at the cycle's minimum id and
    continues toward the smaller of its two neighbors on the cycle, so each
    cycle appears as its lexicographically least rotation/reflection. The
    returned list is lexicographically sorted.
    """
    if k < 3:
        raise GraphError(f"cycle length must be at least 3, got {k}")
    out: list[tuple[int, ...]] = []
    nbrs = [sorted(s) for s in g.neighbor_sets]
    path = [0] * k
    on_path = [False] * g.n

    def extend(depth: int) -> None:
        last = path[depth - 1]
        if depth == k:
            # close the cycle; path[1] < path[k-1] picks one direction
            if path[0] in g.neighbor_sets[last] and path[1] < path[k - 1]:
                out.append(tuple(path))
            return
        for y in nbrs[last]:
            if y > path[0] and not on_path[y]:
                path[depth] = y
                on_path[y] = True
                extend(depth + 1)
                on_path[y] = False

    for v in range(g.n):
        path[0] = v
        on_path[v] = True
        extend(1)
        on_path[v] = False
    return out


def shortest_odd_cycle(g: Graph) -> Optional[int]:
    """Length of a shortest odd cycle, or None when the graph is bipartite.

    Runs BFS on the bipartite double cover from each vertex: the distance from
    (v, even) to (v, odd) is the shortest odd closed walk through v, and a
    minimum-length odd closed walk is necessarily a cycle.
    """
    best: Optional[int] = None
    for v in range(g.n):
        # dist[x][p]: shortest walk v..x of parity p
        dist: list[list[Optional[int]]] = [[None, None] for _ in range(g.n)]
        dist[v][0] = 0
        queue = deque([(v, 0)])
        while queue:
            x, p = queue.popleft()
            d = dist[x][p]
            assert d is not None
            if best is not None and d >= best:
                continue
            for y in g.neighbor_sets[x]:
                q = 1 - p
                if dist[y][q] is None:
                    dist[y][q] = d + 1
                    queue.append((y, q))
        odd = dist[v][1]
        if odd is not None and (best is None or odd < best):
            best = odd
    return best


def two_coloring(g: Graph) -> Optional[list[int]]:
    """A proper 2-coloring by BFS, or None if some component is not bipartite."""
    color: list[Optional[int]] = [None] * g.n
    for start in range(g.n):
        if color[start] is not None:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.neighbor_sets[x]:
                if color[y] is None:
                    color[y] = 1 - color[x]  # type: ignore[operator]
                    queue.append(y)
                elif color[y] == color[x]:
                    return None
    return [c for c in color if c is not None] if None not in color else None


def _refine_classes(g: Graph) -> list[int]:
    # iterated neighbor-class refinement; stable class index per vertex
    cls = list(g.degrees)
    for _ in range(g.n):
        sig = [
            (cls[v], tuple(sorted(cls[w] for w in g.neighbor_sets[v])))
            for v in range(g.n)
        ]
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[s] for s in sig]
        if new == cls:
            break
        cls = new
    return cls


def find_isomorphism(
    g1: Graph, g2: Graph, *, size_guard: int = 30
) -> Optional["VertexMap"]:
    """An isomorphism g1 -> g2 for small graphs, or None (labels ignored).

    Raises GraphError when either graph exceeds size_guard vertices; raise the
    guard explicitly if you really mean it.
    """
    if max(g1.n, g2.n) > size_guard:
        raise GraphError(
            f"isomorphism guard: {max(g1.n, g2.n)} vertices exceeds {size_guard}"
        )
    if g1.n != g2.n or g1.m != g2.m:
        return None
    if sorted(g1.degrees) != sorted(g2.degrees):
        return None
    cls1, cls2 = _refine_classes(g1), _refine_classes(g2)
    if sorted(cls1) != sorted(cls2):
        return None
    n = g1.n
    # candidates per g1-vertex: g2-vertices in the same refinement class
    cand = [frozenset(w for w in range(n) if cls2[w] == cls1[v]) for v in range(n)]
    order = sorted(range(n), key=lambda v: (len(cand[v]), -g1.degrees[v], v))
    image: list[Optional[int]] = [None] * n
    used = [False] * n

    def match(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in sorted(cand[v]):
            if used[w]:
                continue
            ok = True
            for u in g1.neighbor_sets[v]:
                iu = image[u]
                if iu is not None and iu not in g2.neighbor_sets[w]:
                    ok = False
                    break
            if ok:
                # non-edges must stay non-edges (same counts make this cheap)
                for u in range(n):
                    iu = image[u]
                    if (
                        iu is not None
                        and u not in g1.neighbor_sets[v]
                        and u != v
                        and iu in g2.neighbor_sets[w]
                    ):
                        ok = False
                        break
            if ok:
                image[v] = w
                used[w] = True
                if match(i + 1):
                    return True
                image[v] = None
                used[w] = False
        return False

    if not match(0):
        return None
    return VertexMap(tuple(image))  # type: ignore[arg-type]


def are_isomorphic(g1: Graph, g2: Graph, *, size_guard: int = 30) -> bool:
    """Backtracking isomorphism test for small graphs (labels ignored)."""
    return find_isomorphism(g1, g2, size_guard=size_guard) is not None


def parse_graph(text: str) -> Graph:
    """Parse the plain text format.

    Line 1: "n m". Then m lines "u v" (0-based endpoints). Then optionally
    lines "# label u <string>". Blank lines are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty graph text")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"malformed header {lines[0]!r}; expected 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphError(f"malformed header {lines[0]!r}; expected integers") from None
    if m < 0:
        raise GraphError(f"negative edge count {m}")
    if len(lines) < 1 + m:
        raise GraphError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1 : 1 + m]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"malformed edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"malformed edge line {ln!r}") from None
        edges.append((u, v))
    labels: Optional[list[Optional[str]]] = None
    for ln in lines[1 + m :]:
        parts = ln.split(maxsplit=3)
        if len(parts) < 4 or parts[0] != "#" or parts[1] != "label":
            raise GraphError(f"unexpected trailing line {ln!r}")
        try:
            v = int(parts[2])
        except ValueError:
            raise GraphError(f"malformed label line {ln!r}") from None
        if not (0 <= v < n):
            raise GraphError(f"label for out-of-range vertex {v}")
        if labels is None:
            labels = [None] * n
        if labels[v] is not None:
            raise GraphError(f"duplicate label line for vertex {v}")
        labels[v] = parts[3]
    return build_graph(n, edges, labels)


def serialize_graph(g: Graph) -> str:
    """Inverse of parse_graph on canonical graphs; ends with a newline."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    if g.labels is not None:
        out.extend(
            f"# label {v} {lab}" for v, lab in enumerate(g.labels) if lab is not None
        )
    return "\n".join(out) + "\n"


_DOT_FILLS = [
    ("black", "white"),
    ("gray", "white"),
    ("lightgray", "black"),
    ("white", "black"),
]


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, classes: Optional[dict[str, Iterable[int]]] = None) -> str:
    """Render to Graphviz DOT, optionally filling disjoint vertex classes.

    Classes are styled in listing order with a small grayscale palette, the
    way skeleton figures shade F and D.
    """
    fill: dict[int, tuple[str, str]] = {}
    if classes:
        seen: set[int] = set()
        for idx, (name, members) in enumerate(classes.items()):
            style = _DOT_FILLS[idx % len(_DOT_FILLS)]
            for v in members:
                g._check_vertex(v)
                if v in seen:
                    raise GraphError(f"vertex {v} appears in two classes")
                seen.add(v)
                fill[v] = style
    lines = ["graph {", "  node [shape=circle, style=filled, fillcolor=white];"]
    for v in range(g.n):
        lab = g.label_of(v)
        attrs = [f"label={_dot_quote(lab if lab is not None else str(v))}"]
        if v in fill:
            fc, tc = fill[v]
            attrs.append(f"fillcolor={fc}")
            attrs.append(f"fontcolor={tc}")
        lines.append(f"  n{v} [{', '.join(attrs)}];")
    for u, v in g.edges:
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexMap:
    """A total map from 0..len(image)-1 into some target's vertex ids."""

    image: tuple[int, ...]

    @property
    def domain_size(self) -> int:
        return len(self.image)

    def __call__(self, v: int) -> int:
        return self.image[v]

    def image_set(self) -> frozenset[int]:
        return frozenset(self.image)

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    def is_surjective_onto(self, n: int) -> bool:
        return self.image_set() == frozenset(range(n))

    def is_bijection_on(self, n: int) -> bool:
        return self.domain_size == n and self.is_injective() and self.is_surjective_onto(n)

    def inverse(self) -> "VertexMap":
        if not self.is_bijection_on(self.domain_size):
            raise GraphError("inverse requires a bijection")
        inv = [0] * self.domain_size
        for v, w in enumerate(self.image):
            inv[w] = v
        return VertexMap(tuple(inv))

    def compose(self, inner: "VertexMap") -> "VertexMap":
        """self after inner: v -> self(inner(v))."""
        return VertexMap(tuple(self.image[w] for w in inner.image))


def identity_map(n: int) -> VertexMap:
    return VertexMap(tuple(range(n)))


@dataclass(frozen=True)
class Coloring:
    """A total coloring of a graph's vertices by target-graph vertex ids."""

    color_of: tuple[int, ...]

    @property
    def domain_size(self) -> int:
        return len(self.color_of)

    def __call__(self, v: int) -> int:
        return self.color_of[v]

    def classes(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.color_of):
            out.setdefault(c, []).append(v)
        return {c: tuple(vs) for c, vs in sorted(out.items())}
