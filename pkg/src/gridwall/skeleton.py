"""Frames, skeletons, association of contracted vertices, and quotients.

A frame F of G is a vertex set such that every endomorphism of G whose image
covers F is surjective. A skeleton (F, D) additionally requires F and D
disjoint and every D-vertex to have degree at most 2 outside F. The quotient
(G minus F) / D keeps the vertices outside F and D and joins two of them when
some path with all internal vertices in D connects them (an edge counts as
such a path).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import Graph, GraphError, build_graph, induced_subgraph
from .patterns import SkeletonSpec
from .solver import DEFAULT_CONFIG, SearchConfig, find_endo_counterexample


class SkeletonError(GraphError):
    pass


@dataclass(frozen=True)
class Assoc:
    """What a contracted vertex stands for in the quotient.

    kind "vertex": the vertex is tied to quotient vertex a (it lies on a path
    from a to a degree-1 dead end inside D). kind "edge": it lies on a D-path
    joining the distinct quotient vertices a and b. kind "none": it sits on an
    all-D path or cycle touching at most one quotient vertex.
    """

    kind: str
    a: Optional[int] = None
    b: Optional[int] = None

    def endpoints(self) -> tuple[int, ...]:
        if self.kind == "vertex":
            return (self.a,)  # type: ignore[return-value]
        if self.kind == "edge":
            return (self.a, self.b)  # type: ignore[return-value]
        return ()


def _d_segments(host: Graph, d_set: frozenset[int]):
    """Connected pieces of host[D] with their outside attachments.

    Yields (piece_vertices, attachments) where attachments lists (q, count)
    for each outside neighbor q of the piece, counted with multiplicity.
    """
    seen: set[int] = set()
    for start in sorted(d_set):
        if start in seen:
            continue
        piece = []
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            piece.append(x)
            for y in host.neighbor_sets[x]:
                if y in d_set and y not in seen:
                    seen.add(y)
                    stack.append(y)
        attach: list[int] = []
        for x in piece:
            for y in host.neighbor_sets[x]:
                if y not in d_set:
                    attach.append(y)
        yield sorted(piece), sorted(attach)


def associate(host: Graph, d_set: Iterable[int]) -> dict[int, Assoc]:
    """Associate each D-vertex of `host` per the degree-at-most-2 discipline.

    Requires every D-vertex to have host-degree at most 2; the association is
    then unique. Vertex ids are host ids.
    """
    d = frozenset(d_set)
    for v in d:
        host._check_vertex(v)
        if host.degrees[v] > 2:
            raise SkeletonError(
                f"vertex {v} has degree {host.degrees[v]} in the host; "
                "association needs degree <= 2"
            )
    out: dict[int, Assoc] = {}
    for piece, attach in _d_segments(host, d):
        if len(attach) == 2 and attach[0] != attach[1]:
            tag = Assoc("edge", attach[0], attach[1])
        elif len(attach) == 1:
            tag = Assoc("vertex", attach[0])
        else:
            # 0 attachments, or both ends hang on the same quotient vertex:
            # no dead end and no two distinct endpoints to witness either kind
            tag = Assoc("none")
        for v in piece:
            out[v] = tag
    return out


@dataclass(frozen=True)
class QuotientResult:
    """Quotient graph plus the bookkeeping to read it against the original.

    old_ids[q] is the original vertex behind quotient vertex q; to_quotient
    inverts it. association is keyed and valued by original vertex ids.
    """

    quotient: Graph
    old_ids: tuple[int, ...]
    to_quotient: dict[int, int]
    association: dict[int, Assoc]
    removed_frame: frozenset[int]
    contracted: frozenset[int]


def _validate_sets(g: Graph, f_set: frozenset[int], d_set: frozenset[int]) -> None:
    for v in f_set | d_set:
        g._check_vertex(v)
    overlap = f_set & d_set
    if overlap:
        raise SkeletonError(f"F and D overlap on {sorted(overlap)}")


def quotient(g: Graph, skel: SkeletonSpec) -> QuotientResult:
    """(G minus F) / D with dense ids, labels carried over.

    Validates the structural skeleton conditions (disjointness and the
    degree bound), not the frame condition.
    """
    f_set, d_set = skel.F, skel.D
    _validate_sets(g, f_set, d_set)
    host, host_old = induced_subgraph(g, set(range(g.n)) - f_set)
    to_host = {old: new for new, old in enumerate(host_old)}
    d_host = frozenset(to_host[v] for v in d_set)
    assoc_host = associate(host, d_host)

    q_host = [v for v in range(host.n) if v not in d_host]
    to_q = {v: i for i, v in enumerate(q_host)}
    edges: set[tuple[int, int]] = set()
    for u, v in host.edges:
        if u in to_q and v in to_q:
            edges.add((to_q[u], to_q[v]))
    for piece, attach in _d_segments(host, d_host):
        if len(attach) == 2 and attach[0] != attach[1]:
            a, b = to_q[attach[0]], to_q[attach[1]]
            edges.add((min(a, b), max(a, b)))
    labels = None
    if g.labels is not None:
        labels = [g.labels[host_old[v]] for v in q_host]
    quot = build_graph(len(q_host), sorted(edges), labels)

    old_ids = tuple(host_old[v] for v in q_host)
    association = {
        host_old[v]: Assoc(
            tag.kind,
            None if tag.a is None else host_old[tag.a],
            None if tag.b is None else host_old[tag.b],
        )
        for v, tag in assoc_host.items()
    }
    return QuotientResult(
        quotient=quot,
        old_ids=old_ids,
        to_quotient={old: q for q, old in enumerate(old_ids)},
        association=association,
        removed_frame=f_set,
        contracted=d_set,
    )


def is_frame(
    g: Graph,
    frame: Iterable[int],
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    size_guard: int = 40,
    stats: Optional[dict] = None,
) -> bool:
    """Exact frame check by exhaustive endomorphism search.

    Refuses graphs above size_guard vertices; pass a larger guard explicitly
    to force big runs. Raises SearchLimitExceeded (indeterminate, never
    False) when cfg budgets run out.
    """
    if g.n > size_guard:
        raise SkeletonError(
            f"is_frame guard: {g.n} vertices exceeds {size_guard}; "
            "raise size_guard explicitly for larger graphs"
        )
    witness = find_endo_counterexample(g, frozenset(frame), cfg, stats=stats)
    return witness is None


@dataclass(frozen=True)
class SkeletonReport:
    frame_ok: bool
    disjoint_ok: bool
    degree_ok: bool
    degree_violations: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return self.frame_ok and self.disjoint_ok and self.degree_ok


def is_skeleton(
    g: Graph,
    skel: SkeletonSpec,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    size_guard: int = 40,
) -> SkeletonReport:
    """Check the three skeleton conditions, reported separately.

    The frame condition runs last and inherits is_frame's guard and limit
    behavior.
    """
    for v in skel.F | skel.D:
        g._check_vertex(v)
    disjoint_ok = not (skel.F & skel.D)
    violations = []
    if disjoint_ok:
        host, host_old = induced_subgraph(g, set(range(g.n)) - skel.F)
        to_host = {old: new for new, old in enumerate(host_old)}
        for v in sorted(skel.D):
            if host.degrees[to_host[v]] > 2:
                violations.append(v)
    degree_ok = disjoint_ok and not violations
    frame_ok = is_frame(g, skel.F, cfg, size_guard=size_guard)
    return SkeletonReport(
        frame_ok=frame_ok,
        disjoint_ok=disjoint_ok,
        degree_ok=degree_ok,
        degree_violations=tuple(violations),
    )
