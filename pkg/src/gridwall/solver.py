"""Backtracking search for homomorphisms, embeddings, and colored embeddings.

All searches are deterministic: variables follow a static BFS order (from the
highest-degree vertex, ties to the lowest id) unless min-domain ordering is
requested, and values are always tried in ascending vertex id. Domains are
bitmasks over target vertices.

Pruning rules are mode-specific. Plain homomorphism search uses adjacency
consistency only. Embedding search additionally filters by degree, prunes by
exact distances (a target at distance > the pattern distance from an assigned
image is impossible), and keeps an injectivity/coverage union check. The
endomorphism-counterexample search is a homomorphism search but distance
pruning stays sound there because any homomorphism contracts distances, and
it is essential at the scale the frame checks run at.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .graph import (
    Coloring,
    Graph,
    GraphError,
    VertexMap,
    bfs_distances,
    induced_subgraph,
)

VARIABLE_ORDERS = ("static-bfs", "min-domain")


class SearchLimitExceeded(RuntimeError):
    """Raised when a search hits its node or time budget before finishing."""

    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes


@dataclass(frozen=True)
class SearchConfig:
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    variable_order: str = "static-bfs"
    workers: int = 1

    def __post_init__(self):
        if self.variable_order not in VARIABLE_ORDERS:
            raise GraphError(
                f"unknown variable order {self.variable_order!r}; "
                f"expected one of {VARIABLE_ORDERS}"
            )
        if self.workers < 1:
            raise GraphError(f"workers must be >= 1, got {self.workers}")


DEFAULT_CONFIG = SearchConfig()


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_map(
    pattern: Graph,
    target: Graph,
    f: VertexMap,
    mode: str,
    chi: Optional[Coloring] = None,
) -> VerifyResult:
    """Check a candidate map. mode is "hom", "emb", or "colemb".

    colemb verifies a color-respecting embedding: chi colors target vertices
    by pattern vertices and chi(f(v)) must equal v.
    """
    if mode not in ("hom", "emb", "colemb"):
        raise GraphError(f"unknown verify mode {mode!r}")
    if f.domain_size != pattern.n:
        return VerifyResult(False, f"map covers {f.domain_size} of {pattern.n} vertices")
    for v, w in enumerate(f.image):
        if not (0 <= w < target.n):
            return VerifyResult(False, f"f({v}) = {w} is not a target vertex")
    for u, v in pattern.edges:
        if not target.has_edge(f.image[u], f.image[v]):
            return VerifyResult(
                False, f"edge ({u},{v}) maps to non-edge ({f.image[u]},{f.image[v]})"
            )
    if mode == "emb" and not f.is_injective():
        return VerifyResult(False, "map is not injective")
    if mode == "colemb":
        if chi is None:
            raise GraphError("colemb verification needs the coloring")
        if chi.domain_size != target.n:
            raise GraphError("coloring does not cover the target")
        for v in range(pattern.n):
            if chi.color_of[f.image[v]] != v:
                return VerifyResult(
                    False,
                    f"chi(f({v})) = {chi.color_of[f.image[v]]}, expected {v}",
                )
    return VerifyResult(True)


def _static_bfs_order(g: Graph) -> list[int]:
    # BFS from the highest-degree vertex; restart on the next unvisited
    # highest-degree vertex for disconnected graphs. Ties go to lower ids.
    rank = sorted(range(g.n), key=lambda v: (-g.degrees[v], v))
    seen = [False] * g.n
    order: list[int] = []
    for root in rank:
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(g.neighbor_sets[x], key=lambda y: (-g.degrees[y], y)):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    return order


def _distance_matrix(g: Graph) -> list[list[int]]:
    # -1 encodes unreachable
    out = []
    for v in range(g.n):
        row = bfs_distances(g, v)
        out.append([-1 if d is None else d for d in row])
    return out


def _ball_table(g: Graph) -> list[list[int]]:
    """ball[w][d] = bitmask of vertices at distance <= d from w; the last
    entry is w's whole component (valid for every larger d)."""
    table = []
    for w in range(g.n):
        dist = bfs_distances(g, w)
        ecc = max((d for d in dist if d is not None), default=0)
        masks = [0] * (ecc + 1)
        for x, d in enumerate(dist):
            if d is not None:
                masks[d] |= 1 << x
        for d in range(1, ecc + 1):
            masks[d] |= masks[d - 1]
        table.append(masks)
    return table


def _ac_narrow(pattern: Graph, tadj: Sequence[int], domains: list[int]) -> bool:
    """Adjacency arc consistency to fixpoint. Returns False on a wipeout."""
    pedges = pattern.edges
    changed = True
    while changed:
        changed = False
        for u, v in pedges:
            for a, b in ((u, v), (v, u)):
                union = 0
                m = domains[b]
                while m:
                    low = m & -m
                    union |= tadj[low.bit_length() - 1]
                    m ^= low
                new = domains[a] & union
                if new != domains[a]:
                    if not new:
                        return False
                    domains[a] = new
                    changed = True
    return True


class _Engine:
    """One backtracking search over bitmask domains. Yields image tuples."""

    def __init__(
        self,
        pattern: Graph,
        target_n: int,
        tadj: Sequence[int],
        domains: list[int],
        *,
        injective: bool,
        pdist: Optional[list[list[int]]] = None,
        tballs: Optional[list[list[int]]] = None,
        coverage_mask: int = 0,
        coverage_mode: str = "require",
        static_order: Optional[list[int]] = None,
        node_limit: Optional[int] = None,
        deadline: Optional[float] = None,
        node_base: int = 0,
        maintain_ac: bool = False,
        twin_classes: Optional[list[int]] = None,
    ):
        self.pattern = pattern
        self.pn = pattern.n
        self.tadj = list(tadj)
        self.domains = domains
        self.injective = injective
        self.pdist = pdist
        self.tballs = tballs
        if coverage_mode not in ("require", "forbid"):
            raise ValueError(f"unknown coverage mode {coverage_mode!r}")
        self.cov_mask = coverage_mask
        self.cov_mode = coverage_mode
        self.twins = twin_classes
        self.static_order = static_order
        self.maintain_ac = maintain_ac
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = node_base
        self.padj = pattern.adj_masks
        self.image: list[int] = [-1] * self.pn
        self.active: list[int] = list(range(self.pn))
        self.hits_mask = 0  # coverage targets already used as values
        self.hit_count = [0] * target_n if coverage_mask else None
        self.used_mask = 0

    def _avail(self) -> int:
        """Mask of usable target values; injectivity is applied lazily at
        read points rather than written into every domain on each assign."""
        return ~self.used_mask if self.injective else -1

    def _prune_ok(self) -> bool:
        avail = self._avail()
        union = 0
        for u in self.active:
            d = self.domains[u] & avail
            if not d:
                return False
            union |= d
        if self.cov_mode == "forbid":
            # looking for a map that misses a coverage vertex; once the
            # partial image hits them all, no completion can miss one
            if not (self.cov_mask & ~self.hits_mask):
                return False
        elif self.cov_mask:
            if self.cov_mask & ~(union | self.hits_mask):
                return False
            uncovered = (self.cov_mask & ~self.hits_mask).bit_count()
            if uncovered > len(self.active):
                return False
        if self.injective and union.bit_count() < len(self.active):
            return False
        return True

    def assign(self, v: int, w: int) -> Optional[list[tuple[int, int]]]:
        """Apply v -> w with propagation; returns an undo trail or None."""
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise SearchLimitExceeded(f"node limit {self.node_limit} hit", self.nodes)
        if self.deadline is not None and self.nodes % 512 == 0:
            if time.monotonic() > self.deadline:
                raise SearchLimitExceeded("time limit hit", self.nodes)
        trail: list[tuple[int, int]] = [(v, self.domains[v])]
        self.domains[v] = 1 << w
        self.image[v] = w
        self.active.remove(v)
        self.used_mask |= 1 << w
        wbit = 1 << w
        if self.cov_mask & wbit:
            self.hits_mask |= wbit
            self.hit_count[w] += 1  # type: ignore[index]
        padj_v = self.padj[v]
        tadj_w = self.tadj[w]
        prow = self.pdist[v] if self.pdist is not None else None
        ok = True
        queue: list[int] = []
        for u in self.active:
            old = self.domains[u]
            new = old
            if padj_v & (1 << u):
                new &= tadj_w
            if prow is not None and new:
                d = prow[u]
                if d >= 0:
                    balls = self.tballs[w]  # type: ignore[index]
                    new &= balls[d] if d < len(balls) else balls[-1]
            if new != old:
                trail.append((u, old))
                self.domains[u] = new
                if not new:
                    ok = False
                    break
                queue.append(u)
        if ok and self.maintain_ac and queue:
            ok = self._propagate(queue, trail)
        if ok and not self._prune_ok():
            ok = False
        if ok:
            return trail
        self.undo(v, w, trail)
        return None

    def _propagate(self, queue: list[int], trail: list[tuple[int, int]]) -> bool:
        """Arc consistency over pattern edges, seeded by changed domains."""
        domains = self.domains
        tadj = self.tadj
        padj = self.padj
        image = self.image
        inq = 0
        for u in queue:
            inq |= 1 << u
        while queue:
            u = queue.pop()
            inq &= ~(1 << u)
            allowed = 0
            m = domains[u]
            while m:
                low = m & -m
                allowed |= tadj[low.bit_length() - 1]
                m ^= low
            nb = padj[u]
            while nb:
                lowx = nb & -nb
                nb ^= lowx
                x = lowx.bit_length() - 1
                old = domains[x]
                new = old & allowed
                if new == old:
                    continue
                if image[x] >= 0:
                    # assigned neighbor lost adjacency support
                    return False
                trail.append((x, old))
                domains[x] = new
                if not new:
                    return False
                if not (inq >> x) & 1:
                    queue.append(x)
                    inq |= 1 << x
        return True

    def undo(self, v: int, w: int, trail: list[tuple[int, int]]) -> None:
        # reversed: propagation may record the same domain more than once
        for u, old in reversed(trail):
            self.domains[u] = old
        self.image[v] = -1
        self.active.append(v)
        self.used_mask &= ~(1 << w)
        wbit = 1 << w
        if self.cov_mask & wbit:
            # w may still be hit by another assignment (non-injective mode)
            self.hit_count[w] -= 1  # type: ignore[index]
            if not self.hit_count[w]:  # type: ignore[index]
                self.hits_mask &= ~wbit

    def _next_var(self) -> int:
        if self.static_order is not None:
            for v in self.static_order:
                if self.image[v] < 0:
                    return v
            raise AssertionError("no unassigned variable")
        avail = self._avail()
        best, best_size = -1, -1
        for u in self.active:
            size = (self.domains[u] & avail).bit_count()
            if best < 0 or size < best_size or (size == best_size and u < best):
                best, best_size = u, size
        return best

    def run(
        self,
        pre_assign: Sequence[tuple[int, int]] = (),
        *,
        root_ac: bool = False,
    ) -> Iterator[tuple[int, ...]]:
        if not self._prune_ok():
            return
        trails: list[tuple[int, int, list[tuple[int, int]]]] = []
        feasible = True
        for v, w in pre_assign:
            if not ((self.domains[v] & self._avail()) >> w) & 1:
                feasible = False
                break
            trail = self.assign(v, w)
            if trail is None:
                feasible = False
                break
            trails.append((v, w, trail))
        if feasible and root_ac:
            saved = list(self.domains)
            if _ac_narrow(self.pattern, self.tadj, self.domains) and self._prune_ok():
                yield from self._search()
            self.domains = saved
        elif feasible:
            yield from self._search()
        for v, w, trail in reversed(trails):
            self.undo(v, w, trail)

    def _forced_moves(self) -> Optional[list[tuple[int, int]]]:
        """Uncovered targets with one remaining supporter force assignments.

        Returns None when some uncovered target has no supporter left.
        """
        unc = self.cov_mask & ~self.hits_mask
        forced: list[tuple[int, int]] = []
        while unc:
            low = unc & -unc
            unc ^= low
            w = low.bit_length() - 1
            count = 0
            only = -1
            for u in self.active:
                if (self.domains[u] >> w) & 1:
                    count += 1
                    if count > 1:
                        break
                    only = u
            if count == 0:
                return None
            if count == 1:
                forced.append((only, w))
        return forced

    def _search(self) -> Iterator[tuple[int, ...]]:
        forced: list[tuple[int, int, list[tuple[int, int]]]] = []
        dead = False
        while self.cov_mask and self.cov_mode == "require":
            batch = self._forced_moves()
            if batch is None:
                dead = True
                break
            if not batch:
                break
            progressed = False
            for u, w in batch:
                if self.image[u] >= 0:
                    continue  # assigned earlier in this batch; rescan
                if not (self.domains[u] >> w) & 1:
                    dead = True  # sole supporter can no longer cover w
                    break
                trail = self.assign(u, w)
                if trail is None:
                    dead = True
                    break
                forced.append((u, w, trail))
                progressed = True
            if dead or not progressed:
                break
        if not dead:
            if not self.active:
                yield tuple(self.image)
            else:
                v = self._next_var()
                m = self.domains[v] & self._avail()
                twins = self.twins
                tried: set[int] = set()
                while m:
                    low = m & -m
                    m ^= low
                    w = low.bit_length() - 1
                    if twins is not None:
                        # values with the same twin class are interchangeable
                        # by a target automorphism; one representative suffices
                        cls = twins[w]
                        if cls in tried:
                            continue
                        tried.add(cls)
                    trail = self.assign(v, w)
                    if trail is None:
                        continue
                    yield from self._search()
                    self.undo(v, w, trail)
        for u, w, trail in reversed(forced):
            self.undo(u, w, trail)


def _base_domains(
    pattern: Graph,
    target: Graph,
    *,
    degree_filter: bool,
    chi: Optional[Coloring] = None,
) -> list[int]:
    full = (1 << target.n) - 1
    if chi is not None:
        if chi.domain_size != target.n:
            raise GraphError(
                f"coloring covers {chi.domain_size} vertices, target has {target.n}"
            )
        class_mask = [0] * pattern.n
        for w, c in enumerate(chi.color_of):
            if not (0 <= c < pattern.n):
                raise GraphError(f"color {c} is not a pattern vertex")
            class_mask[c] |= 1 << w
        domains = list(class_mask)
    else:
        domains = [full] * pattern.n
    if degree_filter:
        for v in range(pattern.n):
            mask = 0
            dv = pattern.degrees[v]
            for w in range(target.n):
                if target.degrees[w] >= dv:
                    mask |= 1 << w
            domains[v] &= mask
    return domains


def _deadline(cfg: SearchConfig) -> Optional[float]:
    return None if cfg.time_limit is None else time.monotonic() + cfg.time_limit


def _record(stats: Optional[dict], nodes: int, completed: bool) -> None:
    if stats is not None:
        stats["nodes"] = nodes
        stats["completed"] = completed


def _first(
    pattern: Graph,
    target: Graph,
    cfg: SearchConfig,
    *,
    injective: bool,
    distance_pruning: bool,
    chi: Optional[Coloring] = None,
    stats: Optional[dict] = None,
) -> Optional[VertexMap]:
    domains = _base_domains(pattern, target, degree_filter=injective, chi=chi)
    if pattern.n and not _ac_narrow(pattern, target.adj_masks, domains):
        _record(stats, 0, True)
        return None
    if cfg.workers > 1 and pattern.n:
        return _first_parallel(
            pattern, target, cfg, domains,
            injective=injective, distance_pruning=distance_pruning, stats=stats,
        )
    engine = _Engine(
        pattern,
        target.n,
        target.adj_masks,
        domains,
        injective=injective,
        pdist=_distance_matrix(pattern) if distance_pruning else None,
        tballs=_ball_table(target) if distance_pruning else None,
        static_order=_static_bfs_order(pattern)
        if cfg.variable_order == "static-bfs"
        else None,
        node_limit=cfg.node_limit,
        deadline=_deadline(cfg),
    )
    try:
        for image in engine.run():
            _record(stats, engine.nodes, True)
            return VertexMap(image)
    except SearchLimitExceeded:
        _record(stats, engine.nodes, False)
        raise
    _record(stats, engine.nodes, True)
    return None


def _solve_chunk(payload: dict) -> tuple[str, Optional[tuple[int, ...]], int]:
    """Worker body for parallel first-solution search (one root value chunk)."""
    pattern: Graph = payload["pattern"]
    target: Graph = payload["target"]
    engine = _Engine(
        pattern,
        target.n,
        target.adj_masks,
        list(payload["domains"]),
        injective=payload["injective"],
        pdist=payload["pdist"],
        tballs=payload["tballs"],
        static_order=payload["static_order"],
        node_limit=payload["node_limit"],
        deadline=None
        if payload["time_limit"] is None
        else time.monotonic() + payload["time_limit"],
    )
    try:
        for image in engine.run(pre_assign=[(payload["root"], payload["value"])]):
            return ("found", image, engine.nodes)
    except SearchLimitExceeded:
        return ("limit", None, engine.nodes)
    return ("none", None, engine.nodes)


def _first_parallel(
    pattern: Graph,
    target: Graph,
    cfg: SearchConfig,
    domains: list[int],
    *,
    injective: bool,
    distance_pruning: bool,
    stats: Optional[dict],
) -> Optional[VertexMap]:
    static_order = (
        _static_bfs_order(pattern) if cfg.variable_order == "static-bfs" else None
    )
    root = static_order[0] if static_order else min(
        range(pattern.n), key=lambda v: (domains[v].bit_count(), v)
    )
    values = []
    m = domains[root]
    while m:
        low = m & -m
        values.append(low.bit_length() - 1)
        m ^= low
    payloads = [
        {
            "pattern": pattern,
            "target": target,
            "domains": domains,
            "injective": injective,
            "pdist": _distance_matrix(pattern) if distance_pruning else None,
            "tballs": _ball_table(target) if distance_pruning else None,
            "static_order": static_order,
            "node_limit": cfg.node_limit,
            "time_limit": cfg.time_limit,
            "root": root,
            "value": w,
        }
        for w in values
    ]
    total_nodes = 0
    outcomes: list[tuple[str, Optional[tuple[int, ...]]]] = []
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for status, image, nodes in pool.map(_solve_chunk, payloads):
            total_nodes += nodes
            outcomes.append((status, image))
    # outcome is value-order deterministic: the first found chunk wins; a
    # limit anywhere (without a find) surfaces as a limit
    for status, image in outcomes:
        if status == "found":
            _record(stats, total_nodes, True)
            return VertexMap(image)  # type: ignore[arg-type]
    if any(status == "limit" for status, _ in outcomes):
        _record(stats, total_nodes, False)
        raise SearchLimitExceeded("node or time limit hit in a worker", total_nodes)
    _record(stats, total_nodes, True)
    return None


def find_homomorphism(
    pattern: Graph,
    target: Graph,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    stats: Optional[dict] = None,
) -> Optional[VertexMap]:
    """First homomorphism pattern -> target in deterministic order, or None.

    Raises SearchLimitExceeded when the budget runs out before an answer.
    """
    return _first(
        pattern, target, cfg, injective=False, distance_pruning=False, stats=stats
    )


def find_embedding(
    pattern: Graph,
    target: Graph,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    stats: Optional[dict] = None,
) -> Optional[VertexMap]:
    """First injective homomorphism pattern -> target, or None."""
    return _first(
        pattern, target, cfg, injective=True, distance_pruning=True, stats=stats
    )


def find_colored_embedding(
    pattern: Graph,
    target: Graph,
    chi: Coloring,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    stats: Optional[dict] = None,
) -> Optional[VertexMap]:
    """First embedding h with chi(h(v)) = v for every pattern vertex v.

    Injectivity is forced by the color discipline but is enforced anyway.
    """
    return _first(
        pattern,
        target,
        cfg,
        injective=True,
        distance_pruning=True,
        chi=chi,
        stats=stats,
    )


def iter_embeddings(
    pattern: Graph,
    target: Graph,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    stats: Optional[dict] = None,
    maintain_ac: bool = False,
) -> Iterator[VertexMap]:
    """Exhaustively enumerate embeddings in deterministic order.

    maintain_ac turns on arc-consistency propagation at every node; it only
    removes values no embedding can use, so the solution set is unchanged.
    Exhaustive callers (rigidity checks) want it; single-solution callers
    usually do not need the extra per-node work.
    """
    domains = _base_domains(pattern, target, degree_filter=True)
    if pattern.n and not _ac_narrow(pattern, target.adj_masks, domains):
        _record(stats, 0, True)
        return
    engine = _Engine(
        pattern,
        target.n,
        target.adj_masks,
        domains,
        injective=True,
        pdist=_distance_matrix(pattern),
        tballs=_ball_table(target),
        static_order=_static_bfs_order(pattern)
        if cfg.variable_order == "static-bfs"
        else None,
        node_limit=cfg.node_limit,
        deadline=_deadline(cfg),
        maintain_ac=maintain_ac,
    )
    try:
        for image in engine.run():
            yield VertexMap(image)
    except SearchLimitExceeded:
        _record(stats, engine.nodes, False)
        raise
    _record(stats, engine.nodes, True)


def find_noncovering_embedding(
    pattern: Graph,
    target: Graph,
    cover: Iterable[int],
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    extra_domains: Optional[Sequence[int]] = None,
    maintain_ac: bool = False,
    distance_pruning: bool = True,
    stats: Optional[dict] = None,
) -> Optional[VertexMap]:
    """First embedding whose image misses at least one vertex of cover.

    Decides existence, not enumeration: a branch whose partial image already
    touches every cover vertex is cut (assignments only grow the image), and
    target vertices with identical neighborhoods and the same cover status
    are tried once per branch point, since swapping two of them is a target
    automorphism that maps cover misses to cover misses.

    extra_domains, if given, is a per-pattern-vertex bitmask of allowed
    target vertices ANDed into the computed domains. Callers are responsible
    for only removing values no embedding can take.
    """
    cov_mask = 0
    for w in cover:
        cov_mask |= 1 << w
    domains = _base_domains(pattern, target, degree_filter=True)
    if extra_domains is not None:
        domains = [d & e for d, e in zip(domains, extra_domains)]
    if pattern.n and not _ac_narrow(pattern, target.adj_masks, domains):
        _record(stats, 0, True)
        return None
    sig: dict[tuple[int, bool], int] = {}
    twin_classes = []
    for w in range(target.n):
        key = (target.adj_masks[w], bool((cov_mask >> w) & 1))
        twin_classes.append(sig.setdefault(key, len(sig)))
    engine = _Engine(
        pattern,
        target.n,
        target.adj_masks,
        domains,
        injective=True,
        pdist=_distance_matrix(pattern) if distance_pruning else None,
        tballs=_ball_table(target) if distance_pruning else None,
        coverage_mask=cov_mask,
        coverage_mode="forbid",
        static_order=_static_bfs_order(pattern)
        if cfg.variable_order == "static-bfs"
        else None,
        node_limit=cfg.node_limit,
        deadline=_deadline(cfg),
        maintain_ac=maintain_ac,
        twin_classes=twin_classes,
    )
    try:
        for image in engine.run():
            _record(stats, engine.nodes, True)
            return VertexMap(image)
    except SearchLimitExceeded:
        _record(stats, engine.nodes, False)
        raise
    _record(stats, engine.nodes, True)
    return None


def _frame_anchor(g: Graph, frame: frozenset[int], pdist: list[list[int]]):
    """A maximum-distance frame pair and the seed pairs that can reach it.

    Any endomorphism covering the frame maps some vertex pair (u, v) onto the
    chosen pair (r1, r2), and homomorphisms only contract distances, so
    dist(u, v) >= dist(r1, r2). Enumerating those (u, v) as pre-assignments
    is therefore exhaustive.
    """
    if len(frame) < 2:
        return None
    best = None  # (finite, dist, r1, r2); unreachable pairs dominate
    for r1 in sorted(frame):
        for r2 in sorted(frame):
            if r2 <= r1:
                continue
            d = pdist[r1][r2]
            key = (0 if d >= 0 else 1, d)
            if best is None or key > best[0]:
                best = (key, r1, r2)
    assert best is not None
    (finite_flag, dist), r1, r2 = best[0], best[1], best[2]
    seeds = []
    n = g.n
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            duv = pdist[u][v]
            if finite_flag == 1:  # r1, r2 unreachable: u, v must be too
                if duv < 0:
                    seeds.append((u, v))
            elif duv < 0 or duv >= dist:
                seeds.append((u, v))
    return r1, r2, seeds


def find_endo_counterexample(
    g: Graph,
    frame: frozenset[int] | set[int],
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    stats: Optional[dict] = None,
) -> Optional[VertexMap]:
    """A non-surjective endomorphism of g whose image covers `frame`, or None.

    None certifies that `frame` is a frame: every endomorphism covering it is
    surjective. The search bans each candidate missed vertex m in turn and
    runs a coverage-constrained homomorphism search seeded on a
    maximum-distance frame pair.
    """
    frame = frozenset(frame)
    for r in frame:
        g._check_vertex(r)
    n = g.n
    pdist = _distance_matrix(g)
    tballs = _ball_table(g)
    tadj = g.adj_masks
    full = (1 << n) - 1
    cov_mask = 0
    for r in frame:
        cov_mask |= 1 << r
    anchor = _frame_anchor(g, frame, pdist)
    static_order = (
        _static_bfs_order(g) if cfg.variable_order == "static-bfs" else None
    )
    deadline = _deadline(cfg)
    nodes = 0
    candidates = sorted(set(range(n)) - frame)
    if cfg.workers > 1 and len(candidates) > 1:
        return _endo_parallel(
            g, frame, cfg, candidates, anchor, static_order, stats=stats
        )
    for m in candidates:
        banned = full & ~(1 << m)
        seed_lists: Sequence[Sequence[tuple[int, int]]]
        if anchor is None:
            seed_lists = [()]
        else:
            r1, r2, pairs = anchor
            seed_lists = [((u, r1), (v, r2)) for u, v in pairs]
        for pre in seed_lists:
            engine = _Engine(
                g,
                n,
                tadj,
                [banned] * n,
                injective=False,
                pdist=pdist,
                tballs=tballs,
                coverage_mask=cov_mask,
                static_order=static_order,
                node_limit=cfg.node_limit,
                deadline=deadline,
                node_base=nodes,
                maintain_ac=True,
            )
            try:
                for image in engine.run(pre_assign=pre, root_ac=True):
                    _record(stats, engine.nodes, True)
                    return VertexMap(image)
            except SearchLimitExceeded as exc:
                _record(stats, exc.nodes, False)
                raise
            nodes = engine.nodes
    _record(stats, nodes, True)
    return None


def _endo_single_m(payload: dict) -> tuple[str, Optional[tuple[int, ...]], int]:
    """Worker body: the m-loop body of find_endo_counterexample for one m."""
    g: Graph = payload["g"]
    n = g.n
    pdist = _distance_matrix(g)
    engine_nodes = 0
    full = (1 << n) - 1
    banned = full & ~(1 << payload["m"])
    anchor = payload["anchor"]
    seed_lists = (
        [()]
        if anchor is None
        else [((u, anchor[0]), (v, anchor[1])) for u, v in anchor[2]]
    )
    deadline = (
        None
        if payload["time_limit"] is None
        else time.monotonic() + payload["time_limit"]
    )
    for pre in seed_lists:
        engine = _Engine(
            g,
            n,
            g.adj_masks,
            [banned] * n,
            injective=False,
            pdist=pdist,
            tballs=_ball_table(g),
            coverage_mask=payload["cov_mask"],
            static_order=payload["static_order"],
            node_limit=payload["node_limit"],
            deadline=deadline,
            node_base=engine_nodes,
            maintain_ac=True,
        )
        try:
            for image in engine.run(pre_assign=pre, root_ac=True):
                return ("found", image, engine.nodes)
        except SearchLimitExceeded:
            return ("limit", None, engine.nodes)
        engine_nodes = engine.nodes
    return ("none", None, engine_nodes)


def _endo_parallel(
    g: Graph,
    frame: frozenset[int],
    cfg: SearchConfig,
    candidates: list[int],
    anchor,
    static_order: Optional[list[int]],
    *,
    stats: Optional[dict],
) -> Optional[VertexMap]:
    cov_mask = 0
    for r in frame:
        cov_mask |= 1 << r
    anchor_payload = None
    if anchor is not None:
        anchor_payload = (anchor[0], anchor[1], list(anchor[2]))
    payloads = [
        {
            "g": g,
            "m": m,
            "anchor": anchor_payload,
            "cov_mask": cov_mask,
            "static_order": static_order,
            "node_limit": cfg.node_limit,
            "time_limit": cfg.time_limit,
        }
        for m in candidates
    ]
    total = 0
    outcomes = []
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for status, image, nodes in pool.map(_endo_single_m, payloads):
            total += nodes
            outcomes.append((status, image))
    for status, image in outcomes:
        if status == "found":
            _record(stats, total, True)
            return VertexMap(image)  # type: ignore[arg-type]
    if any(status == "limit" for status, _ in outcomes):
        _record(stats, total, False)
        raise SearchLimitExceeded("node or time limit hit in a worker", total)
    _record(stats, total, True)
    return None


@dataclass(frozen=True)
class CoreResult:
    core: Graph
    old_ids: tuple[int, ...]
    retraction: VertexMap  # original vertex -> core vertex id


def compute_core(
    g: Graph,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    size_guard: int = 40,
    stats: Optional[dict] = None,
) -> CoreResult:
    """Shrink g to its core by iterating non-surjective endomorphisms.

    Every endomorphism of the result is surjective (an automorphism), which
    characterizes cores. Guarded: refuses graphs above size_guard vertices.
    """
    if g.n > size_guard:
        raise GraphError(
            f"compute_core guard: {g.n} vertices exceeds {size_guard}; "
            "raise size_guard explicitly for larger graphs"
        )
    current = g
    old_ids = tuple(range(g.n))
    retraction = list(range(g.n))
    total_nodes = 0
    while True:
        sub_stats: dict = {}
        witness = find_endo_counterexample(
            current, frozenset(), cfg, stats=sub_stats
        )
        total_nodes += sub_stats.get("nodes", 0)
        if witness is None:
            break
        keep = sorted(witness.image_set())
        sub, sub_old = induced_subgraph(current, keep)
        to_new = {old: new for new, old in enumerate(sub_old)}
        retraction = [to_new[witness.image[v]] for v in retraction]
        old_ids = tuple(old_ids[v] for v in sub_old)
        current = sub
    _record(stats, total_nodes, True)
    return CoreResult(core=current, old_ids=old_ids, retraction=VertexMap(tuple(retraction)))
