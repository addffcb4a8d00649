"""Rigidity of skeletons: do all embeddings into every product cover the
fixed frame copies?

A skeleton (F, D) of G is rigid when for every graph H and every coloring of
H by quotient vertices, every embedding of G into the product hits every
(u, u) with u in F. The exhaustive checker walks all H up to the restriction
bound 2|V(G)| (a violating embedding only sees that many H-vertices, so the
bound loses nothing); the randomized checker samples Erdos-Renyi instances.
Both decide each instance by searching for one embedding that misses a frame
copy, which is the violation in existence form.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator, Optional

from .graph import Coloring, Graph, GraphError, VertexMap, are_isomorphic, build_graph
from .patterns import SkeletonSpec
from .product import ProductGraph, build_product
from .skeleton import is_skeleton
from .solver import DEFAULT_CONFIG, SearchConfig, find_noncovering_embedding


class RigidityError(GraphError):
    pass


EDGE_PROBS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass(frozen=True)
class RigidityVerdict:
    """Outcome of a rigidity check.

    status is "rigid" (exhaustive proof), "counterexample" (witness attached),
    or "no-counterexample" (randomized search exhausted its samples). Limit
    hits surface as SearchLimitExceeded rather than a verdict.
    """

    status: str
    witness_h: Optional[Graph] = None
    witness_chi: Optional[Coloring] = None
    witness_embedding: Optional[VertexMap] = None
    missed_vertex: Optional[int] = None  # frame vertex whose copy is avoided
    sample_index: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    max_h: Optional[int] = None
    note: str = ""

    @property
    def is_rigid_so_far(self) -> bool:
        return self.status in ("rigid", "no-counterexample")


def _violating_embedding(
    g: Graph, p: ProductGraph, cfg: SearchConfig
) -> Optional[tuple[VertexMap, int]]:
    """An embedding of g into p missing some frame copy, with the missed
    frame vertex; None when every embedding covers all of them.

    The answer must be exact, so the search always runs with dynamic
    ordering regardless of cfg.variable_order; cfg's limits still apply.
    Distance pruning is off: product targets have short distances
    everywhere, so ball cuts never fire and only cost time.
    """
    copies = [(u, p.index[("g", u)]) for u in sorted(p.skel.F)]
    exact_cfg = replace(cfg, variable_order="min-domain")
    emb = find_noncovering_embedding(
        g,
        p.graph,
        [pid for _, pid in copies],
        exact_cfg,
        distance_pruning=False,
    )
    if emb is None:
        return None
    image = emb.image_set()
    for u, pid in copies:
        if pid not in image:
            return emb, u
    raise AssertionError("noncovering search returned a covering embedding")


def _check_skeleton(g: Graph, skel: SkeletonSpec, cfg: SearchConfig) -> None:
    report = is_skeleton(g, skel, cfg, size_guard=max(40, g.n))
    if not report.ok:
        raise RigidityError(
            "not a skeleton: "
            f"frame={report.frame_ok} disjoint={report.disjoint_ok} "
            f"degree={report.degree_ok}"
        )


def _all_graphs(n: int) -> Iterator[Graph]:
    """Every graph on vertex set 0..n-1, by ascending edge bitmask over the
    lexicographic pair order."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
        yield build_graph(n, edges)


def _dedup_key(h: Graph) -> tuple:
    return tuple(sorted(h.degrees))


def is_rigid_exhaustive(
    g: Graph,
    skel: SkeletonSpec,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    max_h: Optional[int] = None,
    size_guard: int = 4,
    isomorph_reject: bool = False,
) -> RigidityVerdict:
    """Decide rigidity by enumerating every (H, coloring) up to the bound.

    Exponential by nature; guarded to tiny graphs (default 4 vertices).
    isomorph_reject optionally skips H's isomorphic to an already-checked
    graph of the same degree sequence (sound: products of isomorphic colored
    instances are isomorphic), trading isomorphism tests for enumeration.
    """
    if g.n > size_guard:
        raise RigidityError(
            f"is_rigid_exhaustive guard: {g.n} vertices exceeds {size_guard}"
        )
    _check_skeleton(g, skel, cfg)
    if not skel.F:
        return RigidityVerdict(status="rigid", note="empty frame: nothing to cover")
    bound = 2 * g.n if max_h is None else max_h
    colors = sorted(set(range(g.n)) - skel.F - skel.D)
    for n in range(bound + 1):
        if n > 0 and not colors:
            continue
        seen: dict[tuple, list[Graph]] = {}
        for h in _all_graphs(n):
            if isomorph_reject:
                bucket = seen.setdefault(_dedup_key(h), [])
                if any(are_isomorphic(h, other) for other in bucket):
                    continue
                bucket.append(h)
            for chi_tuple in itertools.product(colors, repeat=n):
                chi = Coloring(chi_tuple)
                p = build_product(g, skel, h, chi)
                hit = _violating_embedding(g, p, cfg)
                if hit is not None:
                    emb, missed = hit
                    return RigidityVerdict(
                        status="counterexample",
                        witness_h=h,
                        witness_chi=chi,
                        witness_embedding=emb,
                        missed_vertex=missed,
                        max_h=bound,
                    )
    return RigidityVerdict(status="rigid", max_h=bound)


def _sample_instance(
    seed: int, index: int, max_h: int, colors: list[int]
) -> tuple[Graph, Coloring]:
    """The index-th random (H, chi): size uniform in [1, max_h], Erdos-Renyi
    edges with probability from EDGE_PROBS, colors uniform. Derived from
    (seed, index) so parallel and sequential runs see identical instances."""
    rng = random.Random(f"{seed}:{index}")
    n = rng.randint(1, max_h)
    p = rng.choice(EDGE_PROBS)
    edges = [
        (a, b)
        for a, b in itertools.combinations(range(n), 2)
        if rng.random() < p
    ]
    chi = Coloring(tuple(rng.choice(colors) for _ in range(n)))
    return build_graph(n, edges), chi


def _instance_key(h: Graph, chi: Coloring) -> tuple:
    return (h.n, h.edges, chi.color_of)


def _scan_samples(payload: dict) -> Optional[tuple[int, int]]:
    """Worker body: first violating sample in the index range, if any."""
    g: Graph = payload["g"]
    skel: SkeletonSpec = payload["skel"]
    cfg: SearchConfig = payload["cfg"]
    seen: dict[tuple, Optional[int]] = {}
    for i in payload["indices"]:
        h, chi = _sample_instance(payload["seed"], i, payload["max_h"], payload["colors"])
        key = _instance_key(h, chi)
        if key in seen:
            missed = seen[key]
        else:
            p = build_product(g, skel, h, chi)
            hit = _violating_embedding(g, p, cfg)
            missed = None if hit is None else hit[1]
            seen[key] = missed
        if missed is not None:
            return i, missed
    return None


def rigidity_random_search(
    g: Graph,
    skel: SkeletonSpec,
    *,
    samples: int,
    seed: int = 0,
    max_h: Optional[int] = None,
    cfg: SearchConfig = DEFAULT_CONFIG,
    validate: bool = False,
) -> RigidityVerdict:
    """Randomized counterexample hunt over Erdos-Renyi instances.

    Never proves rigidity; a clean run reports "no-counterexample" with the
    sample count and seed. The first violating sample index wins regardless
    of worker count. Set validate to re-check the skeleton conditions first
    (off by default: the frame check is expensive at pattern scale).
    """
    if validate:
        _check_skeleton(g, skel, cfg)
    if not skel.F:
        return RigidityVerdict(
            status="rigid", note="empty frame: nothing to cover", seed=seed
        )
    bound = 2 * g.n if max_h is None else max_h
    colors = sorted(set(range(g.n)) - skel.F - skel.D)
    if not colors:
        return RigidityVerdict(
            status="no-counterexample",
            samples=samples,
            seed=seed,
            max_h=bound,
            note="no quotient vertices: only the empty H admits a coloring",
        )
    first: Optional[tuple[int, int]] = None
    if cfg.workers > 1 and samples > 1:
        chunked = [
            {
                "g": g,
                "skel": skel,
                "cfg": SearchConfig(
                    node_limit=cfg.node_limit,
                    time_limit=cfg.time_limit,
                    variable_order=cfg.variable_order,
                ),
                "seed": seed,
                "max_h": bound,
                "colors": colors,
                "indices": list(range(w, samples, cfg.workers)),
            }
            for w in range(cfg.workers)
        ]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for hit in pool.map(_scan_samples, chunked):
                if hit is not None and (first is None or hit[0] < first[0]):
                    first = hit
    else:
        seen: dict[tuple, Optional[int]] = {}
        for i in range(samples):
            h, chi = _sample_instance(seed, i, bound, colors)
            key = _instance_key(h, chi)
            if key in seen:
                missed = seen[key]
            else:
                p = build_product(g, skel, h, chi)
                hit = _violating_embedding(g, p, cfg)
                missed = None if hit is None else hit[1]
                seen[key] = missed
            if missed is not None:
                first = (i, missed)
                break
    if first is not None:
        i, missed = first
        h, chi = _sample_instance(seed, i, bound, colors)
        p = build_product(g, skel, h, chi)
        emb, missed = _violating_embedding(g, p, cfg)  # type: ignore[misc]
        return RigidityVerdict(
            status="counterexample",
            witness_h=h,
            witness_chi=chi,
            witness_embedding=emb,
            missed_vertex=missed,
            sample_index=i,
            samples=samples,
            seed=seed,
            max_h=bound,
        )
    return RigidityVerdict(
        status="no-counterexample", samples=samples, seed=seed, max_h=bound
    )


def list_rigid_skeletons(
    g: Graph,
    cfg: SearchConfig = DEFAULT_CONFIG,
    *,
    max_h: Optional[int] = None,
    size_guard: int = 4,
) -> list[tuple[frozenset[int], frozenset[int]]]:
    """All rigid skeletons (F, D) of g, ordered by ascending characteristic
    bitmask of F, then of D.

    Doubly exponential; the guard keeps it to desk-size graphs.
    """
    if g.n > size_guard:
        raise RigidityError(
            f"list_rigid_skeletons guard: {g.n} vertices exceeds {size_guard}"
        )
    out = []
    n = g.n
    for f_mask in range(1 << n):
        f_set = frozenset(v for v in range(n) if (f_mask >> v) & 1)
        comp = ((1 << n) - 1) & ~f_mask
        d_mask = 0
        while True:
            d_set = frozenset(v for v in range(n) if (d_mask >> v) & 1)
            skel = SkeletonSpec(F=f_set, D=d_set)
            try:
                report = is_skeleton(g, skel, cfg, size_guard=max(40, n))
                if report.ok:
                    verdict = is_rigid_exhaustive(
                        g, skel, cfg, max_h=max_h, size_guard=size_guard
                    )
                    if verdict.status == "rigid":
                        out.append((f_set, d_set))
            except RigidityError:
                pass
            # next submask of comp in ascending order
            if d_mask == comp:
                break
            d_mask = (d_mask - comp) & comp
    return out
