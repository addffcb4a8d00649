"""Reductions between partitioned homomorphism, colored embedding, and plain
embedding, plus the end-to-end decision procedure.

The pipeline mirrors the hardness argument: a partitioned homomorphism
instance becomes a colored embedding instance over a pruned pair graph; a
colored embedding instance whose pattern is a grid (or wall) quotient becomes
a plain embedding instance into the product over the matching grid (wall)
skeleton; and decisions run on the small quotient side, with yes-answers
certified by lifting into the product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import (
    Coloring,
    Graph,
    GraphError,
    VertexMap,
    build_graph,
    find_isomorphism,
    induced_subgraph,
)
from .patterns import (
    SkeletonSpec,
    grid_id,
    grid_skeleton,
    make_grid,
    make_wall,
    wall_skeleton,
)
from .product import ProductGraph, build_product, lift_embedding
from .solver import (
    DEFAULT_CONFIG,
    SearchConfig,
    find_colored_embedding,
    verify_map,
)


class ReductionError(GraphError):
    pass


@dataclass(frozen=True)
class ColEmbInstance:
    """Does `pattern` embed into `host` hitting each color class exactly at
    its own vertex? coloring maps host vertices to pattern vertices."""

    pattern: Graph
    host: Graph
    coloring: Coloring


@dataclass(frozen=True)
class ReductionProvenance:
    family: str
    s: int
    t: int
    skel: SkeletonSpec
    product: ProductGraph
    source: ColEmbInstance
    pattern_to_quotient: VertexMap  # source pattern vertex -> quotient id


@dataclass(frozen=True)
class EmbInstance:
    """A plain embedding instance, optionally carrying how it was produced."""

    pattern: Graph
    host: Graph
    provenance: Optional[ReductionProvenance] = None


def hom_to_colemb(g: Graph, h: Graph, chi_h: Coloring) -> ColEmbInstance:
    """Partitioned homomorphism to colored embedding.

    chi_h colors H's vertices by G's vertices; a homomorphism must send each
    G-vertex into its own class. The output host keeps one vertex per
    H-vertex (paired with its class) and only the edges that are edges in
    both G and H, colored by the class. A homomorphism picks one host vertex
    per class with all G-edges realized, which is exactly a colored
    embedding of G; injectivity costs nothing because classes are disjoint.
    """
    if chi_h.domain_size != h.n:
        raise ReductionError(
            f"coloring covers {chi_h.domain_size} vertices, H has {h.n}"
        )
    for v, u in enumerate(chi_h.color_of):
        g._check_vertex(u)
    order = sorted(range(h.n), key=lambda v: (chi_h.color_of[v], v))
    pid = {v: i for i, v in enumerate(order)}
    edges = []
    for x, y in h.edges:
        if g.has_edge(chi_h.color_of[x], chi_h.color_of[y]):
            edges.append((pid[x], pid[y]))
    labels = [f"({chi_h.color_of[v]},{v})" for v in order]
    host = build_graph(h.n, edges, labels)
    coloring = Coloring(tuple(chi_h.color_of[v] for v in order))
    return ColEmbInstance(pattern=g, host=host, coloring=coloring)


def grid_params_for_quotient(k: int, l: int) -> tuple[int, int]:
    """Smallest grid dimensions whose skeleton quotient is the k x l grid."""
    if k < 1 or l < 1:
        raise ReductionError(f"quotient dimensions must be >= 1, got ({k},{l})")
    return 2 * k + 3, 2 * l + 4


def _grid_shape_of(pattern: Graph) -> Optional[tuple[int, int, VertexMap]]:
    """Detect (k, l, iso) with iso: pattern -> make_grid(k, l)."""
    n = pattern.n
    if n < 1:
        return None
    for k in range(1, n + 1):
        if n % k:
            continue
        l = n // k
        iso = find_isomorphism(pattern, make_grid(k, l), size_guard=max(30, n))
        if iso is not None:
            return k, l, iso
    return None


def _wall_quotient_candidates(n: int):
    """(s, t) pairs whose wall skeleton leaves n interior vertices.

    The interior of the wall skeleton is exactly the middle band: 2(s-2)(t-3)
    vertices, so candidates come from factoring n/2. Ascending in s.
    """
    if n <= 0 or n % 2:
        return
    half = n // 2
    for d in range(1, half + 1):
        if half % d == 0:
            yield d + 2, half // d + 3


def colemb_to_emb(inst: ColEmbInstance, family: str = "grid") -> EmbInstance:
    """Colored embedding to plain embedding over a pattern-family product.

    The instance's pattern must be isomorphic to a realizable quotient of the
    chosen family; the output pattern is the full grid (wall) and the output
    host is the product over its skeleton, with the instance's coloring
    transported through the isomorphism.
    """
    if family not in ("grid", "wall"):
        raise ReductionError(f"unknown family {family!r}")
    pattern, h, chi = inst.pattern, inst.host, inst.coloring
    if chi.domain_size != h.n:
        raise ReductionError("coloring does not cover the host")
    if family == "grid":
        shape = _grid_shape_of(pattern)
        if shape is None:
            raise ReductionError(
                f"pattern with {pattern.n} vertices is not a grid"
            )
        k, l, iso = shape
        s, t = grid_params_for_quotient(k, l)
        g = make_grid(s, t)
        skel = grid_skeleton(s, t)
        # pattern coords (i, j) sit at grid vertex (2i+1, 2j+1)
        kl_to_g = {}
        for i in range(1, k + 1):
            for j in range(1, l + 1):
                kl_to_g[grid_id(k, l, i, j)] = grid_id(s, t, 2 * i + 1, 2 * j + 1)
        pattern_to_g = [kl_to_g[iso.image[v]] for v in range(pattern.n)]
    else:
        found = None
        for s, t in _wall_quotient_candidates(pattern.n):
            if s < 3 or t < 4:
                continue
            g = make_wall(s, t)
            skel = wall_skeleton(s, t)
            interior = sorted(set(range(g.n)) - skel.F)
            sub, old_ids = induced_subgraph(g, interior)
            iso = find_isomorphism(pattern, sub, size_guard=max(30, pattern.n))
            if iso is not None:
                found = (s, t, g, skel, [old_ids[iso.image[v]] for v in range(pattern.n)])
                break
        if found is None:
            raise ReductionError(
                f"pattern with {pattern.n} vertices is not a wall-skeleton quotient"
            )
        s, t, g, skel, pattern_to_g = found

    chi_g = Coloring(tuple(pattern_to_g[c] for c in chi.color_of))
    product = build_product(g, skel, h, chi_g)
    qr = product.quotient_result
    pattern_to_quotient = VertexMap(tuple(qr.to_quotient[x] for x in pattern_to_g))
    # sanity: the transported pattern must be exactly the quotient
    quot = qr.quotient
    if pattern.n != quot.n or pattern.m != quot.m:
        raise ReductionError("quotient shape does not match the pattern")
    for u, v in pattern.edges:
        if not quot.has_edge(pattern_to_quotient.image[u], pattern_to_quotient.image[v]):
            raise ReductionError("pattern edge lost in the quotient transport")
    prov = ReductionProvenance(
        family=family,
        s=s,
        t=t,
        skel=skel,
        product=product,
        source=inst,
        pattern_to_quotient=pattern_to_quotient,
    )
    return EmbInstance(pattern=g, host=product.graph, provenance=prov)


@dataclass(frozen=True)
class DecisionReport:
    decision: bool
    certificate: Optional[VertexMap] = None
    certificate_kind: Optional[str] = None
    transcript: dict = field(default_factory=dict, compare=False)


def decide_via_reduction(
    inst: "EmbInstance | ColEmbInstance",
    cfg: SearchConfig = DEFAULT_CONFIG,
) -> DecisionReport:
    """Decide an instance on the quotient side and certify through the product.

    For an EmbInstance with provenance the colored-embedding search runs on
    the small quotient; a hit lifts to a verified embedding of the full
    pattern, and a miss is an exhausted search (the transcript records its
    size). Raises SearchLimitExceeded if cfg budgets run out (indeterminate).
    """
    stats: dict = {}
    if isinstance(inst, ColEmbInstance):
        found = find_colored_embedding(
            inst.pattern, inst.host, inst.coloring, cfg, stats=stats
        )
        transcript = {
            "method": "colored-embedding-search",
            "pattern_n": inst.pattern.n,
            "host_n": inst.host.n,
            **stats,
        }
        if found is None:
            return DecisionReport(False, transcript=transcript)
        return DecisionReport(
            True, certificate=found, certificate_kind="colored-embedding",
            transcript=transcript,
        )
    if inst.provenance is None:
        raise ReductionError(
            "decide_via_reduction needs reduction provenance; "
            "use the embedding solver directly for bare instances"
        )
    prov = inst.provenance
    qr = prov.product.quotient_result
    chi_q = Coloring(
        tuple(qr.to_quotient[c] for c in prov.product.chi.color_of)
    )
    hbar = find_colored_embedding(
        qr.quotient, prov.product.h, chi_q, cfg, stats=stats
    )
    transcript = {
        "method": "quotient-colored-embedding-search",
        "family": prov.family,
        "quotient_n": qr.quotient.n,
        "h_n": prov.product.h.n,
        **stats,
    }
    if hbar is None:
        return DecisionReport(False, transcript=transcript)
    lifted = lift_embedding(prov.product, hbar)
    check = verify_map(inst.pattern, inst.host, lifted, "emb")
    if not check.ok:
        raise ReductionError(f"lift certificate failed verification: {check.violation}")
    return DecisionReport(
        True,
        certificate=lifted,
        certificate_kind="embedding",
        transcript=transcript,
    )
