"""The skeleton product target and its projection/lifting maps.

Given a graph G with skeleton (F, D), a graph H, and a coloring chi of H's
vertices by quotient vertices of G, the product P has four vertex classes:

  C1  (u, a) for each H-vertex a with chi(a) = u           (quotient copies)
  C2  (u, u) for u in F or u in D with no association      (fixed copies)
  C3  (u, *) for u in D associated with a quotient vertex v,
      one copy per H-vertex a with chi(a) = v
  C4  (u, *) for u in D associated with a quotient edge vw,
      one copy per H-edge ab with {chi(a), chi(b)} = {v, w}

Edges always require the first coordinates to be adjacent in G; within C1
they additionally require an H-edge, and C3/C4 copies only connect to C1 or
to each other when they carry the same H-vertex or H-edge. C3 and C4 never
touch. The second coordinates of distinct product vertices are distinct by
construction, which is what makes embeddings into P project well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import Coloring, Graph, GraphError, VertexMap, build_graph
from .patterns import SkeletonSpec
from .skeleton import QuotientResult, SkeletonError, quotient
from .solver import verify_map


class ProductError(GraphError):
    pass


@dataclass(frozen=True)
class ProductVertex:
    """One product vertex: class tag, G-vertex, and the class payload."""

    cls: int
    g: int
    h: Optional[int] = None  # C1/C3: the H-vertex
    e: Optional[tuple[int, int]] = None  # C4: the H-edge, normalized (a<b)

    def token(self) -> tuple:
        """The second coordinate, namespaced so distinct vertices differ."""
        if self.cls == 1:
            return ("h", self.h)
        if self.cls == 2:
            return ("g", self.g)
        if self.cls == 3:
            return ("va", self.g, self.h)
        return ("ve", self.g, self.e)

    def label(self) -> str:
        if self.cls == 1:
            return f"C1:u={self.g}:a={self.h}"
        if self.cls == 2:
            return f"C2:u={self.g}"
        if self.cls == 3:
            return f"C3:u={self.g}:a={self.h}"
        a, b = self.e  # type: ignore[misc]
        return f"C4:u={self.g}:e={a}-{b}"


@dataclass(frozen=True)
class ProductGraph:
    graph: Graph
    vertices: tuple[ProductVertex, ...]
    base: Graph
    skel: SkeletonSpec
    h: Graph
    chi: Coloring
    quotient_result: QuotientResult
    index: dict[tuple, int] = field(compare=False)  # token -> product id

    def class_ids(self, cls: int) -> tuple[int, ...]:
        return tuple(i for i, pv in enumerate(self.vertices) if pv.cls == cls)

    def frame_copy_ids(self) -> tuple[int, ...]:
        """Product ids of (u, u) for u in F, ascending by u."""
        return tuple(
            self.index[("g", u)] for u in sorted(self.skel.F)
        )

    def copy_id(self, u: int) -> int:
        try:
            return self.index[("g", u)]
        except KeyError:
            raise ProductError(f"vertex {u} has no fixed copy in the product") from None


def build_product(
    g: Graph, skel: SkeletonSpec, h: Graph, chi: Coloring
) -> ProductGraph:
    """Construct the product target.

    Validates the structural skeleton conditions and that chi colors H by
    quotient vertices (never by F or D vertices). The frame condition is the
    caller's obligation; it does not affect the construction itself.
    """
    qr = quotient(g, skel)
    if chi.domain_size != h.n:
        raise ProductError(
            f"coloring covers {chi.domain_size} vertices, H has {h.n}"
        )
    allowed = set(qr.to_quotient)
    for a, u in enumerate(chi.color_of):
        if u not in allowed:
            raise ProductError(
                f"chi({a}) = {u} is not a quotient vertex (it is in F or D)"
            )

    vertices: list[ProductVertex] = []
    for a in sorted(range(h.n), key=lambda a: (chi.color_of[a], a)):
        vertices.append(ProductVertex(1, chi.color_of[a], h=a))
    unassoc = {v for v, tag in qr.association.items() if tag.kind == "none"}
    for u in sorted(skel.F | unassoc):
        vertices.append(ProductVertex(2, u))
    for u in sorted(skel.D):
        tag = qr.association[u]
        if tag.kind == "vertex":
            for a in range(h.n):
                if chi.color_of[a] == tag.a:
                    vertices.append(ProductVertex(3, u, h=a))
    for u in sorted(skel.D):
        tag = qr.association[u]
        if tag.kind == "edge":
            want = {tag.a, tag.b}
            for a, b in h.edges:
                if {chi.color_of[a], chi.color_of[b]} == want:
                    vertices.append(ProductVertex(4, u, e=(a, b)))

    index = {pv.token(): i for i, pv in enumerate(vertices)}
    assert len(index) == len(vertices)
    by_h = {pv.h: i for i, pv in enumerate(vertices) if pv.cls == 1}
    copy_of = {pv.g: i for i, pv in enumerate(vertices) if pv.cls == 2}

    edges: list[tuple[int, int]] = []
    for a, b in h.edges:  # C1-C1
        if g.has_edge(chi.color_of[a], chi.color_of[b]):
            edges.append((by_h[a], by_h[b]))
    for i, pv in enumerate(vertices):
        if pv.cls == 1:  # C1-C2
            for x in g.neighbor_sets[pv.g]:
                if x in copy_of:
                    edges.append((i, copy_of[x]))
        elif pv.cls == 3:
            a = pv.h
            if chi.color_of[a] in g.neighbor_sets[pv.g]:  # C1-C3, same a
                edges.append((i, by_h[a]))
            for x in g.neighbor_sets[pv.g]:  # C2-C3
                if x in copy_of:
                    edges.append((i, copy_of[x]))
        elif pv.cls == 4:
            for c in pv.e:  # type: ignore[union-attr]
                if chi.color_of[c] in g.neighbor_sets[pv.g]:  # C1-C4, a in e
                    edges.append((i, by_h[c]))
            for x in g.neighbor_sets[pv.g]:  # C2-C4
                if x in copy_of:
                    edges.append((i, copy_of[x]))
    for u, v in g.edges:  # C2-C2
        if u in copy_of and v in copy_of:
            edges.append((copy_of[u], copy_of[v]))
    # C3-C3 (same a) and C4-C4 (same e)
    by_payload: dict[tuple, list[int]] = {}
    for i, pv in enumerate(vertices):
        if pv.cls == 3:
            by_payload.setdefault(("a", pv.h), []).append(i)
        elif pv.cls == 4:
            by_payload.setdefault(("e", pv.e), []).append(i)
    for ids in by_payload.values():
        for x in range(len(ids)):
            for y in range(x + 1, len(ids)):
                i, j = ids[x], ids[y]
                if g.has_edge(vertices[i].g, vertices[j].g):
                    edges.append((i, j))

    graph = build_graph(
        len(vertices), edges, [pv.label() for pv in vertices]
    )
    return ProductGraph(
        graph=graph,
        vertices=tuple(vertices),
        base=g,
        skel=skel,
        h=h,
        chi=chi,
        quotient_result=qr,
        index=index,
    )


def pi1(p: ProductGraph) -> VertexMap:
    """First-coordinate projection as a map V(P) -> V(G)."""
    return VertexMap(tuple(pv.g for pv in p.vertices))


def project_map(p: ProductGraph, f: VertexMap, coord: int):
    """Compose a map into P with a coordinate projection.

    coord 1 gives a VertexMap into the base graph; coord 2 gives the tuple of
    second-coordinate tokens (namespaced payloads, not graph vertices).
    """
    for w in f.image:
        if not (0 <= w < p.graph.n):
            raise ProductError(f"map hits {w}, not a product vertex")
    if coord == 1:
        return VertexMap(tuple(p.vertices[w].g for w in f.image))
    if coord == 2:
        return tuple(p.vertices[w].token() for w in f.image)
    raise ProductError(f"coordinate must be 1 or 2, got {coord}")


def lift_embedding(p: ProductGraph, hbar: VertexMap) -> VertexMap:
    """Lift a colored embedding of the quotient into H to an embedding of the
    base graph into P.

    Quotient vertices follow their hbar-image into C1; F and unassociated D
    vertices go to their fixed copies; associated D vertices follow the
    hbar-image of their association endpoints into C3/C4. The result is
    verified before it is returned.
    """
    qr = p.quotient_result
    quot = qr.quotient
    if hbar.domain_size != quot.n:
        raise ProductError(
            f"hbar covers {hbar.domain_size} of {quot.n} quotient vertices"
        )
    for q in range(quot.n):
        a = hbar.image[q]
        if not (0 <= a < p.h.n):
            raise ProductError(f"hbar({q}) = {a} is not an H-vertex")
        if p.chi.color_of[a] != qr.old_ids[q]:
            raise ProductError(
                f"hbar({q}) = {a} has color {p.chi.color_of[a]}, "
                f"expected {qr.old_ids[q]}"
            )
    for x, y in quot.edges:
        if not p.h.has_edge(hbar.image[x], hbar.image[y]):
            raise ProductError(
                f"hbar maps quotient edge ({x},{y}) to a non-edge"
            )

    g = p.base
    image = [-1] * g.n
    for u in range(g.n):
        if u in qr.to_quotient:
            a = hbar.image[qr.to_quotient[u]]
            image[u] = p.index[("h", a)]
        elif u in p.skel.F:
            image[u] = p.index[("g", u)]
        else:
            tag = qr.association[u]
            if tag.kind == "none":
                image[u] = p.index[("g", u)]
            elif tag.kind == "vertex":
                a = hbar.image[qr.to_quotient[tag.a]]
                image[u] = p.index[("va", u, a)]
            else:
                a = hbar.image[qr.to_quotient[tag.a]]
                b = hbar.image[qr.to_quotient[tag.b]]
                image[u] = p.index[("ve", u, (min(a, b), max(a, b)))]
    lifted = VertexMap(tuple(image))
    check = verify_map(g, p.graph, lifted, "emb")
    if not check.ok:
        raise ProductError(f"lift produced an invalid embedding: {check.violation}")
    return lifted


def project_embedding(p: ProductGraph, h_map: VertexMap) -> VertexMap:
    """Project a homomorphism G -> P covering the frame copies down to a
    colored embedding of the quotient into H.

    With rho the first-coordinate projection of h_map, the result is
    u -> second coordinate of h_map(rho^{-1}(u)) on quotient vertices. A
    non-automorphism rho is an error: it means the frame hypothesis failed.
    """
    g = p.base
    check = verify_map(g, p.graph, h_map, "hom")
    if not check.ok:
        raise ProductError(f"not a homomorphism into the product: {check.violation}")
    image_set = h_map.image_set()
    missing = [u for u in sorted(p.skel.F) if p.index[("g", u)] not in image_set]
    if missing:
        raise ProductError(
            f"frame copies not covered (first miss: vertex {missing[0]})"
        )
    rho = project_map(p, h_map, 1)
    if not rho.is_bijection_on(g.n):
        raise ProductError(
            "first-coordinate projection is not an automorphism; "
            "the frame hypothesis failed"
        )
    rho_inv = rho.inverse()
    qr = p.quotient_result
    out = []
    for q in range(qr.quotient.n):
        x = qr.old_ids[q]
        pv = p.vertices[h_map.image[rho_inv.image[x]]]
        if pv.cls != 1:
            raise ProductError(
                f"quotient vertex {x} projects to a class-{pv.cls} vertex"
            )
        out.append(pv.h)
    hbar = VertexMap(tuple(out))
    chi_q = Coloring(tuple(qr.to_quotient[c] for c in p.chi.color_of))
    check = verify_map(qr.quotient, p.h, hbar, "colemb", chi=chi_q)
    if not check.ok:
        raise ProductError(f"projection is not a colored embedding: {check.violation}")
    return hbar
