"""Product construction, coordinate projections, and the lift/project pair."""

import random

import pytest

from conftest import brute_maps

from gridwall import (
    Coloring,
    ProductError,
    SkeletonSpec,
    VertexMap,
    build_graph,
    build_product,
    grid_id,
    grid_skeleton,
    lift_embedding,
    make_grid,
    pi1,
    project_embedding,
    project_map,
    quotient,
    verify_map,
)


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def reference_instance():
    """7x8 grid with two disjoint 4-cycles over the 2x2 quotient."""
    g, sk = make_grid(7, 8), grid_skeleton(7, 8)
    a, b = grid_id(7, 8, 3, 3), grid_id(7, 8, 3, 5)
    c, d = grid_id(7, 8, 5, 3), grid_id(7, 8, 5, 5)
    h = build_graph(
        8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)]
    )
    chi = Coloring((a, b, d, c, a, b, d, c))
    return g, sk, h, chi


def test_reference_product_counts():
    g, sk, h, chi = reference_instance()
    p = build_product(g, sk, h, chi)
    sizes = {c: len(p.class_ids(c)) for c in (1, 2, 3, 4)}
    assert sizes == {1: 8, 2: 44, 3: 8, 4: 8}
    assert p.graph.n == 68
    assert len(p.graph.edges) == 133
    assert p.graph.labels == tuple(pv.label() for pv in p.vertices)


def test_c1_order_and_tokens():
    g, sk, h, chi = reference_instance()
    p = build_product(g, sk, h, chi)
    first = [p.vertices[i] for i in range(8)]
    assert all(pv.cls == 1 for pv in first)
    keys = [(chi.color_of[pv.h], pv.h) for pv in first]
    assert keys == sorted(keys)
    # tokens are distinct and the index round-trips them
    for i, pv in enumerate(p.vertices):
        assert p.index[pv.token()] == i


def test_chi_validation():
    g, sk, h, chi = reference_instance()
    with pytest.raises(ProductError):
        build_product(g, sk, h, Coloring(chi.color_of[:-1]))  # wrong length
    f_vertex = min(sk.F)
    bad = Coloring((f_vertex,) + chi.color_of[1:])
    with pytest.raises(ProductError):
        build_product(g, sk, h, bad)
    d_vertex = min(sk.D)
    bad = Coloring((d_vertex,) + chi.color_of[1:])
    with pytest.raises(ProductError):
        build_product(g, sk, h, bad)


def small_product(base, f, d, h, colors):
    skel = SkeletonSpec(F=frozenset(f), D=frozenset(d))
    return build_product(base, skel, h, Coloring(tuple(colors)))


def test_c1_edges_need_h_edge_and_base_edge():
    base = path(4)
    h2 = build_graph(2, [(0, 1)])
    # quotient of (F={0}, D={}) is the induced path on 1-2-3
    p = small_product(base, {0}, set(), h2, (1, 2))
    c1 = set(p.class_ids(1))
    c1_edges = [e for e in p.graph.edges if e[0] in c1 and e[1] in c1]
    assert len(c1_edges) == 1  # colors 1,2 adjacent in the base
    p = small_product(base, {0}, set(), h2, (1, 3))
    c1 = set(p.class_ids(1))
    assert not [e for e in p.graph.edges if e[0] in c1 and e[1] in c1]
    h2bar = build_graph(2, [])  # adjacent colors but no H-edge
    p = small_product(base, {0}, set(), h2bar, (1, 2))
    c1 = set(p.class_ids(1))
    assert not [e for e in p.graph.edges if e[0] in c1 and e[1] in c1]


def test_unassociated_d_gets_fixed_copies():
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    h1 = build_graph(1, [])
    # D = {1,2} hangs entirely on vertex 0, so both stay as fixed copies
    p = small_product(tri, set(), {1, 2}, h1, (0,))
    assert len(p.class_ids(1)) == 1
    assert len(p.class_ids(2)) == 2
    assert not p.class_ids(3) and not p.class_ids(4)
    assert p.copy_id(1) == p.index[("g", 1)]
    # the product is a triangle again
    assert p.graph.n == 3 and len(p.graph.edges) == 3
    with pytest.raises(ProductError):
        p.copy_id(0)  # quotient vertices have no fixed copy


def test_vertex_associated_d_copies():
    base = path(4)
    h2 = build_graph(2, [(0, 1)])
    # D = {2,3} dangles off vertex 1; quotient is the edge 0-1
    p = small_product(base, set(), {2, 3}, h2, (0, 1))
    assert len(p.class_ids(1)) == 2
    assert not p.class_ids(2)
    assert len(p.class_ids(3)) == 2  # one copy each, only chi(1) = 1 matches
    tokens = {p.vertices[i].token() for i in p.class_ids(3)}
    assert tokens == {("va", 2, 1), ("va", 3, 1)}
    # h0 - h1 - va2 - va3 is a path
    assert p.graph.n == 4 and len(p.graph.edges) == 3


def test_edge_associated_d_copies():
    base = path(5)
    h3 = path(3)
    # D = {1,3} contracts the path onto quotient vertices 0, 2, 4
    p = small_product(base, set(), {1, 3}, h3, (0, 2, 4))
    assert len(p.class_ids(4)) == 2
    tokens = {p.vertices[i].token() for i in p.class_ids(4)}
    assert tokens == {("ve", 1, (0, 1)), ("ve", 3, (1, 2))}
    # no C1-C1 edges: quotient adjacency came from contracted paths
    assert p.graph.n == 5 and len(p.graph.edges) == 4


def test_pi1_and_project_map():
    g, sk, h, chi = reference_instance()
    p = build_product(g, sk, h, chi)
    proj = pi1(p)
    assert proj.domain_size == p.graph.n
    for i, pv in enumerate(p.vertices):
        assert proj.image[i] == pv.g
    f = VertexMap((0, 1, 2))
    assert project_map(p, f, 1).image == tuple(p.vertices[i].g for i in (0, 1, 2))
    assert project_map(p, f, 2) == tuple(p.vertices[i].token() for i in (0, 1, 2))
    with pytest.raises(ProductError):
        project_map(p, f, 3)
    with pytest.raises(ProductError):
        project_map(p, VertexMap((p.graph.n,)), 1)


def test_lift_validation():
    g, sk, h, chi = reference_instance()
    p = build_product(g, sk, h, chi)
    with pytest.raises(ProductError):
        lift_embedding(p, VertexMap((0, 1, 3)))  # wrong domain size
    with pytest.raises(ProductError):
        lift_embedding(p, VertexMap((1, 1, 3, 2)))  # hbar(0) has the wrong color
    with pytest.raises(ProductError):
        lift_embedding(p, VertexMap((0, 5, 3, 2)))  # quotient edge to non-edge
    with pytest.raises(ProductError):
        lift_embedding(p, VertexMap((0, 1, 3, 99)))  # not an H-vertex


def test_lift_project_round_trip_reference():
    g, sk, h, chi = reference_instance()
    p = build_product(g, sk, h, chi)
    for hbar in (VertexMap((0, 1, 3, 2)), VertexMap((4, 5, 7, 6))):
        lifted = lift_embedding(p, hbar)
        assert verify_map(g, p.graph, lifted, "emb").ok
        # first coordinate of the lift is the identity on the base
        assert project_map(p, lifted, 1).image == tuple(range(g.n))
        back = project_embedding(p, lifted)
        assert back.image == hbar.image


def test_project_embedding_errors():
    base = path(4)
    h3 = path(3)
    p = small_product(base, {0}, set(), h3, (1, 2, 3))
    # product is the path g0 - h0 - h1 - h2
    g0 = p.copy_id(0)
    h0, h1, h2 = p.class_ids(1)
    with pytest.raises(ProductError, match="not a homomorphism"):
        project_embedding(p, VertexMap((g0, g0, g0, g0)))
    with pytest.raises(ProductError, match="frame copies not covered"):
        project_embedding(p, VertexMap((h0, h1, h2, h1)))
    with pytest.raises(ProductError, match="not an automorphism"):
        project_embedding(p, VertexMap((g0, h0, g0, h0)))


def test_project_embedding_handles_base_automorphism():
    base = path(4)
    h3 = path(3)
    p = small_product(base, {0}, set(), h3, (1, 2, 3))
    g0 = p.copy_id(0)
    h0, h1, h2 = p.class_ids(1)
    # reverse the base path before embedding; projection must undo it
    back = project_embedding(p, VertexMap((h2, h1, h0, g0)))
    assert back.image == (0, 1, 2)


def _random_valid_instance(rng):
    """A path base with a random contraction plus a random compatible H."""
    n = rng.randint(4, 7)
    base = path(n)
    f = set()
    if rng.random() < 0.5:
        f.add(rng.choice((0, n - 1)))
    candidates = [v for v in range(n) if v not in f]
    d = {v for v in candidates if rng.random() < 0.3}
    # keep at least one quotient vertex
    if len(d) == len(candidates):
        d.discard(min(d))
    skel = SkeletonSpec(F=frozenset(f), D=frozenset(d))
    qr = quotient(base, skel)
    # blow the quotient up: 1-2 H-copies per quotient vertex, edges kept
    # with high probability wherever the quotient has them
    colors = []
    for old in qr.old_ids:
        for _ in range(rng.randint(1, 2)):
            colors.append(old)
    rng.shuffle(colors)
    edges = []
    for i in range(len(colors)):
        for j in range(i + 1, len(colors)):
            qi, qj = qr.to_quotient[colors[i]], qr.to_quotient[colors[j]]
            if qr.quotient.has_edge(qi, qj) and rng.random() < 0.9:
                edges.append((i, j))
    h = build_graph(len(colors), edges)
    chi = Coloring(tuple(colors))
    return base, skel, h, chi, qr


def test_lift_project_fuzz():
    rng = random.Random(108)
    lifts = 0
    for trial in range(80):
        base, skel, h, chi, qr = _random_valid_instance(rng)
        p = build_product(base, skel, h, chi)
        chi_q = Coloring(tuple(qr.to_quotient[c] for c in chi.color_of))
        for img in brute_maps(qr.quotient, h, injective=True, chi=chi_q):
            hbar = VertexMap(img)
            lifted = lift_embedding(p, hbar)
            assert verify_map(base, p.graph, lifted, "emb").ok, f"trial {trial}"
            assert project_map(p, lifted, 1).image == tuple(range(base.n))
            assert project_embedding(p, lifted).image == hbar.image
            lifts += 1
    assert lifts > 100  # the fuzz actually exercised the pair


def test_build_product_deterministic():
    g, sk, h, chi = reference_instance()
    p1 = build_product(g, sk, h, chi)
    p2 = build_product(g, sk, h, chi)
    assert p1.graph.edges == p2.graph.edges
    assert p1.graph.labels == p2.graph.labels
    assert p1.vertices == p2.vertices
    assert p1.frame_copy_ids() == p2.frame_copy_ids()


def test_frame_copy_ids():
    g, sk, h, chi = reference_instance()
    p = build_product(g, sk, h, chi)
    ids = p.frame_copy_ids()
    assert len(ids) == len(sk.F)
    assert [p.vertices[i].g for i in ids] == sorted(sk.F)
    assert all(p.vertices[i].cls == 2 for i in ids)
