"""The acceptance gate: one test per criterion, timed where a bound is pinned.

Criterion 6's randomized leg (10^4 samples against each pattern family) has
no time bound and dominates the suite's wall clock; everything else is quick.
"""

import random
import time

from conftest import assert_valid_dot, brute_maps, random_graph

from gridwall import (
    ColEmbInstance,
    Coloring,
    SearchConfig,
    SearchLimitExceeded,
    SkeletonSpec,
    VertexMap,
    bfs_distances,
    build_graph,
    build_product,
    colemb_to_emb,
    decide_via_reduction,
    enumerate_cycles,
    find_embedding,
    find_endo_counterexample,
    find_isomorphism,
    grid_id,
    grid_skeleton,
    hom_to_colemb,
    is_rigid_exhaustive,
    lift_embedding,
    make_grid,
    make_wall,
    parse_graph,
    pi1,
    project_embedding,
    project_map,
    quotient,
    rigidity_random_search,
    serialize_graph,
    shortest_odd_cycle,
    to_dot,
    verify_map,
    wall_skeleton,
)


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def reference_product():
    """The worked 7x8 instance: two disjoint 4-cycles over the 2x2 quotient."""
    g, sk = make_grid(7, 8), grid_skeleton(7, 8)
    a, b = grid_id(7, 8, 3, 3), grid_id(7, 8, 3, 5)
    c, d = grid_id(7, 8, 5, 3), grid_id(7, 8, 5, 5)
    h = build_graph(
        8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)]
    )
    chi = Coloring((a, b, d, c, a, b, d, c))
    return g, sk, h, chi


def test_criterion_1_quotient_shapes():
    t0 = time.perf_counter()
    for s in range(5, 10):
        for t in range(6, 11):
            g = make_grid(s, t)
            qr = quotient(g, grid_skeleton(s, t))
            k = (s - 1) // 2 - 1
            l = (t - 2) // 2 - 1
            assert find_isomorphism(qr.quotient, make_grid(k, l)) is not None, (s, t)
    q78 = quotient(make_grid(7, 8), grid_skeleton(7, 8)).quotient
    assert q78.n == 4 and find_isomorphism(q78, make_grid(2, 2)) is not None
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_corner_frames():
    t0 = time.perf_counter()
    cfg = SearchConfig()
    for s in range(2, 5):
        for t in range(2, 5):
            g = make_grid(s, t)
            corners = frozenset(
                grid_id(s, t, i, j) for i in (1, s) for j in (1, t)
            )
            assert find_endo_counterexample(g, corners, cfg) is None, (s, t)
    witness = find_endo_counterexample(make_grid(2, 2), frozenset(), cfg)
    assert witness is not None  # the empty set is not a frame of the 4-cycle
    assert time.perf_counter() - t0 < 60.0


def test_criterion_3_wall_five_cycles():
    t0 = time.perf_counter()
    for s in range(3, 7):
        for t in range(4, 8):
            w, sk = make_wall(s, t), wall_skeleton(s, t)
            f1 = set(sk.meta["F1"])
            cycles = enumerate_cycles(w, 5)
            assert cycles, (s, t)  # walls do have 5-cycles
            for cyc in cycles:
                assert set(cyc) <= f1, (s, t, cyc)
            assert shortest_odd_cycle(w) == 5, (s, t)
    assert time.perf_counter() - t0 < 30.0


def _fuzz_instance(rng):
    """A random valid (g, skel, h, chi): either a small grid skeleton or a
    path with a random removal/contraction, with H blown up from the quotient
    so colored embeddings actually exist."""
    if rng.random() < 0.4:
        s, t = rng.choice(((5, 6), (5, 8)))
        g, skel = make_grid(s, t), grid_skeleton(s, t)
    else:
        n = rng.randint(4, 7)
        g = path(n)
        f = set()
        if rng.random() < 0.5:
            f.add(rng.choice((0, n - 1)))
        rest = [v for v in range(n) if v not in f]
        d = {v for v in rest if rng.random() < 0.3}
        if len(d) == len(rest):
            d.discard(min(d))
        skel = SkeletonSpec(F=frozenset(f), D=frozenset(d))
    qr = quotient(g, skel)
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
    return g, skel, h, Coloring(tuple(colors)), qr


def test_criterion_4_product_lemmas_fuzzed():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    lifts = 0
    for trial in range(200):
        g, skel, h, chi, qr = _fuzz_instance(rng)
        p = build_product(g, skel, h, chi)
        # first-coordinate projection preserves edges
        proj = pi1(p)
        for x, y in p.graph.edges:
            assert g.has_edge(proj.image[x], proj.image[y]), f"trial {trial}"
        # second-coordinate projection keeps injective maps injective
        m = rng.randint(1, min(6, p.graph.n))
        f = VertexMap(tuple(rng.sample(range(p.graph.n), m)))
        tokens = project_map(p, f, 2)
        assert len(set(tokens)) == m, f"trial {trial}"
        # lift gives verified embeddings; project inverts it exactly
        chi_q = Coloring(tuple(qr.to_quotient[c] for c in chi.color_of))
        for img in brute_maps(qr.quotient, h, injective=True, chi=chi_q):
            hbar = VertexMap(img)
            lifted = lift_embedding(p, hbar)
            assert verify_map(g, p.graph, lifted, "emb").ok, f"trial {trial}"
            back = project_embedding(p, lifted)
            assert verify_map(qr.quotient, h, back, "colemb", chi=chi_q).ok
            assert back.image == hbar.image, f"trial {trial}"
            lifts += 1
    assert lifts > 200  # the fuzz saw real embeddings, not just vacuity
    assert time.perf_counter() - t0 < 120.0


def _center_structure_ok(p, center_ids):
    for cyc in enumerate_cycles(p.graph, 4):
        if not set(cyc) & center_ids:
            return False, ("4-cycle avoids the center", cyc)
    center = sorted(center_ids)
    for i, u in enumerate(center):
        dist = bfs_distances(p.graph, u)
        for v in center[i + 1 :]:
            d = dist[v]
            if d is not None and d % 2:
                return False, ("odd center distance", u, v, d)
    return True, None


def test_criterion_5_grid_center_structure():
    t0 = time.perf_counter()
    g, sk, h, chi = reference_product()
    p = build_product(g, sk, h, chi)
    center = {p.copy_id(u) for u in sk.meta["center"]}
    ok, why = _center_structure_ok(p, center)
    assert ok, why
    rng = random.Random(2025)
    for trial in range(50):
        s, t = rng.choice(((5, 6), (5, 8), (7, 8)))
        g, sk = make_grid(s, t), grid_skeleton(s, t)
        qr = quotient(g, sk)
        hn = rng.randint(1, 5)
        h = random_graph(rng, hn, rng.uniform(0.2, 0.8))
        chi = Coloring(tuple(rng.choice(qr.old_ids) for _ in range(hn)))
        p = build_product(g, sk, h, chi)
        center = {p.copy_id(u) for u in sk.meta["center"]}
        ok, why = _center_structure_ok(p, center)
        assert ok, (trial, why)
    assert time.perf_counter() - t0 < 120.0


def test_criterion_6_rigidity_checker():
    # exhaustive counterexample on the path, found fast
    t0 = time.perf_counter()
    verdict = is_rigid_exhaustive(
        path(3), SkeletonSpec(F=frozenset({0, 2}), D=frozenset())
    )
    assert verdict.status == "counterexample"
    assert verdict.witness_h.n == 2 and verdict.witness_h.edges == ()
    assert time.perf_counter() - t0 < 5.0

    # exhaustive rigid on the triangle
    k3 = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert is_rigid_exhaustive(k3, SkeletonSpec(F=frozenset(), D=frozenset())).status == "rigid"

    # randomized search over both pattern families: clean at 10^4 samples
    # (no time bound; this is the long leg of the suite)
    for maker, skmaker, s, t in (
        (make_grid, grid_skeleton, 5, 6),
        (make_wall, wall_skeleton, 3, 4),
    ):
        g, sk = maker(s, t), skmaker(s, t)
        verdict = rigidity_random_search(
            g, sk, samples=10_000, seed=0, max_h=min(2 * g.n, 12)
        )
        assert verdict.status == "no-counterexample", (s, t, verdict.status)
        assert verdict.samples == 10_000


def test_criterion_7_end_to_end_equivalence():
    # the worked instance decides YES with a verified lift certificate
    g, sk, h, chi = reference_product()
    pattern22 = make_grid(2, 2)
    src = ColEmbInstance(pattern22, h, Coloring((0, 1, 3, 2, 0, 1, 3, 2)))
    inst = colemb_to_emb(src, family="grid")
    report = decide_via_reduction(inst)
    assert report.decision is True
    assert report.certificate_kind == "embedding"
    assert verify_map(inst.pattern, inst.host, report.certificate, "emb").ok

    # emptying a color class decides NO
    empty = ColEmbInstance(pattern22, h, Coloring((0, 1, 0, 2, 0, 1, 0, 2)))
    assert decide_via_reduction(colemb_to_emb(empty, family="grid")).decision is False

    # 50 randomized instances against the direct solver, 10 s budget each
    rng = random.Random(2026)
    p2 = make_grid(1, 2)
    budget = SearchConfig(time_limit=10.0)
    completed = 0
    for trial in range(50):
        hn = rng.randint(1, 6)
        host = random_graph(rng, hn, rng.uniform(0.2, 0.9))
        chi = Coloring(tuple(rng.randrange(2) for _ in range(hn)))
        inst = colemb_to_emb(ColEmbInstance(p2, host, chi), family="grid")
        want = decide_via_reduction(inst).decision
        try:
            direct = find_embedding(inst.pattern, inst.host, budget)
        except SearchLimitExceeded:
            continue
        completed += 1
        assert (direct is not None) == want, f"trial {trial}"
        if direct is not None:
            assert verify_map(inst.pattern, inst.host, direct, "emb").ok
    assert completed >= 40  # at least 80% of instances completed


def test_criterion_8_hom_to_colemb_oracle_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(2027)
    for trial in range(500):
        gn = rng.randint(1, 4)
        hn = rng.randint(1, 4)
        g = random_graph(rng, gn, rng.uniform(0.2, 0.9))
        h = random_graph(rng, hn, rng.uniform(0.2, 0.9))
        chi_h = Coloring(tuple(rng.randrange(gn) for _ in range(hn)))
        want = any(True for _ in brute_maps(g, h, chi=chi_h))
        inst = hom_to_colemb(g, h, chi_h)
        got = decide_via_reduction(inst)
        assert got.decision == want, f"trial {trial}"
        if got.decision:
            assert verify_map(
                inst.pattern, inst.host, got.certificate, "colemb", chi=inst.coloring
            ).ok
    assert time.perf_counter() - t0 < 60.0


def test_criterion_9_format_round_trips():
    rng = random.Random(2028)
    for trial in range(100):
        n = rng.randint(0, 12)
        g = random_graph(rng, n, rng.uniform(0.0, 1.0))
        if n and rng.random() < 0.5:
            labels = [f"v{v}" if rng.random() < 0.8 else None for v in range(n)]
            labels[0] = "anchor"  # all-None lists serialize the same as no labels
            g = build_graph(n, g.edges, labels)
        back = parse_graph(serialize_graph(g))
        assert back.n == g.n and back.edges == g.edges and back.labels == g.labels
        nodes, edges = assert_valid_dot(to_dot(g))
        assert nodes == g.n and edges == g.m
    w = make_wall(3, 4)
    sk = wall_skeleton(3, 4)
    text = to_dot(w, classes={"frame": sorted(sk.F)})
    assert_valid_dot(text)
