"""Named invariant checks backing the CLI `suite` subcommand.

Each check is a small self-contained assertion bundle over one module's
documented invariants, sized so the quick set finishes in seconds and the
full set in a couple of minutes. Checks raise CheckFailure (or AssertionError)
with a readable message; the runner collects results and never stops early.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .graph import (
    Coloring,
    are_isomorphic,
    build_graph,
    enumerate_cycles,
    parse_graph,
    serialize_graph,
    shortest_odd_cycle,
    to_dot,
)
from .patterns import (
    SkeletonSpec,
    grid_id,
    grid_skeleton,
    make_grid,
    make_wall,
    wall_skeleton,
)
from .product import build_product, lift_embedding, pi1, project_embedding
from .reduction import colemb_to_emb, decide_via_reduction, hom_to_colemb
from .rigidity import is_rigid_exhaustive, rigidity_random_search
from .skeleton import is_skeleton, quotient
from .solver import (
    SearchConfig,
    find_colored_embedding,
    find_embedding,
    find_endo_counterexample,
    find_homomorphism,
    verify_map,
)


class CheckFailure(AssertionError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    quick: bool
    fn: Callable[[], None]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    seconds: float
    detail: str = ""


def _fail(msg: str) -> None:
    raise CheckFailure(msg)


def _random_graph(rng: random.Random, n: int, p: float):
    edges = [
        (a, b)
        for a, b in itertools.combinations(range(n), 2)
        if rng.random() < p
    ]
    return build_graph(n, edges)


# --- graph-core ---------------------------------------------------------


def check_graph_roundtrip() -> None:
    rng = random.Random(20)
    for i in range(25):
        g = _random_graph(rng, rng.randint(0, 9), rng.choice((0.2, 0.5, 0.8)))
        back = parse_graph(serialize_graph(g))
        if back.n != g.n or back.edges != g.edges:
            _fail(f"parse/serialize mismatch on sample {i}")
    labeled = make_grid(3, 4)
    back = parse_graph(serialize_graph(labeled))
    if back.labels != labeled.labels:
        _fail("labels lost in round trip")


def check_graph_odd_girth() -> None:
    cases = [
        (build_graph(3, [(0, 1), (1, 2), (0, 2)]), 3),
        (build_graph(5, [(i, (i + 1) % 5) for i in range(5)]), 5),
        (make_grid(4, 5), None),  # bipartite
        (make_wall(3, 4), 5),
        (make_wall(6, 7), 5),
    ]
    for g, want in cases:
        got = shortest_odd_cycle(g)
        if got != want:
            _fail(f"odd girth {got} != {want} on {g.n}-vertex case")


def check_graph_dot_output() -> None:
    g = make_grid(2, 3)
    dot = to_dot(g, classes={"frame": [0, 2]})
    if not dot.startswith("graph ") or dot.count("--") != len(g.edges):
        _fail("DOT output shape off")


# --- patterns -----------------------------------------------------------


def check_pattern_counts() -> None:
    for s, t in [(2, 2), (3, 3), (7, 4), (7, 8), (5, 6)]:
        g = make_grid(s, t)
        if g.n != s * t or len(g.edges) != s * (t - 1) + t * (s - 1):
            _fail(f"grid ({s},{t}) size off: {g.n} vertices {len(g.edges)} edges")
    w = make_wall(6, 4)
    if w.n != 56 or len(w.edges) != 79:
        _fail(f"6x4 wall is {w.n}v/{len(w.edges)}e, want 56/79")
    w2 = make_wall(6, 7)
    if w2.n != 98 or len(w2.edges) != 139:
        _fail(f"6x7 wall is {w2.n}v/{len(w2.edges)}e, want 98/139")
    for s, t in [(3, 4), (4, 5), (6, 7)]:
        wall = make_wall(s, t)
        if max(wall.degrees) > 3:
            _fail(f"wall ({s},{t}) has degree {max(wall.degrees)} > 3")


def check_skeleton_specs_partition() -> None:
    for s, t in [(5, 6), (7, 8), (9, 10)]:
        g, sk = make_grid(s, t), grid_skeleton(s, t)
        if sk.F & sk.D:
            _fail(f"grid skeleton ({s},{t}): F and D overlap")
        if not (sk.F | sk.D) <= set(range(g.n)):
            _fail(f"grid skeleton ({s},{t}): ids out of range")
    for s, t in [(3, 4), (6, 7)]:
        w, sk = make_wall(s, t), wall_skeleton(s, t)
        if sk.D:
            _fail(f"wall skeleton ({s},{t}): D should be empty")
        if len(set(range(w.n)) - sk.F) != 2 * (s - 2) * (t - 3):
            _fail(f"wall skeleton ({s},{t}): interior size off")


# --- skeleton / quotient ------------------------------------------------


def check_quotient_shapes() -> None:
    for s, t in [(5, 6), (7, 8), (9, 10), (6, 7)]:
        g, sk = make_grid(s, t), grid_skeleton(s, t)
        k1, k2 = (s - 1) // 2, (t - 2) // 2
        qr = quotient(g, sk)
        want_n = max(k1 - 1, 0) * max(k2 - 1, 0)
        if k1 >= 2 and k2 >= 2:
            if not are_isomorphic(qr.quotient, make_grid(k1 - 1, k2 - 1)):
                _fail(f"quotient of ({s},{t}) is not the ({k1-1}x{k2-1})-grid")
        elif qr.quotient.n != want_n and qr.quotient.n != 1:
            _fail(f"degenerate quotient of ({s},{t}) has {qr.quotient.n} vertices")


def check_small_skeletons_hold() -> None:
    cfg = SearchConfig()
    g, sk = make_grid(5, 6), grid_skeleton(5, 6)
    if not is_skeleton(g, sk, cfg, size_guard=g.n).ok:
        _fail("5x6 grid skeleton rejected")
    w, wsk = make_wall(3, 4), wall_skeleton(3, 4)
    if not is_skeleton(w, wsk, cfg, size_guard=w.n).ok:
        _fail("3x4 wall skeleton rejected")


def check_corner_frames() -> None:
    cfg = SearchConfig()
    for s, t in [(2, 2), (3, 3), (3, 4)]:
        g = make_grid(s, t)
        corners = frozenset(
            grid_id(s, t, i, j) for i in (1, s) for j in (1, t)
        )
        if find_endo_counterexample(g, corners, cfg) is not None:
            _fail(f"corner set of ({s},{t}) is not a frame")
    if find_endo_counterexample(make_grid(2, 2), frozenset(), cfg) is None:
        _fail("empty set reported as a frame for the 2x2 grid")


def check_wall_five_cycles_in_core_frame() -> None:
    for s, t in [(3, 4), (4, 5), (6, 7)]:
        w, sk = make_wall(s, t), wall_skeleton(s, t)
        f1 = set(sk.meta["F1"])
        for cyc in enumerate_cycles(w, 5):
            if not set(cyc) <= f1:
                _fail(f"5-cycle {cyc} of wall ({s},{t}) leaves F1")


# --- solver -------------------------------------------------------------


def check_solver_against_brute() -> None:
    rng = random.Random(4)
    cfg = SearchConfig()
    for trial in range(50):
        pat = _random_graph(rng, rng.randint(1, 4), rng.choice((0.3, 0.6)))
        tgt = _random_graph(rng, rng.randint(1, 4), rng.choice((0.3, 0.6)))
        es = tgt.edge_set
        homs = [
            img
            for img in itertools.product(range(tgt.n), repeat=pat.n)
            if all((img[a], img[b]) in es or (img[b], img[a]) in es
                   for a, b in pat.edges)
        ]
        embs = [img for img in homs if len(set(img)) == pat.n]
        if (find_homomorphism(pat, tgt, cfg) is None) != (not homs):
            _fail(f"hom disagreement on trial {trial}")
        if (find_embedding(pat, tgt, cfg) is None) != (not embs):
            _fail(f"emb disagreement on trial {trial}")


def check_solver_certificates_verify() -> None:
    rng = random.Random(5)
    cfg = SearchConfig()
    for trial in range(40):
        pat = _random_graph(rng, rng.randint(1, 5), 0.5)
        tgt = _random_graph(rng, rng.randint(1, 6), 0.6)
        m = find_homomorphism(pat, tgt, cfg)
        if m is not None and not verify_map(pat, tgt, m, "hom"):
            _fail(f"hom certificate fails verify_map on trial {trial}")
        e = find_embedding(pat, tgt, cfg)
        if e is not None and not verify_map(pat, tgt, e, "emb"):
            _fail(f"emb certificate fails verify_map on trial {trial}")


# --- product ------------------------------------------------------------


def _reference_product():
    """The worked 7x8 instance: two disjoint 4-cycles over the 2x2 quotient."""
    g, sk = make_grid(7, 8), grid_skeleton(7, 8)
    a, b = grid_id(7, 8, 3, 3), grid_id(7, 8, 3, 5)
    c, d = grid_id(7, 8, 5, 3), grid_id(7, 8, 5, 5)
    h = build_graph(
        8,
        [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)],
        labels=tuple(f"{x}{i}" for i in (1, 2) for x in "abdc"),
    )
    chi = Coloring((a, b, d, c, a, b, d, c))
    return g, sk, h, chi


def check_product_reference_counts() -> None:
    g, sk, h, chi = _reference_product()
    p = build_product(g, sk, h, chi)
    by_class: dict[int, int] = {}
    for pv in p.vertices:
        by_class[pv.cls] = by_class.get(pv.cls, 0) + 1
    if by_class != {1: 8, 2: 44, 3: 8, 4: 8}:
        _fail(f"reference product classes {by_class}")
    if p.graph.n != 68 or len(p.graph.edges) != 133:
        _fail(f"reference product is {p.graph.n}v/{len(p.graph.edges)}e")


def check_product_lift_project() -> None:
    g, sk, h, chi = _reference_product()
    p = build_product(g, sk, h, chi)
    qr = p.quotient_result
    qchi = Coloring(tuple(qr.to_quotient[c] for c in chi.color_of))
    hbar = find_colored_embedding(qr.quotient, h, qchi, SearchConfig())
    if hbar is None:
        _fail("no quotient-side colored embedding on the reference instance")
    lifted = lift_embedding(p, hbar)
    if not verify_map(g, p.graph, lifted, "emb"):
        _fail("lifted reference embedding fails verification")
    back = project_embedding(p, lifted)
    if back.image != hbar.image:
        _fail("project(lift) is not the identity on the reference instance")
    proj = pi1(p)
    for u, v in g.edges:
        pu, pv = proj.image[lifted.image[u]], proj.image[lifted.image[v]]
        if pu != pv and not g.has_edge(pu, pv):
            _fail("first-coordinate projection of the lift breaks an edge")


def check_product_center_structure() -> None:
    g, sk, h, chi = _reference_product()
    p = build_product(g, sk, h, chi)
    center = {p.copy_id(u) for u in sk.meta["center"]}
    for cyc in enumerate_cycles(p.graph, 4):
        if not set(cyc) & center:
            _fail(f"4-cycle {cyc} avoids the fixed-copy center set")


# --- rigidity -----------------------------------------------------------


def check_rigidity_tiny_verdicts() -> None:
    path3 = build_graph(3, [(0, 1), (1, 2)])
    verdict = is_rigid_exhaustive(
        path3, SkeletonSpec(F=frozenset({0, 2}), D=frozenset()), SearchConfig()
    )
    if verdict.status != "counterexample":
        _fail(f"path skeleton reported {verdict.status}, want counterexample")
    k3 = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    verdict = is_rigid_exhaustive(
        k3, SkeletonSpec(F=frozenset(), D=frozenset()), SearchConfig()
    )
    if verdict.status != "rigid":
        _fail(f"empty-frame triangle reported {verdict.status}, want rigid")


def check_rigidity_spot_samples() -> None:
    g, sk = make_grid(5, 6), grid_skeleton(5, 6)
    v = rigidity_random_search(g, sk, samples=60, seed=0, max_h=min(2 * g.n, 12))
    if v.status != "no-counterexample":
        _fail(f"5x6 grid spot run: {v.status}")
    w, wsk = make_wall(3, 4), wall_skeleton(3, 4)
    v = rigidity_random_search(w, wsk, samples=60, seed=0, max_h=min(2 * w.n, 12))
    if v.status != "no-counterexample":
        _fail(f"3x4 wall spot run: {v.status}")


# --- reduction ----------------------------------------------------------


def check_reduction_hom_colemb_equivalence() -> None:
    rng = random.Random(6)
    cfg = SearchConfig()
    for trial in range(30):
        g = _random_graph(rng, rng.randint(1, 3), 0.6)
        h = _random_graph(rng, rng.randint(1, 4), 0.5)
        chi_h = Coloring(tuple(rng.randrange(g.n) for _ in range(h.n)))
        want = _brute_partitioned_hom(g, h, chi_h)
        inst = hom_to_colemb(g, h, chi_h)
        got = (
            find_colored_embedding(inst.pattern, inst.host, inst.coloring, cfg)
            is not None
        )
        if want != got:
            _fail(f"hom/colemb disagree on trial {trial}")


def _brute_partitioned_hom(g, h, chi_h: Coloring) -> bool:
    es = h.edge_set
    classes = [[v for v in range(h.n) if chi_h.color_of[v] == u] for u in range(g.n)]
    if any(not c for c in classes):
        return False
    for pick in itertools.product(*classes):
        if all((pick[a], pick[b]) in es or (pick[b], pick[a]) in es
               for a, b in g.edges):
            return True
    return False


def check_reduction_end_to_end() -> None:
    g, sk, h, chi = _reference_product()
    qr = quotient(g, sk)
    qpattern = qr.quotient
    qchi = Coloring(tuple(qr.to_quotient[c] for c in chi.color_of))
    inst = colemb_to_emb(
        hom_to_colemb(qpattern, h, qchi), "grid"
    )
    rep = decide_via_reduction(inst)
    if not rep.decision or rep.certificate is None:
        _fail("reference reduction instance should decide yes with certificate")
    if not verify_map(inst.pattern, inst.host, rep.certificate, "emb"):
        _fail("reference reduction certificate fails verification")
    empty_chi = Coloring(tuple(0 for _ in range(h.n)))
    inst_no = colemb_to_emb(hom_to_colemb(qpattern, h, empty_chi), "grid")
    if decide_via_reduction(inst_no).decision:
        _fail("single-class instance should decide no")


def check_reduction_agrees_with_direct() -> None:
    q = make_grid(1, 2)
    cfg = SearchConfig(time_limit=10.0)
    for i in range(8):
        rng = random.Random(f"selfcheck:{i}")
        n = rng.randint(1, 5)
        h = _random_graph(rng, n, rng.choice((0.2, 0.5, 0.8)))
        chi = Coloring(tuple(rng.randrange(q.n) for _ in range(n)))
        inst = colemb_to_emb(hom_to_colemb(q, h, chi), "grid")
        rep = decide_via_reduction(inst)
        direct = find_embedding(inst.pattern, inst.host, cfg)
        if rep.decision != (direct is not None):
            _fail(f"reduction and direct solver disagree on instance {i}")


CHECKS: tuple[Check, ...] = (
    Check("graph/parse-serialize-roundtrip", True, check_graph_roundtrip),
    Check("graph/odd-girth", True, check_graph_odd_girth),
    Check("graph/dot-export", True, check_graph_dot_output),
    Check("patterns/sizes-and-degrees", True, check_pattern_counts),
    Check("patterns/skeleton-partition", True, check_skeleton_specs_partition),
    Check("skeleton/quotient-shapes", True, check_quotient_shapes),
    Check("skeleton/small-skeletons-hold", True, check_small_skeletons_hold),
    Check("skeleton/corner-frames", False, check_corner_frames),
    Check("patterns/wall-5-cycles", False, check_wall_five_cycles_in_core_frame),
    Check("solver/brute-force-agreement", True, check_solver_against_brute),
    Check("solver/certificates-verify", True, check_solver_certificates_verify),
    Check("product/reference-counts", True, check_product_reference_counts),
    Check("product/lift-project", True, check_product_lift_project),
    Check("product/center-4-cycles", False, check_product_center_structure),
    Check("rigidity/tiny-verdicts", True, check_rigidity_tiny_verdicts),
    Check("rigidity/spot-samples", False, check_rigidity_spot_samples),
    Check("reduction/hom-colemb-equivalence", True, check_reduction_hom_colemb_equivalence),
    Check("reduction/end-to-end-reference", True, check_reduction_end_to_end),
    Check("reduction/direct-crosscheck", False, check_reduction_agrees_with_direct),
)


def run_selfchecks(
    quick: bool = False,
    names: Optional[list[str]] = None,
) -> list[CheckResult]:
    """Run the registered checks; quick restricts to the fast subset.

    names, when given, selects checks by exact name (unknown names fail
    loudly rather than passing silently).
    """
    selected = [c for c in CHECKS if (not quick or c.quick)]
    if names is not None:
        known = {c.name: c for c in CHECKS}
        missing = [n for n in names if n not in known]
        if missing:
            raise CheckFailure(f"unknown checks: {', '.join(missing)}")
        selected = [known[n] for n in names]
    out = []
    for check in selected:
        t0 = time.perf_counter()
        try:
            check.fn()
            out.append(CheckResult(check.name, True, time.perf_counter() - t0))
        except Exception as exc:  # a crashed check is a failed check
            detail = str(exc) or type(exc).__name__
            out.append(
                CheckResult(check.name, False, time.perf_counter() - t0, detail)
            )
    return out
