"""Grid and wall pattern graphs and their frame/skeleton decompositions.

Grids G(s,t) live on [s] x [t] with unit axis steps. Walls W(s,t) are the
brick-wall graphs of width s and height t built from two vertex families
v_{i,j} and u_{i,j}. Coordinates in this module are 1-based, matching the
labels; vertex ids are dense and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import Graph, GraphError, build_graph


class PatternError(GraphError):
    pass


def grid_id(s: int, t: int, i: int, j: int) -> int:
    """Row-major id of grid vertex (i,j), 1-based coordinates."""
    if not (1 <= i <= s and 1 <= j <= t):
        raise PatternError(f"grid coordinate ({i},{j}) outside [{s}]x[{t}]")
    return (i - 1) * t + (j - 1)


def grid_coords(s: int, t: int, vid: int) -> tuple[int, int]:
    if not (0 <= vid < s * t):
        raise PatternError(f"grid id {vid} out of range")
    return vid // t + 1, vid % t + 1


def make_grid(s: int, t: int) -> Graph:
    """The s x t grid; vertices labeled "(i,j)"."""
    if s < 1 or t < 1:
        raise PatternError(f"grid dimensions must be >= 1, got ({s},{t})")
    edges = []
    for i in range(1, s + 1):
        for j in range(1, t + 1):
            if i < s:
                edges.append((grid_id(s, t, i, j), grid_id(s, t, i + 1, j)))
            if j < t:
                edges.append((grid_id(s, t, i, j), grid_id(s, t, i, j + 1)))
    labels = [None] * (s * t)
    for i in range(1, s + 1):
        for j in range(1, t + 1):
            labels[grid_id(s, t, i, j)] = f"({i},{j})"
    return build_graph(s * t, edges, labels)


def wall_v_label(i: int, j: int) -> str:
    return f"v_{{{i},{j}}}"


def wall_u_label(i: int, j: int) -> str:
    return f"u_{{{i},{j}}}"


def _wall_coords(s: int, t: int) -> list[tuple[str, int, int]]:
    """All wall vertices as (kind, i, j), in id order: v's by (j,i), then u's."""
    vs = []
    v_cols = list(range(1, t + 1)) + ([t + 1] if t % 2 == 1 else [])
    for j in v_cols:
        for i in range(1, s + 2):
            vs.append(("v", i, j))
    u_cols = list(range(2, t + 1)) + ([t + 1] if t % 2 == 0 else [])
    for j in u_cols:
        for i in range(1, s + 2):
            vs.append(("u", i, j))
    return vs


def make_wall(s: int, t: int) -> Graph:
    """The wall of width s and height t; vertices labeled v_{i,j} / u_{i,j}."""
    if s < 1 or t < 1:
        raise PatternError(f"wall dimensions must be >= 1, got ({s},{t})")
    coords = _wall_coords(s, t)
    vid = {c: k for k, c in enumerate(coords)}
    edges = []
    # bottom row of v's
    for i in range(1, s + 1):
        edges.append((vid[("v", i, 1)], vid[("v", i + 1, 1)]))
    # top row: v's when t is odd, u's when t is even
    top = "v" if t % 2 == 1 else "u"
    for i in range(1, s + 1):
        edges.append((vid[(top, i, t + 1)], vid[(top, i + 1, t + 1)]))
    # brick rows: v_{1,j} u_{1,j} v_{2,j} ... v_{s+1,j} u_{s+1,j}; the
    # trailing v_{s+1,j}-u_{s+1,j} edge keeps the right boundary attached
    for j in range(2, t + 1):
        for i in range(1, s + 2):
            edges.append((vid[("v", i, j)], vid[("u", i, j)]))
            if i <= s:
                edges.append((vid[("u", i, j)], vid[("v", i + 1, j)]))
    # vertical connectors: v's at odd j, u's at even j
    for j in range(1, t + 1):
        kind = "v" if j % 2 == 1 else "u"
        for i in range(1, s + 2):
            edges.append((vid[(kind, i, j)], vid[(kind, i, j + 1)]))
    labels = [
        wall_v_label(i, j) if kind == "v" else wall_u_label(i, j)
        for kind, i, j in coords
    ]
    return build_graph(len(coords), edges, labels)


def pattern_treewidth(kind: str, s: int, t: int) -> int:
    """Closed-form treewidth of the pattern families.

    min(s,t) for grids, min(s,t)+1 for walls; returned without computational
    verification.
    """
    if s < 1 or t < 1:
        raise PatternError(f"dimensions must be >= 1, got ({s},{t})")
    if kind == "grid":
        return min(s, t)
    if kind == "wall":
        return min(s, t) + 1
    raise PatternError(f"unknown pattern kind {kind!r}")


@dataclass(frozen=True)
class SkeletonSpec:
    """A candidate skeleton: removal set F, contraction set D, and metadata."""

    F: frozenset[int]
    D: frozenset[int]
    meta: dict = field(default_factory=dict, compare=False)

    def to_json_dict(self) -> dict:
        meta = {
            k: (sorted(v) if isinstance(v, (set, frozenset)) else v)
            for k, v in self.meta.items()
        }
        return {"F": sorted(self.F), "D": sorted(self.D), "meta": meta}

    @staticmethod
    def from_json_dict(data: dict) -> "SkeletonSpec":
        try:
            f = frozenset(int(v) for v in data["F"])
            d = frozenset(int(v) for v in data["D"])
        except (KeyError, TypeError, ValueError) as exc:
            raise PatternError(f"malformed skeleton JSON: {exc}") from None
        return SkeletonSpec(F=f, D=d, meta=dict(data.get("meta", {})))


def grid_center_set(s: int, t: int) -> frozenset[int]:
    """The even-even center vertices used in the 4-cycle covering argument."""
    k1 = (s - 1) // 2
    k2 = (t - 2) // 2
    return frozenset(
        grid_id(s, t, 2 * i, 2 * j)
        for i in range(1, k1 + 1)
        for j in range(1, k2 + 2)
    )


def grid_skeleton(s: int, t: int) -> SkeletonSpec:
    """The standard grid skeleton: boundary bands plus interior posts, with
    degree-2 connector rows contracted.

    Requires s >= 5 and t >= 6. The quotient is the k x l grid with
    k = floor((s-1)/2) - 1 and l = floor((t-2)/2) - 1.
    """
    if s < 5 or t < 6:
        raise PatternError(f"grid skeleton needs s >= 5 and t >= 6, got ({s},{t})")
    k1 = (s - 1) // 2
    k2 = (t - 2) // 2
    f: set[int] = set()
    for i in range(1, s + 1):
        for j in range(1, t + 1):
            if i <= 2 or i >= 2 * k1 or j == 1 or j > 2 * k2:
                f.add(grid_id(s, t, i, j))
    for i in range(1, k1 + 1):
        for j in range(1, k2 + 1):
            f.add(grid_id(s, t, 2 * i, 2 * j))
    d: set[int] = set()
    for i in range(1, k1):
        for j in range(1, k2 + 1):
            d.add(grid_id(s, t, 2 * i + 1, 2 * j))
    for i in range(2, k1):
        for j in range(1, k2):
            d.add(grid_id(s, t, 2 * i, 2 * j + 1))
    center = grid_center_set(s, t)
    assert center <= f
    meta = {
        "kind": "grid",
        "s": s,
        "t": t,
        "k1": k1,
        "k2": k2,
        "quotient_shape": (k1 - 1, k2 - 1),
        "center": center,
    }
    return SkeletonSpec(F=frozenset(f), D=frozenset(d), meta=meta)


def wall_skeleton(s: int, t: int) -> SkeletonSpec:
    """The standard wall skeleton: two horizontal boundary bands (F1) and two
    vertical boundary bands (F2); nothing is contracted (D is empty).

    Requires s >= 3 and t >= 4.
    """
    if s < 3 or t < 4:
        raise PatternError(f"wall skeleton needs s >= 3 and t >= 4, got ({s},{t})")
    w = make_wall(s, t)
    vid = lambda kind, i, j: w.id_of(
        wall_v_label(i, j) if kind == "v" else wall_u_label(i, j)
    )
    f1: set[int] = set()
    for i in range(1, s + 2):
        f1.add(vid("v", i, 1))
        f1.add(vid("v", i, 2))
        f1.add(vid("u", i, 2))
        f1.add(vid("v", i, t))
        f1.add(vid("u", i, t))
        if t % 2 == 1:
            f1.add(vid("v", i, t + 1))
        else:
            f1.add(vid("u", i, t + 1))
    f2: set[int] = set()
    for j in range(3, t):
        f2.add(vid("v", 1, j))
        f2.add(vid("u", 1, j))
        f2.add(vid("v", 2, j))
        f2.add(vid("u", s, j))
        f2.add(vid("v", s + 1, j))
        f2.add(vid("u", s + 1, j))
    meta = {
        "kind": "wall",
        "s": s,
        "t": t,
        "F1": frozenset(f1),
        "F2": frozenset(f2),
    }
    return SkeletonSpec(F=frozenset(f1 | f2), D=frozenset(), meta=meta)
