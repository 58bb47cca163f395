"""Triangle dual tree of a MOP, leaf walks, and branch-shape matching.

The n - 2 triangles of the triangulation form a tree (nodes = triangles,
edges = shared chords) with maximum degree 3.  A triangle is an *ear* if two
of its sides are outer-cycle edges, a *side* triangle if one is, *internal*
if none is.  For n >= 4 an ear contains exactly one degree-2 vertex of the
graph, and ear <=> dual-tree leaf.

Walking inward from a leaf along the forced path classifies the branch: if a
degree-3 dual node is reached at distance 1, 2, 4 or 6 with the walk hugging
the expected alternation, the branch is a clean :class:`BranchShape`;
otherwise the first divergence yields a :class:`Deviation` carrying enough
labels to drive a single-branch reduction.  Shapes are matched up to
reflection: mirror-image walks produce the same shape/deviation id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .errors import (
    DeviationPresent,
    NoDegree3Node,
    NotALeaf,
    PreconditionTooSmall,
)
from .graph_core import MopGraph

EAR = "ear"
SIDE = "side"
INTERNAL = "internal"


@dataclass(frozen=True)
class Triangle:
    vertices: tuple[int, int, int]  # sorted ascending
    kind: str  # ear | side | internal


@dataclass(frozen=True)
class DualTree:
    triangles: tuple[Triangle, ...]
    edges: tuple[tuple[int, int, tuple[int, int]], ...]  # (node, node, shared chord)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbr: list[list[int]] = [[] for _ in self.triangles]
        for i, j, _ in self.edges:
            nbr[i].append(j)
            nbr[j].append(i)
        return tuple(tuple(sorted(x)) for x in nbr)

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def leaves(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.triangles)) if self.degree(i) == 1)


class PathTree:
    """Sentinel returned by :func:`nearest_degree3` when the dual tree is a
    pure path and the walk exhausts it without meeting a degree-3 node."""

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "PathTree()"


def build_dual_tree(g: MopGraph) -> DualTree:
    """Construct the dual tree by recursive apex splitting on the base edge
    (0, n-1)."""
    n = g.n
    adj = g.adjacency
    tris: list[tuple[int, int, int]] = []
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        apex = -1
        for j in adj[lo]:
            if lo < j < hi and j in adj[hi]:
                apex = j
                break
        assert apex >= 0, "triangulated polygon region must have an apex"
        tris.append((lo, apex, hi))
        stack.append((lo, apex))
        stack.append((apex, hi))

    tris.sort()
    index = {t: i for i, t in enumerate(tris)}
    assert len(tris) == n - 2

    def kind_of(t: tuple[int, int, int]) -> str:
        cyc = sum(
            1
            for a, b in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))
            if g.is_cycle_edge(a, b)
        )
        if cyc >= 2:
            return EAR
        return SIDE if cyc == 1 else INTERNAL

    edges: list[tuple[int, int, tuple[int, int]]] = []
    by_chord: dict[tuple[int, int], list[int]] = {}
    for t, i in index.items():
        for a, b in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            if not g.is_cycle_edge(a, b):
                by_chord.setdefault((a, b), []).append(i)
    for chord, nodes in sorted(by_chord.items()):
        assert len(nodes) == 2, "every chord separates exactly two triangles"
        i, j = sorted(nodes)
        edges.append((i, j, chord))

    triangles = tuple(Triangle(vertices=t, kind=kind_of(t)) for t in tris)
    return DualTree(triangles=triangles, edges=tuple(edges))


def dual_to_dot(t: DualTree, name: str = "dual") -> str:
    lines = [f"graph {name} {{", "  node [shape=box];"]
    for i, tri in enumerate(t.triangles):
        label = "-".join(str(v) for v in tri.vertices)
        lines.append(f'  t{i} [label="{label}\\n{tri.kind}"];')
    for i, j, chord in t.edges:
        lines.append(f'  t{i} -- t{j} [label="{chord[0]}-{chord[1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def nearest_degree3(t: DualTree, leaf: int):
    """Walk the forced path from ``leaf`` to the first node of degree 3.

    Returns ``(anchor, dist, path)`` where path is the node tuple from the
    leaf to the anchor inclusive, or a :class:`PathTree` sentinel when the
    tree is a path (no degree-3 node on the walk).
    """
    if t.degree(leaf) != 1:
        raise NotALeaf(f"dual node {leaf} has degree {t.degree(leaf)}")
    path = [leaf]
    prev = -1
    cur = leaf
    while True:
        deg = t.degree(cur)
        if deg >= 3:
            return cur, len(path) - 1, tuple(path)
        options = [x for x in t.adjacency[cur] if x != prev]
        if not options:
            return PathTree()
        prev, cur = cur, options[0]
        path.append(cur)


@dataclass(frozen=True)
class BranchShape:
    """A clean leaf-to-anchor walk of length 1, 2, 4 or 6."""

    leaf: int
    anchor: int
    dist: int
    labels: Mapping[str, int] = field(hash=False)

    @property
    def entry_chord_roles(self) -> tuple[str, str]:
        return {1: ("u2", "u3"), 2: ("u2", "u4"), 4: ("u4", "u6"), 6: ("u6", "u8")}[
            self.dist
        ]


@dataclass(frozen=True)
class Deviation:
    """A walk that diverges from the clean shapes; ``variant`` selects the
    single-branch reduction that handles it."""

    leaf: int
    claim: int
    variant: str
    witness_labels: Mapping[str, int] = field(hash=False)


def _deg2_vertex_of_ear(g: MopGraph, tri: tuple[int, int, int]) -> int:
    deg2 = [v for v in tri if len(g.adjacency[v]) == 2]
    assert len(deg2) == 1, f"ear {tri} must contain exactly one degree-2 vertex"
    return deg2[0]


def match_branch_shape(g: MopGraph, t: DualTree, leaf: int):
    """Classify the walk from a dual-tree leaf.

    Returns a :class:`BranchShape` (anchor at distance 1, 2, 4 or 6) or a
    :class:`Deviation`.  Requires n >= 9 so that walk positions 2..6 cannot
    run off the far end of a path tree.
    """
    if g.n < 9:
        raise PreconditionTooSmall(f"branch matching needs n >= 9, got {g.n}")
    if t.degree(leaf) != 1:
        raise NotALeaf(f"dual node {leaf} has degree {t.degree(leaf)}")

    tri = lambda i: set(t.triangles[i].vertices)
    f1 = tri(leaf)
    u1 = _deg2_vertex_of_ear(g, t.triangles[leaf].vertices)
    u2, u3 = sorted(f1 - {u1})

    walk = [leaf]
    cur, prev = leaf, -1

    def step() -> int:
        nonlocal cur, prev
        options = [x for x in t.adjacency[cur] if x != prev]
        assert options, "walk ran off a path end; impossible for n >= 9 patterns"
        prev, cur = cur, options[0]
        walk.append(cur)
        return cur

    def labels(**kw: int) -> dict[str, int]:
        return dict(kw)

    # t2: shares {u2, u3} with the ear
    t2 = step()
    f2 = tri(t2)
    assert {u2, u3} <= f2
    (u4,) = f2 - f1
    if t.degree(t2) == 3:
        return BranchShape(
            leaf=leaf, anchor=t2, dist=1, labels=labels(u1=u1, u2=u2, u3=u3, u4=u4)
        )

    # t3: shares u4 and one of u2/u3; normalize so it is u2
    t3 = step()
    f3 = tri(t3)
    if u3 in f3:
        u2, u3 = u3, u2
    assert {u2, u4} <= f3
    (u5,) = f3 - f2
    if t.degree(t3) == 3:
        return BranchShape(
            leaf=leaf,
            anchor=t3,
            dist=2,
            labels=labels(u1=u1, u2=u2, u3=u3, u4=u4, u5=u5),
        )

    # t4: {u4, u5} continues the clean walk, {u2, u5} deviates
    t4 = step()
    f4 = tri(t4)
    (u6,) = f4 - f3
    base = labels(u1=u1, u2=u2, u3=u3, u4=u4, u5=u5, u6=u6)
    if {u2, u5} <= f4:
        variant = "C2-1" if t.degree(t4) == 3 else "C3"
        return Deviation(leaf=leaf, claim=int(variant[1]), variant=variant, witness_labels=base)
    assert {u4, u5} <= f4
    if t.degree(t4) == 3:
        return Deviation(leaf=leaf, claim=2, variant="C2-2", witness_labels=base)

    # t5: {u4, u6} continues, {u5, u6} deviates (claim 4, any degree)
    t5 = step()
    f5 = tri(t5)
    (u7,) = f5 - f4
    base["u7"] = u7
    if {u5, u6} <= f5:
        return Deviation(leaf=leaf, claim=4, variant="C4", witness_labels=dict(base))
    assert {u4, u6} <= f5
    if t.degree(t5) == 3:
        return BranchShape(leaf=leaf, anchor=t5, dist=4, labels=dict(base))

    # t6: {u6, u7} continues, {u4, u7} deviates (claim 5b, any degree)
    t6 = step()
    f6 = tri(t6)
    (u8,) = f6 - f5
    base["u8"] = u8
    if {u4, u7} <= f6:
        return Deviation(leaf=leaf, claim=5, variant="C5b", witness_labels=dict(base))
    assert {u6, u7} <= f6
    if t.degree(t6) == 3:
        return Deviation(leaf=leaf, claim=5, variant="C5a", witness_labels=dict(base))

    # t7: {u6, u8} continues, {u7, u8} deviates (claim 6a, any degree)
    t7 = step()
    f7 = tri(t7)
    (u9,) = f7 - f6
    base["u9"] = u9
    if {u7, u8} <= f7:
        return Deviation(leaf=leaf, claim=6, variant="C6a", witness_labels=dict(base))
    assert {u6, u8} <= f7
    d7 = t.degree(t7)
    if d7 == 3:
        return BranchShape(leaf=leaf, anchor=t7, dist=6, labels=dict(base))
    if d7 == 1:
        # the dual tree is a 7-node path, so n = 9 exactly
        return Deviation(leaf=leaf, claim=6, variant="C6b", witness_labels=dict(base))

    # t8: {u8, u9} -> claim 6c, {u6, u9} -> claim 6d (any degree)
    t8 = step()
    f8 = tri(t8)
    (u10,) = f8 - f7
    base["u10"] = u10
    if {u8, u9} <= f8:
        return Deviation(leaf=leaf, claim=6, variant="C6c", witness_labels=dict(base))
    assert {u6, u9} <= f8
    return Deviation(leaf=leaf, claim=6, variant="C6d", witness_labels=dict(base))


@dataclass(frozen=True)
class ReductionSite:
    """A degree-3 dual node with two clean path branches hanging off it."""

    anchor: int
    s: BranchShape
    t: BranchShape


def find_reduction_site(g: MopGraph, t: DualTree) -> ReductionSite:
    """Pick the reduction site used by the two-branch cases.

    All leaf walks must be clean shapes (otherwise DeviationPresent); a
    degree-3 node collecting at least two of them always exists (a Steiner
    leaf of the tree of degree-3 nodes).  Branches at the chosen anchor are
    ordered by (dist, leaf index), so s.dist <= t.dist.
    """
    if not any(t.degree(i) == 3 for i in range(len(t.triangles))):
        raise NoDegree3Node("dual tree is a path")
    shapes: list[BranchShape] = []
    for leaf in t.leaves():
        res = match_branch_shape(g, t, leaf)
        if isinstance(res, Deviation):
            raise DeviationPresent(f"leaf {leaf} deviates ({res.variant})")
        shapes.append(res)

    by_anchor: dict[int, list[BranchShape]] = {}
    for sh in shapes:
        by_anchor.setdefault(sh.anchor, []).append(sh)
    multi = {a: lst for a, lst in by_anchor.items() if len(lst) >= 2}
    assert multi, "some degree-3 node must anchor two clean branches"
    anchor = min(multi)
    pair = sorted(multi[anchor], key=lambda sh: (sh.dist, sh.leaf))[:2]
    return ReductionSite(anchor=anchor, s=pair[0], t=pair[1])
