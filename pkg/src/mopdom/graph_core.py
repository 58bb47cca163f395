"""Maximal outerplanar graphs as triangulated polygons.

A maximal outerplanar graph (MOP) on ``n >= 3`` vertices is stored in its
polygon normal form: vertices are labelled ``0..n-1`` clockwise along the
outer (Hamiltonian) cycle, and the interior is triangulated by exactly
``n - 3`` pairwise non-crossing chords.  Everything else in this package
builds on that representation.

Key facts used by the validator: a set of distinct chords of a convex polygon
that are pairwise non-crossing, none of which is a polygon side, forms a
triangulation exactly when there are ``n - 3`` of them.  So validation only
needs the count, degeneracy, duplicate and crossing checks; maximality and
outerplanarity follow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    CrossingChords,
    DuplicateOrDegenerateChord,
    EmptyOrDisconnected,
    NotMaximalOuterplanar,
    ResultNotMaximalOuterplanar,
    VertexOutOfRange,
    WrongChordCount,
)

VertexSet = frozenset[int]
Chord = tuple[int, int]


@dataclass(frozen=True)
class MopGraph:
    """Immutable MOP in polygon normal form.

    ``chords`` is canonical for the labelling: every pair ``(lo, hi)`` with
    ``lo < hi``, sorted lexicographically.  Two MopGraph values are equal iff
    they are the same labelled graph.  (Use :func:`canonical_form` to compare
    up to rotation/reflection.)
    """

    n: int
    chords: tuple[Chord, ...]

    @cached_property
    def adjacency(self) -> tuple[VertexSet, ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for v in range(self.n):
            nbrs[v].add((v + 1) % self.n)
            nbrs[v].add((v - 1) % self.n)
        for a, b in self.chords:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def chord_set(self) -> frozenset[Chord]:
        return frozenset(self.chords)

    @property
    def m(self) -> int:
        """Edge count; always 2n - 3."""
        return self.n + len(self.chords)

    def edges(self) -> list[Chord]:
        """All edges as (lo, hi) pairs: cycle edges then chords, sorted."""
        cyc = [(i, i + 1) for i in range(self.n - 1)] + [(0, self.n - 1)]
        return sorted(set(cyc) | self.chord_set)

    def degree2_vertices(self) -> tuple[int, ...]:
        """Vertices of degree 2, ascending.  These are exactly the vertices
        that appear in no chord."""
        in_chord = set()
        for a, b in self.chords:
            in_chord.add(a)
            in_chord.add(b)
        if self.n == 3:
            return (0, 1, 2)
        return tuple(v for v in range(self.n) if v not in in_chord)

    def is_cycle_edge(self, a: int, b: int) -> bool:
        return (a - b) % self.n in (1, self.n - 1)


def _normalize_chord(n: int, pair: Sequence[int]) -> Chord:
    try:
        a, b = pair
        a = int(a)
        b = int(b)
    except (TypeError, ValueError) as exc:
        raise DuplicateOrDegenerateChord(f"malformed chord {pair!r}") from exc
    if not (0 <= a < n and 0 <= b < n):
        raise VertexOutOfRange(f"chord {pair!r} has an endpoint outside 0..{n - 1}")
    if a == b:
        raise DuplicateOrDegenerateChord(f"chord {pair!r} is a self-loop")
    lo, hi = (a, b) if a < b else (b, a)
    if hi - lo == 1 or (lo == 0 and hi == n - 1):
        raise DuplicateOrDegenerateChord(f"chord {pair!r} is an outer-cycle edge")
    return (lo, hi)


def _crossing_pair(chords: Sequence[Chord]) -> tuple[Chord, Chord] | None:
    for i, (a, b) in enumerate(chords):
        for c, d in chords[i + 1 :]:
            if a < c < b < d or c < a < d < b:
                return (a, b), (c, d)
    return None


def build_mop(n: int, chords: Iterable[Sequence[int]]) -> MopGraph:
    """Validate and build a MOP from its polygon normal form.

    Raises WrongChordCount, VertexOutOfRange, DuplicateOrDegenerateChord or
    CrossingChords.  ``n < 3`` always fails the count check.
    """
    raw = list(chords)
    if len(raw) != n - 3:
        raise WrongChordCount(f"n={n} needs {n - 3} chords, got {len(raw)}")
    norm = [_normalize_chord(n, p) for p in raw]
    if len(set(norm)) != len(norm):
        seen: set[Chord] = set()
        for c in norm:
            if c in seen:
                raise DuplicateOrDegenerateChord(f"chord {c!r} appears twice")
            seen.add(c)
    cross = _crossing_pair(sorted(norm))
    if cross is not None:
        raise CrossingChords(f"chords {cross[0]!r} and {cross[1]!r} cross")
    return MopGraph(n=n, chords=tuple(sorted(norm)))


def _unchecked(n: int, chords: Iterable[Chord]) -> MopGraph:
    """Fast path for generators whose output is valid by construction."""
    return MopGraph(n=n, chords=tuple(sorted(chords)))


def neighbors(g: MopGraph, v: int) -> VertexSet:
    if not 0 <= v < g.n:
        raise VertexOutOfRange(f"vertex {v} outside 0..{g.n - 1}")
    return g.adjacency[v]


def degree(g: MopGraph, v: int) -> int:
    return len(neighbors(g, v))


def distance(g: MopGraph, u: int, v: int) -> int:
    """Shortest-path distance between u and v (breadth-first search)."""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise VertexOutOfRange(f"vertex pair ({u}, {v}) outside 0..{g.n - 1}")
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    d = 0
    while frontier:
        d += 1
        nxt: list[int] = []
        for w in frontier:
            for x in g.adjacency[w]:
                if x == v:
                    return d
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    raise EmptyOrDisconnected(f"no path from {u} to {v}")  # unreachable on a MOP


# --- reduction ------------------------------------------------------------------


def reduce_graph(
    g: MopGraph,
    delete: Iterable[int],
    add_chords: Iterable[Sequence[int]] = (),
) -> tuple[MopGraph, dict[int, int]]:
    """Delete vertices, optionally add chords, and re-validate.

    Surviving vertices are relabelled by rank among ascending old labels,
    which preserves their clockwise order on the outer cycle.  New edges are
    the surviving old edges plus ``add_chords``; any of them that joins two
    now-consecutive survivors becomes an outer-cycle edge rather than a chord.
    Raises ResultNotMaximalOuterplanar if the result is not a MOP.
    """
    dele = set(delete)
    for v in dele:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{g.n - 1}")
    survivors = [v for v in range(g.n) if v not in dele]
    n2 = len(survivors)
    if n2 < 3:
        raise ResultNotMaximalOuterplanar(f"only {n2} vertices would survive")
    remap = {old: new for new, old in enumerate(survivors)}

    kept: set[Chord] = set()
    for a, b in g.edges():
        if a in dele or b in dele:
            continue
        kept.add((remap[a], remap[b]))
    for pair in add_chords:
        try:
            a, b = (int(pair[0]), int(pair[1]))
        except (TypeError, ValueError, IndexError) as exc:
            raise ResultNotMaximalOuterplanar(f"malformed added chord {pair!r}") from exc
        if a in dele or b in dele or not (0 <= a < g.n and 0 <= b < g.n):
            raise ResultNotMaximalOuterplanar(
                f"added chord {pair!r} touches a deleted or unknown vertex"
            )
        lo, hi = sorted((remap[a], remap[b]))
        kept.add((lo, hi))

    new_chords = [
        (a, b)
        for a, b in kept
        if not ((b - a) % n2 in (1, n2 - 1))
    ]
    try:
        g2 = build_mop(n2, new_chords)
    except (WrongChordCount, CrossingChords, DuplicateOrDegenerateChord, VertexOutOfRange) as exc:
        raise ResultNotMaximalOuterplanar(str(exc)) from exc
    return g2, remap


# --- recognition ------------------------------------------------------------------


def recognize_mop(edges: Iterable[Sequence[object]]) -> tuple[MopGraph, dict[object, int]]:
    """Recognize a MOP given as an arbitrary edge list.

    Vertex ids may be any hashable values.  Returns the canonical polygon
    normal form together with the labelling old-id -> canonical label.

    The algorithm peels degree-2 ear vertices down to a triangle, then
    replays the peel in reverse, inserting each ear only between two
    *currently adjacent* outer-cycle vertices.  The replay is what rejects
    impostors that merely have the right edge count and peel order (for
    example K_{2,3} plus one edge); a final :func:`build_mop` validation
    backstops the reconstruction.
    """
    adj: dict[object, set[object]] = {}
    edge_count = 0
    seen_edges: set[frozenset[object]] = set()
    for e in edges:
        try:
            u, v = e
        except (TypeError, ValueError) as exc:
            raise NotMaximalOuterplanar(f"malformed edge {e!r}") from exc
        if u == v:
            raise NotMaximalOuterplanar(f"self-loop at {u!r}")
        key = frozenset((u, v))
        if key in seen_edges:
            continue
        seen_edges.add(key)
        edge_count += 1
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    if not adj:
        raise EmptyOrDisconnected("no edges given")
    verts = list(adj)
    n = len(verts)

    # connectivity
    stack = [verts[0]]
    reached = {verts[0]}
    while stack:
        w = stack.pop()
        for x in adj[w]:
            if x not in reached:
                reached.add(x)
                stack.append(x)
    if len(reached) != n:
        raise EmptyOrDisconnected(f"{n - len(reached)} vertices unreachable")

    if edge_count != 2 * n - 3:
        raise NotMaximalOuterplanar(f"n={n} has {edge_count} edges, expected {2 * n - 3}")

    # peel ears
    work = {v: set(nb) for v, nb in adj.items()}
    queue = [v for v in verts if len(work[v]) == 2]
    peel: list[tuple[object, object, object]] = []
    removed: set[object] = set()
    while len(work) > 3 and queue:
        v = queue.pop()
        if v in removed or v not in work or len(work[v]) != 2:
            continue
        a, b = work[v]
        if b not in work[a]:
            continue  # ear neighbours must be adjacent; try another candidate
        peel.append((v, a, b))
        removed.add(v)
        del work[v]
        for w in (a, b):
            work[w].discard(v)
            if len(work[w]) == 2:
                queue.append(w)
    if len(work) != 3:
        raise NotMaximalOuterplanar("peeling degree-2 ears did not reach a triangle")
    tri = list(work)
    if not all(y in work[x] for x in tri for y in tri if y != x):
        raise NotMaximalOuterplanar("peeling residue is not a triangle")

    # replay in reverse on a doubly linked outer cycle
    nxt = {tri[0]: tri[1], tri[1]: tri[2], tri[2]: tri[0]}
    prv = {tri[1]: tri[0], tri[2]: tri[1], tri[0]: tri[2]}
    for v, a, b in reversed(peel):
        if nxt[a] == b:
            lo, hi = a, b
        elif nxt[b] == a:
            lo, hi = b, a
        else:
            raise NotMaximalOuterplanar(
                f"ear {v!r} reattaches to non-adjacent outer-cycle vertices"
            )
        nxt[lo] = v
        prv[v] = lo
        nxt[v] = hi
        prv[hi] = v

    start = verts[0]
    order = [start]
    cur = nxt[start]
    while cur != start:
        order.append(cur)
        cur = nxt[cur]
    if len(order) != n:
        raise NotMaximalOuterplanar("reconstructed outer cycle misses vertices")
    pos = {v: i for i, v in enumerate(order)}

    chords = []
    for key in seen_edges:
        u, v = tuple(key)
        a, b = pos[u], pos[v]
        if (a - b) % n in (1, n - 1):
            continue
        chords.append((min(a, b), max(a, b)))
    try:
        g = build_mop(n, chords)
    except (WrongChordCount, CrossingChords, DuplicateOrDegenerateChord) as exc:
        raise NotMaximalOuterplanar(str(exc)) from exc

    canon, transform = canonical_form(g)
    labelling = {v: transform[pos[v]] for v in verts}
    return canon, labelling


# --- canonical form ------------------------------------------------------------------


def _transformed_chords(n: int, chords: Sequence[Chord], rot: int, refl: bool) -> tuple[Chord, ...]:
    out = []
    for a, b in chords:
        if refl:
            x, y = (rot - a) % n, (rot - b) % n
        else:
            x, y = (a - rot) % n, (b - rot) % n
        out.append((x, y) if x < y else (y, x))
    return tuple(sorted(out))


def canonical_form(g: MopGraph) -> tuple[MopGraph, dict[int, int]]:
    """Dihedral canonicalization.

    Returns the relabelled graph whose chord tuple is lexicographically
    smallest over all 2n rotations/reflections, plus the vertex map that
    achieves it.  Ties are broken by the smallest (reflection, rotation)
    pair, so the map is deterministic.
    """
    n = g.n
    best: tuple[Chord, ...] | None = None
    best_rr: tuple[int, int] | None = None
    for refl in (0, 1):
        for rot in range(n):
            cand = _transformed_chords(n, g.chords, rot, bool(refl))
            if best is None or cand < best:
                best = cand
                best_rr = (refl, rot)
    assert best is not None and best_rr is not None
    refl, rot = best_rr
    if refl:
        mapping = {v: (rot - v) % n for v in range(n)}
    else:
        mapping = {v: (v - rot) % n for v in range(n)}
    return MopGraph(n=n, chords=best), mapping


def same_up_to_relabelling(a: MopGraph, b: MopGraph) -> bool:
    """True if a and b are the same MOP up to rotation/reflection."""
    if a.n != b.n:
        return False
    return canonical_form(a)[0].chords == canonical_form(b)[0].chords


# --- serialization ------------------------------------------------------------------


def to_json(g: MopGraph) -> str:
    return json.dumps({"n": g.n, "chords": [list(c) for c in g.chords]})


def from_json(text: str) -> MopGraph:
    obj = json.loads(text)
    if not isinstance(obj, Mapping) or "n" not in obj or "chords" not in obj:
        raise NotMaximalOuterplanar(f"graph object needs 'n' and 'chords': {text[:80]!r}")
    return build_mop(int(obj["n"]), obj["chords"])


def to_edge_list(g: MopGraph) -> str:
    return "\n".join(f"{a} {b}" for a, b in g.edges()) + "\n"


def parse_edge_list(text: str) -> list[tuple[int, int]]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise NotMaximalOuterplanar(f"bad edge line {line!r}")
        out.append((int(parts[0]), int(parts[1])))
    return out


def to_dot(g: MopGraph, name: str = "mop") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for i in range(g.n):
        j = (i + 1) % g.n
        lines.append(f"  {min(i, j)} -- {max(i, j)};")
    for a, b in g.chords:
        lines.append(f"  {a} -- {b} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
