"""Perfect matchings, the characteristic polygon and directed quivers.

Edge-id sets are ordered by edge declaration order throughout, so "sorted"
means sorted by position in the ``.dimer`` file.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .dimer import DimerModel
from .quiver import Path, Quiver, RelationSet


class NotInternalError(ValueError):
    pass


@dataclass(frozen=True)
class PerfectMatching:
    edges: tuple[str, ...]
    homology: tuple[int, int]

    def __contains__(self, edge: str) -> bool:
        return edge in self.edges

    def to_dict(self) -> dict:
        return {"edges": list(self.edges), "class": list(self.homology)}


@dataclass(frozen=True)
class MatchingPolygon:
    vertices: list[tuple[int, int]]
    multiplicity: dict[tuple[int, int], int]
    shift: tuple[int, int]

    def contains_strictly(self, point: tuple[int, int]) -> bool:
        """Is ``point`` (normalized coordinates) in the open interior?"""
        if len(self.vertices) < 3:
            return False
        n = len(self.vertices)
        for i in range(n):
            (x0, y0), (x1, y1) = self.vertices[i], self.vertices[(i + 1) % n]
            if (x1 - x0) * (point[1] - y0) - (y1 - y0) * (point[0] - x0) <= 0:
                return False
        return True

    def interior_points(self) -> list[tuple[int, int]]:
        if not self.vertices:
            return []
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return [
            (x, y)
            for y in range(min(ys), max(ys) + 1)
            for x in range(min(xs), max(xs) + 1)
            if self.contains_strictly((x, y))
        ]

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "multiplicity": [[x, y, m] for (x, y), m in sorted(self.multiplicity.items(), key=lambda t: (t[0][1], t[0][0]))],
            "interior_points": [list(p) for p in self.interior_points()],
        }


def enumerate_matchings(model: DimerModel) -> list[PerfectMatching]:
    """All perfect matchings by backtracking over nodes in declaration order."""
    idx = model.edge_index()
    nodes = model.nodes
    incident = {n: model.incident(n) for n in nodes}
    found: list[tuple[str, ...]] = []

    def extend(covered: set[str], chosen: list[str]) -> None:
        free = next((n for n in nodes if n not in covered), None)
        if free is None:
            found.append(tuple(sorted(chosen, key=idx.__getitem__)))
            return
        for e in incident[free]:
            edge = model.edges[e]
            other = edge.white if free == edge.black else edge.black
            if other in covered:
                continue
            covered |= {free, other}
            chosen.append(e)
            extend(covered, chosen)
            chosen.pop()
            covered -= {free, other}

    extend(set(), [])
    found = sorted(set(found), key=lambda es: [idx[e] for e in es])
    if not found:
        return []

    def offset_sum(es):
        return (sum(model.edges[e].offset[0] for e in es), sum(model.edges[e].offset[1] for e in es))

    x0, y0 = offset_sum(found[0])
    out = []
    for es in found:
        x, y = offset_sum(es)
        out.append(PerfectMatching(es, (x - x0, y - y0)))
    return out


def check_nondegenerate(model: DimerModel, matchings: Sequence[PerfectMatching]) -> tuple[bool, list[str]]:
    covered = set()
    for m in matchings:
        covered.update(m.edges)
    uncovered = [e for e in model.edges if e not in covered]
    return not uncovered, uncovered


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[int, int]]:
    """Counterclockwise hull without collinear points, from the least (x, y)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def characteristic_polygon(matchings: Sequence[PerfectMatching]) -> MatchingPolygon:
    if not matchings:
        raise ValueError("no perfect matchings")
    mx = min(m.homology[0] for m in matchings)
    my = min(m.homology[1] for m in matchings)
    mult = Counter((m.homology[0] - mx, m.homology[1] - my) for m in matchings)
    return MatchingPolygon(convex_hull(mult), dict(mult), (-mx, -my))


def _complement(quiver: Quiver, D: PerfectMatching) -> dict[str, tuple[int, int]]:
    return {a: st for a, st in quiver.arrows.items() if a not in D.edges}


def _topological_order(vertices, arrows) -> list[int] | None:
    indeg = {v: 0 for v in vertices}
    succ: dict[int, list[int]] = {v: [] for v in vertices}
    for s, t in arrows.values():
        succ[s].append(t)
        indeg[t] += 1
    heap = [v for v in vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == len(vertices) else None


def _has_cycle(vertices, arrows) -> bool:
    succ: dict[int, list[int]] = {v: [] for v in vertices}
    for s, t in arrows.values():
        succ[s].append(t)
    state = dict.fromkeys(vertices, 0)  # 0 new, 1 on stack, 2 done
    for root in vertices:
        if state[root]:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                state[v] = 2
                stack.pop()
            elif state[w] == 1:
                return True
            elif state[w] == 0:
                state[w] = 1
                stack.append((w, iter(succ[w])))
    return False


def is_internal(quiver: Quiver, D: PerfectMatching) -> bool:
    """True iff the quiver with the arrows of ``D`` removed is acyclic."""
    return not _has_cycle(quiver.vertices, _complement(quiver, D))


def order_from_matching(quiver: Quiver, D: PerfectMatching) -> list[int]:
    """Vertices in increasing order; smallest face id first among ties."""
    order = _topological_order(quiver.vertices, _complement(quiver, D))
    if order is None:
        raise NotInternalError(f"matching {D.edges} leaves an oriented cycle")
    pos = {v: i for i, v in enumerate(order)}
    backwards = {a for a, (s, t) in quiver.arrows.items() if pos[s] > pos[t]}
    if backwards != set(D.edges):
        raise AssertionError(f"order does not cut out the matching: {sorted(backwards)}")
    return order


@dataclass(frozen=True)
class DirectedQuiver:
    vertices: list[int]
    arrows: dict[str, tuple[int, int]]
    relations: dict[str, tuple[Path, Path]]
    order: list[int]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "arrows": {a: list(st) for a, st in self.arrows.items()},
            "relations": {a: [list(pw), list(pb)] for a, (pw, pb) in self.relations.items()},
        }


def directed_quiver(quiver: Quiver, rel: RelationSet, D: PerfectMatching) -> DirectedQuiver:
    order = order_from_matching(quiver, D)
    arrows = _complement(quiver, D)
    kept = {
        a: (pw, pb)
        for a, (pw, pb) in rel.pairs.items()
        if a in D.edges and not any(b in D.edges for b in pw + pb)
    }
    pos = {v: i for i, v in enumerate(order)}
    if any(pos[s] >= pos[t] for s, t in arrows.values()):
        raise AssertionError("remaining arrows are not increasing in the order")
    return DirectedQuiver(list(quiver.vertices), arrows, kept, order)
