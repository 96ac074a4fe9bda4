"""Dual quiver, potential, cyclic derivatives and relations of a dimer model.

Paths are tuples of arrow ids written right to left, ``(a_n, ..., a_1)``:
``a_1`` is traversed first.  Composition ``m(g, f)`` means ``f`` first.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .dimer import BW, WB, WHITE, Dart, DimerModel, Face, face_of_dart, trace_faces

Path = tuple[str, ...]
FormalSum = dict[Path, int]


@dataclass(frozen=True)
class Quiver:
    vertices: list[int]
    arrows: dict[str, tuple[int, int]]
    # node id -> arrows around the node in traversal order (t(c[i]) == s(c[i+1]))
    node_cycles: dict[str, tuple[str, ...]] = field(default_factory=dict)
    node_colors: dict[str, str] = field(default_factory=dict)

    def source(self, arrow: str) -> int:
        return self.arrows[arrow][0]

    def target(self, arrow: str) -> int:
        return self.arrows[arrow][1]

    def arrow_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.arrows)}

    def loops(self) -> list[str]:
        return [a for a, (s, t) in self.arrows.items() if s == t]

    def arrows_between(self, v: int, w: int) -> list[str]:
        return [a for a, st in self.arrows.items() if st == (v, w)]

    def node_path(self, node: str) -> Path:
        """The minimal cyclic path ``c(node)`` in written order."""
        return tuple(reversed(self.node_cycles[node]))

    def white_node(self, arrow: str) -> str:
        return next(n for n, c in self.node_cycles.items() if arrow in c and self.node_colors[n] == WHITE)

    def black_node(self, arrow: str) -> str:
        return next(n for n, c in self.node_cycles.items() if arrow in c and self.node_colors[n] != WHITE)


def dual_quiver(model: DimerModel, faces: Sequence[Face] | None = None) -> Quiver:
    """One arrow per edge, from the face left of ``wb`` to the face left of ``bw``.

    This puts the white endpoint of every edge on the right of its arrow.
    """
    if faces is None:
        faces = trace_faces(model)
    fd = face_of_dart(faces)
    arrows = {e: (fd[Dart(e, WB)], fd[Dart(e, BW)]) for e in model.edges}
    cycles = {}
    for n, rot in model.rotations.items():
        # arrows circle white nodes clockwise and black nodes counterclockwise
        seq = tuple(reversed(rot)) if model.colors[n] == WHITE else tuple(rot)
        cycles[n] = seq
    quiver = Quiver([f.id for f in faces], arrows, cycles, dict(model.colors))
    for n, cyc in cycles.items():
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if quiver.target(a) != quiver.source(b):
                raise AssertionError(f"arrows around {n} do not compose at {a}, {b}")
    return quiver


def path_source(quiver: Quiver, p: Path) -> int:
    return quiver.source(p[-1])


def path_target(quiver: Quiver, p: Path) -> int:
    return quiver.target(p[0])


def is_path(quiver: Quiver, p: Path) -> bool:
    # written right to left: p[i+1] is traversed just before p[i]
    return all(quiver.target(p[i + 1]) == quiver.source(p[i]) for i in range(len(p) - 1))


def canonical_cycle(p: Path, arrow_index: Mapping[str, int]) -> Path:
    """Representative of the rotation class of ``p`` with least id sequence."""
    rotations = [p[i:] + p[:i] for i in range(len(p))]
    return min(rotations, key=lambda r: [arrow_index[a] for a in r])


def cyclic_derivative(p: Path, b: str) -> FormalSum:
    n = len(p)
    # a_i sits at tuple position n - i
    a = {i: p[n - i] for i in range(1, n + 1)}
    out: Counter = Counter()
    for i in range(1, n + 1):
        if a[i] != b:
            continue
        term = tuple(a[j] for j in range(i - 1, 0, -1)) + tuple(a[j] for j in range(n, i, -1))
        out[term] += 1
    return {t: c for t, c in out.items() if c}


def potential(quiver: Quiver) -> dict[Path, int]:
    """Sum of white node cycles minus black node cycles, in canonical rotation."""
    idx = quiver.arrow_index()
    phi: Counter = Counter()
    for n in quiver.node_cycles:
        sign = 1 if quiver.node_colors[n] == WHITE else -1
        phi[canonical_cycle(quiver.node_path(n), idx)] += sign
    return {p: c for p, c in phi.items() if c}


def derivative(phi: Mapping[Path, int], b: str) -> FormalSum:
    out: Counter = Counter()
    for p, c in phi.items():
        for term, k in cyclic_derivative(p, b).items():
            out[term] += c * k
    return {t: c for t, c in out.items() if c}


@dataclass(frozen=True)
class RelationSet:
    quiver: Quiver
    # arrow -> (p_white, p_black), both paths from t(a) to s(a)
    pairs: dict[str, tuple[Path, Path]]

    def __len__(self) -> int:
        return len(self.pairs)


def relations(quiver: Quiver, phi: Mapping[Path, int]) -> RelationSet:
    pairs = {}
    for a in quiver.arrows:
        d = derivative(phi, a)
        (pw,) = cyclic_derivative(quiver.node_path(quiver.white_node(a)), a)
        (pb,) = cyclic_derivative(quiver.node_path(quiver.black_node(a)), a)
        expected = Counter({pw: 1})
        expected[pb] -= 1
        if d != {t: c for t, c in expected.items() if c}:
            raise ValueError(f"potential derivative at {a} is not a node-path difference: {d}")
        pairs[a] = (pw, pb)
    return RelationSet(quiver, pairs)


def matching_degree(p: Path, matching_edges: Iterable[str]) -> int:
    s = set(matching_edges)
    return sum(1 for a in p if a in s)


class Equivalence(str, Enum):
    EQUIVALENT = "equivalent"
    INEQUIVALENT = "inequivalent-within-bound"
    UNKNOWN = "unknown"


def _rewrites(p: Path, pairs: Iterable[tuple[Path, Path]]):
    for lhs, rhs in pairs:
        for src, dst in ((lhs, rhs), (rhs, lhs)):
            k = len(src)
            for i in range(len(p) - k + 1):
                if p[i:i + k] == src:
                    yield p[:i] + dst + p[i + k:]


def paths_equivalent(
    rel: RelationSet,
    p: Path,
    q: Path,
    max_steps: int = 10_000,
    matchings: Sequence | None = None,
) -> Equivalence:
    """Bounded bidirectional search for a chain of single-relation rewrites.

    ``max_steps`` caps the total number of node expansions.  If ``matchings``
    are supplied, a difference in any matching degree certifies
    inequivalence up front (rewrites preserve every matching degree).
    """
    quiver = rel.quiver
    if not p or not q:
        raise ValueError("paths must be nonempty")
    ends = lambda x: (path_source(quiver, x), path_target(quiver, x))
    if ends(p) != ends(q):
        raise ValueError(f"endpoint mismatch: {ends(p)} vs {ends(q)}")
    if p == q:
        return Equivalence.EQUIVALENT
    if matchings is not None:
        for m in matchings:
            if matching_degree(p, m.edges) != matching_degree(q, m.edges):
                return Equivalence.INEQUIVALENT
    pairs = list(rel.pairs.values())
    seen = [{p}, {q}]
    frontier = [[p], [q]]
    steps = 0
    # once one side's closure is exhausted it is a whole equivalence class
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        next_frontier = []
        for x in frontier[side]:
            if steps >= max_steps:
                return Equivalence.UNKNOWN
            steps += 1
            for y in _rewrites(x, pairs):
                if y in seen[1 - side]:
                    return Equivalence.EQUIVALENT
                if y not in seen[side]:
                    seen[side].add(y)
                    next_frontier.append(y)
        frontier[side] = next_frontier
    return Equivalence.INEQUIVALENT
