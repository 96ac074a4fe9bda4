"""Dimer models on the two-torus as combinatorial maps.

A model is a bipartite graph given by a rotation system (the counterclockwise
cyclic order of edges at every node) together with an integer offset per
edge.  The offset is the deck translation in ``H_1(T) = Z^2`` applied to the
white endpoint, so a walk's homology class is a signed sum of offsets.

Darts are ``(edge_id, direction)`` pairs with direction ``"bw"`` (black to
white) or ``"wb"`` (white to black).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

BLACK = "black"
WHITE = "white"
BW = "bw"
WB = "wb"

HEADER = "dimer v1"


class DimerFormatError(ValueError):
    """Raised for malformed ``.dimer`` text; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimerReferenceError(DimerFormatError):
    pass


class Dart(NamedTuple):
    edge: str
    direction: str

    def reverse(self) -> "Dart":
        return Dart(self.edge, WB if self.direction == BW else BW)


class Edge(NamedTuple):
    id: str
    black: str
    white: str
    offset: tuple[int, int]


@dataclass(frozen=True)
class DimerModel:
    colors: dict[str, str]
    edges: dict[str, Edge]
    rotations: dict[str, tuple[str, ...]]
    positions: dict[str, tuple[Fraction, Fraction]] = field(default_factory=dict)

    @property
    def nodes(self) -> list[str]:
        return list(self.colors)

    @property
    def black_nodes(self) -> list[str]:
        return [n for n, c in self.colors.items() if c == BLACK]

    @property
    def white_nodes(self) -> list[str]:
        return [n for n, c in self.colors.items() if c == WHITE]

    def edge_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def darts(self) -> list[Dart]:
        out = []
        for e in self.edges:
            out.append(Dart(e, BW))
            out.append(Dart(e, WB))
        return out

    def tail(self, dart: Dart) -> str:
        edge = self.edges[dart.edge]
        return edge.black if dart.direction == BW else edge.white

    def head(self, dart: Dart) -> str:
        edge = self.edges[dart.edge]
        return edge.white if dart.direction == BW else edge.black

    def incident(self, node: str) -> list[str]:
        """Edge ids touching ``node``, in declaration order."""
        return [e.id for e in self.edges.values() if node in (e.black, e.white)]

    def valence(self, node: str) -> int:
        return len(self.incident(node))

    def successor(self, node: str, edge: str) -> str:
        rot = self.rotations[node]
        return rot[(rot.index(edge) + 1) % len(rot)]

    def predecessor(self, node: str, edge: str) -> str:
        rot = self.rotations[node]
        return rot[(rot.index(edge) - 1) % len(rot)]

    def twisted(self) -> "DimerModel":
        """Same graph with the rotation at every black node reversed."""
        rotations = {
            n: (tuple(reversed(r)) if self.colors[n] == BLACK else r)
            for n, r in self.rotations.items()
        }
        return DimerModel(dict(self.colors), dict(self.edges), rotations, dict(self.positions))


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple[Dart, ...]

    @property
    def edges(self) -> tuple[str, ...]:
        return tuple(d.edge for d in self.boundary)


@dataclass(frozen=True)
class ZigzagPath:
    darts: tuple[Dart, ...]
    homology: tuple[int, int]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass
class ConsistencyReport:
    nondegenerate: bool
    uncovered_edges: list[str]
    trivial_zigzags: list[ZigzagPath]
    repeated_edge_zigzags: list[ZigzagPath]

    @property
    def nontrivial_classes(self) -> bool:
        return not self.trivial_zigzags

    @property
    def no_repeated_edges(self) -> bool:
        return not self.repeated_edge_zigzags

    @property
    def consistent(self) -> bool:
        return self.nondegenerate and self.nontrivial_classes and self.no_repeated_edges

    def reasons(self) -> list[str]:
        out = []
        if not self.nondegenerate:
            out.append("degenerate")
        if self.trivial_zigzags:
            out.append("trivial-zigzag")
        if self.repeated_edge_zigzags:
            out.append("repeated-edge")
        return out

    def to_dict(self) -> dict:
        return {
            "verdict": "zigzag-consistent" if self.consistent else "zigzag-inconsistent",
            "nondegenerate": self.nondegenerate,
            "uncovered_edges": list(self.uncovered_edges),
            "no_trivial_zigzag": self.nontrivial_classes,
            "trivial_zigzags": [dart_labels(z.darts) for z in self.trivial_zigzags],
            "no_repeated_edge": self.no_repeated_edges,
            "repeated_edge_zigzags": [dart_labels(z.darts) for z in self.repeated_edge_zigzags],
        }


def dart_labels(darts: Iterable[Dart]) -> list[str]:
    return [f"{d.edge}:{d.direction}" for d in darts]


# -- parsing ---------------------------------------------------------------


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DimerFormatError(f"expected integer, got {tok!r}", lineno) from None


def _parse_coord(tok: str, lineno: int) -> Fraction:
    try:
        value = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise DimerFormatError(f"expected rational coordinate, got {tok!r}", lineno) from None
    if not 0 <= value < 1:
        raise DimerFormatError(f"coordinate {tok} outside [0, 1)", lineno)
    return value


def parse_dimer(text: str) -> DimerModel:
    """Parse ``.dimer`` v1 text.  Only syntax and references are checked."""
    lines = [
        (i, raw.split("#", 1)[0].strip())
        for i, raw in enumerate(text.splitlines(), start=1)
    ]
    lines = [(i, s) for i, s in lines if s]
    if not lines:
        raise DimerFormatError("empty input", 1)
    first_line, first = lines[0]
    if first.split() != HEADER.split():
        raise DimerFormatError(f"expected header {HEADER!r}", first_line)

    colors: dict[str, str] = {}
    edges: dict[str, Edge] = {}
    rotations: dict[str, tuple[str, ...]] = {}
    positions: dict[str, tuple[Fraction, Fraction]] = {}
    edge_lines: dict[str, int] = {}
    rot_lines: dict[str, int] = {}
    pos_lines: dict[str, int] = {}

    for lineno, line in lines[1:]:
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "node":
            if len(args) != 2 or args[1] not in (BLACK, WHITE):
                raise DimerFormatError("expected 'node <id> black|white'", lineno)
            if args[0] in colors:
                raise DimerFormatError(f"duplicate node id {args[0]!r}", lineno)
            colors[args[0]] = args[1]
        elif kind == "edge":
            if len(args) != 5:
                raise DimerFormatError("expected 'edge <id> <black> <white> <dx> <dy>'", lineno)
            eid = args[0]
            if eid in edges:
                raise DimerFormatError(f"duplicate edge id {eid!r}", lineno)
            offset = (_parse_int(args[3], lineno), _parse_int(args[4], lineno))
            edges[eid] = Edge(eid, args[1], args[2], offset)
            edge_lines[eid] = lineno
        elif kind == "rot":
            if not args:
                raise DimerFormatError("expected 'rot <node> <edge> ...'", lineno)
            if args[0] in rotations:
                raise DimerFormatError(f"duplicate rotation for node {args[0]!r}", lineno)
            rotations[args[0]] = tuple(args[1:])
            rot_lines[args[0]] = lineno
        elif kind == "pos":
            if len(args) != 3:
                raise DimerFormatError("expected 'pos <node> <x> <y>'", lineno)
            if args[0] in positions:
                raise DimerFormatError(f"duplicate position for node {args[0]!r}", lineno)
            positions[args[0]] = (_parse_coord(args[1], lineno), _parse_coord(args[2], lineno))
            pos_lines[args[0]] = lineno
        else:
            raise DimerFormatError(f"unknown directive {kind!r}", lineno)

    for eid, e in edges.items():
        for node in (e.black, e.white):
            if node not in colors:
                raise DimerReferenceError(f"edge {eid!r} references undeclared node {node!r}", edge_lines[eid])
    for node, rot in rotations.items():
        if node not in colors:
            raise DimerReferenceError(f"rotation for undeclared node {node!r}", rot_lines[node])
        for eid in rot:
            if eid not in edges:
                raise DimerReferenceError(f"rotation references undeclared edge {eid!r}", rot_lines[node])
    for node in positions:
        if node not in colors:
            raise DimerReferenceError(f"position for undeclared node {node!r}", pos_lines[node])

    return DimerModel(colors, edges, rotations, positions)


def serialize(model: DimerModel) -> str:
    out = [HEADER]
    for n, c in model.colors.items():
        out.append(f"node {n} {c}")
    for e in model.edges.values():
        out.append(f"edge {e.id} {e.black} {e.white} {e.offset[0]} {e.offset[1]}")
    for n, rot in model.rotations.items():
        out.append(" ".join(["rot", n, *rot]))
    for n, (x, y) in model.positions.items():
        out.append(f"pos {n} {x} {y}")
    return "\n".join(out) + "\n"


def load_dimer(path) -> DimerModel:
    with open(path, encoding="utf-8") as fh:
        return parse_dimer(fh.read())


# -- combinatorial map machinery -------------------------------------------


def _orbits(model: DimerModel, step) -> list[tuple[Dart, ...]]:
    seen: set[Dart] = set()
    orbits = []
    for start in model.darts():
        if start in seen:
            continue
        orbit = []
        d = start
        while d not in seen:
            seen.add(d)
            orbit.append(d)
            d = step(d)
        if d != start:
            raise ValueError(f"dart map is not a permutation near {start}")
        orbits.append(tuple(orbit))
    return orbits


def _face_step(model: DimerModel):
    def step(d: Dart) -> Dart:
        node = model.head(d)
        nxt = model.predecessor(node, d.edge)
        return Dart(nxt, WB if d.direction == BW else BW)

    return step


def trace_faces(model: DimerModel) -> list[Face]:
    """Faces as orbits of the next-dart rule.

    Entering a node along edge ``e`` the face continues along the edge
    preceding ``e`` in the counterclockwise rotation at that node; faces are
    therefore traversed with their interior on the left.  Face ids are
    assigned in order of first dart (edge declaration order, ``bw`` first).
    """
    return [Face(i, orbit) for i, orbit in enumerate(_orbits(model, _face_step(model)))]


def face_of_dart(faces: Sequence[Face]) -> dict[Dart, int]:
    return {d: f.id for f in faces for d in f.boundary}


def homology_class(model: DimerModel, walk: Sequence[Dart]) -> tuple[int, int]:
    if not walk:
        return (0, 0)
    for a, b in zip(walk, list(walk[1:]) + [walk[0]]):
        if model.head(a) != model.tail(b):
            raise ValueError(f"walk is not closed/connected between {a} and {b}")
    x = y = 0
    for d in walk:
        dx, dy = model.edges[d.edge].offset
        if d.direction == BW:
            x, y = x + dx, y + dy
        else:
            x, y = x - dx, y - dy
    return (x, y)


def _zigzag_step(model: DimerModel):
    def step(d: Dart) -> Dart:
        node = model.head(d)
        if model.colors[node] == WHITE:
            nxt = model.successor(node, d.edge)
        else:
            nxt = model.predecessor(node, d.edge)
        return Dart(nxt, WB if d.direction == BW else BW)

    return step


def zigzag_paths(model: DimerModel) -> list[ZigzagPath]:
    """Zigzags: turn to the rotation successor at white, predecessor at black."""
    return [
        ZigzagPath(orbit, homology_class(model, orbit))
        for orbit in _orbits(model, _zigzag_step(model))
    ]


# -- validation --------------------------------------------------------------


def _connected(model: DimerModel) -> bool:
    nodes = model.nodes
    if not nodes:
        return True
    adj: dict[str, set[str]] = {n: set() for n in nodes}
    for e in model.edges.values():
        adj[e.black].add(e.white)
        adj[e.white].add(e.black)
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        n = queue.popleft()
        for m in adj[n] - seen:
            seen.add(m)
            queue.append(m)
    return len(seen) == len(nodes)


def validate(model: DimerModel) -> list[Violation]:
    """Every violated invariant; an empty list means the model is usable."""
    out: list[Violation] = []
    for e in model.edges.values():
        if model.colors[e.black] != BLACK or model.colors[e.white] != WHITE:
            out.append(Violation("edge-colors", f"edge {e.id} does not join a black node to a white node"))
    rotation_ok = True
    for n in model.nodes:
        incident = model.incident(n)
        if len(incident) < 2:
            out.append(Violation("valence", f"node {n} has valence {len(incident)} < 2"))
        rot = model.rotations.get(n)
        if rot is None:
            out.append(Violation("rotation-missing", f"node {n} has no rotation"))
            rotation_ok = False
        elif len(set(rot)) != len(rot):
            out.append(Violation("rotation-duplicate", f"rotation at {n} repeats an edge"))
            rotation_ok = False
        elif set(rot) != set(incident):
            missing = sorted(set(incident) - set(rot))
            extra = sorted(set(rot) - set(incident))
            if missing:
                out.append(Violation("rotation-incomplete", f"rotation at {n} omits {', '.join(missing)}"))
            if extra:
                out.append(Violation("rotation-foreign", f"rotation at {n} lists non-incident {', '.join(extra)}"))
            rotation_ok = False
    if not _connected(model):
        out.append(Violation("disconnected", "underlying graph is not connected"))
    if rotation_ok and not any(v.code == "edge-colors" for v in out):
        n_faces = len(trace_faces(model))
        chi = len(model.colors) - len(model.edges) + n_faces
        if chi != 0:
            out.append(Violation("euler-characteristic", f"Euler characteristic is {chi}, not 0 (F = {n_faces})"))
    return out


def check_consistency(model: DimerModel, matchings: Sequence) -> ConsistencyReport:
    """Zigzag-consistency gate.

    ``matchings`` is the full enumeration from :func:`enumerate_matchings`;
    anything with an ``edges`` attribute works.
    """
    covered: set[str] = set()
    for m in matchings:
        covered |= set(m.edges)
    uncovered = [e for e in model.edges if e not in covered]
    trivial = []
    repeated = []
    for z in zigzag_paths(model):
        if z.homology == (0, 0):
            trivial.append(z)
        edges = [d.edge for d in z.darts]
        if len(set(edges)) != len(edges):
            repeated.append(z)
    return ConsistencyReport(not uncovered, uncovered, trivial, repeated)
