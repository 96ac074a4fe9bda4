"""Combinatorial directed Fukaya category of the vanishing cycles.

The surface is the ribbon graph of the dimer model with the cyclic order at
black nodes reversed.  Each face ``v`` gives an immersed circle ``C_v``
running along the boundary of ``v``; two circles meet once per arrow between
their faces.  Operations come from the node disks only: a node with edges
``e_0, e_1, ..., e_k`` in the twisted cyclic order, ``e_0`` matched, bounds a
(k+1)-gon giving ``m_k(e_k, ..., e_1) = +-e_0``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ainf import (
    ARROW,
    DUAL,
    BasisMorphism,
    DirectedAInf,
    tag_origin,
    identity,
    unit_entries,
)
from .dimer import WB, WHITE, DimerModel, trace_faces
from .matchings import NotInternalError, PerfectMatching
from .quiver import Quiver

OUT, IN = "out", "in"


@dataclass(frozen=True)
class RibbonSurface:
    rotations: dict[str, tuple[str, ...]]
    boundary_orbits: list[tuple]
    euler_characteristic: int
    genus: int

    def to_dict(self) -> dict:
        return {
            "boundary_orbits": len(self.boundary_orbits),
            "euler_characteristic": self.euler_characteristic,
            "genus": self.genus,
        }


def build_surface(model: DimerModel) -> RibbonSurface:
    twisted = model.twisted()
    orbits = [f.boundary for f in trace_faces(twisted)]
    chi = len(model.nodes) - len(model.edges) + len(orbits)
    if chi % 2:
        raise AssertionError(f"odd Euler characteristic {chi}")
    return RibbonSurface(dict(twisted.rotations), orbits, chi, (2 - chi) // 2)


@dataclass(frozen=True)
class VanishingCycle:
    face: int
    # (arrow, "out" if the face is the arrow's source else "in"), in boundary order
    points: tuple[tuple[str, str], ...]

    @property
    def arrows(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.points)

    def self_intersections(self) -> list[str]:
        counts = Counter(self.arrows)
        return [a for a in dict.fromkeys(self.arrows) if counts[a] > 1]


def vanishing_cycles(model: DimerModel, quiver: Quiver | None = None) -> list[VanishingCycle]:
    faces = trace_faces(model)
    cycles = [
        VanishingCycle(f.id, tuple((d.edge, OUT if d.direction == WB else IN) for d in f.boundary))
        for f in faces
    ]
    if quiver is not None:
        for c in cycles:
            expected = Counter()
            for a, (s, t) in quiver.arrows.items():
                if s == c.face:
                    expected[(a, OUT)] += 1
                if t == c.face:
                    expected[(a, IN)] += 1
            if Counter(c.points) != expected:
                raise AssertionError(f"points on C_{c.face} do not match its arrows")
    return cycles


def intersection_number(cycles: Sequence[VanishingCycle], v: int, w: int) -> int:
    """Transverse intersection points of C_v and C_w (self-intersections if v == w)."""
    cv = next(c for c in cycles if c.face == v)
    if v == w:
        return len(cv.self_intersections())
    cw = next(c for c in cycles if c.face == w)
    return len(set(cv.arrows) & set(cw.arrows))


def arrow_endpoints(cycles: Iterable[VanishingCycle]) -> dict[str, tuple[int, int]]:
    src: dict[str, int] = {}
    tgt: dict[str, int] = {}
    for c in cycles:
        for a, role in c.points:
            (src if role == OUT else tgt)[a] = c.face
    return {a: (src[a], tgt[a]) for a in src}


@dataclass(frozen=True)
class GradedIntersection:
    arrow: str
    first: int  # the larger cycle in the order
    second: int
    maslov: int


def assign_maslov(
    cycles: Sequence[VanishingCycle], D: PerfectMatching, order: Sequence[int]
) -> list[GradedIntersection]:
    """Index 1 at intersection points off ``D`` and 2 on ``D``."""
    ends = arrow_endpoints(cycles)
    pos = {v: i for i, v in enumerate(order)}
    backwards = {a for a, (s, t) in ends.items() if pos[s] > pos[t]}
    loops = [a for a, (s, t) in ends.items() if s == t]
    if loops or backwards != set(D.edges):
        raise NotInternalError(f"matching {D.edges} is not internal for this order")
    out = []
    for a, (s, t) in ends.items():
        hi, lo = (s, t) if pos[s] > pos[t] else (t, s)
        out.append(GradedIntersection(a, hi, lo, 2 if a in D else 1))
    return out


def degree_equation_violations(model: DimerModel, D: PerfectMatching, maslov: dict[str, int]) -> list[dict]:
    """Nodes where ``mu(e_0) != sum mu(e_i) + 2 - k`` fails."""
    out = []
    for n in model.nodes:
        edges = model.rotations[n]
        matched = [e for e in edges if e in D]
        if len(matched) != 1:
            out.append({"node": n, "error": f"{len(matched)} matched edges"})
            continue
        k = len(edges) - 1
        rhs = sum(maslov[e] for e in edges if e not in D) + 2 - k
        if maslov[matched[0]] != rhs:
            out.append({"node": n, "matched": matched[0], "index": maslov[matched[0]], "expected": rhs})
    return out


def point_morphism(g: GradedIntersection) -> BasisMorphism:
    return BasisMorphism(ARROW if g.maslov == 1 else DUAL, g.arrow, g.maslov, g.first, g.second)


def build_directed_fukaya(
    model: DimerModel,
    quiver: Quiver,
    D: PerfectMatching,
    order: Sequence[int],
    *,
    flip_nodes: Iterable[str] = (),
) -> DirectedAInf:
    """Directed category of the vanishing cycles from the node-polygon rule.

    ``flip_nodes`` reverses the disk sign at the given nodes; it exists only
    to test that comparisons localize errors.
    """
    cycles = vanishing_cycles(model, quiver)
    gradings = assign_maslov(cycles, D, order)
    bad = degree_equation_violations(model, D, {g.arrow: g.maslov for g in gradings})
    if bad:
        raise AssertionError(f"degree equation fails: {bad}")
    point = {g.arrow: point_morphism(g) for g in gradings}
    seq = list(reversed(order))
    pos = {v: i for i, v in enumerate(seq)}
    basis = [identity(v) for v in seq] + sorted(
        point.values(), key=lambda b: (b.degree, model.edge_index()[b.carrier])
    )

    ops = dict(unit_entries(basis))
    provenance = dict.fromkeys(ops, "unit")
    flipped = set(flip_nodes)
    surface = build_surface(model)
    for n in model.nodes:
        rot = surface.rotations[n]
        i0 = next(i for i, e in enumerate(rot) if e in D)
        es = rot[i0:] + rot[:i0]
        inputs = tuple(point[e] for e in reversed(es[1:]))
        for x, y in zip(inputs[1:], inputs[:-1]):
            if x.target != y.source:
                raise AssertionError(f"node {n}: points do not compose")
        out = point[es[0]]
        if out.source != inputs[-1].source or out.target != inputs[0].target:
            raise AssertionError(f"node {n}: polygon output has wrong ends")
        sign = 1 if model.colors[n] == WHITE else -1
        if n in flipped:
            sign = -sign
        # nodes of a divalent pair share their single input
        vec = ops.setdefault(inputs, {})
        vec[out] = vec.get(out, 0) + sign
        tag_origin(provenance, inputs, n)
    for b in basis:
        if b.kind != "id" and pos[b.source] >= pos[b.target]:
            raise AssertionError(f"{b.label} is not directed")
    return DirectedAInf(seq, basis, ops, {}, provenance)


@dataclass
class ComparisonReport:
    objects: list[int]
    basis_mismatches: list[str] = field(default_factory=list)
    mismatches: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.basis_mismatches and not self.mismatches

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "objects": self.objects,
            "basis_mismatches": self.basis_mismatches,
            "mismatches": self.mismatches,
        }


def compare_categories(F: DirectedAInf, A: DirectedAInf) -> ComparisonReport:
    if set(F.objects) != set(A.objects):
        raise ValueError(f"object sets differ: {F.objects} vs {A.objects}")
    report = ComparisonReport(list(F.objects))
    if F.objects != A.objects:
        report.basis_mismatches.append(f"object order {F.objects} vs {A.objects}")
    fb, ab = set(F.basis), set(A.basis)
    report.basis_mismatches += sorted(b.label for b in fb ^ ab)
    fe = {(k, b): c for k, b, c in F.entries()}
    ae = {(k, b): c for k, b, c in A.entries()}
    keys = sorted(set(fe) | set(ae), key=lambda t: (len(t[0]), [x.label for x in t[0]], t[1].label))
    for key in keys:
        if fe.get(key, 0) != ae.get(key, 0):
            report.mismatches.append({
                "inputs": [x.label for x in key[0]],
                "output": key[1].label,
                "fukaya": fe.get(key, 0),
                "algebraic": ae.get(key, 0),
                "origin": F.provenance.get(key[0]) or A.provenance.get(key[0], ""),
            })
    return report
