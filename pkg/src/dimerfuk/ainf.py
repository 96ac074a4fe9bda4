"""The cyclic A-infinity category of a dimer model and its directed pieces.

Conventions, fixed for the whole package:

* ``m_k(x_k, ..., x_1)`` with ``x_i`` in ``hom(c_{i-1}, c_i)``; ``x_1`` is
  applied first.  Operation keys are input tuples in this written order.
* An arrow ``a: w -> v`` is a degree 1 morphism in ``hom(v, w)``; its dual
  is a degree 2 morphism in ``hom(w, v)``.
* A-infinity relations use the sign ``(-1)^(deg a_1 + ... + deg a_i - i)``
  on the term whose inner operation sits to the left of ``a_i, ..., a_1``.

With that sign rule the unit and the degree 3 products need signs::

    m_2(x, id) = x          m_2(id, x) = (-1)^deg(x) x
    m_2(a*, a) = id*        m_2(a, a*) = -id*

and the pairing (``<a*, a> = <id*, id> = 1``) is cyclic for the identity
``<m_n(x_n..x_1), x_0> = (-1)^((|x_0|-1)(sum_{i>=1} |x_i|-1)) <m_n(x_{n-1}..x_0), x_n>``.
These are the only choices that make all three structures agree.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import sympy

from .dimer import WHITE, DimerModel
from .quiver import Quiver

ID, ARROW, DUAL, DUALID = "id", "arrow", "dual", "dualid"
_KIND_RANK = {ID: 0, ARROW: 1, DUAL: 2, DUALID: 3}
_DEGREE = {ID: 0, ARROW: 1, DUAL: 2, DUALID: 3}


@dataclass(frozen=True)
class BasisMorphism:
    kind: str
    carrier: object  # face id for id/dualid, edge id for arrow/dual
    degree: int
    source: int
    target: int

    @property
    def label(self) -> str:
        if self.kind == ID:
            return f"id_{self.carrier}"
        if self.kind == DUALID:
            return f"id_{self.carrier}*"
        if self.kind == DUAL:
            return f"{self.carrier}*"
        return str(self.carrier)

    def __repr__(self) -> str:
        return self.label


Key = tuple[BasisMorphism, ...]
Vector = dict[BasisMorphism, int]


def identity(v: int) -> BasisMorphism:
    return BasisMorphism(ID, v, 0, v, v)


def dual_identity(v: int) -> BasisMorphism:
    return BasisMorphism(DUALID, v, 3, v, v)


def arrow_morphism(a: str, s: int, t: int) -> BasisMorphism:
    return BasisMorphism(ARROW, a, 1, t, s)


def dual_morphism(a: str, s: int, t: int) -> BasisMorphism:
    return BasisMorphism(DUAL, a, 2, s, t)


@dataclass
class AInfStructure:
    objects: list[int]
    basis: list[BasisMorphism]
    operations: dict[Key, Vector]
    pairing: dict[tuple[BasisMorphism, BasisMorphism], int] = field(default_factory=dict)
    # input key -> where the entry came from: "unit", "unit-dual" or
    # space-separated "node:<id>" tags
    provenance: dict[Key, str] = field(default_factory=dict)

    def __post_init__(self):
        self._index = {b: i for i, b in enumerate(self.basis)}

    def index(self, b: BasisMorphism) -> int:
        return self._index[b]

    def hom(self, source: int, target: int, degree: int | None = None) -> list[BasisMorphism]:
        return [
            b for b in self.basis
            if b.source == source and b.target == target and (degree is None or b.degree == degree)
        ]

    def m(self, inputs: Sequence[BasisMorphism]) -> Vector:
        return self.operations.get(tuple(inputs), {})

    def pair(self, x: BasisMorphism, y: BasisMorphism) -> int:
        return self.pairing.get((x, y), 0)

    def max_arity(self) -> int:
        return max((len(k) for k in self.operations), default=0)

    def sort_key(self, key: Key):
        return (len(key), [self._index[b] for b in key])

    def entries(self) -> list[tuple[Key, BasisMorphism, int]]:
        out = []
        for key in sorted(self.operations, key=self.sort_key):
            for b, c in sorted(self.operations[key].items(), key=lambda t: self._index[t[0]]):
                out.append((key, b, c))
        return out

    def node_entries(self, node: str) -> list[Key]:
        tag = f"node:{node}"
        return sorted((k for k, p in self.provenance.items() if tag in p.split()), key=self.sort_key)

    def operation_table(self) -> list[dict]:
        """Canonically sorted, JSON-ready dump of every nonzero entry."""
        return [
            {"arity": len(key), "inputs": [b.label for b in key], "output": b.label, "coefficient": c}
            for key, b, c in self.entries()
        ]

    def copy(self) -> "AInfStructure":
        return type(self)(
            list(self.objects),
            list(self.basis),
            {k: dict(v) for k, v in self.operations.items()},
            dict(self.pairing),
            dict(self.provenance),
        )


class DirectedAInf(AInfStructure):
    """An A-infinity category whose ``objects`` list is the exceptional sequence."""

    @property
    def sequence(self) -> list[int]:
        return self.objects


@dataclass
class VerificationReport:
    name: str
    passed: bool
    checked: int
    violations: list[dict]
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            **self.details,
        }


def tag_origin(provenance: dict, key: Key, node: str) -> None:
    tag = f"node:{node}"
    old = provenance.get(key)
    provenance[key] = f"{old} {tag}" if old and old.startswith("node:") else tag


def _add(vec: dict, b, c: int) -> None:
    v = vec.get(b, 0) + c
    if v:
        vec[b] = v
    else:
        vec.pop(b, None)


def unit_entries(basis: Iterable[BasisMorphism]) -> dict[Key, Vector]:
    ops: dict[Key, Vector] = {}
    for x in basis:
        ops[(x, identity(x.source))] = {x: 1}
        ops[(identity(x.target), x)] = {x: (-1) ** x.degree}
    return ops


def build_category(
    quiver: Quiver,
    model: DimerModel | None = None,
    *,
    white_sign: int = 1,
    black_sign: int = -1,
) -> AInfStructure:
    """Hom spaces, operations and pairing of the dimer's A-infinity category.

    Each node with arrow cycle ``b_0 -> b_1 -> ... -> b_k`` contributes, for
    every choice of output position ``j``, the entry
    ``m_k(b_{j+1}, ..., b_{j+k}) = eps * b_j*`` with ``eps`` the node colour
    sign.  A divalent node therefore gives differentials ``m_1``.
    """
    if model is not None:
        for n in model.nodes:
            if model.valence(n) < 2:
                raise ValueError(f"node {n} has valence {model.valence(n)} < 2")
    for n, cyc in quiver.node_cycles.items():
        if len(cyc) < 2:
            raise ValueError(f"node {n} has valence {len(cyc)} < 2")
    arrows = quiver.arrows
    basis = (
        [identity(v) for v in quiver.vertices]
        + [arrow_morphism(a, s, t) for a, (s, t) in arrows.items()]
        + [dual_morphism(a, s, t) for a, (s, t) in arrows.items()]
        + [dual_identity(v) for v in quiver.vertices]
    )
    fwd = {a: arrow_morphism(a, s, t) for a, (s, t) in arrows.items()}
    dual = {a: dual_morphism(a, s, t) for a, (s, t) in arrows.items()}

    ops: dict[Key, Vector] = {}
    provenance: dict[Key, str] = {}
    for key, val in unit_entries(basis).items():
        ops[key] = val
        provenance[key] = "unit"
    for a, (s, t) in arrows.items():
        key = (dual[a], fwd[a])
        ops[key] = {dual_identity(t): 1}
        provenance[key] = "unit-dual"
        key = (fwd[a], dual[a])
        ops[key] = {dual_identity(s): -1}
        provenance[key] = "unit-dual"
    for n, cyc in quiver.node_cycles.items():
        eps = white_sign if quiver.node_colors[n] == WHITE else black_sign
        k = len(cyc) - 1
        for j in range(k + 1):
            key = tuple(fwd[cyc[(j + i) % (k + 1)]] for i in range(1, k + 1))
            vec = ops.setdefault(key, {})
            _add(vec, dual[cyc[j]], eps)
            tag_origin(provenance, key, n)
            if not vec:
                del ops[key]

    pairing = {}
    for b in basis:
        if b.kind == DUAL:
            pairing[(b, fwd[b.carrier])] = 1
            pairing[(fwd[b.carrier], b)] = -1
        elif b.kind == DUALID:
            pairing[(b, identity(b.carrier))] = 1
            pairing[(identity(b.carrier), b)] = -1
    return AInfStructure(list(quiver.vertices), basis, ops, pairing, provenance)


def degree_violations(C: AInfStructure) -> list[dict]:
    out = []
    for key, b, c in C.entries():
        expected = sum(x.degree for x in key) + 2 - len(key)
        if b.degree != expected:
            out.append({"inputs": [x.label for x in key], "output": b.label, "degree": b.degree, "expected": expected})
        for x, y in zip(key[1:], key[:-1]):
            if x.target != y.source:
                out.append({"inputs": [z.label for z in key], "error": "inputs not composable"})
        if b.source != key[-1].source or b.target != key[0].target:
            out.append({"inputs": [z.label for z in key], "output": b.label, "error": "output hom mismatch"})
    return out


def relation_sign(right: Sequence[BasisMorphism]) -> int:
    """Sign for a term with ``right`` = ``(a_i, ..., a_1)`` to the right of the inner op."""
    return (-1) ** (sum(x.degree - 1 for x in right) % 2)


def relation_bound(C: AInfStructure) -> int:
    # every term composes two entries of arity <= maxval - 1, so a sequence
    # of length > 2 * maxval - 3 has only zero terms
    return 2 * (C.max_arity() + 1) - 1


def ainf_residuals(C: AInfStructure, bound: int | None = None) -> dict[Key, Vector]:
    """Left-hand sides of the A-infinity relations that are not zero.

    A term is nonzero only if both its inner and outer operations are table
    entries, so the residual of every composable sequence is collected by
    running over pairs (outer entry, slot, inner entry) instead of over all
    sequences.
    """
    if bound is None:
        bound = relation_bound(C)
    by_input: dict[BasisMorphism, list[tuple[Key, int]]] = defaultdict(list)
    for key in C.operations:
        for pos, x in enumerate(key):
            by_input[x].append((key, pos))
    acc: dict[Key, dict] = defaultdict(dict)
    for inner, inner_out in C.operations.items():
        for y, cy in inner_out.items():
            for outer, pos in by_input.get(y, ()):
                seq = outer[:pos] + inner + outer[pos + 1:]
                if len(seq) > bound:
                    continue
                sign = relation_sign(outer[pos + 1:])
                vec = acc[seq]
                for z, cz in C.operations[outer].items():
                    _add(vec, z, sign * cy * cz)
    return {k: v for k, v in acc.items() if v}


def verify_ainf_relations(C: AInfStructure, bound: int | None = None) -> VerificationReport:
    if bound is None:
        bound = relation_bound(C)
    residuals = ainf_residuals(C, bound)
    violations = [
        {"sequence": [x.label for x in k], "residual": {b.label: c for b, c in sorted(v.items(), key=lambda t: C.index(t[0]))}}
        for k, v in sorted(residuals.items(), key=lambda t: C.sort_key(t[0]))
    ]
    bad_degrees = degree_violations(C)
    return VerificationReport(
        "ainf-relations",
        not violations and not bad_degrees,
        len(C.operations),
        violations + bad_degrees,
        {"bound": bound},
    )


def verify_unitality(C: AInfStructure) -> VerificationReport:
    violations = []
    for x in C.basis:
        if C.m((x, identity(x.source))) != {x: 1}:
            violations.append({"entry": f"m2({x.label}, id)", "value": _labels(C.m((x, identity(x.source))))})
        if C.m((identity(x.target), x)) != {x: (-1) ** x.degree}:
            violations.append({"entry": f"m2(id, {x.label})", "value": _labels(C.m((identity(x.target), x)))})
    for key in C.operations:
        if len(key) != 2 and any(b.kind == ID for b in key):
            violations.append({"entry": [b.label for b in key], "error": "identity input in arity != 2"})
    return VerificationReport("unitality", not violations, len(C.basis), violations)


def _labels(vec: Mapping[BasisMorphism, int]) -> dict:
    return {b.label: c for b, c in vec.items()}


def _pair_vec(C: AInfStructure, vec: Mapping[BasisMorphism, int], y: BasisMorphism) -> int:
    return sum(c * C.pair(b, y) for b, c in vec.items())


def cyclic_sign(key: Key, x0: BasisMorphism) -> int:
    return (-1) ** (((x0.degree - 1) * sum(x.degree - 1 for x in key)) % 2)


def verify_cyclicity(C: AInfStructure) -> VerificationReport:
    """Nondegeneracy, graded symmetry and the cyclic identity, exactly."""
    violations: list[dict] = []
    checked = 0

    for c1, c2 in itertools.combinations_with_replacement(C.objects, 2):
        rows = C.hom(c2, c1)
        cols = C.hom(c1, c2)
        checked += 1
        if len(rows) != len(cols):
            violations.append({"check": "nondegenerate", "objects": [c1, c2], "shape": [len(rows), len(cols)]})
            continue
        if not rows:
            continue
        det = sympy.Matrix([[C.pair(x, y) for y in cols] for x in rows]).det()
        if det not in (1, -1):
            violations.append({"check": "nondegenerate", "objects": [c1, c2], "det": int(det)})

    for x in C.basis:
        for y in C.basis:
            if x.source != y.target or x.target != y.source:
                continue
            checked += 1
            s = (-1) ** (((x.degree - 1) * (y.degree - 1)) % 2)
            if C.pair(x, y) + s * C.pair(y, x) != 0:
                violations.append({"check": "symmetric", "pair": [x.label, y.label]})

    tuples = set()
    for key in C.operations:
        # key as the left side: x_0 runs over hom(c_n, c_0)
        for x0 in C.hom(key[0].target, key[-1].source):
            tuples.add(key + (x0,))
        # key as the right side (x_{n-1}, ..., x_0): x_n runs over hom(c_{n-1}, c_n)
        for xn in C.hom(key[-1].source, key[0].target):
            tuples.add((xn,) + key)
    for t in sorted(tuples, key=C.sort_key):
        checked += 1
        left_key, x0 = t[:-1], t[-1]
        xn, right_key = t[0], t[1:]
        lhs = _pair_vec(C, C.m(left_key), x0)
        rhs = cyclic_sign(left_key, x0) * _pair_vec(C, C.m(right_key), xn)
        if lhs != rhs:
            violations.append({"check": "cyclic", "tuple": [b.label for b in t], "lhs": lhs, "rhs": rhs})

    return VerificationReport("cyclicity", not violations, checked, violations)


def hom_dimension_violations(C: AInfStructure) -> list[dict]:
    out = []
    for v in C.objects:
        for w in C.objects:
            for i in range(4):
                if len(C.hom(v, w, i)) != len(C.hom(w, v, 3 - i)):
                    out.append({"objects": [v, w], "degree": i})
    return out


def directed_subcategory(C: AInfStructure, order: Sequence[int]) -> DirectedAInf:
    """Truncate to morphisms going forward in the reverse of ``order``.

    ``order`` lists objects from smallest to largest; the directed sequence
    starts with the largest.
    """
    if sorted(order) != sorted(C.objects):
        raise ValueError("order must be a total order on the objects")
    seq = list(reversed(order))
    pos = {v: i for i, v in enumerate(seq)}
    kept = [b for b in C.basis if b.kind == ID or pos[b.source] < pos[b.target]]
    keep = set(kept)
    ops = {}
    prov = {}
    for key, vec in C.operations.items():
        if all(x in keep for x in key):
            if not all(b in keep for b in vec):
                raise AssertionError(f"output of {key} leaves the directed subcategory")
            ops[key] = dict(vec)
            prov[key] = C.provenance.get(key, "")
    kept.sort(key=lambda b: (_KIND_RANK[b.kind], C.index(b)))
    return DirectedAInf(seq, kept, ops, {}, prov)


def _partners(C: AInfStructure):
    left: dict[BasisMorphism, tuple[BasisMorphism, int]] = {}
    right: dict[BasisMorphism, tuple[BasisMorphism, int]] = {}
    for (x, y), v in C.pairing.items():
        if v:
            right[x] = (y, v)  # <x, y> != 0
            left[y] = (x, v)
    return left, right


def cyclic_orbit(C: AInfStructure, key: Key, out: BasisMorphism, coef: int) -> dict[tuple[Key, BasisMorphism], int]:
    """All entries forced from one entry by repeated cyclic rotation."""
    left, right = _partners(C)
    orbit: dict[tuple[Key, BasisMorphism], int] = {}
    while (key, out) not in orbit:
        orbit[(key, out)] = coef
        x0, p0 = right[out]
        lhs = coef * p0
        new_key = key[1:] + (x0,)
        z, pz = left[key[0]]
        denom = cyclic_sign(key, x0) * pz
        key, out, coef = new_key, z, lhs * denom  # denom is +-1
    if orbit[(key, out)] != coef:
        raise ArithmeticError(f"cyclic orbit of {key} is not consistent")
    return orbit


def verify_trivial_extension(C: AInfStructure, Cdir: AInfStructure) -> VerificationReport:
    """Check that ``C`` is the degree 3 cyclic completion of ``Cdir``.

    (i) every basis element of ``C`` either lies in ``Cdir`` or pairs with
    one that does, never both, with complementary degrees; (ii) rotating the
    entries of ``Cdir`` through the pairing regenerates every entry of ``C``
    with its coefficient.
    """
    violations: list[dict] = []
    left, right = _partners(C)
    dir_basis = set(Cdir.basis)
    for b in C.basis:
        partner = right.get(b, left.get(b, (None, 0)))[0]
        if partner is None:
            violations.append({"check": "split", "basis": b.label, "error": "no pairing partner"})
            continue
        if (b in dir_basis) == (partner in dir_basis):
            violations.append({"check": "split", "basis": b.label, "partner": partner.label})
        if b.degree + partner.degree != 3:
            violations.append({"check": "split", "basis": b.label, "degrees": [b.degree, partner.degree]})

    predicted: dict[tuple[Key, BasisMorphism], int] = {}
    seeds = 0
    for key, out, coef in Cdir.entries():
        if (key, out) in predicted:
            continue
        seeds += 1
        try:
            predicted.update(cyclic_orbit(C, key, out, coef))
        except (KeyError, ArithmeticError) as exc:
            violations.append({"check": "orbit", "seed": [x.label for x in key], "error": str(exc)})
    actual = {(key, out): coef for key, out, coef in C.entries()}
    orphans = sorted((k for k in actual if k not in predicted), key=lambda t: C.sort_key(t[0]))
    for key, out in orphans:
        violations.append({"check": "orphan", "inputs": [x.label for x in key], "output": out.label})
    for k, coef in sorted(predicted.items(), key=lambda t: C.sort_key(t[0][0])):
        if actual.get(k) != coef:
            violations.append({
                "check": "coefficient", "inputs": [x.label for x in k[0]], "output": k[1].label,
                "predicted": coef, "actual": actual.get(k, 0),
            })
    return VerificationReport(
        "trivial-extension",
        not violations,
        len(actual),
        violations,
        {"orbits": seeds, "orphans": len(orphans)},
    )


def orphan_entries(report: VerificationReport) -> set[tuple[tuple[str, ...], str]]:
    return {(tuple(v["inputs"]), v["output"]) for v in report.violations if v["check"] == "orphan"}
