"""Full pipeline from a dimer model to one JSON-ready report."""

from __future__ import annotations

import itertools
import json
import time
from contextlib import contextmanager

from . import ainf, fukaya
from .dimer import DimerModel, dart_labels, check_consistency, trace_faces, validate, zigzag_paths
from .matchings import (
    characteristic_polygon,
    directed_quiver,
    enumerate_matchings,
    is_internal,
)
from .quiver import Equivalence, dual_quiver, paths_equivalent, potential, relations

SCHEMA = 1


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.times: dict[str, float] = {}

    @contextmanager
    def __call__(self, name: str):
        t = time.perf_counter()
        yield
        if self.enabled:
            self.times[name] = round(time.perf_counter() - t, 6)


def central_cycle_check(quiver, rel, max_steps: int) -> dict:
    """All node cycles based at the same vertex should be equal in the Jacobian algebra."""
    based: dict[int, list] = {v: [] for v in quiver.vertices}
    for n in quiver.node_cycles:
        p = quiver.node_path(n)
        for i in range(len(p)):
            r = p[i:] + p[:i]
            based[quiver.source(r[-1])].append(r)
    out = {}
    for v, cycles in based.items():
        cycles = list(dict.fromkeys(cycles))
        verdicts = [paths_equivalent(rel, cycles[0], c, max_steps).value for c in cycles[1:]]
        out[str(v)] = {
            "cycles": len(cycles),
            "verdict": "equivalent" if all(x == Equivalence.EQUIVALENT.value for x in verdicts)
            else ("inequivalent-within-bound" if Equivalence.INEQUIVALENT.value in verdicts else "unknown"),
        }
    return out


def build_report(
    model: DimerModel,
    name: str = "",
    *,
    max_rewrite_steps: int = 10_000,
    relation_bound: int | None = None,
    matching: int | None = None,
    timings: bool = False,
) -> dict:
    clock = _Clock(timings)
    failures: list[str] = []
    rep: dict = {"schema": SCHEMA, "input": name}

    with clock("validate"):
        violations = validate(model)
    rep["model"] = {
        "black": len(model.black_nodes),
        "white": len(model.white_nodes),
        "edges": len(model.edges),
    }
    rep["validation"] = {
        "passed": not violations,
        "violations": [{"code": v.code, "message": v.message} for v in violations],
    }
    if violations:
        failures.append("validation")
        return _finish(rep, failures, clock)
    faces = trace_faces(model)
    rep["model"]["faces"] = len(faces)

    with clock("quiver"):
        q = dual_quiver(model, faces)
        phi = potential(q)
        rel = relations(q, phi)
        central = central_cycle_check(q, rel, max_rewrite_steps)
    rep["quiver"] = {
        "vertices": q.vertices,
        "arrows": {a: list(st) for a, st in q.arrows.items()},
        "loops": q.loops(),
        "potential": [{"path": list(p), "coefficient": c} for p, c in phi.items()],
        "relations": {a: [list(pw), list(pb)] for a, (pw, pb) in rel.pairs.items()},
        "node_cycles_central": central,
    }
    if any(c["verdict"] == "inequivalent-within-bound" for c in central.values()):
        failures.append("node-cycles")

    with clock("matchings"):
        ms = enumerate_matchings(model)
        internal = [i for i, m in enumerate(ms) if is_internal(q, m)]
    rep["matchings"] = {
        "count": len(ms),
        "list": [m.to_dict() for m in ms],
        "internal": internal,
    }
    if ms:
        poly = characteristic_polygon(ms)
        rep["matchings"]["polygon"] = poly.to_dict()
        # informational only: interior class does not imply internal
        rep["matchings"]["interior_not_internal"] = [
            i for i, m in enumerate(ms)
            if i not in internal
            and poly.contains_strictly((m.homology[0] + poly.shift[0], m.homology[1] + poly.shift[1]))
        ]

    with clock("consistency"):
        cons = check_consistency(model, ms)
    rep["consistency"] = cons.to_dict()
    rep["zigzags"] = [
        {"darts": dart_labels(z.darts), "class": list(z.homology)} for z in zigzag_paths(model)
    ]
    if not cons.consistent:
        failures.append("consistency")

    with clock("ainf"):
        C = ainf.build_category(q, model)
        checks = [
            ainf.verify_ainf_relations(C, relation_bound),
            ainf.verify_unitality(C),
            ainf.verify_cyclicity(C),
        ]
        sym = ainf.hom_dimension_violations(C)
    rep["ainf"] = {
        "basis": len(C.basis),
        "entries": len(C.entries()),
        "checks": [c.to_dict() for c in checks],
        "hom_dimension_symmetry": {"passed": not sym, "violations": sym},
    }
    failures += [c.name for c in checks if not c.passed]
    if sym:
        failures.append("hom-dimension-symmetry")

    with clock("surface"):
        surface = fukaya.build_surface(model)
        cycles = fukaya.vanishing_cycles(model, q)
    pairs = itertools.combinations_with_replacement([c.face for c in cycles], 2)
    rep["surface"] = {
        **surface.to_dict(),
        "intersections": [[v, w, fukaya.intersection_number(cycles, v, w)] for v, w in pairs],
        "self_intersections": {str(c.face): c.self_intersections() for c in cycles},
    }

    selected = internal
    if matching is not None:
        if matching not in internal:
            raise ValueError(f"matching {matching} is not an internal matching (internal: {internal})")
        selected = [matching]
    directed = []
    with clock("directed"):
        for i in selected:
            directed.append(_directed_section(model, q, rel, C, ms[i], i, relation_bound, failures))
    rep["directed"] = directed
    if not internal:
        rep["fukaya_note"] = "no internal matchings; Fukaya comparison skipped"
    return _finish(rep, failures, clock)


def _directed_section(model, q, rel, C, D, index, relation_bound, failures) -> dict:
    dq = directed_quiver(q, rel, D)
    Cdir = ainf.directed_subcategory(C, dq.order)
    te = ainf.verify_trivial_extension(C, Cdir)
    rel_check = ainf.verify_ainf_relations(Cdir, relation_bound)
    cycles = fukaya.vanishing_cycles(model, q)
    gradings = fukaya.assign_maslov(cycles, D, dq.order)
    deg = fukaya.degree_equation_violations(model, D, {g.arrow: g.maslov for g in gradings})
    F = fukaya.build_directed_fukaya(model, q, D, dq.order)
    f_rel = ainf.verify_ainf_relations(F, relation_bound)
    f_unit = ainf.verify_unitality(F)
    cmp = fukaya.compare_categories(F, Cdir)
    tag = f"matching-{index}"
    for name, ok in (
        ("directed-relations", rel_check.passed),
        ("trivial-extension", te.passed),
        ("degree-equation", not deg),
        ("fukaya-relations", f_rel.passed),
        ("fukaya-unitality", f_unit.passed),
        ("fukaya-comparison", cmp.passed),
    ):
        if not ok:
            failures.append(f"{tag}:{name}")
    return {
        "matching": index,
        "edges": list(D.edges),
        "directed_quiver": dq.to_dict(),
        "sequence": Cdir.sequence,
        "directed_operations": Cdir.operation_table(),
        "relations": rel_check.to_dict(),
        "trivial_extension": te.to_dict(),
        "maslov": {g.arrow: g.maslov for g in gradings},
        "degree_equation": {"passed": not deg, "violations": deg},
        "fukaya": {
            "relations": f_rel.to_dict(),
            "unitality": f_unit.to_dict(),
            "comparison": cmp.to_dict(),
        },
    }


def _finish(rep: dict, failures: list[str], clock: _Clock) -> dict:
    rep["verdict"] = "pass" if not failures else "fail"
    rep["failures"] = failures
    if clock.enabled:
        rep["timings"] = clock.times
    return rep


def dumps(rep: dict) -> str:
    return json.dumps(rep, indent=2, ensure_ascii=False) + "\n"
