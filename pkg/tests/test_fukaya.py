import itertools

import pytest
from hypothesis import given, settings

from dimerfuk import catalog
from dimerfuk.ainf import (
    build_category,
    degree_violations,
    directed_subcategory,
    verify_ainf_relations,
    verify_unitality,
)
from dimerfuk.dimer import parse_dimer, trace_faces
from dimerfuk.fukaya import (
    assign_maslov,
    build_directed_fukaya,
    build_surface,
    compare_categories,
    degree_equation_violations,
    intersection_number,
    vanishing_cycles,
)
from dimerfuk.matchings import NotInternalError, enumerate_matchings, is_internal, order_from_matching
from dimerfuk.quiver import dual_quiver

from strategies import dimer_models, honeycomb_quotient


def setup(name):
    m = catalog.get(name).model()
    q = dual_quiver(m)
    ms = enumerate_matchings(m)
    internal = [(D, order_from_matching(q, D)) for D in ms if is_internal(q, D)]
    return m, q, ms, internal


def test_surface_genus():
    g0 = build_surface(catalog.get("g0").model())
    assert (g0.euler_characteristic, g0.genus, len(g0.boundary_orbits)) == (2, 0, 3)
    p2 = build_surface(catalog.get("p2").model())
    assert (p2.euler_characteristic, p2.genus) == (0, 1)
    f0 = build_surface(catalog.get("f0").model())
    assert (f0.euler_characteristic, f0.genus) == (0, 1)


def test_untwisted_tracing_is_the_torus():
    m = catalog.get("g0").model()
    assert len(m.nodes) - len(m.edges) + len(trace_faces(m)) == 0
    assert len(trace_faces(m.twisted())) != len(trace_faces(m))


def test_g0_self_intersections():
    m, q, _, _ = setup("g0")
    (c,) = vanishing_cycles(m, q)
    assert c.self_intersections() == ["e1", "e3", "e2"]
    assert intersection_number([c], 0, 0) == 3


def test_p2_cycles_meet_in_three_points():
    m, q, _, _ = setup("p2")
    cycles = vanishing_cycles(m, q)
    for v, w in itertools.combinations(q.vertices, 2):
        assert intersection_number(cycles, v, w) == 3
    assert all(not c.self_intersections() for c in cycles)


def test_p2_maslov_counts_and_mutation():
    m, q, _, internal = setup("p2")
    cycles = vanishing_cycles(m, q)
    for D, order in internal:
        gr = assign_maslov(cycles, D, order)
        assert sorted(g.maslov for g in gr) == [1] * 6 + [2] * 3
        pos = {v: i for i, v in enumerate(order)}
        assert all(pos[g.first] > pos[g.second] for g in gr)
        mu = {g.arrow: g.maslov for g in gr}
        assert degree_equation_violations(m, D, mu) == []
        mutated = {a: (1 if a in D else v) for a, v in mu.items()}
        bad = degree_equation_violations(m, D, mutated)
        assert sorted(b["node"] for b in bad) == sorted(m.nodes)


def test_maslov_rejects_non_internal():
    m, q, ms, internal = setup("p2")
    cycles = vanishing_cycles(m, q)
    D = next(D for D in ms if not is_internal(q, D))
    with pytest.raises(NotInternalError):
        assign_maslov(cycles, D, internal[0][1])
    with pytest.raises(NotInternalError):
        build_directed_fukaya(m, q, D, internal[0][1])


def test_p2_fukaya_operations():
    m, q, _, internal = setup("p2")
    for D, order in internal:
        F = build_directed_fukaya(m, q, D, order)
        node = {k: F.m(k) for k, p in F.provenance.items() if p.startswith("node:")}
        assert len(node) == 6 and all(len(k) == 2 for k in node)
        signs = sorted(c for out in node.values() for c in out.values())
        assert signs == [-1, -1, -1, 1, 1, 1]
        assert degree_violations(F) == []
        assert verify_ainf_relations(F).passed and verify_unitality(F).passed


def test_divalent_node_gives_differential():
    m, q, _, internal = setup("p2d")
    for D, order in internal:
        F = build_directed_fukaya(m, q, D, order)
        assert any(len(k) == 1 for k in F.operations)


@pytest.mark.parametrize("name", ["p2", "f0", "p2d"])
def test_comparison(name):
    m, q, _, internal = setup(name)
    C = build_category(q, m)
    for D, order in internal:
        A = directed_subcategory(C, order)
        assert compare_categories(build_directed_fukaya(m, q, D, order), A).passed
        for n in m.black_nodes:
            F = build_directed_fukaya(m, q, D, order, flip_nodes=[n])
            rep = compare_categories(F, A)
            assert {tuple(x["inputs"]) for x in rep.mismatches} == {
                tuple(b.label for b in k) for k in F.node_entries(n)
            }


def test_object_mismatch_raises():
    m, q, _, internal = setup("p2")
    D, order = internal[0]
    F = build_directed_fukaya(m, q, D, order)
    f0 = catalog.get("f0").model()
    other = directed_subcategory(build_category(dual_quiver(f0), f0), [0, 1, 2, 3])
    with pytest.raises(ValueError):
        compare_categories(F, other)


@settings(max_examples=25, deadline=None)
@given(dimer_models(max_det=6))
def test_surface_invariants(model):
    q = dual_quiver(model)
    cycles = vanishing_cycles(model, q)
    total = 0
    for v, w in itertools.combinations_with_replacement(q.vertices, 2):
        n = intersection_number(cycles, v, w)
        total += n
        expected = len(q.arrows_between(v, w)) + (len(q.arrows_between(w, v)) if v != w else 0)
        assert n == expected
    assert total == len(model.edges)
    surface = build_surface(model)
    assert surface.euler_characteristic % 2 == 0
    has_self = any(c.self_intersections() for c in cycles)
    has_loop = bool(q.loops())
    no_internal = not any(is_internal(q, D) for D in enumerate_matchings(model))
    assert has_self == has_loop
    # a loop rules out internal matchings; the converse needs an interior point
    assert not has_loop or no_internal


def test_loop_free_without_internal_matching():
    # C^3 / (Z/2 x Z/2): triangle without interior points, yet no loops
    m = parse_dimer(honeycomb_quotient(2, 0, 2))
    q = dual_quiver(m)
    assert not q.loops()
    assert not any(c.self_intersections() for c in vanishing_cycles(m, q))
    assert not any(is_internal(q, D) for D in enumerate_matchings(m))


@settings(max_examples=20, deadline=None)
@given(dimer_models(max_det=6))
def test_random_comparisons(model):
    q = dual_quiver(model)
    C = build_category(q, model)
    for D in enumerate_matchings(model):
        if is_internal(q, D):
            order = order_from_matching(q, D)
            rep = compare_categories(build_directed_fukaya(model, q, D, order), directed_subcategory(C, order))
            assert rep.passed, rep.mismatches[:3]
