import json

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dimerfuk import ainf, catalog
from dimerfuk.ainf import (
    DUAL,
    DUALID,
    ID,
    build_category,
    directed_subcategory,
    identity,
    verify_ainf_relations,
    verify_cyclicity,
    verify_trivial_extension,
    verify_unitality,
)
from dimerfuk.dimer import parse_dimer
from dimerfuk.matchings import enumerate_matchings, is_internal, order_from_matching
from dimerfuk.quiver import dual_quiver

from oracles import brute_force_residuals
from strategies import dimer_texts


def category(name, **kw):
    m = catalog.get(name).model()
    q = dual_quiver(m)
    return m, q, build_category(q, m, **kw)


def internal_orders(m, q):
    return [(D, order_from_matching(q, D)) for D in enumerate_matchings(m) if is_internal(q, D)]


def test_g0_hom_spaces_and_units():
    _, _, C = category("g0")
    assert [len(C.hom(0, 0, i)) for i in range(4)] == [1, 3, 3, 1]
    for x in C.basis:
        assert C.m((x, identity(x.source))) == {x: 1}
        assert C.m((identity(x.target), x)) == {x: (-1) ** x.degree}
    assert verify_unitality(C).passed


def test_g0_node_entries_are_separate_per_node():
    _, q, C = category("g0")
    white = C.node_entries("w1")
    black = C.node_entries("b1")
    assert len(white) == len(black) == 3
    assert not set(white) & set(black)
    for k in white:
        assert list(C.m(k).values()) == [1]
    for k in black:
        assert list(C.m(k).values()) == [-1]


def test_g0_pairing_matrix_is_signed_permutation():
    _, _, C = category("g0")
    rows, cols = C.hom(0, 0), C.hom(0, 0)
    M = sympy.Matrix([[C.pair(x, y) for y in cols] for x in rows])
    assert M.shape == (8, 8)
    assert all(sum(abs(v) for v in M.row(i)) == 1 for i in range(8))
    assert abs(M.det()) == 1
    a = C.basis[1]
    a_dual = next(b for b in C.basis if b.kind == DUAL and b.carrier == a.carrier)
    assert C.pair(a_dual, a) == 1 and C.pair(a, a_dual) == -1


def test_p2_entry_counts():
    m, _, C = category("p2")
    node = [k for k, p in C.provenance.items() if p.startswith("node:")]
    assert len(node) == 2 * len(m.edges) == 18
    assert all(len(k) == 2 for k in node)


@pytest.mark.parametrize("name", catalog.names())
def test_relations_and_cyclicity(name):
    _, _, C = category(name)
    assert verify_ainf_relations(C).passed
    assert verify_cyclicity(C).passed
    assert ainf.degree_violations(C) == []
    assert ainf.hom_dimension_violations(C) == []
    m = catalog.get(name).model()
    for i in (1, 2):
        assert sum(len(C.hom(v, w, i)) for v in C.objects for w in C.objects) == len(m.edges)


@pytest.mark.parametrize("name, length", [("g0", 5), ("p2", 4), ("f0", 4), ("p2d", 3)])
def test_pair_enumeration_matches_brute_force(name, length):
    _, _, C = category(name)
    assert brute_force_residuals(C, length) == {}
    broken = C.copy()
    key = broken.node_entries("b1")[0]
    broken.operations[key] = {b: -c for b, c in broken.operations[key].items()}
    expected = ainf.ainf_residuals(broken, length)
    assert expected
    assert brute_force_residuals(broken, length) == expected


def test_literal_unit_rule_breaks_relations():
    _, _, C = category("g0")
    for x in C.basis:
        C.operations[(identity(x.target), x)] = {x: 1}
    assert not verify_ainf_relations(C).passed


def test_divalent_differentials_square_to_zero():
    _, _, C = category("p2d")
    m1 = {k: v for k, v in C.operations.items() if len(k) == 1}
    assert m1
    for (x,), out in m1.items():
        twice = {}
        for y, c in out.items():
            for z, d in C.m((y,)).items():
                twice[z] = twice.get(z, 0) + c * d
        assert not any(twice.values())
    assert verify_ainf_relations(C).passed


def test_directed_subcategory_p2():
    m, q, C = category("p2")
    for D, order in internal_orders(m, q):
        Cd = directed_subcategory(C, order)
        assert Cd.sequence == list(reversed(order))
        deg1 = {b.carrier for b in Cd.basis if b.degree == 1}
        deg2 = {b.carrier for b in Cd.basis if b.degree == 2}
        assert deg1 == set(q.arrows) - set(D.edges)
        assert deg2 == set(D.edges)
        assert {b.kind for b in Cd.basis if b.degree == 0} == {ID}
        assert not any(b.kind == DUALID for b in Cd.basis)
        node = [k for k, p in Cd.provenance.items() if p.startswith("node:")]
        assert len(node) == len(m.nodes)
        for k in node:
            (out,) = Cd.m(k)
            assert out.carrier in D
        assert verify_ainf_relations(Cd).passed and verify_unitality(Cd).passed


def test_single_object_directed_is_identity_only():
    m, q, C = category("g0")
    Cd = directed_subcategory(C, [0])
    assert Cd.basis == [identity(0)]


@pytest.mark.parametrize("name", ["p2", "f0", "p2d"])
def test_trivial_extension(name):
    m, q, C = category(name)
    for D, order in internal_orders(m, q):
        Cd = directed_subcategory(C, order)
        rep = verify_trivial_extension(C, Cd)
        assert rep.passed, rep.violations[:3]


def test_deleting_directed_entry_orphans_its_orbit():
    m, q, C = category("p2")
    D, order = internal_orders(m, q)[0]
    Cd = directed_subcategory(C, order)
    for key in Cd.node_entries("w1") + Cd.node_entries("b2"):
        (out, coef), = Cd.m(key).items()
        orbit = ainf.cyclic_orbit(C, key, out, coef)
        broken = Cd.copy()
        del broken.operations[key]
        rep = verify_trivial_extension(C, broken)
        got = ainf.orphan_entries(rep)
        assert got == {(tuple(x.label for x in k), b.label) for k, b in orbit}
        assert len(got) == len(key) + 1


def test_operation_table_is_canonical_json():
    _, _, C = category("p2")
    table = C.operation_table()
    again = build_category(dual_quiver(catalog.get("p2").model())).operation_table()
    assert json.dumps(table) == json.dumps(again)
    assert [r["arity"] for r in table] == sorted(r["arity"] for r in table)


def test_rejects_low_valence():
    text = "dimer v1\nnode b1 black\nnode w1 white\nedge e1 b1 w1 0 0\nrot b1 e1\nrot w1 e1\n"
    m = parse_dimer(text)
    with pytest.raises(ValueError):
        build_category(dual_quiver(m), m)


@settings(max_examples=25, deadline=None)
@given(dimer_texts(max_det=4), st.integers(0, 10_000))
def test_random_models(text, pick):
    m = parse_dimer(text)
    q = dual_quiver(m)
    C = build_category(q, m)
    assert verify_ainf_relations(C).passed
    assert verify_cyclicity(C).passed
    assert sum(len(C.hom(v, w, 2)) for v in C.objects for w in C.objects) == len(m.edges)
    # flipping the sign of a single entry must be detected
    keys = sorted((k for k, p in C.provenance.items() if p.startswith("node:") and len(p.split()) == 1), key=C.sort_key)
    key = keys[pick % len(keys)]
    C.operations[key] = {b: -c for b, c in C.operations[key].items()}
    assert not verify_ainf_relations(C).passed
    assert not verify_cyclicity(C).passed
