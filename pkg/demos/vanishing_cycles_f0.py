"""
Vanishing cycles on the twisted surface
=======================================

Reversing the cyclic order at black nodes turns the torus of the F0 model
into another closed surface.  Each face becomes a circle on it, and the
node disks become the polygons of a directed Fukaya category which agrees
with the algebraic one entry by entry.
"""

import itertools

from dimerfuk import ainf, catalog
from dimerfuk.fukaya import (
    assign_maslov,
    build_directed_fukaya,
    build_surface,
    compare_categories,
    intersection_number,
    vanishing_cycles,
)
from dimerfuk.matchings import enumerate_matchings, is_internal, order_from_matching
from dimerfuk.quiver import dual_quiver

model = catalog.get("f0").model()
q = dual_quiver(model)

surface = build_surface(model)
print("genus", surface.genus, "with", len(surface.boundary_orbits), "boundary circles before capping")

cycles = vanishing_cycles(model, q)
for v, w in itertools.combinations(q.vertices, 2):
    print(f"|C_{v} & C_{w}| = {intersection_number(cycles, v, w)}")

D = next(m for m in enumerate_matchings(model) if is_internal(q, m))
order = order_from_matching(q, D)
for g in assign_maslov(cycles, D, order):
    print(f"  {g.arrow}: C_{g.first} -> C_{g.second}, index {g.maslov}")

F = build_directed_fukaya(model, q, D, order)
A = ainf.directed_subcategory(ainf.build_category(q, model), order)
print("mismatches:", compare_categories(F, A).mismatches)

# a wrong sign on one disk shows up exactly at that disk
flipped = build_directed_fukaya(model, q, D, order, flip_nodes=["b1"])
for row in compare_categories(flipped, A).mismatches:
    print("  ", row)
