"""
Directed quivers of the local projective plane
==============================================

Removing an internal perfect matching from the P^2 quiver leaves the
Beilinson quiver: three vertices, three arrows between consecutive ones and
three commutativity relations.
"""

from dimerfuk import ainf, catalog
from dimerfuk.matchings import (
    characteristic_polygon,
    directed_quiver,
    enumerate_matchings,
    is_internal,
)
from dimerfuk.quiver import dual_quiver, potential, relations

model = catalog.get("p2").model()
q = dual_quiver(model)
rel = relations(q, potential(q))

ms = enumerate_matchings(model)
poly = characteristic_polygon(ms)
print("polygon vertices", poly.vertices, "interior", poly.interior_points())

internal = [m for m in ms if is_internal(q, m)]
for m in internal:
    print(m.edges, "class", m.homology)

D = internal[0]
dq = directed_quiver(q, rel, D)
print("order (smallest first):", dq.order)
print("arrows left:", dq.arrows)
for a, (pw, pb) in dq.relations.items():
    print(f"  {pw} = {pb}")

# the same truncation on the A-infinity side
C = ainf.build_category(q, model)
Cdir = ainf.directed_subcategory(C, dq.order)
print("exceptional sequence:", Cdir.sequence)
for row in Cdir.operation_table():
    if row["arity"] == 2 and not any(x.startswith("id") for x in row["inputs"]):
        print(f"  m2{tuple(row['inputs'])} = {row['coefficient']:+d} {row['output']}")

# every entry of the full category is a rotation of a directed one
print(ainf.verify_trivial_extension(C, Cdir).details)
