"""
What the node signs do and do not change
========================================

White node disks count +1 and black ones -1.  The A-infinity relations and
the cyclic pairing cannot see this choice: every term of a relation uses at
most one node operation, and the terms that cancel come from the same node.
Any rescaling of a node's operations therefore gives another valid cyclic
structure.  The signs matter for which category you get, which is what the
comparison with the vanishing cycles tests.
"""

from dimerfuk import ainf, catalog
from dimerfuk.fukaya import build_directed_fukaya, compare_categories
from dimerfuk.matchings import enumerate_matchings, is_internal, order_from_matching
from dimerfuk.quiver import dual_quiver

model = catalog.get("p2").model()
q = dual_quiver(model)

for white, black in [(1, -1), (1, 1), (-1, -1), (2, -5)]:
    C = ainf.build_category(q, model, white_sign=white, black_sign=black)
    rel = ainf.verify_ainf_relations(C)
    cyc = ainf.verify_cyclicity(C)
    print(f"white {white:+d} black {black:+d}: relations {rel.passed}, cyclic {cyc.passed}")

# a single entry with the wrong sign is caught
C = ainf.build_category(q, model)
key = C.node_entries("b1")[0]
C.operations[key] = {b: -c for b, c in C.operations[key].items()}
print("one entry flipped:", len(ainf.verify_ainf_relations(C).violations), "residuals")

# the geometric side fixes the signs
D = next(m for m in enumerate_matchings(model) if is_internal(q, m))
order = order_from_matching(q, D)
F = build_directed_fukaya(model, q, D, order)
same = ainf.build_category(q, model, black_sign=1)
print("mismatches against the +1/+1 choice:",
      len(compare_categories(F, ainf.directed_subcategory(same, order)).mismatches))
