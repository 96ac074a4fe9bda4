"""
The smallest dimer model
========================

One black node, one white node and three edges on the torus.  This walks
through everything the library computes for it.
"""

from dimerfuk import catalog
from dimerfuk.dimer import trace_faces, validate, zigzag_paths, dart_labels
from dimerfuk.matchings import characteristic_polygon, enumerate_matchings, is_internal
from dimerfuk.quiver import dual_quiver, potential, relations

model = catalog.get("g0").model()
print("violations:", validate(model))

# a single hexagonal face: every edge is walked once in each direction
(face,) = trace_faces(model)
print("face boundary:", dart_labels(face.boundary))

# one face means one quiver vertex, and every arrow is a loop
q = dual_quiver(model)
print("arrows:", q.arrows)

# white node cycle minus black node cycle
phi = potential(q)
for path, coef in phi.items():
    print(f"{coef:+d} * {path}")

# the derivatives are the commutators of affine 3-space
for a, (pw, pb) in relations(q, phi).pairs.items():
    print(f"d/d{a}:  {pw} - {pb}")

for z in zigzag_paths(model):
    print("zigzag", dart_labels(z.darts), "class", z.homology)

ms = enumerate_matchings(model)
print("matchings:", [m.edges for m in ms])
print("polygon:", characteristic_polygon(ms).vertices)

# each matching leaves two loops behind, so none is internal
print("internal:", [is_internal(q, m) for m in ms])
