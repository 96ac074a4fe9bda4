"""Dimer models on the torus, their quivers with potential, the cyclic
A-infinity category they define and the matching Fukaya-side construction."""

from .ainf import (
    AInfStructure,
    BasisMorphism,
    DirectedAInf,
    build_category,
    directed_subcategory,
    verify_ainf_relations,
    verify_cyclicity,
    verify_trivial_extension,
    verify_unitality,
)
from .dimer import (
    DimerFormatError,
    DimerModel,
    check_consistency,
    homology_class,
    load_dimer,
    parse_dimer,
    serialize,
    trace_faces,
    validate,
    zigzag_paths,
)
from .fukaya import (
    assign_maslov,
    build_directed_fukaya,
    build_surface,
    compare_categories,
    vanishing_cycles,
)
from .matchings import (
    characteristic_polygon,
    directed_quiver,
    enumerate_matchings,
    is_internal,
    order_from_matching,
)
from .quiver import dual_quiver, paths_equivalent, potential, relations

__version__ = "0.1.0"
