"""Exact classification of singular points on tropical surfaces in R^3."""

from __future__ import annotations

from .catalogs import Catalog, NoMatch, NormalizedForm, catalogs, normalize
from .engine import (
    Candidate,
    Certificate,
    FamilyPiece,
    LiftReject,
    Refusal,
    SingularPoint,
    SingularityReport,
    candidate_points,
    classify,
    eq_b114_distance,
    is_generic,
    lift_check,
    lineality_vector,
    oracle_singular_points,
    shifted_heights,
    singular_family,
)
from .lattice import (
    CircuitType,
    NotACircuit,
    RadonPartition,
    UnimodularMap,
    classify_circuit,
    convex_hull,
    lattice_points,
    lattice_volume,
    radon_partition,
)
from .matroid import (
    ChainsCase,
    ChainsReject,
    chains_case,
    enumerate_flags_of_flats,
    flag_of_subsets,
    gale_dual,
    is_defective,
    is_flat,
)
from .subdivision import (
    Circuit,
    InvalidConfig,
    MarkedCell,
    MarkedSubdivision,
    NotCodimOne,
    PointConfig,
    extract_circuit,
    is_maximal_dimensional_type,
    regular_subdivision,
    secondary_codim,
)
from .surface import (
    SurfaceEdge,
    SurfaceFace,
    SurfaceVertex,
    TropicalComplex,
    build_complex,
    render_off,
    tropical_eval,
    vertex_multiplicity,
)

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "Catalog",
    "Certificate",
    "ChainsCase",
    "ChainsReject",
    "Circuit",
    "CircuitType",
    "FamilyPiece",
    "InvalidConfig",
    "LiftReject",
    "MarkedCell",
    "MarkedSubdivision",
    "NoMatch",
    "NormalizedForm",
    "NotACircuit",
    "NotCodimOne",
    "PointConfig",
    "RadonPartition",
    "Refusal",
    "SingularPoint",
    "SingularityReport",
    "SurfaceEdge",
    "SurfaceFace",
    "SurfaceVertex",
    "TropicalComplex",
    "UnimodularMap",
    "build_complex",
    "candidate_points",
    "catalogs",
    "chains_case",
    "classify",
    "classify_circuit",
    "convex_hull",
    "enumerate_flags_of_flats",
    "eq_b114_distance",
    "extract_circuit",
    "flag_of_subsets",
    "gale_dual",
    "is_defective",
    "is_flat",
    "is_generic",
    "is_maximal_dimensional_type",
    "lattice_points",
    "lattice_volume",
    "lift_check",
    "lineality_vector",
    "normalize",
    "oracle_singular_points",
    "radon_partition",
    "regular_subdivision",
    "render_off",
    "secondary_codim",
    "shifted_heights",
    "singular_family",
    "tropical_eval",
    "vertex_multiplicity",
    "__version__",
]
