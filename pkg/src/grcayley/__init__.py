"""Cayley graphs on Galois ring additive groups, exact spectra, and claim checks."""

from .errors import (
    ContextMismatchError,
    GrCayleyError,
    IntegrityError,
    ModulusError,
    ParameterError,
    RangeError,
    SizeError,
)
from .ring import (
    ModulusPoly,
    PAdicCoords,
    RingContext,
    RingElement,
    RingParams,
    find_basic_irreducible,
    frobenius,
    is_unit,
    make_ring,
    padic_coords,
    project_residue,
    trace,
)
from .cayley import (
    GraphSpec,
    bfs_distances,
    build_graph,
    export_edges,
    family_params,
    neighbors,
    spectral_interval_bound,
)
from .spectrum import (
    GaussianInt,
    Spectrum,
    TraceCounts,
    eigenvalue_exact_char4,
    eigenvalue_numeric,
    full_spectrum,
    oracle_spectrum,
    spectral_deviation,
    trace_counts,
    zeta,
)
from .analysis import (
    ClaimReport,
    check_bhk,
    check_interval,
    check_residue_partition,
    check_wcu,
    check_wcu_summary,
    connectivity,
    energy_report,
    girth,
    is_ramanujan,
    triangle_count,
    verify_graph,
)

__all__ = [
    "ClaimReport",
    "ContextMismatchError",
    "GaussianInt",
    "GrCayleyError",
    "GraphSpec",
    "IntegrityError",
    "ModulusError",
    "ModulusPoly",
    "PAdicCoords",
    "ParameterError",
    "RangeError",
    "RingContext",
    "RingElement",
    "RingParams",
    "SizeError",
    "Spectrum",
    "TraceCounts",
    "bfs_distances",
    "build_graph",
    "check_bhk",
    "check_interval",
    "check_residue_partition",
    "check_wcu",
    "check_wcu_summary",
    "connectivity",
    "energy_report",
    "eigenvalue_exact_char4",
    "eigenvalue_numeric",
    "export_edges",
    "family_params",
    "find_basic_irreducible",
    "frobenius",
    "full_spectrum",
    "girth",
    "is_ramanujan",
    "is_unit",
    "make_ring",
    "neighbors",
    "oracle_spectrum",
    "padic_coords",
    "project_residue",
    "spectral_deviation",
    "spectral_interval_bound",
    "trace",
    "trace_counts",
    "triangle_count",
    "verify_graph",
    "zeta",
]

__version__ = "0.1.0"
