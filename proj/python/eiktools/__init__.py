"""Symmetry verification and solution construction for relativistic
eikonal equations, backed by the C++ core."""

from ._eiktools import (
    DegenerateEnvelopeError,
    MissingDataError,
    MonotonicityError,
    __version__,
    catalog_count,
    catalog_names,
    cone_distance,
    euclid2_roots,
    fd_residual,
    hodograph,
    is_symmetry,
    legendre,
    sampled_check,
    solve_envelope,
)

__all__ = [
    "DegenerateEnvelopeError",
    "MissingDataError",
    "MonotonicityError",
    "__version__",
    "catalog_count",
    "catalog_names",
    "cone_distance",
    "euclid2_roots",
    "fd_residual",
    "hodograph",
    "is_symmetry",
    "legendre",
    "sampled_check",
    "solve_envelope",
]
