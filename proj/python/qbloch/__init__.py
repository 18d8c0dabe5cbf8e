"""Bloch-ball geometry, divergence Voronoi diagrams and Holevo capacity."""

from ._qbloch import *  # noqa: F401,F403
from ._qbloch import (
    MODES,
    AffineChannel,
    DomainError,
    FormatError,
    InvalidChannel,
    ModeMisuse,
    NonConvergence,
    SiteError,
)

__all__ = [
    "MODES",
    "AffineChannel",
    "DomainError",
    "FormatError",
    "InvalidChannel",
    "ModeMisuse",
    "NonConvergence",
    "SiteError",
    "assign",
    "bures",
    "classify",
    "conjugate_potential",
    "divergence",
    "divergence_matrix",
    "eigenvalues",
    "entropy",
    "euclidean",
    "export_cells",
    "from_bloch",
    "fubini_study",
    "geodesic",
    "grad_potential",
    "holevo_capacity",
    "inverse_grad",
    "log_density",
    "meb_exact",
    "meb_grid",
    "meb_iterative",
    "potential",
    "pure_limit_section",
    "sample_sphere",
    "to_bloch",
    "verify",
]
