"""Bi-Hamiltonian curve flows in quaternionic projective space.

States are passed as a pair of arrays: u with shape (N, 4) holding imaginary
quaternions (re, i, j, k) and v with shape (N, n-1, 4) for the vector part.
"""

from ._core import (
    BlowUpError,
    ConfigError,
    DimensionError,
    DomainError,
    NonlocalityError,
    chi,
    hamiltonian,
    hierarchy_flow,
    mkdv_rhs,
    mkdv_soliton,
    reconstruct_curve,
    run_command,
    sg_kink,
    sg_rhs,
    sg_vector_kink,
    simulate,
    verify,
)

__all__ = [
    "BlowUpError",
    "ConfigError",
    "DimensionError",
    "DomainError",
    "NonlocalityError",
    "chi",
    "hamiltonian",
    "hierarchy_flow",
    "mkdv_rhs",
    "mkdv_soliton",
    "reconstruct_curve",
    "run_command",
    "sg_kink",
    "sg_rhs",
    "sg_vector_kink",
    "simulate",
    "verify",
]
