"""Elliptic gamma functions on the moduli of rank-two lattices in C^3 and
the ISL_3(Z) cocycle they define."""

__version__ = "0.1.0"

from .family import delta, gamma_ab, gamma_ab_cone
from .lattice import GroupElement, cone_basis, framing, fundamental_set, primitive_gamma
from .special import (
    ConvergenceError,
    DomainError,
    EvalConfig,
    GammaGerbeError,
    PoleError,
    ZeroHitError,
    elliptic_gamma,
    theta0,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "EvalConfig",
    "GammaGerbeError",
    "GroupElement",
    "PoleError",
    "ZeroHitError",
    "cone_basis",
    "delta",
    "elliptic_gamma",
    "framing",
    "fundamental_set",
    "gamma_ab",
    "gamma_ab_cone",
    "primitive_gamma",
    "theta0",
]
