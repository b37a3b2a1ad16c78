"""Numerical toolkit for F-harmonic maps on rotationally symmetric manifolds.

Profiles ``F`` with their degrees, model manifolds ``dr^2 + psi(r)^2 g_sphere``
with conformal factors, radial solutions from the flux first integral,
stress-energy identities, and Liouville-type hypothesis audits.
"""

from . import audit, manifold, profiles, radial, stress, target
from .audit import compute_sigma, liouville_verdict
from .errors import (AmbiguousRootError, ConfigurationError, DegenerateMetricError, DomainError,
                     EmptyDomainError, FHarmonicError, NoPoleError, NumericError, ParameterError,
                     PreconditionError)
from .manifold import build_pinched, euclidean, hyperbolic
from .profiles import estimate_degrees, make_builtin
from .radial import solve_flux

__version__ = "0.1.0"

__all__ = [
    "audit", "manifold", "profiles", "radial", "stress", "target",
    "compute_sigma", "liouville_verdict", "build_pinched", "euclidean", "hyperbolic",
    "estimate_degrees", "make_builtin", "solve_flux",
    "AmbiguousRootError", "ConfigurationError", "DegenerateMetricError", "DomainError",
    "EmptyDomainError", "FHarmonicError", "NoPoleError", "NumericError", "ParameterError",
    "PreconditionError",
]
