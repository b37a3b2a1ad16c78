r"""Stress-energy tensor identities reduced to radial one-dimensional integrals.

For a radial map, in a g-orthonormal frame with ``e_r = f^{-1} d/dr`` first,
``S_F = F g - F' du (x) du`` has entries

    S(e_r, e_r) = F - 2 t F',        S(e_k, e_k) = F   (sphere directions),

with ``t = |du|^2/2``.  With ``X = r d/dr``:

* ``<S, g> = m F - 2 t F'``;
* ``(1/2) L_X g = r (d log f/dr) g + (1/2) f^2 Hess_{g0}(r^2)`` and
  ``(1/2) Hess_{g0}(r^2)`` has eigenvalue 1 on d/dr and ``r psi'/psi`` on the
  sphere, so
  ``<S, (1/2) L_X g> = r (log f)' (m F - 2tF') + (F - 2tF') + (m-1) r (psi'/psi) F``;
* ``S(X, nu) = r f (F - 2 t F')`` on ``dB(r)`` with ``ds_g = f^{m-1} psi^{m-1} dtheta``.

The divergence identity on an annulus then reads

    B(R) - B(R0) = A_{m-1} \int_{R0}^{R} <S, (1/2) L_X g> f^m psi^{m-1} dr,
    B(R) = A_{m-1} R psi(R)^{m-1} f(R)^m (F - 2 t F').
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .manifold import hessian_eigs, log_derivative, sphere_measure
from .radial import RadialMap

__all__ = [
    "StressEnergySample",
    "InequalityReport",
    "sample",
    "boundary_flux",
    "interior_density",
    "interior_integral",
    "annulus_identity_residual",
    "trace_bounds_check",
    "eigen_inequality_check",
]


@dataclass(frozen=True)
class StressEnergySample:
    r: float
    F_val: float
    Fp_val: float
    trace_term: float
    boundary_density: float
    interior_density: float


def _pieces(rmap: RadialMap, r):
    r = np.asarray(r, dtype=float)
    t = np.asarray(rmap.t(r), dtype=float)
    F = np.asarray(rmap.profile.F(t), dtype=float)
    Fp = np.asarray(rmap.profile.dF(t), dtype=float)
    # t F' vanishes with t even where F' blows up (p < 2 at t = 0)
    tFp = np.where(t == 0.0, 0.0, t * Fp)
    return r, t, F, Fp, tFp


def _interior_bracket(rmap: RadialMap, r, F, tFp):
    m = rmap.manifold.m
    rdlogf = r * np.asarray(rmap.factor.dlogf_dr(r), dtype=float)
    rho = r * np.asarray(log_derivative(rmap.manifold, r), dtype=float)
    return rdlogf * (m * F - 2 * tFp) + (F - 2 * tFp) + (m - 1) * rho * F


def sample(rmap: RadialMap, r) -> StressEnergySample:
    r, t, F, Fp, tFp = _pieces(rmap, float(r))
    m = rmap.manifold.m
    f = float(rmap.factor.f(r))
    return StressEnergySample(
        r=float(r),
        F_val=float(F),
        Fp_val=float(Fp),
        trace_term=float(m * F - 2 * tFp),
        boundary_density=float(r * f * (F - 2 * tFp)),
        interior_density=float(_interior_bracket(rmap, r, F, tFp)),
    )


def boundary_flux(rmap: RadialMap, R):
    """``int_{dB(R)} S_F(X, nu) ds_g`` for ``X = r d/dr``."""
    arr = np.asarray(R, dtype=float)
    if np.any(arr <= rmap.r_lo if rmap.edge_singular else arr < rmap.r_lo) or np.any(arr > rmap.r_hi):
        raise DomainError("boundary flux needs R inside the solution domain")
    r, t, F, Fp, tFp = _pieces(rmap, arr)
    m = rmap.manifold.m
    val = (sphere_measure(m) * r * np.power(np.asarray(rmap.manifold.psi(r), float), m - 1)
           * np.power(np.asarray(rmap.factor.f(r), float), m) * (F - 2 * tFp))
    return float(val) if arr.ndim == 0 else val


def interior_density(rmap: RadialMap, r):
    """``<S_F, (1/2) L_X g> f^m psi^{m-1}`` (per unit dr, without A_{m-1})."""
    r, t, F, Fp, tFp = _pieces(rmap, r)
    m = rmap.manifold.m
    w = (np.power(np.asarray(rmap.factor.f(r), float), m)
         * np.power(np.asarray(rmap.manifold.psi(r), float), m - 1))
    val = _interior_bracket(rmap, r, F, tFp) * w
    return float(val) if np.ndim(val) == 0 else val


def interior_integral(rmap: RadialMap, R0: float, R: float, *, epsabs: float = 1e-11) -> float:
    """Volume integral of ``<S_F, (1/2) L_X g>`` over the annulus ``R0 <= r <= R``."""
    if R0 < rmap.r_lo or R > rmap.r_hi:
        raise DomainError("annulus must lie in the solution domain")
    A = sphere_measure(rmap.manifold.m)
    return A * rmap.integrate(lambda s: interior_density(rmap, s), R0, R,
                              epsabs=epsabs / A, epsrel=1e-12)


def annulus_identity_residual(rmap: RadialMap, R0: float, R: float) -> float:
    """``|dB - I| / (1 + |dB|)`` for boundary difference dB and interior integral I."""
    diff = boundary_flux(rmap, R) - boundary_flux(rmap, R0)
    vol = interior_integral(rmap, R0, R)
    return abs(diff - vol) / (1.0 + abs(diff))


@dataclass
class InequalityReport:
    name: str
    r: np.ndarray
    lower: np.ndarray
    value: np.ndarray
    upper: np.ndarray
    tol: float

    @property
    def lower_margin(self) -> np.ndarray:
        return self.value - self.lower

    @property
    def upper_margin(self) -> np.ndarray:
        return self.upper - self.value

    def _scale(self):
        return self.tol * (1.0 + np.abs(self.value))

    @property
    def passed(self) -> np.ndarray:
        ok = self.lower_margin >= -self._scale()
        up = self.upper_margin
        return ok & (np.isnan(up) | (up >= -self._scale()))

    @property
    def all_passed(self) -> bool:
        return bool(np.all(self.passed))

    def worst(self) -> dict:
        lo = self.lower_margin
        i = int(np.argmin(lo))
        out = {"check": self.name, "passed": self.all_passed,
               "worst_lower_margin": float(lo[i]), "worst_lower_r": float(self.r[i])}
        up = self.upper_margin
        if not np.all(np.isnan(up)):
            j = int(np.nanargmin(up))
            out.update(worst_upper_margin=float(up[j]), worst_upper_r=float(self.r[j]))
        return out


def trace_bounds_check(rmap: RadialMap, r_grid, tol: float = 1e-12) -> InequalityReport:
    """``(m - 2 l_F) F >= <S_F, g> >= (m - 2 d_F) F`` pointwise."""
    r, t, F, Fp, tFp = _pieces(rmap, r_grid)
    m = rmap.manifold.m
    d, l = rmap.profile.d_F, rmap.profile.l_F
    with np.errstate(invalid="ignore"):
        lower = np.where(F == 0, 0.0, (m - 2 * d) * F) if np.isfinite(d) else np.full_like(F, -np.inf)
    return InequalityReport("trace_bounds", r, lower, m * F - 2 * tFp, (m - 2 * l) * F, tol)


def eigen_inequality_check(rmap: RadialMap, r_grid, tol: float = 1e-12) -> InequalityReport:
    """``f^2 <S_F, Hess_{g0}(r^2)> >= [(m-1) l_min + 2 - 2 d_F max(2, l_max)] F``."""
    r, t, F, Fp, tFp = _pieces(rmap, r_grid)
    m = rmap.manifold.m
    lam = np.asarray(hessian_eigs(rmap.manifold, r).lambda_min, dtype=float)
    value = (2.0 + (m - 1) * lam) * F - 4.0 * tFp
    d = rmap.profile.d_F
    if np.isfinite(d):
        lower = ((m - 1) * lam + 2.0 - 2.0 * d * np.maximum(2.0, lam)) * F
    else:
        lower = np.full_like(F, -np.inf)
    return InequalityReport("eigen_inequality", r, lower, value, np.full_like(F, np.nan), tol)
