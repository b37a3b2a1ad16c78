"""Rotationally symmetric model manifolds ``dr^2 + psi(r)^2 g_sphere``.

Conventions used throughout the package:

* ``sphere_measure(m)`` is the surface measure of the unit sphere
  S^{m-1} in R^m, ``2 pi^{m/2} / Gamma(m/2)``.  Constants written with the
  unit *ball* volume convert through ``sphere_measure(m) = m * unit_ball_volume(m)``.
* The Hessian eigenvalues ``lambda_min``/``lambda_max`` are those of
  ``Hess(r^2) - 2 dr (x) dr`` on the directions orthogonal to d/dr.  For a
  model manifold both equal ``2 r psi'(r) / psi(r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, NoPoleError, NumericError, ParameterError, PreconditionError

__all__ = [
    "ModelManifold",
    "ConformalFactor",
    "HessianData",
    "HessianComparison",
    "sphere_measure",
    "unit_ball_volume",
    "euclidean",
    "hyperbolic",
    "build_pinched",
    "custom_manifold",
    "radial_curvature",
    "log_derivative",
    "hessian_eigs",
    "hessian_eigs_at_pole",
    "comparison_bounds",
    "curvature_bounds",
    "check_curvature_pinching",
    "check_hessian_comparison",
    "boundary_area",
    "unit_factor",
    "power_factor",
    "linear_factor",
    "exp_factor",
    "check_factor_sign",
]

R_MIN_EPS = 1e-8


def sphere_measure(m: int) -> float:
    """Surface measure of the unit (m-1)-sphere."""
    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0)


def unit_ball_volume(m: int) -> float:
    return sphere_measure(m) / m


@dataclass(frozen=True)
class ModelManifold:
    m: int
    kind: str
    psi: Callable
    psi_prime: Callable
    curvature: Callable | None = None
    params: Mapping[str, float] = field(default_factory=dict)
    r_max: float = math.inf
    r_min_eps: float = R_MIN_EPS
    # closed forms, when available, avoid finite precision in psi'/psi
    psi_ratio: Callable | None = None
    hessian: Callable | None = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ParameterError(f"dimension must be an integer >= 2, got {self.m!r}")


@dataclass(frozen=True)
class ConformalFactor:
    """Radial conformal factor ``g = f(r)^2 g0`` with a declared monotonicity."""

    f: Callable
    dlogf_dr: Callable
    sign: str = "nonneg"
    kind: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.sign not in ("nonneg", "nonpos"):
            raise ParameterError(f"factor sign must be 'nonneg' or 'nonpos', got {self.sign!r}")


@dataclass(frozen=True)
class HessianData:
    lambda_min: float
    lambda_max: float


@dataclass
class HessianComparison:
    case: str
    r: np.ndarray
    lower: np.ndarray
    ratio: np.ndarray
    upper: np.ndarray
    passed: np.ndarray
    tol: float

    @property
    def pass_fraction(self) -> float:
        return float(np.mean(self.passed))

    @property
    def all_passed(self) -> bool:
        return bool(np.all(self.passed))

    def max_relative_gap(self) -> float:
        """Largest relative distance from psi'/psi to the nearer envelope."""
        lo = np.abs(self.ratio - self.lower) / np.abs(self.ratio)
        hi = np.abs(self.upper - self.ratio) / np.abs(self.ratio)
        return float(np.max(np.minimum(lo, hi)))


# -- builtins -----------------------------------------------------------------

def euclidean(m: int) -> ModelManifold:
    return ModelManifold(
        m=m,
        kind="euclidean",
        psi=lambda r: np.asarray(r, dtype=float) * 1.0,
        psi_prime=lambda r: np.ones_like(np.asarray(r, dtype=float)),
        curvature=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        psi_ratio=lambda r: 1.0 / np.asarray(r, dtype=float),
        hessian=lambda r: np.full_like(np.asarray(r, dtype=float), 2.0),
    )


def hyperbolic(m: int, alpha: float = 1.0) -> ModelManifold:
    """Space form of curvature ``-alpha^2``: ``psi = sinh(alpha r) / alpha``."""
    if not alpha > 0:
        raise ParameterError("hyperbolic needs alpha > 0")

    def ratio(r):
        r = np.asarray(r, dtype=float)
        return alpha / np.tanh(alpha * r)

    return ModelManifold(
        m=m,
        kind="hyperbolic",
        params={"alpha": alpha},
        psi=lambda r: np.sinh(alpha * np.asarray(r, dtype=float)) / alpha,
        psi_prime=lambda r: np.cosh(alpha * np.asarray(r, dtype=float)),
        curvature=lambda r: np.full_like(np.asarray(r, dtype=float), -alpha * alpha),
        psi_ratio=ratio,
        hessian=lambda r: 2.0 * np.asarray(r, dtype=float) * ratio(r),
    )


def custom_manifold(m: int, psi: Callable, psi_prime: Callable, r_max: float = math.inf,
                    curvature: Callable | None = None) -> ModelManifold:
    return ModelManifold(m=m, kind="custom", psi=psi, psi_prime=psi_prime,
                         curvature=curvature, r_max=r_max)


def build_pinched(curvature: Callable, r_max: float, m: int = 3, *, rtol: float = 1e-12,
                  params: Mapping[str, float] | None = None) -> ModelManifold:
    """Integrate the Jacobi equation ``psi'' + K psi = 0`` from a smooth pole.

    Raises :class:`NoPoleError` at the first zero of psi on (0, r_max].
    """
    if not (r_max > 0 and math.isfinite(r_max)):
        raise ParameterError("build_pinched needs a finite r_max > 0")

    def rhs(r, y):
        return [y[1], -float(curvature(r)) * y[0]]

    def conjugate(r, y):
        return y[0]

    conjugate.terminal = True
    conjugate.direction = -1  # psi starts at 0 going up; only a downward crossing counts

    sol = solve_ivp(rhs, (0.0, r_max), [0.0, 1.0], method="DOP853", rtol=rtol,
                    atol=1e-16, dense_output=True, events=conjugate)
    if sol.status == 1 and sol.t_events[0].size:
        r0 = float(sol.t_events[0][0])
        raise NoPoleError(f"psi vanishes at r = {r0:.12g} < r_max; no pole", r0)
    if sol.status != 0:
        raise NumericError(f"Jacobi equation integration failed: {sol.message}")
    dense = sol.sol

    def psi(r):
        return dense(np.asarray(r, dtype=float))[0]

    def psi_prime(r):
        return dense(np.asarray(r, dtype=float))[1]

    def ratio(r):
        y = dense(np.asarray(r, dtype=float))
        return y[1] / y[0]

    return ModelManifold(m=m, kind="pinched", psi=psi, psi_prime=psi_prime,
                         curvature=curvature, params=dict(params or {}), r_max=float(r_max),
                         psi_ratio=ratio)


# -- geometry queries ---------------------------------------------------------

def _check_radius(manifold: ModelManifold, r, allow_zero=False) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    lo_ok = arr >= 0 if allow_zero else arr > 0
    if not np.all(lo_ok) or np.any(arr > manifold.r_max * (1 + 1e-12)):
        raise DomainError(f"radius outside working interval (0, {manifold.r_max}]")
    return arr


def _out(arr_in, value):
    return float(value) if np.ndim(arr_in) == 0 else value


def radial_curvature(manifold: ModelManifold, r):
    """``K_r = -psi''/psi``; profile readback when the curvature is declared."""
    arr = _check_radius(manifold, r)
    if manifold.curvature is not None:
        return _out(r, np.asarray(manifold.curvature(arr), dtype=float) * np.ones_like(arr))
    h = 1e-5 * np.maximum(arr, 1.0)
    second = (manifold.psi_prime(arr + h) - manifold.psi_prime(arr - h)) / (2 * h)
    return _out(r, -second / manifold.psi(arr))


def log_derivative(manifold: ModelManifold, r):
    """``psi'(r) / psi(r)``, equal to the Hessian of r on sphere directions."""
    arr = _check_radius(manifold, r)
    if manifold.psi_ratio is not None:
        return _out(r, np.asarray(manifold.psi_ratio(arr), dtype=float))
    return _out(r, manifold.psi_prime(arr) / manifold.psi(arr))


def hessian_eigs(manifold: ModelManifold, r) -> HessianData:
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("Hessian eigenvalues are singular at the pole; use hessian_eigs_at_pole")
    _check_radius(manifold, arr)
    if manifold.hessian is not None:
        lam = np.asarray(manifold.hessian(arr), dtype=float)
    else:
        lam = 2.0 * arr * np.asarray(log_derivative(manifold, arr))
    lam = _out(r, lam)
    return HessianData(lam, lam)


def hessian_eigs_at_pole(manifold: ModelManifold) -> HessianData:
    return HessianData(2.0, 2.0)


# -- comparison machinery -----------------------------------------------------

def _case_params(case: str, params: Mapping[str, float]) -> dict:
    p = dict(params)
    if case == "i":
        alpha, beta = p.get("alpha"), p.get("beta")
        if alpha is None or beta is None or not (alpha > 0 and beta > 0) or beta > alpha:
            raise ParameterError("case (i) needs alpha >= beta > 0")
    elif case == "ii":
        A, B, eps = p.get("A", 0.0), p.get("B", 0.0), p.get("eps")
        if eps is None or not eps > 0 or A < 0 or not (0 <= B < 2 * eps):
            raise ParameterError("case (ii) needs eps > 0, A >= 0, 0 <= B < 2 eps")
        p.update(A=A, B=B)
    elif case == "iii":
        a, b = p.get("a", 0.0), p.get("b", 0.0)
        if a < 0 or not (0 <= b * b <= 0.25):
            raise ParameterError("case (iii) needs a >= 0 and b^2 in [0, 1/4]")
        p.update(a=a, b=b)
    else:
        raise ParameterError(f"unknown pinching case {case!r}; use 'i', 'ii' or 'iii'")
    return p


def curvature_bounds(case: str, params: Mapping[str, float], r):
    """Lower and upper curvature envelopes ``(K_low(r), K_high(r))``."""
    p = _case_params(case, params)
    r = np.asarray(r, dtype=float)
    if case == "i":
        return np.full_like(r, -p["alpha"] ** 2), np.full_like(r, -p["beta"] ** 2)
    if case == "ii":
        w = np.power(1.0 + r * r, -(1.0 + p["eps"]))
        return -p["A"] * w, p["B"] * w
    w = 1.0 / (1.0 + r * r)
    return -p["a"] ** 2 * w, p["b"] ** 2 * w


def comparison_bounds(case: str, params: Mapping[str, float], r):
    """Envelopes ``h1(r) <= psi'/psi <= h2(r)`` implied by the pinching."""
    p = _case_params(case, params)
    r = np.asarray(r, dtype=float)
    if case == "i":
        beta, alpha = p["beta"], p["alpha"]
        return beta / np.tanh(beta * r), alpha / np.tanh(alpha * r)
    if case == "ii":
        return (1.0 - p["B"] / (2 * p["eps"])) / r, math.exp(p["A"] / (2 * p["eps"])) / r
    lo = (1.0 + math.sqrt(1.0 - 4.0 * p["b"] ** 2)) / (2.0 * r)
    hi = (1.0 + math.sqrt(1.0 + 4.0 * p["a"] ** 2)) / (2.0 * r)
    return lo, hi


def check_curvature_pinching(manifold: ModelManifold, case: str, params, r_grid,
                             slack: float = 1e-12) -> None:
    """Raise :class:`PreconditionError` at the first radius violating the case."""
    r = np.asarray(r_grid, dtype=float)
    K = np.asarray(radial_curvature(manifold, r), dtype=float) * np.ones_like(r)
    lo, hi = curvature_bounds(case, params, r)
    bad = (K < lo - slack * (1 + np.abs(lo))) | (K > hi + slack * (1 + np.abs(hi)))
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise PreconditionError(
            f"curvature {K[idx]:.6g} at r = {r[idx]:.6g} outside case ({case}) "
            f"bounds [{lo[idx]:.6g}, {hi[idx]:.6g}]", location=float(r[idx]))


def check_hessian_comparison(manifold: ModelManifold, case: str, params, r_grid,
                             tol: float = 1e-9) -> HessianComparison:
    """Compare psi'/psi against the comparison envelopes on ``r_grid``.

    A point passes when ``h1 (1 - tol) <= psi'/psi <= h2 (1 + tol)``; ``tol``
    absorbs integration error only.
    """
    r = np.asarray(r_grid, dtype=float)
    check_curvature_pinching(manifold, case, params, r)
    ratio = np.asarray(log_derivative(manifold, r), dtype=float)
    lo, hi = comparison_bounds(case, params, r)
    lo, hi = np.broadcast_to(lo, r.shape), np.broadcast_to(hi, r.shape)
    passed = (lo * (1 - tol) <= ratio) & (ratio <= hi * (1 + tol))
    return HessianComparison(case=case, r=r, lower=np.array(lo), ratio=ratio,
                             upper=np.array(hi), passed=passed, tol=tol)


# -- conformal factors --------------------------------------------------------

def unit_factor() -> ConformalFactor:
    return ConformalFactor(
        f=lambda r: np.ones_like(np.asarray(r, dtype=float)),
        dlogf_dr=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        sign="nonneg",
        kind="unit",
    )


def power_factor(s: float) -> ConformalFactor:
    """``f = (1 + r^2)^s``; decaying for s < 0."""
    return ConformalFactor(
        f=lambda r: np.power(1.0 + np.asarray(r, dtype=float) ** 2, s),
        dlogf_dr=lambda r: 2.0 * s * np.asarray(r, dtype=float) / (1.0 + np.asarray(r, dtype=float) ** 2),
        sign="nonneg" if s >= 0 else "nonpos",
        kind="power",
        params={"s": s},
    )


def linear_factor(c: float) -> ConformalFactor:
    """``f = 1 + c r`` with c >= 0."""
    if c < 0:
        raise ParameterError("linear factor needs c >= 0 to stay positive")
    return ConformalFactor(
        f=lambda r: 1.0 + c * np.asarray(r, dtype=float),
        dlogf_dr=lambda r: c / (1.0 + c * np.asarray(r, dtype=float)),
        sign="nonneg",
        kind="linear",
        params={"c": c},
    )


def exp_factor(c: float) -> ConformalFactor:
    """``f = exp(c r)``; decaying for c < 0."""
    return ConformalFactor(
        f=lambda r: np.exp(c * np.asarray(r, dtype=float)),
        dlogf_dr=lambda r: np.full_like(np.asarray(r, dtype=float), c),
        sign="nonneg" if c >= 0 else "nonpos",
        kind="exp",
        params={"c": c},
    )


def check_factor_sign(factor: ConformalFactor, r_grid) -> None:
    r = np.asarray(r_grid, dtype=float)
    f = np.asarray(factor.f(r), dtype=float)
    if np.any(f <= 0):
        idx = int(np.argmax(f <= 0))
        raise PreconditionError(f"conformal factor not positive at r = {r[idx]:.6g}", float(r[idx]))
    d = np.asarray(factor.dlogf_dr(r), dtype=float)
    bad = d < 0 if factor.sign == "nonneg" else d > 0
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise PreconditionError(
            f"d log f / dr = {d[idx]:.6g} at r = {r[idx]:.6g} contradicts declared sign {factor.sign}",
            float(r[idx]))


def boundary_area(manifold: ModelManifold, factor: ConformalFactor | None, R):
    """``A_{m-1} psi(R)^{m-1} f(R)^{m-2}``: the g0-integral of f^{m-2} over dB(R)."""
    arr = _check_radius(manifold, R)
    m = manifold.m
    val = sphere_measure(m) * np.power(manifold.psi(arr), m - 1)
    if factor is not None:
        val = val * np.power(factor.f(arr), m - 2)
    return _out(R, val)
