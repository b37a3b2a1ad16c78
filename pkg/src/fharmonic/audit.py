"""Growth-rate machinery and hypothesis checkers for the Liouville theorems.

Lower growth: with ``L(r) = c r (log f)' + (m-1)/2 lambda_min + 1 - d_F max(2, lambda_max)``
(``c = m - 2 d_F`` for nondecreasing f, ``m - 2 l_F`` for nonincreasing f)
and ``sigma = inf L > 0``, the F-energy of balls grows at least like ``R^sigma``.

Upper growth: for maps decaying to a point, ``Z``/``M``/``K`` bound the
energy from above through the isoperimetric quantity
``I(R) = (int_R^inf dr / A(r))^{-1}`` with ``A(r) = int_{dB(r)} f^{m-2} ds_{g0}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _quad
from .errors import ConfigurationError, DomainError, PreconditionError
from .manifold import (ConformalFactor, ModelManifold, boundary_area, check_curvature_pinching,
                       check_factor_sign, comparison_bounds, hessian_eigs, sphere_measure,
                       unit_factor)
from .profiles import FProfile, degree_gate, fprime_bounded
from .radial import RadialMap, limit_at_infinity, smooth_pole_classification, solve_flux
from .stress import boundary_flux
from .target import (TargetMetric, check_family, matrix_condition_margin, norm_sq,
                     radial_pullback_factor, to_target_coordinate)

__all__ = [
    "ConditionVerdict",
    "GrowthReport",
    "UpperBoundReport",
    "LiouvilleScenario",
    "LiouvilleVerdict",
    "default_sigma_grid",
    "sigma_integrand",
    "compute_sigma",
    "isoperimetric_quantity",
    "check_f2",
    "check_f3",
    "check_pinched_theorem",
    "check_corollary",
    "energy_profile",
    "eta_envelope",
    "upper_bound_machinery",
    "liouville_verdict",
    "THEOREMS",
]


@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of one hypothesis check.

    ``strict`` conditions hold iff ``margin > 0``; the others iff
    ``margin >= 0``.  ``value`` carries the quantity of interest (sigma, C, ...).
    """

    condition_id: str
    holds: bool
    margin: float
    witness_r: float | None = None
    status: str = ""
    strict: bool = False
    value: float | None = None
    details: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if not self.status:
            object.__setattr__(self, "status", "holds" if self.holds else "fails")

    def as_dict(self) -> dict:
        return {
            "condition": self.condition_id,
            "holds": bool(self.holds),
            "status": self.status,
            "margin": _num(self.margin),
            "witness_r": _num(self.witness_r),
            "value": _num(self.value),
            "details": {k: _num(v) if isinstance(v, (float, int, np.floating)) else v
                        for k, v in self.details.items()},
        }


def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _verdict(cid, margin, *, strict, **kw) -> ConditionVerdict:
    holds = margin > 0 if strict else margin >= 0
    return ConditionVerdict(cid, bool(holds), float(margin), strict=strict, **kw)


def _factor(factor):
    return factor if factor is not None else unit_factor()


# -- lower growth: sigma -----------------------------------------------------

def default_sigma_grid(manifold: ModelManifold, num: int = 2048) -> np.ndarray:
    hi = min(1e3, manifold.r_max)
    return np.geomspace(1e-3, hi, num)


def _degree_coefficient(profile: FProfile, m: int, factor: ConformalFactor) -> float:
    deg = profile.d_F if factor.sign == "nonneg" else profile.l_F
    return m - 2.0 * deg


def sigma_integrand(profile: FProfile, manifold: ModelManifold, factor, r) -> np.ndarray:
    """``L(r)``, the pointwise lower bound on ``<S_F, (1/2) L_X g> / F``."""
    factor = _factor(factor)
    r = np.asarray(r, dtype=float)
    m, d = manifold.m, profile.d_F
    if not math.isfinite(d):
        return np.full_like(r, -np.inf)
    lam = np.asarray(hessian_eigs(manifold, r).lambda_min, dtype=float)
    rdlogf = r * np.asarray(factor.dlogf_dr(r), dtype=float)
    coef = _degree_coefficient(profile, m, factor)
    # (m-1)/2 * lambda written as (m-1) * (lambda/2) keeps integer results exact
    return coef * rdlogf + (m - 1) * (lam / 2.0) + 1.0 - d * np.maximum(2.0, lam)


def compute_sigma(profile: FProfile, manifold: ModelManifold, factor=None, r_grid=None,
                  mode: str = "f1", R0: float | None = None):
    """Infimum of ``L`` over the grid and the pole limit ``m - 2 d_F``.

    ``mode="f1"`` asks for ``L >= sigma > 0`` everywhere; ``mode="f1_tilde"``
    asks for ``L >= 0`` everywhere and ``L >= sigma > 0`` for ``r >= R0``
    (``R0`` defaults to the first grid radius beyond which L stays positive).
    Returns ``(sigma, ConditionVerdict)``.
    """
    factor = _factor(factor)
    r = default_sigma_grid(manifold) if r_grid is None else np.asarray(r_grid, dtype=float)
    if np.any(r <= 0) or np.any(r > manifold.r_max):
        raise DomainError("sigma grid outside the manifold working interval")
    L = sigma_integrand(profile, manifold, factor, r)
    pole = manifold.m - 2.0 * profile.d_F if math.isfinite(profile.d_F) else -math.inf
    if mode == "f1":
        i = int(np.argmin(L))
        if pole <= L[i]:
            sigma, where = pole, 0.0
        else:
            sigma, where = float(L[i]), float(r[i])
        return sigma, _verdict("f1", sigma, strict=True, witness_r=where, value=sigma)
    if mode == "f1_tilde":
        everywhere = float(min(L.min(), pole))
        if R0 is None:
            pos = L > 0
            if not pos[-1]:
                return (float(L[-1]), _verdict("f1_tilde", float(L[-1]), strict=True,
                                               witness_r=float(r[-1]), value=float(L[-1]),
                                               details={"nonneg_everywhere": everywhere >= 0}))
            k = len(pos) - 1
            while k > 0 and pos[k - 1]:
                k -= 1
            R0 = float(r[k])
        tail = L[r >= R0]
        sigma = float(tail.min()) if tail.size else math.nan
        margin = min(sigma, everywhere if everywhere < 0 else math.inf)
        return sigma, _verdict("f1_tilde", margin, strict=True, witness_r=R0, value=sigma,
                               details={"R0": R0, "nonneg_everywhere": everywhere >= 0,
                                        "inf_everywhere": everywhere})
    raise ConfigurationError(f"unknown sigma mode {mode!r}")


# -- isoperimetric conditions --------------------------------------------------

def _area_exponent(manifold, factor, r1: float, r2: float) -> float:
    with np.errstate(over="ignore"):
        a1, a2 = boundary_area(manifold, factor, r1), boundary_area(manifold, factor, r2)
    if not math.isfinite(a2):
        return math.inf
    return math.log(a2 / a1) / math.log(r2 / r1)


def isoperimetric_quantity(manifold: ModelManifold, factor, R) -> np.ndarray:
    """``I(R) = (int_R^inf dr / A(r))^{-1}``; zero when the tail integral diverges.

    Beyond a finite ``r_max`` the area is continued as a power law fitted on
    ``[r_max/2, r_max]``.
    """
    factor = _factor(factor)
    R = np.atleast_1d(np.asarray(R, dtype=float))

    def inv_area(r):
        with np.errstate(over="ignore"):
            a = float(boundary_area(manifold, factor, r))
        return 0.0 if math.isinf(a) else 1.0 / a

    out = np.empty_like(R)
    if math.isfinite(manifold.r_max):
        rm = manifold.r_max
        beta = _area_exponent(manifold, factor, rm / 2.0, rm)
        tail = math.inf if beta <= 1.0 else inv_area(rm) * rm / (beta - 1.0)
        for i, x in enumerate(R):
            out[i] = 0.0 if math.isinf(tail) else 1.0 / (
                _quad.integrate(inv_area, x, rm, epsabs=0.0) + tail)
        return out
    big = max(1e6, 10 * R.max())
    beta = _area_exponent(manifold, factor, big / 2.0, big)
    for i, x in enumerate(R):
        with np.errstate(over="ignore"):
            if math.isinf(float(boundary_area(manifold, factor, x))):
                out[i] = math.inf
                continue
        if beta <= 1.0 + 1e-3:
            out[i] = 0.0
            continue
        out[i] = 1.0 / _quad.integrate(inv_area, x, math.inf, epsabs=0.0)
    return out


def _tail_log_slope(R, ratio) -> float:
    """``d log(ratio) / d log R`` from the last two probes."""
    a, b = ratio[-2], ratio[-1]
    if not (math.isfinite(a) and math.isfinite(b)) or a <= 0:
        return math.inf
    return math.log(b / a) / math.log(R[-1] / R[-2])


def _boundedness(R, ratio, slope_tol: float, window: int = 8):
    """Decide whether ``ratio(R)`` stays bounded as R grows.

    Bounded when the last log-slope is below ``slope_tol`` or when the local
    log-slopes decay like a power of R (their remaining sum is finite).
    Returns ``(margin, last_slope, decay_exponent)``; ``margin >= 0`` iff bounded.
    """
    R = np.asarray(R, dtype=float)
    ratio = np.asarray(ratio, dtype=float)
    if not np.all(np.isfinite(ratio)) or np.any(ratio <= 0):
        return -math.inf, math.inf, math.nan
    x = np.log(R)
    s = np.diff(np.log(ratio)) / np.diff(x)
    last = float(s[-1])
    if last <= slope_tol:
        return slope_tol - last, last, math.nan
    tail_s, tail_x = s[-window:], 0.5 * (x[1:] + x[:-1])[-window:]
    if np.any(tail_s <= 0):
        return slope_tol - last, last, math.nan
    gamma = -float(np.polyfit(tail_x, np.log(tail_s), 1)[0])
    return (gamma - 0.5 if gamma > 0.5 else slope_tol - last), last, gamma


def check_f2(manifold: ModelManifold, factor, sigma: float, R_probe=None, R0: float | None = None,
             slope_tol: float = 1e-3) -> ConditionVerdict:
    """Is ``I(R) <= C R^sigma`` for large R?

    Boundedness of ``I(R) / R^sigma`` is judged by its log-slope over the
    outermost probes; ``C`` is the largest sampled ratio.
    """
    if not sigma > 0:
        raise PreconditionError("check_f2 needs sigma > 0")
    factor = _factor(factor)
    if R_probe is None:
        lo = max(R0 or 1.0, 1.0)
        # stay clear of the fitted power tail beyond a finite r_max
        hi = min(1e4, manifold.r_max / 2.0)
        R_probe = np.geomspace(lo, hi, 40)
    R = np.asarray(R_probe, dtype=float)
    I = isoperimetric_quantity(manifold, factor, R)
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = I / np.power(R, sigma)
    details = {}
    if np.all(I == 0):
        details["note"] = "tail integral diverges: I(R) = 0"
        return _verdict("f2", slope_tol, strict=False, value=0.0, details=details)
    margin, slope, gamma = _boundedness(R, ratio, slope_tol)
    if np.any(np.isinf(I)) or slope > 1.0:
        details["note"] = ("boundary area grows too fast (e.g. exponentially); "
                           "the isoperimetric condition fails for every sigma > 0")
    finite = ratio[np.isfinite(ratio)]
    C = float(finite.max()) if finite.size else math.inf
    i = int(np.argmax(np.where(np.isfinite(ratio), ratio, np.inf)))
    details.update(tail_log_slope=slope, slope_decay_exponent=gamma, sigma=sigma)
    return _verdict("f2", margin, strict=False, witness_r=float(R[i]), value=C, details=details)


def check_f3(manifold: ModelManifold, factor, R_probe=None, slope_tol: float = 1e-2) -> ConditionVerdict:
    """Is ``A(R) <= C R log R`` for large R?"""
    if manifold.m <= 2:
        raise PreconditionError("condition (f3) is only examined for m > 2")
    factor = _factor(factor)
    if R_probe is None:
        R_probe = np.geomspace(10.0, min(1e6, manifold.r_max / 2.0), 30)
    R = np.asarray(R_probe, dtype=float)
    if R.min() <= math.e:
        raise PreconditionError("probe radii must exceed e")
    with np.errstate(over="ignore"):
        A = np.asarray(boundary_area(manifold, factor, R), dtype=float)
    ratio = A / (R * np.log(R))
    margin, slope, gamma = _boundedness(R, ratio, slope_tol)
    finite = ratio[np.isfinite(ratio)]
    C = float(finite.max()) if finite.size else math.inf
    return _verdict("f3", margin, strict=False, witness_r=float(R[-1]), value=C,
                    details={"tail_log_slope": slope, "slope_decay_exponent": gamma})


# -- pinched manifolds ---------------------------------------------------------

_CURVATURE_CASE = {"i": "i", "ii": "ii", "iii": "iii", "i_simplified": "i"}


def _pinched_bound(profile, manifold, factor, case, params, r):
    m, d = manifold.m, profile.d_F
    coef = _degree_coefficient(profile, m, factor)
    rdlogf = r * np.asarray(factor.dlogf_dr(r), dtype=float)
    if case == "i":
        a, b = params["alpha"], params["beta"]
        return coef * rdlogf + 1 + (m - 1) * b * r / np.tanh(b * r) - 2 * d * a * r / np.tanh(a * r)
    if case == "ii":
        A, B, eps = params.get("A", 0.0), params.get("B", 0.0), params["eps"]
        return coef * rdlogf + 1 + (m - 1) * (1 - B / (2 * eps)) - 2 * d * math.exp(A / (2 * eps))
    if case == "iii":
        a, b = params.get("a", 0.0), params.get("b", 0.0)
        return (coef * rdlogf + 1 + (m - 1) * (1 + math.sqrt(1 - 4 * b * b)) / 2
                - d * (1 + math.sqrt(1 + 4 * a * a)))
    if case == "i_simplified":
        return coef * rdlogf + m - 2 * d * params["alpha"] / params["beta"]
    raise ConfigurationError(f"unknown pinched case {case!r}")


def check_pinched_theorem(profile: FProfile, manifold: ModelManifold, factor, case: str,
                          params: Mapping[str, float], r_grid=None) -> ConditionVerdict:
    """Closed-form lower bound for ``L`` under a curvature pinching.

    ``case`` is ``i``, ``ii``, ``iii`` or ``i_simplified`` (the simplified
    bound ``c r (log f)' + m - 2 d_F alpha/beta``).  A nonincreasing factor
    switches the coefficient to ``m - 2 l_F`` automatically.
    """
    factor = _factor(factor)
    if case not in _CURVATURE_CASE:
        raise ConfigurationError(f"unknown pinched case {case!r}")
    r = default_sigma_grid(manifold) if r_grid is None else np.asarray(r_grid, dtype=float)
    check_curvature_pinching(manifold, _CURVATURE_CASE[case], params, r)
    if not math.isfinite(profile.d_F):
        return _verdict(f"liouville_pinched_{case}", -math.inf, strict=True, value=-math.inf)
    bound = np.broadcast_to(_pinched_bound(profile, manifold, factor, case, params, r), r.shape)
    i = int(np.argmin(bound))
    sigma, where = float(bound[i]), float(r[i])
    if case == "i":
        pole = manifold.m - 2.0 * profile.d_F
        if pole < sigma:
            sigma, where = pole, 0.0
    details = {}
    if case == "i_simplified":
        premise = (manifold.m - 1) * params["beta"] - 2 * profile.d_F * params["alpha"]
        details["premise_margin"] = premise
    # consistency: the bound never exceeds the exact L on the grid
    exact = sigma_integrand(profile, manifold, factor, r)
    details["max_bound_excess"] = float(np.max(bound - exact))
    return _verdict(f"liouville_pinched_{case}" if case != "i_simplified" else "liouville_pinched_i", sigma, strict=True,
                    witness_r=where, value=sigma, details=details)


def check_corollary(profile: FProfile, manifold: ModelManifold, cid: str,
                    params: Mapping[str, float] | None = None, r_grid=None) -> ConditionVerdict:
    """Inequalities of the unit-factor corollaries (``unit_pinched_ii``, ``unit_pinched_iii``, ``flat_pinched``)."""
    params = dict(params or {})
    m, d = manifold.m, profile.d_F
    if cid == "flat_pinched":
        return _verdict("flat_pinched", 1.0 - d, strict=False, value=m - 2.0,
                        details={"euclidean": manifold.kind == "euclidean"})
    if cid == "unit_pinched_ii":
        base = check_pinched_theorem(profile, manifold, None, "ii", params, r_grid)
        return _verdict("unit_pinched_ii", base.value - (m - 2.0), strict=False, value=m - 2.0,
                        witness_r=base.witness_r)
    if cid == "unit_pinched_iii":
        base = check_pinched_theorem(profile, manifold, None, "iii", params, r_grid)
        Ap = (1 + math.sqrt(1 + 4 * params.get("a", 0.0) ** 2)) / 2
        target = (m - 1) * Ap - 1
        return _verdict("unit_pinched_iii", base.value - target, strict=False, value=target,
                        witness_r=base.witness_r)
    raise ConfigurationError(f"unknown corollary {cid!r}")


# -- energy growth -------------------------------------------------------------

@dataclass
class GrowthReport:
    R_samples: np.ndarray
    E_samples: np.ndarray
    sigma: float
    fitted_exponent: float
    fit_residual: float
    monotone_ratio_ok: bool
    H_R0: float
    R0: float
    audit_residuals: np.ndarray
    dichotomy: str

    def as_dict(self) -> dict:
        return {
            "sigma": _num(self.sigma),
            "fitted_exponent": _num(self.fitted_exponent),
            "fit_residual": _num(self.fit_residual),
            "monotone_ratio_ok": bool(self.monotone_ratio_ok),
            "H_R0": _num(self.H_R0),
            "R0": _num(self.R0),
            "min_audit_residual": _num(np.min(self.audit_residuals)) if self.audit_residuals.size else None,
            "E_last": _num(self.E_samples[-1]) if self.E_samples.size else None,
            "dichotomy": self.dichotomy,
        }


def _energy_density(rmap: RadialMap, r):
    m = rmap.manifold.m
    return (float(rmap.energy_density(r)) * float(rmap.factor.f(r)) ** m
            * float(rmap.manifold.psi(r)) ** (m - 1))


def _fit_exponent(R, E, min_points=8):
    n = len(R)
    k = max(min_points, n // 2)
    if n < min_points:
        return math.nan, math.nan
    Rt, Et = R[-k:], E[-k:]
    if np.any(Et <= 0):
        return math.nan, math.nan
    x, y = np.log(Rt), np.log(Et)
    coef = np.polyfit(x, y, 1)
    res = float(np.sqrt(np.mean((np.polyval(coef, x) - y) ** 2)))
    return float(coef[0]), res


def energy_profile(rmap: RadialMap, R_samples, sigma: float, R0: float | None = None,
                   tol: float = 1e-9) -> GrowthReport:
    """Energies of balls (or annuli) and the monotonicity audit.

    Maps reaching the pole use ``E(R) = E_F(B(R))`` and check that
    ``E / R^sigma`` is nondecreasing.  Annulus maps use the energy of
    ``B(R) minus B(R0)`` and report ``R E'(R) - H(R0) - sigma E(R)`` per sample,
    where ``H(R0)`` is the stress-energy boundary flux at ``R0``.
    """
    R = np.sort(np.asarray(R_samples, dtype=float))
    A = sphere_measure(rmap.manifold.m)
    pole_case = rmap.reaches_pole
    if pole_case:
        R0 = rmap.r_lo
        H = 0.0
    else:
        if R0 is None:
            R0 = rmap.r_lo if not rmap.edge_singular else float(R[0])
        H = float(boundary_flux(rmap, R0)) if R0 > rmap.r_lo or not rmap.edge_singular else math.nan
    if R[0] < R0 or R[-1] > rmap.r_hi:
        raise DomainError("energy samples must lie in [R0, r_hi]")
    E = np.empty_like(R)
    acc, prev = 0.0, R0
    for i, x in enumerate(R):
        if x > prev:
            acc += A * rmap.integrate(lambda s: _energy_density(rmap, s), prev, x,
                                      epsabs=1e-13, epsrel=1e-12)
            prev = x
        E[i] = acc
    dE = np.array([A * _energy_density(rmap, x) for x in R])
    if pole_case:
        ratio = E / np.power(R, sigma)
        monotone = bool(np.all(np.diff(ratio) >= -tol * (1 + np.abs(ratio[1:]))))
        residuals = R * dE - sigma * E
    else:
        residuals = R * dE - H - sigma * E
        monotone = bool(np.all(residuals >= -tol * (1 + np.abs(R * dE) + abs(H))))
    exponent, fit_res = _fit_exponent(R, E)
    if rmap.is_constant:
        note = "constant map: energy vanishes"
    elif rmap.pole_smooth:
        note = "nonconstant pole-smooth map: lower bound R^sigma applies"
    elif math.isfinite(exponent) and exponent < sigma:
        note = "no contradiction: hypothesis violated (map is not smooth on the whole manifold)"
    else:
        note = "map is not smooth at the pole; growth recorded only"
    return GrowthReport(R, E, float(sigma), exponent, fit_res, monotone, H, float(R0), residuals, note)


# -- upper growth --------------------------------------------------------------

def eta_envelope(values) -> np.ndarray:
    """Smallest nonincreasing sequence dominating ``values`` (running max from the right)."""
    v = np.asarray(values, dtype=float)
    return np.maximum.accumulate(v[::-1])[::-1]


@dataclass
class UpperBoundReport:
    R: np.ndarray
    Z: np.ndarray
    Z_prime: np.ndarray
    M: np.ndarray
    K: np.ndarray
    eta: np.ndarray
    B: np.ndarray
    D: float
    R2: float
    tol: float

    @property
    def cs_squared_ok(self) -> np.ndarray:
        """``Z^2 <= 4 Z' M`` with ``Z`` integrated from ``R2`` (no inner constant)."""
        rhs = 4 * self.Z_prime * self.M
        return self.Z ** 2 <= rhs + self.tol * (1 + np.abs(rhs))

    @property
    def cs_core_ok(self) -> np.ndarray:
        """Cauchy-Schwarz on spheres: ``B^2 <= Z' M``."""
        rhs = self.Z_prime * self.M
        return self.B ** 2 <= rhs + self.tol * (1 + np.abs(rhs))

    @property
    def linear_ok(self) -> np.ndarray:
        """``Z + D <= 2 B`` where ``D = 2 B(R2)`` plays the inner cut-off constant."""
        lhs, rhs = self.Z + self.D, 2 * self.B
        return lhs <= rhs + self.tol * (1 + np.abs(lhs) + np.abs(rhs))

    def as_dict(self) -> dict:
        return {
            "R2": _num(self.R2),
            "cs_squared_all": bool(np.all(self.cs_squared_ok)),
            "cs_core_all": bool(np.all(self.cs_core_ok)),
            "linear_all": bool(np.all(self.linear_ok)),
            "K_last": _num(self.K[-1]),
            "eta_last": _num(self.eta[-1]),
            "Z_last": _num(self.Z[-1]),
        }


def upper_bound_machinery(rmap: RadialMap, target: TargetMetric, R2: float, R_samples,
                          tol: float = 1e-12) -> UpperBoundReport:
    """Z, Z', M, K and eta along a radial map into a conformally flat target.

    The map's values are read as arclength ``v`` along a ray of the target;
    the chart coordinate is ``y = to_target_coordinate(target, v)`` so that
    ``h(y) y'^2 = v'^2`` and the energy argument is unchanged.
    """
    R = np.sort(np.asarray(R_samples, dtype=float))
    if R[0] < R2:
        raise DomainError("samples must start at or beyond R2")
    m = rmap.manifold.m
    A = sphere_measure(m)
    v = np.asarray(rmap.u(R), dtype=float)
    y = np.asarray(to_target_coordinate(target, v), dtype=float)
    nz = y[y != 0]
    if nz.size:
        margin = np.asarray(matrix_condition_margin(target, np.abs(nz)), dtype=float)
        if np.any(margin < 0):
            raise PreconditionError("target chart condition fails on the image of the map",
                                    location=float(R[y != 0][int(np.argmin(margin))]))

    def weight(r):
        return (float(rmap.factor.f(r)) ** (m - 2)) * float(rmap.manifold.psi(r)) ** (m - 1)

    def z_density(r):
        up = float(rmap.u_prime(r))
        return float(rmap.profile.dF(np.float64(rmap.t(r)))) * up * up * weight(r)

    Z = np.empty_like(R)
    acc, prev = 0.0, R2
    for i, x in enumerate(R):
        if x > prev:
            acc += A * rmap.integrate(z_density, prev, x, epsabs=1e-14, epsrel=1e-12)
            prev = x
        Z[i] = acc
    t = np.asarray(rmap.t(R), dtype=float)
    Fp = np.asarray(rmap.profile.dF(t), dtype=float)
    W = np.array([weight(x) for x in R])
    up = np.asarray(rmap.u_prime(R), dtype=float)
    hy2 = np.asarray(norm_sq(target, y), dtype=float)
    Zp = A * Fp * up * up * W
    M = A * Fp * hy2 * W
    K = Fp * hy2
    lam = np.sqrt(radial_pullback_factor(target, y)) if target.kind == "power" else np.ones_like(y)
    B = A * Fp * lam * y * up * W
    # inner constant from the divergence identity on [R2, R]
    v2 = float(rmap.u(R2))
    y2 = float(to_target_coordinate(target, v2))
    lam2 = math.sqrt(float(radial_pullback_factor(target, y2))) if target.kind == "power" else 1.0
    D = 2 * A * float(rmap.profile.dF(np.float64(rmap.t(R2)))) * lam2 * y2 * float(rmap.u_prime(R2)) * weight(R2)
    return UpperBoundReport(R, Z, Zp, M, K, eta_envelope(hy2), B, D, float(R2), tol)


# -- verdicts ------------------------------------------------------------------

THEOREMS = {
    "liouville_decay": ("degree_gate", "l_F_positive", "F_prime_bounded", "f1", "f2", "decay"),
    "liouville_decay_uc": ("degree_gate", "unique_continuation", "l_F_positive", "F_prime_bounded",
              "f1_tilde", "f2", "decay"),
    "liouville_pinched": ("degree_gate", "l_F_positive", "F_prime_bounded", "pinched_sigma", "f2", "decay"),
    "liouville_bounded_image": ("degree_gate", "l_F_positive", "F_prime_bounded", "f1", "f3", "bounded_image"),
    "liouville_target": ("degree_gate", "l_F_positive", "target_condition", "f1", "f2", "K_decay"),
    "unit_factor_decay": ("degree_gate", "unit_factor", "l_F_positive", "F_prime_bounded", "f1", "f2", "decay"),
    "unit_pinched": ("degree_gate", "unit_factor", "l_F_positive", "F_prime_bounded", "corollary_sigma",
              "f2", "decay"),
    "flat_pinched": ("degree_gate", "euclidean", "l_F_positive", "F_prime_bounded", "corollary_sigma",
              "decay"),
    "scalar_decay": ("degree_gate", "scalar_target", "l_F_positive", "f1", "f2", "K_decay"),
    "bernstein": ("minimal_graph", "euclidean", "degree_gate", "f1", "f2", "K_decay"),
}

MAP_HYPOTHESES = ("decay", "K_decay", "bounded_image")


@dataclass
class LiouvilleScenario:
    """Everything :func:`liouville_verdict` needs.

    ``fluxes``/``intervals`` list explicit radial solutions to examine; when
    empty the whole radial family is examined through the pole
    classification.  Map-level hypotheses (decay, K decay, bounded image)
    cannot be certified for a family and must then appear in ``granted``.
    """

    profile: FProfile
    manifold: ModelManifold
    theorem: str
    factor: ConformalFactor | None = None
    target: TargetMetric | None = None
    fluxes: Sequence[float] = ()
    intervals: Sequence[tuple[float, float]] = ()
    granted: frozenset = frozenset()
    case: str | None = None
    case_params: Mapping[str, float] = field(default_factory=dict)
    sigma_grid: np.ndarray | None = None
    R_samples: np.ndarray | None = None
    bound_C: float | None = None
    tol_scale: float = 1.0


@dataclass
class LiouvilleVerdict:
    kind: str  # CONSTANT_FORCED | HYPOTHESIS_FAILS | INCONSISTENT
    failing: tuple[str, ...]
    hypotheses: dict
    maps: list
    sigma: float | None
    notes: list

    def as_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "failing": list(self.failing),
            "sigma": _num(self.sigma),
            "hypotheses": {k: v.as_dict() for k, v in self.hypotheses.items()},
            "maps": self.maps,
            "notes": self.notes,
        }


def _bool_verdict(cid, ok, **details) -> ConditionVerdict:
    return ConditionVerdict(cid, bool(ok), 1.0 if ok else -1.0, details=details)


def _structural(sc: LiouvilleScenario, hyps: dict, notes: list) -> float | None:
    """Evaluate theorem-level hypotheses into ``hyps``; returns the sigma in use."""
    prof, man = sc.profile, sc.manifold
    factor = _factor(sc.factor)
    need = THEOREMS[sc.theorem]
    m = man.m
    grid = sc.sigma_grid if sc.sigma_grid is not None else default_sigma_grid(man)
    check_factor_sign(factor, grid)
    hyps["degree_gate"] = _bool_verdict("degree_gate", degree_gate(prof, m), d_F=prof.d_F, m=m)
    if "l_F_positive" in need:
        hyps["l_F_positive"] = _bool_verdict("l_F_positive", prof.l_F > 0, l_F=prof.l_F)
    if "F_prime_bounded" in need and "F_prime_bounded" not in sc.granted:
        hyps["F_prime_bounded"] = _bool_verdict("F_prime_bounded", fprime_bounded(prof))
    if "unique_continuation" in need:
        hyps["unique_continuation"] = _bool_verdict("unique_continuation",
                                                    prof.has_unique_continuation)
    if "unit_factor" in need:
        hyps["unit_factor"] = _bool_verdict("unit_factor", factor.kind == "unit")
    if "euclidean" in need:
        hyps["euclidean"] = _bool_verdict("euclidean", man.kind == "euclidean")
    if "minimal_graph" in need:
        hyps["minimal_graph"] = _bool_verdict("minimal_graph", prof.name == "minimal_graph")
    if "scalar_target" in need:
        ok = sc.target is None or (sc.target.kind in ("scalar", "flat") and sc.target.n == 1)
        hyps["scalar_target"] = _bool_verdict("scalar_target", ok)
    if "target_condition" in need:
        tgt = sc.target
        if tgt is None or tgt.kind in ("flat", "scalar"):
            ok = True
        else:
            ok = check_family(tgt).holds
        hyps["target_condition"] = _bool_verdict("target_condition", ok)

    sigma = None
    if "f1" in need:
        sigma, hyps["f1"] = compute_sigma(prof, man, factor, grid, mode="f1")
    if "f1_tilde" in need:
        sigma, hyps["f1_tilde"] = compute_sigma(prof, man, factor, grid, mode="f1_tilde")
    if "pinched_sigma" in need:
        if sc.case is None:
            raise ConfigurationError("liouville_pinched scenarios need a pinching case")
        try:
            v = check_pinched_theorem(prof, man, factor, sc.case, sc.case_params, grid)
        except PreconditionError as exc:
            v = ConditionVerdict("pinched_sigma", False, -1.0, witness_r=exc.location,
                                 details={"reason": str(exc)})
        hyps["pinched_sigma"] = v
        sigma = v.value
    if "corollary_sigma" in need:
        if sc.theorem == "flat_pinched":
            v = check_corollary(prof, man, "flat_pinched")
        else:
            cid = {"ii": "unit_pinched_ii", "iii": "unit_pinched_iii"}.get(sc.case or "")
            if cid is None:
                raise ConfigurationError("unit_pinched scenarios need case 'ii' or 'iii'")
            try:
                v = check_corollary(prof, man, cid, sc.case_params, grid)
            except PreconditionError as exc:
                v = ConditionVerdict(cid, False, -1.0, details={"reason": str(exc)})
        hyps["corollary_sigma"] = v
        sigma = v.value
    if sc.theorem == "bernstein":
        sigma = m - 2.0
        if "f1" in hyps and abs(hyps["f1"].value - sigma) > 1e-12:
            notes.append(f"f1 sigma {hyps['f1'].value} differs from m - 2")
    if "f2" in need:
        if sigma is not None and sigma > 0:
            hyps["f2"] = check_f2(man, factor, sigma, slope_tol=1e-3 * sc.tol_scale)
            if "note" in hyps["f2"].details:
                notes.append(hyps["f2"].details["note"])
        else:
            hyps["f2"] = ConditionVerdict("f2", False, -1.0, status="undetermined",
                                          details={"reason": "no positive sigma"})
    if "f3" in need:
        hyps["f3"] = check_f3(man, factor, slope_tol=1e-2 * sc.tol_scale)
    for name in need:
        if name in sc.granted and name not in MAP_HYPOTHESES:
            hyps[name] = _bool_verdict(name, True, granted=True)
    return sigma


def _map_hypotheses(sc: LiouvilleScenario, rmap: RadialMap, need) -> dict:
    out = {}
    out["pole_smooth"] = _bool_verdict("pole_smooth", rmap.pole_smooth,
                                       r_lo=rmap.r_lo, reaches_pole=rmap.reaches_pole,
                                       truncation="; ".join(rmap.truncation))
    entire = math.isinf(rmap.r_hi)
    lim = None
    if entire and rmap.manifold.m > 2:
        lim = limit_at_infinity(rmap)
    if "F_prime_bounded" in need and "F_prime_bounded" not in sc.granted:
        R = _map_samples(sc, rmap)
        fp = np.asarray(rmap.profile.dF(np.asarray(rmap.t(R))), dtype=float)
        out["F_prime_bounded"] = _bool_verdict("F_prime_bounded", bool(np.all(np.isfinite(fp))),
                                               sup_sampled=float(np.max(fp)))
    if "decay" in need:
        ok = lim is not None and lim.status == "finite"
        out["decay"] = _bool_verdict("decay", ok, limit_status=lim.status if lim else "bounded domain")
    if "K_decay" in need or "bounded_image" in need:
        R = _map_samples(sc, rmap)
        c = lim.value if (lim is not None and lim.status == "finite") else 0.0
        shifted = rmap.shifted(-c) if c else rmap
        tgt = sc.target
        v = np.asarray(shifted.u(R), dtype=float)
        y = np.asarray(to_target_coordinate(tgt, v), float) if tgt is not None else v
        hy2 = np.asarray(norm_sq(tgt, y), float) if tgt is not None else v * v
        K = np.asarray(rmap.profile.dF(np.asarray(rmap.t(R))), float) * hy2
        if "K_decay" in need:
            tail = K[-max(4, len(K) // 4):]
            ok = bool(np.all(np.isfinite(tail)) and (tail[-1] <= 1e-12 or
                      (tail[-1] < tail[0] and _tail_log_slope(R, K) < -1e-2)))
            out["K_decay"] = _bool_verdict("K_decay", ok, K_last=float(K[-1]), shift=c)
        if "bounded_image" in need:
            C = sc.bound_C if sc.bound_C is not None else math.inf
            out["bounded_image"] = _bool_verdict("bounded_image", bool(np.all(hy2 <= C)),
                                                 sup_hy2=float(np.max(hy2)))
    return out


def _map_samples(sc, rmap):
    if sc.R_samples is not None:
        R = np.asarray(sc.R_samples, dtype=float)
        R = R[(R > rmap.r_lo) & (R <= rmap.r_hi)]
        if R.size >= 4:
            return R
    lo = rmap.r_lo * (1.01 if rmap.edge_singular else 1.0)
    lo = max(lo, 1e-3)
    hi = rmap.r_hi if math.isfinite(rmap.r_hi) else max(1e3, 100 * lo)
    return np.geomspace(lo, hi, 32)


def liouville_verdict(sc: LiouvilleScenario) -> LiouvilleVerdict:
    """Check a theorem's hypotheses and cross-check against radial solutions."""
    if sc.theorem not in THEOREMS:
        raise ConfigurationError(f"unknown theorem {sc.theorem!r}; known: {sorted(THEOREMS)}")
    need = THEOREMS[sc.theorem]
    notes: list = []
    hyps: dict = {}
    sigma = _structural(sc, hyps, notes)
    structural_fail = [k for k, v in hyps.items() if not v.holds]

    maps_out = []
    failing = list(structural_fail)
    inconsistent = False
    factor = _factor(sc.factor)
    if sc.fluxes:
        intervals = list(sc.intervals) or [(0.0, math.inf)]
        for Q in sc.fluxes:
            for iv in intervals:
                rmap = solve_flux(sc.profile, sc.manifold, factor, float(Q), iv)
                mh = _map_hypotheses(sc, rmap, need)
                for name in MAP_HYPOTHESES:
                    if name in need and name in sc.granted:
                        mh[name] = _bool_verdict(name, True, granted=True)
                bad = [k for k, v in mh.items() if not v.holds]
                maps_out.append({
                    "Q": float(Q), "interval": [_num(iv[0]), _num(iv[1])],
                    "domain": [_num(rmap.r_lo), _num(rmap.r_hi)],
                    "constant": rmap.is_constant, "pole_smooth": rmap.pole_smooth,
                    "failing": bad,
                    "hypotheses": {k: v.as_dict() for k, v in mh.items()},
                })
                for k in bad:
                    if k not in failing:
                        failing.append(k)
                if not structural_fail and not bad and not rmap.is_constant:
                    inconsistent = True
    else:
        cls = smooth_pole_classification(sc.profile, sc.manifold, factor)
        hyps["pole_classification"] = _bool_verdict("pole_classification", cls.only_constant_smooth,
                                                     rates=str(cls.rate_exponent))
        notes.append(cls.note)
        for name in MAP_HYPOTHESES:
            if name in need:
                ok = name in sc.granted
                hyps[name] = _bool_verdict(name, ok, granted=ok)
                if not ok:
                    failing.append(name)
        if not failing and not cls.only_constant_smooth:
            inconsistent = True

    if inconsistent:
        kind = "INCONSISTENT"
    elif failing:
        kind = "HYPOTHESIS_FAILS"
    else:
        kind = "CONSTANT_FORCED"
    return LiouvilleVerdict(kind, tuple(failing), hyps, maps_out, sigma, notes)
