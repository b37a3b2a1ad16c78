"""Energy densities F(t) and their upper/lower degrees.

A profile bundles F, F', F'' with the degrees

    d_F = sup_{t>0} t F'(t) / F(t),     l_F = inf_{t>0} t F'(t) / F(t).

Every builtin satisfies F(0) = 0.  Two densities that are usually written
with F(0) = 1, ``(1 + 2t)^alpha`` and ``exp(2t)``, are stored shifted by -1;
the shift does not change the Euler-Lagrange equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigurationError, DomainError, ParameterError

__all__ = [
    "FProfile",
    "make_builtin",
    "custom",
    "evaluate",
    "degree_ratio",
    "estimate_degrees",
    "degree_gate",
    "default_degree_grid",
    "fprime_bounded",
    "BUILTIN_NAMES",
]

BUILTIN_NAMES = ("harmonic", "p_harmonic", "minimal_graph", "alpha_harmonic", "exponential")

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FProfile:
    """An energy density F with F(0) = 0 and F' > 0 on (0, inf).

    ``ratio`` optionally overrides the naive ``t F'(t) / F(t)`` with a
    cancellation-free expression.  ``ratio_at_zero`` / ``ratio_at_infinity``
    are the analytic endpoint limits of that ratio when known.
    ``flux_capacity`` is ``sup_t F'(t) sqrt(2t)``; it bounds the flux a radial
    solution can carry through a sphere and is infinite for most builtins.
    """

    name: str
    F: ArrayFn
    dF: ArrayFn
    d2F: ArrayFn | None
    d_F: float
    l_F: float
    has_unique_continuation: bool = False
    params: Mapping[str, float] = field(default_factory=dict)
    ratio: ArrayFn | None = None
    ratio_at_zero: float | None = None
    ratio_at_infinity: float | None = None
    flux_capacity: float | None = None
    fprime_sup: float | None = None

    @property
    def degrees(self) -> tuple[float, float]:
        return (self.d_F, self.l_F)

    def __call__(self, t):
        return evaluate(self, t)


def _as_nonneg(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("F is only defined for t >= 0")
    return arr


def _harmonic() -> FProfile:
    return FProfile(
        name="harmonic",
        F=lambda t: 2.0 * t,
        dF=lambda t: np.full_like(t, 2.0),
        d2F=lambda t: np.zeros_like(t),
        d_F=1.0,
        l_F=1.0,
        has_unique_continuation=True,
        ratio=lambda t: np.ones_like(t),
        ratio_at_zero=1.0,
        ratio_at_infinity=1.0,
        flux_capacity=math.inf,
        fprime_sup=2.0,
    )


def _p_harmonic(p: float) -> FProfile:
    if not (p > 1.0 and math.isfinite(p)):
        raise ParameterError(f"p_harmonic needs p > 1, got {p!r}")
    half = p / 2.0
    if p == 2.0:
        dF = lambda t: np.ones_like(t)
        d2F = lambda t: np.zeros_like(t)
    else:

        def dF(t):
            with np.errstate(divide="ignore"):
                return np.power(2.0 * t, half - 1.0)

        def d2F(t):
            with np.errstate(divide="ignore", invalid="ignore"):
                return (p - 2.0) * np.power(2.0 * t, half - 2.0)

    return FProfile(
        name="p_harmonic",
        F=lambda t: np.power(2.0 * t, half) / p,
        dF=dF,
        d2F=d2F,
        d_F=half,
        l_F=half,
        params={"p": p},
        ratio=lambda t: np.full_like(t, half),
        ratio_at_zero=half,
        ratio_at_infinity=half,
        flux_capacity=math.inf,
        fprime_sup=1.0 if p == 2.0 else math.inf,
    )


def _minimal_graph() -> FProfile:
    def F(t):
        return np.expm1(0.5 * np.log1p(2.0 * t))

    def ratio(t):
        return 0.5 * (1.0 + 1.0 / np.sqrt(1.0 + 2.0 * t))

    return FProfile(
        name="minimal_graph",
        F=F,
        dF=lambda t: 1.0 / np.sqrt(1.0 + 2.0 * t),
        d2F=lambda t: -np.power(1.0 + 2.0 * t, -1.5),
        d_F=1.0,
        l_F=0.5,
        has_unique_continuation=True,
        ratio=ratio,
        ratio_at_zero=1.0,
        ratio_at_infinity=0.5,
        flux_capacity=1.0,
        fprime_sup=1.0,
    )


def _alpha_harmonic(alpha: float) -> FProfile:
    if not (alpha > 1.0 and math.isfinite(alpha)):
        raise ParameterError(f"alpha_harmonic needs alpha > 1, got {alpha!r}")

    def F(t):
        return np.expm1(alpha * np.log1p(2.0 * t))

    def ratio(t):
        with np.errstate(invalid="ignore"):
            x = np.log1p(2.0 * t)
            out = 2.0 * alpha * t * np.exp((alpha - 1.0) * x) / np.expm1(alpha * x)
        return np.where(t == 0, 1.0, out)

    return FProfile(
        name="alpha_harmonic",
        F=F,
        dF=lambda t: 2.0 * alpha * np.power(1.0 + 2.0 * t, alpha - 1.0),
        d2F=lambda t: 4.0 * alpha * (alpha - 1.0) * np.power(1.0 + 2.0 * t, alpha - 2.0),
        d_F=alpha,
        l_F=1.0,
        params={"alpha": alpha},
        ratio=ratio,
        ratio_at_zero=1.0,
        ratio_at_infinity=alpha,
        flux_capacity=math.inf,
        fprime_sup=math.inf,
    )


def _exponential() -> FProfile:
    def ratio(t):
        with np.errstate(invalid="ignore", divide="ignore"):
            out = 2.0 * t / -np.expm1(-2.0 * t)
        return np.where(t == 0, 1.0, out)

    def dF(t):
        with np.errstate(over="ignore"):
            return 2.0 * np.exp(2.0 * t)

    def d2F(t):
        with np.errstate(over="ignore"):
            return 4.0 * np.exp(2.0 * t)

    def F(t):
        with np.errstate(over="ignore"):
            return np.expm1(2.0 * t)

    return FProfile(
        name="exponential",
        F=F,
        dF=dF,
        d2F=d2F,
        d_F=math.inf,
        l_F=1.0,
        ratio=ratio,
        ratio_at_zero=1.0,
        ratio_at_infinity=math.inf,
        flux_capacity=math.inf,
        fprime_sup=math.inf,
    )


def make_builtin(name: str, **params: float) -> FProfile:
    """Construct a named profile.

    >>> make_builtin("p_harmonic", p=3).degrees
    (1.5, 1.5)
    """
    if name == "harmonic":
        return _harmonic()
    if name == "p_harmonic":
        if "p" not in params:
            raise ParameterError("p_harmonic requires parameter p")
        return _p_harmonic(float(params["p"]))
    if name == "minimal_graph":
        return _minimal_graph()
    if name == "alpha_harmonic":
        if "alpha" not in params:
            raise ParameterError("alpha_harmonic requires parameter alpha")
        return _alpha_harmonic(float(params["alpha"]))
    if name == "exponential":
        return _exponential()
    raise ParameterError(f"unknown profile {name!r}; builtins are {BUILTIN_NAMES}")


def custom(
    F: ArrayFn,
    dF: ArrayFn,
    d2F: ArrayFn | None = None,
    *,
    name: str = "custom",
    d_F: float | None = None,
    l_F: float | None = None,
    has_unique_continuation: bool = False,
) -> FProfile:
    """Wrap user callables as a profile; missing degrees are estimated."""
    prof = FProfile(name=name, F=F, dF=dF, d2F=d2F, d_F=math.nan, l_F=math.nan,
                    has_unique_continuation=has_unique_continuation)
    if d_F is None or l_F is None:
        est_d, est_l = estimate_degrees(prof)
        d_F = est_d if d_F is None else d_F
        l_F = est_l if l_F is None else l_F
    return FProfile(name=name, F=F, dF=dF, d2F=d2F, d_F=float(d_F), l_F=float(l_F),
                    has_unique_continuation=has_unique_continuation)


def evaluate(profile: FProfile, t):
    """Return ``(F(t), F'(t))``; scalars in, scalars out."""
    arr = _as_nonneg(t)
    vals = np.asarray(profile.F(arr), dtype=float), np.asarray(profile.dF(arr), dtype=float)
    if arr.ndim == 0:
        return float(vals[0]), float(vals[1])
    return vals


def degree_ratio(profile: FProfile, t) -> np.ndarray:
    """``t F'(t) / F(t)`` for t > 0."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("degree ratio needs t > 0")
    if profile.ratio is not None:
        return np.asarray(profile.ratio(arr), dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return arr * np.asarray(profile.dF(arr), float) / np.asarray(profile.F(arr), float)


def default_degree_grid(num: int = 512) -> np.ndarray:
    return np.geomspace(1e-6, 1e6, num)


def _aitken_limit(x0: float, x1: float, x2: float) -> float:
    """Extrapolate a geometrically converging triple; inf when it diverges."""
    if not all(map(math.isfinite, (x0, x1, x2))):
        return math.inf if (math.isinf(x2) and x2 > 0) else math.nan
    d1, d2 = x1 - x0, x2 - x1
    if d2 == 0.0:
        return x2
    if abs(d2) >= abs(d1):
        # not contracting: the ratio runs off
        return math.inf if d2 > 0 else -math.inf
    return x2 - d2 * d2 / (d2 - d1)


def _endpoint_limit(profile: FProfile, t_end: float, toward_zero: bool) -> float:
    step = 0.1 if not toward_zero else 10.0
    pts = np.array([t_end * step**2, t_end * step, t_end])
    vals = degree_ratio(profile, pts)
    return _aitken_limit(*map(float, vals))


def estimate_degrees(profile: FProfile, t_grid=None) -> tuple[float, float]:
    """Sup and inf of ``t F'/F`` over a log grid plus both endpoint limits.

    Builtins contribute their analytic limits; custom profiles are
    extrapolated from the three outermost decades with Aitken's process.
    """
    t = default_degree_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 64:
        raise ConfigurationError("degree grid needs at least 64 points")
    if np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise ConfigurationError("degree grid must be positive and strictly increasing")
    if math.log10(t[-1] / t[0]) < 8.0 - 1e-12:
        raise ConfigurationError("degree grid must span at least 8 decades")

    vals = degree_ratio(profile, t)
    finite = vals[np.isfinite(vals)]
    lo_lim = profile.ratio_at_zero
    if lo_lim is None:
        lo_lim = _endpoint_limit(profile, float(t[0]), toward_zero=True)
    hi_lim = profile.ratio_at_infinity
    if hi_lim is None:
        if finite.size < vals.size and vals.size and not np.isfinite(vals[-1]):
            hi_lim = math.inf  # F overflowed at the right end
        else:
            hi_lim = _endpoint_limit(profile, float(t[-1]), toward_zero=False)
    pool = list(finite) + [x for x in (lo_lim, hi_lim) if not math.isnan(x)]
    return float(max(pool)), float(min(pool))


def degree_gate(profile: FProfile, m: int) -> bool:
    """Standing assumption ``d_F < inf`` and ``m > max(2, 2 d_F)``."""
    return math.isfinite(profile.d_F) and m > max(2.0, 2.0 * profile.d_F)


def fprime_bounded(profile: FProfile) -> bool:
    """Whether ``sup_t F'(t)`` is finite (sufficient for F' bounded along any map)."""
    if profile.fprime_sup is not None:
        return math.isfinite(profile.fprime_sup)
    t = np.concatenate([[0.0], default_degree_grid()])
    with np.errstate(all="ignore"):
        fp = np.asarray(profile.dF(t), dtype=float)
    if not np.all(np.isfinite(fp)):
        return False
    # growth still visible over the last decade means unbounded
    return not (fp[-1] >= fp.max() and fp[-1] > fp[-43] * (1 + 1e-6))


def flux_capacity(profile: FProfile) -> float:
    """``sup_t F'(t) sqrt(2t)`` (estimated on a grid for custom profiles)."""
    if profile.flux_capacity is not None:
        return profile.flux_capacity
    t = np.geomspace(1e-12, 1e12, 1025)
    with np.errstate(all="ignore"):
        g = np.asarray(profile.dF(t), float) * np.sqrt(2.0 * t)
    g = g[np.isfinite(g)]
    if g.size == 0:
        return math.inf
    if g[-1] >= g.max() and g[-1] > g[-43] * (1 + 1e-6):
        return math.inf
    return float(g.max())
