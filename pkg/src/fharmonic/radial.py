r"""Radial F-harmonic functions through the conserved flux.

For ``u = u(r)`` on ``(M, f^2 g0)`` with ``g0 = dr^2 + psi^2 g_sphere`` the
F-energy of a ball is

    E = A_{m-1} \int F(t) f^m psi^{m-1} dr,     t = f^{-2} u'^2 / 2,

and its Euler-Lagrange equation integrates once to

    F'(t) u' f^{m-2} psi^{m-1} = Q.

Writing ``u' = f sigma`` turns this into ``G(sigma) = F'(sigma^2/2) sigma = q(r)``
with ``q(r) = |Q| / (f psi)^{m-1}``; the slope at each radius is the unique
root of that scalar equation.  ``sup G`` (the profile's flux capacity) limits
where a solution with a given Q exists.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import _quad
from .errors import (AmbiguousRootError, DomainError, EmptyDomainError, PreconditionError)
from .manifold import ConformalFactor, ModelManifold, unit_factor
from .profiles import FProfile, flux_capacity

__all__ = [
    "RadialMap",
    "LimitResult",
    "PoleClassification",
    "solve_flux",
    "limit_at_infinity",
    "smooth_pole_classification",
    "flux_residual",
]

_SIGMA_MAX = 1e150
_SIGMA_MIN = 1e-150


def _closed(r_arr, value):
    return float(value) if np.ndim(r_arr) == 0 else value


class _SlopeSolver:
    """Solves ``G(sigma) = q`` for a fixed profile."""

    def __init__(self, profile: FProfile):
        self.profile = profile
        self.capacity = flux_capacity(profile)
        self.bad_t = self._non_monotone_regions()
        if self.bad_t:
            self._scan = np.geomspace(_SIGMA_MIN, _SIGMA_MAX, 6001)
            with np.errstate(all="ignore"):
                self._scan_G = np.asarray(profile.dF(0.5 * self._scan ** 2), float) * self._scan

    def G(self, sigma: float) -> float:
        t = 0.5 * sigma * sigma
        with np.errstate(all="ignore"):
            return float(self.profile.dF(np.float64(t))) * sigma

    def _non_monotone_regions(self):
        t = np.geomspace(1e-30, 1e30, 4001)
        with np.errstate(all="ignore"):
            if self.profile.d2F is not None:
                dG = np.asarray(self.profile.dF(t), float) + 2 * t * np.asarray(self.profile.d2F(t), float)
                bad = ~(dG > 0) & np.isfinite(dG)
            else:
                sig = np.sqrt(2 * t)
                g = np.asarray(self.profile.dF(t), float) * sig
                bad = np.zeros_like(t, dtype=bool)
                bad[1:] = np.diff(g) <= 0
                bad &= np.isfinite(g)
        regions = []
        idx = np.flatnonzero(bad)
        if idx.size:
            start = prev = idx[0]
            for i in idx[1:]:
                if i != prev + 1:
                    regions.append((float(t[max(start - 1, 0)]), float(t[min(prev + 1, t.size - 1)])))
                    start = i
                prev = i
            regions.append((float(t[max(start - 1, 0)]), float(t[min(prev + 1, t.size - 1)])))
        return regions

    def _all_brackets(self, q: float):
        sig = self._scan
        g = self._scan_G - q
        sgn = np.sign(g)
        cross = np.flatnonzero(sgn[:-1] * sgn[1:] < 0)
        return [(float(sig[i]), float(sig[i + 1])) for i in cross]

    def solve(self, q: float) -> float:
        """Root of ``G(sigma) = q`` for ``q > 0``; ``nan`` when none exists."""
        if q >= self.capacity:
            return math.nan
        hi = 1.0
        g_hi = self.G(hi)
        if g_hi < q:
            lo = hi
            while g_hi < q:
                lo, hi = hi, hi * 4.0
                if hi > _SIGMA_MAX:
                    return math.nan
                g_hi = self.G(hi)
        else:
            lo = hi / 4.0
            while self.G(lo) >= q:
                hi, lo = lo, lo / 4.0
                if lo < _SIGMA_MIN:
                    return lo
        if self.bad_t:
            # a fold anywhere in G can add roots away from the local bracket
            brackets = self._all_brackets(q)
            if len(brackets) > 1:
                raise AmbiguousRootError(
                    f"flux function not monotone near q = {q:.6g}; {len(brackets)} brackets",
                    brackets)
            if brackets:
                lo, hi = brackets[0]
        return brentq(lambda s: self.G(s) - q, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                       maxiter=400)


@dataclass(frozen=True, eq=False)
class RadialMap:
    """A radial solution with flux ``Q`` on ``[r_lo, r_hi]``.

    ``u(r_lo) = offset`` (zero unless the map was translated with
    :meth:`shifted`).  ``edge_singular`` marks an inner edge where the slope
    blows up because the flux capacity is exhausted there.
    """

    profile: FProfile
    manifold: ModelManifold
    factor: ConformalFactor
    Q: float
    r_lo: float
    r_hi: float
    edge_singular: bool = False
    truncation: tuple[str, ...] = ()
    offset: float = 0.0
    _solver: _SlopeSolver = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    # -- pointwise quantities ------------------------------------------------

    def _check(self, r):
        arr = np.asarray(r, dtype=float)
        lo_bad = arr <= self.r_lo if self.edge_singular else arr < self.r_lo * (1 - 1e-14)
        if np.any(lo_bad) or np.any(arr > self.r_hi):
            raise DomainError(f"radius outside solution domain [{self.r_lo:.6g}, {self.r_hi:.6g}]")
        return arr

    def _sigma_scalar(self, r: float) -> float:
        hit = self._cache.get(r)
        if hit is not None:
            return hit
        if self.Q == 0.0:
            sigma = 0.0
        else:
            m = self.manifold.m
            fpsi = float(self.factor.f(r)) * float(self.manifold.psi(r))
            q = abs(self.Q) / fpsi ** (m - 1)
            sigma = self._solver.solve(q)
            if math.isnan(sigma):
                raise DomainError(f"flux equation has no root at r = {r:.12g}")
        if len(self._cache) < 200_000:
            self._cache[r] = sigma
        return sigma

    def sigma(self, r):
        """``|u'| / f``, the g-norm of the gradient."""
        arr = self._check(r)
        out = np.array([self._sigma_scalar(float(x)) for x in arr.ravel()]).reshape(arr.shape)
        return _closed(r, out)

    def u_prime(self, r):
        arr = self._check(r)
        val = np.sign(self.Q) * np.asarray(self.factor.f(arr), float) * np.asarray(self.sigma(arr))
        return _closed(r, val)

    def t(self, r):
        """Energy argument ``|du|^2 / 2``."""
        s = np.asarray(self.sigma(r))
        return _closed(r, 0.5 * s * s)

    def energy_density(self, r):
        t = np.asarray(self.t(r))
        return _closed(r, np.asarray(self.profile.F(t), dtype=float))

    # -- integrated quantities -----------------------------------------------

    def integrate(self, fn, a: float, b: float, *, epsabs=1e-12, epsrel=1e-12) -> float:
        """Integrate a scalar function of r over ``[a, b]`` inside the domain."""
        singular = self.edge_singular and a <= self.r_lo
        return _quad.integrate(fn, a, b, singular_left=singular, epsabs=epsabs, epsrel=epsrel)

    def u(self, r):
        arr = np.asarray(r, dtype=float)
        if np.any(arr < self.r_lo) or np.any(arr > self.r_hi):
            raise DomainError(f"radius outside solution domain [{self.r_lo:.6g}, {self.r_hi:.6g}]")
        if self.Q == 0.0:
            return _closed(r, np.full(arr.shape, self.offset))
        flat = arr.ravel()
        order = np.argsort(flat)
        out = np.empty_like(flat)
        acc, prev = 0.0, self.r_lo
        for i in order:
            x = float(flat[i])
            if x > prev:
                acc += self.integrate(lambda s: float(self.u_prime(s)), prev, x)
                prev = x
            out[i] = acc
        return _closed(r, out.reshape(arr.shape) + self.offset)

    def shifted(self, c: float) -> "RadialMap":
        """Translate the values by ``c``; slopes and flux are unchanged."""
        return RadialMap(self.profile, self.manifold, self.factor, self.Q, self.r_lo, self.r_hi,
                         self.edge_singular, self.truncation, self.offset + c, self._solver,
                         self._cache)

    @property
    def is_constant(self) -> bool:
        return self.Q == 0.0

    @property
    def reaches_pole(self) -> bool:
        return self.r_lo <= self.manifold.r_min_eps * (1 + 1e-9) and not self.edge_singular

    @property
    def pole_smooth(self) -> bool:
        """Domain contains the pole and the slope vanishes there."""
        if not self.reaches_pole:
            return False
        eps = self.manifold.r_min_eps
        near, far = abs(float(self.u_prime(eps))), abs(float(self.u_prime(min(10 * eps, self.r_hi))))
        return near <= 1e-6 and near <= far

    def to_csv(self, path, r_grid) -> Path:
        """Write ``r,u,u_prime,energy_density`` rows with round-trip formatting."""
        r = np.asarray(r_grid, dtype=float)
        u, up, e = self.u(r), self.u_prime(r), self.energy_density(r)
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "u", "u_prime", "energy_density"])
            for row in zip(r, np.atleast_1d(u), np.atleast_1d(up), np.atleast_1d(e)):
                w.writerow([repr(float(x)) for x in row])
        return path


def _find_domain(solver, manifold, factor, Qabs, a, b):
    """Outermost subinterval of [a, b] where ``(f psi)^{m-1} capacity > |Q|``."""
    cap = solver.capacity
    level = math.log(Qabs / cap)

    m = manifold.m

    def h(r):
        with np.errstate(over="ignore", divide="ignore"):
            lf = np.log(np.asarray(factor.f(r), float))
            lp = np.log(np.asarray(manifold.psi(r), float))
        return float((m - 1) * (lf + lp)) - level

    b_scan = b if math.isfinite(b) else max(1e6, 1e3 * a)
    grid = np.geomspace(a, b_scan, 2001)
    vals = np.array([h(x) for x in grid])
    ok = vals > 0
    if not ok.any():
        raise EmptyDomainError(
            f"|Q| = {Qabs:.6g} exceeds the flux capacity on the whole interval [{a:.6g}, {b:.6g}]")
    last = int(np.flatnonzero(ok)[-1])
    first = last
    while first > 0 and ok[first - 1]:
        first -= 1
    reasons = []
    if first == 0:
        lo, singular = a, False
    else:
        lo = brentq(h, grid[first - 1], grid[first], xtol=1e-15, rtol=4 * np.finfo(float).eps)
        singular = True
        reasons.append(f"no root for r < {lo:.12g}: flux capacity below |Q|")
    if last == grid.size - 1:
        hi = b
    else:
        hi = brentq(h, grid[last], grid[last + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
        reasons.append(f"no root for r > {hi:.12g}: flux capacity below |Q|")
    return lo, hi, singular, reasons


def solve_flux(profile: FProfile, manifold: ModelManifold, factor: ConformalFactor | None,
               Q: float, r_interval=(0.0, math.inf)) -> RadialMap:
    """Radial solution with flux ``Q`` on the solvable part of ``r_interval``."""
    factor = factor or unit_factor()
    if not math.isfinite(Q):
        raise PreconditionError("flux constant must be finite")
    a, b = float(r_interval[0]), float(r_interval[1])
    reasons = []
    if a < manifold.r_min_eps:
        a = manifold.r_min_eps
    if b > manifold.r_max:
        b = manifold.r_max
        reasons.append(f"interval clipped to manifold r_max = {b:.6g}")
    if not b > a:
        raise DomainError(f"empty radial interval [{a}, {b}]")
    solver = _SlopeSolver(profile)
    singular = False
    if Q != 0.0 and math.isfinite(solver.capacity):
        a, b, singular, extra = _find_domain(solver, manifold, factor, abs(Q), a, b)
        reasons.extend(extra)
    return RadialMap(profile, manifold, factor, float(Q), a, b, singular, tuple(reasons), 0.0,
                     solver)


def flux_residual(rmap: RadialMap, r) -> np.ndarray:
    """``|F'(t) u' f^{m-2} psi^{m-1} - Q| / |Q|`` at the given radii."""
    r = np.asarray(r, dtype=float)
    m = rmap.manifold.m
    t = np.asarray(rmap.t(r))
    flux = (np.asarray(rmap.profile.dF(t), float) * np.asarray(rmap.u_prime(r))
            * np.power(np.asarray(rmap.factor.f(r), float), m - 2)
            * np.power(np.asarray(rmap.manifold.psi(r), float), m - 1))
    return np.abs(flux - rmap.Q) / abs(rmap.Q)


@dataclass(frozen=True)
class LimitResult:
    status: str  # "finite" | "divergent" | "undetermined"
    value: float | None
    tail_bound: float | None
    decay_exponent: float


def _decay_exponent(rmap: RadialMap, r1: float, r2: float) -> float:
    a, b = abs(float(rmap.u_prime(r1))), abs(float(rmap.u_prime(r2)))
    return -math.log(b / a) / math.log(r2 / r1)


def limit_at_infinity(rmap: RadialMap, *, exponent_margin: float = 0.05) -> LimitResult:
    """``u(inf)`` when the slope decays faster than ``1/r``.

    The tail beyond ``R_t`` is certified by the local power law of ``|u'|``:
    with exponent ``gamma > 1`` the remainder is at most about
    ``|u'(R_t)| R_t / (gamma - 1)``.
    """
    if rmap.manifold.m <= 2:
        raise PreconditionError("limits at infinity are only examined for m > 2")
    if math.isfinite(rmap.r_hi):
        raise PreconditionError("solution domain is bounded above")
    if rmap.Q == 0.0:
        return LimitResult("finite", rmap.offset, 0.0, math.inf)
    r_t = max(10.0 * rmap.r_lo, 10.0)
    g1 = _decay_exponent(rmap, r_t, 10 * r_t)
    g2 = _decay_exponent(rmap, 10 * r_t, 100 * r_t)
    gamma = min(g1, g2)
    if gamma > 1.0 + exponent_margin:
        head = rmap.integrate(lambda s: float(rmap.u_prime(s)), rmap.r_lo, r_t)
        tail = _quad.integrate(lambda s: float(rmap.u_prime(s)), r_t, math.inf)
        bound = abs(float(rmap.u_prime(r_t))) * r_t / (gamma - 1.0)
        return LimitResult("finite", rmap.offset + head + tail, bound, gamma)
    if gamma < 1.0 - exponent_margin or (g2 <= 1.0 and g1 <= 1.0):
        return LimitResult("divergent", None, None, gamma)
    return LimitResult("undetermined", None, abs(float(rmap.u_prime(r_t))) * r_t, gamma)


@dataclass(frozen=True)
class PoleClassification:
    only_constant_smooth: bool
    witnesses: tuple  # (Q, r, slope or None)
    rate_exponent: dict  # Q -> fitted d log|u'| / d log r near the pole
    note: str


def smooth_pole_classification(profile: FProfile, manifold: ModelManifold,
                               factor: ConformalFactor | None = None, Q_probe=(1.0, -1.0),
                               radii=None) -> PoleClassification:
    """Show that no nonzero flux gives a slope vanishing at the pole.

    Each probe flux is solved on radii approaching the pole.  Non-smoothness
    is witnessed either by the absence of a root (capacity exhausted) or by
    ``|u'|`` failing to decrease as ``r -> 0``.
    """
    factor = factor or unit_factor()
    psi0 = float(manifold.psi(0.0))
    dpsi0 = float(manifold.psi_prime(0.0))
    if abs(psi0) > 1e-12 or abs(dpsi0 - 1.0) > 1e-6:
        raise PreconditionError("manifold does not have a smooth pole (psi(0)=0, psi'(0)=1)")
    radii = np.geomspace(1e-1, 1e-6, 11) if radii is None else np.asarray(radii, float)
    radii = np.sort(radii)[::-1]
    solver = _SlopeSolver(profile)
    witnesses, rates = [], {}
    all_singular = True
    m = manifold.m
    for Q in Q_probe:
        if Q == 0.0:
            continue
        slopes = []
        for r in radii:
            fpsi = float(factor.f(r)) * float(manifold.psi(r))
            sigma = solver.solve(abs(Q) / fpsi ** (m - 1))
            slope = None if math.isnan(sigma) else math.copysign(float(factor.f(r)) * sigma, Q)
            witnesses.append((float(Q), float(r), slope))
            slopes.append(slope)
        have = [(r, abs(s)) for r, s in zip(radii, slopes) if s is not None]
        if len(have) >= 2:
            lr = np.log([x[0] for x in have])
            ls = np.log([x[1] for x in have])
            rates[float(Q)] = float(np.polyfit(lr, ls, 1)[0])
        innermost = slopes[-1]
        if innermost is not None:
            grows = all(abs(s2) >= abs(s1) for s1, s2 in zip(slopes, slopes[1:]) if s1 and s2)
            if not grows or abs(innermost) <= 1e-6:
                all_singular = False
    if all_singular:
        note = "only constant radial solutions are smooth at the pole"
    else:
        note = "a nonzero flux produced a slope that does not blow up at the pole"
    return PoleClassification(all_singular, tuple(witnesses), rates, note)
