"""Conformally Euclidean targets ``h = lambda(rho)^2 h0`` on R^n.

For a conformal metric the chart condition
``(dh_ab/dy^c) y^c + 2 h_ab >= h_ab`` (as matrices) reduces to the scalar
inequality ``2 rho lambda'(rho) / lambda(rho) + 1 >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DegenerateMetricError, DomainError, ParameterError

__all__ = [
    "TargetMetric",
    "FamilyCheck",
    "flat",
    "scalar",
    "power",
    "matrix_condition_margin",
    "check_family",
    "norm_sq",
    "to_target_coordinate",
    "radial_pullback_factor",
]


@dataclass(frozen=True)
class TargetMetric:
    n: int
    kind: str
    lam: Callable
    lam_prime: Callable
    k1: float = 1.0
    k: float = 1.0


class FamilyCheck(NamedTuple):
    holds: bool
    classical_regime: bool


def flat(n: int = 1) -> TargetMetric:
    one = lambda rho: np.ones_like(np.asarray(rho, dtype=float))
    zero = lambda rho: np.zeros_like(np.asarray(rho, dtype=float))
    return TargetMetric(n=n, kind="flat", lam=one, lam_prime=zero)


def scalar() -> TargetMetric:
    """The real line with its standard metric."""
    t = flat(1)
    return TargetMetric(n=1, kind="scalar", lam=t.lam, lam_prime=t.lam_prime)


def power(k1: float, k: float, n: int = 1) -> TargetMetric:
    """``lambda(rho) = k1 rho^(k-1)``."""
    if not k1 > 0:
        raise ParameterError("power family needs k1 > 0")
    if not k > 0:
        raise ParameterError("power family needs k > 0")

    def lam(rho):
        with np.errstate(divide="ignore"):
            return k1 * np.power(np.asarray(rho, dtype=float), k - 1.0)

    def lam_prime(rho):
        with np.errstate(divide="ignore", invalid="ignore"):
            return k1 * (k - 1.0) * np.power(np.asarray(rho, dtype=float), k - 2.0)

    return TargetMetric(n=n, kind="power", lam=lam, lam_prime=lam_prime, k1=k1, k=k)


def matrix_condition_margin(metric: TargetMetric, rho):
    """``2 rho lambda'/lambda + 1``; the chart condition holds iff this is >= 0."""
    arr = np.asarray(rho, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("matrix condition margin needs rho > 0")
    lam = np.asarray(metric.lam(arr), dtype=float)
    if np.any(lam == 0):
        raise DegenerateMetricError("conformal factor vanishes")
    if metric.kind == "power":
        out = np.full_like(arr, 2.0 * (metric.k - 1.0) + 1.0)
    else:
        out = 2.0 * arr * np.asarray(metric.lam_prime(arr), dtype=float) / lam + 1.0
    return float(out) if arr.ndim == 0 else out


def check_family(metric: TargetMetric) -> FamilyCheck:
    """Condition status of a power-family metric (margin ``2k - 1``)."""
    if metric.kind != "power":
        raise ParameterError("check_family applies to the power family only")
    return FamilyCheck(holds=2.0 * metric.k - 1.0 >= 0.0, classical_regime=metric.k >= 1.0)


def norm_sq(metric: TargetMetric, y):
    """``h_ab(y) y^a y^b = lambda(|y|)^2 |y|^2``.

    For ``n == 1`` any array is a batch of scalars; otherwise the last axis
    holds the components.
    """
    arr = np.asarray(y, dtype=float)
    rho = np.abs(arr) if metric.n == 1 else np.linalg.norm(arr, axis=-1)
    if metric.kind == "power":
        out = metric.k1 ** 2 * np.power(rho, 2.0 * metric.k)
    else:
        out = np.asarray(metric.lam(rho), dtype=float) ** 2 * rho ** 2
    return float(out) if np.ndim(out) == 0 else out


def to_target_coordinate(metric: TargetMetric, v):
    """Map a flat arclength coordinate v to the chart coordinate y on a ray.

    Along a ray ``dv = lambda(|y|) d|y|``; for the power family this inverts
    ``v = k1 |y|^k / k``.  Flat targets return v unchanged.
    """
    v = np.asarray(v, dtype=float)
    if metric.kind in ("flat", "scalar"):
        return v
    if metric.kind == "power":
        return np.sign(v) * np.power(metric.k * np.abs(v) / metric.k1, 1.0 / metric.k)
    raise ParameterError(f"no arclength inverse for target kind {metric.kind!r}")


def radial_pullback_factor(metric: TargetMetric, y) -> np.ndarray:
    """``lambda(|y|)^2`` (metric coefficient along the ray)."""
    rho = np.abs(np.asarray(y, dtype=float))
    if metric.kind == "power":
        with np.errstate(divide="ignore"):
            return metric.k1 ** 2 * np.power(rho, 2.0 * (metric.k - 1.0))
    return np.asarray(metric.lam(rho), dtype=float) ** 2

