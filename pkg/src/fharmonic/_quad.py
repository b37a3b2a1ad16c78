"""Adaptive quadrature wrapper with an optional square-root edge substitution."""

from __future__ import annotations

import math
import warnings

from scipy.integrate import IntegrationWarning, quad

from .errors import NumericError


def integrate(fn, a: float, b: float, *, singular_left: bool = False, epsabs: float = 1e-12,
              epsrel: float = 1e-12, limit: int = 400) -> float:
    """``int_a^b fn(r) dr``; ``b`` may be ``inf``.

    With ``singular_left`` the panel touching ``a`` is rewritten through
    ``r = a + w^2`` so an ``(r - a)^{-1/2}`` blow-up becomes bounded.
    """
    if b == a:
        return 0.0
    if b < a:
        return -integrate(fn, b, a, epsabs=epsabs, epsrel=epsrel, limit=limit)
    if singular_left:
        split = b if math.isfinite(b) else a + max(1.0, abs(a))
        head = _quad(lambda w: 2.0 * w * fn(a + w * w), 0.0, math.sqrt(split - a),
                     epsabs, epsrel, limit)
        if split == b:
            return head
        return head + _quad(fn, split, b, epsabs, epsrel, limit)
    return _quad(fn, a, b, epsabs, epsrel, limit)


def _quad(fn, a, b, epsabs, epsrel, limit):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(fn, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)
        except IntegrationWarning:
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(fn, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)
            # quad is conservative; accept results within a loose multiple of the request
            if not math.isfinite(val) or err > 1e3 * max(epsabs, epsrel * abs(val), 1e-300):
                raise NumericError(
                    f"quadrature on [{a:.6g}, {b:.6g}] reached only {err:.3g} (value {val:.6g})")
    return val
