import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fharmonic import manifold as M
from fharmonic import profiles as P
from fharmonic.errors import DomainError
from fharmonic.radial import solve_flux
from fharmonic.stress import (annulus_identity_residual, boundary_flux, eigen_inequality_check,
                              interior_integral, sample, trace_bounds_check)

H = P.make_builtin("harmonic")
MG = P.make_builtin("minimal_graph")


def test_harmonic_boundary_flux_closed_form():
    # u' = 1/r^2, F - 2tF' = -u'^2: flux = 4 pi R * R^2 * (-1/R^4) = -4 pi / R
    rmap = solve_flux(H, M.euclidean(3), None, 2.0, (1.0, math.inf))
    for R in (1.0, 2.0, 7.5):
        assert boundary_flux(rmap, R) == pytest.approx(-4 * math.pi / R, rel=1e-14)


def test_harmonic_interior_integral_closed_form():
    # interior density is (m - 2) u'^2 r^2 = 1/r^2 for m = 3, Q = 2
    rmap = solve_flux(H, M.euclidean(3), None, 2.0, (1.0, math.inf))
    assert interior_integral(rmap, 1.0, 4.0) == pytest.approx(4 * math.pi * (1 - 0.25), rel=1e-13)


def test_sample_fields():
    rmap = solve_flux(H, M.euclidean(3), None, 2.0, (1.0, math.inf))
    s = sample(rmap, 2.0)
    t = 0.5 / 16
    assert s.F_val == pytest.approx(2 * t) and s.Fp_val == 2.0
    assert s.trace_term == pytest.approx(3 * 2 * t - 4 * t)
    assert s.boundary_density == pytest.approx(2.0 * (2 * t - 4 * t))


def test_domain_checks():
    rmap = solve_flux(MG, M.euclidean(3), None, 1.0)
    with pytest.raises(DomainError):
        boundary_flux(rmap, 0.9)
    with pytest.raises(DomainError):
        interior_integral(rmap, 0.5, 2.0)


CASES = [
    ("harmonic", M.euclidean(3), None, 2.0),
    ("harmonic", M.hyperbolic(3), None, 1.0),
    ("harmonic", M.euclidean(4), M.power_factor(-0.5), 1.5),
    ("minimal_graph", M.euclidean(3), None, 1.0),
    ("minimal_graph", M.euclidean(5), None, 2.0),
    ("minimal_graph", M.hyperbolic(4), M.linear_factor(1.0), 0.5),
    ("p3", M.euclidean(7), None, 1.0),
    ("p3", M.hyperbolic(3, 0.5), None, -1.0),
    ("alpha", M.euclidean(5), None, 1.0),
    ("alpha", M.euclidean(3), M.exp_factor(0.2), 0.3),
    ("exponential", M.euclidean(3), None, 0.5),
    ("exponential", M.hyperbolic(3), M.power_factor(0.5), -0.2),
]


def _profile(name):
    return {"p3": lambda: P.make_builtin("p_harmonic", p=3),
            "alpha": lambda: P.make_builtin("alpha_harmonic", alpha=1.5)}.get(
        name, lambda: P.make_builtin(name))()


@pytest.mark.parametrize("name,man,fac,Q", CASES)
def test_annulus_identity(name, man, fac, Q):
    rmap = solve_flux(_profile(name), man, fac, Q, (1.2, 12.0))
    R0 = max(rmap.r_lo, 1.2) * 1.05
    assert annulus_identity_residual(rmap, R0, 10.0) < 1e-10


@pytest.mark.parametrize("name,man,fac,Q", CASES)
def test_inequality_chain(name, man, fac, Q):
    rmap = solve_flux(_profile(name), man, fac, Q, (1.2, 12.0))
    r = np.geomspace(max(rmap.r_lo, 1.2) * 1.01, 12.0, 60)
    assert trace_bounds_check(rmap, r).all_passed
    assert eigen_inequality_check(rmap, r).all_passed


@pytest.mark.parametrize("p", [1.5, 3.0, 4.0])
def test_trace_chain_collapses_for_p_harmonic(p):
    rmap = solve_flux(P.make_builtin("p_harmonic", p=p), M.euclidean(5), None, 1.0, (0.5, 20.0))
    rep = trace_bounds_check(rmap, np.geomspace(0.5, 20, 40))
    scale = 1 + np.abs(rep.value)
    assert np.max(np.abs(rep.lower_margin) / scale) < 1e-12
    assert np.max(np.abs(rep.upper_margin) / scale) < 1e-12


@settings(max_examples=25, deadline=None)
@given(Q=st.floats(0.05, 3.0), R0=st.floats(1.0, 3.0), span=st.floats(1.1, 20.0),
       m=st.integers(3, 6))
def test_annulus_identity_property(Q, R0, span, m):
    rmap = solve_flux(MG, M.euclidean(m), None, Q, (0.1, math.inf))
    a = max(R0, rmap.r_lo * 1.001)
    assert annulus_identity_residual(rmap, a, a * span) < 1e-9
