import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fharmonic import profiles as P
from fharmonic.errors import ConfigurationError, DomainError, ParameterError

import oracles


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_p_harmonic_degrees(p):
    assert P.estimate_degrees(P.make_builtin("p_harmonic", p=p)) == pytest.approx((p / 2, p / 2), abs=1e-12)


def test_minimal_graph_degrees():
    d, l = P.estimate_degrees(P.make_builtin("minimal_graph"))
    assert d == pytest.approx(1.0, abs=1e-12)
    assert l == pytest.approx(0.5, abs=1e-12)


def test_exponential_is_infinite_degree():
    d, l = P.estimate_degrees(P.make_builtin("exponential"))
    assert math.isinf(d) and l == pytest.approx(1.0)
    assert not P.degree_gate(P.make_builtin("exponential"), 10)


def test_alpha_harmonic_degrees():
    prof = P.make_builtin("alpha_harmonic", alpha=1.5)
    assert P.estimate_degrees(prof) == pytest.approx((1.5, 1.0), abs=1e-9)


@pytest.mark.parametrize("t", [1e-3, 0.3, 2.0, 50.0])
def test_ratio_matches_mpmath(t):
    """Closed-form ratios against numerically differentiated F."""
    mg = P.make_builtin("minimal_graph")
    assert P.degree_ratio(mg, t) == pytest.approx(oracles.ratio(lambda s: mp.sqrt(1 + 2 * s) - 1, t), rel=1e-12)
    ah = P.make_builtin("alpha_harmonic", alpha=2.5)
    assert P.degree_ratio(ah, t) == pytest.approx(oracles.ratio(lambda s: (1 + 2 * s) ** 2.5 - 1, t), rel=1e-12)


def test_custom_profile_extrapolates_endpoints():
    c = P.custom(lambda t: np.sqrt(1 + 2 * t) - 1, lambda t: 1 / np.sqrt(1 + 2 * t))
    assert (c.d_F, c.l_F) == pytest.approx((1.0, 0.5), abs=1e-6)


def test_custom_declared_degrees_are_kept():
    c = P.custom(lambda t: 2 * t, lambda t: 2 + 0 * t, d_F=1.0, l_F=1.0, has_unique_continuation=True)
    assert c.degrees == (1.0, 1.0) and c.has_unique_continuation


def test_evaluate_rejects_negative_t():
    with pytest.raises(DomainError):
        P.evaluate(P.make_builtin("harmonic"), -1e-3)


def test_evaluate_scalar_io():
    F, Fp = P.evaluate(P.make_builtin("harmonic"), 0.75)
    assert (F, Fp) == (1.5, 2.0)


@pytest.mark.parametrize("grid", [np.geomspace(1e-6, 1e6, 10), np.geomspace(1e-2, 1e2, 128),
                                  np.linspace(1, -1, 100)])
def test_bad_degree_grids(grid):
    with pytest.raises(ConfigurationError):
        P.estimate_degrees(P.make_builtin("harmonic"), grid)


def test_unknown_profile_and_bad_params():
    with pytest.raises(ParameterError):
        P.make_builtin("nope")
    with pytest.raises(ParameterError):
        P.make_builtin("p_harmonic")
    with pytest.raises(ParameterError):
        P.make_builtin("alpha_harmonic", alpha=0.5)


def test_degree_gate():
    h = P.make_builtin("harmonic")
    assert not P.degree_gate(h, 2) and P.degree_gate(h, 3)
    p3 = P.make_builtin("p_harmonic", p=3)
    assert not P.degree_gate(p3, 3) and P.degree_gate(p3, 4)


def test_unique_continuation_flags():
    assert P.make_builtin("harmonic").has_unique_continuation
    assert P.make_builtin("minimal_graph").has_unique_continuation
    assert not P.make_builtin("p_harmonic", p=3).has_unique_continuation


def test_fprime_bounded_and_capacity():
    assert P.fprime_bounded(P.make_builtin("minimal_graph"))
    assert P.fprime_bounded(P.make_builtin("harmonic"))
    assert not P.fprime_bounded(P.make_builtin("p_harmonic", p=3))
    assert P.flux_capacity(P.make_builtin("minimal_graph")) == 1.0
    assert math.isinf(P.flux_capacity(P.make_builtin("harmonic")))


@settings(max_examples=60, deadline=None)
@given(p=st.floats(1.05, 6.0), t=st.floats(1e-8, 1e8))
def test_ratio_within_degrees_p(p, t):
    prof = P.make_builtin("p_harmonic", p=p)
    r = float(P.degree_ratio(prof, t))
    assert prof.l_F - 1e-12 <= r <= prof.d_F + 1e-12


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(["minimal_graph", "alpha_harmonic", "exponential"]),
       t=st.floats(1e-10, 300.0))
def test_ratio_within_degrees_builtin(name, t):
    prof = P.make_builtin(name, **({"alpha": 2.0} if name == "alpha_harmonic" else {}))
    r = float(P.degree_ratio(prof, t))
    assert prof.l_F * (1 - 1e-12) <= r <= prof.d_F * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(t=st.floats(0.0, 1e6))
def test_minimal_graph_F_stable(t):
    F, Fp = P.evaluate(P.make_builtin("minimal_graph"), t)
    x = mp.mpf(t)
    ref = float(2 * x / (mp.sqrt(1 + 2 * x) + 1))  # cancellation-free form
    assert F == pytest.approx(ref, rel=1e-14, abs=1e-300)
    assert 0 < Fp <= 1.0
