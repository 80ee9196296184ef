from __future__ import annotations

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2alex.alexander import (
    CLOSED_FORM_TORUS,
    THEOREM_PIPELINE,
    UNSUPPORTED,
    l2_alexander,
    l2_alexander_torus,
    simplified_delta_prime,
    torsion_from_alexander,
)
from l2alex.dsl import parse_presentation
from l2alex.errors import EngineUnsupported, IndexOutOfRange, NonpositiveValue, NotCoprime, ZeroParameter
from l2alex.knots import KnotSpec, knot_input, model_for, parse_knot_spec, phi_from_abelianization, torus_presentation

TORI = [(2, 3), (2, 5), (3, 4), (3, 5)]
MODULI = [0.25, 0.5, 2.0, 4.0]


def same_up_to_power(a: float, b: float, s: float) -> bool:
    """a = b·s^p for some integer p."""
    if s == 1:
        return math.isclose(a, b, rel_tol=1e-12)
    p = math.log(a / b) / math.log(s)
    return abs(p - round(p)) < 1e-9


@pytest.mark.parametrize("pq", TORI)
@pytest.mark.parametrize("s", MODULI)
@pytest.mark.parametrize("j", [1, 2])
def test_pipeline_equals_closed_form(pq, s, j):
    pres, phi, model = torus_presentation(*pq)
    res = l2_alexander(pres, phi, model, s, j=j)
    assert res.provenance == THEOREM_PIPELINE
    assert res.value == l2_alexander_torus(*pq, s).value
    assert res.rigorous and res.status == "Proven"


def test_torus_closed_form_examples():
    assert l2_alexander_torus(2, 3, 2).value == 4
    assert l2_alexander_torus(2, 5, 0.5).value == 1
    assert l2_alexander_torus(3, 5, 1).value == 1
    with pytest.raises(NotCoprime):
        l2_alexander_torus(4, 6, 2)
    with pytest.raises(ZeroParameter):
        l2_alexander_torus(2, 3, 0)


def test_trefoil_wirtinger():
    pres, phi, model = knot_input(KnotSpec.trefoil())
    low = l2_alexander(pres, phi, model, 0.3, engine="trace-series")
    assert low.value == 1.0 and low.provenance == THEOREM_PIPELINE
    high = l2_alexander(pres, phi, model, 3.0)
    assert high.value == pytest.approx(9.0)
    # the closed form covers the annulus the series cannot reach
    mid = l2_alexander(pres, phi, model, 0.8)
    assert mid.provenance == CLOSED_FORM_TORUS and mid.value == 1.0
    assert same_up_to_power(high.value, l2_alexander_torus(2, 3, 3.0).value, 3.0)


def test_unit_modulus_on_torus_knots():
    for pq in TORI:
        pres, phi, model = torus_presentation(*pq)
        assert l2_alexander(pres, phi, model, cmath.exp(0.7j)).value == 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TORI), st.floats(0.05, 6.0), st.floats(0.01, 2 * math.pi - 0.01))
def test_modulus_invariance(pq, s, theta):
    pres, phi, model = torus_presentation(*pq)
    t = s * cmath.exp(1j * theta)
    assert l2_alexander(pres, phi, model, t).value == l2_alexander(pres, phi, model, abs(t)).value


def test_presentation_input():
    pres = parse_presentation("<x,y | x^2 = y^3>")
    res = l2_alexander(pres, phi_from_abelianization(pres), model_for(pres), 1.0)
    assert res.value == 1


def test_unsupported_without_model():
    pres, phi, model = knot_input(parse_knot_spec("figure-eight"))
    res = l2_alexander(pres, phi, model, 0.5)
    assert res.provenance == UNSUPPORTED and res.value is None
    assert res.to_json()["status"] == UNSUPPORTED
    with pytest.raises(EngineUnsupported):
        l2_alexander(pres, phi, model, 0.5, engine="trace-series")


def test_bad_column():
    pres, phi, model = torus_presentation(2, 3)
    with pytest.raises(IndexOutOfRange):
        l2_alexander(pres, phi, model, 2.0, j=3)


def test_json_shape():
    pres, phi, model = torus_presentation(2, 3)
    out = l2_alexander(pres, phi, model, 2.0).to_json()
    assert set(out) >= {"knot", "presentation", "j", "t", "value", "method", "rigorous", "error_bound", "status"}
    assert out["t"] == {"re": 2.0, "im": 0.0}


def test_simplified_delta_prime():
    assert simplified_delta_prime(4.0, 1.0, 2.0) == pytest.approx(math.sqrt(2))
    assert simplified_delta_prime(1.0, 1.0, 1.0) == 1
    assert simplified_delta_prime(3.0, 5.0, cmath.exp(0.2j)) == pytest.approx(math.sqrt(15))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 20.0), st.integers(-4, 4))
def test_simplified_delta_prime_kills_representative(s, p):
    d_t = l2_alexander_torus(2, 5, s).value
    d_inv = l2_alexander_torus(2, 5, 1 / s).value
    base = simplified_delta_prime(d_t, d_inv, s)
    # Δ(t)·|t|^p pairs with Δ(t⁻¹)·|t|^{-p}
    shifted = simplified_delta_prime(d_t * s**p, d_inv * s ** (-p), s)
    assert shifted == pytest.approx(base, rel=1e-9)


def test_torsion_from_alexander():
    assert torsion_from_alexander(math.e**2, math.e) == pytest.approx(-1)
    assert torsion_from_alexander(1.0, 1.0) == 0
    for s in (0.3, 1.0, 4.0):
        assert torsion_from_alexander(max(s, 1.0), s) == pytest.approx(0, abs=1e-15)
    with pytest.raises(NonpositiveValue):
        torsion_from_alexander(0.0, 2.0)
