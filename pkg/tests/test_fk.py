from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from l2alex.errors import (
    EngineUnsupported,
    FiniteOrderElement,
    NoDominantFactoring,
    ZeroCoefficient,
    ZeroPolynomial,
)
from l2alex.fk import (
    choose_order,
    det_closed,
    det_cyclic,
    det_geometric_sum,
    det_mahler,
    det_monomial,
    det_trace_series,
    det_truncation,
    dominant_factoring,
    fk_determinant,
    laurent_to_ring,
    spectral_density_samples,
    tail_bound,
    trace_powers,
)
from l2alex.fox import LaurentPoly
from l2alex.groups import IDENTITY, FiniteGroup, FreeAbelianGroup, TorusKnotGroup, Word, trefoil_model
from l2alex.ring import PhiGrading, RingElement, RingMatrix, apply_eta
from oracles import mahler_jensen

Z = FreeAbelianGroup(["z"])
PHI_Z = PhiGrading((1,))
TREFOIL = trefoil_model()
PHI_T = PhiGrading((1, 1))


def zmat(*polys: LaurentPoly) -> RingMatrix:
    return RingMatrix(Z, [[laurent_to_ring(p, Z) for p in polys]])


def trefoil_entry(t: float) -> RingMatrix:
    a, b = Word.gen(0), Word.gen(1)
    e = RingElement.from_words(TREFOIL, [(IDENTITY, 1), (b, -t), (a * b, t * t)])
    return RingMatrix(TREFOIL, [[e]])


def circle_safe(p: LaurentPoly, gap: float = 1e-3) -> bool:
    c = p.numpy_coeffs()
    if len(c) <= 1:
        return bool(p)
    return all(abs(abs(r) - 1) > gap for r in np.roots(list(reversed(c))))


real_polys = st.lists(st.floats(-3, 3, allow_nan=False).map(lambda x: round(x, 3)), min_size=1, max_size=6).map(
    LaurentPoly.from_list
)


# ---------------------------------------------------------------- closed forms


def test_monomial_examples():
    a, b = Word.gen(0), Word.gen(1)
    assert det_monomial(1.5**2, TREFOIL.normalize(a * b)).value == 2.25
    assert det_monomial(1).value == 1
    assert det_monomial(-3).value == 3
    with pytest.raises(ZeroCoefficient):
        det_monomial(0)


def test_cyclic_examples():
    G = TorusKnotGroup(2, 3)
    x = G.normalize(Word.gen(0))
    assert det_cyclic(2.0**3, x, G).value == 8
    assert det_cyclic(1.0, x, G).value == 1
    assert det_cyclic(0.5, x, G).value == 1
    C4 = FiniteGroup.cyclic(4)
    with pytest.raises(FiniteOrderElement):
        det_cyclic(2.0, C4.word_of(1), C4)


def test_geometric_sum_examples():
    G = TorusKnotGroup(2, 3)
    y = G.normalize(Word.gen(1))
    t = 1.7
    assert det_geometric_sum(t**2, 3, y, G).value == pytest.approx(max(t, 1) ** (2 * 3 - 2))
    assert det_geometric_sum(5.0, 1).value == 1
    assert det_geometric_sum(cmath.exp(0.3j), 6).value == 1


def test_closed_recognition_of_torus_columns():
    G = TorusKnotGroup(3, 4)
    x, y = Word.gen(0), Word.gen(1)
    s = 2.0
    col2 = RingElement.from_words(G, [(x**k, s ** (4 * k)) for k in range(3)])
    est = det_closed(RingMatrix(G, [[col2]]))
    assert est is not None and est.method == "GeometricSum" and est.value == s ** 8
    # −x^3(y^-1 + … + y^-4), scaled
    col1 = RingElement.from_words(G, [(x**3 * y ** (-k), -(s ** (12 - 3 * k))) for k in range(1, 5)])
    est = det_closed(RingMatrix(G, [[col1]]))
    assert est is not None and est.value == s ** 9


def test_closed_triangular_and_permutation():
    G = TorusKnotGroup(2, 3)
    x = RingElement.monomial(G, Word.gen(0))
    one = RingElement.one(G)
    zero = RingElement.zero(G)
    A = RingMatrix(G, [[one - x.scale(3), x], [zero, x.scale(-2)]])
    assert det_closed(A).value == 6
    P = RingMatrix(G, [[zero, x.scale(2)], [x.scale(0.25), zero]])
    assert det_closed(P).value == 0.5
    assert det_closed(RingMatrix(G, [[one + x + x * x * x]])) is None


# ---------------------------------------------------------------- Mahler


@pytest.mark.parametrize(
    "poly, expected, rigorous",
    [
        (LaurentPoly({1: 1, 0: -2}), 2.0, True),
        (LaurentPoly({1: 1, 0: -1}), 1.0, False),
        (LaurentPoly({2: 1, 1: -1, 0: 1}), 1.0, False),
        (LaurentPoly({0: 7}), 7.0, True),
    ],
)
def test_mahler_examples(poly, expected, rigorous):
    est = det_mahler(poly)
    assert est.value == pytest.approx(expected, abs=1e-9)
    assert est.rigorous is rigorous
    assert est.method == "MahlerQuadrature"


def test_mahler_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        det_mahler(LaurentPoly())


@settings(max_examples=100, deadline=None)
@given(real_polys)
def test_mahler_matches_jensen(p):
    assume(p and circle_safe(p))
    est = det_mahler(p)
    assert est.rigorous
    assert abs(est.log_value - mahler_jensen(p.numpy_coeffs())) <= est.error_bound + 1e-9


@settings(max_examples=60, deadline=None)
@given(real_polys, real_polys)
def test_mahler_multiplicative(p, q):
    assume(p and q and circle_safe(p) and circle_safe(q))
    lhs = det_mahler(p * q).log_value
    assert abs(lhs - det_mahler(p).log_value - det_mahler(q).log_value) < 1e-8


@settings(max_examples=60, deadline=None)
@given(real_polys)
def test_mahler_adjoint_invariance(p):
    assume(p and circle_safe(p))
    assert det_mahler(p).log_value == pytest.approx(det_mahler(p.conjugate_reversed()).log_value, abs=1e-12)


def test_cyclic_agrees_with_mahler():
    for c in (0.3, 1.0, 2.5):
        est = det_mahler(LaurentPoly({1: c, 0: -1}))
        assert abs(est.log_value - det_cyclic(c).log_value) <= est.error_bound + 1e-9


def test_spectral_density_monotone():
    s = spectral_density_samples(LaurentPoly({1: 1, 0: -2}))
    assert s.is_monotone()
    assert s.grid[-1][1] == 1.0
    assert s.grid[0][1] == 0.0


# ---------------------------------------------------------------- trace series


def test_tail_bound_and_order():
    assert tail_bound(0.0, 3) == 0.0
    K = choose_order(0.5, 1e-8)
    assert tail_bound(0.5, K) <= 1e-8 < tail_bound(0.5, K - 1)


@pytest.mark.parametrize("t", [0.2, 0.3, 0.5])
def test_trefoil_trace_series_below_one(t):
    est = det_trace_series(trefoil_entry(t), PHI_T)
    assert est.value == 1.0
    assert all(tr == 0 for tr in est.diagnostics["traces"])
    assert est.diagnostics["grading_vanishing"]
    assert est.diagnostics["nu"] == pytest.approx(t + t * t)


@pytest.mark.parametrize("t", [2.0, 3.0, 5.0])
def test_trefoil_trace_series_above_one(t):
    est = det_trace_series(trefoil_entry(t), PHI_T)
    assert est.value == pytest.approx(t * t, rel=1e-12)
    assert est.rigorous


def test_trefoil_near_unit_circle_refused():
    with pytest.raises(NoDominantFactoring):
        det_trace_series(trefoil_entry(0.8), PHI_T)


def test_trace_series_examples_on_z():
    est = det_trace_series(zmat(LaurentPoly({0: 1, 1: -0.5})), PHI_Z)
    assert est.value == pytest.approx(1.0, abs=1e-12)
    two = RingMatrix(Z, [[RingElement.one(Z, 2)]])
    est = det_trace_series(two, PHI_Z)
    assert est.value == 2 and est.error_bound == 0


def test_pruning_does_not_change_traces():
    p = LaurentPoly({-1: 0.2, 0: 1, 1: -0.3, 2: 0.1})
    W = dominant_factoring(zmat(p)).W
    assert trace_powers(W, 12, PHI_Z) == pytest.approx(trace_powers(W, 12, None), abs=1e-15)


def test_trace_series_matrix_case():
    # diag-dominant 2×2 over ℤ: compare with Mahler of the symbol determinant
    one = RingElement.one(Z)
    z = RingElement.monomial(Z, Word.gen(0))
    A = RingMatrix(Z, [[one.scale(3) + z, z.scale(0.5)], [one.scale(-0.4), z.scale(2) - one.scale(0.3)]])
    ts = det_trace_series(A, PHI_Z)
    mh = fk_determinant(A, "mahler")
    assert abs(ts.log_value - mh.log_value) <= ts.error_bound + mh.error_bound + 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 2 * math.pi), st.sampled_from([0.2, 0.3, 0.45]))
def test_eta_invariance_of_trace_series(theta, t):
    c = cmath.exp(1j * theta)
    A = trefoil_entry(t)
    base = det_trace_series(A, PHI_T)
    twisted = det_trace_series(apply_eta(c, PHI_T, A), PHI_T)
    assert abs(base.log_value - twisted.log_value) < 1e-10


# ---------------------------------------------------------------- truncation


def test_truncation_examples():
    res = det_truncation(zmat(LaurentPoly({1: 1, 0: -2})), 64)
    assert res.estimate.value == pytest.approx(2.002231337376499, rel=1e-9)
    assert not res.estimate.rigorous
    assert abs(res.estimate.value - 2) / 2 < 0.05
    ident = det_truncation(RingMatrix(TREFOIL, [[RingElement.one(TREFOIL)]]), 3)
    assert ident.estimate.value == 1.0
    tref = det_truncation(trefoil_entry(0.5), 6)
    assert abs(tref.estimate.value - 1) < 0.1


# ---------------------------------------------------------------- dispatch


def test_dispatch():
    A = zmat(LaurentPoly({1: 1, 0: -2}))
    assert fk_determinant(A).method == "ClosedFormCyclic"
    assert fk_determinant(A, "mahler").value == pytest.approx(2)
    with pytest.raises(EngineUnsupported):
        fk_determinant(trefoil_entry(0.3), "mahler")
    with pytest.raises(EngineUnsupported):
        fk_determinant(A, "nonsense")
    # near-circle polynomial: only Mahler applies
    B = zmat(LaurentPoly({0: 1, 1: -1, 2: 1}) * LaurentPoly({0: 3, 1: 1}))
    assert fk_determinant(B).method == "MahlerQuadrature"
