"""Fuglede–Kadison determinants of right-multiplication operators.

Engines: closed forms (monomial, c·g − 1, geometric sums, triangular and
permutation-monomial matrices), Mahler quadrature for the infinite cyclic
group, a trace power series with a certified tail, and a Cayley-ball
truncation heuristic.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import (
    BallTooLarge,
    EngineUnsupported,
    FiniteOrderElement,
    ModelUnsupported,
    NoDominantFactoring,
    ZeroCoefficient,
    ZeroPolynomial,
)
from .fox import LaurentPoly, laurent_det
from .groups import IDENTITY, FreeAbelianGroup, GroupModel, Word, cayley_ball
from .ring import PhiGrading, RingElement, RingMatrix, matrix_l1_norm

PROVEN = "Proven"
ASSUMED = "AssumedHypothesisBullet"


@dataclass
class DetEstimate:
    value: float
    log_value: float
    method: str
    rigorous: bool
    error_bound: float
    injectivity_status: str = PROVEN
    diagnostics: dict = field(default_factory=dict, compare=False)

    @classmethod
    def exact(cls, value: float, method: str, status: str = PROVEN, **diag) -> DetEstimate:
        log_value = math.log(value) if value > 0 else -math.inf
        return cls(value, log_value, method, True, 0.0, status, dict(diag))

    @classmethod
    def from_log(cls, log_value: float, method: str, rigorous: bool, error_bound: float,
                 status: str = PROVEN, **diag) -> DetEstimate:
        return cls(math.exp(log_value), log_value, method, rigorous, error_bound, status, dict(diag))

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "log_value": self.log_value,
            "method": self.method,
            "rigorous": self.rigorous,
            "error_bound": self.error_bound if math.isfinite(self.error_bound) else None,
            "injectivity_status": self.injectivity_status,
        }


# ---------------------------------------------------------------- closed forms


def det_monomial(c: complex, w: Word | None = None) -> DetEstimate:
    """det(r_{c·w}) = |c|: r_w is unitary."""
    if c == 0:
        raise ZeroCoefficient("monomial with zero coefficient")
    return DetEstimate.exact(abs(c), "ClosedFormMonomial")


def det_permutation_monomial(coeffs: Sequence[complex]) -> DetEstimate:
    if any(c == 0 for c in coeffs):
        raise ZeroCoefficient("permutation-monomial matrix with a zero entry")
    return DetEstimate.exact(math.prod(abs(c) for c in coeffs), "ClosedFormMonomial")


def _require_infinite(model: GroupModel | None, g: Word | None) -> None:
    if model is None or g is None:
        return
    if not model.has_infinite_order(g):
        raise FiniteOrderElement(f"{g.format(model.nf_names)} has finite order")


def det_cyclic(c: complex, g: Word | None = None, model: GroupModel | None = None) -> DetEstimate:
    """det(r_{c·g − 1}) = max(|c|, 1) for g of infinite order."""
    _require_infinite(model, g)
    return DetEstimate.exact(max(abs(c), 1.0), "ClosedFormCyclic")


def det_geometric_sum(c: complex, n: int, g: Word | None = None, model: GroupModel | None = None) -> DetEstimate:
    """det(r_{1 + cg + … + (cg)^{n-1}}) = max(|c|, 1)^{n-1}."""
    if n < 1:
        raise ValueError("n must be positive")
    _require_infinite(model, g)
    return DetEstimate.exact(max(abs(c), 1.0) ** (n - 1), "GeometricSum")


@dataclass(frozen=True)
class _GeomForm:
    unit: complex
    ratio: complex
    g: Word
    n: int


def _recognize_geometric(a: RingElement) -> _GeomForm | None:
    """Write ``a`` as u·(1 + cg + … + (cg)^{n-1}) with u a monomial, if possible."""
    model = a.model
    n = len(a.terms)
    if n == 0:
        return None
    for u, cu in a.terms.items():
        uinv = model.invert(u)
        f = {model.multiply(uinv, w): c / cu for w, c in a.terms.items()}
        if n == 1:
            return _GeomForm(cu, 0j, IDENTITY, 1)
        for g, c in f.items():
            if g.is_identity():
                continue
            cur, coef, ok = IDENTITY, 1 + 0j, True
            for _ in range(1, n):
                cur = model.multiply(cur, g)
                coef *= c
                got = f.get(cur)
                if got is None or abs(got - coef) > 1e-12 * max(1.0, abs(coef)):
                    ok = False
                    break
            if ok:
                return _GeomForm(cu, c, g, n)
    return None


def det_closed_entry(a: RingElement) -> DetEstimate | None:
    """Closed form for a single group-ring element, or ``None``."""
    if not a:
        return None
    form = _recognize_geometric(a)
    if form is None:
        return None
    if form.n == 1:
        return det_monomial(form.unit)
    if not a.model.has_infinite_order(form.g):
        return None
    base = det_cyclic(form.ratio) if form.n == 2 else det_geometric_sum(form.ratio, form.n)
    value = abs(form.unit) * base.value
    return DetEstimate.exact(value, base.method, ratio=abs(form.ratio), n=form.n)


def det_closed(A: RingMatrix) -> DetEstimate | None:
    """Closed forms for permutation-monomial, triangular and 1×1 matrices."""
    n = A.rows
    if n != A.cols:
        return None
    if n == 0:
        return DetEstimate.exact(1.0, "ClosedFormMonomial")
    perm = _permutation_support(A)
    if perm is not None:
        coeffs = [next(iter(A[i, perm[i]].terms.values())) for i in range(n)]
        if all(len(A[i, perm[i]]) == 1 for i in range(n)):
            return det_permutation_monomial(coeffs)
    upper = all(not A[i, j] for i in range(n) for j in range(i))
    lower = all(not A[i, j] for i in range(n) for j in range(i + 1, n))
    if not (upper or lower):
        return None
    parts = [det_closed_entry(A[i, i]) for i in range(n)]
    if any(p is None for p in parts):
        return None
    if n == 1:
        return parts[0]
    methods = {p.method for p in parts}
    method = methods.pop() if len(methods) == 1 else "GeometricSum"
    return DetEstimate.exact(math.prod(p.value for p in parts), method)


def _permutation_support(A: RingMatrix) -> list[int] | None:
    n = A.rows
    perm = []
    for i in range(n):
        nz = [j for j in range(n) if A[i, j]]
        if len(nz) != 1:
            return None
        perm.append(nz[0])
    return perm if len(set(perm)) == n else None


# ---------------------------------------------------------------- Mahler (ℤ)


def _roots(p: LaurentPoly) -> np.ndarray:
    coeffs = p.numpy_coeffs()
    if len(coeffs) <= 1:
        return np.array([], dtype=complex)
    return np.roots(list(reversed(coeffs)))


def det_mahler(p: LaurentPoly, tol: float = 1e-13, circle_gap: float = 1e-6) -> DetEstimate:
    """det of r_{p(z)} on l²(ℤ): the Mahler measure, by quadrature over the circle.

    When every root is farther than ``circle_gap`` from the circle the
    trapezoid rule converges geometrically and the aliasing error is bounded
    by Σ ρᵢᴺ / (N(1 − ρᵢᴺ)) with ρᵢ = min(|rᵢ|, 1/|rᵢ|); N doubles until the
    bound is below ``tol``.  Otherwise an adaptive rule with breakpoints at
    the root angles is used and the result is flagged non-rigorous.
    """
    if not p:
        raise ZeroPolynomial("zero polynomial")
    roots = _roots(p)
    coeffs = np.array(p.numpy_coeffs())
    degree = len(coeffs) - 1

    def log_mod(theta):
        z = np.exp(1j * np.asarray(theta))
        return np.log(np.abs(np.polyval(coeffs[::-1], z)))

    gaps = [abs(abs(r) - 1.0) for r in roots]
    if all(g > circle_gap for g in gaps):
        rhos = [min(abs(r), 1.0 / abs(r)) for r in roots]
        n = max(8, 2 * degree + 2)
        while True:
            bound = math.fsum(rho**n / (n * (1 - rho**n)) for rho in rhos)
            if bound <= tol or n >= 1 << 22:
                break
            n *= 2
        theta = 2 * math.pi * np.arange(n) / n
        val = math.fsum(log_mod(theta)) / n
        # roundoff in summing n logs
        bound += 4 * n * np.finfo(float).eps * max(1.0, float(np.max(np.abs(log_mod(theta)))))
        return DetEstimate.from_log(val, "MahlerQuadrature", True, float(bound), PROVEN, nodes=n)

    angles = sorted({float(cmath.phase(r)) % (2 * math.pi) for r, g in zip(roots, gaps) if g <= circle_gap})
    pts = [a for a in angles if 0 < a < 2 * math.pi]
    val, err = integrate.quad(lambda th: float(log_mod(th)), 0.0, 2 * math.pi, points=pts or None, limit=500)
    return DetEstimate.from_log(val / (2 * math.pi), "MahlerQuadrature", False, err / (2 * math.pi), PROVEN,
                                near_circle_roots=len(pts) or len(angles))


@dataclass(frozen=True)
class SpectralDensitySamples:
    grid: tuple[tuple[float, float], ...]

    def is_monotone(self) -> bool:
        return all(a[1] <= b[1] for a, b in zip(self.grid, self.grid[1:]))


def spectral_density_samples(p: LaurentPoly, n_theta: int = 4096, n_lambda: int = 64) -> SpectralDensitySamples:
    """F(λ) = measure of {θ : |p(e^{iθ})|² ≤ λ}, sampled; the spectral density of r_p^* r_p on l²(ℤ)."""
    if not p:
        raise ZeroPolynomial("zero polynomial")
    coeffs = np.array(p.numpy_coeffs())
    z = np.exp(2j * np.pi * (np.arange(n_theta) + 0.5) / n_theta)
    vals = np.sort(np.abs(np.polyval(coeffs[::-1], z)) ** 2)
    lams = np.linspace(0.0, float(vals[-1]), n_lambda)
    counts = np.searchsorted(vals, lams, side="right") / n_theta
    return SpectralDensitySamples(tuple((float(l), float(c)) for l, c in zip(lams, counts)))


def ring_to_laurent(a: RingElement) -> LaurentPoly:
    """Element of ℂ[ℤ] (model FreeAbelian with one letter) as a Laurent polynomial."""
    if not (isinstance(a.model, FreeAbelianGroup) and len(a.model.names) == 1):
        raise ModelUnsupported("Mahler engine needs the infinite cyclic group")
    return LaurentPoly((sum(e for _, e in w.syllables), c) for w, c in a.terms.items())


def laurent_to_ring(p: LaurentPoly, model: FreeAbelianGroup) -> RingElement:
    return RingElement(model, [(Word.gen(0, k) if k else IDENTITY, c) for k, c in p.coeffs])


def det_mahler_matrix(A: RingMatrix) -> DetEstimate:
    """Square matrices over ℂ[ℤ]: Mahler measure of the symbol determinant."""
    if A.rows != A.cols:
        raise ModelUnsupported("square matrix required")
    polys = [[ring_to_laurent(e) for e in row] for row in A.entries]
    return det_mahler(laurent_det(polys))


# ---------------------------------------------------------------- trace series


@dataclass(frozen=True)
class TraceSeriesConfig:
    max_order: int = 400
    tol: float = 1e-10
    max_terms: int = 200_000


@dataclass
class Factoring:
    perm: list[int]          # row i uses the monomial in column perm[i]
    units: list[tuple[Word, complex]]
    W: RingMatrix
    nu: float


def _leading(a: RingElement) -> tuple[Word, complex] | None:
    if not a:
        return None
    return max(a.terms.items(), key=lambda kv: (abs(kv[1]), kv[0] == IDENTITY))


def dominant_factoring(A: RingMatrix) -> Factoring:
    """A = M(I − W) with M permutation-monomial, choosing the permutation that minimizes ‖W‖₁.

    Row σ(i) of W is e_{σ(i)} − m_i⁻¹·A_i, whose l¹ norm is ‖A_i‖₁/|c_i| − 1,
    so the best permutation solves a bottleneck assignment on the ratios
    |c_ij| / ‖A_i‖₁ (threshold search plus bipartite matching).
    """
    n = A.rows
    if n != A.cols:
        raise NoDominantFactoring("square matrix required")
    if n == 0:
        return Factoring([], [], A, 0.0)
    row_norm = [math.fsum(abs(c) for e in row for c in e.terms.values()) for row in A.entries]
    if any(r == 0 for r in row_norm):
        raise NoDominantFactoring("zero row")
    lead = [[_leading(A[i, j]) for j in range(n)] for i in range(n)]
    ratio = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if lead[i][j] is not None:
                ratio[i, j] = abs(lead[i][j][1]) / row_norm[i]
    best = None
    for thr in sorted({float(r) for r in ratio.ravel() if r > 0}, reverse=True):
        match = maximum_bipartite_matching(csr_matrix(ratio >= thr), perm_type="column")
        if np.all(match >= 0):
            best = [int(j) for j in match]
            break
    if best is None:
        raise NoDominantFactoring("matrix has no nonzero transversal")
    nu = max(1.0 / ratio[i, best[i]] - 1.0 for i in range(n))
    if nu >= 1.0:
        raise NoDominantFactoring(f"best factoring has ‖W‖₁ = {nu:.6g} ≥ 1")
    model = A.model
    units = [lead[i][best[i]] for i in range(n)]
    rows: list[list[RingElement] | None] = [None] * n
    for i in range(n):
        w, c = units[i]
        minv = RingElement._raw(model, {model.invert(w): 1 / c})
        s = best[i]
        rows[s] = [
            (RingElement.one(model) if j == s else RingElement.zero(model)) - minv * A[i, j]
            for j in range(n)
        ]
    W = RingMatrix(model, rows)
    return Factoring(best, units, W, matrix_l1_norm(W))


def tail_bound(nu: float, K: int, n: int = 1) -> float:
    """Σ_{k>K} n·ν^k / k ≤ n·ν^{K+1} / ((K+1)(1−ν))."""
    if nu == 0:
        return 0.0
    return n * nu ** (K + 1) / ((K + 1) * (1 - nu))


def choose_order(nu: float, tol: float, n: int = 1, max_order: int = 400) -> int:
    K = 1
    while K < max_order and tail_bound(nu, K, n) > tol:
        K += 1
    return K


def _letter_weights(phi: PhiGrading | None, model: GroupModel) -> tuple[int, ...] | None:
    if phi is None:
        return None
    try:
        return phi.letter_weights(model)
    except Exception:  # grading not expressible on this model: no pruning
        return None


def _weight(lw: tuple[int, ...], w: Word) -> int:
    return sum(lw[g] * e for g, e in w.syllables)


def _reachable(w: int, steps: int, lo: int, hi: int) -> bool:
    """Can a sum of ``steps`` or fewer weights in [lo, hi] bring ``w`` to 0?"""
    if w == 0:
        return True
    if w > 0:
        return lo < 0 and -(-w // -lo) <= steps
    return hi > 0 and -(-(-w) // hi) <= steps


def trace_powers(W: RingMatrix, K: int, phi: PhiGrading | None = None, max_terms: int = 200_000) -> list[complex]:
    """trace(W^k) for k = 1..K.

    With a grading, terms of partial products whose weight can no longer
    return to 0 within the remaining steps are dropped; they never touch the
    identity coefficient, so the traces are unchanged and come out exactly 0
    when no return is possible.
    """
    model, n = W.model, W.rows
    lw = _letter_weights(phi, model)
    if lw is not None:
        ws = [_weight(lw, w) for row in W.entries for e in row for w in e.terms]
        lo, hi = (min(ws), max(ws)) if ws else (0, 0)
    mult = model.multiply
    # P = W^k as dict entries: P[i][j] : {word: coef}
    W_terms = [[dict(e.terms) for e in row] for row in W.entries]
    P = [[dict(e) for e in row] for row in W_terms]
    traces: list[complex] = []
    for k in range(1, K + 1):
        if k > 1:
            Q = [[{} for _ in range(n)] for _ in range(n)]
            total = 0
            for i in range(n):
                for m in range(n):
                    left = P[i][m]
                    if not left:
                        continue
                    for j in range(n):
                        right = W_terms[m][j]
                        if not right:
                            continue
                        acc = Q[i][j]
                        for u, a in left.items():
                            for v, b in right.items():
                                x = mult(u, v)
                                acc[x] = acc.get(x, 0) + a * b
                        total += len(acc)
            if total > max_terms:
                raise EngineUnsupported(f"trace series exceeded {max_terms} terms at order {k}")
            P = Q
        if lw is not None:
            steps = K - k
            for i in range(n):
                for j in range(n):
                    P[i][j] = {w: c for w, c in P[i][j].items() if c != 0 and _reachable(_weight(lw, w), steps, lo, hi)}
        traces.append(sum((P[i][i].get(IDENTITY, 0j) for i in range(n)), 0j))
    return traces


def det_trace_series(
    A: RingMatrix,
    phi: PhiGrading | None = None,
    config: TraceSeriesConfig = TraceSeriesConfig(),
    order: int | None = None,
) -> DetEstimate:
    """log det A = Σ ln|cᵢ| − Re Σ_{k≤K} trace(Wᵏ)/k, for A = M(I − W), ‖W‖₁ < 1."""
    if not hasattr(A.model, "multiply"):
        raise ModelUnsupported("no normal form available")
    fac = dominant_factoring(A)
    n = A.rows
    K = order if order is not None else choose_order(fac.nu, config.tol, max(n, 1), config.max_order)
    traces = trace_powers(fac.W, K, phi, config.max_terms) if n else []
    log_m = math.fsum(math.log(abs(c)) for _, c in fac.units)
    series = math.fsum((tr / k).real for k, tr in enumerate(traces, start=1))
    bound = tail_bound(fac.nu, K, max(n, 1))
    grading_zero = False
    lw = _letter_weights(phi, A.model)
    if lw is not None:
        ws = [_weight(lw, w) for row in fac.W.entries for e in row for w in e.terms]
        grading_zero = bool(ws) and (min(ws) > 0 or max(ws) < 0)
    return DetEstimate.from_log(
        log_m - series, "TraceSeries", True, bound, PROVEN,
        order=K, nu=fac.nu, traces=traces, grading_vanishing=grading_zero,
    )


# ---------------------------------------------------------------- truncation


@dataclass(frozen=True)
class TruncationResult:
    estimate: DetEstimate
    previous: float  # value at radius R − 1


def _truncated_log_det(A: RingMatrix, ball: list[Word], eps: float) -> float:
    model, k = A.model, A.rows
    index_in = {w: i for i, w in enumerate(ball)}
    image: dict[Word, int] = {}
    entries: list[tuple[int, int, complex]] = []
    for g in ball:
        gi = index_in[g]
        for r in range(k):
            for s in range(A.cols):
                for h, c in A[r, s].terms.items():
                    x = model.multiply(g, h)
                    col = image.setdefault(x, len(image))
                    entries.append((r * len(ball) + gi, (s, col), c))
    cols = {key: i for i, key in enumerate(sorted({c for _, c, _ in entries}))}
    mat = np.zeros((k * len(ball), max(len(cols), 1)), dtype=complex)
    for r, c, v in entries:
        mat[r, cols[c]] += v
    sv = np.linalg.svd(mat, compute_uv=False)
    sv = np.concatenate([sv, np.zeros(max(0, mat.shape[0] - len(sv)))])
    return float(np.mean(np.log(np.maximum(sv, eps))))


def det_truncation(A: RingMatrix, radius: int, eps: float = 1e-9, cap: int = 20000) -> TruncationResult:
    """exp(mean ln max(σ, ε)) over the singular values of r_A compressed to the Cayley ball.

    The domain is span(B_R)^k; the codomain is everything the ball is mapped to,
    so only the inner boundary is cut.  Heuristic: never rigorous.
    """
    if A.rows != A.cols:
        raise ModelUnsupported("square matrix required")
    try:
        ball = cayley_ball(A.model, radius, cap)
        prev_ball = cayley_ball(A.model, max(radius - 1, 0), cap)
    except NotImplementedError as exc:
        raise ModelUnsupported("model cannot enumerate balls") from exc
    if len(ball) * max(A.rows, 1) > cap:
        raise BallTooLarge(f"{len(ball)} ball elements times {A.rows} exceeds {cap}")
    lv = _truncated_log_det(A, ball, eps)
    lp = _truncated_log_det(A, prev_ball, eps)
    est = DetEstimate(math.exp(lv), lv, "TruncationHeuristic", False, math.inf, ASSUMED,
                      {"radius": radius, "ball_size": len(ball), "previous_value": math.exp(lp)})
    return TruncationResult(est, math.exp(lp))


# ---------------------------------------------------------------- dispatch

ENGINES = ("auto", "closed", "mahler", "trace-series", "truncation")


def is_cyclic_model(model: GroupModel) -> bool:
    return isinstance(model, FreeAbelianGroup) and len(model.names) == 1


def fk_determinant(
    A: RingMatrix,
    engine: str = "auto",
    phi: PhiGrading | None = None,
    config: TraceSeriesConfig = TraceSeriesConfig(),
    radius: int = 6,
) -> DetEstimate:
    """Run one engine, or try closed forms, the trace series and Mahler in turn."""
    if engine not in ENGINES:
        raise EngineUnsupported(f"unknown engine {engine!r}")
    if engine == "closed":
        est = det_closed(A)
        if est is None:
            raise EngineUnsupported("no closed form recognized")
        return est
    if engine == "mahler":
        if not is_cyclic_model(A.model):
            raise EngineUnsupported("Mahler engine needs the infinite cyclic group")
        return det_mahler_matrix(A)
    if engine == "trace-series":
        return det_trace_series(A, phi, config)
    if engine == "truncation":
        return det_truncation(A, radius).estimate
    est = det_closed(A)
    if est is not None:
        return est
    try:
        return det_trace_series(A, phi, config)
    except (NoDominantFactoring, EngineUnsupported):
        pass
    if is_cyclic_model(A.model):
        return det_mahler_matrix(A)
    raise EngineUnsupported("no determinant engine applies")
