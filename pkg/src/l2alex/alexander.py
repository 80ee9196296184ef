"""The L²-Alexander invariant: Δ(t) = det(r_{ψ_{|t|}(F_j)}) · max(|t|, 1)^{1 − φ(g_j)}."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd

from .errors import (
    EngineUnsupported,
    IndexOutOfRange,
    L2AlexError,
    NonpositiveValue,
    NotCoprime,
    ZeroParameter,
)
from .fk import PROVEN, DetEstimate, TraceSeriesConfig, fk_determinant
from .fox import delete_column, fox_matrix
from .groups import GroupModel, Presentation, RewrittenModel, TorusKnotGroup
from .ring import PhiGrading, RingMatrix, apply_psi

CLOSED_FORM_TORUS = "ClosedFormTorus"
THEOREM_PIPELINE = "TheoremPipeline"
UNSUPPORTED = "Unsupported"


@dataclass
class AlexResult:
    """One evaluation; ``value`` is a raw representative modulo t ↦ |t|^p."""

    t: complex
    value: float | None
    provenance: str
    estimate: DetEstimate | None = None
    j: int | None = None
    knot: str = ""
    presentation: str = ""
    note: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def rigorous(self) -> bool:
        return self.estimate is not None and self.estimate.rigorous

    @property
    def status(self) -> str:
        if self.provenance == UNSUPPORTED or self.estimate is None:
            return UNSUPPORTED
        return self.estimate.injectivity_status

    def to_json(self) -> dict:
        est = self.estimate
        bound = None if est is None or not math.isfinite(est.error_bound) else est.error_bound
        return {
            "knot": self.knot,
            "presentation": self.presentation,
            "j": self.j,
            "t": {"re": complex(self.t).real, "im": complex(self.t).imag},
            "value": self.value,
            "method": est.method if est else None,
            "provenance": self.provenance,
            "rigorous": self.rigorous,
            "error_bound": bound,
            "status": self.status,
            **({"note": self.note} if self.note else {}),
        }


def _torus_parameters(model: GroupModel | None) -> tuple[int, int] | None:
    while isinstance(model, RewrittenModel):
        model = model.base
    if isinstance(model, TorusKnotGroup):
        return model.p, model.q
    return None


def l2_alexander_torus(p: int, q: int, t: complex) -> AlexResult:
    """max(|t|, 1)^{(p−1)(q−1)}."""
    if p < 2 or q < 2 or gcd(p, q) != 1:
        raise NotCoprime(f"torus knot needs coprime p, q >= 2, got ({p}, {q})")
    if t == 0:
        raise ZeroParameter("t must be nonzero")
    value = max(float(abs(t)), 1.0) ** ((p - 1) * (q - 1))
    est = DetEstimate.exact(value, "ClosedFormMonomial" if value == 1 else "GeometricSum")
    return AlexResult(t, value, CLOSED_FORM_TORUS, est, knot=f"torus:{p},{q}")


def scaled_fox_matrix(pres: Presentation, phi: PhiGrading, model: GroupModel, j: int, s: float) -> RingMatrix:
    """ψ_s(F_j) over ``model``."""
    Fj = delete_column(fox_matrix(pres), j, len(pres.generators))
    return apply_psi(s, phi, Fj.push(model))


def l2_alexander(
    pres: Presentation,
    phi: PhiGrading,
    model: GroupModel | None,
    t: complex,
    j: int | None = None,
    engine: str = "auto",
    config: TraceSeriesConfig = TraceSeriesConfig(),
    radius: int = 6,
) -> AlexResult:
    """Evaluate through the presentation; only |t| enters."""
    if t == 0:
        raise ZeroParameter("t must be nonzero")
    pres.require_deficiency_one()
    k = len(pres.generators)
    j = k if j is None else j
    if not 1 <= j <= k:
        raise IndexOutOfRange(f"column {j} outside 1..{k}")
    s = float(abs(t))
    knot = str(pres.meta.get("knot", ""))
    common = dict(j=j, knot=knot, presentation=pres.format())
    torus = _torus_parameters(model)

    def fallback(reason: str) -> AlexResult:
        if torus is not None and engine in ("auto", "closed"):
            res = l2_alexander_torus(*torus, s)
            return AlexResult(t, res.value, CLOSED_FORM_TORUS, res.estimate, note=reason, **common)
        if engine != "auto":
            raise EngineUnsupported(reason)
        return AlexResult(t, None, UNSUPPORTED, None, note=reason, **common)

    if model is None:
        return fallback("no word-problem model registered for this presentation")
    A = scaled_fox_matrix(pres, phi, model, j, s)
    try:
        est = fk_determinant(A, engine, phi, config, radius)
    except L2AlexError as exc:
        return fallback(str(exc))
    factor = max(s, 1.0) ** (1 - phi[j - 1])
    value = est.value * factor
    shifted = DetEstimate(value, est.log_value + math.log(factor), est.method, est.rigorous,
                          est.error_bound, est.injectivity_status, est.diagnostics)
    return AlexResult(t, value, THEOREM_PIPELINE, shifted, **common)


def simplified_delta_prime(delta_t: float, delta_tinv: float, t: complex) -> float:
    """√(Δ(t)/max(|t|,1) · Δ(t⁻¹)/max(|t|⁻¹,1)); independent of the |t|^p representative."""
    s = abs(t)
    return math.sqrt(delta_t / max(s, 1.0) * delta_tinv / max(1.0 / s, 1.0))


def torsion_from_alexander(delta: float, t: complex) -> float:
    """Weighted-torsion representative at x = ln|t|: −ln Δ + ln max(|t|, 1)."""
    if not delta > 0:
        raise NonpositiveValue(f"Δ = {delta} must be positive")
    return -math.log(delta) + math.log(max(abs(t), 1.0))


__all__ = [
    "AlexResult",
    "CLOSED_FORM_TORUS",
    "PROVEN",
    "THEOREM_PIPELINE",
    "UNSUPPORTED",
    "l2_alexander",
    "l2_alexander_torus",
    "scaled_fox_matrix",
    "simplified_delta_prime",
    "torsion_from_alexander",
]
