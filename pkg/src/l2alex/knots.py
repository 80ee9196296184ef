"""Knot inputs: presets, crossing tables, torus-knot presentations, φ by abelianization."""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import MalformedDiagram, NotCoprime, NotHomologyCircle
from .groups import GroupModel, Presentation, TorusKnotGroup, Word, trefoil_model
from .ring import PhiGrading


@dataclass(frozen=True)
class Crossing:
    """Arc ``inc`` passes under ``over`` and continues as ``out``.

    Relation: out = over^sign · inc · over^{-sign}.
    """

    over: int
    inc: int
    out: int
    sign: int

    def relator(self) -> Word:
        o = Word.gen(self.over, self.sign)
        return Word.gen(self.out) * (o * Word.gen(self.inc) * o.inverse()).inverse()


@dataclass(frozen=True)
class KnotSpec:
    kind: str  # "torus" | "trefoil" | "table"
    p: int = 0
    q: int = 0
    crossings: tuple[Crossing, ...] = ()
    arcs: int = 0
    name: str = ""

    @classmethod
    def torus(cls, p: int, q: int) -> KnotSpec:
        if p < 2 or q < 2 or gcd(p, q) != 1:
            raise NotCoprime(f"torus knot needs coprime p, q >= 2, got ({p}, {q})")
        return cls("torus", p=p, q=q, name=f"torus:{p},{q}")

    @classmethod
    def trefoil(cls) -> KnotSpec:
        return cls("trefoil", name="trefoil")

    @classmethod
    def table(cls, crossings: Sequence[Crossing], arcs: int | None = None, name: str = "table") -> KnotSpec:
        crossings = tuple(crossings)
        n = arcs if arcs is not None else max(
            [max(c.over, c.inc, c.out) + 1 for c in crossings], default=1
        )
        _validate_table(crossings, n)
        return cls("table", crossings=crossings, arcs=n, name=name)


def _validate_table(crossings: Sequence[Crossing], arcs: int) -> None:
    if not crossings:
        if arcs != 1:
            raise MalformedDiagram("a crossing-free diagram has exactly one arc")
        return
    if len(crossings) != arcs:
        raise MalformedDiagram(f"{len(crossings)} crossings but {arcs} arcs")
    outs = sorted(c.out for c in crossings)
    ins = sorted(c.inc for c in crossings)
    if outs != list(range(arcs)):
        raise MalformedDiagram("each arc must appear exactly once as an out-arc")
    if ins != list(range(arcs)):
        raise MalformedDiagram("each arc must appear exactly once as an in-arc")
    for c in crossings:
        if c.sign not in (1, -1):
            raise MalformedDiagram(f"crossing sign must be ±1, got {c.sign}")
        if not 0 <= c.over < arcs:
            raise MalformedDiagram(f"over-arc {c.over} out of range")


def arc_names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"g{i}" for i in range(n)]


# Figure-eight from the PD code X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]; arcs
# a={1,2}, b={3,4}, c={5,6}, d={7,8}.
FIGURE_EIGHT = (
    Crossing(over=0, inc=1, out=2, sign=-1),
    Crossing(over=2, inc=3, out=0, sign=-1),
    Crossing(over=1, inc=2, out=3, sign=1),
    Crossing(over=3, inc=0, out=1, sign=1),
)


def wirtinger(spec: KnotSpec) -> tuple[Presentation, PhiGrading]:
    """One generator per arc, one conjugation relator per crossing, first relator dropped."""
    if spec.kind == "trefoil":
        a, b = Word.gen(0), Word.gen(1)
        p = Presentation.build(["a", "b"], [a * b * a * (b * a * b).inverse()], "Wirtinger", knot="trefoil")
        return p, PhiGrading.for_presentation(p, [1, 1])
    if spec.kind == "torus":
        raise MalformedDiagram("torus knots are built with torus_presentation; no crossing table attached")
    n = spec.arcs
    rels = [c.relator() for c in spec.crossings][1:]
    p = Presentation.build(arc_names(n), rels, "Wirtinger", knot=spec.name)
    return p, PhiGrading.for_presentation(p, [1] * n)


def torus_presentation(p: int, q: int) -> tuple[Presentation, PhiGrading, TorusKnotGroup]:
    """⟨x, y | x^p y^{-q}⟩ with φ(x) = q, φ(y) = p."""
    model = TorusKnotGroup(p, q)
    pres = Presentation.build(["x", "y"], [Word.gen(0, p) * Word.gen(1, -q)], "TorusStandard", knot=f"torus:{p},{q}")
    return pres, PhiGrading.for_presentation(pres, [q, p]), model


def exponent_matrix(p: Presentation) -> list[list[int]]:
    k = len(p.generators)
    return [[r.exponent_sum(g) for g in range(k)] for r in p.relators]


def phi_from_abelianization(p: Presentation) -> PhiGrading:
    """The surjection Γ → ℤ, read off from the Smith normal form of the exponent matrix."""
    k = len(p.generators)
    rows = exponent_matrix(p)
    if not rows:
        if k != 1:
            raise NotHomologyCircle(f"H1 is free of rank {k}")
        return PhiGrading.for_presentation(p, [1])
    M = sympy.Matrix(rows)
    S, U, V = smith_normal_decomp(M, domain=sympy.ZZ)
    diag = [S[i, i] for i in range(min(S.shape))]
    nonzero = [d for d in diag if d != 0]
    if len(nonzero) != k - 1 or any(abs(d) != 1 for d in nonzero):
        raise NotHomologyCircle(f"abelianization invariants {diag} do not give ℤ")
    # U M V = S, so the last column of V spans ker M over ℤ and is primitive
    zero_col = next(i for i in range(k) if i >= len(diag) or diag[i] == 0)
    vec = [int(V[i, zero_col]) for i in range(k)]
    if p.kind == "Wirtinger" and any(abs(v) != 1 for v in vec):
        raise NotHomologyCircle("Wirtinger generators must map to ±1")
    if sum(vec) < 0 or (sum(vec) == 0 and next(v for v in vec if v) < 0):
        vec = [-v for v in vec]
    return PhiGrading.for_presentation(p, vec)


def detect_torus(p: Presentation) -> tuple[int, int] | None:
    """(p, q) when ``p`` is literally ⟨x, y | x^p y^{-q}⟩ (either sign pattern)."""
    if len(p.generators) != 2 or len(p.relators) != 1:
        return None
    syl = p.relators[0].syllables
    if len(syl) != 2 or syl[0][0] == syl[1][0]:
        return None
    (g0, e0), (g1, e1) = syl
    if e0 * e1 >= 0 or g0 != 0:
        return None
    a, b = abs(e0), abs(e1)
    if a < 2 or b < 2 or gcd(a, b) != 1:
        return None
    return a, b


def model_for(p: Presentation) -> GroupModel | None:
    """A registered word-problem model for ``p``, if one applies."""
    tq = detect_torus(p)
    if tq is not None:
        return TorusKnotGroup(*tq, names=p.names)
    if p.meta.get("knot") == "trefoil" or (
        p.names == ("a", "b") and len(p.relators) == 1 and p.relators[0] == _trefoil_relator()
    ):
        return trefoil_model()
    return None


def _trefoil_relator() -> Word:
    a, b = Word.gen(0), Word.gen(1)
    return a * b * a * (b * a * b).inverse()


def load_crossing_table(path: str | Path) -> KnotSpec:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        items = data.get("crossings", [])
        arcs = data.get("arcs")
    else:
        items, arcs = data, None
    try:
        crossings = [Crossing(int(c["over"]), int(c["in"]), int(c["out"]), int(c["sign"])) for c in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDiagram(f"bad crossing entry: {exc}") from exc
    return KnotSpec.table(crossings, arcs=arcs, name=f"file:{path}")


def parse_knot_spec(text: str) -> KnotSpec:
    text = text.strip()
    if text == "trefoil":
        return KnotSpec.trefoil()
    if text in ("figure-eight", "figure8", "4_1"):
        return KnotSpec.table(FIGURE_EIGHT, name="figure-eight")
    if text == "unknot":
        return KnotSpec.table((), arcs=1, name="unknot")
    if text.startswith("torus:"):
        try:
            p_s, q_s = text[len("torus:"):].split(",")
            return KnotSpec.torus(int(p_s), int(q_s))
        except ValueError as exc:
            raise MalformedDiagram(f"bad torus spec {text!r}") from exc
    if text.startswith("file:"):
        return load_crossing_table(text[len("file:"):])
    raise MalformedDiagram(f"unknown knot spec {text!r}")


def knot_input(spec: KnotSpec) -> tuple[Presentation, PhiGrading, GroupModel | None]:
    """Presentation, grading and (if available) model for a knot spec."""
    if spec.kind == "torus":
        return torus_presentation(spec.p, spec.q)
    pres, phi = wirtinger(spec)
    return pres, phi, model_for(pres)
