"""Sparse arithmetic in the complex group ring ℂΓ.

Elements are finitely supported maps from normal-form words to complex
coefficients.  Besides the ring operations this module provides the scaling
homomorphisms used throughout (``ψ_t``, the weight conjugation ``Φ`` and the
unitary twist ``η_c``), the von Neumann trace and l¹ norms.

The weighted inner product is never materialized: weighted computations are
conjugated into the unweighted picture with :func:`apply_phi_rho`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import MalformedPresentation, ModelMismatch, NotUnitModulus, ZeroParameter
from .groups import IDENTITY, GroupModel, Presentation, Word

Number = complex | float | int


class RingElement:
    __slots__ = ("model", "terms")

    def __init__(self, model: GroupModel, terms: Mapping[Word, Number] | Iterable[tuple[Word, Number]] = ()):
        self.model = model
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, complex] = {}
        for w, c in items:
            if c == 0:
                continue
            acc[w] = acc.get(w, 0) + complex(c)
        self.terms = {w: c for w, c in sorted(acc.items()) if c != 0}

    @classmethod
    def _raw(cls, model: GroupModel, terms: dict[Word, complex]) -> RingElement:
        out = cls.__new__(cls)
        out.model = model
        out.terms = {w: terms[w] for w in sorted(terms) if terms[w] != 0}
        return out

    @classmethod
    def zero(cls, model: GroupModel) -> RingElement:
        return cls._raw(model, {})

    @classmethod
    def one(cls, model: GroupModel, c: Number = 1) -> RingElement:
        return cls._raw(model, {IDENTITY: complex(c)})

    @classmethod
    def monomial(cls, model: GroupModel, w: Word, c: Number = 1) -> RingElement:
        """``c·w`` for an input-letter word ``w`` (normalized here)."""
        return cls._raw(model, {model.normalize(w): complex(c)})

    @classmethod
    def from_words(cls, model: GroupModel, items: Iterable[tuple[Word, Number]]) -> RingElement:
        """Sum of ``c·w`` over input-letter words, normalized in ``model``."""
        acc: dict[Word, complex] = {}
        for w, c in items:
            nf = model.normalize(w)
            acc[nf] = acc.get(nf, 0) + complex(c)
        return cls._raw(model, acc)

    def _same(self, other: RingElement) -> None:
        if other.model is not self.model and other.model != self.model:
            raise ModelMismatch(f"{self.model!r} vs {other.model!r}")

    def __add__(self, other: RingElement | Number) -> RingElement:
        if not isinstance(other, RingElement):
            other = RingElement.one(self.model, other)
        self._same(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return RingElement._raw(self.model, acc)

    __radd__ = __add__

    def __neg__(self) -> RingElement:
        return RingElement._raw(self.model, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: RingElement | Number) -> RingElement:
        if not isinstance(other, RingElement):
            other = RingElement.one(self.model, other)
        return self + (-other)

    def __rsub__(self, other: Number) -> RingElement:
        return (-self) + other

    def scale(self, c: Number) -> RingElement:
        c = complex(c)
        return RingElement._raw(self.model, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other: RingElement | Number) -> RingElement:
        if not isinstance(other, RingElement):
            return self.scale(other)
        self._same(other)
        mult = self.model.multiply
        acc: dict[Word, complex] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = mult(u, v)
                acc[w] = acc.get(w, 0) + a * b
        return RingElement._raw(self.model, acc)

    def __rmul__(self, other: Number) -> RingElement:
        return self.scale(other)

    def __pow__(self, n: int) -> RingElement:
        out = RingElement.one(self.model)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float, complex)):
            other = RingElement.one(self.model, other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"RingElement({self.format()})"

    def isclose(self, other: RingElement, tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tol for k in keys)

    def support(self) -> list[Word]:
        return list(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient(self, w: Word) -> complex:
        return self.terms.get(w, 0j)

    def star(self) -> RingElement:
        """Involution Σ c_g g ↦ Σ conj(c_g) g⁻¹ (unweighted)."""
        inv = self.model.invert
        return RingElement._raw(self.model, {inv(w): c.conjugate() for w, c in self.terms.items()})

    def format(self) -> str:
        if not self.terms:
            return "0"
        names = self.model.nf_names
        out = ""
        for w, c in self.terms.items():
            neg = c.imag == 0 and c.real < 0
            coef = _fmt_coef(-c if neg else c)
            if w.is_identity():
                mono = coef
            else:
                mono = w.format(names) if coef == "1" else f"{coef}*{w.format(names)}"
            if not out:
                out = f"-{mono}" if neg else mono
            else:
                out += f" - {mono}" if neg else f" + {mono}"
        return out

    def to_json(self) -> list[dict]:
        names = self.model.nf_names
        return [
            {"word": w.format(names), "re": c.real, "im": c.imag}
            for w, c in self.terms.items()
        ]

    @classmethod
    def from_json(cls, model: GroupModel, data: Sequence[Mapping]) -> RingElement:
        from .dsl import parse_word

        acc = []
        for item in data:
            w = parse_word(item["word"], model.nf_names)
            acc.append((model.normalize_nf(w), complex(item.get("re", 0.0), item.get("im", 0.0))))
        return cls(model, acc)

    def push(self, model: GroupModel) -> RingElement:
        """Map an element written in input letters (e.g. over a free group) into ``model``."""
        return RingElement.from_words(model, self.terms.items())


def _fmt_coef(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:g}"
    return f"({c.real:g}{c.imag:+g}j)"


class RingMatrix:
    __slots__ = ("model", "entries")

    def __init__(self, model: GroupModel, entries: Sequence[Sequence[RingElement]]):
        self.model = model
        self.entries = tuple(tuple(row) for row in entries)
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        for row in self.entries:
            for e in row:
                if e.model is not model and e.model != model:
                    raise ModelMismatch("matrix entries must share one model")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> RingElement:
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def identity(cls, model: GroupModel, n: int) -> RingMatrix:
        return cls(model, [[RingElement.one(model) if i == j else RingElement.zero(model) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, model: GroupModel, rows: int, cols: int) -> RingMatrix:
        return cls(model, [[RingElement.zero(model) for _ in range(cols)] for _ in range(rows)])

    def map(self, f) -> RingMatrix:
        return RingMatrix(self.model, [[f(e) for e in row] for row in self.entries])

    def __add__(self, other: RingMatrix) -> RingMatrix:
        return RingMatrix(self.model, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: RingMatrix) -> RingMatrix:
        return RingMatrix(self.model, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __mul__(self, other: RingMatrix) -> RingMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = RingElement.zero(self.model)
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RingMatrix(self.model, out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RingMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return "RingMatrix([" + "; ".join(", ".join(e.format() for e in row) for row in self.entries) + "])"

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def delete_column(self, j: int) -> RingMatrix:
        return RingMatrix(self.model, [row[:j] + row[j + 1:] for row in self.entries])

    def push(self, model: GroupModel) -> RingMatrix:
        return RingMatrix(model, [[e.push(model) for e in row] for row in self.entries])

    def to_json(self) -> list[list[list[dict]]]:
        return [[e.to_json() for e in row] for row in self.entries]

    @classmethod
    def from_json(cls, model: GroupModel, data) -> RingMatrix:
        return cls(model, [[RingElement.from_json(model, e) for e in row] for row in data])


@dataclass(frozen=True)
class PhiGrading:
    """A homomorphism φ: Γ → ℤ given by its values on the presentation generators."""

    weights: tuple[int, ...]

    @classmethod
    def for_presentation(cls, presentation: Presentation, weights: Sequence[int]) -> PhiGrading:
        grading = cls(tuple(int(w) for w in weights))
        if len(grading.weights) != len(presentation.generators):
            raise MalformedPresentation("one weight per generator required")
        for r in presentation.relators:
            if grading.word_weight(r) != 0:
                raise MalformedPresentation(f"relator {r.format(presentation.names)} has nonzero weight")
        return grading

    def __getitem__(self, g: int) -> int:
        return self.weights[g]

    def word_weight(self, w: Word) -> int:
        """Weight of a word in the presentation's own letters."""
        return sum(self.weights[g] * e for g, e in w.syllables)

    def letter_weights(self, model: GroupModel) -> tuple[int, ...]:
        return _letter_weights(model, self.weights)

    def weight(self, model: GroupModel, w: Word) -> int:
        """Weight of a normal-form word of ``model``."""
        lw = self.letter_weights(model)
        return sum(lw[g] * e for g, e in w.syllables)


def _letter_weights(model: GroupModel, weights: tuple[int, ...]) -> tuple[int, ...]:
    cache = model.__dict__.setdefault("_letter_weight_cache", {})
    hit = cache.get(weights)
    if hit is None:
        hit = cache[weights] = model.nf_letter_weights(weights)
    return hit


def _map_terms(a, f):
    if isinstance(a, RingMatrix):
        return a.map(lambda e: _map_terms(e, f))
    return RingElement._raw(a.model, {w: f(w, c) for w, c in a.terms.items()})


def apply_psi(t: Number, phi: PhiGrading, a: RingElement | RingMatrix):
    """ψ_t: c·g ↦ c·t^{φ(g)}·g."""
    t = complex(t)
    if t == 0:
        raise ZeroParameter("ψ_t needs t ≠ 0")
    if t == 1:
        return a
    lw = phi.letter_weights(a.model)

    def f(w: Word, c: complex) -> complex:
        k = sum(lw[g] * e for g, e in w.syllables)
        return c * t**k

    return _map_terms(a, f)


def apply_phi_rho(x: float, phi: PhiGrading, a: RingElement | RingMatrix):
    """Φ_{ρ^x} for ρ = exp(2φ): c·g ↦ c·exp(x·φ(g))·g, i.e. ψ_{e^x}."""
    if x == 0:
        return a
    lw = phi.letter_weights(a.model)

    def f(w: Word, c: complex) -> complex:
        k = sum(lw[g] * e for g, e in w.syllables)
        return c * math.exp(x * k)

    return _map_terms(a, f)


def apply_eta(c: Number, phi: PhiGrading, a: RingElement | RingMatrix, tol: float = 1e-12):
    """η_c: d·g ↦ d·c^{φ(g)}·g for |c| = 1."""
    c = complex(c)
    if abs(abs(c) - 1) > tol:
        raise NotUnitModulus(f"|c| = {abs(c)} ≠ 1")
    lw = phi.letter_weights(a.model)
    arg = cmath.phase(c)

    def f(w: Word, d: complex) -> complex:
        k = sum(lw[g] * e for g, e in w.syllables)
        return d * cmath.exp(1j * arg * k)

    return _map_terms(a, f)


def trace(a: RingElement | RingMatrix) -> complex:
    """von Neumann trace: coefficient of the identity (summed over the diagonal)."""
    if isinstance(a, RingMatrix):
        return sum((trace(a.entries[i][i]) for i in range(min(a.shape))), 0j)
    return a.terms.get(IDENTITY, 0j)


def l1_norm(a: RingElement) -> float:
    return math.fsum(abs(c) for c in a.terms.values())


def l1_norm_matrix(A: RingMatrix) -> list[list[float]]:
    return [[l1_norm(e) for e in row] for row in A.entries]


def matrix_l1_norm(A: RingMatrix) -> float:
    """Maximum over rows of the summed entry l¹ norms.

    Bounds the spectral radius of right multiplication and the growth of
    entrywise l¹ norms of powers (‖(Aᵏ)_ij‖₁ ≤ (Nᵏ)_ij for N the entry-norm
    matrix).
    """
    if not A.entries:
        return 0.0
    return max(math.fsum(l1_norm(e) for e in row) for row in A.entries)


def weights_range(a: RingElement | RingMatrix, phi: PhiGrading) -> tuple[int, int] | None:
    """(min, max) φ-weight over the support, ``None`` if empty."""
    elems = [e for row in a.entries for e in row] if isinstance(a, RingMatrix) else [a]
    lw = None
    lo = hi = None
    for e in elems:
        if lw is None:
            lw = phi.letter_weights(e.model)
        for w in e.terms:
            k = sum(lw[g] * x for g, x in w.syllables)
            lo = k if lo is None else min(lo, k)
            hi = k if hi is None else max(hi, k)
    return None if lo is None else (lo, hi)
