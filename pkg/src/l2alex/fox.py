"""Fox calculus over free groups and the classical Alexander polynomial."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .errors import IndexOutOfRange, UnknownGenerator
from .groups import FreeGroup, Presentation, Word
from .ring import PhiGrading, RingElement, RingMatrix


@dataclass(frozen=True)
class LaurentPoly:
    """Finitely supported Σ c_k t^k; zero coefficients are never stored."""

    coeffs: tuple[tuple[int, complex | int], ...] = ()

    def __init__(self, coeffs: Mapping[int, complex | int] | Iterable[tuple[int, complex | int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, complex | int] = {}
        for k, c in items:
            acc[k] = acc.get(k, 0) + c
        object.__setattr__(self, "coeffs", tuple(sorted((k, _tidy(c)) for k, c in acc.items() if c != 0)))

    @classmethod
    def monomial(cls, k: int, c: complex | int = 1) -> LaurentPoly:
        return cls({k: c})

    @classmethod
    def from_list(cls, coefficients: Sequence[complex | int], low: int = 0) -> LaurentPoly:
        """Coefficients listed from exponent ``low`` upwards."""
        return cls({low + i: c for i, c in enumerate(coefficients)})

    def as_dict(self) -> dict[int, complex | int]:
        return dict(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: LaurentPoly | int | complex) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return LaurentPoly(itertools.chain(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly((k, -c) for k, c in self.coeffs)

    def __sub__(self, other: LaurentPoly | int | complex) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return self + (-other)

    def __rsub__(self, other: int | complex) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other: LaurentPoly | int | complex) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            return LaurentPoly((k, c * other) for k, c in self.coeffs)
        acc: dict[int, complex | int] = {}
        for (i, a), (j, b) in itertools.product(self.coeffs, other.coeffs):
            acc[i + j] = acc.get(i + j, 0) + a * b
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        return reduce(lambda a, b: a * b, [self] * n, LaurentPoly({0: 1}))

    @property
    def low(self) -> int:
        return self.coeffs[0][0]

    @property
    def high(self) -> int:
        return self.coeffs[-1][0]

    def shift(self, k: int) -> LaurentPoly:
        return LaurentPoly((e + k, c) for e, c in self.coeffs)

    def __call__(self, t: complex) -> complex:
        return sum(c * t**k for k, c in self.coeffs)

    def substitute_power(self, m: int) -> LaurentPoly:
        return LaurentPoly((k * m, c) for k, c in self.coeffs)

    def scale_variable(self, s: complex) -> LaurentPoly:
        """p(s·t)."""
        return LaurentPoly((k, c * s**k) for k, c in self.coeffs)

    def conjugate_reversed(self) -> LaurentPoly:
        """p*(t) = conj(p)(t⁻¹), the symbol of the adjoint."""
        return LaurentPoly((-k, complex(c).conjugate()) for k, c in self.coeffs)

    def normalized(self) -> LaurentPoly:
        """Shift so the lowest exponent is 0 and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        p = self.shift(-self.low)
        lead = p.coeffs[-1][1]
        if isinstance(lead, complex):
            return p
        return -p if lead < 0 else p

    def equal_up_to_units(self, other: LaurentPoly) -> bool:
        return self.normalized() == other.normalized() or self.normalized() == (-other).normalized()

    def numpy_coeffs(self) -> list[complex]:
        """Dense coefficients from exponent ``low`` to ``high``."""
        if not self.coeffs:
            return []
        out = [0j] * (self.high - self.low + 1)
        for k, c in self.coeffs:
            out[k - self.low] = complex(c)
        return out

    def to_json(self) -> dict[str, object]:
        return {str(k): _json_num(c) for k, c in self.coeffs}

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> LaurentPoly:
        out = {}
        for k, v in data.items():
            if isinstance(v, dict):
                v = complex(v.get("re", 0.0), v.get("im", 0.0))
            out[int(k)] = v
        return cls(out)

    def format(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in reversed(self.coeffs):
            if isinstance(c, complex):
                coef = f"({c.real:g}{c.imag:+g}j)"
                sign = "+"
            else:
                sign = "-" if c < 0 else "+"
                coef = f"{abs(c):g}" if not isinstance(c, int) else str(abs(c))
            if k == 0:
                mono = coef
            else:
                pw = var if k == 1 else f"{var}^{k}"
                mono = pw if coef == "1" else f"{coef}{pw}" if isinstance(c, complex) else f"{coef}{pw}"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out

    def __str__(self) -> str:
        return self.format()


def _tidy(c):
    if isinstance(c, complex) and c.imag == 0 and float(c.real).is_integer():
        return int(c.real)
    if isinstance(c, float) and c.is_integer():
        return int(c)
    return c


def _json_num(c):
    if isinstance(c, complex):
        return {"re": c.real, "im": c.imag}
    return c


def fox_derive(r: Word, g: int, free: FreeGroup) -> RingElement:
    """∂r/∂g in ℤF by prefix accumulation over syllables.

    ∂(hⁿ)/∂h = 1 + h + … + h^{n-1} for n > 0 and −(h⁻¹ + … + h⁻ⁿ) for n < 0.
    """
    if not 0 <= g < len(free.names):
        raise UnknownGenerator(f"generator id {g} not in presentation")
    free._check(r)
    acc: dict[Word, complex] = {}
    prefix = Word()
    for h, n in r.syllables:
        if h == g:
            if n > 0:
                for i in range(n):
                    w = prefix * Word.gen(g, i)
                    acc[w] = acc.get(w, 0) + 1
            else:
                for i in range(1, -n + 1):
                    w = prefix * Word.gen(g, -i)
                    acc[w] = acc.get(w, 0) - 1
        prefix = prefix * Word.gen(h, n)
    return RingElement(free, acc)


def fox_matrix(p: Presentation) -> RingMatrix:
    """(∂r_i/∂g_l): one row per relator, one column per generator, over the free group."""
    free = p.free_group()
    k = len(p.generators)
    return RingMatrix(free, [[fox_derive(r, l, free) for l in range(k)] for r in p.relators]) if p.relators else RingMatrix(free, [])


def delete_column(F: RingMatrix, j: int, k: int | None = None) -> RingMatrix:
    """Remove column ``j`` (1-based, as in F_j)."""
    ncols = F.cols if F.rows else (k if k is not None else 0)
    if not 1 <= j <= max(ncols, 1 if k is None else k):
        raise IndexOutOfRange(f"column {j} outside 1..{ncols}")
    if not F.rows:
        return F
    return F.delete_column(j - 1)


def abelianize(a: RingElement, phi: PhiGrading) -> LaurentPoly:
    """Σ c_g t^{φ(g)}, for ``a`` over any model compatible with ``phi``."""
    lw = phi.letter_weights(a.model)
    out: dict[int, complex | int] = {}
    for w, c in a.terms.items():
        k = sum(lw[g] * e for g, e in w.syllables)
        out[k] = out.get(k, 0) + _tidy(c)
    return LaurentPoly(out)


def laurent_det(M: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant by Laplace expansion memoized over column subsets (exact on integer input)."""
    n = len(M)
    if n == 0:
        return LaurentPoly({0: 1})
    memo: dict[tuple[int, frozenset[int]], LaurentPoly] = {}

    def minor(row: int, cols: frozenset[int]) -> LaurentPoly:
        if row == n:
            return LaurentPoly({0: 1})
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = LaurentPoly()
        ordered = sorted(cols)
        for pos, c in enumerate(ordered):
            entry = M[row][c]
            if not entry:
                continue
            sub = minor(row + 1, cols - {c})
            if not sub:
                continue
            term = entry * sub
            total = total + (term if pos % 2 == 0 else -term)
        memo[key] = total
        return total

    return minor(0, frozenset(range(n)))


def abelianized_matrix(A: RingMatrix, phi: PhiGrading) -> list[list[LaurentPoly]]:
    return [[abelianize(e, phi) for e in row] for row in A.entries]


def classical_alexander(p: Presentation, phi: PhiGrading, j: int | None = None) -> LaurentPoly:
    """det of the abelianized F_j, divided by (t^{φ(g_j)} − 1)/(t − 1) when φ(g_j) ≠ ±1.

    For Wirtinger-type generators (φ(g_j) = 1) this is just the determinant.
    Normalized: lowest exponent 0, positive leading coefficient.
    """
    k = len(p.generators)
    if j is None:
        j = k
    if not 1 <= j <= k:
        raise IndexOutOfRange(f"column {j} outside 1..{k}")
    p.require_deficiency_one()
    F = fox_matrix(p)
    Fj = delete_column(F, j, k)
    det = laurent_det(abelianized_matrix(Fj, phi))
    m = phi[j - 1]
    if abs(m) != 1:
        det = _divide_exact(det, _cyclotomic_quotient(m))
    return det.normalized()


def _cyclotomic_quotient(m: int) -> LaurentPoly:
    """1 + t + … + t^{|m|-1}, the factor (t^m − 1)/(t − 1) up to units."""
    if m == 0:
        raise ValueError("deleted generator has zero φ-weight")
    return LaurentPoly({i: 1 for i in range(abs(m))})


def _divide_exact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact division of integer Laurent polynomials; raises if there is a remainder."""
    if not num:
        return num
    n = num.shift(-num.low)
    d = den.shift(-den.low)
    rem = dict(n.coeffs)
    dhigh, dlead = d.high, d.coeffs[-1][1]
    q: dict[int, int] = {}
    top = n.high
    while rem and max(rem) >= dhigh:
        top = max(rem)
        c = rem[top]
        if c % dlead:
            raise ValueError("non-exact division")
        qc = c // dlead
        q[top - dhigh] = qc
        for k, v in d.coeffs:
            key = k + top - dhigh
            rem[key] = rem.get(key, 0) - qc * v
            if rem[key] == 0:
                del rem[key]
    if rem:
        raise ValueError("non-exact division")
    return LaurentPoly(q)
