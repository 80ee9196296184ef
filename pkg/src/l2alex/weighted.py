"""Weighted chain complexes over finite groups and ℤ: Betti numbers, torsion, restriction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

from .errors import CircleZero, NotDetAcyclic, UnsupportedModel, ZeroPolynomial
from .fk import det_mahler, ring_to_laurent, laurent_to_ring
from .fox import LaurentPoly, laurent_det
from .groups import FiniteGroup, FreeAbelianGroup, GroupModel
from .ring import RingElement, RingMatrix

_Z = sympy.Symbol("z")


def _is_cyclic(model: GroupModel) -> bool:
    return isinstance(model, FreeAbelianGroup) and len(model.names) == 1


@dataclass
class ChainComplexW:
    """C_top → … → C_0 of free modules ℂG^{k_n}.

    ``differentials[n]`` is c_n : C_n → C_{n-1} as a k_n × k_{n-1} matrix acting
    on row vectors by right multiplication.  ``log_rho`` holds ln ρ on the
    generators; it must vanish for finite groups.
    """

    model: GroupModel
    ranks: tuple[int, ...]
    differentials: dict[int, RingMatrix]
    log_rho: tuple[float, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.model, FiniteGroup) and not _is_cyclic(self.model):
            raise UnsupportedModel("weighted complexes need a finite group or ℤ")
        self.ranks = tuple(self.ranks)
        if not self.log_rho:
            self.log_rho = (0.0,) * len(self.model.names)
        if isinstance(self.model, FiniteGroup) and any(self.log_rho):
            raise UnsupportedModel("a homomorphism from a finite group to ℝ>0 is trivial")
        for n, c in self.differentials.items():
            if not 1 <= n < len(self.ranks):
                raise ValueError(f"differential c_{n} outside the complex")
            if c.shape != (self.ranks[n], self.ranks[n - 1]) and self.ranks[n] and self.ranks[n - 1]:
                raise ValueError(f"c_{n} has shape {c.shape}, expected {(self.ranks[n], self.ranks[n - 1])}")
        for n in range(2, len(self.ranks)):
            a, b = self.differential(n), self.differential(n - 1)
            if a.rows and b.cols and not (a * b).is_zero():
                raise ValueError(f"c_{n - 1} ∘ c_{n} ≠ 0")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def differential(self, n: int) -> RingMatrix:
        if n in self.differentials:
            return self.differentials[n]
        rows = self.ranks[n] if 0 <= n < len(self.ranks) else 0
        cols = self.ranks[n - 1] if 1 <= n <= len(self.ranks) else 0
        return RingMatrix.zeros(self.model, rows, cols)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * k for n, k in enumerate(self.ranks))

    def direct_sum(self, other: ChainComplexW) -> ChainComplexW:
        top = max(self.top, other.top)
        ra = list(self.ranks) + [0] * (top - self.top)
        rb = list(other.ranks) + [0] * (top - other.top)
        diffs = {}
        zero = RingElement.zero(self.model)
        for n in range(1, top + 1):
            a = self.differential(n) if n <= self.top else RingMatrix.zeros(self.model, 0, ra[n - 1])
            b = other.differential(n) if n <= other.top else RingMatrix.zeros(self.model, 0, rb[n - 1])
            rows = [list(r) + [zero] * rb[n - 1] for r in _rows(a, ra[n], ra[n - 1])]
            rows += [[zero] * ra[n - 1] + list(r) for r in _rows(b, rb[n], rb[n - 1])]
            diffs[n] = RingMatrix(self.model, rows)
        return ChainComplexW(self.model, tuple(x + y for x, y in zip(ra, rb)), diffs, self.log_rho)

    def to_json(self) -> dict:
        if _is_cyclic(self.model):
            model = "Z"
        else:
            model = {"table": [list(r) for r in self.model.table]}
        return {
            "model": model,
            "log_rho": list(self.log_rho),
            "ranks": list(self.ranks),
            "differentials": {str(n): c.to_json() for n, c in sorted(self.differentials.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> ChainComplexW:
        model = model_from_json(data["model"])
        diffs = {int(n): RingMatrix.from_json(model, c) for n, c in data.get("differentials", {}).items()}
        return cls(model, tuple(data["ranks"]), diffs, tuple(data.get("log_rho", ())))


def _rows(c: RingMatrix, nrows: int, ncols: int):
    if c.rows:
        return c.entries
    return [[RingElement.zero(c.model)] * ncols for _ in range(nrows)]


def model_from_json(spec) -> GroupModel:
    if spec == "Z":
        return FreeAbelianGroup(["z"])
    if isinstance(spec, Mapping):
        if "cyclic" in spec:
            return FiniteGroup.cyclic(int(spec["cyclic"]))
        if "symmetric" in spec:
            return FiniteGroup.symmetric(int(spec["symmetric"]))
        if "table" in spec:
            n = len(spec["table"])
            return FiniteGroup(["e"] + [f"g{i}" for i in range(1, n)], spec["table"])
    raise UnsupportedModel(f"unknown model description {spec!r}")


# ---------------------------------------------------------------- exact linear algebra


def _fraction(c: complex) -> Fraction:
    c = complex(c)
    if c.imag != 0:
        raise UnsupportedModel("exact finite-group algebra needs real coefficients")
    return Fraction(c.real)


def regular_matrix(a: RingElement, group: FiniteGroup) -> list[list[Fraction]]:
    """Matrix of x ↦ x·a on ℂG in the element basis: entry [g][h] = coefficient of h in g·a."""
    n = group.order
    out = [[Fraction(0)] * n for _ in range(n)]
    for w, c in a.terms.items():
        k = group.index(w)
        f = _fraction(c)
        for g in range(n):
            out[g][group.table[g][k]] += f
    return out


def expand(c: RingMatrix, group: FiniteGroup, rows: int, cols: int) -> list[list[Fraction]]:
    """The (rows·|G|) × (cols·|G|) matrix of right multiplication by ``c``."""
    n = group.order
    big = [[Fraction(0)] * (cols * n) for _ in range(rows * n)]
    for i in range(c.rows):
        for j in range(c.cols):
            if not c[i, j]:
                continue
            block = regular_matrix(c[i, j], group)
            for r in range(n):
                row = big[i * n + r]
                for s in range(n):
                    row[j * n + s] = block[r][s]
    return big


def _dm(rows: list[list[Fraction]], ncols: int) -> DomainMatrix:
    QQ = sympy.QQ
    data = [[QQ(x.numerator, x.denominator) for x in r] for r in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def exact_rank(rows: list[list[Fraction]], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return _dm(rows, ncols).rank()


def _dims(C: ChainComplexW) -> list[tuple[int, int, int]]:
    """Per degree: (dim C_n over ℂ, rank D_n, rank D_{n+1})."""
    G = C.model
    size = G.order
    ranks = []
    for n in range(C.top + 2):
        if 1 <= n <= C.top:
            ranks.append(exact_rank(expand(C.differential(n), G, C.ranks[n], C.ranks[n - 1]), C.ranks[n - 1] * size))
        else:
            ranks.append(0)
    return [(C.ranks[n] * size, ranks[n], ranks[n + 1]) for n in range(C.top + 1)]


def betti_dimension_c(C: ChainComplexW, n: int) -> int:
    """dim_ℂ H_n for a finite-group complex."""
    dim, rn, rn1 = _dims(C)[n]
    return dim - rn - rn1


def harmonic_trace(C: ChainComplexW, n: int) -> Fraction:
    """von Neumann trace of the orthogonal projection onto the harmonic n-chains.

    Harmonic = ker c_n ∩ ker c_{n+1}^*, i.e. the left null space of [D_n | D_{n+1}ᵀ];
    the trace sums the identity-slot diagonal entries of P = Bᵀ(BBᵀ)⁻¹B.
    """
    G = C.model
    size = G.order
    dim = C.ranks[n] * size
    if dim == 0:
        return Fraction(0)
    blocks = []
    if 1 <= n <= C.top:
        blocks.append(expand(C.differential(n), G, C.ranks[n], C.ranks[n - 1]))
    if n + 1 <= C.top:
        up = expand(C.differential(n + 1), G, C.ranks[n + 1], C.ranks[n])
        blocks.append([list(col) for col in zip(*up)] if up else [[] for _ in range(dim)])
    if blocks:
        stacked = [sum((b[r] for b in blocks), []) for r in range(dim)]
    else:
        stacked = [[] for _ in range(dim)]
    width = len(stacked[0])
    if width == 0:
        return Fraction(C.ranks[n])
    M = _dm(stacked, width)
    basis = M.transpose().nullspace()  # rows span the left null space
    if basis.shape[0] == 0:
        return Fraction(0)
    B = basis.to_field()
    gram_inv = (B * B.transpose()).inv()
    P = B.transpose() * gram_inv * B
    Pl = P.to_Matrix()
    total = sum((Pl[i * size, i * size] for i in range(C.ranks[n])), sympy.Integer(0))
    return Fraction(int(sympy.fraction(total)[0]), int(sympy.fraction(total)[1]))


# ---------------------------------------------------------------- ℤ: symbolic rank


def _laurent_to_sympy(p: LaurentPoly, shift: int) -> sympy.Expr:
    return sum((sympy.Rational(_fraction(c).numerator, _fraction(c).denominator) * _Z ** (k + shift)
                for k, c in p.coeffs), sympy.Integer(0))


def symbolic_rank(c: RingMatrix) -> int:
    """Rank of the symbol matrix over the field ℚ(z)."""
    if not c.rows or not c.cols:
        return 0
    polys = [[ring_to_laurent(e) for e in row] for row in c.entries]
    low = min((p.low for row in polys for p in row if p), default=0)
    M = sympy.Matrix([[_laurent_to_sympy(p, -low) for p in row] for row in polys])
    dm = DomainMatrix.from_Matrix(M).convert_to(sympy.QQ[_Z]).to_field()
    return dm.rank()


# ---------------------------------------------------------------- public operations


def weighted_betti(C: ChainComplexW, n: int) -> Fraction:
    """b_n = dim_{N(G)} H_n: dim_ℂ/|G| for finite G, dimension over ℚ(z) for ℤ."""
    if not 0 <= n <= C.top:
        return Fraction(0)
    if isinstance(C.model, FiniteGroup):
        dim, rn, rn1 = _dims(C)[n]
        return Fraction(dim - rn - rn1, C.model.order)
    if _is_cyclic(C.model):
        rn = symbolic_rank(C.differential(n)) if n >= 1 else 0
        rn1 = symbolic_rank(C.differential(n + 1)) if n + 1 <= C.top else 0
        return Fraction(C.ranks[n] - rn - rn1)
    raise UnsupportedModel("weighted Betti numbers need a finite group or ℤ")


def weighted_bettis(C: ChainComplexW) -> list[Fraction]:
    return [weighted_betti(C, n) for n in range(C.top + 1)]


def _scaled_symbol(c: RingMatrix, s: float) -> list[list[LaurentPoly]]:
    return [[ring_to_laurent(e).scale_variable(s) for e in row] for row in c.entries]


def log_det_z(polys: list[list[LaurentPoly]], rank: int, samples: int = 4096) -> tuple[float, bool]:
    """ln det of a matrix over ℂ[ℤ]; square full-rank symbols go through Mahler quadrature.

    Other shapes integrate Σ ln σᵢ over the ``rank`` largest singular values of
    the symbol on a midpoint grid (not certified).
    """
    if rank == 0:
        return 0.0, True
    rows, cols = len(polys), len(polys[0])
    if rows == cols == rank:
        d = laurent_det(polys)
        if not d:
            raise NotDetAcyclic("symbol determinant vanishes")
        est = det_mahler(d)
        return est.log_value, est.rigorous
    theta = 2 * np.pi * (np.arange(samples) + 0.5) / samples
    zs = np.exp(1j * theta)
    acc = 0.0
    for z in zs:
        M = np.array([[p(z) if p else 0j for p in row] for row in polys])
        sv = np.linalg.svd(M, compute_uv=False)[:rank]
        acc += float(np.sum(np.log(sv)))
    return acc / samples, False


def weighted_torsion_z(C: ChainComplexW, x: float) -> float:
    """−Σ (−1)ⁿ ln det(Φ_{ρ^x} c_n), with z ↦ ρ(z)^{x/2}·z."""
    if not _is_cyclic(C.model):
        raise UnsupportedModel("weighted torsion is implemented over ℤ")
    bettis = weighted_bettis(C)
    if any(bettis):
        raise NotDetAcyclic(f"weighted Betti numbers {[str(b) for b in bettis]} do not vanish")
    s = math.exp(x * C.log_rho[0] / 2)
    total = 0.0
    for n in range(1, C.top + 1):
        c = C.differential(n)
        if not c.rows or not c.cols:
            continue
        ld, _ = log_det_z(_scaled_symbol(c, s), symbolic_rank(c))
        total -= (-1) ** n * ld
    return total


def block_symbol(p: LaurentPoly, n: int) -> list[list[LaurentPoly]]:
    """Matrix of multiplication by p(z) on l²(ℤ) = ⊕_{r<n} z^r·l²(nℤ), in the variable w = zⁿ.

    Entry [r][s] collects a_k w^{⌊(r+k)/n⌋} over the k with (r + k) mod n = s.
    """
    out = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
    for r in range(n):
        for k, a in p.coeffs:
            q, s = divmod(r + k, n)
            out[r][s] = out[r][s] + LaurentPoly({q: a})
    return out


def restriction_check(p: LaurentPoly, n: int, gap: float = 1e-6) -> tuple[float, float]:
    """(n·ln det(p), ln det of p restricted to nℤ); they agree when p has no zero on the circle."""
    if n < 1:
        raise ValueError("index must be positive")
    if not p:
        raise ZeroPolynomial("zero polynomial")
    coeffs = p.numpy_coeffs()
    if len(coeffs) > 1:
        roots = np.roots(list(reversed(coeffs)))
        if any(abs(abs(r) - 1) <= gap for r in roots):
            raise CircleZero("polynomial vanishes on the unit circle")
    whole = det_mahler(p).log_value
    restricted = det_mahler(laurent_det(block_symbol(p, n))).log_value
    return n * whole, restricted


def circle_complex(log_rho: float = 2.0) -> ChainComplexW:
    """The cellular complex of S¹ with one 0-cell and one 1-cell: c_1 = [z − 1]."""
    Z = FreeAbelianGroup(["z"])
    c1 = RingMatrix(Z, [[laurent_to_ring(LaurentPoly({1: 1, 0: -1}), Z)]])
    return ChainComplexW(Z, (1, 1), {1: c1}, (log_rho,))


def two_term_complex(p: LaurentPoly, degree: int = 1, log_rho: float = 0.0) -> ChainComplexW:
    """ℤ-complex with one nonzero differential [p] from degree ``degree`` to ``degree − 1``."""
    Z = FreeAbelianGroup(["z"])
    ranks = [0] * (degree + 1)
    ranks[degree] = ranks[degree - 1] = 1
    c = RingMatrix(Z, [[laurent_to_ring(p, Z)]])
    return ChainComplexW(Z, tuple(ranks), {degree: c}, (log_rho,))


def zero_complex(model: GroupModel, ranks: Sequence[int]) -> ChainComplexW:
    return ChainComplexW(model, tuple(ranks), {})
