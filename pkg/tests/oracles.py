"""Reference computations that share no code with the library's engines."""
from __future__ import annotations

import math

import numpy as np
import sympy

T = sympy.Symbol("t")


def torus_image(letters: list[tuple[int, int]], p: int, q: int) -> tuple[tuple[tuple[int, int], ...], int]:
    """Faithful image of a word in ⟨x, y | x^p = y^q⟩: (reduced word in ℤ/p * ℤ/q, φ with φ(x)=q, φ(y)=p).

    The center is ⟨x^p⟩ and φ(x^p) = pq ≠ 0, so the pair determines the element.
    ``letters`` uses 0 = x, 1 = y, 2 = z = x^p.
    """
    order = {0: p, 1: q}
    stack: list[list[int]] = []
    weight = 0
    for g, e in letters:
        if g == 2:
            weight += e * p * q
            continue
        weight += e * (q if g == 0 else p)
        r = e % order[g]
        if not r:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] = (stack[-1][1] + r) % order[g]
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, r])
    return tuple((g, e) for g, e in stack), weight


def fox_abelianized(relator: list[tuple[int, int]], gen: int, weights: list[int]) -> sympy.Expr:
    """∂r/∂g pushed to ℤ[t^±] letter by letter (unit letters only)."""
    out = sympy.Integer(0)
    level = 0
    for g, e in relator:
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            if step == 1:
                if g == gen:
                    out += T**level
                level += weights[g]
            else:
                level -= weights[g]
                if g == gen:
                    out -= T**level
    return out


def classical_alexander_oracle(relators: list[list[tuple[int, int]]], k: int, weights: list[int], j: int) -> sympy.Poly:
    cols = [c for c in range(k) if c != j - 1]
    M = sympy.Matrix([[fox_abelianized(r, c, weights) for c in cols] for r in relators])
    det = sympy.factor(M.det())
    m = abs(weights[j - 1])
    if m != 1:
        det = sympy.cancel(det * (T - 1) / (T**m - 1))
    num, den = sympy.fraction(sympy.together(det))
    # clear monomial denominators and strip powers of t
    poly = sympy.Poly(sympy.expand(num), T)
    den_poly = sympy.Poly(den, T)
    assert den_poly.is_monomial
    coeffs = poly.all_coeffs()
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if coeffs and coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return sympy.Poly(coeffs, T)


def mahler_jensen(coeffs_low_to_high: list[complex]) -> float:
    """ln M(p) = ln|lead| + Σ ln max(1, |root|)."""
    c = list(coeffs_low_to_high)
    while c and c[-1] == 0:
        c.pop()
    while c and c[0] == 0:
        c.pop(0)
    lead = abs(c[-1])
    roots = np.roots(list(reversed(c))) if len(c) > 1 else []
    return math.log(lead) + math.fsum(math.log(max(1.0, abs(r))) for r in roots)
