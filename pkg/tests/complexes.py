"""Random finite-group chain complexes built from elementary pieces."""
from __future__ import annotations

import random

from l2alex.groups import FiniteGroup
from l2alex.ring import RingElement, RingMatrix
from l2alex.weighted import ChainComplexW

GROUPS = [FiniteGroup.cyclic(2), FiniteGroup.cyclic(3), FiniteGroup.cyclic(4), FiniteGroup.symmetric(3)]


def random_element(G: FiniteGroup, rng: random.Random, density: float = 0.5) -> RingElement:
    items = [(w, rng.randint(-2, 2)) for w in G.all_elements() if rng.random() < density]
    return RingElement(G, items)


def _piece(G: FiniteGroup, top: int, rng: random.Random) -> ChainComplexW:
    """A free module in one degree, or ℂG → ℂG with a random (possibly singular) differential."""
    ranks = [0] * (top + 1)
    if rng.random() < 0.4 or top == 0:
        n = rng.randint(0, top)
        ranks[n] = 1
        return ChainComplexW(G, tuple(ranks), {})
    n = rng.randint(1, top)
    ranks[n] = ranks[n - 1] = 1
    a = random_element(G, rng)
    return ChainComplexW(G, tuple(ranks), {n: RingMatrix(G, [[a]])})


def _elementary(G: FiniteGroup, k: int, rng: random.Random) -> tuple[RingMatrix, RingMatrix]:
    """I + a·E_ij and its inverse I − a·E_ij."""
    if k < 2:
        I = RingMatrix.identity(G, k)
        return I, I
    i, j = rng.sample(range(k), 2)
    a = random_element(G, rng, 0.3)
    one, zero = RingElement.one(G), RingElement.zero(G)

    def build(sign: int) -> RingMatrix:
        rows = [[one if r == c else zero for c in range(k)] for r in range(k)]
        rows[i][j] = a.scale(sign)
        return RingMatrix(G, rows)

    return build(1), build(-1)


def random_complex(rng: random.Random, max_top: int = 3, max_pieces: int = 4) -> ChainComplexW:
    G = rng.choice(GROUPS)
    top = rng.randint(0, max_top)
    C = _piece(G, top, rng)
    for _ in range(rng.randint(0, max_pieces - 1)):
        C = C.direct_sum(_piece(G, top, rng))
    # c_n ↦ Q_n c_n Q_{n-1}⁻¹ keeps c² = 0 and the homology
    changes = [_elementary(G, k, rng) for k in C.ranks]
    diffs = {}
    for n in range(1, C.top + 1):
        c = C.differential(n)
        if not c.rows or not c.cols:
            continue
        diffs[n] = changes[n][0] * c * changes[n - 1][1]
    return ChainComplexW(G, C.ranks, diffs)
