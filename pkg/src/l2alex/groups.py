"""Group elements, presentations and word-problem solvers.

Words are stored syllabically: a tuple of ``(generator_id, exponent)`` pairs
with nonzero exponents and no two adjacent syllables on the same generator.
A :class:`GroupModel` turns arbitrary words into canonical normal forms, so two
words denote the same group element iff their normal forms are identical.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    MalformedPresentation,
    NotCoprime,
    UnknownGenerator,
)

Syllable = tuple[int, int]


@dataclass(frozen=True, order=True, slots=True)
class Word:
    syllables: tuple[Syllable, ...] = ()

    @classmethod
    def from_letters(cls, letters: Iterable[Syllable]) -> Word:
        return reduce_free(cls(tuple(letters)))

    @classmethod
    def gen(cls, g: int, e: int = 1) -> Word:
        return cls(((g, e),)) if e else cls()

    def __mul__(self, other: Word) -> Word:
        return Word(_concat(self.syllables, other.syllables))

    def __pow__(self, n: int) -> Word:
        if n < 0:
            return self.inverse() ** (-n)
        out = Word()
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> Word:
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def exponent_sum(self, g: int) -> int:
        return sum(e for h, e in self.syllables if h == g)

    def generators(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def letters(self) -> list[int]:
        """Expanded signed letters, ``+(g+1)`` / ``-(g+1)`` per unit exponent."""
        out = []
        for g, e in self.syllables:
            out.extend([(g + 1) if e > 0 else -(g + 1)] * abs(e))
        return out

    def format(self, names: Sequence[str]) -> str:
        if not self.syllables:
            return "e"
        parts = []
        for g, e in self.syllables:
            if e == 1:
                parts.append(names[g])
            elif e == -1:
                parts.append(f"{names[g]}'")
            else:
                parts.append(f"{names[g]}^{e}")
        return " ".join(parts)


IDENTITY = Word()


def _concat(left: tuple[Syllable, ...], right: tuple[Syllable, ...]) -> tuple[Syllable, ...]:
    stack = list(left)
    for g, e in right:
        _push(stack, g, e)
    return tuple(stack)


def _push(stack: list[Syllable], g: int, e: int) -> None:
    if e == 0:
        return
    if stack and stack[-1][0] == g:
        e += stack.pop()[1]
        if e == 0:
            return
    stack.append((g, e))


def reduce_free(w: Word) -> Word:
    """Freely reduced form of ``w``."""
    stack: list[Syllable] = []
    for g, e in w.syllables:
        _push(stack, g, e)
    return Word(tuple(stack))


@dataclass(frozen=True)
class Generator:
    id: int
    name: str


class GroupModel:
    """A group with solved word problem.

    ``names`` are the letters accepted by :meth:`normalize`; ``nf_names`` are
    the letters normal forms are written in (they coincide except for models
    that rewrite their input into another model).
    """

    kind: str = "abstract"
    names: tuple[str, ...] = ()

    @property
    def nf_names(self) -> tuple[str, ...]:
        return self.names

    def _check(self, w: Word) -> None:
        n = len(self.names)
        for g, _ in w.syllables:
            if not 0 <= g < n:
                raise UnknownGenerator(f"generator id {g} not in {self.kind} model")

    def normalize(self, w: Word) -> Word:
        raise NotImplementedError

    def normalize_nf(self, w: Word) -> Word:
        """Normalize a word written in normal-form letters."""
        return self.normalize(w)

    def multiply(self, u: Word, v: Word) -> Word:
        """Product of two normal forms."""
        return self.normalize_nf(u * v)

    def invert(self, w: Word) -> Word:
        return self.normalize_nf(w.inverse())

    def identity(self) -> Word:
        return IDENTITY

    def has_infinite_order(self, w: Word) -> bool:
        raise NotImplementedError

    def nf_letter_weights(self, weights: Sequence[int]) -> tuple[int, ...]:
        """Translate generator weights of a homomorphism to ℤ onto normal-form letters."""
        return tuple(weights)

    def generator_words(self) -> list[Word]:
        """Normal forms of the input generators and their inverses."""
        out = []
        for g in range(len(self.names)):
            out.append(self.normalize(Word.gen(g)))
            out.append(self.normalize(Word.gen(g, -1)))
        return out

    def parse_nf(self, text: str) -> Word:
        from .dsl import parse_word

        return self.normalize_nf(parse_word(text, self.nf_names))


class FreeGroup(GroupModel):
    kind = "Free"

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)

    def __repr__(self) -> str:
        return f"FreeGroup({list(self.names)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeGroup) and other.names == self.names

    def __hash__(self) -> int:
        return hash(("Free", self.names))

    def normalize(self, w: Word) -> Word:
        self._check(w)
        return reduce_free(w)

    def multiply(self, u: Word, v: Word) -> Word:
        return u * v

    def has_infinite_order(self, w: Word) -> bool:
        return not reduce_free(w).is_identity()


class FreeAbelianGroup(GroupModel):
    kind = "FreeAbelian"

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)

    def __repr__(self) -> str:
        return f"FreeAbelianGroup({list(self.names)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeAbelianGroup) and other.names == self.names

    def __hash__(self) -> int:
        return hash(("FreeAbelian", self.names))

    def normalize(self, w: Word) -> Word:
        self._check(w)
        exps = [0] * len(self.names)
        for g, e in w.syllables:
            exps[g] += e
        return Word(tuple((g, e) for g, e in enumerate(exps) if e))

    def multiply(self, u: Word, v: Word) -> Word:
        if len(self.names) == 1:
            e = (u.syllables[0][1] if u.syllables else 0) + (v.syllables[0][1] if v.syllables else 0)
            return Word(((0, e),)) if e else IDENTITY
        return self.normalize(u * v)

    def has_infinite_order(self, w: Word) -> bool:
        return not self.normalize(w).is_identity()

    def exponents(self, w: Word) -> tuple[int, ...]:
        exps = [0] * len(self.names)
        for g, e in self.normalize(w).syllables:
            exps[g] += e
        return tuple(exps)


class FiniteGroup(GroupModel):
    """Finite group from a Cayley table; element 0 is the identity.

    Every non-identity element is a letter, so normal forms are the empty
    word or a single letter with exponent 1.
    """

    kind = "Finite"

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[int]]):
        n = len(elements)
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError("Cayley table must be square and match the element list")
        if list(table[0]) != list(range(n)) or [row[0] for row in table] != list(range(n)):
            raise ValueError("element 0 must be the identity")
        self.elements = tuple(elements)
        self.table = tuple(tuple(row) for row in table)
        # letters are elements 1..n-1
        self.names = self.elements[1:]
        self._inv = tuple(next(j for j in range(n) if self.table[i][j] == 0) for i in range(n))

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, w: Word) -> int:
        self._check(w)
        cur = 0
        for g, e in w.syllables:
            el = g + 1
            if e < 0:
                el, e = self._inv[el], -e
            for _ in range(e):
                cur = self.table[cur][el]
        return cur

    def word_of(self, i: int) -> Word:
        return IDENTITY if i == 0 else Word(((i - 1, 1),))

    def normalize(self, w: Word) -> Word:
        return self.word_of(self.index(w))

    def multiply(self, u: Word, v: Word) -> Word:
        return self.word_of(self.table[self.index(u)][self.index(v)])

    def has_infinite_order(self, w: Word) -> bool:
        return False

    def all_elements(self) -> list[Word]:
        return [self.word_of(i) for i in range(self.order)]

    @classmethod
    def cyclic(cls, n: int, letter: str = "s") -> FiniteGroup:
        names = ["e"] + [letter if k == 1 else f"{letter}{k}" for k in range(1, n)]
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(names, table)

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]]) -> FiniteGroup:
        """Group generated by the given permutations (tuples of images)."""
        deg = len(perms[0])
        ident = tuple(range(deg))
        elems = [ident]
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for p in perms:
                    b = tuple(p[a[i]] for i in range(deg))
                    if b not in seen:
                        seen.add(b)
                        elems.append(b)
                        nxt.append(b)
            frontier = nxt
        pos = {el: i for i, el in enumerate(elems)}
        # (a*b)(i) = b(a(i)): left-to-right composition
        table = [[pos[tuple(b[a[i]] for i in range(deg))] for b in elems] for a in elems]
        names = ["e"] + [f"g{i}" for i in range(1, len(elems))]
        return cls(names, table)

    @classmethod
    def symmetric(cls, n: int) -> FiniteGroup:
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        cycle = list(range(1, n)) + [0]
        return cls.from_permutations([swap, cycle])


class TorusKnotGroup(GroupModel):
    """⟨x, y | x^p = y^q⟩ with the central element z = x^p = y^q.

    Normal form: ``z^k`` followed by syllables alternating between ``x^a``
    (1 ≤ a ≤ p-1) and ``y^b`` (1 ≤ b ≤ q-1).  Letter ``z`` (id 2) is accepted
    on input as well.
    """

    kind = "TorusKnot"
    X, Y, Z = 0, 1, 2

    def __init__(self, p: int, q: int, names: Sequence[str] = ("x", "y")):
        if p < 2 or q < 2 or gcd(p, q) != 1:
            raise NotCoprime(f"torus knot needs coprime p, q >= 2, got ({p}, {q})")
        self.p, self.q = p, q
        self.names = tuple(names)
        self._nf_names = (*self.names, "z")
        self._multiply = lru_cache(maxsize=1 << 16)(self._multiply_uncached)

    def __repr__(self) -> str:
        return f"TorusKnotGroup({self.p}, {self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TorusKnotGroup) and (other.p, other.q, other.names) == (self.p, self.q, self.names)

    def __hash__(self) -> int:
        return hash(("TorusKnot", self.p, self.q, self.names))

    @property
    def nf_names(self) -> tuple[str, ...]:
        return self._nf_names

    def _check(self, w: Word) -> None:
        for g, _ in w.syllables:
            if g not in (0, 1, 2):
                raise UnknownGenerator(f"generator id {g} not in torus knot model")

    def normalize(self, w: Word) -> Word:
        self._check(w)
        k = 0
        stack: list[Syllable] = []
        for g, e in w.syllables:
            if g == self.Z:
                k += e
                continue
            order = self.p if g == self.X else self.q
            if stack and stack[-1][0] == g:
                e += stack.pop()[1]
            shift, r = divmod(e, order)
            k += shift
            if r:
                stack.append((g, r))
        head = ((self.Z, k),) if k else ()
        return Word(head + tuple(stack))

    def multiply(self, u: Word, v: Word) -> Word:
        return self._multiply(u, v)

    def _multiply_uncached(self, u: Word, v: Word) -> Word:
        return self.normalize(u * v)

    def has_infinite_order(self, w: Word) -> bool:
        # knot groups are torsion-free
        return not self.normalize(w).is_identity()

    def nf_letter_weights(self, weights: Sequence[int]) -> tuple[int, ...]:
        wx, wy = weights[0], weights[1]
        if wx * self.p != wy * self.q:
            raise MalformedPresentation("grading does not respect x^p = y^q")
        return (wx, wy, wx * self.p)

    def central(self, k: int = 1) -> Word:
        return Word(((self.Z, k),)) if k else IDENTITY


class RewrittenModel(GroupModel):
    """A presentation whose generators are mapped into another model.

    ``images[i]`` is the base-model word for input generator ``i``;
    ``preimages[j]`` expresses base input generator ``j`` in the new letters,
    which makes the substitution invertible and lets gradings be transported.
    """

    kind = "Rewritten"

    def __init__(
        self,
        base: GroupModel,
        names: Sequence[str],
        images: Sequence[Word],
        preimages: Sequence[Word],
    ):
        self.base = base
        self.names = tuple(names)
        self.images = tuple(base.normalize(w) for w in images)
        self.preimages = tuple(preimages)
        if len(self.images) != len(self.names) or len(self.preimages) != len(base.names):
            raise ValueError("substitution sizes do not match the generators")
        for j, pre in enumerate(self.preimages):
            if self.normalize(pre) != base.normalize(Word.gen(j)):
                raise ValueError(f"preimage of base generator {j} does not map back")

    def __repr__(self) -> str:
        return f"RewrittenModel({self.base!r}, {list(self.names)})"

    @property
    def nf_names(self) -> tuple[str, ...]:
        return self.base.nf_names

    def substitute(self, w: Word) -> Word:
        self._check(w)
        out = IDENTITY
        for g, e in w.syllables:
            out = out * (self.images[g] ** e)
        return out

    def normalize(self, w: Word) -> Word:
        return self.base.normalize(self.substitute(w))

    def normalize_nf(self, w: Word) -> Word:
        return self.base.normalize_nf(w)

    def multiply(self, u: Word, v: Word) -> Word:
        return self.base.multiply(u, v)

    def has_infinite_order(self, w: Word) -> bool:
        return self.base.has_infinite_order(w)

    def nf_letter_weights(self, weights: Sequence[int]) -> tuple[int, ...]:
        base_w = [sum(weights[g] * e for g, e in pre.syllables) for pre in self.preimages]
        nf = self.base.nf_letter_weights(base_w)
        for i, img in enumerate(self.images):
            if sum(nf[g] * e for g, e in img.syllables) != weights[i]:
                raise MalformedPresentation("grading is not compatible with the substitution")
        return nf

    def generator_words(self) -> list[Word]:
        out = []
        for g in range(len(self.names)):
            out.append(self.normalize(Word.gen(g)))
            out.append(self.normalize(Word.gen(g, -1)))
        return out


def trefoil_model(names: Sequence[str] = ("a", "b")) -> RewrittenModel:
    """⟨a, b | aba = bab⟩ as TorusKnot(2, 3) via x = aba, y = ab.

    Inverse substitution: a = y⁻¹x, b = x⁻¹y².
    """
    base = TorusKnotGroup(2, 3)
    x, y = Word.gen(0), Word.gen(1)
    a, b = Word.gen(0), Word.gen(1)
    return RewrittenModel(
        base,
        names,
        images=[y.inverse() * x, x.inverse() * y * y],
        preimages=[a * b * a, a * b],
    )


@dataclass(frozen=True)
class Presentation:
    generators: tuple[Generator, ...]
    relators: tuple[Word, ...]
    kind: str = "Generic"  # Wirtinger | TorusStandard | Generic
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if [g.id for g in self.generators] != list(range(len(names))):
            raise MalformedPresentation("generator ids must be 0..k-1")
        if len(set(names)) != len(names):
            raise MalformedPresentation("generator names must be unique")
        for r in self.relators:
            for g, _ in r.syllables:
                if not 0 <= g < len(names):
                    raise UnknownGenerator(f"relator uses unknown generator id {g}")

    @classmethod
    def build(cls, names: Sequence[str], relators: Sequence[Word], kind: str = "Generic", **meta) -> Presentation:
        gens = tuple(Generator(i, n) for i, n in enumerate(names))
        return cls(gens, tuple(reduce_free(r) for r in relators), kind, dict(meta))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def require_deficiency_one(self) -> None:
        if self.deficiency != 1:
            raise MalformedPresentation(
                f"need a deficiency-1 presentation, got {len(self.generators)} generators "
                f"and {len(self.relators)} relators"
            )

    def free_group(self) -> FreeGroup:
        return FreeGroup(self.names)

    def format(self) -> str:
        rels = ", ".join(r.format(self.names) for r in self.relators)
        return f"< {', '.join(self.names)} | {rels} >" if rels else f"< {', '.join(self.names)} | >"

    def __str__(self) -> str:
        return self.format()


def words_up_to(model: GroupModel, length: int) -> list[Word]:
    """All normal forms of input words of length ≤ ``length`` (deduplicated, sorted)."""
    gens = model.generator_words()
    seen = {model.identity()}
    frontier = [model.identity()]
    for _ in range(length):
        nxt = []
        for w in frontier:
            for g in gens:
                u = model.multiply(w, g)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted(seen)


def cayley_ball(model: GroupModel, radius: int, cap: int = 20000) -> list[Word]:
    """Ball of the given radius in the word metric, in BFS order."""
    from .errors import BallTooLarge

    gens = model.generator_words()
    ball = [model.identity()]
    seen = set(ball)
    frontier = list(ball)
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for g in gens:
                u = model.multiply(w, g)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
                    if len(seen) > cap:
                        raise BallTooLarge(f"ball of radius {radius} exceeds {cap} elements")
        ball.extend(nxt)
        frontier = nxt
    return ball


def all_words(k: int, length: int) -> Iterable[Word]:
    """Every (unreduced) letter word of the given length over k generators."""
    letters = [(g, s) for g in range(k) for s in (1, -1)]
    for combo in itertools.product(letters, repeat=length):
        yield Word.from_letters(combo)
