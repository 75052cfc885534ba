"""Lifting completely syndetic sets from Z to finitely generated groups.

Two routes are supported.  A surjective homomorphism ``phi: G -> Z`` pulls
a set ``A ⊂ Z`` back to ``phi^{-1}(A) ⊂ G``; translates lift along a fixed
preimage of 1.  Inside Z itself, a set ``A`` placed on ``kZ`` spreads to
the union of its ``k`` cosets.

Groups are operational: elements are integer tuples with explicit
multiply and invert.  The Heisenberg group uses triples ``(a, b, c)`` for
the matrix with ``a`` above the diagonal in row 1, ``b`` in row 2 and the
corner ``c``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from . import setcore
from .errors import BudgetExceeded, NotSurjective
from .setcore import SetDescriptor, descriptor_from_json, register_kind

Element = tuple


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


class FinGenGroup:
    """A group given by identity, product, inverse and a generating list."""

    name = "group"
    labels: tuple = ()

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def invert(self, g: Element) -> Element:
        raise NotImplementedError

    @property
    def generators(self) -> tuple:
        raise NotImplementedError

    def abelianize(self, g: Element) -> tuple:
        """Coordinates of ``g`` in the free abelian quotient, one per generator."""
        raise NotImplementedError

    def power(self, g: Element, k: int) -> Element:
        if k < 0:
            g, k = self.invert(g), -k
        out = self.identity
        while k:
            if k & 1:
                out = self.multiply(out, g)
            g = self.multiply(g, g)
            k >>= 1
        return out

    def word(self, letters: Sequence[tuple[int, int]]) -> Element:
        """Evaluate a word given as (generator index, exponent) pairs."""
        out = self.identity
        for i, e in letters:
            out = self.multiply(out, self.power(self.generators[i], e))
        return out

    def to_json(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(setcore.canonical_json(self.to_json()))


class FreeAbelian(FinGenGroup):
    def __init__(self, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.d = d
        self.name = f"z{d}"
        self.labels = tuple("xyzw"[:d]) if d <= 4 else tuple(f"e{i + 1}" for i in range(d))

    @property
    def identity(self):
        return (0,) * self.d

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def invert(self, g):
        return tuple(-a for a in g)

    def power(self, g, k):
        return tuple(k * a for a in g)

    @property
    def generators(self):
        return tuple(tuple(int(i == j) for j in range(self.d)) for i in range(self.d))

    def abelianize(self, g):
        return tuple(g)

    def ball_size(self, r: int) -> int:
        """``|B_r|`` in the standard generators: sum over k of 2^k C(d,k) C(r,k)."""
        return sum(2**k * math.comb(self.d, k) * math.comb(r, k) for k in range(self.d + 1))

    def to_json(self):
        return {"kind": "free_abelian", "d": self.d}


class Heisenberg(FinGenGroup):
    """Upper unitriangular integer 3x3 matrices, generators ``x = (1,0,0)``, ``y = (0,1,0)``."""

    name = "heisenberg"
    labels = ("x", "y")

    @property
    def identity(self):
        return (0, 0, 0)

    def multiply(self, g, h):
        a, b, c = g
        a2, b2, c2 = h
        return (a + a2, b + b2, c + c2 + a * b2)

    def invert(self, g):
        a, b, c = g
        return (-a, -b, -c + a * b)

    @property
    def generators(self):
        return ((1, 0, 0), (0, 1, 0))

    def abelianize(self, g):
        return (g[0], g[1])

    def to_json(self):
        return {"kind": "heisenberg"}


def group_from_name(name: str) -> FinGenGroup:
    """``'heisenberg'`` or ``'z<d>'`` (``'z'`` alone means Z)."""
    name = name.strip().lower()
    if name == "heisenberg":
        return Heisenberg()
    if name.startswith("z"):
        d = name[1:]
        return FreeAbelian(int(d) if d else 1)
    raise ValueError(f"unknown group {name!r}")


def group_from_json(obj: dict) -> FinGenGroup:
    if obj["kind"] == "heisenberg":
        return Heisenberg()
    if obj["kind"] == "free_abelian":
        return FreeAbelian(int(obj["d"]))
    raise ValueError(f"unknown group kind {obj['kind']!r}")


# ---------------------------------------------------------------------------
# balls
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """Elements of word length ``<= radius`` in BFS order, with their lengths."""

    radius: int
    elements: tuple
    lengths: tuple

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.index

    @property
    def index(self) -> dict:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {g: i for i, g in enumerate(self.elements)}
            object.__setattr__(self, "_index", idx)
        return idx


def ball(G: FinGenGroup, r: int, budget: int | None = None) -> Ball:
    """Closed word-metric ball ``B_r`` by breadth-first search.

    Neighbours are visited as ``g s_1, g s_1^{-1}, g s_2, ...``.  Raises
    :class:`BudgetExceeded` once more than ``budget`` elements are found.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    budget = setcore.DEFAULT_BUDGET if budget is None else budget
    steps = []
    for s in G.generators:
        steps.append(s)
        steps.append(G.invert(s))
    seen = {G.identity: 0}
    order = [G.identity]
    frontier = deque([G.identity])
    while frontier:
        g = frontier.popleft()
        d = seen[g]
        if d == r:
            continue
        for s in steps:
            h = G.multiply(g, s)
            if h not in seen:
                seen[h] = d + 1
                order.append(h)
                if len(order) > budget:
                    raise BudgetExceeded(f"ball of radius {r} exceeds {budget} elements")
                frontier.append(h)
    return Ball(r, tuple(order), tuple(seen[g] for g in order))


# ---------------------------------------------------------------------------
# homomorphisms onto Z
# ---------------------------------------------------------------------------


def _ext_gcd(values: Sequence[int]) -> tuple[int, list[int]]:
    """``(g, c)`` with ``sum c_i v_i = g = gcd(v)``."""
    g, coef = 0, [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        # solve x g + y v = gcd(g, v)
        old_r, rr = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while rr:
            q = old_r // rr
            old_r, rr = rr, old_r - q * rr
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coef = [c * old_s for c in coef]
        coef[i] += old_t
        g = old_r
    return g, coef


class GroupHom:
    """Homomorphism ``G -> Z`` fixed by integer images of the generators.

    Any such assignment extends, since Z is abelian; evaluation goes through
    the abelianization.
    """

    def __init__(self, group: FinGenGroup, images: Mapping[str, int] | Sequence[int]):
        self.group = group
        if isinstance(images, Mapping):
            unknown = set(images) - set(group.labels)
            if unknown:
                raise ValueError(f"unknown generators {sorted(unknown)}")
            images = [int(images.get(lab, 0)) for lab in group.labels]
        images = tuple(int(v) for v in images)
        if len(images) != len(group.generators):
            raise ValueError("one image per generator expected")
        self.images = images

    @classmethod
    def parse(cls, group: FinGenGroup, text: str) -> "GroupHom":
        """From ``"x=1,y=0"``."""
        images = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, _, val = part.partition("=")
            images[key.strip()] = int(val)
        return cls(group, images)

    def __call__(self, g: Element) -> int:
        return sum(c * v for c, v in zip(self.group.abelianize(g), self.images))

    @property
    def gcd(self) -> int:
        return math.gcd(*self.images)

    def is_surjective(self) -> bool:
        return self.gcd == 1

    def require_surjective(self) -> None:
        if not self.is_surjective():
            raise NotSurjective(f"images {self.images} have gcd {self.gcd}, not 1")

    def unit_preimage(self) -> Element:
        """Fixed ``a`` with ``phi(a) = 1``.

        The first generator with image ``±1`` (or its inverse); otherwise the
        word ``prod s_i^{c_i}`` for Bezout coefficients ``c`` of the images.
        """
        self.require_surjective()
        G = self.group
        for s, v in zip(G.generators, self.images):
            if v == 1:
                return s
            if v == -1:
                return G.invert(s)
        _, coef = _ext_gcd(self.images)
        return G.word([(i, c) for i, c in enumerate(coef) if c])

    def lipschitz_constant(self) -> int:
        return max(abs(v) for v in self.images)

    def to_json(self) -> dict:
        return {lab: v for lab, v in zip(self.group.labels, self.images)}


def lift_witness(hom: GroupHom, F) -> list[Element]:
    """``f -> a^f`` for the fixed unit preimage ``a``; translate order is kept."""
    a = hom.unit_preimage()
    return [hom.group.power(a, int(f)) for f in F]


# ---------------------------------------------------------------------------
# subsets of groups
# ---------------------------------------------------------------------------


class GroupSetDescriptor:
    group: FinGenGroup

    def member(self, g: Element) -> bool:
        raise NotImplementedError

    def members_mask(self, elements: Sequence[Element]) -> np.ndarray:
        return np.fromiter((self.member(g) for g in elements), dtype=bool, count=len(elements))

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Preimage(GroupSetDescriptor):
    hom: GroupHom
    inner: SetDescriptor

    @property
    def group(self):
        return self.hom.group

    def member(self, g):
        return self.inner.member(self.hom(g))

    def members_mask(self, elements):
        vals = np.array([self.hom(g) for g in elements], dtype=np.int64)
        if vals.size == 0:
            return np.zeros(0, dtype=bool)
        lo = int(vals.min())
        bits = self.inner.window(lo, int(vals.max())).bits
        return bits[vals - lo]

    def to_json(self):
        return {"kind": "preimage", "group": self.group.to_json(),
                "hom": self.hom.to_json(), "inner": self.inner.to_json()}


@dataclass(frozen=True, eq=False)
class WholeGroup(GroupSetDescriptor):
    group: FinGenGroup

    def member(self, g):
        return True

    def to_json(self):
        return {"kind": "whole", "group": self.group.to_json()}


def preimage_set(hom: GroupHom, inner: SetDescriptor) -> Preimage:
    """``phi^{-1}(inner)``; the homomorphism must be onto Z."""
    hom.require_surjective()
    return Preimage(hom, inner)


def group_set_from_json(obj: dict) -> GroupSetDescriptor:
    G = group_from_json(obj["group"])
    if obj["kind"] == "whole":
        return WholeGroup(G)
    if obj["kind"] == "preimage":
        return preimage_set(GroupHom(G, obj["hom"]), descriptor_from_json(obj["inner"]))
    raise ValueError(f"unknown group set kind {obj['kind']!r}")


# ---------------------------------------------------------------------------
# witness check in a group
# ---------------------------------------------------------------------------


@dataclass
class GroupCheckResult:
    n: int
    radius: int
    status: str                      # verified | counterexample
    counterexample: tuple = ()
    evidence: list = field(default_factory=list)   # (translate, element of S outside it)
    translates_checked: int = 0
    ball_size: int = 0

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        out = {"n": self.n, "radius": self.radius, "status": self.status,
               "translates_checked": self.translates_checked, "ball_size": self.ball_size}
        if self.counterexample:
            out["counterexample"] = [list(s) for s in self.counterexample]
            out["evidence"] = [[list(f), list(s)] for f, s in self.evidence]
        return out


def _good_rows(gset: GroupSetDescriptor, F: Sequence[Element], elements: Sequence[Element]) -> np.ndarray:
    G = gset.group
    if isinstance(gset, Preimage):
        # f^{-1} w ∈ phi^{-1}(A) iff phi(w) - phi(f) ∈ A
        hom = gset.hom
        vals = np.array([hom(w) for w in elements], dtype=np.int64)
        shifts = np.array([hom(f) for f in F], dtype=np.int64)
        lo = int(vals.min() - shifts.max())
        hi = int(vals.max() - shifts.min())
        bits = gset.inner.window(lo, hi).bits
        return bits[vals[None, :] - shifts[:, None] - lo]
    rows = []
    for f in F:
        finv = G.invert(f)
        rows.append(gset.members_mask([G.multiply(finv, w) for w in elements]))
    return np.array(rows, dtype=bool).reshape(len(F), len(elements))


def check_witness_group(gset: GroupSetDescriptor, n: int, F: Sequence[Element], r: int,
                        budget: int | None = None) -> GroupCheckResult:
    """Hitting-set check of left translates ``fA`` over ``W = B_r``.

    Elements of ``W`` are ranked in BFS order, which fixes the reported
    counterexample.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    F = [tuple(f) for f in dict.fromkeys(tuple(f) for f in F)]
    if not F:
        raise ValueError("F must be nonempty")
    W = ball(gset.group, r, budget)
    good = _good_rows(gset, F, W.elements)
    found = kernels.find_hitting_set(~good, np.arange(len(W), dtype=np.int64), n)
    if found is None:
        return GroupCheckResult(n, r, "verified", translates_checked=len(F), ball_size=len(W))
    idx = sorted(int(i) for i in found)
    S = tuple(W.elements[i] for i in idx)
    evidence = []
    for k, f in enumerate(F):
        for i in idx:
            if not good[k, i]:
                evidence.append((f, W.elements[i]))
                break
    return GroupCheckResult(n, r, "counterexample", S, evidence, len(F), len(W))


def group_density(G: FinGenGroup, gset: GroupSetDescriptor, r: int, budget: int | None = None) -> Fraction:
    """``|A ∩ B_r| / |B_r|`` exactly."""
    W = ball(G, r, budget)
    return Fraction(int(gset.members_mask(W.elements).sum()), len(W))


# ---------------------------------------------------------------------------
# finite-index spreading inside Z
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteIndexLift(SetDescriptor):
    """``B = kA + {0, ..., k-1}``: ``z ∈ B`` iff ``z // k ∈ A``."""

    base: SetDescriptor
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")

    def member(self, z):
        return self.base.member(z // self.k)

    def _window_bits(self, lo, hi):
        qlo = lo // self.k
        bits = self.base.window(qlo, hi // self.k).bits
        return bits[np.arange(lo, hi + 1) // self.k - qlo]

    def to_json(self):
        return {"kind": "lift", "k": self.k, "base": self.base.to_json()}


register_kind("lift")(lambda o: FiniteIndexLift(descriptor_from_json(o["base"]), int(o["k"])))


def finite_index_lift(A: SetDescriptor, k: int) -> SetDescriptor:
    if k == 1:
        return A
    return FiniteIndexLift(A, k)
