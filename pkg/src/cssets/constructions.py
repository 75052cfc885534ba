"""Concrete sets: the low-density completely syndetic family and its closed forms.

The family is parametrized by a constant gap ``K`` and a row-growth factor
``M``.  Run lengths come from a triangular array ``gamma`` whose row ``n``
has length ``r_n`` with ``r_1 = 1``, ``r_{n+1} = M r_n + 1``; row ``n+1``
is ``M`` copies of row ``n`` followed by the single entry ``n+1``.
Concatenating the rows gives the run lengths ``alpha``; every gap is ``K``.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .setcore import (
    BlockStream,
    Construction42,
    CorollaryB,
    SetDescriptor,
)

__all__ = [
    "Construction42Params",
    "gamma",
    "gamma_row",
    "alpha_at",
    "alpha_stream",
    "r_closed",
    "R_closed",
    "Gamma_closed",
    "r_iter",
    "R_iter",
    "Gamma_iter",
    "recurrence_solution",
    "recurrence_iter",
    "density_limit",
    "construction42_density",
    "empirical_density",
    "prefix_span",
    "corollaryB_descriptors",
    "ProductSet",
    "zd_product",
]


@dataclass(frozen=True)
class Construction42Params:
    K: int
    M: int = 2

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.M < 2:
            raise ValueError("M must be >= 2")


def r_closed(n: int, M: int) -> int:
    """Row length ``(M^n - 1)/(M - 1)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return (M**n - 1) // (M - 1)


def R_closed(m: int, M: int) -> int:
    """Total length of rows ``1..m``: ``M(M^m - 1)/(M-1)^2 - m/(M-1)``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    num = M * (M**m - 1) - m * (M - 1)
    q, rem = divmod(num, (M - 1) ** 2)
    assert rem == 0
    return q


def Gamma_closed(n: int, M: int) -> int:
    """Sum of row ``n``: ``(M^{n+1} - M - (M-1) n)/(M-1)^2``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q, rem = divmod(M ** (n + 1) - M - (M - 1) * n, (M - 1) ** 2)
    assert rem == 0
    return q


def r_iter(n: int, M: int) -> int:
    r = 1
    for _ in range(n - 1):
        r = M * r + 1
    return r if n >= 1 else 0


def R_iter(m: int, M: int) -> int:
    return sum(r_iter(k, M) for k in range(1, m + 1))


def Gamma_iter(n: int, M: int) -> int:
    g = 1
    for k in range(1, n):
        g = M * g + k + 1
    return g


def recurrence_iter(T: int, s: int, n: int) -> int:
    r = 0
    for k in range(n):
        r = T * r + k + 1 + s
    return r


def recurrence_solution(T: int, s: int, n: int) -> int:
    """Closed form of ``r_{n+1} = T r_n + n + 1 + s``, ``r_0 = 0``.

    ``r_n = a (T^n - 1) + b n`` with ``a = (s(T-1) + T)/(T-1)^2`` and
    ``b = -1/(T-1)``, evaluated in exact rationals.
    """
    if T <= 1:
        raise ValueError("T must be > 1")
    if s < 0 or n < 0:
        raise ValueError("s and n must be >= 0")
    a = Fraction(s * (T - 1) + T, (T - 1) ** 2)
    b = Fraction(-1, T - 1)
    value = a * (T**n - 1) + b * n
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral recurrence value {value} (T={T}, s={s}, n={n})")
    return int(value)


class _RowTable:
    """Cumulative row lengths R_0, R_1, ... for one M, grown on demand."""

    def __init__(self, M: int):
        self.M = M
        self.r = [0, 1]          # r[n]
        self.R = [0, 1]          # R[m]

    def grow_to_cover(self, n: int) -> None:
        while self.R[-1] < n:
            self.r.append(self.M * self.r[-1] + 1)
            self.R.append(self.R[-1] + self.r[-1])


_TABLES: dict[int, _RowTable] = {}


def _table(M: int) -> _RowTable:
    if M not in _TABLES:
        _TABLES[M] = _RowTable(M)
    return _TABLES[M]


def gamma(n: int, k: int, M: int) -> int:
    """Entry ``k`` of row ``n`` of the triangular array, by index descent."""
    if n < 1:
        raise IndexError("rows are indexed from 1")
    rn = r_closed(n, M)
    if not 1 <= k <= rn:
        raise IndexError(f"k={k} outside row {n} of length {rn}")
    while n > 1:
        if k == rn:
            return n
        rn = (rn - 1) // M
        k = (k - 1) % rn + 1
        n -= 1
    return 1


def gamma_row(n: int, M: int) -> list[int]:
    """Row ``n`` materialized by the defining recursion (test oracle, small n only)."""
    row = [1]
    for m in range(1, n):
        row = row * M + [m + 1]
    return row


def alpha_at(n: int, M: int) -> int:
    """``alpha_n``: entry ``n - R_m`` of row ``m + 1`` where ``R_m < n ≤ R_{m+1}``."""
    if n < 1:
        raise IndexError("alpha is indexed from 1")
    t = _table(M)
    t.grow_to_cover(n)
    m = bisect.bisect_left(t.R, n) - 1
    return gamma(m + 1, n - t.R[m], M)


def _alpha_rows(M: int):
    # row-by-row expansion; row m+1 = M copies of row m, then m+1
    row = [1]
    yield from row
    for m in itertools.count(1):
        row = row * M + [m + 1]
        yield from row


def alpha_stream(K: int, M: int = 2, budget: int | None = None) -> BlockStream:
    """Block stream with ``alpha`` the concatenated gamma rows and every ``beta = K``."""
    Construction42Params(K, M)
    return BlockStream(lambda: ((a, K) for a in _alpha_rows(M)), budget=budget,
                       name=f"construction42(K={K},M={M})")


def prefix_span(K: int, M: int, pairs: int) -> int:
    """Length covered by the first ``pairs`` (alpha, beta) pairs."""
    s = Construction42(K, M).stream
    s.ensure(pairs)
    return int(s.alphas(pairs).sum()) + K * pairs


def density_limit(K: int) -> Fraction:
    """The density value ``1/(K+1)`` attached to the family."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return Fraction(1, K + 1)


def construction42_density(K: int, M: int) -> Fraction:
    """Limit of the member fraction at row boundaries, from the closed forms.

    The mean run length over rows ``1..m`` tends to ``M/(M-1)``, so the
    member fraction tends to ``M / (M + K(M-1))``.
    """
    Construction42Params(K, M)
    return Fraction(M, M + K * (M - 1))


def empirical_density(desc: SetDescriptor, radius: int) -> Fraction:
    """``|A ∩ [-radius, radius]| / (2 radius + 1)`` exactly."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    count = int(desc.window(-radius, radius).bits.sum())
    return Fraction(count, 2 * radius + 1)


def corollaryB_descriptors() -> tuple[CorollaryB, CorollaryB]:
    """``(B, A)`` with ``B = {2^n + 2k : 0 ≤ k ≤ n-1}`` and ``A = Z \\ (B ∪ -B)``."""
    return CorollaryB("B"), CorollaryB("A")


@dataclass(frozen=True)
class ProductSet:
    """``A^d ⊂ Z^d``."""

    base: SetDescriptor
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")

    def member(self, point) -> bool:
        point = tuple(point)
        if len(point) != self.d:
            raise ValueError(f"expected a {self.d}-tuple")
        return all(self.base.member(int(c)) for c in point)

    def box_count(self, radius: int) -> int:
        c = int(self.base.window(-radius, radius).bits.sum())
        return c**self.d

    def box_count_direct(self, radius: int) -> int:
        """Count by materializing the box (oracle for small d and radius)."""
        bits = self.base.window(-radius, radius).bits
        grid = bits
        for _ in range(self.d - 1):
            grid = np.multiply.outer(grid, bits)
        return int(np.count_nonzero(grid))

    def box_density(self, radius: int) -> Fraction:
        return Fraction(self.box_count(radius), (2 * radius + 1) ** self.d)

    def to_json(self):
        return {"kind": "product", "d": self.d, "base": self.base.to_json()}


def zd_product(desc: SetDescriptor, d: int):
    """``desc^d``; for ``d = 1`` the descriptor itself."""
    if d == 1:
        return desc
    return ProductSet(desc, d)
