"""Detecting uniform sub-Szemerédi structure and certifying its absence.

A sub-arithmetic progression of difference ``D`` is an increasing run of
integers whose consecutive steps are all at most ``D``.  A set is ``D``-USS
when it holds such progressions of every length.  For a set given by a
block stream, its complement fails to be USS exactly when the gaps
``beta`` are bounded and, for every ``D``, runs of length ``>= D`` recur
within a bounded number ``L(D)`` of blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import kernels
from .constructions import R_closed, r_closed
from .setcore import BlockStream, SetDescriptor, Window, split

INFINITY = math.inf


@dataclass(frozen=True)
class SubAPChain:
    elements: tuple
    D: int

    def __post_init__(self):
        el = self.elements
        if any(b <= a or b - a > self.D for a, b in zip(el, el[1:])):
            raise ValueError("not a sub-arithmetic progression of difference D")

    def __len__(self):
        return len(self.elements)


@dataclass
class UssProfile:
    D: int
    samples: list = field(default_factory=list)        # (horizon, plus-side length)
    minus_samples: list = field(default_factory=list)  # (horizon, minus-side length)

    def lengths(self) -> list[int]:
        return [n for _, n in self.samples]

    def to_json(self) -> dict:
        return {"D": self.D,
                "plus": [[h, n] for h, n in self.samples],
                "minus": [[h, n] for h, n in self.minus_samples]}


def longest_subAP(win: Window, D: int) -> SubAPChain:
    """Longest sub-AP of difference ``D`` among the members of ``win`` (first one on ties)."""
    if D < 1:
        raise ValueError("D must be >= 1")
    pos = win.members()
    start, length = kernels.longest_chain(pos, D)
    chain = tuple(int(p) for p in pos[start:start + length])
    return SubAPChain(chain, D)


def uss_profile(desc: SetDescriptor, D: int, horizons) -> UssProfile:
    """Longest difference-``D`` chain of ``desc`` inside ``[0, h]`` on each side, per horizon."""
    horizons = [int(h) for h in horizons]
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise ValueError("horizons must be increasing")
    plus, minus = split(desc)
    prof = UssProfile(D)
    for h in horizons:
        prof.samples.append((h, len(longest_subAP(plus.window(0, h), D))))
        prof.minus_samples.append((h, len(longest_subAP(minus.window(0, h), D))))
    return prof


@dataclass(frozen=True)
class NotUssCheck:
    passed: bool
    reason: str = ""
    position: int | None = None

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {"status": "pass" if self.passed else "violation"}
        if not self.passed:
            out.update(reason=self.reason, position=self.position)
        return out


def _eval_L(L, D: int):
    if callable(L):
        return L(D)
    if isinstance(L, Mapping):
        return L.get(D, INFINITY)
    return L


def check_not_uss(stream: BlockStream, b: int, L, D: int, prefix_len: int) -> NotUssCheck:
    """Check the bounded-gap and recurrence conditions on the first ``prefix_len`` pairs.

    ``L`` is an int, a mapping ``D -> L(D)`` or a callable.  Fails with the
    first ``beta`` index exceeding ``b``, or the first start ``m`` whose
    window ``alpha_m .. alpha_{m+L(D)-1}`` has no entry ``>= D``.
    """
    ld = _eval_L(L, D)
    if ld is None or ld == INFINITY:
        return NotUssCheck(False, "L undefined", None)
    ld = int(ld)
    if prefix_len < ld:
        raise ValueError("prefix_len must be >= L(D)")
    betas = stream.betas(prefix_len)
    over = np.flatnonzero(betas > b)
    if over.size:
        return NotUssCheck(False, "beta", int(over[0]) + 1)
    hit = stream.alphas(prefix_len) >= D
    # number of hits in each length-ld index window
    csum = np.concatenate(([0], np.cumsum(hit)))
    counts = csum[ld:] - csum[:-ld]
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        return NotUssCheck(False, "alpha", int(empty[0]) + 1)
    return NotUssCheck(True)


def empirical_L(stream: BlockStream, D: int, prefix_len: int):
    """Smallest ``L`` with an ``alpha >= D`` in every length-``L`` window of the prefix.

    Returns ``math.inf`` when no entry of the prefix reaches ``D``.
    """
    if prefix_len < 1:
        raise ValueError("prefix_len must be >= 1")
    spacing = kernels.hit_spacing(stream.alphas(prefix_len), D)
    return INFINITY if spacing < 0 else spacing


def construction42_L(K: int, M: int, D: int) -> int:
    """Window length ``R_D + r_{D+1} + 1`` valid from every start index.

    Past ``R_D`` an entry exceeding ``D`` occurs within ``r_{D+1}`` steps;
    the extra ``R_D`` reaches that region from any earlier start.
    """
    if D < 1:
        raise ValueError("D must be >= 1")
    return R_closed(D, M) + r_closed(D + 1, M) + 1


def max_beta(stream: BlockStream, prefix_len: int) -> int:
    return int(stream.betas(prefix_len).max())
