"""n-syndetic witnesses over Z: checking, searching, synthesis and refutation.

A finite translate set ``F`` witnesses that ``A`` is n-syndetic when every
``S`` with ``|S| <= n`` satisfies ``S ⊂ f + A`` for some ``f ∈ F``.  Only a
finite window ``W`` can be inspected, so every positive answer here is
"verified up to the horizon of W".

The check is a hitting-set question.  For ``f ∈ F`` put
``B_f = W \\ (f + A)``; a set ``S ⊂ W`` defeats every translate exactly
when it meets every ``B_f``.  :func:`cssets.kernels.find_hitting_set` runs
the branch and bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import kernels
from .errors import BudgetExceeded, CertificateDomainError
from .setcore import (
    AllOfN,
    BlockEncoded,
    BlockStream,
    Construction42,
    CorollaryB,
    FiniteList,
    SetDescriptor,
    Window,
)
from .uss import construction42_L, empirical_L

# translate-set sizes tried, in order, when F is too large to use whole
TRUNCATION_LADDER = (129, 513, 1025)

# half-width of the region searched for pattern occurrences
PATTERN_SCAN_RADIUS = 1 << 17
# analytic L(D) grows like M**D, so larger arguments cannot be materialized
MAX_L_ARGUMENT = 1 << 20


def translate_key(f: int) -> tuple[int, bool]:
    """Canonical order on integers: by absolute value, nonnegative first."""
    return abs(f), f < 0


def sort_translates(F: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted({int(f) for f in F}, key=translate_key))


def _range_len(F: range) -> int:
    return max(0, (F.stop - F.start + F.step - 1) // F.step) if F.step > 0 else len(F)


def _nearest(F, k: int) -> list[int]:
    """The first ``k`` elements of ``F`` in translate order."""
    if not isinstance(F, range):
        return list(sort_translates(F))[:k]
    if F.step != 1:
        return list(sort_translates(F))[:k]
    lo, hi = F.start, F.stop - 1
    if lo >= 0:
        return list(range(lo, min(hi, lo + k - 1) + 1))
    if hi <= 0:
        return list(range(hi, max(lo, hi - k + 1) - 1, -1))
    out = [0]
    r = 1
    while len(out) < k and (r <= hi or -r >= lo):
        if r <= hi:
            out.append(r)
        if -r >= lo and len(out) < k:
            out.append(-r)
        r += 1
    return out


def _bounds(W) -> tuple[int, int]:
    if isinstance(W, Window):
        return W.lo, W.hi
    lo, hi = W
    return int(lo), int(hi)


def window_order(lo: int, hi: int) -> np.ndarray:
    """Indices of ``[lo, hi]`` sorted by (|z|, nonnegative first)."""
    z = np.arange(lo, hi + 1, dtype=np.int64)
    return np.lexsort((z < 0, np.abs(z))).astype(np.int64)


def good_matrix(desc: SetDescriptor, F: Sequence[int], lo: int, hi: int) -> np.ndarray:
    """``G[i, j] = (lo + j) - F[i] ∈ A``: position j of W lies in ``F[i] + A``."""
    F = np.asarray(F, dtype=np.int64)
    fmin, fmax = int(F.min()), int(F.max())
    n = hi - lo + 1
    big = desc.window(lo - fmax, hi - fmin).bits
    return sliding_window_view(big, n)[fmax - F]


@dataclass
class CheckResult:
    n: int
    lo: int
    hi: int
    status: str                               # verified | counterexample | undetermined
    counterexample: tuple = ()
    evidence: dict = field(default_factory=dict)  # translate -> element of S outside it
    translates_checked: int = 0
    method: str = "hitting-set"                   # hitting-set | patterns

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        out = {"n": self.n, "lo": self.lo, "hi": self.hi, "status": self.status,
               "translates_checked": self.translates_checked, "method": self.method}
        if self.counterexample:
            out["counterexample"] = list(self.counterexample)
            out["evidence"] = [[f, s] for f, s in self.evidence.items()]
        return out


def _check_explicit(desc, n, F, lo, hi) -> CheckResult:
    F = list(F)
    good = good_matrix(desc, F, lo, hi)
    found = kernels.find_hitting_set(~good, window_order(lo, hi), n)
    if found is None:
        return CheckResult(n, lo, hi, "verified", translates_checked=len(F))
    S = tuple(sorted((lo + int(i) for i in found), key=translate_key))
    evidence = {}
    for i, f in enumerate(F):
        for s in S:
            if not good[i, s - lo]:
                evidence[f] = s
                break
    return CheckResult(n, lo, hi, "counterexample", S, evidence, len(F))


def _as_interval(F):
    """``(a, b)`` when ``F`` is exactly the integers ``a..b``, else None."""
    if isinstance(F, range):
        if F.step == 1 and F.stop > F.start:
            return F.start, F.stop - 1
        F = list(F)
    vals = sorted({int(f) for f in F})
    if vals and vals[-1] - vals[0] + 1 == len(vals):
        return vals[0], vals[-1]
    return None


def _next_pattern(k: int, d1: int, d2: int) -> tuple[int, int, int]:
    if k == 1:
        return 2, 1, 0
    if k == 2:
        return 2, d1 + 1, 0
    return 3, d1, d2 + 1


def _pattern_offsets(k: int, d1: int, d2: int) -> tuple[int, ...]:
    return ((0,), (0, d1), (0, d1, d2))[k - 1]


def _uncovered_start(desc, P, a: int, b: int, lo: int, hi: int):
    """First ``s`` (translate order) in ``[lo, hi - max P]`` with no ``f ∈ [a, b]`` putting ``s + P`` in ``f + A``."""
    top = hi - P[-1]
    rlo, rhi = lo - b, top - a
    occ = np.ones(rhi - rlo + 1, dtype=bool)
    for p in P:
        occ &= desc.window(rlo + p, rhi + p).bits
    # s covered iff an occurrence lies in [s - b, s - a]
    csum = np.concatenate(([0], np.cumsum(occ)))
    width = b - a + 1
    counts = csum[width:] - csum[:-width]
    empty = np.flatnonzero(counts == 0)
    if not empty.size:
        return None
    starts = lo + empty
    return int(min(starts, key=translate_key))


def _check_patterns(desc, n: int, a: int, b: int, lo: int, hi: int) -> CheckResult:
    """Exact check for an interval ``F = [a, b]`` at least as wide as ``W``.

    Writing ``S = s + P`` with ``min P = 0``, ``S ⊂ f + A`` for some
    ``f ∈ F`` iff ``P`` occurs in ``A`` at a point of ``[s - b, s - a]``.
    Every such interval contains the core ``[hi - b, lo - a]``, so one
    occurrence of each pattern in the core settles it.  The scan looks at
    the part of the core nearest 0; a pattern missing there is re-examined
    start by start when the whole core was scanned, and otherwise leaves
    the answer undetermined.
    """
    D = hi - lo
    count = b - a + 1
    core_lo, core_hi = hi - b, lo - a
    centre = min(max(0, core_lo), core_hi)
    zlo = max(core_lo, centre - PATTERN_SCAN_RADIUS)
    zhi = min(core_hi, centre + PATTERN_SCAN_RADIUS)
    whole_core = zlo == core_lo and zhi == core_hi
    bits = desc.window(zlo, zhi + D).bits
    scan = window_order(zlo, zhi)
    size = min(n, D + 1)
    start = (1, 0, 0)
    while True:
        k, d1, d2 = kernels.pattern_scan(bits, scan, D, size, start)
        if k == 0:
            return CheckResult(n, lo, hi, "verified", translates_checked=count, method="patterns")
        if not whole_core:
            return CheckResult(n, lo, hi, "undetermined", translates_checked=count, method="patterns")
        P = _pattern_offsets(k, d1, d2)
        s0 = _uncovered_start(desc, P, a, b, lo, hi)
        if s0 is not None:
            break
        start = _next_pattern(k, d1, d2)
    S = tuple(sorted((s0 + p for p in P), key=translate_key))
    fs = np.arange(a, b + 1, dtype=np.int64)
    evidence = {}
    owner = np.full(fs.size, -1, dtype=np.int64)
    for s in S:
        outside = ~desc.window(s - b, s - a).bits[::-1]
        take = (owner < 0) & outside
        owner[take] = s
    for f, s in zip(fs.tolist(), owner.tolist()):
        evidence[f] = s
    evidence = {f: evidence[f] for f in sorted(evidence, key=translate_key)}
    return CheckResult(n, lo, hi, "counterexample", S, evidence, count, method="patterns")


def check_witness(desc: SetDescriptor, n: int, F, W, *, max_translates: int = TRUNCATION_LADDER[-1]) -> CheckResult:
    """Decide, inside ``W``, whether ``F`` witnesses n-syndeticity of ``desc``.

    ``F`` may be a sequence or a ``range``.  For ``n <= 3`` and ``F`` an
    integer interval at least as wide as ``W`` the answer comes from a
    pattern-occurrence scan, which copes with astronomically wide ``F``.
    Otherwise a hitting-set search runs over ``F``, or, when ``F`` has more
    than ``max_translates`` elements, over sub-sets of its elements nearest
    0: success of a subset proves success of ``F``; if every subset tried
    fails, the status is ``undetermined`` rather than a counterexample.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lo, hi = _bounds(W)
    if lo > hi:
        raise ValueError("W must be nonempty")
    size = _range_len(F) if isinstance(F, range) else len(set(F))
    if size == 0:
        raise ValueError("F must be nonempty")
    iv = _as_interval(F) if n <= 3 else None
    if iv is not None and iv[1] - iv[0] >= hi - lo:
        return _check_patterns(desc, n, iv[0], iv[1], lo, hi)
    if size <= max_translates:
        return _check_explicit(desc, n, _nearest(F, size), lo, hi)
    res = None
    for k in TRUNCATION_LADDER:
        k = min(k, max_translates)
        res = _check_explicit(desc, n, _nearest(F, k), lo, hi)
        if res.verified:
            return res
        if k == max_translates:
            break
    return CheckResult(n, lo, hi, "undetermined", translates_checked=res.translates_checked)


def brute_force_check(desc: SetDescriptor, n: int, F: Sequence[int], lo: int, hi: int):
    """Exhaustive oracle: first ``S`` (size exactly ``min(n, |W|)``) no translate covers, or None."""
    from itertools import combinations

    good = good_matrix(desc, list(F), lo, hi)
    width = hi - lo + 1
    for S in combinations(range(width), min(n, width)):
        if not good[:, list(S)].all(axis=1).any():
            return tuple(lo + s for s in S)
    return None


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------


@dataclass
class Witness:
    n: int
    translates: object            # sorted tuple, or a range
    horizon: int
    status: str                   # verified | refuted | failed | undetermined
    counterexample: tuple = ()

    def to_json(self) -> dict:
        F = self.translates
        if isinstance(F, range) and _range_len(F) > 10_000:
            translates = {"lo": F.start, "hi": F.stop - 1}
        else:
            translates = list(F)
        out = {"n": self.n, "translates": translates, "horizon": self.horizon, "status": self.status}
        if self.counterexample:
            out["counterexample"] = list(self.counterexample)
        return out


def _horizon(lo: int, hi: int) -> int:
    return max(abs(lo), abs(hi))


def find_witness(desc: SetDescriptor, n: int, W, search_radius: int) -> Witness:
    """Greedy translate search inside ``[-search_radius, search_radius]``.

    For n = 1 it greedily covers W.  For larger n it then alternates the
    exact check with adding the first candidate (in translate order) that
    covers the counterexample found.  ``status='failed'`` means no candidate
    within the radius covers some ``S``: evidence only, not a proof of
    anything about ``desc``.
    """
    if search_radius < 0:
        raise ValueError("search_radius must be >= 0")
    lo, hi = _bounds(W)
    H = _horizon(lo, hi)
    cands = list(sort_translates(range(-search_radius, search_radius + 1)))
    good = good_matrix(desc, cands, lo, hi)
    uncovered = np.ones(hi - lo + 1, dtype=bool)
    chosen: list[int] = []
    while uncovered.any():
        gains = good[:, uncovered].sum(axis=1)
        best = int(np.argmax(gains))
        if gains[best] == 0:
            z = lo + int(np.flatnonzero(uncovered)[0])
            return Witness(n, sort_translates(cands[i] for i in chosen), H, "failed", (z,))
        chosen.append(best)
        uncovered &= ~good[best]
    while True:
        F = [cands[i] for i in sorted(chosen)]
        res = _check_explicit(desc, n, F, lo, hi)
        if res.verified:
            return Witness(n, sort_translates(F), H, "verified")
        cols = [s - lo for s in res.counterexample]
        covering = np.flatnonzero(good[:, cols].all(axis=1))
        fresh = [int(i) for i in covering if int(i) not in chosen]
        if not fresh:
            return Witness(n, sort_translates(F), H, "failed", res.counterexample)
        chosen.append(fresh[0])


# ---------------------------------------------------------------------------
# certificates and synthesis
# ---------------------------------------------------------------------------


@dataclass
class AnalyticCertificate:
    """Gap bound ``b`` and window function ``D -> L(D)`` for a set's block streams.

    ``provenance`` is ``'analytic'`` (a proof-backed bound) or
    ``'empirical'`` (prefix scans over ``prefix_len`` pairs).
    """

    b: int
    L: object
    provenance: str = "analytic"
    prefix_len: int | None = None
    _memo: dict = field(default_factory=dict, repr=False)

    def L_at(self, D: int) -> int:
        if D in self._memo:
            return self._memo[D]
        try:
            if callable(self.L):
                value = self.L(D)
            elif isinstance(self.L, Mapping):
                value = self.L.get(D)
            else:
                value = self.L
        except BudgetExceeded as exc:
            raise CertificateDomainError(f"L({D}) needs more of the stream than the budget allows") from exc
        if value is None or value == math.inf:
            raise CertificateDomainError(f"certificate ({self.provenance}) has no L({D})")
        self._memo[D] = int(value)
        return self._memo[D]

    def describe(self) -> dict:
        out = {"b": self.b, "provenance": self.provenance}
        if self.prefix_len is not None:
            out["prefix_len"] = self.prefix_len
        out["L"] = {str(d): v for d, v in sorted(self._memo.items())}
        return out


def _sides(desc) -> list[BlockStream]:
    if isinstance(desc, Construction42):
        return [desc.stream]
    if isinstance(desc, BlockEncoded):
        out = [desc.plus]
        if isinstance(desc.minus, BlockStream):
            out.append(desc.minus)
        elif isinstance(desc.minus, FiniteList):
            raise ValueError("minus side is finite: the set is bounded below and not syndetic")
        return out
    raise TypeError("certificates need a block-encoded descriptor")


def empirical_certificate(desc, prefix_len: int) -> AnalyticCertificate:
    """Certificate read off the first ``prefix_len`` pairs of each side's stream."""
    streams = _sides(desc)
    b = max(int(s.betas(prefix_len).max()) for s in streams)

    def L(D):
        return max(empirical_L(s, D, prefix_len) for s in streams)

    return AnalyticCertificate(b, L, "empirical", prefix_len)


def construction42_certificate(K: int, M: int) -> AnalyticCertificate:
    return AnalyticCertificate(K, lambda D: construction42_L(K, M, D), "analytic")


def synthesize_radii(cert: AnalyticCertificate, n_max: int) -> list[int]:
    """Radii ``M_1..M_nmax``: ``M_1 = b``, ``M_{n+1} = (b + 2M_n)(L(2M_n + 1) + 3)``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    radii = [cert.b]
    while len(radii) < n_max:
        m = radii[-1]
        if 2 * m + 1 > MAX_L_ARGUMENT:
            raise CertificateDomainError(f"L({2 * m + 1}) is past the evaluable range (D <= {MAX_L_ARGUMENT})")
        radii.append((cert.b + 2 * m) * (cert.L_at(2 * m + 1) + 3))
    return radii


def synthesize_witnesses(cert: AnalyticCertificate, n_max: int) -> list[range]:
    """Symmetric translate sets ``F_1..F_nmax`` (as ranges) built from a certificate."""
    return [range(-m, m + 1) for m in synthesize_radii(cert, n_max)]


# ---------------------------------------------------------------------------
# gap and run scans
# ---------------------------------------------------------------------------


def gap_bound(desc: SetDescriptor, horizon: int) -> int:
    """Longest run of non-members lying strictly inside ``[-horizon, horizon]``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    bits = desc.window(-horizon, horizon).bits
    return kernels.longest_run(bits, False, interior=True)


def thickness_runs(desc: SetDescriptor, horizon: int) -> int:
    """Longest run of members inside ``[-horizon, horizon]`` (clipped at the edges)."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    bits = desc.window(-horizon, horizon).bits
    return kernels.longest_run(bits, True, interior=False)


# ---------------------------------------------------------------------------
# refutation
# ---------------------------------------------------------------------------


@dataclass
class Refutation:
    n: int
    radius: int
    counterexample: tuple
    evidence: dict                # translate f -> s in S with s - f outside A

    def verify(self, desc: SetDescriptor) -> bool:
        if len(set(self.counterexample)) != self.n:
            return False
        for f in range(-self.radius, self.radius + 1):
            s = self.evidence.get(f)
            if s is None or s not in self.counterexample or desc.member(s - f):
                return False
        return True

    def to_json(self) -> dict:
        return {"n": self.n, "radius": self.radius, "status": "refuted",
                "counterexample": list(self.counterexample),
                "evidence": [[f, self.evidence[f]] for f in sorted(self.evidence, key=translate_key)]}


def refute_2syndetic_corB(r: int) -> Refutation:
    """Pair ``{2^{2r}+r-1, 2^{2r}+r}`` that no translate ``|f| <= r`` of the thick syndetic set contains."""
    if r < 1:
        raise ValueError("r must be >= 1")
    A = CorollaryB("A")
    b = 2 ** (2 * r) + r
    S = (b - 1, b)
    evidence = {}
    for f in range(-r, r + 1):
        for s in S:
            if not A.member(s - f):
                evidence[f] = s
                break
        else:
            raise AssertionError(f"translate {f} contains {S}")
    return Refutation(2, r, S, evidence)
