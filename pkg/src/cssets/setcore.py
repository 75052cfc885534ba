"""Lazy descriptions of infinite subsets of Z and the run/gap block encoding.

A subset ``A`` of the naturals that contains 0 and is neither finite nor
cofinite is determined by the lengths of its alternating runs of members
(``alpha``) and non-members (``beta``).  :class:`BlockStream` holds such a
sequence lazily; :func:`encode_blocks` and :func:`decode_blocks` convert
between finite windows and pair prefixes.

Descriptors (:class:`SetDescriptor` subclasses) are immutable and decide
membership of any integer in finite time.  They combine with the usual
operators::

    evens = Periodic(2, {0})
    odds = evens + 1          # translate
    evens | odds              # union
    ~evens                    # complement
    -odds                     # reflection z -> -z
"""
from __future__ import annotations

import base64
import bisect
import hashlib
import itertools
import json
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import BudgetExceeded, InsufficientData, OmegaViolation, StreamExhausted

DEFAULT_BUDGET = 10_000_000

TAIL_POLICIES = ("repeat-last", "error")


def set_default_budget(steps: int) -> None:
    global DEFAULT_BUDGET
    DEFAULT_BUDGET = int(steps)


class BlockStream:
    """A lazily produced, memoized sequence of positive pairs ``(alpha_n, beta_n)``.

    ``factory`` is a zero-argument callable returning an iterator of pairs.
    Pairs are indexed from 1.  Reading past ``budget`` pairs raises
    :class:`BudgetExceeded`.  The memo is guarded by a lock, so concurrent
    readers see one and the same prefix.
    """

    def __init__(self, factory: Callable[[], Iterator[tuple[int, int]]], *,
                 budget: int | None = None, spec: dict | None = None, name: str = "stream"):
        self._factory = factory
        self._iter: Iterator[tuple[int, int]] | None = None
        self._alpha: list[int] = []
        self._beta: list[int] = []
        self._starts: list[int] = []
        self._reach = 0  # start of the next, not yet produced block
        self._lock = threading.Lock()
        self.budget = budget
        self.spec = spec
        self.name = name

    @classmethod
    def from_lists(cls, alpha: Sequence[int], beta: Sequence[int], tail: str = "repeat-last",
                   budget: int | None = None) -> "BlockStream":
        alpha, beta = [int(a) for a in alpha], [int(b) for b in beta]
        if len(alpha) != len(beta) or not alpha:
            raise ValueError("alpha and beta must be nonempty and of equal length")
        if tail not in TAIL_POLICIES:
            raise ValueError(f"tail must be one of {TAIL_POLICIES}")

        def gen():
            yield from zip(alpha, beta)
            if tail == "error":
                raise StreamExhausted(f"finite block stream of length {len(alpha)} exhausted")
            last = (alpha[-1], beta[-1])
            while True:
                yield last

        spec = {"alpha": alpha, "beta": beta, "tail": tail}
        return cls(gen, budget=budget, spec=spec, name="lists")

    @classmethod
    def from_function(cls, fn: Callable[[int], tuple[int, int]], budget: int | None = None,
                      spec: dict | None = None, name: str = "function") -> "BlockStream":
        return cls(lambda: (fn(n) for n in itertools.count(1)), budget=budget, spec=spec, name=name)

    def __repr__(self):
        return f"BlockStream({self.name}, produced={len(self._alpha)})"

    # -- memo -------------------------------------------------------------
    def _budget(self) -> int:
        return DEFAULT_BUDGET if self.budget is None else self.budget

    def _pull(self) -> None:
        if len(self._alpha) >= self._budget():
            raise BudgetExceeded(f"{self.name}: more than {self._budget()} pairs requested")
        if self._iter is None:
            self._iter = iter(self._factory())
        try:
            a, b = next(self._iter)
        except StopIteration:
            raise StreamExhausted(f"{self.name}: source ended after {len(self._alpha)} pairs") from None
        if a < 1 or b < 1:
            raise ValueError(f"{self.name}: pair {len(self._alpha) + 1} = {(a, b)} is not positive")
        self._starts.append(self._reach)
        self._alpha.append(int(a))
        self._beta.append(int(b))
        self._reach += int(a) + int(b)

    def ensure(self, count: int) -> None:
        if len(self._alpha) >= count:
            return
        with self._lock:
            while len(self._alpha) < count:
                self._pull()

    def ensure_reach(self, z: int) -> None:
        """Produce pairs until the block containing position ``z`` is known."""
        if self._reach > z:
            return
        with self._lock:
            while self._reach <= z:
                self._pull()

    # -- access -----------------------------------------------------------
    def pair(self, n: int) -> tuple[int, int]:
        if n < 1:
            raise IndexError("pairs are indexed from 1")
        self.ensure(n)
        return self._alpha[n - 1], self._beta[n - 1]

    def alpha(self, n: int) -> int:
        return self.pair(n)[0]

    def beta(self, n: int) -> int:
        return self.pair(n)[1]

    def prefix(self, count: int) -> list[tuple[int, int]]:
        self.ensure(count)
        return list(zip(self._alpha[:count], self._beta[:count]))

    def alphas(self, count: int) -> np.ndarray:
        self.ensure(count)
        return np.asarray(self._alpha[:count], dtype=np.int64)

    def betas(self, count: int) -> np.ndarray:
        self.ensure(count)
        return np.asarray(self._beta[:count], dtype=np.int64)

    def contains(self, z: int) -> bool:
        if z < 0:
            return False
        self.ensure_reach(z)
        k = bisect.bisect_right(self._starts, z) - 1
        return z < self._starts[k] + self._alpha[k]

    def intervals_upto(self, hi: int) -> tuple[np.ndarray, np.ndarray]:
        """Start/end arrays of every member block starting at or before ``hi``."""
        self.ensure_reach(hi)
        k = bisect.bisect_right(self._starts, hi)
        starts = np.asarray(self._starts[:k], dtype=np.int64)
        return starts, starts + np.asarray(self._alpha[:k], dtype=np.int64)

    def to_json(self) -> dict:
        if self.spec is None:
            raise TypeError(f"{self!r} has no JSON form")
        return dict(self.spec)


def stream_from_json(obj: dict) -> BlockStream:
    return BlockStream.from_lists(obj["alpha"], obj["beta"], obj.get("tail", "repeat-last"))


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Window:
    """Membership bits of a descriptor over the integer range ``[lo, hi]``."""

    lo: int
    hi: int
    bits: np.ndarray

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("window needs lo <= hi")
        if self.bits.shape != (self.hi - self.lo + 1,):
            raise ValueError("bits length does not match [lo, hi]")

    def __len__(self):
        return self.hi - self.lo + 1

    def __eq__(self, other):
        return (isinstance(other, Window) and self.lo == other.lo and self.hi == other.hi
                and bool(np.array_equal(self.bits, other.bits)))

    def positions(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.bits).astype(np.int64) + self.lo

    def member(self, z: int) -> bool:
        if not self.lo <= z <= self.hi:
            raise IndexError(f"{z} outside window [{self.lo}, {self.hi}]")
        return bool(self.bits[z - self.lo])

    def to_json(self) -> dict:
        packed = np.packbits(self.bits, bitorder="little").tobytes()
        return {"lo": int(self.lo), "hi": int(self.hi), "bits": base64.b64encode(packed).decode("ascii")}

    @classmethod
    def from_json(cls, obj: dict) -> "Window":
        lo, hi = int(obj["lo"]), int(obj["hi"])
        raw = np.frombuffer(base64.b64decode(obj["bits"]), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little", count=hi - lo + 1).astype(bool)
        return cls(lo, hi, bits)


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

_JSON_KINDS: dict[str, Callable[[dict], "SetDescriptor"]] = {}


def register_kind(name: str):
    def deco(parser):
        _JSON_KINDS[name] = parser
        return parser

    return deco


class SetDescriptor:
    """Base class: a decidable subset of Z."""

    def member(self, z: int) -> bool:
        raise NotImplementedError

    def _window_bits(self, lo: int, hi: int) -> np.ndarray:
        return np.fromiter((self.member(z) for z in range(lo, hi + 1)), dtype=bool, count=hi - lo + 1)

    def window(self, lo: int, hi: int) -> Window:
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise ValueError("window needs lo <= hi")
        return Window(lo, hi, np.asarray(self._window_bits(lo, hi), dtype=bool))

    def to_json(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no JSON form")

    def __contains__(self, z: int) -> bool:
        return self.member(z)

    def __or__(self, other):
        return Algebra("union", (self, other))

    def __and__(self, other):
        return Algebra("intersection", (self, other))

    def __invert__(self):
        return Algebra("complement", (self,))

    def __add__(self, t: int):
        return Algebra("translate", (self,), by=int(t))

    def __sub__(self, t: int):
        return Algebra("translate", (self,), by=-int(t))

    def __neg__(self):
        return Algebra("reflect", (self,))


def member(desc: SetDescriptor, z: int) -> bool:
    return desc.member(int(z))


def window(desc: SetDescriptor, lo: int, hi: int) -> Window:
    return desc.window(lo, hi)


@dataclass(frozen=True)
class Periodic(SetDescriptor):
    period: int
    residues: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be positive")
        object.__setattr__(self, "residues", frozenset(int(r) % self.period for r in self.residues))

    def member(self, z):
        return z % self.period in self.residues

    def _window_bits(self, lo, hi):
        res = np.zeros(self.period, dtype=bool)
        res[list(self.residues)] = True
        return res[(np.arange(hi - lo + 1, dtype=np.int64) + (lo % self.period)) % self.period]

    def to_json(self):
        return {"kind": "periodic", "period": self.period, "residues": sorted(self.residues)}


@dataclass(frozen=True)
class AllOfN:
    """The minus side is all of the naturals (set is cofinite to the left)."""

    def contains(self, z: int) -> bool:
        return z >= 0

    def mask(self, lo: int, hi: int) -> np.ndarray:
        return np.ones(hi - lo + 1, dtype=bool)

    def to_json(self):
        return "all"


@dataclass(frozen=True)
class FiniteList:
    """The minus side is a finite subset of the naturals."""

    values: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted({int(v) for v in self.values})))
        if any(v < 0 for v in self.values):
            raise ValueError("FiniteList holds naturals only")

    def contains(self, z: int) -> bool:
        return z in self.values

    def mask(self, lo: int, hi: int) -> np.ndarray:
        return np.isin(np.arange(lo, hi + 1, dtype=np.int64), np.asarray(self.values, dtype=np.int64))

    def to_json(self):
        return {"finite": list(self.values)}


def _stream_mask(stream: BlockStream, lo: int, hi: int) -> np.ndarray:
    starts, ends = stream.intervals_upto(hi)
    return kernels.paint_intervals(starts, ends, lo, hi)


def _side_contains(side, z: int) -> bool:
    return side.contains(z)


def _side_mask(side, lo: int, hi: int) -> np.ndarray:
    if isinstance(side, BlockStream):
        return _stream_mask(side, lo, hi)
    return side.mask(lo, hi)


def _two_sided_bits(plus, minus, lo: int, hi: int) -> np.ndarray:
    """Bits of ``A+ ∪ -A-`` over ``[lo, hi]`` given natural-side objects."""
    out = np.zeros(hi - lo + 1, dtype=bool)
    if hi >= 0:
        a = max(lo, 0)
        out[a - lo:] = _side_mask(plus, a, hi)
    if lo < 0:
        b = min(hi, -1)
        m = _side_mask(minus, -b, -lo)  # covers -z for z in [lo, b]
        out[: b - lo + 1] = m[::-1]
    return out


@dataclass(frozen=True, eq=False)
class BlockEncoded(SetDescriptor):
    """``A = A+ ∪ -A-`` with ``A+`` given by a block stream (so ``0 ∈ A``)."""

    plus: BlockStream
    minus: object = FiniteList()

    def member(self, z):
        if z >= 0:
            return self.plus.contains(z)
        return _side_contains(self.minus, -z)

    def _window_bits(self, lo, hi):
        return _two_sided_bits(self.plus, self.minus, lo, hi)

    def to_json(self):
        minus = self.minus.to_json()
        return {"kind": "blocks", "plus": self.plus.to_json(), "minus": minus}


@lru_cache(maxsize=None)
def _construction42_stream(K: int, M: int) -> BlockStream:
    from .constructions import alpha_stream

    return alpha_stream(K, M)


@dataclass(frozen=True)
class Construction42(SetDescriptor):
    """Symmetric low-density set built from the triangular gamma array."""

    K: int
    M: int = 2

    def __post_init__(self):
        if self.K < 1 or self.M < 2:
            raise ValueError("need K >= 1 and M >= 2")

    @property
    def stream(self) -> BlockStream:
        return _construction42_stream(self.K, self.M)

    def member(self, z):
        return self.stream.contains(abs(z))

    def _window_bits(self, lo, hi):
        return _two_sided_bits(self.stream, self.stream, lo, hi)

    def to_json(self):
        return {"kind": "construction42", "K": self.K, "M": self.M}


def in_b_set(z: int) -> bool:
    """``z ∈ {2^n + 2k : n ≥ 0, 0 ≤ k ≤ n-1}``."""
    if z < 2 or z % 2:
        return False
    n = z.bit_length() - 1
    return (z - (1 << n)) // 2 <= n - 1


def b_set_elements(lo: int, hi: int) -> list[int]:
    out = []
    if hi < 2:
        return out
    n = max(1, max(lo, 1).bit_length() - 1)
    while (1 << n) <= hi:
        base = 1 << n
        for k in range(n):
            v = base + 2 * k
            if v > hi:
                break
            if v >= lo:
                out.append(v)
        n += 1
    return out


@dataclass(frozen=True)
class CorollaryB(SetDescriptor):
    """``part='B'``: the set B; ``part='A'``: the thick syndetic set Z minus (B ∪ -B)."""

    part: str = "A"

    def __post_init__(self):
        if self.part not in ("A", "B"):
            raise ValueError("part must be 'A' or 'B'")

    def member(self, z):
        if self.part == "B":
            return in_b_set(z)
        return not (in_b_set(z) or in_b_set(-z))

    def _b_bits(self, lo, hi):
        out = np.zeros(hi - lo + 1, dtype=bool)
        for v in b_set_elements(lo, hi):
            out[v - lo] = True
        return out

    def _window_bits(self, lo, hi):
        b = self._b_bits(lo, hi)
        if self.part == "B":
            return b
        return ~(b | self._b_bits(-hi, -lo)[::-1])

    def to_json(self):
        out = {"kind": "corollaryB"}
        if self.part != "A":
            out["part"] = self.part
        return out


ALGEBRA_OPS = ("union", "intersection", "complement", "translate", "reflect")


@dataclass(frozen=True)
class Algebra(SetDescriptor):
    op: str
    children: tuple
    by: int = 0

    def __post_init__(self):
        if self.op not in ALGEBRA_OPS:
            raise ValueError(f"unknown op {self.op!r}")
        object.__setattr__(self, "children", tuple(self.children))
        unary = self.op in ("complement", "translate", "reflect")
        if unary and len(self.children) != 1:
            raise ValueError(f"{self.op} takes exactly one child")
        if not unary and not self.children:
            raise ValueError(f"{self.op} needs at least one child")

    def member(self, z):
        op, ch = self.op, self.children
        if op == "union":
            return any(c.member(z) for c in ch)
        if op == "intersection":
            return all(c.member(z) for c in ch)
        if op == "complement":
            return not ch[0].member(z)
        if op == "translate":
            return ch[0].member(z - self.by)
        return ch[0].member(-z)

    def _window_bits(self, lo, hi):
        op, ch = self.op, self.children
        if op == "union":
            return np.logical_or.reduce([c.window(lo, hi).bits for c in ch])
        if op == "intersection":
            return np.logical_and.reduce([c.window(lo, hi).bits for c in ch])
        if op == "complement":
            return ~ch[0].window(lo, hi).bits
        if op == "translate":
            return ch[0].window(lo - self.by, hi - self.by).bits
        return ch[0].window(-hi, -lo).bits[::-1].copy()

    def to_json(self):
        if self.op in ("union", "intersection"):
            return {"kind": self.op, "children": [c.to_json() for c in self.children]}
        if self.op == "translate":
            return {"kind": "translate", "by": self.by, "child": self.children[0].to_json()}
        return {"kind": self.op, "child": self.children[0].to_json()}


@dataclass(frozen=True)
class Side(SetDescriptor):
    """``{z ≥ 0 : sign·z ∈ child}``: one half of a set, folded onto the naturals."""

    child: SetDescriptor
    sign: int = 1

    def member(self, z):
        return z >= 0 and self.child.member(self.sign * z)

    def _window_bits(self, lo, hi):
        out = np.zeros(hi - lo + 1, dtype=bool)
        if hi < 0:
            return out
        a = max(lo, 0)
        if self.sign > 0:
            out[a - lo:] = self.child.window(a, hi).bits
        else:
            out[a - lo:] = self.child.window(-hi, -a).bits[::-1]
        return out

    def to_json(self):
        return {"kind": "side", "sign": self.sign, "child": self.child.to_json()}


def split(desc: SetDescriptor) -> tuple[Side, Side]:
    """``(A ∩ N, (-A) ∩ N)`` as descriptors over the naturals."""
    return Side(desc, 1), Side(desc, -1)


def normalize(desc: SetDescriptor, search: int = 10_000) -> tuple[SetDescriptor, int]:
    """Translate ``desc`` so that 0 is a member.

    Picks the member nearest 0 in (|z|, nonnegative first) order within
    ``search``; returns the translated descriptor and the applied shift.
    """
    if desc.member(0):
        return desc, 0
    for r in range(1, search + 1):
        for z in (r, -r):
            if desc.member(z):
                return desc + (-z), -z
    raise ValueError(f"no member within {search} of 0")


# ---------------------------------------------------------------------------
# block encoding
# ---------------------------------------------------------------------------


def encode_blocks(win: Window, complete: bool = False) -> list[tuple[int, int]]:
    """Read the closed (alpha, beta) pairs off a window ``[0, hi]`` over the naturals.

    A pair is closed once the member following its gap is visible.  With
    ``complete=True`` position ``hi + 1`` is taken to be a member, so a
    trailing gap closes at the window's end.
    """
    if win.lo != 0:
        raise ValueError("encode_blocks expects a window starting at 0")
    bits = np.asarray(win.bits, dtype=bool)
    if not bits[0]:
        raise OmegaViolation("0 is not a member; the plus side must contain 0")
    padded = np.concatenate((bits, [complete])).astype(np.int8)
    edges = np.diff(np.concatenate(([0], padded)))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    count = min(len(starts) - 1, len(ends))
    if count < 1:
        raise InsufficientData("window does not close a single (alpha, beta) pair")
    alpha = ends[:count] - starts[:count]
    beta = starts[1:count + 1] - ends[:count]
    return [(int(a), int(b)) for a, b in zip(alpha, beta)]


def decode_blocks(pairs: BlockStream | Iterable[tuple[int, int]], count: int) -> list[tuple[int, int]]:
    """Half-open intervals ``[l_k, r_k)`` of the first ``count`` member blocks."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if isinstance(pairs, BlockStream):
        seq = pairs.prefix(count)
    else:
        seq = list(itertools.islice(pairs, count))
        if len(seq) < count:
            raise StreamExhausted(f"need {count} pairs, got {len(seq)}")
    out = []
    left = 0
    for a, b in seq:
        if a < 1 or b < 1:
            raise ValueError(f"pair {(a, b)} is not positive")
        out.append((left, left + a))
        left += a + b
    return out


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _minus_from_json(obj):
    if obj is None:
        return FiniteList()
    if obj == "all" or (isinstance(obj, dict) and obj.get("all")):
        return AllOfN()
    if isinstance(obj, dict) and "finite" in obj:
        return FiniteList(obj["finite"])
    return stream_from_json(obj)


register_kind("periodic")(lambda o: Periodic(int(o["period"]), frozenset(o["residues"])))
register_kind("blocks")(lambda o: BlockEncoded(stream_from_json(o["plus"]), _minus_from_json(o.get("minus"))))
register_kind("construction42")(lambda o: Construction42(int(o["K"]), int(o.get("M", 2))))
register_kind("corollaryB")(lambda o: CorollaryB(o.get("part", "A")))
register_kind("union")(lambda o: Algebra("union", tuple(descriptor_from_json(c) for c in o["children"])))
register_kind("intersection")(
    lambda o: Algebra("intersection", tuple(descriptor_from_json(c) for c in o["children"])))
register_kind("complement")(lambda o: Algebra("complement", (descriptor_from_json(o["child"]),)))
register_kind("reflect")(lambda o: Algebra("reflect", (descriptor_from_json(o["child"]),)))
register_kind("translate")(
    lambda o: Algebra("translate", (descriptor_from_json(o["child"]),), by=int(o["by"])))
register_kind("side")(lambda o: Side(descriptor_from_json(o["child"]), int(o.get("sign", 1))))


def descriptor_from_json(obj: dict | str) -> SetDescriptor:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind not in _JSON_KINDS:
        raise ValueError(f"unknown descriptor kind {kind!r}")
    return _JSON_KINDS[kind](obj)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def descriptor_hash(desc: SetDescriptor) -> str:
    return hashlib.sha256(canonical_json(desc.to_json()).encode()).hexdigest()
