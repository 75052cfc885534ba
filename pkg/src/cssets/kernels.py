"""Hot inner loops, each with an ``@njit`` and a pure-numpy implementation.

Public entry points dispatch on :func:`cssets._accel.backend`.  Both paths
must return identical results; ``tests/test_kernels.py`` checks that.

Bitsets used by the numba path are ``uint64`` rows, bit ``i`` of a row
living at word ``i >> 6``, position ``i & 63``.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import jit

__all__ = [
    "pack_rows",
    "find_hitting_set",
    "longest_run",
    "longest_chain",
    "hit_spacing",
    "paint_intervals",
]

_ONE = np.uint64(1)


def pack_rows(mat: np.ndarray) -> np.ndarray:
    """Pack a 2-D bool matrix row-wise into little-endian ``uint64`` words."""
    mat = np.asarray(mat, dtype=bool)
    rows, cols = mat.shape
    words = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, words * 64), dtype=bool)
    padded[:, :cols] = mat
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(rows, words).astype(np.uint64)


# ---------------------------------------------------------------------------
# minimum hitting set of size <= n (branch and bound)
# ---------------------------------------------------------------------------


if _accel.HAS_NUMBA:
    from llvmlite import ir as _ir
    from numba.core import cgutils as _cgutils
    from numba.core import types as _types
    from numba.extending import intrinsic as _intrinsic

    def _llvm_unary(name):
        @_intrinsic
        def _op(typingctx, x):
            sig = _types.uint64(_types.uint64)

            def codegen(context, builder, signature, args):
                i64 = _ir.IntType(64)
                if name == "llvm.cttz.i64":
                    fnty = _ir.FunctionType(i64, [i64, _ir.IntType(1)])
                    fn = _cgutils.get_or_insert_function(builder.module, fnty, name)
                    return builder.call(fn, [args[0], _ir.Constant(_ir.IntType(1), 0)])
                fnty = _ir.FunctionType(i64, [i64])
                fn = _cgutils.get_or_insert_function(builder.module, fnty, name)
                return builder.call(fn, args)

            return sig, codegen

        return _op

    _popcnt_i = _llvm_unary("llvm.ctpop.i64")
    _cttz_i = _llvm_unary("llvm.cttz.i64")

    @jit
    def _ctz(word):
        return np.int64(_cttz_i(word))

    @jit
    def _popcount(word):
        return np.int64(_popcnt_i(word))

else:  # pragma: no cover

    def _ctz(word):
        return (int(word) & -int(word)).bit_length() - 1

    def _popcount(word):
        return bin(int(word)).count("1")


@jit
def _expand_nb(hrow, bad, bad_size, order, out):
    # branch on the smallest live bad set; children in caller-given order
    best = -1
    best_size = np.int64(1) << 62
    for j in range(hrow.shape[0]):
        word = hrow[j]
        while word != 0:
            f = j * 64 + _ctz(word)
            if bad_size[f] < best_size:
                best = f
                best_size = bad_size[f]
            word &= word - _ONE
    count = 0
    row = bad[best]
    for i in range(order.shape[0]):
        p = order[i]
        if (row[p >> 6] >> np.uint64(p & 63)) & _ONE:
            out[count] = p
            count += 1
    return count


@jit
def _leaf_nb(hrow, bad, dp, rank):
    """Element common to every live bad set (min rank), or -1."""
    wf = hrow.shape[0]
    # cheap refutation: two live sets already known to be disjoint
    for j in range(wf):
        word = hrow[j]
        while word != 0:
            f = j * 64 + _ctz(word)
            for jj in range(j, wf):
                if dp[f, jj] & hrow[jj]:
                    return -1
            word &= word - _ONE
    ww = bad.shape[1]
    acc = np.empty(ww, dtype=np.uint64)
    first = True
    for j in range(wf):
        word = hrow[j]
        while word != 0:
            f = j * 64 + _ctz(word)
            word &= word - _ONE
            alive = False
            if first:
                for k in range(ww):
                    acc[k] = bad[f, k]
                    if acc[k] != 0:
                        alive = True
                first = False
            else:
                for k in range(ww):
                    acc[k] &= bad[f, k]
                    if acc[k] != 0:
                        alive = True
            if not alive:
                return -1
    best = -1
    best_rank = np.int64(1) << 62
    for k in range(ww):
        word = acc[k]
        while word != 0:
            p = k * 64 + _ctz(word)
            if rank[p] < best_rank:
                best = p
                best_rank = rank[p]
            word &= word - _ONE
    return best


@jit
def _disjoint_pairs_nb(bad, wf):
    nf, ww = bad.shape
    dp = np.zeros((nf, wf), dtype=np.uint64)
    for a in range(nf):
        for b in range(a + 1, nf):
            disjoint = True
            for k in range(ww):
                if bad[a, k] & bad[b, k]:
                    disjoint = False
                    break
            if disjoint:
                dp[a, b >> 6] |= _ONE << np.uint64(b & 63)
                dp[b, a >> 6] |= _ONE << np.uint64(a & 63)
    return dp


@jit
def _miss_counts(hrow, bad_t, cnt):
    """cnt[w] = number of live sets w fails to hit; returns (live count, min cnt)."""
    wf = hrow.shape[0]
    live = 0
    for j in range(wf):
        live += _popcount(hrow[j])
    cmin = live
    for w in range(bad_t.shape[0]):
        c = 0
        for j in range(wf):
            c += _popcount(hrow[j] & ~bad_t[w, j])
        cnt[w] = c
        if c < cmin:
            cmin = c
    return live, cmin


# candidate lists longer than this fall back to the plain leaf test
_PAIR_CANDIDATE_CAP = 256


@jit
def _hitting_set_nb(bad, bad_t, bad_size, order, rank, dp, n):
    nf = bad.shape[0]
    wf = bad_t.shape[1]
    npos = order.shape[0]
    h = np.zeros((n + 1, wf), dtype=np.uint64)
    for f in range(nf):
        h[0, f >> 6] |= _ONE << np.uint64(f & 63)
    path = np.empty(n, dtype=np.int64)
    if n == 1:
        w = _leaf_nb(h[0], bad, dp, rank)
        if w >= 0:
            path[0] = w
            return path[:1].copy()
        return path[:0].copy()
    children = np.empty((n, npos), dtype=np.int64)
    ccount = np.zeros(n, dtype=np.int64)
    cpos = np.zeros(n, dtype=np.int64)
    # state of the (single) node two picks from the end
    cnt = np.empty(npos, dtype=np.int64)
    cands = np.empty(npos, dtype=np.int64)
    ncand = 0
    live = 0
    cmin = 0
    ccount[0] = _expand_nb(h[0], bad, bad_size, order, children[0])
    level = 0
    if n == 2:
        live, cmin = _miss_counts(h[0], bad_t, cnt)
        ncand = 0
        for w in range(npos):
            if cnt[w] <= live - cmin:
                cands[ncand] = w
                ncand += 1
    while level >= 0:
        if cpos[level] >= ccount[level]:
            level -= 1
            continue
        s = children[level, cpos[level]]
        cpos[level] += 1
        path[level] = s
        if level == n - 2:
            # miss sets of the last two picks must be disjoint
            if cnt[s] == 0:
                return path[: level + 1].copy()
            if cnt[s] + cmin > live:
                continue
            for j in range(wf):
                h[level + 1, j] = h[level, j] & ~bad_t[s, j]
            if ncand > _PAIR_CANDIDATE_CAP:
                w = _leaf_nb(h[level + 1], bad, dp, rank)
            else:
                w = -1
                best_rank = np.int64(1) << 62
                room = live - cnt[s]
                for i in range(ncand):
                    c = cands[i]
                    if cnt[c] > room or rank[c] >= best_rank:
                        continue
                    ok = True
                    for j in range(wf):
                        if h[level + 1, j] & ~bad_t[c, j]:
                            ok = False
                            break
                    if ok:
                        w = c
                        best_rank = rank[c]
            if w >= 0:
                path[level + 1] = w
                return path[: level + 2].copy()
            continue
        any_live = False
        for j in range(wf):
            v = h[level, j] & ~bad_t[s, j]
            h[level + 1, j] = v
            if v != 0:
                any_live = True
        if not any_live:
            return path[: level + 1].copy()
        level += 1
        ccount[level] = _expand_nb(h[level], bad, bad_size, order, children[level])
        cpos[level] = 0
        if level == n - 2:
            live, cmin = _miss_counts(h[level], bad_t, cnt)
            ncand = 0
            for w in range(npos):
                if cnt[w] <= live - cmin:
                    cands[ncand] = w
                    ncand += 1
    return path[:0].copy()


def _hitting_set_np(bad: np.ndarray, order: np.ndarray, rank: np.ndarray, n: int):
    sizes = bad.sum(axis=1)

    def search(live: np.ndarray, k: int):
        if k == 1:
            acc = np.logical_and.reduce(bad[live], axis=0)
            hits = np.flatnonzero(acc)
            if hits.size:
                return [int(hits[np.argmin(rank[hits])])]
            return None
        idx = np.flatnonzero(live)
        best = idx[np.argmin(sizes[idx])]
        for s in order[bad[best][order]]:
            nxt = live & ~bad[:, s]
            if not nxt.any():
                return [int(s)]
            sub = search(nxt, k - 1)
            if sub is not None:
                return [int(s)] + sub
        return None

    found = search(np.ones(bad.shape[0], dtype=bool), n)
    return None if found is None else np.asarray(found, dtype=np.int64)


def find_hitting_set(bad: np.ndarray, order: np.ndarray, n: int) -> np.ndarray | None:
    """Search for a set of at most ``n`` columns meeting every row of ``bad``.

    ``bad`` is a bool matrix, one row per set in the family, one column per
    ground element.  ``order`` is a permutation of the columns giving the
    branching order (and, through its inverse, the leaf tie-break).  Returns
    the column indices of the first hitting set found, or ``None``.
    """
    bad = np.ascontiguousarray(bad, dtype=bool)
    order = np.ascontiguousarray(order, dtype=np.int64)
    if n < 1:
        raise ValueError("n must be >= 1")
    if bad.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size, dtype=np.int64)
    if _accel.backend() == "numpy":
        return _hitting_set_np(bad, order, rank, n)
    packed = pack_rows(bad)
    packed_t = pack_rows(bad.T)
    dp = _disjoint_pairs_nb(packed, packed_t.shape[1])
    sizes = bad.sum(axis=1).astype(np.int64)
    out = _hitting_set_nb(packed, packed_t, sizes, order, rank, dp, n)
    return out if out.size else None


# ---------------------------------------------------------------------------
# pattern occurrence scan
# ---------------------------------------------------------------------------

# occurrences of A ∩ (A - d1) buffered per d1 before falling back to a full scan
_PATTERN_BUFFER = 64


@jit
def _pattern_scan_nb(bits, scan, D, n, k0, a0, b0):
    nz = scan.shape[0]
    if k0 <= 1:
        found = False
        for i in range(nz):
            if bits[scan[i]]:
                found = True
                break
        if not found:
            return 1, 0, 0
        a0 = 1
    if n >= 2 and k0 <= 2:
        for d in range(max(a0, 1), D + 1):
            found = False
            for i in range(nz):
                c = scan[i]
                if bits[c] and bits[c + d]:
                    found = True
                    break
            if not found:
                return 2, d, 0
        a0 = 1
        b0 = 2
    if n >= 3:
        buf = np.empty(_PATTERN_BUFFER, dtype=np.int64)
        for d1 in range(max(a0, 1), D):
            m = 0
            pos = 0
            while m < _PATTERN_BUFFER and pos < nz:
                c = scan[pos]
                pos += 1
                if bits[c] and bits[c + d1]:
                    buf[m] = c
                    m += 1
            first = d1 + 1
            if d1 == a0 and b0 > first:
                first = b0
            for d2 in range(first, D + 1):
                found = False
                for j in range(m):
                    if bits[buf[j] + d2]:
                        found = True
                        break
                if not found and m == _PATTERN_BUFFER:
                    for i in range(pos, nz):
                        c = scan[i]
                        if bits[c] and bits[c + d1] and bits[c + d2]:
                            found = True
                            break
                if not found:
                    return 3, d1, d2
    return 0, 0, 0


def _pattern_scan_np(bits, scan, D, n, k0, a0, b0):
    if k0 <= 1:
        if not bits[scan].any():
            return 1, 0, 0
        a0 = 1
    if n >= 2 and k0 <= 2:
        base = bits[scan]
        for d in range(max(a0, 1), D + 1):
            if not (base & bits[scan + d]).any():
                return 2, d, 0
        a0, b0 = 1, 2
    if n >= 3:
        for d1 in range(max(a0, 1), D):
            first = b0 if (d1 == a0 and b0 > d1 + 1) else d1 + 1
            todo = np.arange(first, D + 1)
            # retire each d2 at the earliest occurrence of {0, d1} that extends to it
            for blk in range(0, scan.size, 4096):
                sc = scan[blk:blk + 4096]
                for c in sc[bits[sc] & bits[sc + d1]]:
                    todo = todo[~bits[c + todo]]
                    if todo.size == 0:
                        break
                if todo.size == 0:
                    break
            if todo.size:
                return 3, d1, int(todo[0])
    return 0, 0, 0


def pattern_scan(bits: np.ndarray, scan: np.ndarray, D: int, n: int, start=(1, 0, 0)) -> tuple[int, int, int]:
    """First pattern with no occurrence at the scanned positions.

    Patterns are ``{0}``, then ``{0, d}`` for ``d = 1..D``, then
    ``{0, d1, d2}`` with ``d1 < d2 <= D`` in lexicographic order, up to size
    ``n``.  A pattern ``P`` occurs at index ``c`` when ``bits[c + p]`` holds
    for every ``p`` in ``P``; ``scan`` lists the candidate indices ``c``
    (``bits`` must extend ``D`` past the largest).  ``start`` resumes the
    enumeration at a given ``(size, d1, d2)``.  Returns ``(0, 0, 0)`` when
    every pattern occurs.
    """
    if not 1 <= n <= 3:
        raise ValueError("pattern scans support n <= 3")
    bits = np.ascontiguousarray(bits, dtype=bool)
    scan = np.ascontiguousarray(scan, dtype=np.int64)
    k0, a0, b0 = (int(v) for v in start)
    if scan.size == 0:
        return (1, 0, 0) if k0 <= 1 else (k0, a0, b0)
    if _accel.backend() == "numpy":
        out = _pattern_scan_np(bits, scan, int(D), int(n), k0, a0, b0)
    else:
        out = _pattern_scan_nb(bits, scan, int(D), int(n), k0, a0, b0)
    return tuple(int(v) for v in out)


# ---------------------------------------------------------------------------
# run / chain / spacing scans
# ---------------------------------------------------------------------------


@jit
def _longest_run_nb(bits, value, interior):
    n = bits.shape[0]
    best = 0
    i = 0
    while i < n:
        if bits[i] != value:
            i += 1
            continue
        j = i
        while j < n and bits[j] == value:
            j += 1
        if not (interior and (i == 0 or j == n)):
            if j - i > best:
                best = j - i
        i = j
    return best


def _run_bounds(bits: np.ndarray, value: bool):
    hit = np.concatenate(([False], bits == value, [False])).astype(np.int8)
    edges = np.diff(hit)
    return np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)


def _longest_run_np(bits, value, interior):
    starts, ends = _run_bounds(bits, value)
    if interior:
        keep = (starts > 0) & (ends < bits.size)
        starts, ends = starts[keep], ends[keep]
    return int((ends - starts).max()) if starts.size else 0


def longest_run(bits: np.ndarray, value: bool = True, interior: bool = False) -> int:
    """Length of the longest run of ``value`` in ``bits``.

    With ``interior`` set, runs touching either end are ignored (they may
    continue past the window).
    """
    bits = np.ascontiguousarray(bits, dtype=bool)
    if _accel.backend() == "numpy":
        return _longest_run_np(bits, bool(value), bool(interior))
    return int(_longest_run_nb(bits, bool(value), bool(interior)))


@jit
def _longest_chain_nb(pos, gap):
    n = pos.shape[0]
    if n == 0:
        return 0, 0
    best_start, best_len = 0, 1
    start = 0
    for i in range(1, n + 1):
        if i == n or pos[i] - pos[i - 1] > gap:
            if i - start > best_len:
                best_start, best_len = start, i - start
            start = i
    return best_start, best_len


def _longest_chain_np(pos, gap):
    if pos.size == 0:
        return 0, 0
    cuts = np.flatnonzero(np.diff(pos) > gap) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [pos.size]))
    k = int(np.argmax(ends - starts))
    return int(starts[k]), int(ends[k] - starts[k])


def longest_chain(pos: np.ndarray, gap: int) -> tuple[int, int]:
    """(start index, length) of the first longest run of sorted ``pos`` with steps <= ``gap``."""
    pos = np.ascontiguousarray(pos, dtype=np.int64)
    if _accel.backend() == "numpy":
        return _longest_chain_np(pos, int(gap))
    s, n = _longest_chain_nb(pos, int(gap))
    return int(s), int(n)


@jit
def _hit_spacing_nb(alpha, d):
    p = alpha.shape[0]
    last = 0
    worst = 0
    seen = False
    for i in range(p):
        if alpha[i] >= d:
            if i + 1 - last > worst:
                worst = i + 1 - last
            last = i + 1
            seen = True
    if not seen:
        return -1
    if p - last + 1 > worst:
        worst = p - last + 1
    return worst


def _hit_spacing_np(alpha, d):
    hits = np.flatnonzero(alpha >= d) + 1
    if hits.size == 0:
        return -1
    spans = np.diff(np.concatenate(([0], hits)))
    return int(max(spans.max(), alpha.size - hits[-1] + 1))


def hit_spacing(alpha: np.ndarray, d: int) -> int:
    """Smallest L such that every length-L window of ``alpha`` has an entry >= d; -1 if none."""
    alpha = np.ascontiguousarray(alpha, dtype=np.int64)
    if _accel.backend() == "numpy":
        return _hit_spacing_np(alpha, int(d))
    return int(_hit_spacing_nb(alpha, int(d)))


@jit
def _paint_nb(starts, ends, lo, hi):
    out = np.zeros(hi - lo + 1, dtype=np.bool_)
    for i in range(starts.shape[0]):
        a = max(starts[i], lo)
        b = min(ends[i], hi + 1)
        for z in range(a, b):
            out[z - lo] = True
    return out


def _paint_np(starts, ends, lo, hi):
    size = hi - lo + 1
    a = np.clip(starts - lo, 0, size)
    b = np.clip(ends - lo, 0, size)
    keep = a < b
    delta = np.zeros(size + 1, dtype=np.int64)
    np.add.at(delta, a[keep], 1)
    np.add.at(delta, b[keep], -1)
    return np.cumsum(delta[:-1]) > 0


def paint_intervals(starts: np.ndarray, ends: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Bool mask over ``[lo, hi]`` marking the union of half-open ``[starts, ends)``."""
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    ends = np.ascontiguousarray(ends, dtype=np.int64)
    if _accel.backend() == "numpy":
        return _paint_np(starts, ends, int(lo), int(hi))
    return _paint_nb(starts, ends, int(lo), int(hi))
