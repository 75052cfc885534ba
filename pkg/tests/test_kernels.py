import itertools

import numpy as np
import pytest

from cssets import _accel, kernels


def _oracle_hitting(bad, order, n):
    """Smallest hitting set of size <= n, by enumeration (existence only)."""
    rows = [set(np.flatnonzero(r)) for r in bad]
    for k in range(1, n + 1):
        for S in itertools.combinations(range(bad.shape[1]), k):
            if all(r & set(S) for r in rows):
                return True
    return False


def test_backend_switch():
    assert "numpy" in _accel.available_backends()
    with _accel.use_backend("numpy"):
        assert _accel.backend() == "numpy"
    with pytest.raises(ValueError):
        _accel.set_backend("fortran")


def test_hitting_set_matches_enumeration(each_backend):
    rng = np.random.default_rng(7)
    for _ in range(300):
        nf, nw = rng.integers(1, 7), rng.integers(1, 12)
        bad = rng.random((nf, nw)) < rng.uniform(0.1, 0.8)
        n = int(rng.integers(1, 4))
        order = rng.permutation(nw)
        got = kernels.find_hitting_set(bad, order, n)
        assert (got is not None) == _oracle_hitting(bad, order, n)
        if got is not None:
            assert len(got) <= n
            assert all(bad[f, list(got)].any() for f in range(nf))


@pytest.mark.skipif(not _accel.HAS_NUMBA, reason="numba not installed")
def test_backends_agree_exactly():
    rng = np.random.default_rng(11)
    for _ in range(500):
        nf, nw = rng.integers(1, 20), rng.integers(1, 90)
        bad = rng.random((nf, nw)) < rng.uniform(0.05, 0.9)
        n = int(rng.integers(1, 4))
        order = rng.permutation(nw)
        with _accel.use_backend("numba"):
            a = kernels.find_hitting_set(bad, order, n)
        with _accel.use_backend("numpy"):
            b = kernels.find_hitting_set(bad, order, n)
        assert (a is None) == (b is None)
        if a is not None:
            assert list(a) == list(b)


def test_longest_run(each_backend):
    bits = np.array([0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0], dtype=bool)
    assert kernels.longest_run(bits, True) == 4
    assert kernels.longest_run(bits, False) == 3
    assert kernels.longest_run(bits, False, interior=True) == 3
    assert kernels.longest_run(np.array([0, 0, 0, 1, 0], dtype=bool), False, interior=True) == 0


def test_longest_chain(each_backend):
    pos = np.array([0, 2, 4, 7, 8, 10, 12, 14, 20])
    assert kernels.longest_chain(pos, 2) == (3, 5)
    assert kernels.longest_chain(np.array([], dtype=np.int64), 2) == (0, 0)


def test_hit_spacing(each_backend):
    a = np.array([1, 1, 1, 2, 1, 1, 2, 1, 1, 2, 3])
    assert kernels.hit_spacing(a, 2) == 4
    assert kernels.hit_spacing(a, 4) == -1


def test_paint(each_backend):
    out = kernels.paint_intervals(np.array([0, 5]), np.array([2, 7]), -1, 6)
    assert list(out.astype(int)) == [0, 1, 1, 0, 0, 0, 1, 1]
