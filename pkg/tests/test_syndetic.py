import numpy as np
import pytest

from cssets import syndetic
from cssets.errors import CertificateDomainError
from cssets.setcore import (
    AllOfN,
    BlockEncoded,
    BlockStream,
    Construction42,
    CorollaryB,
    Periodic,
)

EVENS = Periodic(2, {0})
HORIZON = (-10**4, 10**4)


def _random_desc(rng):
    if rng.random() < 0.5:
        p = int(rng.integers(2, 7))
        res = rng.choice(p, size=int(rng.integers(1, p)), replace=False)
        return Periodic(p, frozenset(int(r) for r in res))
    al = rng.integers(1, 4, size=5).tolist()
    be = rng.integers(1, 4, size=5).tolist()
    return BlockEncoded(BlockStream.from_lists(al, be), AllOfN() if rng.random() < 0.3 else
                        BlockStream.from_lists(be, al))


def test_evens_examples():
    assert syndetic.check_witness(EVENS, 1, [0, 1], (-50, 50)).verified
    res = syndetic.check_witness(EVENS, 2, [0, 1], (-50, 50))
    assert res.status == "counterexample" and res.counterexample == (0, 1)
    wide = syndetic.check_witness(EVENS, 2, range(-200, 201), (-50, 50))
    assert wide.method == "patterns" and wide.counterexample == (0, 1)


def test_translate_order():
    assert syndetic.sort_translates([3, -1, 0, 1, -3]) == (0, 1, -1, 3, -3)
    assert syndetic._nearest(range(-5, 3), 6) == [0, 1, -1, 2, -2, -3]


def test_brute_force_equivalence_500(each_backend):
    rng = np.random.default_rng(2024)
    for _ in range(500):
        desc = _random_desc(rng)
        lo = int(rng.integers(-9, 5))
        hi = lo + int(rng.integers(0, 18))
        F = sorted({int(f) for f in rng.integers(-6, 7, size=int(rng.integers(1, 5)))})
        n = int(rng.integers(1, 4))
        res = syndetic.check_witness(desc, n, F, (lo, hi))
        oracle = syndetic.brute_force_check(desc, n, F, lo, hi)
        assert res.verified == (oracle is None)
        if not res.verified:
            S = res.counterexample
            assert 1 <= len(S) <= n
            for f in F:
                assert res.evidence[f] in S and not desc.member(res.evidence[f] - f)


def test_pattern_mode_matches_brute_force():
    rng = np.random.default_rng(77)
    for _ in range(200):
        desc = _random_desc(rng)
        lo = int(rng.integers(-9, 5))
        hi = lo + int(rng.integers(0, 12))
        a = int(rng.integers(-8, 8))
        b = a + (hi - lo) + int(rng.integers(0, 5))
        n = int(rng.integers(1, 4))
        res = syndetic.check_witness(desc, n, range(a, b + 1), (lo, hi))
        assert res.method == "patterns"
        assert res.verified == (syndetic.brute_force_check(desc, n, list(range(a, b + 1)), lo, hi) is None)


def test_monotone_in_translates_and_horizon():
    A = Construction42(1, 2)
    F = list(range(-42, 43))
    assert syndetic.check_witness(A, 2, F, (-2000, 2000)).verified
    assert syndetic.check_witness(A, 2, F + [500, -731], (-2000, 2000)).verified
    assert syndetic.check_witness(A, 2, F, (-300, 700)).verified


def test_find_witness_examples():
    w = syndetic.find_witness(EVENS, 1, (-100, 100), 2)
    assert w.status == "verified" and tuple(w.translates) == (0, 1)
    cb = syndetic.find_witness(CorollaryB("A"), 1, HORIZON, 64)
    assert cb.status == "verified"
    assert max(abs(f) for f in cb.translates) <= syndetic.gap_bound(CorollaryB("A"), 10**4)
    c42 = syndetic.find_witness(Construction42(1, 2), 2, HORIZON, 42)
    assert c42.status == "verified"
    assert set(c42.translates) <= set(range(-42, 43))


def test_find_witness_reports_failure():
    w = syndetic.find_witness(EVENS, 2, (-20, 20), 3)
    assert w.status == "failed" and w.counterexample


def test_synthesis_formula():
    cert = syndetic.AnalyticCertificate(1, lambda D: 1)
    F1, F2 = syndetic.synthesize_witnesses(cert, 2)
    assert F1 == range(-1, 2) and F2 == range(-12, 13)
    radii = syndetic.synthesize_radii(syndetic.construction42_certificate(1, 2), 3)
    assert radii == sorted(radii)
    with pytest.raises(CertificateDomainError):
        syndetic.synthesize_radii(syndetic.construction42_certificate(1, 2), 4)


def test_empirical_certificate_construction42():
    cert = syndetic.empirical_certificate(Construction42(1, 2), 1004)
    assert syndetic.synthesize_radii(cert, 2) == [1, 42]
    with pytest.raises(CertificateDomainError):
        syndetic.synthesize_witnesses(cert, 3)


def test_analytic_radii():
    radii = syndetic.synthesize_radii(syndetic.construction42_certificate(1, 2), 3)
    assert radii == [1, 90, 2219053543173807066902886495313647697879934248921855918268]


@pytest.mark.parametrize("K", [1, 2, 3])
@pytest.mark.parametrize("M", [2, 3])
def test_synthesized_witnesses_pass(K, M):
    desc = Construction42(K, M)
    for n, F in enumerate(syndetic.synthesize_witnesses(syndetic.construction42_certificate(K, M), 3), 1):
        assert syndetic.check_witness(desc, n, F, HORIZON).verified, (K, M, n)


def test_gap_bound_examples():
    assert syndetic.gap_bound(EVENS, 100) == 1
    assert syndetic.gap_bound(Construction42(3, 2), 100) == 3
    assert syndetic.gap_bound(CorollaryB("A"), 100) == 1


def test_thickness_runs_examples():
    assert syndetic.thickness_runs(EVENS, 1000) == 1
    for L in (4, 8, 12):
        assert syndetic.thickness_runs(CorollaryB("A"), 2 ** (L + 1)) >= L
    from cssets.constructions import prefix_span, R_closed

    for m in (3, 6, 9):
        assert syndetic.thickness_runs(Construction42(1, 2), prefix_span(1, 2, R_closed(m, 2))) >= m
    runs = [syndetic.thickness_runs(CorollaryB("A"), h) for h in (10, 100, 1000, 10000)]
    assert runs == sorted(runs)


def test_refutations():
    assert syndetic.refute_2syndetic_corB(1).counterexample == (4, 5)
    assert syndetic.refute_2syndetic_corB(3).counterexample == (66, 67)
    A = CorollaryB("A")
    for r in range(1, 7):
        ref = syndetic.refute_2syndetic_corB(r)
        assert ref.verify(A)
        assert ref.counterexample == (2 ** (2 * r) + r - 1, 2 ** (2 * r) + r)


def test_intersection_evidence():
    A = Construction42(1, 2)
    w = syndetic.find_witness(A & (A + 1), 2, HORIZON, 128)
    assert w.status == "verified"
