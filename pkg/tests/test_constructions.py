from fractions import Fraction

import pytest

from cssets import constructions as C
from cssets.setcore import Construction42, CorollaryB, Periodic


def test_gamma_rows_m2():
    rows = ["".join(str(C.gamma(n, k, 2)) for k in range(1, C.r_closed(n, 2) + 1)) for n in range(1, 5)]
    assert rows == ["1", "112", "1121123", "112112311211234"]


@pytest.mark.parametrize("M", [2, 3, 5])
def test_gamma_descent_matches_recursion(M):
    for n in range(1, 7):
        assert [C.gamma(n, k, M) for k in range(1, C.r_closed(n, M) + 1)] == C.gamma_row(n, M)


def test_gamma_index_errors():
    with pytest.raises(IndexError):
        C.gamma(3, 8, 2)
    with pytest.raises(IndexError):
        C.gamma(0, 1, 2)


def test_alpha_prefix_and_at():
    s = C.alpha_stream(1, 2)
    assert [a for a, _ in s.prefix(11)] == [1, 1, 1, 2, 1, 1, 2, 1, 1, 2, 3]
    assert [C.alpha_at(n, 2) for n in range(1, 200)] == list(s.alphas(199))
    assert set(s.betas(100)) == {1}
    assert C.alpha_at(C.R_closed(40, 2), 2) == 40


@pytest.mark.parametrize("M", [2, 3, 5])
def test_closed_forms(M):
    for n in range(0, 21):
        assert C.r_closed(n, M) == C.r_iter(n, M)
        assert C.R_closed(n, M) == C.R_iter(n, M)
    for n in range(1, 21):
        assert C.Gamma_closed(n, M) == C.Gamma_iter(n, M)
    for n in range(1, 8):
        assert C.Gamma_closed(n, M) == sum(C.gamma_row(n, M))


def test_recurrence():
    for T in (2, 3, 4):
        for s in (0, 1, 5):
            for n in range(31):
                assert C.recurrence_solution(T, s, n) == C.recurrence_iter(T, s, n)
    assert C.recurrence_solution(2, 0, 3) == 11
    with pytest.raises(ValueError):
        C.recurrence_solution(1, 0, 3)


def test_density_limits():
    assert C.density_limit(3) == Fraction(1, 4)
    assert C.construction42_density(1, 2) == Fraction(2, 3)
    d = C.empirical_density(Construction42(1, 2), C.prefix_span(1, 2, C.R_closed(14, 2)))
    assert abs(float(d) - 2 / 3) < 0.01
    assert C.empirical_density(Periodic(2, {0}), 100) == Fraction(101, 201)


def test_corollary_b_density_tends_to_one():
    B, A = C.corollaryB_descriptors()
    # B ∩ [0, 2^16] has 1 + 2 + ... + 15 elements, plus 2^16 itself
    assert C.empirical_density(A, 2**16) == 1 - Fraction(242, 2**17 + 1)
    assert C.empirical_density(A, 2**10) < C.empirical_density(A, 2**16)


def test_product_counts():
    P = C.ProductSet(Periodic(3, {0}), 3)
    for r in (0, 4, 9):
        assert P.box_count(r) == P.box_count_direct(r)
    assert P.member((3, -6, 0)) and not P.member((3, 1, 0))
    assert C.zd_product(Periodic(2, {0}), 1) == Periodic(2, {0})
    sq = C.ProductSet(Construction42(1, 2), 2).box_density(C.prefix_span(1, 2, C.R_closed(12, 2)))
    assert abs(float(sq) - 4 / 9) < 0.02
