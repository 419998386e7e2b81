import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from circwit.oracle import circulant_matrix
from circwit.walsh import (GroupElement, SignVector, WalshPolynomial, all_ones_double_sum,
                           basis_element, evaluate_character, fourier_square_double_sum,
                           matrix_fourier, orthogonal_pair_character, weight, walsh_transform)


def naive_walsh(f):
    size = len(f)
    return [sum(f[g] * (-1) ** bin(g & x).count("1") for g in range(size)) for x in range(size)]


def test_weight_examples():
    assert weight(GroupElement.zero(4)) == 0
    assert weight(GroupElement(4, 0b1111)) == 4
    assert weight(GroupElement.from_indices(8, [1, 3])) == 2


def test_basis_element():
    assert basis_element(1, 4).bits == 0b0001
    assert basis_element(4, 4).bits == 0b1000
    assert all(weight(basis_element(j, 9)) == 1 for j in range(1, 10))
    for j in (0, 5):
        with pytest.raises(IndexError):
            basis_element(j, 4)


def test_group_element_invariants():
    with pytest.raises(ValueError):
        GroupElement(3, 0b1000)
    a, b = GroupElement(5, 0b10110), GroupElement(5, 0b00111)
    assert (a + b).bits == 0b10001
    assert a + a == GroupElement.zero(5)
    assert GroupElement.from_vector(a.to_vector()) == a
    assert a.indices() == (2, 3, 5)
    with pytest.raises(ValueError):
        a + GroupElement(4, 1)


def test_sign_vector_bijection():
    for n in range(1, 7):
        for m in range(1 << n):
            u = SignVector.from_mask(n, m)
            assert u.to_mask() == m
    assert SignVector.from_mask(4, 0).entries == (1, 1, 1, 1)
    assert SignVector.parse("-+++") == SignVector((-1, 1, 1, 1))
    assert SignVector.parse("(-1,1,1,1)") == SignVector((-1, 1, 1, 1))
    with pytest.raises(ValueError):
        SignVector((1, 0, 1))


def test_evaluate_character_examples():
    u = SignVector((-1, 1, 1, 1))
    assert evaluate_character(GroupElement.zero(4), u) == 1
    assert evaluate_character(basis_element(1, 4), u) == -1
    assert evaluate_character(GroupElement(4, 0b1111), u) == -1
    with pytest.raises(ValueError):
        evaluate_character(GroupElement(3, 1), u)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_character_multiplicative_exhaustive(n):
    size = 1 << n
    for m in range(size):
        u = SignVector.from_mask(n, m)
        vals = [evaluate_character(g, u) for g in range(size)]
        for a in range(size):
            for b in range(size):
                assert vals[a ^ b] == vals[a] * vals[b]


@settings(max_examples=300)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1))))
def test_character_multiplicative_n8(args):
    n, a, b, m = args
    u = SignVector.from_mask(n, m)
    ga, gb = GroupElement(n, a), GroupElement(n, b)
    assert evaluate_character(ga + gb, u) == evaluate_character(ga, u) * evaluate_character(gb, u)


@pytest.mark.parametrize("n", range(0, 7))
def test_walsh_matches_naive(n):
    rnd = random.Random(n)
    f = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(1 << n)]
    assert walsh_transform(f) == naive_walsh(f)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_walsh_delta_and_involution(n):
    size = 1 << n
    delta = [1] + [0] * (size - 1)
    assert walsh_transform(delta) == [1] * size
    rnd = random.Random(7)
    f = [rnd.randint(-20, 20) for _ in range(size)]
    assert walsh_transform(walsh_transform(f)) == [size * v for v in f]


def test_walsh_rejects_bad_length():
    with pytest.raises(ValueError):
        walsh_transform([1, 2, 3])


def test_walsh_polynomial_algebra():
    p = WalshPolynomial(3, {0: 1, 5: Fraction(1, 2), 6: 0})
    assert len(p) == 2 and p[6] == 0
    q = p + WalshPolynomial(3, {5: Fraction(-1, 2)})
    assert q.coeffs == {0: 1}
    assert WalshPolynomial.from_dense(p.to_dense()) == p
    assert p.scale(2)[5] == 1
    u = SignVector((1, 1, -1))
    assert p.evaluate(u) == 1 + Fraction(1, 2) * evaluate_character(5, u)
    with pytest.raises(ValueError):
        WalshPolynomial(2, {4: 1})


def test_matrix_fourier_examples():
    H = circulant_matrix((-1, 1, 1, 1))
    assert matrix_fourier(H, 0) == 4
    assert matrix_fourier(H, GroupElement(4, 0b1111)) == -4
    assert fourier_square_double_sum(H, GroupElement(4, 0b1111)) == 16
    with pytest.raises(ValueError):
        matrix_fourier([[1, 0], [1, 1]], 0)


def test_matrix_fourier_square_identity_random():
    rnd = random.Random(2024)
    for _ in range(100):
        n = rnd.randint(1, 6)
        A = [[rnd.choice((1, -1)) for _ in range(n)] for _ in range(n)]
        for g in range(1 << n):
            assert matrix_fourier(A, g) ** 2 == fourier_square_double_sum(A, g)


@pytest.mark.parametrize("n", [6, 10])
def test_all_ones_evaluation_negative_when_n_is_2_mod_4(n):
    assert all_ones_double_sum(n) == n - n * (n - 1) == -n * (n - 2) < 0


def test_orthogonal_pair_character_brute_force_n6():
    n = 6
    ones = GroupElement(n, (1 << n) - 1)
    seen = set()
    for a, b in product(range(1 << n), repeat=2):
        ua, ub = SignVector.from_mask(n, a), SignVector.from_mask(n, b)
        if sum(x * y for x, y in zip(ua, ub)) == 0:
            q = SignVector(tuple(x * y for x, y in zip(ua, ub)))
            seen.add(evaluate_character(ones, q))
    assert seen == {orthogonal_pair_character(n)} == {-1}


def test_orthogonal_pair_character_n10_sampled():
    n = 10
    rnd = random.Random(5)
    ones = GroupElement(n, (1 << n) - 1)
    hits = 0
    while hits < 200:
        a = SignVector(tuple(rnd.choice((1, -1)) for _ in range(n)))
        b = SignVector(tuple(rnd.choice((1, -1)) for _ in range(n)))
        if sum(x * y for x, y in zip(a, b)) == 0:
            hits += 1
            q = SignVector(tuple(x * y for x, y in zip(a, b)))
            assert evaluate_character(ones, q) == -1
