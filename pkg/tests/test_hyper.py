import random
from fractions import Fraction

import pytest

from qident.qcore import PoleError, qpoch, qpoch_multi
from qident.hyper import (PhiSpec, WellPoisedTerm, contiguous_alpha,
                          contiguous_beta, contiguous_residual_1,
                          contiguous_residual_2, phi_sum,
                          trivial_identity_residuals, wp_term)


def rand_rational(rng, bound=1000):
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    den = 0
    while den == 0:
        den = rng.randint(-bound, bound)
    return Fraction(num, den)


def rand_q(rng, bound=1000):
    while True:
        v = rand_rational(rng, bound)
        if v not in (0, 1, -1):
            return v


def test_phi_sum_single_term():
    spec = PhiSpec((2, 3), (5,), 2, 1, 1)
    assert phi_sum(spec) == 1


def test_phi_sum_two_terms_against_hand_sum():
    spec = PhiSpec((2, 3), (5,), 2, 1, 2)
    # independent oracle: sum the k=0 and k=1 terms from raw Pochhammers
    q = Fraction(2)
    expected = 1 + (qpoch_multi([2, 3], q, 1) * 1
                    / (qpoch(q, q, 1) * qpoch(5, q, 1)))
    assert expected == Fraction(3, 2)
    assert phi_sum(spec) == expected


def test_phi_sum_unit_numerator_param_collapses():
    spec = PhiSpec((1, Fraction(3, 7), 5), (2, 11), Fraction(2, 3),
                   Fraction(9, 4), 6)
    assert phi_sum(spec) == 1


def test_phi_sum_zero_argument():
    rng = random.Random(7)
    for _ in range(5):
        spec = PhiSpec(tuple(rand_rational(rng) for _ in range(3)),
                       tuple(rand_rational(rng) for _ in range(2)),
                       rand_q(rng), 0, 5)
        assert phi_sum(spec) == 1


def test_phi_sum_parameter_permutation_invariance():
    rng = random.Random(11)
    for _ in range(5):
        nums = [rand_rational(rng) for _ in range(4)]
        dens = [rand_rational(rng) for _ in range(3)]
        q, z = rand_q(rng), rand_rational(rng)
        base = phi_sum(PhiSpec(tuple(nums), tuple(dens), q, z, 5))
        for _ in range(3):
            rng.shuffle(nums)
            rng.shuffle(dens)
            assert phi_sum(PhiSpec(tuple(nums), tuple(dens), q, z, 5)) == base


def test_phi_sum_pole_reported_with_position():
    # denominator parameter q^{-1} makes (q^{-1};q)_k vanish from k=2 on
    spec = PhiSpec((2, 3), (Fraction(1, 2),), 2, 1, 4)
    with pytest.raises(PoleError, match="k="):
        phi_sum(spec)


def test_wp_term_values():
    t = WellPoisedTerm((3, 5), 2, 1)
    assert wp_term(t, 0) == 1
    assert wp_term(t, -1) == 0
    assert wp_term(t, 1) == 40
    t0 = WellPoisedTerm((3, 5, 7), Fraction(2, 3), 0)
    assert wp_term(t0, 2) == 0


def test_contiguous_residuals_vanish():
    rng = random.Random(123)
    for r in range(2, 10):
        for _ in range(3):
            t = WellPoisedTerm(tuple(rand_rational(rng) for _ in range(r + 1)),
                               rand_q(rng), rand_rational(rng))
            for k in (0, 1, 3, 5):
                assert contiguous_residual_1(t, k) == 0
                assert contiguous_residual_2(t, k) == 0


def test_contiguous_residual_2_covers_r1():
    rng = random.Random(5)
    for _ in range(5):
        t = WellPoisedTerm((rand_rational(rng), rand_rational(rng)),
                           rand_q(rng), rand_rational(rng))
        for k in (0, 1, 2, 5):
            assert contiguous_residual_2(t, k) == 0


def test_contiguous_residual_1_singular_at_r1():
    # bumping the anchor itself: the coefficient denominator 1 - a_1/a_r
    # is identically zero
    t = WellPoisedTerm((3, 5), 2, 1)
    with pytest.raises(PoleError):
        contiguous_residual_1(t, 2)


def test_alpha_beta_middle_product_conventions():
    rng = random.Random(31)
    # r = 2: empty middle product in alpha; r = 1: empty middle in beta
    a2 = [rand_rational(rng) for _ in range(3)]
    q, z = rand_q(rng), rand_rational(rng)
    val = contiguous_alpha(a2, q, z)
    expected = ((a2[1] - a2[2]) * (1 - a2[0]/(a2[1]*a2[2]))
                * (1 - a2[0]) * (1 - a2[0]*q) * z
                / ((1 - a2[0]/a2[1]) * (1 - a2[0]/a2[2])
                   * (1 - a2[0]*q/a2[1]) * (1 - a2[0]*q/a2[2])))
    assert val == expected
    a1 = [rand_rational(rng) for _ in range(2)]
    val = contiguous_beta(a1, q, z)
    expected = (-(1 - a1[0]) * (1 - a1[0]*q) * z
                / ((1 - a1[0]/a1[1]) * (1 - a1[0]*q/a1[1])))
    assert val == expected


def test_trivial_identity_residuals():
    assert trivial_identity_residuals(Fraction(2, 3), 5, 7, 4) == (0, 0)
    assert trivial_identity_residuals(Fraction(3, 2), 5, 7, 1) == (0, 0)
    assert trivial_identity_residuals(0, 5, 7, Fraction(9, 2)) == (0, 0)
    rng = random.Random(17)
    for _ in range(10):
        a, b, c, x = (rand_rational(rng) for _ in range(4))
        if b in (0, 1) or c in (0, 1) or a in (b, c):
            continue
        assert trivial_identity_residuals(a, b, c, x) == (0, 0)


def test_trivial_identity_preconditions():
    with pytest.raises(PoleError):
        trivial_identity_residuals(2, 1, 7, 4)
    with pytest.raises(PoleError):
        trivial_identity_residuals(2, 5, 0, 4)
    with pytest.raises(PoleError):
        trivial_identity_residuals(5, 5, 7, 4)
