from math import isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmnorms.arith import DiscPair
from cmnorms.counting import (
    PairCondition, admissible_n, brute_count_S, count_A, enumerate_partners, lemma17_check,
    prop_count, rho_invariant, rho_prime_power, squares_mod,
)
from cmnorms.errors import DomainError
from cmnorms.quadforms import B_value, GroupSpec, QuadForm, class_reps, orbit_reps

P = DiscPair(-7, -55)
Q = DiscPair(-7, -15)


def test_rho_prime_power_examples():
    assert rho_prime_power(P, 3, 2, 31) == 5
    assert rho_prime_power(P, 3, 2, 30) == 0
    # (961 - 385)/16 = 36 and the epsilon sum over divisors of 36 is 3 * 1
    assert rho_prime_power(P, 2, 2, 31) == 3
    with pytest.raises(DomainError):
        rho_prime_power(P, 3, 1, 31)  # epsilon(3) = -1 needs an even exponent
    with pytest.raises(DomainError):
        rho_prime_power(P, 13, 2, 31)


def test_rho_invariant_examples():
    assert rho_invariant(P, "gamma2", 31) == 5
    assert rho_invariant(P, "omega", 21) == 4
    assert rho_invariant(P, "omega2", 21) == 0
    with pytest.raises(DomainError):
        rho_invariant(DiscPair(-4, -7), "omega", 9)
    with pytest.raises(DomainError):
        rho_invariant(DiscPair(-3, -7), "gamma2", 9)


def test_enumerate_partners_examples():
    f1 = class_reps(-7)[0]
    total = sum(len(enumerate_partners(f, -55, 31)) for f in class_reps(-7))
    assert total == 5
    assert enumerate_partners(f1, -55, 19) == []
    assert QuadForm(1, 1, 2) in enumerate_partners(QuadForm(1, 0, 1), -7, 6)


@given(st.sampled_from([(-7, -55), (-7, -15), (-4, -7), (-3, -7), (-31, -151)]),
       st.integers(1, 200), st.data())
def test_partners_are_exact_and_distinct(pair, n, data):
    d1, d2 = pair
    f1 = data.draw(st.sampled_from(orbit_reps(d1, GroupSpec.gamma0(2))))
    out = enumerate_partners(f1, d2, n)
    assert len(out) == len(set(out))
    assert all(B_value(f1, f2) == n and f2.disc == d2 for f2 in out)


def test_partner_search_is_complete():
    # compare against a naive scan over a generous box
    for f1 in orbit_reps(-7, GroupSpec.gamma0(4)):
        for n in (20, 21, 31, 37):
            naive = set()
            for a in range(1, 400):
                for b in range(-400, 401):
                    if (b * b + 55) % (4 * a) == 0:
                        f2 = QuadForm(a, b, (b * b + 55) // (4 * a))
                        if B_value(f1, f2) == n:
                            naive.add(f2)
            assert set(enumerate_partners(f1, -55, n)) == naive


def test_brute_count_examples():
    assert brute_count_S(P, 31) == 5
    assert brute_count_S(P, 31, PairCondition.gamma_cube()) == 5
    assert brute_count_S(P, 20) == 0


@pytest.mark.parametrize("pair", [(-7, -55), (-7, -15), (-4, -7), (-7, -4), (-3, -7), (-8, -15)])
def test_level_one_counts(pair):
    p = DiscPair(*pair)
    for n in range(isqrt(p.D) + 1, 3 * isqrt(p.D) + 3):
        assert brute_count_S(p, n) == prop_count(p, 1, n), n


@pytest.mark.parametrize("pair", [(-7, -55), (-7, -15), (-23, -15)])
def test_weber_counting_functions(pair):
    p = DiscPair(*pair)
    for n in range(isqrt(p.D) + 1, 3 * isqrt(p.D) + 3):
        assert brute_count_S(p, n, PairCondition.level(2)) == rho_invariant(p, "omega", n)
        assert brute_count_S(p, n, PairCondition.leading(2, 1, 1, 2)) == rho_invariant(p, "omega2", n)


@pytest.mark.parametrize("pair", [(-7, -55), (-4, -7), (-31, -151)])
def test_gamma2_counting_function(pair):
    p = DiscPair(*pair)
    for n in range(isqrt(p.D) + 1, 2 * isqrt(p.D) + 2):
        want = rho_invariant(p, "gamma2", n)
        assert brute_count_S(p, n, PairCondition.gamma_cube()) == want
        if (n * n - p.D) % 36:
            assert want == 0


@given(st.integers(20, 200))
def test_gamma2_count_vanishes_off_congruence(n):
    if (n * n - P.D) % 36:
        assert rho_invariant(P, "gamma2", n) == 0


def test_conditions_are_invariant():
    forms = orbit_reps(-55, GroupSpec.gamma0(4))
    for cond in (PairCondition.level(2), PairCondition.level(4), PairCondition.gamma_cube(),
                 PairCondition.leading(4, 2, 1, 4), PairCondition.leading(2, 1, 1, 2)):
        assert cond.is_invariant(forms, trials=60)


def test_non_invariant_condition_is_detected():
    from cmnorms.quadforms import Congruence

    bad = PairCondition(GroupSpec.full(), (Congruence("a", 0, 2),), ())
    assert not bad.is_invariant(class_reps(-55), trials=60)


def test_lemma_identities():
    for pair, n in ((P, 31), (Q, 11)):
        rep = lemma17_check(pair, n)
        assert rep.ok, rep
    # off the mod-16 congruence every A_N(k1,k2;m) with odd parts vanishes
    rep = lemma17_check(P, 21)
    assert rep.ok and rep.details[(2, 1, 1, 2)] == 0


def test_lemma_identities_every_admissible_n():
    for pair in (P, Q):
        for n in admissible_n(pair, 3 * isqrt(pair.D) + 1):
            assert lemma17_check(pair, n).ok, (pair, n)


def test_lemma_preconditions():
    with pytest.raises(DomainError):
        lemma17_check(DiscPair(-4, -7), 6)
    assert squares_mod(P, 16) and not squares_mod(P, 12)


def test_count_A_index_scaling():
    assert count_A(P, 31, 2, 0, 0, 1) == 3 * count_A(P, 31, 1, 0, 0, 1)
    with pytest.raises(DomainError):
        count_A(P, 31, 4, 0, 0, 3)
