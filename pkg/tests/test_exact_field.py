from __future__ import annotations

import pickle
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betalab.exact_field import (
    DegreeTooLow,
    FieldElement,
    FieldError,
    MixedParents,
    NotIntegral,
    NotPisot,
    WrongDegree,
    alpha_basis_coords,
    from_alpha_basis,
    inv_beta,
    make_pisot,
    parse_coeffs,
)


def p_n(n):
    return make_pisot((1, -(n + 1), n, -n))


def test_parse_coeffs():
    assert parse_coeffs("1,-3, 2,-2") == (1, -3, 2, -2)
    with pytest.raises(FieldError):
        parse_coeffs("1,x")


@pytest.mark.parametrize("n", range(2, 31))
def test_floor_of_beta_is_n(n):
    P = p_n(n)
    assert P.floor_beta == n
    assert P.is_pisot
    lo, hi = P.iso_interval
    assert n < lo < hi < n + 1


def test_rejects_bad_polynomials():
    with pytest.raises(DegreeTooLow):
        make_pisot((1, -2))
    with pytest.raises(FieldError):
        make_pisot((2, -3, 1))
    # x^3 - 2 has a complex pair of modulus 2^(1/3)
    with pytest.raises(NotPisot):
        make_pisot((1, 0, 0, -2))


def test_non_strict_build_flags_non_pisot():
    # x^5 - 3x^4 + x^3 - 3x^2 + 2x - 2 has a second root outside the unit disk
    coeffs = (1, -3, 1, -3, 2, -2)
    with pytest.raises(NotPisot):
        make_pisot(coeffs)
    P = make_pisot(coeffs, strict=False)
    assert not P.is_pisot
    assert P.floor_beta == 2


def test_equal_moduli_have_no_dominant_root():
    with pytest.raises(FieldError):
        make_pisot((1, 0, 0, -2), strict=False)


def test_beta_satisfies_its_polynomial():
    P = p_n(3)
    b = P.beta
    assert (b**3 - 4 * b**2 + 3 * b - 3).is_zero()


def test_inverse_of_beta():
    for n in range(2, 8):
        P = p_n(n)
        assert (inv_beta(P) * P.beta - 1).is_zero()
        # beta^-1 = beta^2/n - (n+1)beta/n + 1 is not in Z[beta]
        assert not inv_beta(P).is_integral()


def test_sign_and_floor():
    P = p_n(2)
    a = P.alpha
    assert a.sign() == 1
    assert a.floor() == 0
    assert (a - 1).sign() == -1
    assert (P.beta * 7).floor() == int(7 * float(P.beta))
    assert P.zero.sign() == 0


def test_mixed_parents_raise():
    with pytest.raises(MixedParents):
        p_n(2).alpha + p_n(3).alpha


def test_json_round_trip():
    P = p_n(4)
    x = P.alpha**2 / 3
    assert FieldElement.from_json(P, x.to_json()) == x


def test_pickle_keeps_parent():
    P = p_n(5)
    Q = pickle.loads(pickle.dumps(P))
    assert Q == P and Q.floor_beta == 5


def test_alpha_basis_round_trip():
    P = p_n(6)
    x = P.element([3, -4, 2])
    assert from_alpha_basis(P, alpha_basis_coords(x)) == x
    assert alpha_basis_coords(P.alpha**2) == (0, 0, 1)
    with pytest.raises(NotIntegral):
        alpha_basis_coords(x / 2)
    Q = make_pisot((1, -2, 0, -1, -1))
    with pytest.raises(WrongDegree):
        alpha_basis_coords(Q.alpha)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-50, 50), min_size=3, max_size=3),
    st.lists(st.integers(-50, 50), min_size=3, max_size=3),
)
def test_field_axioms(u, v):
    P = p_n(3)
    x, y = P.element(u), P.element(v)
    assert (x + y) - y == x
    assert x * y == y * x
    if not y.is_zero():
        assert (x / y) * y == x
    # sign agrees with a float estimate away from zero
    approx = sum(Fraction(c) * Fraction(float(P.beta)) ** i for i, c in enumerate(u))
    if abs(approx) > 1e-6:
        assert x.sign() == (1 if approx > 0 else -1)
