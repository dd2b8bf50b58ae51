from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betalab import beta_dynamics as bd
from betalab.exact_field import make_pisot


def p_n(n):
    return make_pisot((1, -(n + 1), n, -n))


Q211 = (1, -2, 0, -1, -1)


@pytest.mark.parametrize("n", range(2, 31))
def test_expansion_of_one_is_n10n(n):
    one = bd.expansion_of_one(p_n(n))
    assert one.is_finite
    assert one.frac_preperiod == (n, 1, 0, n)


def test_expansion_of_one_q211():
    assert bd.expansion_of_one(make_pisot(Q211)).render(point=False) == "2011"


def test_expand_frozen_words():
    P = p_n(2)
    assert bd.expand(P.alpha).word.render() == "0.102"
    assert bd.expand(P.from_int(5)).word.render() == "12.10102"
    six = bd.expand(P.from_int(6))
    assert six.kind is bd.Kind.EVENTUALLY_PERIODIC
    assert six.word.render() == "20.210(00112)^w"
    assert bd.expand(P.alpha**2).word.render() == "0.(01120)^w"
    assert bd.expand(P.zero).word.render() == "0"


def test_expand_one_uses_expansion_of_one():
    P = p_n(2)
    assert bd.expand(P.one).word.frac_preperiod == (2, 1, 0, 2)


def test_negative_input():
    with pytest.raises(bd.NegativeInput):
        bd.expand(-p_n(2).alpha)


def test_t_beta_step_domain():
    P = p_n(2)
    with pytest.raises(bd.OutOfDomain):
        bd.t_beta_step(P.one)
    d, y = bd.t_beta_step(P.alpha)
    assert d == 1 and y == P.beta * P.alpha - 1


def test_quasi_greedy():
    assert bd.quasi_greedy_one(p_n(3)) == ((), (3, 1, 0, 2))
    assert bd.quasi_greedy_one(make_pisot((1, -1, -1))) == ((), (1, 0))


def test_lex_compare():
    assert bd.lex_compare(((1,), ()), ((0,), (1,))) == 1
    assert bd.lex_compare(((), (1, 0)), ((1, 0, 1), (0, 1))) == 0
    assert bd.lex_compare(((0, 0), ()), ((), ())) == 0


def test_admissibility():
    P = p_n(2)
    assert bd.is_admissible([2, 1, 0, 1], P)
    assert not bd.is_admissible([2, 1, 0, 2], P)
    assert not bd.is_admissible([3], P)
    assert not bd.is_admissible([-1], P)
    assert bd.is_admissible(bd.expand(P.from_int(6)).word, P)


def test_classification_labels():
    assert bd.classify_one_expansion(p_n(3)) == {"CE"}
    assert bd.classify_one_expansion(make_pisot(Q211)) == {"CE"}
    assert bd.classify_one_expansion(make_pisot((1, -3, -1, -1))) == {"Brauer", "Hollander"}
    assert "Perron" in bd.classify_one_expansion(make_pisot((1, -5, -1, -1)))


def test_is_fin_respects_cap():
    P = p_n(2)
    with pytest.raises(bd.OrbitTruncated):
        bd.is_fin(P.from_int(6), cap=2)
    assert bd.is_fin(P.from_int(5))[0]


def test_word_value_inverts_expand():
    P = p_n(4)
    for N in (3, 17, 20, 21, 22, 40):
        res = bd.expand(P.from_int(N))
        assert bd.word_value(P, res.word) == N


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 400), st.integers(2, 7))
def test_expansions_are_admissible_and_exact(N, n):
    P = p_n(n)
    res = bd.expand(P.from_int(N))
    assert res.kind is not bd.Kind.TRUNCATED
    assert bd.is_admissible(res.word, P)
    assert bd.word_value(P, res.word) == N
