from __future__ import annotations

import pytest

from betalab import beta_dynamics as bd
from betalab.lattice_tau import NotInU, NotInUStar, NotRelated, PreconditionUnmet, lattice


@pytest.mark.parametrize("n", range(2, 13))
def test_g_matrix_and_eigenvector(n):
    L = lattice(n)
    assert L.char_poly() == (1, -(n + 1), n, -n)
    assert L.left_eigen_check()
    assert L.apply_G((1, 0, -1)) == (n, 0, 0)


@pytest.mark.parametrize("n", range(2, 11))
def test_landmark_points(n):
    L = lattice(n)
    a, ab = L.alpha, L.alpha_over_beta
    assert L.f_value((1, n - 1, -1)) == a * a
    assert L.f_value((1, 0, -1)) == 1 - ab
    assert L.tau_step((1, 0, -1)) == (0, 0, 0)
    assert L.letter((1, 0, -1)) == n
    assert L.pi((0, 0, 0)) == L.f_value((1, n, -1))


@pytest.mark.parametrize("n", range(2, 11))
def test_conjugacy_through_f(n):
    L = lattice(n)
    for p in L.ball(8):
        d, y = bd.t_beta_step(L.f_value(p))
        q = L.tau_step(p)
        assert L.in_U(q)
        assert y == L.f_value(q)
        assert d == L.letter(p)
        assert q == tuple(g - (d if i == 0 else 0) for i, g in enumerate(L.apply_G(p)))


def test_pi_is_a_shift_of_f():
    from betalab.word_calculus import value, omega

    for n in (3, 5, 8):
        L = lattice(n)
        for l, k, j in [(0, 0, 0), (1, 2, 3), (-1, -4, 2)]:
            assert L.pi((l - 1, k - n, j + 1)) == L.f_value((l, k, j))
            assert L.pi((l, k, j)) == value(omega(n, l, k, j))


def test_from_field_round_trip():
    L = lattice(5)
    for p in L.ball(6):
        assert L.from_field(L.f_value(p)) == p


def test_not_in_u():
    L = lattice(4)
    with pytest.raises(NotInU):
        L.tau_step((5, 0, 0))
    with pytest.raises(NotInUStar):
        L.preimage((0, 0, 0))


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_preimages(n):
    L = lattice(n)
    assert L.preimage((1, 0, -1)) == ((0, -1, -1), 0)
    assert L.preimage((0, -1, -1)) == ((0, -1, 0), 1)
    for p in L.ball(7):
        if p == (0, 0, 0):
            continue
        v, s = L.preimage(p)
        assert L.tau_step(v) == p
        assert L.f_value(v) * L.P.beta == L.f_value(p) + s
        assert s == (L.f_value(v) * L.P.beta).floor()


def test_injectivity_against_brute_force():
    n = 5
    L = lattice(n)
    targets = {}
    for p in L.ball(9):
        if p == (0, 0, 0):
            continue  # the origin is fixed, so only U* is counted
        targets.setdefault(L.tau_step(p), []).append(p)
    for p in L.ball(6):
        if p == (0, 0, 0):
            continue
        q = L.tau_step(p)
        cls, sib = L.injectivity_class(p, q)
        others = [r for r in targets[q] if r != p]
        if cls == "one_to_one":
            assert others == []
        else:
            assert others == [sib]
    with pytest.raises(NotRelated):
        L.injectivity_class((1, 0, -1), (1, 0, -1))


def test_alpha_squared_orbit_by_residue():
    for n in (4, 7, 10, 13):
        o = lattice(n).orbit((1, n - 1, -1))
        assert o.kind is bd.Kind.FINITE
        assert o.digits[-3:] == (1, 0, n)
    for n in (3, 6, 9):
        assert lattice(n).orbit((1, n - 1, -1)).kind is bd.Kind.EVENTUALLY_PERIODIC


@pytest.mark.parametrize("n", [4, 5, 6])
def test_small_norm_points(n):
    L = lattice(n)
    pts = L.small_norm_points(n + 1)
    assert len(pts) == 12
    v0, v1, u0, u1 = (0, -1, -n), (0, 1, n + 1), (1, 1, n), (1, -1, -n - 1)
    assert {v0, v1, u0, u1} <= set(pts)
    assert L.tau_step(v0) == L.tau_step(u1) == (1, n - 1, -1)
    assert L.tau_step(v1) == L.tau_step(u0) == (-1, -n, 1)


@pytest.mark.parametrize("n", range(4, 9))
def test_bounds_on_l(n):
    L = lattice(n)
    for p in L.ball(30):
        m = max(abs(p[1]), abs(p[2]))
        for name, ok in L.check_bounds(p).items():
            if name == "same_sign_small" and m == n:
                continue
            assert ok, (name, p)


def test_same_sign_bound_fails_at_m_equal_n():
    L = lattice(4)
    assert L.check_bounds((-1, -4, -2))["same_sign_small"] is False
    assert L.check_bounds((2, 4, 1))["same_sign_small"] is False


@pytest.mark.parametrize("n", range(4, 9))
def test_five_step_signs(n):
    L = lattice(n)
    seen = 0
    for p in L.ball(25):
        try:
            res = L.five_step_signs(p)
        except PreconditionUnmet:
            continue
        seen += 1
        assert res.passed, p
    assert seen > 100
    with pytest.raises(PreconditionUnmet):
        lattice(3).five_step_signs((1, 0, -1))


def test_census_n6_finds_cycle_outside_ball():
    L = lattice(6)
    cen = L.census(30)
    far = [c for c in cen.cycles.values() if max(max(abs(p[1]), abs(p[2])) for p in c) > 6]
    assert len(far) == 1 and len(far[0]) == 11
    assert (1, 4, -7) in far[0]
    w = bd.expand(L.f_value((1, 4, -7))).word
    assert w.render() == "0.(01324024350)^w"
    assert cen.to_csv().splitlines()[0] == "n,l,k,j,kind,preperiod,period,cycle_id"
    assert cen.summary()["cycles_inside_ball"] is False


def test_census_n4_cycles_inside_ball():
    cen = lattice(4).census(30, shell=12)
    assert cen.cycles_inside_ball and cen.all_return
    assert all(t >= 0 for t in cen.shell_hits.values())


def test_integer_classes():
    L = lattice(6)
    (cyc,) = L.integer_cycles(36)
    assert len(cyc) == 11
    assert L.cycle_is_integer_class(cyc)
    assert not L.cycle_is_integer_class(L.orbit((1, 1, 1)).cycle)
