"""Acceptance criteria 1-12.

Each test records a verdict through the ``record`` fixture; the terminal
summary prints one PASS/FAIL line per criterion.  Clauses that do not hold
are kept at full strength and marked ``xfail(strict=True)``.
"""

from __future__ import annotations

import pytest

from betalab import beta_dynamics as bd
from betalab import families_finiteness as ff
from betalab import repro
from betalab.lattice_tau import lattice
from betalab.word_calculus import periodic_word_wkj


def P(n):
    return ff.build(ff.FamilySpec("P", n))


def Q(n, b, c):
    return ff.build(ff.FamilySpec("Q", n, b, c))


def R(n, c):
    return ff.build(ff.FamilySpec("R", n, c=c), allow_non_pisot=True)


def fin(F, N):
    return bd.is_fin(F.from_int(N))[0]


def test_criterion_1_expansion_of_one(record):
    got = {n: bd.expansion_of_one(P(n)) for n in range(2, 31)}
    q = bd.expansion_of_one(Q(2, 1, 1)).render(point=False)
    ok = all(w.is_finite and w.frac_preperiod == (n, 1, 0, n) for n, w in got.items()) and q == "2011"
    record(1, ok, "[1] = n10n for n = 2..30, 2011 for Q{2,1,1}")
    assert ok


def test_criterion_2_counterexamples(record):
    six = bd.expand(P(2).from_int(6))
    q211 = Q(2, 1, 1)
    three = bd.expand(q211.from_int(3))
    tails = (bd.expand(1 - q211.alpha).word.render(), bd.expand(1 - Q(3, 1, 2).alpha).word.render())
    r_bad = []
    for n in range(2, 11):
        for c in range(1, n):
            res = bd.expand(R(n, c).from_int(n))
            if res.kind is not bd.Kind.EVENTUALLY_PERIODIC or not repro.same_cycle(res.word.frac_period, (n - 1, n - c, c - 1)):
                r_bad.append((n, c))
    ok = (
        six.kind is bd.Kind.EVENTUALLY_PERIODIC
        and six.word.render() == "20.210(00112)^w"
        and three.kind is bd.Kind.EVENTUALLY_PERIODIC
        and tails == ("0.111(00012)^w", "0.220(01112)^w")
        and not r_bad
    )
    record(2, ok, "P{2}: 6, Q{2,1,1}: 3, 1-alpha tails, R{n,c} periods (n-1)(n-c)(c-1)")
    assert ok, r_bad


def test_criterion_3_small_integers_finite(record):
    bad = [(n, N) for n in range(2, 11) for N in range(1, n * (n - 1) + 1) if not fin(P(n), N)]
    record(3, not bad, "every N <= n(n-1) finite, n = 2..10")
    assert not bad


def test_criterion_4_n_squared(record):
    wrong = [n for n in range(2, 31) if fin(P(n), n * n) != (n % 3 != 0)]
    displayed = {
        3: (0, 1, 2, 0, 0),
        6: (0, 1, 2, 0, 3, 3, 0, 4, 5, 0, 0),
        9: (0, 1, 2, 0, 6, 6, 0, 4, 5, 0, 3, 3, 0, 7, 8, 0, 0),
        12: repro.n_squared_period(12),
    }
    assert all(repro.n_squared_period(n) == w for n, w in displayed.items())
    periods = [n for n, w in displayed.items() if not repro.same_cycle(bd.expand(P(n).from_int(n * n)).word.frac_period, w)]
    ok = not wrong and not periods
    record(4, ok, "n^2 finite iff n != 0 mod 3 (n <= 30); periods for n = 3, 6, 9, 12")
    assert ok, (wrong, periods)


def test_criterion_5_gaps(record):
    got = (fin(P(6), 36), fin(P(6), 38), fin(P(9), 81), fin(P(9), 83))
    ok = got == (False, True, False, True)
    record(5, ok, "36, 81 not finite; 38, 83 finite")
    assert ok


def test_criterion_6_n_squared_plus_two(record):
    got = (fin(P(5), 27), fin(P(8), 66), fin(P(11), 123), fin(P(11), 146))
    ok = got == (False, False, True, False)
    record(6, ok, "27, 66, 146 not finite; 123 finite")
    assert ok


def test_criterion_7_unfolding_identities(record):
    bad = repro.unfold_failures(12)
    record(7, not bad, "u, w, hat-w rewrites over n <= 12")
    assert not bad


def test_criterion_8_f_form_and_identities(record):
    bad = []
    for n in range(2, 11):
        bad += repro.conjugacy_failures(n, 20)
        L = lattice(n)
        if not L.left_eigen_check() or L.tau_step((1, 0, -1)) != (0, 0, 0):
            bad.append(f"identities n={n}")
        for p in L.ball(6):
            if p != (0, 0, 0):
                v, s = L.preimage(p)
                if L.tau_step(v) != p:
                    bad.append(f"preimage {p} n={n}")
    record(8, not bad, "conjugacy through f on B_20, fG = beta f, fH = (n/beta) f, tau(1,0,-1) = 0, preimages")
    assert not bad


@pytest.mark.xfail(strict=True, reason="the displayed pi is f shifted by (1, n, -1); it does not intertwine on U")
def test_criterion_8_conjugacy_through_displayed_pi(record):
    failures = sum(len(repro.conjugacy_failures(n, 20, literal_pi=True)) for n in range(2, 11))
    record(8, failures == 0, f"pi as displayed: {failures} failures on B_20, n = 2..10")
    assert failures == 0


@pytest.mark.xfail(strict=True, reason="n = 6 and n = 10 have cycles leaving B_n")
def test_criterion_9_cycles_inside_ball(record):
    outside = [n for n in range(4, 11) if not lattice(n).census(30).cycles_inside_ball]
    record(9, not outside, f"cycles in B_30 outside B_n for n = {outside}")
    assert not outside


@pytest.mark.xfail(strict=True, reason="k + j = n gives no cycle of the predicted length")
def test_criterion_9_wkj_cycles(record):
    bad = []
    for n in range(4, 11):
        L = lattice(n)
        for k in range(1, n - 1, 2):
            for j in range(1, n, 2):
                if k + j - 1 >= n:
                    continue
                w = periodic_word_wkj(n, k, j).digits
                o = L.orbit((1, k, k + j - 1))
                if o.kind is not bd.Kind.EVENTUALLY_PERIODIC or o.preperiod or o.period != len(w) or len(w) % 6 != 5:
                    bad.append((n, k, j))
    record(9, not bad, f"(1,k,k+j-1) not a cycle of length |w_n(k,j)| for {len(bad)} cases, e.g. {bad[:3]}")
    assert not bad


def test_criterion_9_alpha_squared_orbit(record):
    bad = []
    for n in range(4, 11):
        if n % 3 == 1:
            o = lattice(n).orbit((1, n - 1, -1))
            if o.kind is not bd.Kind.FINITE or o.digits[-3:] != (1, 0, n):
                bad.append(n)
    record(9, not bad, "orbit of (1,n-1,-1) finite ending 1,0,n for n = 1 mod 3")
    assert not bad


def test_criterion_10_sufficient_condition(record):
    check = repro.check_sufficient()
    record(10, check.passed, check.title)
    assert check.passed, check.failures


def test_criterion_11_akiyama(record):
    check = repro.check_akiyama()
    record(11, check.passed, check.title)
    assert check.passed, check.failures


@pytest.mark.xfail(strict=True, reason="holds only when c = b + 1")
def test_criterion_12_q_family(record):
    bad = []
    for n, b, c in repro.q_positive_cases(12):
        r = ff.q_family_checks(n, b, c)
        if not (r["2n+1 finite"] and r["1-2alpha matches the displayed word"]):
            bad.append((n, b, c))
    record(12, not bad, f"2n+1 not finite and 1-2alpha off the displayed word for {bad}")
    assert not bad


def test_criterion_12_holds_when_c_is_b_plus_one():
    cases = [t for t in repro.q_positive_cases(12) if t[2] == t[1] + 1]
    assert cases == [(3, 1, 2), (5, 2, 3), (7, 3, 4), (9, 4, 5), (11, 5, 6)]
    for n, b, c in cases:
        r = ff.q_family_checks(n, b, c)
        assert r["2n+1 finite"] and r["1-2alpha matches the displayed word"]
