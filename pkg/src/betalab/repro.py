"""Reproduction checks, one per claim group.

Each check returns a :class:`Check`; ``run_all`` keeps input order whatever
the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import beta_dynamics as bd
from . import families_finiteness as ff
from .lattice_tau import lattice
from .word_calculus import (
    WeakWord,
    cubic,
    is_canonical,
    periodic_word_wkj,
    unfold_u,
    unfold_w,
    unfold_ww,
    value,
    word_hat_w,
    word_t,
    word_u,
    word_v,
    word_w,
)


@dataclass
class Check:
    key: str
    title: str
    passed: bool
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({'; '.join(self.failures[:3])})" if self.failures else ""
        return f"{status}  {self.key:<24} {self.title}{extra}"

    def to_json(self) -> dict:
        return {"key": self.key, "title": self.title, "passed": self.passed, "failures": self.failures}


def _p(n: int):
    return ff.build(ff.FamilySpec("P", n))


def _q(n: int, b: int, c: int):
    return ff.build(ff.FamilySpec("Q", n, b, c))


def _fin(P, N: int) -> bool:
    return bd.is_fin(P.from_int(N))[0]


def _same(w: bd.DigitWord, pre, per) -> bool:
    return bd.lex_compare((w.frac_preperiod, w.frac_period), (tuple(pre), tuple(per))) == 0


def check_one_table() -> Check:
    bad = []
    for n in range(2, 31):
        one = bd.expansion_of_one(_p(n))
        if not one.is_finite or one.frac_preperiod != (n, 1, 0, n):
            bad.append(f"P{{{n}}}: {one.render()}")
    one = bd.expansion_of_one(_q(2, 1, 1))
    if one.frac_preperiod != (2, 0, 1, 1) or not one.is_finite:
        bad.append(f"Q{{2,1,1}}: {one.render()}")
    return Check("one-expansions", "[1] = n10n for P{2..30}, 2011 for Q{2,1,1}", not bad, bad)


def check_counterexamples() -> Check:
    bad = []
    if _fin(_p(2), 6):
        bad.append("6 finite for P{2}")
    Q = _q(2, 1, 1)
    if _fin(Q, 3):
        bad.append("3 finite for Q{2,1,1}")
    if not _same(bd.expand(1 - Q.alpha).word, (1, 1, 1), (0, 0, 0, 1, 2)):
        bad.append("Q{2,1,1} 1-alpha")
    Q = _q(3, 1, 2)
    if not _same(bd.expand(1 - Q.alpha).word, (2, 2, 0), (0, 1, 1, 1, 2)):
        bad.append("Q{3,1,2} 1-alpha")
    for n in range(2, 11):
        for c in range(1, n):
            r = ff.r_family_checks(n, c)
            R = ff.build(ff.FamilySpec("R", n, c=c), allow_non_pisot=True)
            period = bd.expand(R.from_int(n)).word.frac_period
            if not (r["n not finite"] and r["1-alpha matches the displayed word"] and same_cycle(period, (n - 1, n - c, c - 1))):
                bad.append(f"R{{{n},{c}}}: {r['n']}")
    return Check("counterexamples", "P{2}: 6, Q: 3 and 1-alpha tails, R{n,c}: n periodic", not bad, bad)


def check_small_integers() -> Check:
    bad = [f"{N} in P{{{n}}}" for n in range(2, 11) for N in range(1, n * (n - 1) + 1) if not _fin(_p(n), N)]
    return Check("integers-below-n(n-1)", "every N <= n(n-1) finite, n = 2..10", not bad, bad)


def n_squared_period(n: int) -> tuple[int, ...]:
    """The displayed period 0 1 2 0 (n-3)(n-3) 0 4 5 0 (n-6)(n-6) ... 0 (n-2)(n-1) 0 0."""
    out: list[int] = []
    for i in range(n // 3):
        out += [0, 3 * i + 1, 3 * i + 2, 0, n - 3 * i - 3, n - 3 * i - 3]
    return tuple(out[:-1])


def same_cycle(a, b) -> bool:
    a, b = tuple(a), tuple(b)
    return len(a) == len(b) and any(a[i:] + a[:i] == b for i in range(len(a) or 1))


def check_n_squared() -> Check:
    bad = []
    for n in range(2, 31):
        if _fin(_p(n), n * n) != (n % 3 != 0):
            bad.append(f"n = {n}")
    for n in (3, 6, 9, 12):
        w = bd.expand(_p(n).from_int(n * n)).word
        if not same_cycle(w.frac_period, n_squared_period(n)):
            bad.append(f"period n = {n}")
    return Check("n-squared-residues", "n^2 finite iff n != 0 mod 3; displayed period", not bad, bad)


def _expect(P, N: int, finite: bool, label: str, bad: list[str]) -> None:
    if _fin(P, N) != finite:
        bad.append(f"{label}: {N} {'not ' if finite else ''}finite")


def check_gaps() -> Check:
    bad: list[str] = []
    _expect(_p(6), 36, False, "P{6}", bad)
    _expect(_p(6), 38, True, "P{6}", bad)
    _expect(_p(9), 81, False, "P{9}", bad)
    _expect(_p(9), 83, True, "P{9}", bad)
    return Check("gaps", "36, 81 not finite; 38, 83 finite", not bad, bad)


def check_n_squared_plus_two() -> Check:
    bad: list[str] = []
    _expect(_p(5), 27, False, "P{5}", bad)
    _expect(_p(8), 66, False, "P{8}", bad)
    _expect(_p(11), 123, True, "P{11}", bad)
    _expect(_p(11), 146, False, "P{11}", bad)
    return Check("n-squared-plus-two", "27, 66, 146 not finite; 123 finite", not bad, bad)


def unfold_failures(n_max: int = 12) -> list[str]:
    bad = []
    for n in range(3, n_max + 1):
        P = cubic(n)
        for k in range(1, n - 1):
            for j in range(0, n + 2):
                a, b = unfold_u(n, k, j)
                if value(WeakWord(word_u(n, k, j), P)) != value(WeakWord(a.digits + b.digits, P)):
                    bad.append(f"u value {n},{k},{j}")
                if a.digits != word_v(n, k, j) or b.digits != word_u(n, k, j + 2):
                    bad.append(f"u shape {n},{k},{j}")
                if 1 <= j <= k - 1 and not is_canonical(a.digits, P):
                    bad.append(f"v canonical {n},{k},{j}")
                if j >= 2:
                    a, b = unfold_w(n, k, j)
                    if value(WeakWord(word_w(n, k, j), P)) != value(WeakWord(a.digits + b.digits, P)):
                        bad.append(f"w value {n},{k},{j}")
                    if a.digits != word_t(n, k, j) or b.digits != word_w(n, k, j + 2):
                        bad.append(f"w shape {n},{k},{j}")
                    if j <= k - 2 and not is_canonical(a.digits, P):
                        bad.append(f"t canonical {n},{k},{j}")
        for k in range(-n, n + 2):
            for j in range(0, n + 2):
                a, b = unfold_ww(n, k, j)
                if value(WeakWord(word_hat_w(n, k, j), P)) != value(WeakWord(a.digits + b.digits, P)):
                    bad.append(f"hat-w value {n},{k},{j}")
    return bad


def check_unfoldings() -> Check:
    bad = unfold_failures()
    return Check("unfoldings", "u, w, hat-w rewrites preserve value; prefixes canonical", not bad, bad)


def conjugacy_failures(n: int, radius: int = 20, literal_pi: bool = False) -> list[str]:
    """Points of the ball where the lattice map disagrees with T_beta.

    With ``literal_pi`` the functional is (l,k,j) -> f(l+1, k+n, j-1);
    otherwise f itself, which is the functional defining U.
    """
    L = lattice(n)
    phi = L.pi if literal_pi else L.f_value
    bad = []
    for p in L.ball(radius):
        x = phi(p)
        if x.sign() < 0 or (x - 1).sign() >= 0:
            bad.append(f"n={n} {p}: image outside [0,1)")
            continue
        d, y = bd.t_beta_step(x)
        q = L.tau_step(p)
        if y != phi(q) or d != L.letter(p):
            bad.append(f"n={n} {p}")
    return bad


def check_conjugacy() -> Check:
    bad = []
    for n in range(2, 11):
        L = lattice(n)
        lit = conjugacy_failures(n, literal_pi=True)
        if lit:
            bad.append(f"pi as displayed: {len(lit)} failures at n={n}")
        bad += conjugacy_failures(n)
        if not L.left_eigen_check():
            bad.append(f"fG, fH at n={n}")
        if L.tau_step((1, 0, -1)) != (0, 0, 0):
            bad.append(f"tau(1,0,-1) at n={n}")
        for p in L.ball(6):
            if p == (0, 0, 0):
                continue
            v, s = L.preimage(p)
            if L.tau_step(v) != p or L.f_value(v) * L.P.beta != L.f_value(p) + s:
                bad.append(f"preimage {p} at n={n}")
    return Check("lattice-conjugacy", "pi tau = T pi on B_20, n = 2..10; G, H, preimages", not bad, bad)


def check_census() -> Check:
    bad = []
    for n in range(4, 11):
        L = lattice(n)
        cen = L.census(30)
        if not cen.cycles_inside_ball:
            far = [c for c in cen.cycles.values() if max(max(abs(p[1]), abs(p[2])) for p in c) > n]
            bad.append(f"n={n}: {len(far)} cycle(s) outside B_n, e.g. length {len(far[0])}")
        for k in range(1, n, 2):
            for j in range(1, n, 2):
                if not (k < n - 1 and k + j - 1 < n):
                    continue
                o = L.orbit((1, k, k + j - 1))
                w = periodic_word_wkj(n, k, j)
                if o.kind is not bd.Kind.EVENTUALLY_PERIODIC or o.preperiod or o.period != len(w.digits) or len(w.digits) % 6 != 5:
                    bad.append(f"n={n} (1,{k},{k + j - 1}) not a {len(w.digits)}-cycle")
        if n % 3 == 1:
            o = L.orbit((1, n - 1, -1))
            if o.kind is not bd.Kind.FINITE or o.digits[-3:] != (1, 0, n):
                bad.append(f"n={n}: orbit of (1,n-1,-1)")
    return Check("lattice-census", "cycles in B_30 lie in B_n; (1,k,k+j-1) cycles; alpha^2 orbit", not bad, bad)


def check_sufficient() -> Check:
    bad = []
    for n in range(2, 23):
        P = _p(n)
        if n % 3 == 1:
            rep = ff.check_suff(P)
            if rep.verdict is not ff.Verdict.HOLDS:
                bad.append(f"n={n}: {rep.verdict.value}")
            scan = ff.scan_f1(P, ff.DEFAULT_NMAX)
            if scan.non_finite:
                bad.append(f"n={n}: {scan.non_finite[0]} not finite")
        else:
            bound = n * n + 2 * n + 3
            if all(_fin(P, N) for N in range(1, bound + 1)):
                bad.append(f"n={n}: nothing below {bound}")
    return Check("sufficient-condition", "alpha^2 finite gives F1 for n = 1 mod 3; counterexamples otherwise", not bad, bad)


def check_akiyama() -> Check:
    bad = []
    for n in range(2, 11):
        P = _p(n)
        x = ff.beta_fractional_part(P.beta * n + 2)
        if x != bd.digits_value(P, (n - 1, 1, 1, n, n)):
            bad.append(f"n={n}: word value")
        rep = ff.akiyama_set(P)
        hit = [e for e in rep.elements if e.element == x]
        if not hit or hit[0].finite or rep.property_f != "fails":
            bad.append(f"n={n}: class of n*beta+2")
    return Check("akiyama-set", "C contains (n-1)11nn, not finite, so F fails", not bad, bad)


def q_positive_cases(n_max: int = 12) -> list[tuple[int, int, int]]:
    return [(n, b, n - b) for n in range(2, n_max + 1) for b in range(1, n) if b <= n - b and n >= 2 * b + 1 and 2 * b + 1 - (n - b) >= 0]


def check_q_positive() -> Check:
    bad = []
    for n, b, c in q_positive_cases():
        r = ff.q_family_checks(n, b, c)
        if not (r["1-2alpha matches the displayed word"] and r["2n+1 finite"]):
            bad.append(f"Q{{{n},{b},{c}}}: 1-2alpha = {r['1-2alpha']}")
    return Check("q-family-2n+1", "2n+1 finite and 1-2alpha as displayed", not bad, bad)


CHECKS: list[Callable[[], Check]] = [
    check_one_table,
    check_counterexamples,
    check_small_integers,
    check_n_squared,
    check_gaps,
    check_n_squared_plus_two,
    check_unfoldings,
    check_conjugacy,
    check_census,
    check_sufficient,
    check_akiyama,
    check_q_positive,
]


def run_all(threads: int = 1, only: set[str] | None = None) -> list[Check]:
    todo = CHECKS if not only else [c for c in CHECKS if c.__name__ in only]
    if threads <= 1:
        return [c() for c in todo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: c(), todo))
