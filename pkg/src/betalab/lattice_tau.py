"""A lattice model of the beta-transformation for x^3 - (n+1)x^2 + nx - n.

Points (l, k, j) of Z^3 stand for f(l,k,j) = l - alpha*k + (alpha/beta)*j.
On U = {p : 0 <= f(p) < 1} the map tau(p) = G p - floor(f(G p)) e_1 satisfies
f(tau(p)) = T_beta(f(p)), so orbits of T_beta through Z[beta] become integer
orbits and repeats are detected on triples.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from . import beta_dynamics as bd
from .exact_field import FieldElement, PisotNumber
from .word_calculus import cubic

__all__ = [
    "NotInU",
    "NotInUStar",
    "NotRelated",
    "PreconditionUnmet",
    "CubicLattice",
    "lattice",
    "TauOrbit",
    "Census",
    "FiveStep",
]

Point = tuple[int, int, int]
DEFAULT_CAP = 10**6


class NotInU(ValueError):
    pass


class NotInUStar(ValueError):
    pass


class NotRelated(ValueError):
    pass


class PreconditionUnmet(ValueError):
    pass


@dataclass(frozen=True)
class TauOrbit:
    points: tuple[Point, ...]
    digits: tuple[int, ...]
    kind: bd.Kind
    preperiod: int = 0
    period: int = 0

    @property
    def cycle(self) -> tuple[Point, ...]:
        if self.kind is not bd.Kind.EVENTUALLY_PERIODIC:
            return ()
        return self.points[self.preperiod : self.preperiod + self.period]

    def to_json(self) -> dict:
        return {
            "points": [list(p) for p in self.points],
            "digits": list(self.digits),
            "kind": self.kind.value,
            "preperiod": self.preperiod,
            "period": self.period,
        }


@dataclass(frozen=True)
class FiveStep:
    passed: bool
    points: tuple[Point, ...]
    k2_negative: bool
    k4_positive: bool
    k5_positive: bool


@dataclass
class Census:
    n: int
    radius: int
    rows: list[tuple] = field(default_factory=list)
    cycles: dict[int, tuple[Point, ...]] = field(default_factory=dict)
    max_excursion: int = 0
    all_return: bool = True
    cycles_inside_ball: bool = True
    shell_hits: dict[Point, int] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "l", "k", "j", "kind", "preperiod", "period", "cycle_id"])
        w.writerows(self.rows)
        return buf.getvalue()

    def cycles_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "cycles": [
                    {"cycle_id": cid, "length": len(c), "points": [list(p) for p in c]}
                    for cid, c in sorted(self.cycles.items())
                ],
            },
            indent=2,
        )

    def summary(self) -> dict:
        return {
            "n": self.n,
            "radius": self.radius,
            "points": len(self.rows),
            "finite": sum(1 for r in self.rows if r[4] == bd.Kind.FINITE.value),
            "cycles": len(self.cycles),
            "max_excursion": self.max_excursion,
            "all_return_to_ball": self.all_return,
            "cycles_inside_ball": self.cycles_inside_ball,
            "max_shell_hitting_time": max(self.shell_hits.values(), default=0),
            "shell_points_never_entering": sum(1 for t in self.shell_hits.values() if t < 0),
        }


def _canonical_cycle(points: Iterable[Point]) -> tuple[Point, ...]:
    pts = list(points)
    i = min(range(len(pts)), key=lambda t: pts[t])
    return tuple(pts[i:] + pts[:i])


class CubicLattice:
    """Exact f, G, H and tau for one member of the cubic family."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.n = n
        self.P: PisotNumber = cubic(n)
        self.alpha: FieldElement = self.P.alpha
        self.alpha_over_beta: FieldElement = self.alpha / self.P.beta
        self._a = float(self.alpha)
        self._ab = float(self.alpha_over_beta)

    # -- linear algebra ------------------------------------------------------
    def f_value(self, p: Point) -> FieldElement:
        l, k, j = p
        return self.alpha * (-k) + self.alpha_over_beta * j + l

    def apply_G(self, p: Point) -> Point:
        l, k, j = p
        return (self.n * l - k, -l + k - j, k)

    def apply_H(self, p: Point) -> Point:
        l, k, j = p
        n = self.n
        return (l + j, n * j, -l - n * k + (n - 1) * j)

    def G_matrix(self) -> list[list[int]]:
        n = self.n
        return [[n, -1, 0], [-1, 1, -1], [0, 1, 0]]

    def char_poly(self) -> tuple[int, ...]:
        """det(xI - G) by direct expansion, highest degree first."""
        g = self.G_matrix()
        tr = g[0][0] + g[1][1] + g[2][2]
        minors = (
            g[0][0] * g[1][1] - g[0][1] * g[1][0]
            + g[0][0] * g[2][2] - g[0][2] * g[2][0]
            + g[1][1] * g[2][2] - g[1][2] * g[2][1]
        )
        det = (
            g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
        )
        return (1, -tr, minors, -det)

    def left_eigen_check(self) -> bool:
        """f(G e) = beta f(e) and f(H e) = (n/beta) f(e) on the standard basis."""
        beta = self.P.beta
        scale = beta.inverse() * self.n
        for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            if self.f_value(self.apply_G(e)) != beta * self.f_value(e):
                return False
            if self.f_value(self.apply_H(e)) != scale * self.f_value(e):
                return False
        return True

    # -- exact floors with a float fast path -------------------------------
    def floor_lin(self, k: int, j: int) -> int:
        """floor(k*alpha - j*alpha/beta)."""
        x = k * self._a - j * self._ab
        r = round(x)
        if abs(x - r) > 1e-9 * (abs(k) + abs(j) + 1):
            return math.floor(x)
        return (self.alpha * k - self.alpha_over_beta * j).floor()

    def l_for(self, k: int, j: int) -> int:
        """The unique l with (l, k, j) in U."""
        if k == 0 and j == 0:
            return 0
        return 1 + self.floor_lin(k, j)

    def in_U(self, p: Point) -> bool:
        return p[0] == self.l_for(p[1], p[2])

    def point(self, k: int, j: int) -> Point:
        return (self.l_for(k, j), k, j)

    def ball(self, radius: int) -> Iterator[Point]:
        """All points of U with max(|k|, |j|) <= radius."""
        for k in range(-radius, radius + 1):
            for j in range(-radius, radius + 1):
                yield self.point(k, j)

    # -- the map -------------------------------------------------------------
    def tau_step(self, p: Point) -> Point:
        if not self.in_U(p):
            raise NotInU(f"{p} is not in U")
        l, k, j = p
        k2 = k - j - l
        return (self.l_for(k2, k), k2, k)

    def letter(self, p: Point) -> int:
        """floor(f(G p)), the digit emitted at p."""
        g = self.apply_G(p)
        return g[0] - self.tau_step(p)[0]

    def pi(self, p: Point) -> FieldElement:
        """(l, k, j) -> f(l+1, k+n, j-1)."""
        l, k, j = p
        return self.f_value((l + 1, k + self.n, j - 1))

    def from_field(self, x: FieldElement) -> Point:
        """The triple with f(triple) = x, for x in Z[beta]."""
        if not x.is_integral() or x.parent != self.P:
            raise ValueError("need an element of Z[beta]")
        a, b, c = x.num
        n = self.n
        j = -c
        k = j * (n + 1) - b
        l = a - k * n - j * (1 - n)
        return (l, k, j)

    def preimage(self, p: Point) -> tuple[Point, int]:
        """The chosen preimage v with f(v) = (f(p) + s)/beta, and s."""
        if not self.in_U(p):
            raise NotInU(f"{p} is not in U")
        if p == (0, 0, 0):
            raise NotInUStar("the origin is excluded")
        l, k, j = p
        n = self.n
        r = (l + j) % n
        if r == 0 and (self.f_value(p) - self.alpha).sign() >= 0:
            s = 0
        else:
            s = n - r
        q = (l + s + j) // n
        v = (q, j, j - k - q)
        return v, s

    def injectivity_class(self, p0: Point, p1: Point) -> tuple[str, Point | None]:
        if self.tau_step(p0) != p1:
            raise NotRelated(f"tau{p0} != {p1}")
        l0, k0, j0 = p0
        if (p1[0] + p1[2]) % self.n != 0:
            return "one_to_one", None
        f0 = self.f_value(p0)
        if (f0 - self.alpha_over_beta).sign() < 0:
            sib = (l0 + 1, k0, j0 - 1)
            cls = "two_to_one_low"
        elif (f0 - (1 - self.alpha_over_beta)).sign() > 0:
            sib = (l0 - 1, k0, j0 + 1)
            cls = "two_to_one_high"
        else:
            return "one_to_one", None
        if not self.in_U(sib) or self.tau_step(sib) != p1:
            raise AssertionError(f"sibling {sib} does not map to {p1}")
        return cls, sib

    def orbit(self, p: Point, cap: int = DEFAULT_CAP) -> TauOrbit:
        if not self.in_U(p):
            raise NotInU(f"{p} is not in U")
        seen = {p: 0}
        points = [p]
        digits: list[int] = []
        while True:
            if p == (0, 0, 0):
                return TauOrbit(tuple(points), tuple(digits), bd.Kind.FINITE)
            if len(points) > cap:
                return TauOrbit(tuple(points), tuple(digits), bd.Kind.TRUNCATED)
            q = self.tau_step(p)
            digits.append(self.apply_G(p)[0] - q[0])
            if q in seen:
                hit = seen[q]
                return TauOrbit(
                    tuple(points), tuple(digits), bd.Kind.EVENTUALLY_PERIODIC, hit, len(points) - hit
                )
            seen[q] = len(points)
            points.append(q)
            p = q

    # -- inequalities ----------------------------------------------------------
    def check_bounds(self, p: Point) -> dict[str, bool]:
        """Every applicable bound on l for p; keys name the bound checked."""
        if not self.in_U(p):
            raise NotInU(f"{p} is not in U")
        n = self.n
        l, k, j = p
        m, mu = max(abs(k), abs(j)), min(abs(k), abs(j))
        out: dict[str, bool] = {}
        if n >= 4 and p != (0, 0, 0):
            slack = Fraction(mu, n - 2) + Fraction(m - mu, n - 1)
            out["l_window"] = -slack < l < 1 + slack
            if m >= 2:
                out["m_exceeds_abs_l"] = m > abs(l)
        if m == 1:
            out["m1_l_in_0_1"] = 0 <= l <= 1
        if k * j > 0 and m <= n:
            out["same_sign_small"] = l == (1 if k > 0 else 0)
        if k * j < 0 and m <= n - 2:
            out["opposite_sign_small"] = l == (1 if k > 0 else 0)
        if k == 0 and 0 < j <= n * n - 2:
            out["k0_j_positive"] = l == 0
        if k == 0 and 2 - n * n <= j < 0:
            out["k0_j_negative"] = l == 1
        if j == 0 and 1 - n <= k < 0:
            out["j0_k_negative"] = l == 0
        if j == 0 and 0 < k <= n - 1:
            out["j0_k_positive"] = l == 1
        return out

    def five_step_signs(self, p0: Point) -> FiveStep:
        """k2 < 0, k4 > 0, k5 > 0 along the orbit of p0 with k0, j0 > 0 > k1."""
        if self.n < 4:
            raise PreconditionUnmet("needs n >= 4")
        if not self.in_U(p0) or p0 == (0, 0, 0):
            raise PreconditionUnmet("needs a point of U*")
        pts = [p0]
        for _ in range(5):
            pts.append(self.tau_step(pts[-1]))
        k = [q[1] for q in pts]
        if not (k[0] > 0 and p0[2] > 0 and k[1] < 0):
            raise PreconditionUnmet("needs k0 > 0, j0 > 0 and k1 < 0")
        if (0, 0, 0) in pts[:5]:
            raise PreconditionUnmet("orbit leaves U* within five steps")
        a, b, c = k[2] < 0, k[4] > 0, k[5] > 0
        return FiveStep(a and b and c, tuple(pts), a, b, c)

    def small_norm_points(self, radius: int) -> list[Point]:
        """Points of U* with distance from f to the nearest integer below alpha/beta."""
        ab = self.alpha_over_beta
        out = []
        for p in self.ball(radius):
            if p == (0, 0, 0):
                continue
            x = self.f_value(p)
            if (x - ab).sign() < 0 or (x - (1 - ab)).sign() > 0:
                out.append(p)
        return out

    # -- census ----------------------------------------------------------------
    def census(self, radius: int, cap: int = DEFAULT_CAP, shell: int | None = None) -> Census:
        """Orbits of every point of U in the ball of the given radius.

        Outcomes are memoised per point, so each lattice point is stepped at
        most once across the whole census.
        """
        n = self.n
        res = Census(n, radius)
        # point -> (preperiod, cycle id or -1 for the origin, max |k|,|j| ahead)
        memo: dict[Point, tuple[int, int, int]] = {(0, 0, 0): (0, -1, 0)}
        periods: dict[int, int] = {}

        def norm(q: Point) -> int:
            return max(abs(q[1]), abs(q[2]))

        def resolve(p: Point) -> tuple[int, int, int]:
            path: list[Point] = []
            index: dict[Point, int] = {}
            q = p
            while q not in memo:
                if len(path) > cap:
                    raise RuntimeError(f"orbit of {p} exceeds cap")
                index[q] = len(path)
                path.append(q)
                q = self.tau_step(q)
                if q in index:
                    cyc = path[index[q]:]
                    cid = len(res.cycles)
                    res.cycles[cid] = _canonical_cycle(cyc)
                    periods[cid] = len(cyc)
                    top = max(norm(c) for c in cyc)
                    if top > n:
                        res.cycles_inside_ball = False
                    for c in cyc:
                        memo[c] = (0, cid, top)
                    path = path[: index[q]]
                    q = cyc[0]
                    break
            pre, cid, top = memo[q]
            for i in range(len(path) - 1, -1, -1):
                top = max(top, norm(path[i]))
                pre += 1
                memo[path[i]] = (pre, cid, top)
            return memo[p]

        for p in self.ball(radius):
            pre, cid, top = resolve(p)
            res.max_excursion = max(res.max_excursion, top)
            if cid < 0:
                row = (n, *p, bd.Kind.FINITE.value, pre, 0, "")
            else:
                row = (n, *p, bd.Kind.EVENTUALLY_PERIODIC.value, pre, periods[cid], cid)
                if norm(p) <= n and any(norm(c) > n for c in res.cycles[cid]):
                    res.all_return = False
            res.rows.append(row)
        if shell:
            for p in self.ball(shell):
                if norm(p) != shell:
                    continue
                q, t, seen = p, 0, set()
                while norm(q) > n:
                    if q in seen:
                        t = -1  # trapped in a cycle outside the ball
                        break
                    seen.add(q)
                    q = self.tau_step(q)
                    t += 1
                res.shell_hits[p] = t
        return res

    def cycle_is_integer_class(self, cycle: Iterable[Point], n_max: int = 400) -> bool:
        """Whether some N <= n_max has a fractional orbit ending in this cycle."""
        cyc = set(cycle)
        if not cyc or cyc == {(0, 0, 0)}:
            return True
        for N in range(1, n_max + 1):
            for c in self.integer_cycles(N):
                if set(c) == cyc:
                    return True
        return False

    def integer_cycles(self, N: int) -> list[tuple[Point, ...]]:
        """The lattice cycle reached by the orbit of N (empty when finite)."""
        return list(_integer_cycle(self.n, N))


@lru_cache(maxsize=None)
def _integer_cycle(n: int, N: int) -> tuple[tuple[Point, ...], ...]:
    L = lattice(n)
    res = bd.expand(L.P.from_int(N))
    if res.kind is not bd.Kind.EVENTUALLY_PERIODIC:
        return ()
    x = res.states[-1]
    x = bd.t_beta_step(x)[1]  # now inside the cycle
    start = x
    pts = []
    while True:
        pts.append(L.from_field(x))
        x = bd.t_beta_step(x)[1]
        if x == start:
            break
    return (tuple(pts),)


@lru_cache(maxsize=None)
def lattice(n: int) -> CubicLattice:
    return CubicLattice(n)
