"""The three polynomial families, finiteness scans and sufficient conditions.

P{n}:     x^3 - (n+1)x^2 + nx - n
Q{n,b,c}: x^4 - nx^3 - bx - c            with 0 < b <= c, b + c = n
R{n,c}:   x^5 - nx^4 + x^3 - nx^2 + cx - c  with 1 <= |c| < n

Scanning can only ever report "no counterexample up to N_max"; a proof-backed
positive verdict comes from :func:`check_suff` alone.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import mpmath

from . import beta_dynamics as bd
from .exact_field import FieldElement, PisotNumber, WrongDegree, inv_beta, make_pisot
from .word_calculus import WeakWord, value

__all__ = [
    "ConstraintViolation",
    "ComplexEmbeddingUncertified",
    "FamilySpec",
    "build",
    "F1Report",
    "scan_f1",
    "fractional_part",
    "beta_fractional_part",
    "Claim",
    "residue_table",
    "AkiyamaElement",
    "AkiyamaReport",
    "akiyama_set",
    "Verdict",
    "SuffReport",
    "check_suff",
    "q_family_checks",
    "r_family_checks",
    "CACHE_ENV",
]

CACHE_ENV = "BETALAB_CACHE_DIR"
DEFAULT_NMAX = 10**4


class ConstraintViolation(ValueError):
    pass


class ComplexEmbeddingUncertified(ArithmeticError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    variant: str  # "P", "Q" or "R"
    n: int
    b: int | None = None
    c: int | None = None

    def __post_init__(self):
        v, n, b, c = self.variant, self.n, self.b, self.c
        if v not in ("P", "Q", "R"):
            raise ConstraintViolation(f"unknown family {v!r}")
        if n < 2:
            raise ConstraintViolation("n must be at least 2")
        if v == "Q" and (b is None or c is None or not (0 < b <= c and b + c == n)):
            raise ConstraintViolation("Q needs 0 < b <= c and b + c = n")
        if v == "R" and (c is None or not 1 <= abs(c) < n):
            raise ConstraintViolation("R needs 1 <= |c| < n")

    @property
    def coeffs(self) -> tuple[int, ...]:
        n, b, c = self.n, self.b, self.c
        if self.variant == "P":
            return (1, -(n + 1), n, -n)
        if self.variant == "Q":
            return (1, -n, 0, -b, -c)
        return (1, -n, 1, -n, c, -c)

    @property
    def label(self) -> str:
        if self.variant == "P":
            return f"P{{{self.n}}}"
        if self.variant == "Q":
            return f"Q{{{self.n},{self.b},{self.c}}}"
        return f"R{{{self.n},{self.c}}}"

    @property
    def expected_floor(self) -> int:
        return self.n - 1 if self.variant == "R" else self.n


def build(spec: FamilySpec, allow_non_pisot: bool = False) -> PisotNumber:
    """Construct and certify the dominant root; raises NotPisot unless allowed."""
    P = make_pisot(spec.coeffs, strict=not allow_non_pisot)
    if P.floor_beta != spec.expected_floor:
        raise ConstraintViolation(f"{spec.label}: floor(beta) = {P.floor_beta}")
    return P


# -- F1 scanning ---------------------------------------------------------------


def fractional_part(P: PisotNumber, N: int) -> tuple[tuple[int, ...], FieldElement]:
    """Greedy integer digits of N >= 1 and its fractional part in [0, 1)."""
    if N < 1:
        raise ValueError("N must be positive")
    L, ib = _power_table(P, N)
    y = ib[L] * N
    digits = []
    for _ in range(L):
        bx = y.mul_beta()
        d = bx.floor()
        digits.append(d)
        y = bx - d
    return tuple(digits), y


_TABLES: dict[PisotNumber, tuple[list, list]] = {}


def _power_table(P: PisotNumber, N: int):
    """Least L with N < beta^L, plus the cached powers beta^-k."""
    pows, ibs = _TABLES.setdefault(P, ([P.one], [P.one]))
    x = P.from_int(N)
    L = 0
    while True:
        if L == len(pows):
            pows.append(pows[-1].mul_beta())
            ibs.append(ibs[-1] * inv_beta(P))
        if (x - pows[L]).sign() < 0:
            return L, ibs
        L += 1


@dataclass
class F1Report:
    label: str
    scanned_to: int
    non_finite: list[int] = field(default_factory=list)
    periods: dict[int, list[int]] = field(default_factory=dict)
    classes: dict[int, list[int]] = field(default_factory=dict)
    residue_facts: dict[str, bool] = field(default_factory=dict)

    @property
    def gaps(self) -> bool:
        bad = set(self.non_finite)
        return any(k + 1 not in bad and k + 1 <= self.scanned_to for k in bad)

    @property
    def gap_list(self) -> list[int]:
        bad = set(self.non_finite)
        return [k for k in self.non_finite if k + 1 not in bad and k + 1 <= self.scanned_to]

    def to_json(self) -> dict:
        return {
            "beta": self.label,
            "scanned_to": self.scanned_to,
            "non_finite": self.non_finite,
            "periods": {str(k): v for k, v in self.periods.items()},
            "gaps": self.gaps,
            "gap_list": self.gap_list,
            "classes": {str(k): v for k, v in self.classes.items()},
            "residue_facts": self.residue_facts,
            "verdict": "no counterexample" if not self.non_finite else "F1 fails",
        }

    @classmethod
    def from_json(cls, d: dict) -> "F1Report":
        return cls(
            d["beta"],
            d["scanned_to"],
            list(d["non_finite"]),
            {int(k): v for k, v in d["periods"].items()},
            {int(k): v for k, v in d["classes"].items()},
            dict(d["residue_facts"]),
        )


def _cache_path(key: dict) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
    return Path(root) / f"{digest}.json"


class _OrbitMemo:
    """Shared outcome of T_beta orbits: state key -> (finite?, class id)."""

    def __init__(self, cap: int):
        self.cap = cap
        self.outcome: dict[tuple, tuple[bool, int]] = {}
        self.periods: dict[int, tuple[int, ...]] = {}

    def classify(self, x: FieldElement) -> tuple[bool, int]:
        path: list[tuple] = []
        digits: list[int] = []
        index: dict[tuple, int] = {}
        while True:
            key = x.key
            if key in self.outcome:
                res = self.outcome[key]
                break
            if x.is_zero():
                res = (True, -1)
                self.outcome[key] = res
                break
            if len(path) > self.cap:
                raise bd.OrbitTruncated(f"no decision within {self.cap} states")
            if key in index:
                cid = len(self.periods)
                self.periods[cid] = tuple(digits[index[key]:])
                for k in path[index[key]:]:
                    self.outcome[k] = (False, cid)
                res = (False, cid)
                break
            index[key] = len(path)
            path.append(key)
            bx = x.mul_beta()
            d = bx.floor()
            digits.append(d)
            x = bx - d
        for k in path:
            self.outcome.setdefault(k, res)
        return res


def scan_f1(P: PisotNumber, n_max: int = DEFAULT_NMAX, cap: int = bd.DEFAULT_CAP, label: str | None = None) -> F1Report:
    """Classify every 1 <= N <= n_max and group N by fractional part.

    ``classes`` maps a class id to the N sharing one fractional part; ids are
    assigned in order of first appearance.
    """
    label = label or f"poly{list(P.coeffs)}"
    key = {"op": "scan_f1", "coeffs": list(P.coeffs), "n_max": n_max, "cap": cap, "v": 1}
    path = _cache_path(key)
    if path is not None and path.exists():
        return F1Report.from_json(json.loads(path.read_text()))
    memo = _OrbitMemo(cap)
    report = F1Report(label, n_max)
    class_ids: dict[tuple, int] = {}
    for N in range(1, n_max + 1):
        _, frac = fractional_part(P, N)
        finite, cid = memo.classify(frac)
        fk = frac.key
        if fk not in class_ids:
            class_ids[fk] = len(class_ids)
        report.classes.setdefault(class_ids[fk], []).append(N)
        if not finite:
            report.non_finite.append(N)
            report.periods[N] = list(memo.periods[cid])
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report.to_json(), sort_keys=True))
    return report


# -- residue claims for the cubic family ----------------------------------------


@dataclass(frozen=True)
class Claim:
    n: int
    name: str
    expected: bool
    observed: bool

    @property
    def passed(self) -> bool:
        return self.expected == self.observed

    def to_json(self) -> dict:
        return {"n": self.n, "claim": self.name, "expected": self.expected, "observed": self.observed, "passed": self.passed}


def _fin(P: PisotNumber, N: int) -> bool:
    return bd.is_fin(P.from_int(N))[0]


def residue_table(n_lo: int, n_hi: int) -> list[Claim]:
    """Membership of n^2 .. n^2+3 (and n^2+2n+3) against the residue-class rules."""
    if n_lo < 2:
        raise ValueError("n_lo must be at least 2")
    out: list[Claim] = []
    for n in range(n_lo, n_hi + 1):
        P = build(FamilySpec("P", n))
        sq = n * n
        fin = {N: _fin(P, N) for N in (sq, sq + 1, sq + 2, sq + 3)}
        r3, r4 = n % 3, n % 4
        out.append(Claim(n, "n^2 finite iff n != 0 mod 3", r3 != 0, fin[sq]))
        out.append(Claim(n, "n^2+1 shares the verdict of n^2", fin[sq], fin[sq + 1]))
        if r3 == 2 and r4 != 3:
            out.append(Claim(n, "n^2+2 not finite (n = 2 mod 3, n != 3 mod 4)", False, fin[sq + 2]))
        if r3 == 0 and r4 in (1, 2):
            out.append(Claim(n, "n^2+2 finite (n = 0 mod 3, n = 1,2 mod 4)", True, fin[sq + 2]))
        if r3 == 1:
            out.append(Claim(n, "n^2+2 finite (n = 1 mod 3)", True, fin[sq + 2]))
            out.append(Claim(n, "n^2+3 finite (n = 1 mod 3)", True, fin[sq + 3]))
        if r3 == 2 and r4 == 3:
            first = next((N for N in range(1, sq + 2 * n + 4) if not _fin(P, N)), None)
            out.append(Claim(n, "first non-finite N is n^2+2n+3 (n = 2 mod 3, n = 3 mod 4)", True, first == sq + 2 * n + 3))
    return out


# -- Akiyama's set ---------------------------------------------------------------


@dataclass(frozen=True)
class AkiyamaElement:
    element: FieldElement
    finite: bool

    @property
    def word(self) -> str:
        return bd.expand(self.element).word.render()

    def to_json(self) -> dict:
        return {"element": self.element.to_json(), "finite": self.finite}


@dataclass
class AkiyamaReport:
    label: str
    bound: float
    box: tuple[int, ...]
    elements: list[AkiyamaElement]

    @property
    def property_f(self) -> str:
        return "holds" if all(e.finite for e in self.elements) else "fails"

    def to_json(self) -> dict:
        return {
            "beta": self.label,
            "bound": self.bound,
            "box": list(self.box),
            "size": len(self.elements),
            "non_finite": sum(1 for e in self.elements if not e.finite),
            "property_F": self.property_f,
            "elements": [e.to_json() for e in self.elements],
        }


def akiyama_set(P: PisotNumber, cap: int = bd.DEFAULT_CAP, label: str | None = None, margin: float = 1e-6) -> AkiyamaReport:
    """All x in Z[beta] with 0 < x < 1 and |x'| <= floor(beta)/(1 - |beta'|), cubic beta only.

    Coordinates are x = a + b*beta + c*beta^2.  The box on (a, b, c) comes
    from inverting the embedding matrix with both bounds padded by ``margin``.
    For each (b, c) the condition 0 < x < 1 forces a.  Candidates are screened
    in floating point and anything within 1e-9 of the conjugate bound is
    redecided at 60 digits; a tie even there raises.
    """
    if P.degree != 3:
        raise WrongDegree("akiyama_set is implemented for cubic beta")
    with mpmath.workdps(60):
        cs = [mpmath.mpf(c) for c in P.coeffs]
        roots = mpmath.polyroots(cs, maxsteps=200, extraprec=300)
        i = max(range(3), key=lambda t: mpmath.re(roots[t]))
        beta_hp = mpmath.re(roots[i])
        z_hp = next(r for t, r in enumerate(roots) if t != i and mpmath.im(r) >= 0)
        if abs(mpmath.im(z_hp)) < mpmath.mpf(10) ** -30:
            raise ComplexEmbeddingUncertified("expected a pair of complex conjugates")
        bound_hp = P.floor_beta / (1 - abs(z_hp))
        V = mpmath.matrix([[1, beta_hp, beta_hp**2], [1, z_hp, z_hp**2], [1, mpmath.conj(z_hp), mpmath.conj(z_hp) ** 2]])
        Vi = V**-1
        radii = [1 + margin, bound_hp + margin, bound_hp + margin]
        box = tuple(int(mpmath.ceil(sum(abs(Vi[r, q]) * radii[q] for q in range(3)))) for r in range(3))
    beta, z, bound = float(beta_hp), complex(z_hp), float(bound_hp)
    memo = _OrbitMemo(cap)
    elements = []
    for c in range(-box[2], box[2] + 1):
        for b in range(-box[1], box[1] + 1):
            t = b * beta + c * beta * beta
            a = -math.floor(t)
            if abs(t + a) < 1e-9 or abs(t + a - 1) < 1e-9:
                a = -FieldElement(P, (0, b, c)).floor()
            if abs(a) > box[0]:
                continue
            gap = bound - abs(a + b * z + c * z * z)
            if abs(gap) < 1e-9:
                with mpmath.workdps(60):
                    gap_hp = bound_hp - abs(a + b * z_hp + c * z_hp**2)
                    if abs(gap_hp) < mpmath.mpf(10) ** -40:
                        raise ComplexEmbeddingUncertified(f"({a},{b},{c}) sits on the conjugate bound")
                    gap = float(gap_hp)
            if gap < 0:
                continue
            x = FieldElement(P, (a, b, c))
            if x.sign() <= 0 or (x - 1).sign() >= 0:
                continue
            finite, _ = memo.classify(x)
            elements.append(AkiyamaElement(x, finite))
    elements.sort(key=lambda e: float(e.element))
    return AkiyamaReport(label or f"poly{list(P.coeffs)}", bound, box, elements)


def beta_fractional_part(x: FieldElement) -> FieldElement:
    """x minus the value of its greedy integer digits."""
    w = bd.expand(x).word
    return x - bd.word_value(x.parent, bd.DigitWord(w.int_part))


# -- sufficient condition ------------------------------------------------------


class Verdict(str, Enum):
    HOLDS = "SufficientF1Holds"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class SuffReport:
    label: str
    verdict: Verdict
    powers: dict[int, bool]
    scan: F1Report | None = None

    def to_json(self) -> dict:
        out = {
            "beta": self.label,
            "verdict": self.verdict.value,
            "powers_finite": {f"alpha^{i}": v for i, v in self.powers.items()},
        }
        if self.scan is not None:
            out["scan"] = {"scanned_to": self.scan.scanned_to, "non_finite": self.scan.non_finite[:20]}
        return out


def check_suff(P: PisotNumber, cross_check_to: int | None = None, label: str | None = None, cap: int = bd.DEFAULT_CAP) -> SuffReport:
    """alpha^2 .. alpha^(d-1) all finite (with [1] finite) implies N in Fin for all N."""
    one = bd.expansion_of_one(P, cap)
    if not one.is_finite:
        raise bd.InfiniteExpansionOfOne("the sufficient condition needs a finite expansion of 1")
    powers = {}
    a = P.alpha
    x = a
    for i in range(2, P.degree):
        x = x * a
        powers[i] = bd.is_fin(x, cap)[0]
    verdict = Verdict.HOLDS if all(powers.values()) else Verdict.INCONCLUSIVE
    scan = None
    if cross_check_to and verdict is Verdict.HOLDS:
        scan = scan_f1(P, cross_check_to, cap, label)
    return SuffReport(label or f"poly{list(P.coeffs)}", verdict, powers, scan)


# -- family-specific words -------------------------------------------------------


def _same_sequence(w: bd.DigitWord, pre: Sequence[int], per: Sequence[int]) -> bool:
    return bd.lex_compare((w.frac_preperiod, w.frac_period), (tuple(pre), tuple(per))) == 0


def q_family_checks(n: int, b: int, c: int, cap: int = bd.DEFAULT_CAP) -> dict[str, bool | str]:
    spec = FamilySpec("Q", n, b, c)
    P = build(spec)
    a = P.alpha
    out: dict[str, bool | str] = {"beta": spec.label}
    out["n+1 not finite"] = not bd.is_fin(P.from_int(n + 1), cap)[0]
    one_minus = bd.expand(1 - a, cap)
    out["1-alpha"] = one_minus.word.render()
    if n >= 4 and 2 * b + 1 < n and c >= b + 2:
        pre = (n - 1, c - 1, 2 * b + 1, 1, 0, c - (b + 2), n - 1, n - c, 2 * b + 1, c)
        per = (c - 1, c - 1, b, b + 1, 0)
        out["1-alpha matches the general word"] = _same_sequence(one_minus.word, pre, per)
    ib = inv_beta(P)
    r1 = ib * c
    r2 = (r1 + b) * ib
    r3 = r2 * ib
    out["r1 = .c"] = bd.expand(r1, cap).word.frac_preperiod == (c,) and bd.expand(r1).word.is_finite
    out["r2 = .bc"] = bd.expand(r2, cap).word.frac_preperiod == (b, c)
    out["r3 = .0bc = alpha"] = bd.expand(r3, cap).word.frac_preperiod == (0, b, c) and r3 == a
    if n >= 2 * b + 1 and 2 * b + 1 - c >= 0:
        word = (n - 1, n - (2 * b + 1), n + b + 1 - 2 * c, 0, n, c - b - 1, n - c, 0, b, c)
        e = bd.expand(1 - 2 * a, cap)
        out["1-2alpha"] = e.word.render()
        out["1-2alpha matches the displayed word"] = e.word.is_finite and e.word.frac_preperiod == word
        out["2n+1 finite"] = bd.is_fin(P.from_int(2 * n + 1), cap)[0]
    return out


def r_family_checks(n: int, c: int, cap: int = bd.DEFAULT_CAP, allow_non_pisot: bool = True) -> dict[str, bool | str]:
    """n is not finite, with 1 - alpha = 00(c-1)(n-c-1)(n-c)(c-1) ((n-1)(n-c)(c-1))^omega."""
    spec = FamilySpec("R", n, c=c)
    if c < 1:
        raise ConstraintViolation("the displayed words assume c >= 1")
    P = build(spec, allow_non_pisot=allow_non_pisot)
    out: dict[str, bool | str] = {"beta": spec.label, "pisot": P.is_pisot}
    e = bd.expand(P.from_int(n), cap)
    out["n"] = e.word.render()
    out["n not finite"] = e.kind is bd.Kind.EVENTUALLY_PERIODIC
    pre = (0, 0, c - 1, n - c - 1, n - c, c - 1)
    per = (n - 1, n - c, c - 1)
    out["integer part of n is 10"] = e.word.int_part == (1, 0)
    out["1-alpha matches the displayed word"] = _same_sequence(e.word, pre, per)
    return out
