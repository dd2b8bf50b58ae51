"""The beta-transformation and greedy expansions in Q(beta).

Every digit is an exact floor, and orbit states are canonical
:class:`FieldElement` values, so an eventually periodic expansion is detected
the first time an exact state repeats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Sequence

from .exact_field import FieldElement, PisotNumber, inv_beta

__all__ = [
    "DEFAULT_CAP",
    "OutOfDomain",
    "NegativeInput",
    "InfiniteExpansionOfOne",
    "OrbitTruncated",
    "Kind",
    "DigitWord",
    "OrbitClassification",
    "render_digits",
    "t_beta_step",
    "expand",
    "expansion_of_one",
    "quasi_greedy_one",
    "is_admissible",
    "lex_compare",
    "classify_one_expansion",
    "is_fin",
    "word_value",
    "digits_value",
]

DEFAULT_CAP = 10**6


class OutOfDomain(ValueError):
    pass


class NegativeInput(ValueError):
    pass


class InfiniteExpansionOfOne(ValueError):
    pass


class OrbitTruncated(RuntimeError):
    """The state cap was reached before the orbit closed."""


class Kind(str, Enum):
    FINITE = "Finite"
    EVENTUALLY_PERIODIC = "EventuallyPeriodic"
    TRUNCATED = "Truncated"


def render_digits(digits: Sequence[int]) -> str:
    if any(d < 0 or d >= 10 for d in digits):
        return ",".join(map(str, digits))
    return "".join(map(str, digits))


@dataclass(frozen=True)
class DigitWord:
    """Integer part, fractional preperiod and fractional period of an expansion."""

    int_part: tuple[int, ...] = (0,)
    frac_preperiod: tuple[int, ...] = ()
    frac_period: tuple[int, ...] = ()
    alphabet_bound: int | None = None

    @property
    def is_finite(self) -> bool:
        return not self.frac_period

    @property
    def frac_digits(self) -> tuple[int, ...]:
        """Fractional digits of a finite word (preperiod only)."""
        return self.frac_preperiod

    def render(self, point: bool = True) -> str:
        frac = render_digits(self.frac_preperiod)
        if self.frac_period:
            frac += f"({render_digits(self.frac_period)})^w"
        if not point:
            return frac
        head = render_digits(self.int_part)
        return f"{head}.{frac}" if frac else head

    def __str__(self) -> str:
        return self.render()

    def iter_digits(self) -> Iterator[int]:
        """The whole digit sequence, integer part first, padded with zeros."""
        yield from self.int_part
        yield from self.frac_preperiod
        if self.frac_period:
            while True:
                yield from self.frac_period
        else:
            while True:
                yield 0

    def to_json(self) -> dict:
        return {
            "int_part": list(self.int_part),
            "frac_preperiod": list(self.frac_preperiod),
            "frac_period": list(self.frac_period),
            "rendered": self.render(),
        }


@dataclass(frozen=True)
class OrbitClassification:
    kind: Kind
    word: DigitWord
    steps: int
    preperiod: int = 0
    period: int = 0
    states: tuple = field(default=(), repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "word": self.word.to_json(),
            "steps": self.steps,
            "preperiod": self.preperiod,
            "period": self.period,
        }


def t_beta_step(x: FieldElement) -> tuple[int, FieldElement]:
    """One step of x -> beta*x - floor(beta*x) on [0, 1)."""
    if x.sign() < 0 or (x - 1).sign() >= 0:
        raise OutOfDomain("t_beta_step needs 0 <= x < 1")
    bx = x.mul_beta()
    d = bx.floor()
    return d, bx - d


def _run(state: FieldElement, digits: list[int], cap: int):
    """Iterate T_beta from ``state``, appending digits.

    Returns (kind, index_of_first_repeated_state, visited_states).
    """
    seen = {state.key: len(digits)}
    states = [state]
    while True:
        if state.is_zero():
            return Kind.FINITE, None, states
        if len(states) > cap:
            return Kind.TRUNCATED, None, states
        bx = state.mul_beta()
        d = bx.floor()
        state = bx - d
        digits.append(d)
        key = state.key
        hit = seen.get(key)
        if hit is not None:
            return Kind.EVENTUALLY_PERIODIC, hit, states
        seen[key] = len(digits)
        states.append(state)


def _leading_power(x: FieldElement) -> tuple[int, FieldElement]:
    """Least L >= 0 with x <= beta^L, and beta^L itself."""
    P = x.parent
    power = P.one
    L = 0
    while (x - power).sign() > 0:
        power = power.mul_beta()
        L += 1
    return L, power


def expand(x: FieldElement, cap: int = DEFAULT_CAP) -> OrbitClassification:
    """Greedy beta-expansion of x >= 0 with exact cycle detection.

    For x > 1 the expansion is the L-fold shift of the expansion of
    x / beta^L, with L least such that x <= beta^L.  When x / beta^L equals 1
    the first digit is floor(beta) followed by the orbit of beta - floor(beta),
    i.e. the expansion of 1.
    """
    s = x.sign()
    if s < 0:
        raise NegativeInput("expand needs x >= 0")
    P = x.parent
    n = P.floor_beta
    if s == 0:
        return OrbitClassification(Kind.FINITE, DigitWord((0,), (), (), n), 0)
    L, power = _leading_power(x)
    y = x * (inv_beta(P) ** L) if L else x
    digits: list[int] = []
    if (y - 1).is_zero():
        digits.append(n)
        y = P.alpha
    kind, hit, states = _run(y, digits, cap)
    word = _split(digits, L, kind, hit, n)
    if kind is Kind.EVENTUALLY_PERIODIC:
        return OrbitClassification(
            kind, word, len(digits), hit, len(digits) - hit, tuple(states)
        )
    return OrbitClassification(kind, word, len(digits), 0, 0, tuple(states))


def _split(digits: list[int], L: int, kind: Kind, hit, n: int) -> DigitWord:
    if kind is Kind.EVENTUALLY_PERIODIC:
        period = digits[hit:]
        p = len(period)

        def digit_at(i: int) -> int:
            return digits[i] if i < hit else period[(i - hit) % p]

        int_part = tuple(digit_at(i) for i in range(L)) or (0,)
        if hit >= L:
            return DigitWord(int_part, tuple(digits[L:hit]), tuple(period), n)
        r = (L - hit) % p
        return DigitWord(int_part, (), tuple(period[r:] + period[:r]), n)
    padded = digits + [0] * max(0, L - len(digits))
    int_part = tuple(padded[:L]) or (0,)
    return DigitWord(int_part, tuple(padded[L:]), (), n)


@lru_cache(maxsize=None)
def expansion_of_one(P: PisotNumber, cap: int = DEFAULT_CAP) -> DigitWord:
    """The expansion d_beta(1): first digit floor(beta), then the orbit of alpha."""
    digits = [P.floor_beta]
    kind, hit, _ = _run(P.alpha, digits, cap)
    if kind is Kind.TRUNCATED:
        raise OrbitTruncated("expansion of 1 did not close within cap")
    if kind is Kind.FINITE:
        return DigitWord((0,), tuple(digits), (), P.floor_beta)
    return DigitWord((0,), tuple(digits[:hit]), tuple(digits[hit:]), P.floor_beta)


def quasi_greedy_one(P: PisotNumber) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(preperiod, period) of the quasi-greedy expansion of 1.

    For a finite d_beta(1) = a_1...a_m this is (a_1...a_{m-1}(a_m - 1))^omega;
    otherwise it is d_beta(1) itself.
    """
    one = expansion_of_one(P)
    if one.is_finite:
        a = list(one.frac_preperiod)
        a[-1] -= 1
        return (), tuple(a)
    return one.frac_preperiod, one.frac_period


def lex_compare(a: tuple[Sequence[int], Sequence[int]], b: tuple[Sequence[int], Sequence[int]]) -> int:
    """Compare two eventually periodic sequences given as (preperiod, period).

    An empty period means the sequence continues with zeros.
    """
    pa, qa = list(a[0]), list(a[1]) or [0]
    pb, qb = list(b[0]), list(b[1]) or [0]
    horizon = max(len(pa), len(pb)) + math.lcm(len(qa), len(qb))
    for i in range(horizon):
        x = pa[i] if i < len(pa) else qa[(i - len(pa)) % len(qa)]
        y = pb[i] if i < len(pb) else qb[(i - len(pb)) % len(qb)]
        if x != y:
            return -1 if x < y else 1
    return 0


def _suffixes(pre: Sequence[int], per: Sequence[int]):
    pre, per = list(pre), list(per)
    for i in range(len(pre)):
        yield pre[i:], per
    for r in range(len(per)):
        yield [], per[r:] + per[:r]


def is_admissible(w: DigitWord | Sequence[int], P: PisotNumber) -> bool:
    """Parry's condition: digits in {0..floor(beta)} and every suffix below
    the quasi-greedy expansion of 1.

    A plain digit sequence is read as a finite fractional tail.
    """
    if isinstance(w, DigitWord):
        pre = list(w.int_part) + list(w.frac_preperiod)
        per = list(w.frac_period)
    else:
        pre, per = list(w), []
    n = P.floor_beta
    if any(d < 0 or d > n for d in pre + per):
        return False
    bound = quasi_greedy_one(P)
    return all(lex_compare(s, bound) < 0 for s in _suffixes(pre, per))


def classify_one_expansion(P: PisotNumber) -> set[str]:
    """Labels among Perron, Brauer, Hollander, CE for the digits of d_beta(1).

    Perron is read as the dominance a_1 > 1 + |a_2| + ... + |a_n| of the
    leading coefficient of the digit polynomial x^n - a_1 x^(n-1) - ... - a_n.
    """
    one = expansion_of_one(P)
    if not one.is_finite:
        raise InfiniteExpansionOfOne("expansion of 1 is not finite")
    a = list(one.frac_preperiod)
    m = len(a)
    labels = set()
    if a[0] > 1 + sum(abs(x) for x in a[1:]):
        labels.add("Perron")
    if all(a[i] >= a[i + 1] for i in range(m - 1)) and a[-1] > 0:
        labels.add("Brauer")
    if all(x >= 0 for x in a) and a[0] > sum(a[1:]):
        labels.add("Hollander")
    monotone = all(a[i] >= a[i + 1] for i in range(m - 1)) or all(
        a[i] <= a[i + 1] for i in range(m - 1)
    )
    if not monotone and any(a[k] == 0 for k in range(1, m - 1)):
        labels.add("CE")
    return labels


def is_fin(x: FieldElement, cap: int = DEFAULT_CAP) -> tuple[bool, OrbitClassification]:
    """Whether x has a finite expansion; raises OrbitTruncated past ``cap``."""
    result = expand(x, cap)
    if result.kind is Kind.TRUNCATED:
        raise OrbitTruncated(f"no decision within {cap} states")
    return result.kind is Kind.FINITE, result


def digits_value(P: PisotNumber, digits: Sequence[int]) -> FieldElement:
    """sum_k digits[k-1] * beta^-k."""
    ib = inv_beta(P)
    v = P.zero
    for c in reversed(digits):
        v = (v + c) * ib
    return v


def word_value(P: PisotNumber, w: DigitWord) -> FieldElement:
    """Exact value of an eventually periodic word (geometric series for the tail)."""
    v = P.zero
    for d in w.int_part:
        v = v.mul_beta() + d
    v = v + digits_value(P, w.frac_preperiod)
    if w.frac_period:
        ib = inv_beta(P)
        p = len(w.frac_period)
        block = digits_value(P, w.frac_period)
        tail = block / (1 - ib**p)
        v = v + tail * ib ** len(w.frac_preperiod)
    return v
