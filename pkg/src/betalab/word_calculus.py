"""Weakly canonical words and value-preserving rewriting.

A :class:`WeakWord` is a finite integer digit sequence d_1..d_m read as
sum_k d_k beta^(offset - k); digits may be negative or exceed floor(beta).
Rewriting is done by positional summation of integer multiples of words
whose value is zero.  Each identity for the cubic family
p_n(x) = x^3 - (n+1)x^2 + nx - n is a named script of such summations, so
every step can be replayed and checked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import beta_dynamics as bd
from .exact_field import FieldElement, PisotNumber, inv_beta, make_pisot

__all__ = [
    "PositionOutOfRange",
    "RangeError",
    "WeakWord",
    "TraceStep",
    "cubic",
    "value",
    "positional_sum",
    "zero_words",
    "derive_script",
    "apply_script",
    "word_u",
    "word_v",
    "word_w",
    "word_t",
    "word_hat_w",
    "word_nu",
    "omega",
    "unfold_u",
    "unfold_u_terminal",
    "unfold_w",
    "unfold_w_terminal",
    "unfold_ww",
    "successor_fractional",
    "Successor",
    "detect_periodic_suffix",
    "PeriodicSuffix",
    "periodic_word_wkj",
    "is_canonical",
    "trace_json",
    "IntegerUnfolding",
    "integer_unfolding",
]


class PositionOutOfRange(ValueError):
    pass


class RangeError(ValueError):
    pass


@lru_cache(maxsize=None)
def cubic(n: int) -> PisotNumber:
    """The dominant root of x^3 - (n+1)x^2 + nx - n."""
    return make_pisot((1, -(n + 1), n, -n))


@dataclass(frozen=True)
class WeakWord:
    digits: tuple[int, ...]
    parent: PisotNumber
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __add__(self, other: "WeakWord") -> "WeakWord":
        """Concatenation (same parent, offset of the left word)."""
        return WeakWord(self.digits + other.digits, self.parent, self.offset)

    def __str__(self) -> str:
        return render(self.digits)

    def value(self) -> FieldElement:
        return value(self)

    def is_canonical(self) -> bool:
        return is_canonical(self.digits, self.parent)


def render(digits: Sequence[int]) -> str:
    """Digits with parentheses around anything that is not a single letter."""
    return "".join(str(d) if 0 <= d < 10 else f"({d})" for d in digits)


def value(w: WeakWord) -> FieldElement:
    v = bd.digits_value(w.parent, w.digits)
    if w.offset > 0:
        for _ in range(w.offset):
            v = v.mul_beta()
    elif w.offset < 0:
        v = v * inv_beta(w.parent) ** (-w.offset)
    return v


def is_canonical(digits: Sequence[int], P: PisotNumber) -> bool:
    """Digits in the alphabet and every suffix admissible."""
    return bd.is_admissible(list(digits), P)


def positional_sum(u: WeakWord, j: int, v: WeakWord | Sequence[int]) -> WeakWord:
    """u (+)_j v: add v digitwise into u starting at 1-based position j."""
    if j < 1:
        raise PositionOutOfRange("position must be >= 1")
    vd = v.digits if isinstance(v, WeakWord) else tuple(v)
    size = max(len(u.digits), j + len(vd) - 1)
    out = list(u.digits) + [0] * (size - len(u.digits))
    for i, d in enumerate(vd):
        out[j - 1 + i] += d
    return WeakWord(tuple(out), u.parent, u.offset)


def zero_words(P: PisotNumber) -> dict[str, WeakWord]:
    """Words of value zero: z1 from the polynomial, z2 from the expansion of 1."""
    z1 = (-1,) + tuple(-c for c in P.coeffs[1:])
    one = bd.expansion_of_one(P)
    out = {"z1": WeakWord(z1, P)}
    if one.is_finite:
        out["z2"] = WeakWord((-1,) + one.frac_preperiod, P)
    return out


@dataclass(frozen=True)
class TraceStep:
    rule: str
    position: int
    addend: tuple[int, ...]
    result: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "position": self.position,
            "addend": list(self.addend),
            "result": list(self.result),
        }


def trace_json(trace: Sequence[TraceStep]) -> str:
    return json.dumps([t.to_json() for t in trace])


def apply_script(
    w: WeakWord,
    script: Sequence[tuple[int, int, str]],
    rule: str,
    trace: list | None = None,
) -> WeakWord:
    """Apply (position, multiplier, zero-word name) summations in order."""
    zs = zero_words(w.parent)
    for pos, mult, name in script:
        addend = tuple(mult * d for d in zs[name].digits)
        w = positional_sum(w, pos, addend)
        if trace is not None:
            trace.append(TraceStep(rule, pos, addend, w.digits))
    return w


def derive_script(source: Sequence[int], target: Sequence[int], P: PisotNumber) -> list[tuple[int, int, str]]:
    """Multiples of z1 turning ``source`` into ``target``.

    Reading words as polynomials in y = 1/beta, z1 is y*R(y) with
    R(0) = -1, so the difference divides exactly by R over the integers
    whenever the two words have the same value.
    """
    m = max(len(source), len(target))
    diff = [(target[i] if i < len(target) else 0) - (source[i] if i < len(source) else 0) for i in range(m)]
    r = [-1] + [-c for c in P.coeffs[1:]]  # z1 digits
    q = []
    rem = list(diff)
    for i in range(m):
        if i + len(r) > m and any(rem[i:]):
            # quotient would overflow the word length
            break
        coef = -rem[i]  # r[0] == -1
        q.append(coef)
        if coef:
            for k, rk in enumerate(r):
                if i + k < m:
                    rem[i + k] -= coef * rk
                elif coef * rk:
                    raise ValueError("words do not have the same value")
    if any(rem):
        raise ValueError("words do not have the same value")
    return [(i + 1, c, "z1") for i, c in enumerate(q) if c]


# -- the parametrised words ----------------------------------------------------


def word_u(n: int, k: int, j: int) -> tuple[int, ...]:
    return (n - k, j, -k * n, j * n)


def word_v(n: int, k: int, j: int) -> tuple[int, ...]:
    return (n - (k + 1), n - (k - j), j + 1, k + 1, k - (j + 1), n - (j + 2))


def word_w(n: int, k: int, j: int) -> tuple[int, ...]:
    return (0, n * (k - j + 1) - j, 0, -j * n)


def word_t(n: int, k: int, j: int) -> tuple[int, ...]:
    return (k - j, n - j - 1, n - k - 1, n - k + j + 1, j + 2, k + 1)


def word_hat_w(n: int, k: int, j: int) -> tuple[int, ...]:
    return (k, j, k * n - n * n, j * n)


def word_nu(n: int, k: int, j: int) -> tuple[int, ...]:
    return (n - k, j, -k * n - n * n, j * n)


def omega(n: int, l: int, k: int, j: int) -> WeakWord:
    """The four-letter word whose value is l - k*alpha + j*alpha/beta + alpha^2 - alpha."""
    return WeakWord((l * n - k, j + l, -k * n - n * n, (j + l) * n), cubic(n))


# scripts: (position, multiplier, zero word)
def _script_u(n: int, k: int, j: int):
    return [(1, 1, "z2"), (2, k, "z2"), (3, -j, "z2"), (4, -1, "z1"), (5, -k, "z2"), (6, j + 2, "z2")]


def _script_w(n: int, k: int, j: int):
    return [(1, j - k, "z2"), (2, 1, "z1"), (3, j + 2, "z2"), (4, k - j - 1, "z2"), (6, -(j + 2), "z2")]


def _script_ww(n: int, k: int, j: int):
    return [
        (1, 1, "z1"),
        (2, n - 1, "z2"),
        (2, 2 - k, "z2"),
        (3, -(j + 1), "z2"),
        (5, k - n, "z2"),
        (6, j + 2, "z2"),
    ]


def _split_unfold(w: WeakWord, cut: int) -> tuple[WeakWord, WeakWord]:
    P = w.parent
    return WeakWord(w.digits[:cut], P), WeakWord(w.digits[cut:], P)


def unfold_u(n: int, k: int, j: int, trace: list | None = None) -> tuple[WeakWord, WeakWord]:
    """u_n(k,j) = v_n(k,j) . u_n(k,j+2)."""
    P = cubic(n)
    w = apply_script(WeakWord(word_u(n, k, j), P), _script_u(n, k, j), "unfold_u", trace)
    return _split_unfold(w, 6)


def unfold_u_terminal(n: int, k: int, trace: list | None = None) -> WeakWord:
    """u_n(k,k) = (n-k) 0 k 0 (kn)."""
    P = cubic(n)
    return apply_script(WeakWord(word_u(n, k, k), P), [(2, k, "z1")], "unfold_u_terminal", trace)


def unfold_w(n: int, k: int, j: int, trace: list | None = None) -> tuple[WeakWord, WeakWord]:
    """w_n(k,j) = t_n(k,j) . w_n(k,j+2)."""
    P = cubic(n)
    w = apply_script(WeakWord(word_w(n, k, j), P), _script_w(n, k, j), "unfold_w", trace)
    return _split_unfold(w, 6)


def unfold_w_terminal(n: int, k: int, trace: list | None = None) -> WeakWord:
    """w_n(k,k) rewritten as (n-k-1)(n-k)1(k+1)(k-1)(n-2)(n-k)2(-nk)(2n).

    The identity holds with the leading 0 of w_n(k,k) one place left of the
    first letter of the result, so the rewrite starts from (n-k)0(-kn).
    """
    P = cubic(n)
    target = (n - k - 1, n - k, 1, k + 1, k - 1, n - 2, n - k, 2, -n * k, 2 * n)
    source = WeakWord(word_w(n, k, k)[1:], P)
    return apply_script(source, derive_script(source.digits, target, P), "unfold_w_terminal", trace)


def unfold_ww(n: int, k: int, j: int, trace: list | None = None) -> tuple[WeakWord, WeakWord]:
    """Unfold hat-w_n(k,j) = k j (kn - n^2)(jn).

    k != 1: prefix (k-1)(j+k)(j+1)(n-k+1)(n-j-k-1)(n-j-2), suffix hat-w_n(k,j+2).
    k == 1: two more summations give prefix 0(j+1)(j+2)0(n-j-3)(n-j-3) and
    suffix hat-w_n(1,j+3).
    """
    P = cubic(n)
    w = apply_script(WeakWord(word_hat_w(n, k, j), P), _script_ww(n, k, j), "unfold_ww", trace)
    if k == 1:
        w = apply_script(w, [(3, -1, "z2"), (6, 1, "z2")], "unfold_ww_k1", trace)
    return _split_unfold(w, 6)


# -- successor of a natural number --------------------------------------------


@dataclass(frozen=True)
class Successor:
    case: str
    int_part: tuple[int, ...]
    frac: WeakWord


def _pad(word: Sequence[int], size: int) -> list[int]:
    return list(word) + [0] * max(0, size - len(word))


def successor_fractional(n: int, p: Sequence[int], w: WeakWord) -> Successor:
    """From p.w representing N >= n^2+2, the representation of N+1.

    ``p`` is the canonical integer part (most significant digit first) and
    ``w`` a word for the fractional part.  The case labels are a, b, c, c',
    d, e for the forbidden word met when adding 1 to the unit digit, and
    "none" when the digitwise increment is already allowed.
    """
    P = w.parent
    digits = [0, 0, 0, 0] + list(p)  # room for carries
    p0, p1, p2, p3 = digits[-1], digits[-2], digits[-3], digits[-4]
    size = max(len(w), 4)
    wd = _pad(w.digits, size)

    def canonical_head(k: int) -> tuple[int, ...]:
        exp = bd.expand(value(w))
        seq = exp.word.iter_digits()
        next(seq)  # the integer digit 0
        return tuple(next(seq) for _ in range(k))

    def finish(case: str, new_digits: list[int], new_w: list[int]) -> Successor:
        if value(WeakWord(tuple(new_w), P)).sign() < 0:
            # the correction overshot: borrow one unit as .n10n
            new_digits[-1] -= 1
            new_w = [a + b for a, b in zip(_pad(new_w, 4), _pad((n, 1, 0, n), len(new_w)))]
            case += "+borrow"
        while len(new_digits) > 1 and new_digits[0] == 0:
            new_digits.pop(0)
        return Successor(case, tuple(new_digits), WeakWord(tuple(new_w), P))

    if (p3, p2, p1, p0) == (n, 1, 0, n - 1):
        nd = digits[:]
        nd[-5] += 1
        nd[-4:] = [0, 0, 0, 0]
        return finish("e", nd, wd)
    if p0 == n:
        nd = digits[:]
        nd[-1] = 0
        nd[-2] += 1
        return finish("a", nd, [a + b for a, b in zip(wd, _pad((n - 1, 1, -n, n), size))])
    if p0 == n - 1 and (p3, p2, p1) < (n, 1, 0) and canonical_head(3) >= (1, 0, n):
        nd = digits[:]
        nd[-1] = 0
        nd[-2] += 1
        return finish("b", nd, [a - b for a, b in zip(wd, _pad((1, 0, n, 0), size))])
    if (p2, p1, p0) == (n, 1, 0):
        nd = digits[:]
        nd[-4] += 1
        nd[-3:] = [0, 0, 0]
        return finish("d", nd, [a + b for a, b in zip(wd, _pad((0, 1, 0, n), size))])
    if (p1, p0) == (n, 0) and canonical_head(2) >= (0, n):
        nd = digits[:]
        nd[-3] += 1
        nd[-2] = 0
        return finish("c", nd, [a + b for a, b in zip(wd, _pad((-1, 1, -n, n), size))])
    if (p1, p0) == (n, 1):
        nd = digits[:]
        nd[-3] += 1
        nd[-2] = 0
        return finish("c'", nd, [a + b for a, b in zip(wd, _pad((-1, 1, -n, n), size))])
    nd = digits[:]
    nd[-1] += 1
    return finish("none", nd, wd)


# -- periodicity ---------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicSuffix:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    state: FieldElement


def detect_periodic_suffix(w: WeakWord) -> PeriodicSuffix | None:
    """The period of the expansion of value(w) in [0, 1), if it is infinite.

    The returned period p is checked against the fixed-point identity
    x = p(beta) + beta^-|p| x for the state x where the period starts, which
    is exactly the situation v = p.u with u the original tail.
    """
    x = value(w)
    if x.sign() < 0 or (x - 1).sign() >= 0:
        raise bd.OutOfDomain("word value must lie in [0, 1)")
    res = bd.expand(x)
    if res.kind is not bd.Kind.EVENTUALLY_PERIODIC:
        return None
    P = w.parent
    period = res.word.frac_period
    start = res.states[res.preperiod]
    ib = inv_beta(P)
    assert start == bd.digits_value(P, period) + start * ib ** len(period)
    assert bd.is_admissible(list(period), P)
    return PeriodicSuffix(res.word.frac_preperiod, period, start)


def periodic_word_wkj(n: int, k: int, j: int) -> WeakWord:
    """The period of the orbit through the lattice point (1, k, k+j-1).

    Built from the six-letter blocks (n-k) j (k+j) (k-1) (n-j-1) (n-k-j)
    for parameters (k, j), (k-2, j+2), ..., (3, j+k-3), the five letters
    (n-1)(j+k-1)(j+k)0(n-j-k), then blocks for (j+k-1, 1), (j+k-3, 3), ...
    down to (k+2, j-2).  Its length is 5 mod 6.  It is the period of that
    orbit when k + j < n; for k + j = n the orbit is finite or joins the
    cycle of alpha^2.
    """
    if k <= 0 or j <= 0 or k % 2 == 0 or j % 2 == 0 or not k < n - 1 or not k + j - 1 < n:
        raise RangeError("need k, j > 0 odd, k < n-1 and k+j-1 < n")

    def block(a: int, b: int) -> tuple[int, ...]:
        return (n - a, b, a + b, a - 1, n - b - 1, n - a - b)

    s = j + k
    digits: list[int] = []
    a = k
    while a >= 3:
        digits += block(a, s - a)
        a -= 2
    digits += [n - 1, s - 1, s, 0, n - s]
    a = s - 1
    while a >= k + 2:
        digits += block(a, s - a)
        a -= 2
    return WeakWord(tuple(digits), cubic(n))


# -- small integers ------------------------------------------------------------


@dataclass(frozen=True)
class IntegerUnfolding:
    """N = int_part . prefix tail, with ``prefix`` canonical by construction."""

    N: int
    int_part: tuple[int, ...]
    prefix: tuple[int, ...]
    tail: WeakWord
    trace: tuple[TraceStep, ...]

    def fractional(self) -> WeakWord:
        return WeakWord(self.prefix + self.tail.digits, self.tail.parent)


def _one_minus_k_alpha(n: int, k: int, trace: list) -> tuple[list[int], WeakWord]:
    """Canonical prefix and remaining tail for the representation u_n(k,1) of 1 - k*alpha."""
    P = cubic(n)
    prefix: list[int] = []
    if k % 2 == 1:
        j = 1
        while j < k:
            v, u = unfold_u(n, k, j, trace)
            prefix += v.digits
            j += 2
        return prefix, unfold_u_terminal(n, k, trace)
    w = WeakWord(word_u(n, k, 1), P)
    w = apply_script(w, [(1, 1, "z2"), (2, k, "z2"), (3, -1, "z1"), (4, -2, "z2")], "even_start", trace)
    prefix += w.digits[:4]
    j = 2
    while j < k:
        t, _ = unfold_w(n, k, j, trace)
        prefix += t.digits
        j += 2
    ten = unfold_w_terminal(n, k, trace)
    # the terminal rewrite starts at the second letter of w_n(k,k)
    prefix += [0]
    prefix += ten.digits[:6]
    j = 2
    while j < k:
        v, _ = unfold_u(n, k, j, trace)
        prefix += v.digits
        j += 2
    return prefix, unfold_u_terminal(n, k, trace)


def integer_unfolding(n: int, N: int) -> IntegerUnfolding:
    """Scripted representation of 1 <= N <= n(n-1).

    N = k*n + j with 1 <= j <= n has integer part k(j-1) and fractional part
    1 - k*alpha, unfolded from u_n(k,1) into a canonical prefix followed by a
    short tail (n-k)0k0(kn) whose value is below one.
    """
    if not 1 <= N <= n * (n - 1):
        raise RangeError("need 1 <= N <= n(n-1)")
    P = cubic(n)
    k, j = divmod(N - 1, n)
    j += 1
    trace: list[TraceStep] = []
    if k == 0:
        return IntegerUnfolding(N, (j - 1,), (), WeakWord((n, 1, 0, n), P), ())
    prefix, tail = _one_minus_k_alpha(n, k, trace)
    return IntegerUnfolding(N, (k, j - 1), tuple(prefix), tail, tuple(trace))
