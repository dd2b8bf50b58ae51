"""Exact arithmetic in Q(beta) for a Pisot number beta.

A :class:`PisotNumber` is a monic integer polynomial together with a
certified description of its dominant real root.  Elements of Q(beta) are
:class:`FieldElement` instances: an integer coordinate vector over the power
basis 1, beta, ..., beta^(d-1) and a positive denominator.

Comparisons never touch floating point.  beta is bracketed by dyadic
rationals a/2^k < beta < (a+1)/2^k obtained by exact bisection, and the
value of an element is enclosed by an exact integer interval at that
precision; the precision is doubled until the enclosure decides the
question.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "FieldError",
    "NotPisot",
    "NoDominantRealRoot",
    "DegreeTooLow",
    "MixedParents",
    "NotIntegral",
    "WrongDegree",
    "PisotNumber",
    "FieldElement",
    "make_pisot",
    "parse_coeffs",
    "inv_beta",
    "sign",
    "floor",
    "alpha_basis_coords",
    "from_alpha_basis",
]

CERT_TOLERANCE = 1e-9
PISOT_MARGIN = 1e-6
_START_BITS = 64
_MAX_BITS = 1 << 16


class FieldError(ValueError):
    """Base class for errors raised by this module."""


class NotPisot(FieldError):
    pass


class NoDominantRealRoot(FieldError):
    pass


class DegreeTooLow(FieldError):
    pass


class MixedParents(FieldError):
    pass


class NotIntegral(FieldError):
    pass


class WrongDegree(FieldError):
    pass


def parse_coeffs(text: str) -> tuple[int, ...]:
    """Parse "1,-3,2,-2" (highest degree first) into an integer tuple."""
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError as exc:
        raise FieldError(f"bad coefficient list {text!r}") from exc


def _poly_sign_at(coeffs: Sequence[int], m: int, k: int) -> int:
    # sign of p(m / 2^k); coeffs highest degree first
    d = len(coeffs) - 1
    acc = 0
    for i, c in enumerate(coeffs):
        acc += c * m ** (d - i) << (k * i)
    return (acc > 0) - (acc < 0)


def _poly_eval_fraction(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


class PisotNumber:
    """The dominant root beta of a monic integer polynomial.

    Instances are immutable from the outside.  Dyadic brackets of beta are
    memoised in a private cache; entries are only ever added, and each entry
    is a pure function of the polynomial, so concurrent readers are safe.
    """

    __slots__ = (
        "coeffs",
        "degree",
        "iso_interval",
        "floor_beta",
        "conjugate_bound",
        "conjugates",
        "is_pisot",
        "_low",
        "_brackets",
        "_lock",
        "__weakref__",
    )

    def __init__(
        self,
        coeffs: tuple[int, ...],
        iso_interval: tuple[Fraction, Fraction],
        floor_beta: int,
        conjugate_bound: Fraction,
        conjugates: tuple[complex, ...],
        is_pisot: bool = True,
    ):
        self.coeffs = coeffs
        self.degree = len(coeffs) - 1
        self.iso_interval = iso_interval
        self.floor_beta = floor_beta
        self.conjugate_bound = conjugate_bound
        self.conjugates = conjugates
        self.is_pisot = is_pisot
        # beta^d = -(c_0 + c_1 beta + ... + c_{d-1} beta^{d-1}); ascending order
        self._low = tuple(reversed(coeffs[1:]))
        self._brackets: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"PisotNumber({','.join(map(str, self.coeffs))})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PisotNumber) and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __reduce__(self):
        return (make_pisot, (self.coeffs, self.is_pisot))

    # -- elements ---------------------------------------------------------

    def element(self, num: Iterable[int], den: int = 1) -> "FieldElement":
        num = list(num)
        if len(num) > self.degree:
            return FieldElement._from_poly(self, num, den)
        num += [0] * (self.degree - len(num))
        return FieldElement(self, num, den)

    def from_int(self, value: int) -> "FieldElement":
        return FieldElement(self, [value] + [0] * (self.degree - 1), 1)

    @property
    def one(self) -> "FieldElement":
        return self.from_int(1)

    @property
    def zero(self) -> "FieldElement":
        return self.from_int(0)

    @property
    def beta(self) -> "FieldElement":
        return self.element([0, 1])

    @property
    def alpha(self) -> "FieldElement":
        """The fractional part beta - floor(beta)."""
        return self.element([-self.floor_beta, 1])

    def to_float(self) -> float:
        lo, hi = self.bracket(64)
        return float(Fraction(lo + hi, 1 << 65))

    # -- certified brackets -------------------------------------------------

    def bracket(self, bits: int) -> tuple[int, int]:
        """Integers (a, a+1) with a/2^bits < beta < (a+1)/2^bits."""
        self._powers(bits)
        a = self._brackets[bits][2]
        return a, a + 1

    def refine(self, interval: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        """One exact bisection step of an interval straddling beta."""
        lo, hi = interval
        mid = (lo + hi) / 2
        s_lo = _poly_eval_fraction(self.coeffs, lo)
        s_mid = _poly_eval_fraction(self.coeffs, mid)
        if s_mid == 0:
            raise NotPisot("polynomial has a rational root")
        if (s_lo < 0) == (s_mid < 0):
            return (mid, hi)
        return (lo, mid)

    def _dyadic(self, bits: int) -> int:
        # a with a/2^bits < beta < (a+1)/2^bits, by exact bisection
        cached = self._brackets.get(bits)
        if cached is not None:
            return cached[2]
        known = [b for b in self._brackets if b < bits]
        if known:
            k = max(known)
            a = self._brackets[k][2]
        else:
            k, a = 0, self.floor_beta
        lo, hi = a << (bits - k), (a + 1) << (bits - k)
        s_lo = _poly_sign_at(self.coeffs, lo, bits)
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            s = _poly_sign_at(self.coeffs, mid, bits)
            if s == 0:
                raise NotPisot("polynomial has a rational root")
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        return lo

    def _powers(self, bits: int):
        """Exact enclosures of beta^i, i < d, over the common denominator 2^(bits*(d-1))."""
        entry = self._brackets.get(bits)
        if entry is not None:
            return entry[0], entry[1]
        a = self._dyadic(bits)
        d = self.degree
        lows = tuple(a**i << (bits * (d - 1 - i)) for i in range(d))
        highs = tuple((a + 1) ** i << (bits * (d - 1 - i)) for i in range(d))
        with self._lock:
            self._brackets.setdefault(bits, (lows, highs, a))
        return lows, highs

    def enclose(self, num: Sequence[int], bits: int) -> tuple[int, int, int]:
        """(lo, hi, D) with lo/D <= sum num_i beta^i <= hi/D."""
        lows, highs = self._powers(bits)
        lo = hi = 0
        for c, pl, ph in zip(num, lows, highs):
            if c >= 0:
                lo += c * pl
                hi += c * ph
            else:
                lo += c * ph
                hi += c * pl
        return lo, hi, 1 << (bits * (self.degree - 1))


def _certify(coeffs: tuple[int, ...]):
    """Locate all roots with Weierstrass inclusion disks.

    For distinct approximations z_i of the roots of a monic polynomial, the
    disks centred at z_i with radius d*|p(z_i) / prod_{j!=i}(z_i - z_j)|
    cover every root, and each connected component holding m disks holds
    exactly m roots.  Pairwise disjoint disks therefore certify one root each.
    """
    d = len(coeffs) - 1
    with mpmath.workdps(60):
        approx = None
        for extra in (0, 60, 200):
            try:
                approx = mpmath.polyroots(
                    [mpmath.mpf(c) for c in coeffs], maxsteps=400, extraprec=200 + extra
                )
                break
            except mpmath.libmp.libhyper.NoConvergence:
                continue
        if approx is None:
            raise NotPisot("root approximation did not converge")
        approx = [mpmath.mpc(z) for z in approx]
        radii = []
        for i, z in enumerate(approx):
            denom = mpmath.mpf(1)
            for j, w in enumerate(approx):
                if j != i:
                    denom *= z - w
            if denom == 0:
                raise NotPisot("repeated root")
            wi = mpmath.polyval([mpmath.mpf(c) for c in coeffs], z) / denom
            radii.append(d * abs(wi) * (1 + mpmath.mpf(10) ** -20) + mpmath.mpf(10) ** -40)
        for i in range(d):
            for j in range(i + 1, d):
                if abs(approx[i] - approx[j]) <= radii[i] + radii[j]:
                    raise NotPisot("root inclusion disks overlap")
        if max(radii) > CERT_TOLERANCE:
            raise NotPisot("root inclusion not within tolerance")
        return approx, radii


def make_pisot(coeffs: Sequence[int], strict: bool = True) -> PisotNumber:
    """Build and certify the Pisot number defined by ``coeffs``.

    ``coeffs`` lists a monic integer polynomial, highest degree first, e.g.
    ``(1, -3, 2, -2)`` for x^3 - 3x^2 + 2x - 2.

    With ``strict=False`` the conjugates may leave the unit disk; the result
    is then the dominant real root of the polynomial, flagged by
    ``is_pisot = False``.  Arithmetic and dynamics still work, but orbit
    finiteness is no longer guaranteed.
    """
    return _make(tuple(int(c) for c in coeffs), strict)


@lru_cache(maxsize=None)
def _make(coeffs: tuple[int, ...], strict: bool) -> PisotNumber:
    if len(coeffs) < 3:
        raise DegreeTooLow("degree must be at least 2")
    if coeffs[0] != 1:
        raise FieldError("polynomial must be monic")
    with mpmath.workdps(60):
        return _build(coeffs, strict)


def _build(coeffs: tuple[int, ...], strict: bool) -> PisotNumber:
    approx, radii = _certify(coeffs)
    outside = [i for i, z in enumerate(approx) if abs(z) + radii[i] > 1 - PISOT_MARGIN]
    if strict and len(outside) != 1:
        raise NotPisot(f"{len(outside)} roots outside the disk of radius 1 - {PISOT_MARGIN}")
    if not outside:
        raise NoDominantRealRoot("no root outside the unit disk")
    i = max(range(len(approx)), key=lambda t: abs(approx[t]))
    z, r = approx[i], radii[i]
    if any(abs(w) + radii[j] >= abs(z) - r for j, w in enumerate(approx) if j != i):
        raise NoDominantRealRoot("dominant root modulus is not isolated")
    if abs(z.imag) > r:
        raise NoDominantRealRoot("dominant root is not real")
    if z.real - r <= 1:
        raise NoDominantRealRoot("dominant root does not exceed 1")
    others = [abs(w) + radii[j] for j, w in enumerate(approx) if j != i]
    bound = max(others) if others else mpmath.mpf(0)
    is_pisot = bound <= 1 - PISOT_MARGIN
    if strict and not is_pisot:
        raise NotPisot("some conjugate has modulus >= 1")

    # rational isolating interval with an exact sign change
    pad = max(2 * r, mpmath.mpf(10) ** -20)
    lo = Fraction(mpmath.nstr(z.real - pad, 40))
    hi = Fraction(mpmath.nstr(z.real + pad, 40))
    s_lo = _poly_eval_fraction(coeffs, lo)
    s_hi = _poly_eval_fraction(coeffs, hi)
    if s_lo == 0 or s_hi == 0 or (s_lo > 0) == (s_hi > 0):
        raise NoDominantRealRoot("no certified sign change around the dominant root")
    if lo <= 1:
        raise NoDominantRealRoot("dominant root does not exceed 1")
    fl, fh = math.floor(lo), math.floor(hi)
    if fl != fh:
        s_int = _poly_eval_fraction(coeffs, Fraction(fh))
        if s_int == 0:
            raise NotPisot("integer root")
        fl = fh if (s_int > 0) == (s_lo > 0) else fl
    conj_bound = Fraction(mpmath.nstr(bound, 30)) + Fraction(1, 10**25)
    conjugates = tuple(complex(w) for j, w in enumerate(approx) if j != i)
    return PisotNumber(coeffs, (lo, hi), fl, conj_bound, conjugates, is_pisot)


class FieldElement:
    """An element (c_0 + c_1 beta + ... + c_{d-1} beta^{d-1}) / den of Q(beta).

    Always stored in canonical form: den > 0 and gcd(c, den) = 1.
    """

    __slots__ = ("parent", "num", "den")

    def __init__(self, parent: PisotNumber, num: Sequence[int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = math.gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.parent = parent
        self.num = tuple(num)
        self.den = den

    @classmethod
    def _from_poly(cls, parent: PisotNumber, poly: list[int], den: int) -> "FieldElement":
        d = parent.degree
        low = parent._low
        poly = list(poly)
        for top in range(len(poly) - 1, d - 1, -1):
            c = poly[top]
            if c:
                base = top - d
                for i, ci in enumerate(low):
                    poly[base + i] -= c * ci
        return cls(parent, poly[:d], den)

    # -- plumbing -------------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.parent is not self.parent and other.parent != self.parent:
                raise MixedParents("elements belong to different fields")
            return other
        if isinstance(other, int):
            return self.parent.from_int(other)
        if isinstance(other, Fraction):
            return FieldElement(
                self.parent, [other.numerator] + [0] * (self.parent.degree - 1), other.denominator
            )
        return NotImplemented

    def __repr__(self) -> str:
        if self.den == 1:
            return f"FieldElement({list(self.num)})"
        return f"FieldElement({list(self.num)}/{self.den})"

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    @property
    def key(self) -> tuple[tuple[int, ...], int]:
        return (self.num, self.den)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_integral(self) -> bool:
        """Membership in Z[beta]."""
        return self.den == 1

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": self.den}

    @classmethod
    def from_json(cls, parent: PisotNumber, data: dict) -> "FieldElement":
        return cls(parent, data["num"], data["den"])

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.den, other.den
        return FieldElement(self.parent, [x * b + y * a for x, y in zip(self.num, other.num)], a * b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.parent, [-x for x in self.num], self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.den, other.den
        return FieldElement(self.parent, [x * b - y * a for x, y in zip(self.num, other.num)], a * b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.parent, [x * other for x in self.num], self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.parent.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(self.num):
            if x:
                for j, y in enumerate(other.num):
                    prod[i + j] += x * y
        return FieldElement._from_poly(self.parent, prod, self.den * other.den)

    __rmul__ = __mul__

    def mul_beta(self) -> "FieldElement":
        """Multiply by beta (a coefficient shift plus one reduction)."""
        top = self.num[-1]
        new = [0, *self.num[:-1]]
        if top:
            for i, c in enumerate(self.parent._low):
                new[i] -= top * c
        return FieldElement(self.parent, new, self.den)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.parent.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by solving the multiplication-matrix system."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        d = self.parent.degree
        # column i: coordinates of self * beta^i
        cols = []
        e = FieldElement(self.parent, self.num, 1)
        for _ in range(d):
            cols.append(e.num)
            e = e.mul_beta()
        rows = [[Fraction(cols[c][r]) for c in range(d)] + [Fraction(int(r == 0))] for r in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if rows[r][c] != 0)
            rows[c], rows[piv] = rows[piv], rows[c]
            pv = rows[c][c]
            rows[c] = [v / pv for v in rows[c]]
            for r in range(d):
                if r != c and rows[r][c] != 0:
                    f = rows[r][c]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
        sol = [row[d] for row in rows]
        common = math.lcm(*(s.denominator for s in sol))
        num = [int(s * common) * self.den for s in sol]
        return FieldElement(self.parent, num, common)

    def __truediv__(self, other):
        if isinstance(other, int):
            return FieldElement(self.parent, self.num, self.den * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    # -- order ---------------------------------------------------------------

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.num[0] > 0 else -1
        bits = _START_BITS
        while bits <= _MAX_BITS:
            lo, hi, _ = self.parent.enclose(self.num, bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise ArithmeticError("sign undecided; is the polynomial reducible?")

    def floor(self) -> int:
        if self.is_rational():
            return self.num[0] // self.den
        bits = _START_BITS
        while bits <= _MAX_BITS:
            lo, hi, scale = self.parent.enclose(self.num, bits)
            scale *= self.den
            f = lo // scale
            if hi // scale == f:
                return f
            bits *= 2
        raise ArithmeticError("floor undecided; is the polynomial reducible?")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        lo, hi, scale = self.parent.enclose(self.num, 64)
        return float(Fraction(lo + hi, 2 * scale * self.den))

    def conjugate(self, root: complex) -> complex:
        """Evaluate the coordinate polynomial at another root (floating point)."""
        acc = 0j
        for c in reversed(self.num):
            acc = acc * root + c
        return acc / self.den


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv_beta(P: PisotNumber) -> FieldElement:
    """beta^-1 = -(beta^(d-1) + c_(d-1) beta^(d-2) + ... + c_1) / c_0."""
    c0 = P._low[0]
    if c0 == 0:
        raise FieldError("beta is a root of x; constant coefficient is zero")
    num = list(P._low[1:]) + [1]
    return FieldElement(P, [-c for c in num], c0)


def sign(x: FieldElement) -> int:
    return x.sign()


def floor(x: FieldElement) -> int:
    return x.floor()


def alpha_basis_coords(x: FieldElement) -> tuple[int, int, int]:
    """Integers (a, b, c) with x = a + b*alpha + c*alpha^2, alpha = beta - floor(beta)."""
    if x.parent.degree != 3:
        raise WrongDegree("alpha basis is defined here for cubic beta only")
    if x.den != 1:
        raise NotIntegral("element is not in Z[beta]")
    n = x.parent.floor_beta
    x0, x1, x2 = x.num
    c = x2
    b = x1 + 2 * n * c
    a = x0 + n * b - n * n * c
    return a, b, c


def from_alpha_basis(P: PisotNumber, coords: Sequence[int]) -> FieldElement:
    if P.degree != 3:
        raise WrongDegree("alpha basis is defined here for cubic beta only")
    a, b, c = coords
    n = P.floor_beta
    return FieldElement(P, [a - n * b + n * n * c, b - 2 * n * c, c], 1)
