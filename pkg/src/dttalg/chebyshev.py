"""Exact Chebyshev polynomials of the four kinds T, U, V, W.

Coefficients are kept as ``fractions.Fraction`` so identities can be
checked without rounding.  Zeros are described by their angle in units
of pi: a zero ``cos(q*pi)`` is stored as the rational ``q``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import zip_longest
from numbers import Rational

KINDS = ("T", "U", "V", "W")


class ExactPoly:
    """Polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, ExactPoly):
            other = _lift(other)
            if other is None:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ExactPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self):
        return ExactPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return ExactPoly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return ExactPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def divmod(self, divisor):
        """Polynomial long division; returns (quotient, remainder)."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            q = c / lead
            quot[i - dd] = q
            for j, d in enumerate(divisor.coeffs):
                rem[i - dd + j] -= q * d
        return ExactPoly(quot), ExactPoly(rem[:dd])

    def __mod__(self, divisor):
        return self.divmod(divisor)[1]

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Horner evaluation; exact for rational input."""
        exact = isinstance(x, (int, Rational))
        acc = Fraction(0) if exact else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if exact else float(c))
        return acc

    def compose(self, inner):
        """Return ``self(inner(x))``."""
        acc = ExactPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def float_coeffs(self):
        return [float(c) for c in self.coeffs]


def _lift(value):
    if isinstance(value, ExactPoly):
        return value
    if isinstance(value, (int, Rational)):
        return ExactPoly.constant(value)
    return None


def add(p, q):
    return p + q


def subtract(p, q):
    return p - q


def multiply(p, q):
    return p * q


def compose(p, q):
    return p.compose(q)


def evaluate(p, x):
    return p.eval(x)


def _check_kind(kind):
    if kind not in KINDS:
        raise ValueError(f"unknown Chebyshev kind {kind!r}")


_INITIAL = {
    "T": ((1,), (0, 1)),
    "U": ((1,), (0, 2)),
    "V": ((1,), (-1, 2)),
    "W": ((1,), (1, 2)),
}


@lru_cache(maxsize=None)
def cheb(kind, n):
    """Chebyshev polynomial ``C_n`` of the given kind.

    Negative indices come from running the recurrence backwards,
    ``C_{n-2} = 2x C_{n-1} - C_n``, which reproduces the usual symmetries.

    >>> str(cheb("T", 3))
    '4x^3 - 3x'
    """
    _check_kind(kind)
    c0, c1 = (ExactPoly(c) for c in _INITIAL[kind])
    if n == 0:
        return c0
    if n == 1:
        return c1
    two_x = ExactPoly((0, 2))
    if n > 1:
        return two_x * cheb(kind, n - 1) - cheb(kind, n - 2)
    return two_x * cheb(kind, n + 1) - cheb(kind, n + 2)


def cheb_zero_angles(kind, n):
    """Zeros of ``C_n`` as rationals q with zero = cos(q*pi), ascending q."""
    _check_kind(kind)
    if n < 1:
        raise ValueError("n must be positive")
    half = Fraction(1, 2)
    if kind == "T":
        return [(k + half) / n for k in range(n)]
    if kind == "U":
        return [Fraction(k + 1, n + 1) for k in range(n)]
    if kind == "V":
        return [(k + half) / (n + half) for k in range(n)]
    return [Fraction(k + 1) / (n + half) for k in range(n)]


def cos_pi(q):
    """cos(q*pi) with exact values at the rational points 0, 1/3, 1/2, ..."""
    q = Fraction(q) % 2
    exact = {
        Fraction(0): 1.0, Fraction(1, 3): 0.5, Fraction(1, 2): 0.0,
        Fraction(2, 3): -0.5, Fraction(1): -1.0, Fraction(4, 3): -0.5,
        Fraction(3, 2): 0.0, Fraction(5, 3): 0.5,
    }
    if q in exact:
        return exact[q]
    return math.cos(math.pi * q.numerator / q.denominator)


def sin_pi(q):
    q = Fraction(q) % 2
    exact = {
        Fraction(0): 0.0, Fraction(1, 6): 0.5, Fraction(1, 2): 1.0,
        Fraction(5, 6): 0.5, Fraction(1): 0.0, Fraction(7, 6): -0.5,
        Fraction(3, 2): -1.0, Fraction(11, 6): -0.5,
    }
    if q in exact:
        return exact[q]
    return math.sin(math.pi * q.numerator / q.denominator)


def rational_cos_pi(q):
    """Exact value of cos(q*pi) when it is rational, else None."""
    q = Fraction(q) % 2
    table = {
        Fraction(0): Fraction(1), Fraction(1, 3): Fraction(1, 2),
        Fraction(1, 2): Fraction(0), Fraction(2, 3): Fraction(-1, 2),
        Fraction(1): Fraction(-1), Fraction(4, 3): Fraction(-1, 2),
        Fraction(3, 2): Fraction(0), Fraction(5, 3): Fraction(1, 2),
    }
    return table.get(q)


def cheb_zeros(kind, n):
    """Zeros of ``C_n`` in the closed form order (k ascending)."""
    return [cos_pi(q) for q in cheb_zero_angles(kind, n)]


def _as_fraction(r):
    if isinstance(r, float):
        return Fraction(r).limit_denominator(10**12)
    return Fraction(r)


def skew_zero_angles(n, r):
    """Angles r_l (in units of pi) of the zeros of ``T_n - cos(r*pi)``.

    >>> [str(a) for a in skew_zero_angles(3, Fraction(1, 3))]
    ['1/9', '5/9', '7/9']
    """
    r = _as_fraction(r)
    if not 0 <= r <= 1:
        raise ValueError(f"skew parameter must lie in [0, 1], got {r}")
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for i in range(n // 2):
        out.append((r + 2 * i) / n)
        out.append((2 - r + 2 * i) / n)
    if n % 2:
        out.append((r + n - 1) / n)
    return out


def skew_zeros(n, r):
    """The r_l themselves (rationals in [0, 1]); zeros are cos(r_l*pi)."""
    return skew_zero_angles(n, r)


def cheb_values(kind, n, x):
    """Float values C_0(x), ..., C_{n-1}(x) by the three-term recurrence."""
    out = []
    if n <= 0:
        return out
    c0 = 1.0
    c1 = {"T": x, "U": 2 * x, "V": 2 * x - 1, "W": 2 * x + 1}[kind]
    out.append(c0)
    if n > 1:
        out.append(c1)
    for _ in range(2, n):
        c0, c1 = c1, 2 * x * c1 - c0
        out.append(c1)
    return out


# identity checks --------------------------------------------------------

def _T(n):
    return cheb("T", n)


def _size_split(tag, n):
    x = ExactPoly.x()
    if tag == "t3-cubic":
        return _T(3) == x * (4 * x * x - 3)
    if tag == "u-odd-split":
        return cheb("U", 2 * n - 1) == 2 * cheb("U", n - 1) * _T(n)
    if tag == "u-even-split":
        return cheb("U", 2 * n) == cheb("V", n) * cheb("W", n)
    if tag == "v-third-split":
        return cheb("V", 3 * n + 1) == 2 * cheb("V", n) * (_T(2 * n + 1) - Fraction(1, 2))
    if tag == "w-third-split":
        return cheb("W", 3 * n + 1) == 2 * cheb("W", n) * (_T(2 * n + 1) + Fraction(1, 2))
    raise ValueError(f"unknown identity {tag}")


def _composition(tag, k, m, samples):
    Tm = _T(m)
    if tag == "t-compose":
        if _T(k * m) != _T(k).compose(Tm):
            return False
        # the skew form T_km - a = T_k(T_m) - a, checked numerically
        import numpy as np
        lhs = np.array(_T(k * m).float_coeffs())
        for r in samples:
            a = cos_pi(r)
            left = lhs.copy()
            left[0] -= a
            right = np.array(_T(k).compose(Tm).float_coeffs())
            right[0] -= a
            if not np.allclose(left, right, rtol=0, atol=1e-9 * max(1.0, np.abs(left).max())):
                return False
        return True
    if tag == "u-compose":
        return cheb("U", k * m - 1) == cheb("U", m - 1) * cheb("U", k - 1).compose(Tm)
    if tag in ("v-compose", "w-compose"):
        if k % 2 == 0:
            raise ValueError("k must be odd")
        h = (k - 1) // 2
        kind = "V" if tag == "v-compose" else "W"
        return cheb(kind, h + k * m) == cheb(kind, m) * cheb(kind, h).compose(_T(2 * m + 1))
    if tag == "t-half-compose":
        if m % 2:
            raise ValueError("m must be even")
        return _T(k * m + m // 2) == _T(m // 2) * cheb("V", k).compose(Tm)
    if tag == "u-half-compose":
        if m % 2:
            raise ValueError("m must be even")
        return cheb("U", k * m + m // 2 - 1) == cheb("U", m // 2 - 1) * cheb("W", k).compose(Tm)
    raise ValueError(f"unknown identity {tag}")


_NEIGHBOR = {
    # kind: (C_n - C_{n-2}, C_n - C_{n-1}, C_n + C_{n-1}) as products
    "T": (lambda n: 2 * ExactPoly((-1, 0, 1)) * cheb("U", n - 2),
          lambda n: ExactPoly((-1, 1)) * cheb("W", n - 1),
          lambda n: ExactPoly((1, 1)) * cheb("V", n - 1)),
    "U": (lambda n: 2 * _T(n),
          lambda n: cheb("V", n),
          lambda n: cheb("W", n)),
    "V": (lambda n: 2 * ExactPoly((-1, 1)) * cheb("W", n - 1),
          lambda n: 2 * ExactPoly((-1, 1)) * cheb("U", n - 1),
          lambda n: 2 * _T(n)),
    "W": (lambda n: 2 * ExactPoly((1, 1)) * cheb("V", n - 1),
          lambda n: 2 * _T(n),
          lambda n: 2 * ExactPoly((1, 1)) * cheb("U", n - 1)),
}

NEIGHBOR_COLUMNS = ("minus2", "minus1", "plus1")


SIZE_SPLITS = ("t3-cubic", "u-odd-split", "u-even-split", "v-third-split", "w-third-split")
COMPOSITIONS = ("t-compose", "u-compose", "v-compose", "w-compose", "t-half-compose",
                "u-half-compose")


def identity_tags():
    tags = [f"split.{t}" for t in SIZE_SPLITS]
    tags += [f"compose.{t}" for t in COMPOSITIONS]
    tags += [f"u-expansion.{k}" for k in KINDS]
    tags += [f"t-product.{k}" for k in KINDS]
    tags += [f"neighbor.{k}.{c}" for k in KINDS for c in NEIGHBOR_COLUMNS]
    return tags


def check_identity(tag, n=None, k=None, m=None, samples=(Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))):
    """Check a named polynomial identity exactly at the given sizes.

    Tags: ``split.<name>`` (take ``n``), ``compose.<name>`` (take ``k``,
    ``m``), ``u-expansion.<kind>`` (``n``: C_n = C_1 U_(n-1) - C_0 U_(n-2)),
    ``t-product.<kind>`` (``k``, ``n``: T_k C_n = (C_(n-k) + C_(n+k)) / 2) and
    ``neighbor.<kind>.<minus2|minus1|plus1>`` (``n``: C_n -+ C_(n-j) as a product).

    >>> check_identity("split.u-odd-split", n=4)
    True
    """
    if tag not in identity_tags():
        raise ValueError(f"unknown identity tag {tag!r}")
    family, _, rest = tag.partition(".")
    if family == "split":
        return _size_split(rest, n)
    if family == "compose":
        return _composition(rest, k, m, samples)
    if family == "u-expansion":
        c = cheb(rest, n)
        return c == cheb(rest, 1) * cheb("U", n - 1) - cheb(rest, 0) * cheb("U", n - 2)
    if family == "t-product":
        return _T(k) * cheb(rest, n) == Fraction(1, 2) * (cheb(rest, n - k) + cheb(rest, n + k))
    kind, col = rest.split(".")
    idx = NEIGHBOR_COLUMNS.index(col)
    lhs = cheb(kind, n) + (cheb(kind, n - 1) if col == "plus1" else -cheb(kind, n - (2 if col == "minus2" else 1)))
    return lhs == _NEIGHBOR[kind][idx](n)
