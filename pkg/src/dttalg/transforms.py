"""Transform identifiers and naive dense reference matrices.

Every fast algorithm in the package is checked against the O(n^2)
matrices built here.  DTT rows are indexed by the ordered zeros of the
module polynomial, columns by the Chebyshev basis index.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .chebyshev import cheb_values, cheb_zero_angles, cos_pi, sin_pi, skew_zero_angles

HALF = Fraction(1, 2)

GROUP_OF_TYPE = {1: "U", 2: "U", 3: "T", 4: "T", 5: "W", 6: "W", 7: "V", 8: "V"}

# (basis kind, scaling kind) per DTT; scaling kinds: one, sin, cos2, sin2
_DTT_MODEL = {
    ("DCT", 1): ("T", "one"), ("DST", 1): ("U", "sin"),
    ("DCT", 2): ("V", "cos2"), ("DST", 2): ("W", "sin2"),
    ("DCT", 3): ("T", "one"), ("DST", 3): ("U", "sin"),
    ("DCT", 4): ("V", "cos2"), ("DST", 4): ("W", "sin2"),
    ("DCT", 5): ("T", "one"), ("DST", 5): ("U", "sin"),
    ("DCT", 6): ("V", "cos2"), ("DST", 6): ("W", "sin2"),
    ("DCT", 7): ("T", "one"), ("DST", 7): ("U", "sin"),
    ("DCT", 8): ("V", "cos2"), ("DST", 8): ("W", "sin2"),
}

# the skew DTT with the same basis as a given basis kind
SKEW_BY_BASIS = {"T": ("DCT", 3), "U": ("DST", 3), "V": ("DCT", 4), "W": ("DST", 4)}

DUAL = {
    ("DCT", 3): ("DST", 3), ("DCT", 4): ("DST", 4),
    ("DCT", 1): ("DCT", 1), ("DST", 1): ("DST", 1),
    ("DCT", 2): ("DCT", 2), ("DST", 2): ("DST", 2),
    ("DCT", 7): ("DST", 8), ("DST", 7): ("DCT", 8),
    ("DCT", 5): ("DCT", 6), ("DST", 5): ("DST", 6),
}
DUAL.update({v: k for k, v in list(DUAL.items())})


@dataclass(frozen=True)
class TransformId:
    """A transform instance.

    For DCT/DST, ``r`` is the skew parameter (types 3 and 4 only); the
    value 1/2 is normalized away since it gives the plain transform.
    For the DFT of type 1, ``r`` is a twist u meaning
    ``DFT_n * diag(w_n^(u*l))`` with ``w_n = exp(-2 pi j/n)``; ``a`` holds
    a real parameter for DFT(a).
    """

    family: str
    type: int
    n: int
    r: Fraction | None = None
    poly: bool = False
    inverse: bool = False
    transposed: bool = False
    a: Fraction | None = None

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in ("DCT", "DST", "DFT"):
            raise ValueError(f"unknown transform family {self.family!r}")
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"size must be a nonnegative integer, got {self.n!r}")
        if self.r is not None:
            object.__setattr__(self, "r", Fraction(self.r))
        if self.a is not None:
            object.__setattr__(self, "a", Fraction(self.a))
        if fam == "DFT":
            if self.type not in (1, 2, 3, 4):
                raise ValueError("DFT type must be 1..4")
            if self.n < 1:
                raise ValueError("DFT size must be positive")
            if self.poly or self.inverse:
                raise ValueError("DFT has no polynomial or inverse variant here")
            if self.r is not None:
                if self.type != 1 or not 0 <= self.r < 1:
                    raise ValueError("DFT twist needs type 1 and 0 <= u < 1")
                if self.r == 0:
                    object.__setattr__(self, "r", None)
            if self.a is not None:
                if self.type != 1 or self.r is not None:
                    raise ValueError("DFT(a) is a type-1 variant without twist")
                if self.a == 0:
                    raise ValueError("DFT(a) needs a != 0")
                if self.a == 1:
                    object.__setattr__(self, "a", None)
            return
        if self.type not in range(1, 9):
            raise ValueError("DCT/DST type must be 1..8")
        if self.a is not None:
            raise ValueError("parameter a is only for DFT(a)")
        if self.r is not None:
            if self.type not in (3, 4):
                raise ValueError("skew parameter only for types 3 and 4")
            if not 0 <= self.r <= 1:
                raise ValueError("skew parameter must lie in [0, 1]")
            if self.r == HALF:
                object.__setattr__(self, "r", None)
        if self.inverse:
            if self.type not in (3, 4):
                raise ValueError("inverse variant only for T-group transforms")
            if self.poly:
                raise ValueError("inverse variant is defined for scaled transforms only")
        if self.family == "DCT" and self.type == 1 and self.n < 2:
            raise ValueError("DCT-1 needs n >= 2")
        if self.n < 1 and not (self.type in (5, 7) and self.family == "DST"):
            raise ValueError("size must be positive")

    # descriptive helpers ---------------------------------------------------
    @property
    def group(self):
        if self.family == "DFT":
            return None
        return GROUP_OF_TYPE[self.type]

    @property
    def skew(self):
        return self.r is not None and self.family != "DFT"

    @property
    def basis(self):
        return _DTT_MODEL[(self.family, self.type)][0]

    def with_(self, **kw):
        return replace(self, **kw)

    def plain(self):
        """Same transform without inverse/transposed flags."""
        return replace(self, inverse=False, transposed=False)

    def label(self):
        if self.family == "DFT":
            if self.a is not None:
                base = f"DFT_{self.n}(a={self.a})"
            elif self.r is not None:
                base = f"DFT_{self.n}(u={self.r})"
            else:
                base = f"DFT{'' if self.type == 1 else '-' + str(self.type)}_{self.n}"
        else:
            name = f"{self.family}-{self.type}"
            if self.poly:
                name = "p" + name
            if self.inverse:
                name = "i" + name
            base = f"{name}_{self.n}"
            if self.r is not None:
                base += f"({self.r})"
        if self.transposed:
            base += "^T"
        return base

    __str__ = label

    def sort_key(self):
        return (self.family, self.type, self.n, self.r if self.r is not None else Fraction(-1),
                self.poly, self.inverse, self.transposed, self.a if self.a is not None else Fraction(0))


def dct(type_, n, r=None, **flags):
    return TransformId("DCT", type_, n, r, **flags)


def dst(type_, n, r=None, **flags):
    return TransformId("DST", type_, n, r, **flags)


def dft(n, type_=1, u=None, a=None, transposed=False):
    return TransformId("DFT", type_, n, u, a=a, transposed=transposed)


# zeros -------------------------------------------------------------------

def zero_angles(family, type_, n, r=None):
    """Ordered zeros of the module polynomial as angles q (zero = cos(q*pi))."""
    if type_ in (3, 4):
        if r is None:
            return cheb_zero_angles("T", n)
        return skew_zero_angles(n, r)
    if family == "DCT":
        denom = {1: Fraction(n - 1), 2: Fraction(n), 5: n - HALF, 6: n - HALF,
                 7: n - HALF, 8: n + HALF}[type_]
        offset = {1: 0, 2: 0, 5: 0, 6: 0, 7: HALF, 8: HALF}[type_]
    else:
        denom = {1: Fraction(n + 1), 2: Fraction(n), 5: n + HALF, 6: n + HALF,
                 7: n + HALF, 8: n - HALF}[type_]
        offset = {1: 1, 2: 1, 5: 1, 6: 1, 7: HALF, 8: HALF}[type_]
    return [(k + offset) / denom for k in range(n)]


def _scale(kind, q):
    if kind == "one":
        return 1.0
    if kind == "sin":
        return sin_pi(q)
    if kind == "cos2":
        return cos_pi(q / 2)
    return sin_pi(q / 2)


def _check_dtt(family, type_):
    if family not in ("DCT", "DST") or type_ not in range(1, 9):
        raise ValueError(f"not a DTT: {family}-{type_}")


# dense matrices ----------------------------------------------------------

def dtt_matrix(family, type_, n):
    """The DTT by its closed-form entry formula (row k, column l)."""
    family = family.upper()
    _check_dtt(family, type_)
    if family == "DCT" and type_ == 1 and n < 2:
        raise ValueError("DCT-1 needs n >= 2")
    k = np.arange(n).reshape(-1, 1).astype(float)
    l = np.arange(n).reshape(1, -1).astype(float)
    h = 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        return _dtt_entries(family, type_, n, k, l, h)


def _dtt_entries(family, type_, n, k, l, h):
    if family == "DCT":
        arg = {
            1: k * l / (n - 1), 2: k * (l + h) / n, 3: (k + h) * l / n,
            4: (k + h) * (l + h) / n, 5: k * l / (n - h), 6: k * (l + h) / (n - h),
            7: (k + h) * l / (n - h), 8: (k + h) * (l + h) / (n + h),
        }[type_]
        return np.cos(np.pi * arg)
    arg = {
        1: (k + 1) * (l + 1) / (n + 1), 2: (k + 1) * (l + h) / n,
        3: (k + h) * (l + 1) / n, 4: (k + h) * (l + h) / n,
        5: (k + 1) * (l + 1) / (n + h), 6: (k + 1) * (l + h) / (n + h),
        7: (k + h) * (l + 1) / (n + h), 8: (k + h) * (l + h) / (n - h),
    }[type_]
    return np.sin(np.pi * arg)


def scaling_entries(family, type_, n, r=None):
    family = family.upper()
    _check_dtt(family, type_)
    kind = _DTT_MODEL[(family, type_)][1]
    return np.array([_scale(kind, q) for q in zero_angles(family, type_, n, r)])


def scaling_diag(t):
    """Diagonal f(theta_k) with DTT = scaling_diag * polynomial DTT."""
    from .formula import Diagonal
    return Diagonal(scaling_entries(t.family, t.type, t.n, t.r))


def _poly_matrix(family, type_, n, r=None):
    basis = _DTT_MODEL[(family, type_)][0]
    rows = [cheb_values(basis, n, cos_pi(q)) for q in zero_angles(family, type_, n, r)]
    return np.array(rows, dtype=float).reshape(n, n)


def poly_dtt_matrix(family, type_, n, r=None):
    """Polynomial transform [p_l(alpha_k)] for the DTT's model."""
    family = family.upper()
    _check_dtt(family, type_)
    if r is not None and type_ not in (3, 4):
        raise ValueError("skew parameter only for types 3 and 4")
    return _poly_matrix(family, type_, n, r)


def skew_dtt_matrix(kind, n, r, polynomial=False):
    """Skew DTT ``kind(r)`` for kind in C3, S3, C4, S4."""
    family, type_ = _kind(kind)
    r = Fraction(r)
    p = _poly_matrix(family, type_, n, r)
    if polynomial:
        return p
    return scaling_entries(family, type_, n, r).reshape(-1, 1) * p


def _kind(kind):
    table = {"C3": ("DCT", 3), "S3": ("DST", 3), "C4": ("DCT", 4), "S4": ("DST", 4)}
    if kind not in table:
        raise ValueError(f"unknown skew kind {kind!r}")
    return table[kind]


def kind_of(family, type_):
    return ("C" if family == "DCT" else "S") + str(type_)


def gram_diagonal(kind, n):
    """Diagonal of DTT^T DTT for the (non-skew) T-group DTT."""
    d = np.full(n, n / 2)
    if kind == "C3":
        d[0] = n
    elif kind == "S3":
        d[-1] = n
    elif kind not in ("C4", "S4"):
        raise ValueError(f"unknown kind {kind!r}")
    return d


def inverse_skew_dtt(kind, n, r=HALF):
    """iDTT_n(r): the inverse skew DTT scaled so that iDTT(1/2) = DTT^T."""
    m = skew_dtt_matrix(kind, n, r)
    if abs(np.linalg.det(m)) < 1e-12 * max(1.0, np.abs(m).max()) ** n:
        raise ValueError(f"{kind}_{n}({r}) is singular")
    return gram_diagonal(kind, n).reshape(-1, 1) * np.linalg.inv(m)


def x_matrix(kind, n, r):
    """The x-shaped matrix X_n(r) with DTT_n(r) = DTT_n * X_n(r)."""
    r = Fraction(r)
    t = HALF - r
    out = np.zeros((n, n))
    if kind in ("C3", "S3"):
        c = [cos_pi(t * l / n) for l in range(n + 1)]
        s = [sin_pi(t * l / n) for l in range(n + 1)]
        if kind == "C3":
            out[0, 0] = 1.0
            for l in range(1, n):
                out[l, l] += c[l]
                out[n - l, l] += s[l]
        else:
            for l in range(1, n):
                out[l - 1, l - 1] += c[l]
                out[n - 1 - l, l - 1] -= s[l]
            out[n - 1, n - 1] = c[n]
    elif kind in ("C4", "S4"):
        sign = 1.0 if kind == "C4" else -1.0
        for l in range(n):
            out[l, l] += cos_pi(t * (2 * l + 1) / (2 * n))
            out[n - 1 - l, l] += sign * sin_pi(t * (2 * l + 1) / (2 * n))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return out


def dft_matrix(n, type_=1, a=None, u=None):
    """DFT of type 1..4, DFT(a) for real a != 0, or the twisted DFT_n(u)."""
    w = np.exp(-2j * np.pi / n)
    k = np.arange(n).reshape(-1, 1)
    l = np.arange(n).reshape(1, -1)
    if a is not None:
        if a == 0:
            raise ValueError("DFT(a) needs a != 0")
        a = float(a)
        # n-th root of a with arg(a) taken in [-pi, pi), so DFT(-1) = DFT-3
        root = abs(a) ** (1.0 / n) * (cmath.exp(-1j * math.pi / n) if a < 0 else 1.0)
        return w ** (k * l) * root ** l
    if u is not None:
        return w ** (k * l) * w ** (float(u) * l)
    kk = k + (0.5 if type_ in (3, 4) else 0.0)
    ll = l + (0.5 if type_ in (2, 4) else 0.0)
    return np.exp(-2j * np.pi * kk * ll / n)


def reference(t):
    """Dense reference matrix for any TransformId."""
    if t.family == "DFT":
        if t.type == 1 and (t.r is not None or t.a is not None):
            m = dft_matrix(t.n, 1, a=t.a, u=t.r)
        else:
            m = dft_matrix(t.n, t.type)
    elif t.n == 0:
        m = np.zeros((0, 0))
    elif t.inverse:
        m = inverse_skew_dtt(kind_of(t.family, t.type), t.n, t.r if t.r is not None else HALF)
    elif t.poly:
        m = poly_dtt_matrix(t.family, t.type, t.n, t.r)
    elif t.r is not None:
        m = skew_dtt_matrix(kind_of(t.family, t.type), t.n, t.r)
    else:
        m = dtt_matrix(t.family, t.type, t.n)
    return m.T.copy() if t.transposed else m


def matrix_to_csv(m):
    """Row-major CSV with 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(m):
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, complex) or np.iscomplexobj(v):
        v = complex(v)
        if v.imag == 0:
            return f"{v.real:.17g}"
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return f"{float(v):.17g}"


def csv_to_matrix(text):
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    vals = [[complex(x) if x.endswith("j") else float(x) for x in r] for r in rows]
    return np.array(vals)
