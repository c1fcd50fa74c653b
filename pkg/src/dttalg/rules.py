"""Catalog of algorithm rules, base cases and rewrite identities.

Every rule maps a TransformId and a split parameter to a one-level
formula whose ``Transform`` leaves are smaller (or related) transforms.
The planner chooses among the admissible (rule, parameter) options.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import sparse

from . import blocks as bl
from .chebyshev import cos_pi, sin_pi, skew_zero_angles
from .formula import (Butterfly, DenseBlock, Diagonal, Identity, OddStride, OppIdentity,
                      Permutation, Stride, Transform, compose, dsum, kron_left, kron_right,
                      transpose)
from .transforms import (DUAL, HALF, SKEW_BY_BASIS, TransformId, dct, dst, gram_diagonal,
                         kind_of, reference, x_matrix)

BY_DEFINITION_MAX = 64
ENGINE_MAX = 512


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    tag: str
    params: Callable  # TransformId -> list of admissible split parameters
    build: Callable  # (TransformId, param) -> Formula
    constraint: str
    post: Callable | None = None

    def applies(self, t, k=None):
        ps = self.params(t)
        return bool(ps) if k is None else k in ps

    def expand(self, t, k=None):
        ps = self.params(t)
        if not ps:
            raise RuleError(f"rule {self.tag} does not apply to {t}: needs {self.constraint}")
        if k is None:
            k = ps[0]
        elif k not in ps:
            raise RuleError(f"rule {self.tag} does not apply to {t} with k={k}: needs "
                            f"{self.constraint}; admissible: {ps}")
        return self.build(t, k)


# helpers -----------------------------------------------------------------

def _is_dtt(t):
    return t.family in ("DCT", "DST")


def _tgroup(t):
    return _is_dtt(t) and t.type in (3, 4)


def _r(t):
    return t.r if t.r is not None else HALF


def _kind(t):
    return kind_of(t.family, t.type)


def _simple(t):
    """Not transposed, not inverse."""
    return not t.transposed and not t.inverse


def _divisors(n, lo=2):
    return [k for k in range(lo, n) if n % k == 0]


def _leaf(t):
    return Transform(t)


def _dense(mat, generic=()):
    return DenseBlock(np.asarray(mat, dtype=float), frozenset(generic))


def _generic_all(mat):
    m = np.asarray(mat)
    return frozenset(zip(*np.nonzero(np.abs(m) > 0)))


GENERIC_R = Fraction(1, 7)


def _skew_pattern(build, r):
    """Generic positions of an r-dependent block: its nonzeros at r and at a generic r,
    so a value that happens to vanish at this r is still priced."""
    gen = _generic_all(build(r))
    if 0 < r < 1:
        gen |= _generic_all(build(GENERIC_R))
    return gen


# base cases --------------------------------------------------------------

_A3 = np.array([[1.0, 0, 1], [0, 1, 0], [1, 0, -1]])
_R3 = np.array([[1.0, 0, 0.5], [1, 0, -1], [0, math.sqrt(3) / 2, 0]])
_A3_SKEW = np.array([[1.0, 1, 1], [1, -1, 0], [1, 0, -1]])


def _skew3_core(r, factor=1.0):
    """I_1 + factor * [[cos((1+r)/3), cos((1-2r)/3)], [cos((1-r)/3), cos((1+2r)/3)]]."""
    m = np.zeros((3, 3))
    m[0, 0] = 1.0
    m[1, 1] = factor * cos_pi((1 + r) / 3)
    m[1, 2] = factor * cos_pi((1 - 2 * r) / 3)
    m[2, 1] = factor * cos_pi((1 - r) / 3)
    m[2, 2] = factor * cos_pi((1 + 2 * r) / 3)
    return m


def _size1(t):
    v = reference(t)[0, 0]
    depends_on_r = t.skew and not t.poly and (t.family, t.type) != ("DCT", 3)
    if t.inverse and (t.family, t.type) == ("DCT", 3):
        depends_on_r = False
    if abs(v - 1.0) < 1e-15 and not depends_on_r:
        return Identity(1)
    return Diagonal([v], (depends_on_r,))


def _size2(t):
    r = _r(t)
    g = t.skew
    c = cos_pi(r / 2)
    kind = _kind(t)
    f2 = Butterfly()
    if t.inverse:
        if kind == "C3":
            return compose(Diagonal([1.0, 1 / (2 * c)], (False, g)), f2)
        if kind == "S3":
            return compose(Diagonal([1 / (2 * sin_pi(r / 2)), 1 / sin_pi(r)], g), f2)
        a, b = cos_pi(r / 4), sin_pi(r / 4)
        if kind == "C4":
            return compose(_dense([[1, 1], [0, 1]]), Diagonal([1.0, 1 / (2 * c)], (False, g)), f2,
                           Diagonal([1 / (2 * a), 1 / (2 * b)], g))
        return compose(_dense([[1, -1], [0, 1]]), Diagonal([1.0, 1 / (2 * c)], (False, g)), f2,
                       Diagonal([1 / (2 * b), 1 / (2 * a)], g))
    if kind == "C3":
        return compose(f2, Diagonal([1.0, c], (False, g)))
    if kind == "S3":
        if t.poly:
            return compose(f2, Diagonal([1.0, 2 * c], (False, g)))
        return compose(f2, Diagonal([sin_pi(r / 2), sin_pi(r)], g))
    sign = -1.0 if kind == "C4" else 1.0
    core = _dense([[1, sign], [0, 2 * c]], {(1, 1)} if g else ())
    if t.poly:
        return compose(f2, core)
    a, b = cos_pi(r / 4), sin_pi(r / 4)
    scale = [a, b] if kind == "C4" else [b, a]
    return compose(Diagonal(scale, g), f2, core)


def _size3(t):
    kind = _kind(t)
    if t.inverse:
        return None
    if t.skew:
        r = t.r
        if kind == "C3":
            gen = {(i, j) for i in (1, 2) for j in (1, 2)}
            return compose(_dense(_A3_SKEW), _dense(_skew3_core(r), gen))
        if kind == "S3":
            core = _skew3_core(r, 2.0)
            gen = {(i, j) for i in (1, 2) for j in (1, 2)}
            poly = compose(_dense(_A3_SKEW), _dense(core, gen), _dense([[1, 0, 1], [0, 1, 0], [0, 0, 1]]))
            if t.poly:
                return poly
            scale = [sin_pi(r / 3), sin_pi((2 - r) / 3), sin_pi((2 + r) / 3)]
            return compose(Diagonal(scale, True), poly)
        return None
    s3 = math.sqrt(3)
    if kind == "C3":
        return compose(_dense(_A3), _dense(_R3))
    if kind == "S3":
        if t.poly:
            return compose(_dense([[0, 1, 1], [1, 0, 0], [0, 1, -1]]),
                           _dense([[1, 0, -1], [1, 0, 2], [0, s3, 0]]))
        return compose(_dense(_A3), _dense([[0.5, 0, 1], [1, 0, -1], [0, s3 / 2, 0]]))
    if t.poly:
        if kind == "C4":
            return compose(_dense([[0, 1, s3 - 1], [1, 0, 0], [0, 1, -s3 - 1]]),
                           _dense([[1, -1, -1], [1, 0, 1], [0, 1, -1]]))
        return compose(_dense([[0, 1, s3 + 1], [1, 0, 0], [0, 1, -s3 + 1]]),
                       _dense([[1, 1, -1], [1, 0, 1], [0, 1, 1]]))
    left = _dense([[1, -1, 0], [0, 0, 1], [1, 1, 0]])
    scale = Diagonal([math.sqrt(3 / 8), math.sqrt(1 / 8), math.sqrt(0.5)])
    if kind == "C4":
        return compose(left, _dense([[1, 0, 0], [0, 1, -1], [0, -2, -1]]), scale,
                       _dense([[1, 0, 1], [-1, 0, 1], [0, 1, 0]]))
    return compose(left, _dense([[1, 0, 0], [0, 1, -1], [0, 2, 1]]), scale,
                   _dense([[1, 0, 1], [1, 0, -1], [0, 1, 0]]))


def _dct3_size5():
    # x^2 - cos^2(q pi/2) splits T_5 / x; the pair evaluates at +-cos(pi/10), +-cos(3pi/10)
    h1, h3 = cos_pi(Fraction(1, 10)), cos_pi(Fraction(3, 10))
    c1, c3 = cos_pi(Fraction(2, 5)), cos_pi(Fraction(4, 5))
    perm = Permutation((1, 3, 0, 4, 2))
    pair = dsum(compose(Butterfly(), Diagonal([1.0, h1])), compose(Butterfly(), Diagonal([1.0, h3])))
    mix = _dense([[1, 0, c1, 0], [0, 1, 0, 2 * c1], [1, 0, c3, 0], [0, 1, 0, 2 * c3]])
    right = _dense([[1, 0, -1, 0, 1], [1, 0, 0.5, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 1],
                    [0, 0, 0, 1, 0]])
    return compose(perm, dsum(Identity(1), compose(pair, mix)), right)


def _wgroup_size2(t):
    if t.family != "DCT" or t.skew:
        return None
    if t.type == 5:
        return _dense([[1, 1], [1, -0.5]])
    if t.type == 6:
        return _dense([[1, 1], [1, -2]]) if t.poly else _dense([[1, 1], [0.5, -1]])
    return None


@lru_cache(maxsize=None)
def base_case(t):
    """Registered base case formula for ``t`` or None."""
    if t.transposed:
        return None
    if t.family == "DFT":
        if t.type == 1 and t.r is None and t.a is None:
            if t.n == 1:
                return Identity(1)
            if t.n == 2:
                return Butterfly()
        return None
    if t.n == 1:
        return _size1(t)
    if _tgroup(t):
        if t.n == 2:
            return _size2(t)
        if t.n == 3:
            return _size3(t)
        if t.n == 5 and _kind(t) == "C3" and not t.skew and not t.inverse:
            return _dct3_size5()
        return None
    if t.n == 2 and t.type in (5, 6):
        return _wgroup_size2(t)
    return None


# T-group splits ------------------------------------------------------------

def _skew_children(t, k, m, poly=None, inverse=False):
    poly = t.poly if poly is None else poly
    return [TransformId(t.family, t.type, m, ri, poly=poly, inverse=inverse)
            for ri in skew_zero_angles(k, _r(t))]


def _coarse_dct3(t, k, inverse=False):
    return dct(3, k, t.r, inverse=inverse)


def _tsplit_params(t, max_n=None):
    if not (_tgroup(t) and _simple(t)) or t.n < 4:
        return []
    if max_n is not None and t.n > max_n:
        return []
    return [k for k in _divisors(t.n) if t.n // k >= 2]


def _tgroup_b(kind, k, m, coarse_basis="T"):
    if kind == "C3" and coarse_basis == "T":
        return bl.c3_base_change(k, m)
    return DenseBlock(bl.tgroup_base_change(kind, k, m, coarse_basis))


def _via_t_params(t):
    ps = _tsplit_params(t)
    if _kind(t) != "C3" and t.n > ENGINE_MAX:
        return []
    return ps


def _via_t_basis(t, k):
    n, m = t.n, t.n // k
    kids = [_leaf(c) for c in _skew_children(t, k, m)]
    return compose(bl.spectrum_perm(n, m), dsum(*kids), kron_left(_leaf(_coarse_dct3(t, k)), m),
                   _tgroup_b(_kind(t), k, m))


def _via_u_params(t):
    if t.n > ENGINE_MAX:
        return []
    return _tsplit_params(t)


def _via_u_basis(t, k):
    n, m = t.n, t.n // k
    kids = [_leaf(c) for c in _skew_children(t, k, m)]
    coarse = dst(3, k, t.r, poly=True)
    return compose(bl.spectrum_perm(n, m), dsum(*kids), kron_left(_leaf(coarse), m),
                   _tgroup_b(_kind(t), k, m, "U"))


def _fused_params(t):
    ps = [k for k in _tsplit_params(t) if k == 2]
    if _kind(t) == "C3" and 3 in _tsplit_params(t):
        ps.append(3)
    return ps


def _fused(t, k):
    n, m = t.n, t.n // k
    r = _r(t)
    kind = _kind(t)
    kids = dsum(*[_leaf(c) for c in _skew_children(t, k, m)])
    if k == 2:
        return compose(bl.spectrum_perm(n, m), kids, kron_left(Butterfly(), m),
                       bl.fused_radix2(kind, m, r))
    # k = 3: the scaling D of the base change is fused into the coarse DCT-3_3
    d = bl.c3_scaling(3, m).entries
    if t.skew:
        left = _A3_SKEW
        core = _skew3_core(r)
        gen_rows = (1, 2)
    else:
        left, core, gen_rows = _A3, _R3, ()
    fused = (sparse.kron(sparse.csr_matrix(core), sparse.eye(m)) @ sparse.diags(d)).tocoo()
    # rows 1, 2 of the skew core depend on r; price the whole generic pattern
    pattern = sparse.kron(sparse.csr_matrix(np.abs(_skew3_core(GENERIC_R)) + np.abs(core)),
                          sparse.eye(m)).tocoo() if t.skew else fused
    gen = {(i, j) for i, j in zip(pattern.row.tolist(), pattern.col.tolist())
           if i // m in gen_rows and j // m >= 1}
    return compose(bl.spectrum_perm(n, m), kids, kron_left(_dense(left), m), DenseBlock(fused, gen),
                   bl.c3_stage(3, m, 0), bl.c3_stage(3, m, 1))


def _x_applies(t):
    """X(r) relates skew and non-skew scaled DTTs (and pDCT-3 = DCT-3)."""
    return not t.poly or _kind(t) == "C3"


def _twiddle_params(t):
    return _via_t_params(t) if _x_applies(t) else []


def _twiddle(t, k):
    n, m = t.n, t.n // k
    kind = _kind(t)
    xs = []
    for ri in skew_zero_angles(k, _r(t)):
        if ri == HALF:
            xs.append(Identity(m))
        else:
            xs.append(_x_block(kind, m, ri))
    plain = TransformId(t.family, t.type, m, None, poly=t.poly)
    return compose(bl.spectrum_perm(n, m), kron_right(k, _leaf(plain)), dsum(*xs),
                   kron_left(_leaf(_coarse_dct3(t, k)), m), _tgroup_b(kind, k, m))


def _inverted_params(t):
    if not (_tgroup(t) and t.inverse and not t.transposed) or t.n < 4:
        return []
    if t.skew and not 0 < t.r < 1:
        return []
    if t.n > ENGINE_MAX:  # the glue block is dense
        return []
    return [k for k in _divisors(t.n) if t.n // k >= 2]


@lru_cache(maxsize=None)
def _inverse_glue(kind, k, m):
    """Delta_n B^(-1) (Delta_k^(C3) (x) Delta_m)^(-1)."""
    n = k * m
    if kind == "C3":
        b = bl.c3_base_change(k, m)
        from .formula import densify
        binv = np.linalg.inv(densify(b))
    else:
        binv = np.linalg.inv(bl.tgroup_base_change(kind, k, m, "T"))
    right = np.kron(gram_diagonal("C3", k), gram_diagonal(kind, m))
    out = gram_diagonal(kind, n).reshape(-1, 1) * binv / right.reshape(1, -1)
    return bl.derive.snap(out)


def _inverted(t, k):
    n, m = t.n, t.n // k
    plain = t.with_(inverse=False)
    kids = [_leaf(c) for c in _skew_children(plain, k, m, inverse=True)]
    return compose(DenseBlock(_inverse_glue(_kind(t), k, m)),
                   kron_left(_leaf(_coarse_dct3(t, k, inverse=True)), m), dsum(*kids),
                   bl.spectrum_perm_inv(n, m))


# U-group -----------------------------------------------------------------

def _fact_u2n_params(t):
    if not (_is_dtt(t) and _simple(t)) or t.type not in (1, 2):
        return []
    n = t.n
    ok = {("DCT", 1): n % 2 == 1 and n >= 3, ("DST", 1): n % 2 == 1 and n >= 3,
          ("DCT", 2): n % 2 == 0 and n >= 2, ("DST", 2): n % 2 == 0 and n >= 2}
    return [None] if ok[(t.family, t.type)] else []


def _fact_u2n(t, _):
    n, p = t.n, t.poly
    f = t.family
    if (f, t.type) == ("DCT", 1):
        m = (n - 1) // 2
        return compose(OddStride(n, m + 1), dsum(_leaf(dct(1, m + 1, poly=p)), _leaf(dct(3, m, poly=p))),
                       bl.odd_butterfly(m))
    if (f, t.type) == ("DST", 1):
        m = (n + 1) // 2
        return compose(OddStride(n, m), dsum(_leaf(dst(3, m, poly=p)), _leaf(dst(1, m - 1, poly=p))),
                       bl.odd_butterfly(m - 1))
    m = n // 2
    if f == "DCT":
        kids = dsum(_leaf(dct(2, m, poly=p)), _leaf(dct(4, m, poly=p)))
    else:
        kids = dsum(_leaf(dst(4, m, poly=p)), _leaf(dst(2, m, poly=p)))
    return compose(Stride(n, m), kids, bl.even_butterfly(m))


def _fact_v2n_params(t):
    if not (_is_dtt(t) and _simple(t)) or t.type not in (1, 2):
        return []
    n = t.n
    if t.type == 1:
        return [None] if n % 2 == 0 and n >= 2 else []
    return [None] if n % 2 == 1 and n >= 3 else []


def _fact_v2n(t, _):
    n, p = t.n, t.poly
    if t.type == 1:
        m = n // 2
        if t.family == "DCT":
            kids = dsum(_leaf(dct(5, m, poly=p)), _leaf(dct(7, m, poly=p)))
        else:
            kids = dsum(_leaf(dst(7, m, poly=p)), _leaf(dst(5, m, poly=p)))
        return compose(Stride(n, m), kids, bl.even_butterfly(m))
    m = (n - 1) // 2
    if t.family == "DCT":
        kids = dsum(_leaf(dct(6, m + 1, poly=p)), _leaf(dct(8, m, poly=p)))
    else:
        kids = dsum(_leaf(dst(8, m + 1, poly=p)), _leaf(dst(6, m, poly=p)))
    return compose(OddStride(n, m + 1), kids, bl.odd_butterfly(m))


# V- and W-group by the factorization with T_(2m+1) -+ 1/2 -----------------

# (family, type) -> (extra size offset: n = 3m + offset, child size = m + child_offset,
#                    skew kind, skew r, skew first)
_FACT3 = {
    ("DCT", 7): (2, 1, ("DCT", 3), Fraction(1, 3), True),
    ("DST", 7): (1, 0, ("DST", 3), Fraction(1, 3), True),
    ("DCT", 8): (1, 0, ("DCT", 4), Fraction(1, 3), True),
    ("DST", 8): (2, 1, ("DST", 4), Fraction(1, 3), True),
    ("DCT", 5): (2, 1, ("DCT", 3), Fraction(2, 3), False),
    ("DST", 5): (1, 0, ("DST", 3), Fraction(2, 3), False),
    ("DCT", 6): (2, 1, ("DCT", 4), Fraction(2, 3), False),
    ("DST", 6): (1, 0, ("DST", 4), Fraction(2, 3), False),
}


def _fact3_params(group):
    def params(t):
        if not (_is_dtt(t) and _simple(t)) or t.group != group:
            return []
        off, child_off, *_ = _FACT3[(t.family, t.type)]
        if (t.n - off) % 3 or t.n < 2:
            return []
        m = (t.n - off) // 3
        if m + child_off < 1 or (off == 1 and m < 1):
            return []
        return [None]
    return params


def _fact3(t, _):
    off, child_off, (sf, st), sr, skew_first = _FACT3[(t.family, t.type)]
    m = (t.n - off) // 3
    child = TransformId(t.family, t.type, m + child_off, poly=t.poly)
    skew = TransformId(sf, st, 2 * m + 1, sr, poly=t.poly)
    parts = [("dtt", sf, st, 2 * m + 1, sr), ("dtt", t.family, t.type, m + child_off, None)]
    leaves = [_leaf(skew), _leaf(child)]
    if not skew_first:
        parts.reverse()
        leaves.reverse()
    b, perm = bl.split_base_change((t.family, t.type, None), t.n, tuple(parts))
    if t.group == "V":
        named = bl.p_perm(m) if off == 2 else bl.p_hat_perm(m)
    else:
        named = bl.q_perm(m) if off == 2 else bl.q_hat_perm(m)
    if named != perm:
        raise RuleError(f"output permutation mismatch for {t}")
    return compose(Permutation(named), dsum(*leaves), DenseBlock(b))


# general decompositions of U-, V- and W-group DTTs -----------------------

# (family, type) -> (module size offset a: n = k*m + a(k), child size offset)
def _ugroup_shape(t):
    return {("DCT", 1): (1, 1, 1), ("DST", 1): (-1, -1, 2), ("DCT", 2): (0, 0, 1),
            ("DST", 2): (0, 0, 1)}[(t.family, t.type)]


def _udecomp_params(t):
    if not (_is_dtt(t) and _simple(t)) or t.group != "U" or t.n > ENGINE_MAX:
        return []
    off, _, m_min = _ugroup_shape(t)
    out = []
    for k in range(2, t.n + 2):
        if (t.n - off) % k == 0:
            m = (t.n - off) // k
            if m >= m_min and k - 1 < t.n:
                out.append(k)
    return out


def _udecomp(t, k):
    off, child_off, _ = _ugroup_shape(t)
    m = (t.n - off) // k
    child = TransformId(t.family, t.type, m + child_off, poly=t.poly)
    sf, st = SKEW_BY_BASIS[t.basis]
    skews = [TransformId(sf, st, m, Fraction(i, k), poly=t.poly) for i in range(1, k)]
    angles = tuple(a for s in skews for a in skew_zero_angles(m, s.r if s.r is not None else HALF))
    parts = (("dtt", t.family, t.type, m + child_off, None),
             ("induced", t.basis, m, "U", k - 1, m, angles))
    b, perm = bl.split_base_change((t.family, t.type, None), t.n, parts)
    coarse = dst(1, k - 1, poly=True)
    induced = compose(dsum(*[_leaf(s) for s in skews]), kron_left(_leaf(coarse), m))
    return compose(Permutation(perm), dsum(_leaf(child), induced), DenseBlock(b))


# V group: n = k*m + j (+1 for DCT-7/DST-8), child size m (+1); coarse pDST-7_j
# W group: n = k*m + j (+1 for DCT-5/DCT-6), child size m (+1); coarse pDST-5_j
_ODD_PLUS = {("DCT", 7), ("DST", 8), ("DCT", 5), ("DCT", 6)}


def _odd_decomp_params(group):
    def params(t):
        if not (_is_dtt(t) and _simple(t)) or t.group != group or t.n > ENGINE_MAX:
            return []
        plus = 1 if (t.family, t.type) in _ODD_PLUS else 0
        out = []
        for k in range(3, 2 * t.n + 2, 2):
            j = (k - 1) // 2
            rest = t.n - plus - j
            if rest < 0 or rest % k:
                continue
            m = rest // k
            if m + plus < 1 or j >= t.n:
                continue
            out.append(k)
        return out
    return params


def _odd_decomp(t, k):
    plus = 1 if (t.family, t.type) in _ODD_PLUS else 0
    j = (k - 1) // 2
    m = (t.n - plus - j) // k
    child = TransformId(t.family, t.type, m + plus, poly=t.poly)
    sf, st = SKEW_BY_BASIS[t.basis]
    if t.group == "V":
        rs = [Fraction(2 * i + 1, k) for i in range(j)]
        coarse = dst(7, j, poly=True)
    else:
        rs = [Fraction(2 * i + 2, k) for i in range(j)]
        coarse = dst(5, j, poly=True)
    skews = [TransformId(sf, st, 2 * m + 1, ri, poly=t.poly) for ri in rs]
    angles = tuple(a for ri in rs for a in skew_zero_angles(2 * m + 1, ri))
    parts = (("dtt", t.family, t.type, m + plus, None),
             ("induced", t.basis, 2 * m + 1, "U", j, 2 * m + 1, angles))
    b, perm = bl.split_base_change((t.family, t.type, None), t.n, parts)
    induced = compose(dsum(*[_leaf(s) for s in skews]), kron_left(_leaf(coarse), 2 * m + 1))
    return compose(Permutation(perm), dsum(_leaf(child), induced), DenseBlock(b))


# DFT ---------------------------------------------------------------------

def _plain_dft(t):
    return t.family == "DFT" and t.type == 1 and t.r is None and t.a is None and not t.transposed


def _twiddles(n, k, m):
    w = cmath.exp(-2j * math.pi / n)
    return np.array([w ** (i * j) for i in range(k) for j in range(m)])


def _dft_ct(n, k):
    m = n // k
    child = TransformId("DFT", 1, m)
    return compose(Stride(n, m), kron_right(k, _leaf(child)), Diagonal(_twiddles(n, k, m)),
                   kron_left(_leaf(TransformId("DFT", 1, k)), m))


def _dft_radix2(t, _):
    n, m = t.n, t.n // 2
    return compose(Stride(n, m), kron_right(2, _leaf(TransformId("DFT", 1, m))),
                   Diagonal(_twiddles(n, 2, m)), kron_left(Butterfly(), m))


def _dft_twist_params(t):
    if t.family != "DFT" or t.transposed:
        return []
    return [] if _plain_dft(t) else [None]


def _dft_twist(t, _):
    n = t.n
    w = cmath.exp(-2j * math.pi / n)
    idx = np.arange(n)
    plain = _leaf(TransformId("DFT", 1, n))
    if t.a is not None:
        a = float(t.a)
        root = abs(a) ** (1.0 / n) * (cmath.exp(-1j * math.pi / n) if a < 0 else 1.0)
        return compose(plain, Diagonal(root ** idx))
    if t.r is not None:
        return compose(plain, Diagonal(w ** (float(t.r) * idx)))
    half = np.exp(-1j * math.pi * idx / n)
    if t.type == 2:
        return compose(Diagonal(half), plain)
    if t.type == 3:
        return compose(plain, Diagonal(half))
    return compose(Diagonal(cmath.exp(-0.5j * math.pi / n) * half), plain, Diagonal(half))


# rewrites ----------------------------------------------------------------

_DUAL_SOURCES = {("DST", 3), ("DST", 4), ("DST", 8), ("DCT", 8), ("DCT", 6), ("DST", 6)}


def _duality_params(t):
    if not (_is_dtt(t) and _simple(t)) or t.skew or t.poly:
        return []
    return [None] if (t.family, t.type) in _DUAL_SOURCES else []


def dual_of(t):
    fam, typ = DUAL[(t.family, t.type)]
    return TransformId(fam, typ, t.n, t.r, poly=t.poly)


def _duality(t, _):
    signs = np.array([(-1.0) ** k for k in range(t.n)])
    return compose(Diagonal(signs), _leaf(dual_of(t)), OppIdentity(t.n))


def _skew_translate_params(t):
    return [None] if _tgroup(t) and _simple(t) and t.skew and _x_applies(t) else []


def _x_block(kind, n, r):
    return _dense(x_matrix(kind, n, r), _skew_pattern(lambda s: x_matrix(kind, n, s), r))


def _skew_translate(t, _):
    return compose(_leaf(t.with_(r=None)), _x_block(_kind(t), t.n, t.r))


def _inverse_via_transpose_params(t):
    if not (_tgroup(t) and t.inverse and not t.transposed):
        return []
    if t.skew and not 0 < t.r < 1:
        return []
    return [None]


def _inverse_via_transpose(t, _):
    plain = TransformId(t.family, t.type, t.n, None, transposed=True)
    if not t.skew:
        return _leaf(plain)
    kind = _kind(t)
    delta = gram_diagonal(kind, t.n)

    def scaled_inverse(r):
        xinv = np.linalg.inv(x_matrix(kind, t.n, r))
        xinv = delta.reshape(-1, 1) * xinv / delta.reshape(1, -1)
        xinv[np.abs(xinv) < 1e-13] = 0.0
        return xinv

    return compose(_dense(scaled_inverse(t.r), _skew_pattern(scaled_inverse, t.r)), _leaf(plain))


def _upper_ones_block(n):
    return _dense(bl.upper_ones(n))


def _dct4_via_dct2_params(t):
    if not (_is_dtt(t) and t.family == "DCT" and t.type == 4) or t.transposed or t.poly:
        return []
    if t.inverse:
        if t.skew and not 0 < t.r < 1:
            return []
        return [None]
    return [None] if not t.skew else []


def _dct4_via_dct2(t, _):
    n = t.n
    r = _r(t)
    inv_half_d = 1.0 / (2.0 * bl.cos_scale(n, r))
    if t.inverse:
        middle = dct(3, n, t.r, inverse=True)
        return compose(_upper_ones_block(n), _leaf(middle), Diagonal(inv_half_d, t.skew))
    return compose(_upper_ones_block(n), _leaf(dct(2, n)), Diagonal(inv_half_d))


def _skew_dct4_via_dct2_params(t):
    if not (_is_dtt(t) and t.family == "DCT" and t.type == 4 and _simple(t)) or t.poly:
        return []
    return [None] if t.skew else []


def _skew_dct4_via_dct2(t, _):
    n = t.n
    scale = (1.0 / (2.0 * bl.cos_scale(n, HALF))).reshape(-1, 1)

    def fused(r):
        return scale * x_matrix("C4", n, r)

    return compose(_upper_ones_block(n), _leaf(dct(2, n)), _dense(fused(t.r), _skew_pattern(fused, t.r)))


_TRANSPOSE_PARTNER = {2: 3, 6: 7}


def _transpose_pair_params(t):
    if not (_is_dtt(t) and _simple(t)) or t.skew or t.poly:
        return []
    return [None] if t.type in _TRANSPOSE_PARTNER else []


def _transpose_pair(t, _):
    return _leaf(TransformId(t.family, _TRANSPOSE_PARTNER[t.type], t.n, transposed=True))


def _via_inverse_params(t):
    if not (_is_dtt(t) and _simple(t)) or t.skew or t.poly:
        return []
    return [None] if t.type in (2, 4) else []


def _via_inverse(t, _):
    typ = 3 if t.type == 2 else 4
    return _leaf(TransformId(t.family, typ, t.n, inverse=True))


def _transpose_params(t):
    return [None] if t.transposed else []


def _transpose_child(t, _):
    return _leaf(t.with_(transposed=False))


def _by_definition_params(t):
    if t.transposed or t.n > BY_DEFINITION_MAX or t.n < 1:
        return []
    return [None]


def _by_definition(t, _):
    m = reference(t)
    gen = ()
    if t.skew:
        other = t.with_(r=GENERIC_R if t.r != GENERIC_R else Fraction(2, 7))
        om = reference(other)
        diff = np.abs(om - m) > 1e-12
        gen = frozenset(zip(*np.nonzero(diff & ((np.abs(m) > 0) | (np.abs(om) > 0)))))
    if np.iscomplexobj(m):
        return DenseBlock(m, frozenset(gen))
    return _dense(m, gen)


# registry ----------------------------------------------------------------

def _base_params(t):
    return [None] if base_case(t) is not None else []


RULES = [
    Rule("base-case", _base_params, lambda t, _: base_case(t),
         "a registered base case (T-group sizes 1-3, DCT-3_5, W-group sizes 1-2, DFT sizes 1-2)"),
    Rule("fused-T-basis", _fused_params, _fused,
         "a T-group DTT with n = 2m (any kind) or n = 3m (DCT-3), m >= 2"),
    Rule("via-T-basis", _via_t_params, _via_t_basis, "a T-group DTT with n = km, k, m >= 2"),
    Rule("fact-U2n", _fact_u2n_params, _fact_u2n,
         "DCT-1/DST-1 of odd size >= 3 or DCT-2/DST-2 of even size"),
    Rule("fact-V2n", _fact_v2n_params, _fact_v2n,
         "DCT-1/DST-1 of even size or DCT-2/DST-2 of odd size >= 3"),
    Rule("fact-V", _fact3_params("V"), _fact3,
         "DCT-7/DST-8 of size 3m+2 or DST-7/DCT-8 of size 3m+1, m >= 1"),
    Rule("fact-W", _fact3_params("W"), _fact3,
         "DCT-5/DCT-6 of size 3m+2 or DST-5/DST-6 of size 3m+1, m >= 1"),
    Rule("u-group-decomp", _udecomp_params, _udecomp,
         "a U-group DTT with n = km+1 (DCT-1), km-1 (DST-1) or km (DCT-2/DST-2)"),
    Rule("v-group-decomp", _odd_decomp_params("V"), _odd_decomp,
         "a V-group DTT with n = km + (k-1)/2 (+1 for DCT-7/DST-8), k odd >= 3"),
    Rule("w-group-decomp", _odd_decomp_params("W"), _odd_decomp,
         "a W-group DTT with n = km + (k-1)/2 (+1 for DCT-5/DCT-6), k odd >= 3"),
    Rule("via-U-basis", _via_u_params, _via_u_basis, "a T-group DTT with n = km, k, m >= 2"),
    Rule("inverted", _inverted_params, _inverted,
         "an inverse T-group DTT with n = km, k, m >= 2 and 0 < r < 1"),
    Rule("twiddle", _twiddle_params, _twiddle, "a T-group DTT with n = km, k, m >= 2"),
    Rule("dft-radix2", lambda t: [2] if _plain_dft(t) and t.n % 2 == 0 and t.n >= 4 else [],
         _dft_radix2, "a plain DFT of even size >= 4"),
    Rule("dft-ct", lambda t: _divisors(t.n) if _plain_dft(t) else [],
         lambda t, k: _dft_ct(t.n, k), "a plain DFT of composite size n = km"),
    Rule("dft-twist", _dft_twist_params, _dft_twist, "a DFT of type 2-4 or a twisted DFT"),
    Rule("duality", _duality_params, _duality,
         "a non-skew, non-polynomial DST-3/4/6/8, DCT-6 or DCT-8"),
    Rule("transpose", _transpose_params, _transpose_child, "a transposed transform",
         post=transpose),
    Rule("transpose-pair", _transpose_pair_params, _transpose_pair,
         "a non-skew, non-polynomial DTT of type 2 or 6"),
    Rule("via-inverse", _via_inverse_params, _via_inverse,
         "a non-skew, non-polynomial DTT of type 2 or 4"),
    Rule("skew-translate", _skew_translate_params, _skew_translate, "a skew T-group DTT"),
    Rule("dct4-via-dct2", _dct4_via_dct2_params, _dct4_via_dct2,
         "a non-skew DCT-4 or an inverse DCT-4"),
    Rule("skew-dct4-via-dct2", _skew_dct4_via_dct2_params, _skew_dct4_via_dct2, "a skew DCT-4"),
    Rule("inverse-via-transpose", _inverse_via_transpose_params, _inverse_via_transpose,
         "an inverse T-group DTT with 0 < r < 1"),
    Rule("by-definition", _by_definition_params, _by_definition,
         f"a transform of size <= {BY_DEFINITION_MAX}"),
]

RULES_BY_TAG = {r.tag: r for r in RULES}
PRIORITY = {r.tag: i for i, r in enumerate(RULES)}

REWRITES = ("duality", "skew-translate", "dct4-via-dct2", "skew-dct4-via-dct2",
            "inverse-via-transpose", "transpose-pair", "via-inverse")


def get_rule(tag):
    try:
        return RULES_BY_TAG[tag]
    except KeyError:
        raise RuleError(f"unknown rule tag {tag!r}; known: {', '.join(sorted(RULES_BY_TAG))}") from None


def options(t):
    """All admissible (rule, param) pairs for ``t`` in priority order."""
    out = []
    for rule in RULES:
        for p in rule.params(t):
            out.append((rule, p))
    return out


def expand(tag, t, k=None):
    return get_rule(tag).expand(t, k)


def rewrite(identity, t):
    """Apply a rewrite identity by tag ("duality", "skew-translate", "dct4-via-dct2", ...)."""
    if identity not in REWRITES:
        raise RuleError(f"unknown rewrite identity {identity!r}")
    if identity == "duality" and _is_dtt(t) and (t.family, t.type) in DUAL:
        if DUAL[(t.family, t.type)] == (t.family, t.type):
            raise RuleError(f"{t} is self-dual; duality does not pair it with another DTT")
        if t.skew or t.poly or not _simple(t):
            raise RuleError(f"duality is defined for plain non-skew DTTs, not {t}")
        return _duality(t, None)
    return expand(identity, t)
