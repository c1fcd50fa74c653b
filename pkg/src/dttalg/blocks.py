"""Named sparse building blocks used by the rule catalog.

Structured blocks (permutations, the DCT-3 base change factors, fused
first stages) are written out explicitly.  Base changes without a small
closed form are produced by the numeric derivation in ``derive`` and
wrapped as DenseBlocks.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import sparse

from . import derive
from .chebyshev import cos_pi, sin_pi, skew_zero_angles
from .formula import (DenseBlock, Diagonal, Identity, OppIdentity, Permutation, Stride,
                      compose, dsum, transpose)
from .transforms import HALF, _DTT_MODEL, zero_angles


# permutations -------------------------------------------------------------

def alternating_opp(k, count):
    """I_k + J_k + I_k + ... with ``count`` blocks."""
    return dsum(*[Identity(k) if i % 2 == 0 else OppIdentity(k) for i in range(count)])


def spectrum_perm(n, m):
    """K_m^n: gathers the outputs of m-fold split into the skew-zero order."""
    k = n // m
    if k == 1:
        return Identity(n)
    return compose(alternating_opp(k, m), Stride(n, m))


def spectrum_perm_inv(n, m):
    return transpose(spectrum_perm(n, m))


def p_perm(m):
    """P_m^(3m+2) as an index map; leaves the last point fixed."""
    out = []
    for i in range(3 * m + 2):
        i1, i2 = i % 3, i // 3
        out.append({0: 2 * i2, 1: i2 + 2 * m + 1, 2: 2 * i2 + 1}[i1])
    return tuple(out)


def p_hat_perm(m):
    return p_perm(m)[:3 * m + 1]


def q_perm(m):
    """Q_m^(3m+2) as an index map; leaves 0 fixed."""
    out = []
    for i in range(3 * m + 2):
        i1, i2 = i % 3, i // 3
        out.append({0: i2, 1: 2 * i2 + m + 1, 2: 2 * i2 + m + 2}[i1])
    return tuple(out)


def q_hat_perm(m):
    out = []
    for i in range(3 * m + 1):
        i1, i2 = i % 3, i // 3
        out.append({0: 2 * i2 + m, 1: 2 * i2 + m + 1, 2: i2}[i1])
    return tuple(out)


# small dense pieces -------------------------------------------------------

def z_shift(m):
    """Z_m: row i >= 1 has a one at column m - i, row 0 is empty."""
    z = np.zeros((m, m))
    for i in range(1, m):
        z[i, m - i] = 1.0
    return z


def z_bar(m):
    """J_(m-1) + 0: row i < m-1 has a one at column m - 2 - i."""
    z = np.zeros((m, m))
    for i in range(m - 1):
        z[i, m - 2 - i] = 1.0
    return z


def upper_ones(k):
    """S_k: ones on the diagonal and the first superdiagonal."""
    return np.eye(k) + np.eye(k, k=1)


def even_butterfly(m):
    """B_2m = [[I, J], [I, -J]]."""
    i, j = np.eye(m), np.fliplr(np.eye(m))
    return DenseBlock(np.block([[i, j], [i, -j]]))


def odd_butterfly(m):
    """B_(2m+1) = [[I, 0, J], [0, 1, 0], [I, 0, -J]]."""
    n = 2 * m + 1
    b = np.zeros((n, n))
    b[m, m] = 1.0
    for i in range(m):
        b[i, i] = b[i, n - 1 - i] = 1.0
        b[m + 1 + i, i] = 1.0
        b[m + 1 + i, n - 1 - i] = -1.0
    return DenseBlock(b)


# DCT-3 base change: B = D * G_0 * ... * G_(k-2) --------------------------

def c3_scaling(k, m):
    """D = I_m + (I_(k-1) (x) diag(1, 2, ..., 2))."""
    d = np.ones(k * m)
    for b in range(1, k):
        d[b * m + 1:(b + 1) * m] = 2.0
    return Diagonal(d)


def c3_stage(k, m, b):
    """G_b = I - Z_m placed at block (b, b+1)."""
    n = k * m
    rows = list(range(n)) + [b * m + i for i in range(1, m)]
    cols = list(range(n)) + [(b + 1) * m + m - i for i in range(1, m)]
    vals = [1.0] * n + [-1.0] * (m - 1)
    return DenseBlock(sparse.csr_matrix((vals, (rows, cols)), shape=(n, n)))


def c3_base_change(k, m):
    return compose(c3_scaling(k, m), *[c3_stage(k, m, b) for b in range(k - 1)])


def c3_base_change_inv_matrix(k, m):
    """C^(-1) = block upper bidiagonal [[I, Z], [I, Z], ...] times D^(-1)."""
    n = k * m
    c = np.eye(n)
    for b in range(k - 1):
        c[b * m:(b + 1) * m, (b + 1) * m:(b + 2) * m] = z_shift(m)
    return c


# fused first stages for radix 2 -----------------------------------------

def fused_radix2(kind, m, r):
    """Second factor of the fused radix-2 step: [[I, A], [0, c * E]]."""
    c = cos_pi(Fraction(r) / 2)
    generic = r != HALF
    n = 2 * m
    if kind == "C3":
        top = [(i, m - i, -1.0) for i in range(1, m)]
        low = [c] + [2 * c] * (m - 1)
    else:
        sign = {"S3": 1.0, "C4": -1.0, "S4": 1.0}[kind]
        if kind == "S3":
            top = [(i, m - 2 - i, sign) for i in range(m - 1)]
        else:
            top = [(i, m - 1 - i, sign) for i in range(m)]
        low = [2 * c] * m
    entries = [(i, i, 1.0) for i in range(m)] + [(i, m + j, v) for i, j, v in top]
    entries += [(m + i, m + i, v) for i, v in enumerate(low)]
    rows, cols, vals = zip(*entries)
    mat = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    gen = [(m + i, m + i) for i in range(m)] if generic else []
    return DenseBlock(mat, frozenset(gen))


# engine-backed base changes ---------------------------------------------

def _basis(family, type_):
    return _DTT_MODEL[(family, type_)][0]


@lru_cache(maxsize=None)
def tgroup_base_change(kind, k, m, coarse_basis):
    """B for the T-group split DTT_km = K (+ DTT_m(r_i)) (coarse_k (x) I_m) B.

    ``coarse_basis`` is "T" (coarse DCT-3) or "U" (coarse pDST-3).  B does
    not depend on r, so it is derived at r = 1/3.
    """
    n = k * m
    basis = {"C3": "T", "S3": "U", "C4": "V", "S4": "W"}[kind]
    ang = skew_zero_angles(n, Fraction(1, 3))
    src = derive.basis_values(basis, n, ang)
    vals = derive.product_values(basis, m, coarse_basis, k, m, ang)
    return derive.snap(np.linalg.solve(vals, src))


@lru_cache(maxsize=None)
def split_base_change(parent, n, parts):
    """Base change and output permutation for a split along a factorization.

    ``parent`` is (family, type, r); ``parts`` is a tuple of either
    ("dtt", family, type, size, r) for a smaller DTT block or
    ("induced", basis, m, coarse_basis, j, inner, angles) for the block
    C_l * D_i(T_inner) evaluated over the given zero angles.
    Returns (B as ndarray, permutation map).
    """
    family, type_, r = parent
    target = zero_angles(family, type_, n, r)
    src_basis = _basis(family, type_)
    blocks, orders = [], []
    for part in parts:
        if part[0] == "dtt":
            _, fam, t, size, rr = part
            ang = zero_angles(fam, t, size, rr)
            vals = derive.basis_values(_basis(fam, t), size, ang)
        else:
            _, basis, m, coarse_basis, j, inner, ang = part
            vals = derive.product_values(basis, m, coarse_basis, j, inner, ang)
        blocks.append((ang, vals))
        orders.append(list(ang))
    b = derive.numeric_base_change(lambda a: derive.basis_values(src_basis, n, a), blocks)
    perm = derive.zero_permutation(list(target), orders)
    return b, perm


def x_shaped(kind, n, r):
    from .transforms import x_matrix
    return x_matrix(kind, n, r)


def cos_scale(n, r):
    """D_n(r) = diag(cos(r_l pi / 2)) over the skew zeros r_l."""
    return np.array([cos_pi(q / 2) for q in skew_zero_angles(n, r)])

