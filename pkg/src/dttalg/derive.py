"""Exact derivation of base change matrices and output permutations.

A polynomial transform factorization is fixed by two things: the
coordinates of the original basis in the bases of the smaller modules
(the base change B) and the order in which the smaller transforms
produce the spectrum (the permutation P).  Both are computed here with
rational arithmetic, so rule constructors can either use the result
directly or be checked against it.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chebyshev import ExactPoly, cheb


def graded_coords(p, basis):
    """Coordinates of ``p`` in a basis holding one polynomial of each degree 0..n-1."""
    n = len(basis)
    index_of = {b.degree: i for i, b in enumerate(basis)}
    if sorted(index_of) != list(range(n)):
        raise ValueError("basis must contain exactly one polynomial per degree 0..n-1")
    rem = list(p.coeffs)
    if len(rem) > n:
        raise ValueError(f"degree {len(rem) - 1} does not fit a basis of size {n}")
    out = [Fraction(0)] * n
    for d in range(len(rem) - 1, -1, -1):
        c = rem[d]
        if c == 0:
            continue
        b = basis[index_of[d]]
        f = c / b.coeffs[d]
        out[index_of[d]] = f
        for i, bc in enumerate(b.coeffs):
            rem[i] -= f * bc
    return out


def cheb_basis(kind, n):
    return [cheb(kind, i) for i in range(n)]


def product_basis(fine, coarse, inner):
    """(f_j * c_i(inner) | i outer, j inner): the basis of an induced module."""
    out = []
    for c in coarse:
        ci = c.compose(inner)
        out.extend(f * ci for f in fine)
    return out


def base_change(basis, targets):
    """Stack of coordinate blocks: column l holds, for each target (modulus, basis),
    the coordinates of ``basis[l] mod modulus``.  ``modulus`` None means no reduction.
    """
    cols = []
    for b in basis:
        col = []
        for modulus, tb in targets:
            r = b if modulus is None else b % modulus
            col.extend(graded_coords(r, tb))
        cols.append(col)
    rows = len(cols[0]) if cols else 0
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


def to_float(mat):
    return np.array([[float(v) for v in row] for row in mat], dtype=float).reshape(len(mat), -1)


def zero_permutation(target, blocks):
    """Permutation map f with (P x)_i = x[f(i)] sending the concatenated block
    zero angles to the target order.  Angles are exact rationals in [0, 1]."""
    concat = [a for blk in blocks for a in blk]
    if sorted(concat) != sorted(target):
        raise ValueError("block zeros do not match the target zeros")
    pos = {}
    for i, a in enumerate(concat):
        if a in pos:
            raise ValueError(f"repeated zero angle {a}")
        pos[a] = i
    return tuple(pos[a] for a in target)


# module polynomials --------------------------------------------------------

def module_poly(family, type_, n):
    """The polynomial p(x) of the DTT's module C[x]/p(x), n = transform size."""
    x = ExactPoly.x()
    one = ExactPoly.constant(1)
    t = type_
    if t in (3, 4):
        return cheb("T", n)
    if family == "DCT":
        if t == 1:
            return (x * x - one) * cheb("U", n - 2)
        if t == 2:
            return (x - one) * cheb("U", n - 1)
        if t in (5, 6):
            return (x - one) * cheb("W", n - 1)
        if t == 7:
            return (x + one) * cheb("V", n - 1)
        return cheb("V", n)
    if t == 1:
        return cheb("U", n)
    if t == 2:
        return (x + one) * cheb("U", n - 1)
    if t in (5, 6):
        return cheb("W", n)
    if t == 7:
        return cheb("V", n)
    return (x + one) * cheb("V", n - 1)


@lru_cache(maxsize=None)
def t_power(m):
    return cheb("T", m)


# fast numeric path ---------------------------------------------------------
#
# The coordinates of (b_l mod q) in a basis c of C[x]/q solve
# V_c(beta) y = b_l(beta), where beta are the zeros of q.  Evaluating at
# the known zeros turns every base change into a small linear solve; the
# entries are then snapped to nearby small rationals.

def basis_values(kind, n, angles):
    """Matrix [C_j(cos(q_k pi))]_{k, j} for the first n polynomials of a kind."""
    from .chebyshev import cheb_values
    xs = [np.cos(np.pi * float(q)) for q in angles]
    return np.array([cheb_values(kind, n, x) for x in xs], dtype=float).reshape(len(xs), n)


def product_values(kind, m, coarse_kind, k, inner, angles):
    """Values of (C_j * D_i(T_inner) | i outer, j inner) at cos(q pi)."""
    fine = basis_values(kind, m, angles)
    inner_angles = [q * inner for q in angles]
    coarse = basis_values(coarse_kind, k, inner_angles)
    return np.einsum("pi,pj->pij", coarse, fine).reshape(len(angles), k * m)


def snap(mat, tol=1e-9, max_den=64):
    """Round entries to small rationals when they are within ``tol``."""
    out = np.array(mat, dtype=float)
    flat = out.ravel()
    idx = np.nonzero(flat)[0]
    if idx.size:
        v = flat[idx].reshape(-1, 1)
        dens = np.arange(1, max_den + 1, dtype=float)
        approx = np.round(v * dens) / dens
        close = np.abs(approx - v) < tol
        hit = close.any(axis=1)
        first = close.argmax(axis=1)
        flat[idx[hit]] = approx[hit, first[hit]]
    return flat.reshape(out.shape)


def numeric_base_change(source, blocks):
    """Base change B with column l = stacked coordinates of source_l in each block.

    ``source(angles)`` returns the values of the source basis at the given
    zero angles; each block is (angles of its module zeros, values matrix of
    its basis at those angles).
    """
    rows = []
    for angles, vals in blocks:
        rows.append(np.linalg.solve(vals, source(angles)))
    return snap(np.vstack(rows))
