"""Structured sparse-matrix formulas and their interpreters.

A formula is an immutable tree of matrix constructors.  Four
interpreters walk it: ``apply`` (matrix-vector product), ``densify``,
``transpose`` and ``cost`` (the (adds, mults, two-power mults) triple).
``Transform`` leaves stand for a smaller transform that a rule left
unexpanded; ``apply`` and ``densify`` accept a resolver for them.

Constants that are generic in a skew parameter can be flagged so that
``cost`` prices them as general multiplications whatever their value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import sparse


class FormulaError(ValueError):
    pass


class CostTriple(NamedTuple):
    adds: int = 0
    mults: int = 0
    two_power_mults: int = 0

    @property
    def total(self):
        return self.adds + self.mults + self.two_power_mults

    def __add__(self, other):
        return CostTriple(self.adds + other.adds, self.mults + other.mults,
                          self.two_power_mults + other.two_power_mults)

    def scale(self, k):
        return CostTriple(k * self.adds, k * self.mults, k * self.two_power_mults)

    def __str__(self):
        return f"({self.adds}, {self.mults}, {self.two_power_mults})"


ZERO_COST = CostTriple()


class Formula:
    """Base class; subclasses define ``rows`` and ``cols``."""

    rows: int
    cols: int

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __str__(self):
        from .sexpr import dumps
        return dumps(self)

    def __matmul__(self, other):
        return compose(self, other)


@dataclass(frozen=True, eq=False)
class Identity(Formula):
    n: int

    def __post_init__(self):
        _positive(self.n, "Identity")

    rows = property(lambda self: self.n)
    cols = rows


@dataclass(frozen=True, eq=False)
class OppIdentity(Formula):
    n: int

    def __post_init__(self):
        _positive(self.n, "OppIdentity")

    rows = property(lambda self: self.n)
    cols = rows


@dataclass(frozen=True, eq=False)
class Butterfly(Formula):
    rows = 2
    cols = 2


@dataclass(frozen=True, eq=False)
class Diagonal(Formula):
    """diag(entries); ``generic`` marks entries priced as mults regardless of value."""

    entries: np.ndarray
    generic: tuple = ()

    def __post_init__(self):
        e = np.asarray(self.entries)
        if e.ndim != 1 or e.size == 0:
            raise FormulaError("Diagonal needs a nonempty 1-D sequence")
        e = e.astype(complex if np.iscomplexobj(e) else float)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        g = self.generic
        if g is True:
            g = (True,) * e.size
        elif not g:
            g = (False,) * e.size
        g = tuple(bool(v) for v in g)
        if len(g) != e.size:
            raise FormulaError("generic mask length mismatch")
        object.__setattr__(self, "generic", g)

    rows = property(lambda self: self.entries.size)
    cols = rows


@dataclass(frozen=True, eq=False)
class Permutation(Formula):
    """Row i holds a 1 at column map[i], so (P x)_i = x[map[i]]."""

    map: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        if not m or sorted(m) != list(range(len(m))):
            raise FormulaError(f"Permutation map is not a bijection on 0..{len(m) - 1}")
        object.__setattr__(self, "map", m)

    rows = property(lambda self: len(self.map))
    cols = rows


@dataclass(frozen=True, eq=False)
class Stride(Formula):
    """L_m^n: index i2*(n/m) + i1 is sent to i1*m + i2."""

    n: int
    m: int

    def __post_init__(self):
        _positive(self.n, "Stride")
        if self.m < 1 or self.n % self.m:
            raise FormulaError(f"Stride({self.n},{self.m}) needs m | n")

    rows = property(lambda self: self.n)
    cols = rows

    @property
    def map(self):
        n, m = self.n, self.m
        k = n // m
        return tuple((i % k) * m + i // k for i in range(n))


@dataclass(frozen=True, eq=False)
class OddStride(Formula):
    """Odd stride permutation: i is sent to i*m mod n, for m | n+1."""

    n: int
    m: int

    def __post_init__(self):
        _positive(self.n, "OddStride")
        if self.m < 1 or (self.n + 1) % self.m:
            raise FormulaError(f"OddStride({self.n},{self.m}) needs m | n+1")

    rows = property(lambda self: self.n)
    cols = rows

    @property
    def map(self):
        return tuple((i * self.m) % self.n for i in range(self.n))


@dataclass(frozen=True, eq=False)
class DenseBlock(Formula):
    """Unstructured block, stored sparse.  ``generic`` holds (row, col) pairs."""

    matrix: sparse.csr_matrix
    generic: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        m = self.matrix
        if sparse.issparse(m):
            m = sparse.csr_matrix(m)
        else:
            arr = np.asarray(m)
            if arr.ndim != 2:
                raise FormulaError("DenseBlock needs a 2-D matrix")
            m = sparse.csr_matrix(arr)
        m.eliminate_zeros()
        m.sort_indices()
        object.__setattr__(self, "matrix", m)
        g = self.generic
        if g is True:
            coo = m.tocoo()
            g = zip(coo.row.tolist(), coo.col.tolist())
        object.__setattr__(self, "generic", frozenset((int(i), int(j)) for i, j in g))

    rows = property(lambda self: self.matrix.shape[0])
    cols = property(lambda self: self.matrix.shape[1])


@dataclass(frozen=True, eq=False)
class Compose(Formula):
    factors: tuple

    def __post_init__(self):
        fs = tuple(self.factors)
        if not fs:
            raise FormulaError("Compose needs at least one factor")
        for i in range(len(fs) - 1):
            if fs[i].cols != fs[i + 1].rows:
                raise FormulaError(
                    f"Compose factor {i} has {fs[i].cols} cols but factor {i + 1} has "
                    f"{fs[i + 1].rows} rows: {_short(fs[i])} * {_short(fs[i + 1])}")
        object.__setattr__(self, "factors", fs)

    rows = property(lambda self: self.factors[0].rows)
    cols = property(lambda self: self.factors[-1].cols)


@dataclass(frozen=True, eq=False)
class DirectSum(Formula):
    blocks: tuple

    def __post_init__(self):
        bs = tuple(self.blocks)
        if not bs:
            raise FormulaError("DirectSum needs at least one block")
        object.__setattr__(self, "blocks", bs)

    rows = property(lambda self: sum(b.rows for b in self.blocks))
    cols = property(lambda self: sum(b.cols for b in self.blocks))


@dataclass(frozen=True, eq=False)
class KronLeft(Formula):
    """A (x) I_m."""

    a: Formula
    m: int

    def __post_init__(self):
        _positive(self.m, "KronLeft")

    rows = property(lambda self: self.a.rows * self.m)
    cols = property(lambda self: self.a.cols * self.m)


@dataclass(frozen=True, eq=False)
class KronRight(Formula):
    """I_k (x) B."""

    k: int
    b: Formula

    def __post_init__(self):
        _positive(self.k, "KronRight")

    rows = property(lambda self: self.b.rows * self.k)
    cols = property(lambda self: self.b.cols * self.k)


@dataclass(frozen=True, eq=False)
class Transform(Formula):
    """Unexpanded transform leaf."""

    tid: object

    rows = property(lambda self: self.tid.n)
    cols = rows


def _positive(n, what):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise FormulaError(f"{what} needs a positive size, got {n!r}")


def _short(f):
    text = str(f)
    return text if len(text) < 80 else text[:77] + "..."


# smart constructors --------------------------------------------------------

def compose(*factors):
    """Compose, flattening nested products and dropping identities."""
    out = []
    for f in factors:
        if isinstance(f, Compose):
            out.extend(f.factors)
        else:
            out.append(f)
    for i in range(len(out) - 1):
        if out[i].cols != out[i + 1].rows:
            raise FormulaError(f"compose: factor {i} has {out[i].cols} cols but factor {i + 1} "
                               f"has {out[i + 1].rows} rows")
    kept = [f for f in out if not isinstance(f, Identity)]
    if not kept:
        return out[0]
    return kept[0] if len(kept) == 1 else Compose(tuple(kept))


def dsum(*blocks):
    """Direct sum; zero-size transform leaves are dropped."""
    bs = [b for b in blocks if not (isinstance(b, Transform) and b.tid.n == 0)]
    flat = []
    for b in bs:
        flat.extend(b.blocks if isinstance(b, DirectSum) else [b])
    if len(flat) == 1:
        return flat[0]
    return DirectSum(tuple(flat))


def kron_left(a, m):
    if m == 1:
        return a
    if isinstance(a, Identity):
        return Identity(a.n * m)
    return KronLeft(a, m)


def kron_right(k, b):
    if k == 1:
        return b
    if isinstance(b, Identity):
        return Identity(b.n * k)
    return KronRight(k, b)


def dense(matrix, generic=()):
    return DenseBlock(matrix, frozenset(generic) if generic is not True else True)


# interpreters ------------------------------------------------------------

def perm_map(f):
    if isinstance(f, (Permutation, Stride, OddStride)):
        return f.map
    if isinstance(f, OppIdentity):
        return tuple(range(f.n - 1, -1, -1))
    if isinstance(f, Identity):
        return tuple(range(f.n))
    raise TypeError(f"not a permutation node: {type(f).__name__}")


def apply(f, x, resolve=None):
    """Compute densify(f) @ x structurally.  x may be a vector or a matrix of columns."""
    x = np.asarray(x)
    vec = x.ndim == 1
    xx = x.reshape(-1, 1) if vec else x
    if xx.shape[0] != f.cols:
        raise FormulaError(f"input of length {xx.shape[0]} does not match {f.cols} cols of {_short(f)}")
    y = _apply(f, xx, resolve)
    return y.ravel() if vec else y


def _apply(f, x, resolve):
    if x.shape[0] != f.cols:
        raise FormulaError(f"dimension mismatch at node {_short(f)}: got {x.shape[0]}, want {f.cols}")
    if isinstance(f, Identity):
        return x
    if isinstance(f, (OppIdentity, Permutation, Stride, OddStride)):
        return x[list(perm_map(f))]
    if isinstance(f, Butterfly):
        return np.vstack((x[0:1] + x[1:2], x[0:1] - x[1:2]))
    if isinstance(f, Diagonal):
        return f.entries.reshape(-1, 1) * x
    if isinstance(f, DenseBlock):
        return np.asarray(f.matrix @ x)
    if isinstance(f, Compose):
        for g in reversed(f.factors):
            x = _apply(g, x, resolve)
        return x
    if isinstance(f, DirectSum):
        out, pos = [], 0
        for b in f.blocks:
            out.append(_apply(b, x[pos:pos + b.cols], resolve))
            pos += b.cols
        return np.vstack(out)
    if isinstance(f, KronLeft):
        batch = x.shape[1]
        inner = x.reshape(f.a.cols, f.m * batch)
        return _apply(f.a, inner, resolve).reshape(f.a.rows * f.m, batch)
    if isinstance(f, KronRight):
        batch = x.shape[1]
        b = f.b
        inner = x.reshape(f.k, b.cols, batch).transpose(1, 0, 2).reshape(b.cols, f.k * batch)
        y = _apply(b, inner, resolve).reshape(b.rows, f.k, batch).transpose(1, 0, 2)
        return y.reshape(b.rows * f.k, batch)
    if isinstance(f, Transform):
        if resolve is None:
            raise FormulaError(f"unresolved transform leaf {f.tid}")
        return _apply(resolve(f.tid), x, resolve)
    raise TypeError(f"unknown formula node {type(f).__name__}")


def densify(f, resolve=None):
    """Dense matrix of a formula.  ``resolve`` maps TransformId to a Formula or array."""
    if isinstance(f, Identity):
        return np.eye(f.n)
    if isinstance(f, (OppIdentity, Permutation, Stride, OddStride)):
        m = np.zeros((f.rows, f.cols))
        m[np.arange(f.rows), list(perm_map(f))] = 1.0
        return m
    if isinstance(f, Butterfly):
        return np.array([[1.0, 1.0], [1.0, -1.0]])
    if isinstance(f, Diagonal):
        return np.diag(f.entries)
    if isinstance(f, DenseBlock):
        return f.matrix.toarray()
    if isinstance(f, Compose):
        out = densify(f.factors[-1], resolve)
        for g in reversed(f.factors[:-1]):
            out = _left_mul(g, out, resolve)
        return out
    if isinstance(f, DirectSum):
        mats = [densify(b, resolve) for b in f.blocks]
        dtype = complex if any(np.iscomplexobj(m) for m in mats) else float
        out = np.zeros((f.rows, f.cols), dtype=dtype)
        r = c = 0
        for m in mats:
            out[r:r + m.shape[0], c:c + m.shape[1]] = m
            r += m.shape[0]
            c += m.shape[1]
        return out
    if isinstance(f, KronLeft):
        return np.kron(densify(f.a, resolve), np.eye(f.m))
    if isinstance(f, KronRight):
        return np.kron(np.eye(f.k), densify(f.b, resolve))
    if isinstance(f, Transform):
        if resolve is None:
            raise FormulaError(f"unresolved transform leaf {f.tid}")
        g = resolve(f.tid)
        return np.asarray(g) if isinstance(g, np.ndarray) else densify(g, resolve)
    raise TypeError(f"unknown formula node {type(f).__name__}")


def _left_mul(g, m, resolve):
    return _apply(g, m, _dense_resolver(resolve))


def _dense_resolver(resolve):
    if resolve is None:
        return None

    def inner(tid):
        g = resolve(tid)
        return DenseBlock(g) if isinstance(g, np.ndarray) else g
    return inner


def transpose(f):
    """Structural transpose; densify(transpose(f)) == densify(f).T."""
    if isinstance(f, (Identity, Butterfly, Diagonal, OppIdentity)):
        return f
    if isinstance(f, Stride):
        return Stride(f.n, f.n // f.m)
    if isinstance(f, OddStride):
        return OddStride(f.n, (f.n + 1) // f.m)
    if isinstance(f, Permutation):
        inv = [0] * len(f.map)
        for i, j in enumerate(f.map):
            inv[j] = i
        return Permutation(tuple(inv))
    if isinstance(f, DenseBlock):
        return DenseBlock(f.matrix.T.tocsr(), frozenset((j, i) for i, j in f.generic))
    if isinstance(f, Compose):
        return Compose(tuple(transpose(g) for g in reversed(f.factors)))
    if isinstance(f, DirectSum):
        return DirectSum(tuple(transpose(b) for b in f.blocks))
    if isinstance(f, KronLeft):
        return KronLeft(transpose(f.a), f.m)
    if isinstance(f, KronRight):
        return KronRight(f.k, transpose(f.b))
    if isinstance(f, Transform):
        return Transform(f.tid.with_(transposed=not f.tid.transposed))
    raise TypeError(f"unknown formula node {type(f).__name__}")


def price(value, generic=False):
    """Cost of multiplying by one constant."""
    if generic:
        return CostTriple(0, 1, 0)
    if value == 0:
        return ZERO_COST
    v = complex(value)
    if v.imag != 0:
        return CostTriple(0, 1, 0)
    a = abs(v.real)
    if a == 1.0:
        return ZERO_COST
    mant, _ = math.frexp(a)
    if mant == 0.5:
        return CostTriple(0, 0, 1)
    return CostTriple(0, 1, 0)


def cost(f, leaf_cost=None):
    """Arithmetic cost triple.  ``leaf_cost`` prices Transform leaves."""
    if isinstance(f, (Identity, OppIdentity, Permutation, Stride, OddStride)):
        return ZERO_COST
    if isinstance(f, Butterfly):
        return CostTriple(2, 0, 0)
    if isinstance(f, Diagonal):
        total = ZERO_COST
        for e, g in zip(f.entries.tolist(), f.generic):
            total = total + price(e, g)
        return total
    if isinstance(f, DenseBlock):
        # generic positions count even where this particular value is 0
        m = f.matrix
        coo = m.tocoo()
        stored = list(zip(coo.row.tolist(), coo.col.tolist()))
        extra = f.generic.difference(stored)
        per_row = np.diff(m.indptr)
        for i, _ in extra:
            per_row[i] += 1
        adds = int(np.sum(np.maximum(per_row - 1, 0)))
        total = CostTriple(adds, len(extra), 0)
        for (i, j), v in zip(stored, coo.data.tolist()):
            total = total + price(v, (i, j) in f.generic)
        return total
    if isinstance(f, (Compose, DirectSum)):
        parts = f.factors if isinstance(f, Compose) else f.blocks
        total = ZERO_COST
        for g in parts:
            total = total + cost(g, leaf_cost)
        return total
    if isinstance(f, KronLeft):
        return cost(f.a, leaf_cost).scale(f.m)
    if isinstance(f, KronRight):
        return cost(f.b, leaf_cost).scale(f.k)
    if isinstance(f, Transform):
        if leaf_cost is None:
            raise FormulaError(f"cannot price unresolved transform leaf {f.tid}")
        return leaf_cost(f.tid)
    raise TypeError(f"unknown formula node {type(f).__name__}")


def leaves(f):
    """Transform leaves in left-to-right order."""
    if isinstance(f, Transform):
        return [f.tid]
    if isinstance(f, Compose):
        return [t for g in f.factors for t in leaves(g)]
    if isinstance(f, DirectSum):
        return [t for g in f.blocks for t in leaves(g)]
    if isinstance(f, KronLeft):
        return leaves(f.a)
    if isinstance(f, KronRight):
        return leaves(f.b)
    return []


def substitute(f, mapping):
    """Replace Transform leaves using ``mapping(tid) -> Formula``."""
    if isinstance(f, Transform):
        return mapping(f.tid)
    if isinstance(f, Compose):
        return Compose(tuple(substitute(g, mapping) for g in f.factors))
    if isinstance(f, DirectSum):
        return DirectSum(tuple(substitute(g, mapping) for g in f.blocks))
    if isinstance(f, KronLeft):
        return KronLeft(substitute(f.a, mapping), f.m)
    if isinstance(f, KronRight):
        return KronRight(f.k, substitute(f.b, mapping))
    return f


def structurally_equal(f, g):
    from .sexpr import dumps
    return dumps(f) == dumps(g)
