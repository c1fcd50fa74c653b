"""Parenthesized prefix text format for formulas.

    (compose (stride 4 2) (dsum (I 2) (F2)))

Scalars are printed with 17 significant digits; a trailing ``*`` marks a
constant that is priced generically.  Dense blocks list their nonzeros
as ``row:col:value`` triples.
"""
from __future__ import annotations

import re
from fractions import Fraction

import numpy as np
from scipy import sparse

from .formula import (Butterfly, Compose, DenseBlock, Diagonal, DirectSum, Identity,
                      KronLeft, KronRight, OddStride, OppIdentity, Permutation, Stride,
                      Transform)


def _num(v):
    v = complex(v) if np.iscomplexobj(v) else float(v)
    if isinstance(v, complex):
        if v.imag == 0:
            return f"{v.real:.17g}+0j"
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return f"{v:.17g}"


def _tid_text(t):
    parts = [t.family, str(t.type), str(t.n)]
    if t.r is not None:
        parts.append(f"r={t.r}")
    if t.a is not None:
        parts.append(f"a={t.a}")
    for flag, name in ((t.poly, "poly"), (t.inverse, "inv"), (t.transposed, "t")):
        if flag:
            parts.append(name)
    return " ".join(parts)


def dumps(f):
    if isinstance(f, Identity):
        return f"(I {f.n})"
    if isinstance(f, OppIdentity):
        return f"(J {f.n})"
    if isinstance(f, Butterfly):
        return "(F2)"
    if isinstance(f, Diagonal):
        items = [_num(e) + ("*" if g else "") for e, g in zip(f.entries, f.generic)]
        return "(diag " + " ".join(items) + ")"
    if isinstance(f, Permutation):
        return "(perm " + " ".join(map(str, f.map)) + ")"
    if isinstance(f, Stride):
        return f"(stride {f.n} {f.m})"
    if isinstance(f, OddStride):
        return f"(oddstride {f.n} {f.m})"
    if isinstance(f, DenseBlock):
        coo = f.matrix.tocoo()
        entries = list(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
        stored = {(i, j) for i, j, _ in entries}
        entries += [(i, j, 0.0) for i, j in f.generic if (i, j) not in stored]
        items = []
        for i, j, v in sorted(entries):
            items.append(f"{i}:{j}:{_num(v)}" + ("*" if (i, j) in f.generic else ""))
        body = " ".join([str(f.rows), str(f.cols)] + items)
        return f"(dense {body})"
    if isinstance(f, Compose):
        return "(compose " + " ".join(dumps(g) for g in f.factors) + ")"
    if isinstance(f, DirectSum):
        return "(dsum " + " ".join(dumps(g) for g in f.blocks) + ")"
    if isinstance(f, KronLeft):
        return f"(kronl {dumps(f.a)} {f.m})"
    if isinstance(f, KronRight):
        return f"(kronr {f.k} {dumps(f.b)})"
    if isinstance(f, Transform):
        return f"(transform {_tid_text(f.tid)})"
    raise TypeError(f"unknown formula node {type(f).__name__}")


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokens(text):
    return _TOKEN.findall(text)


def loads(text):
    toks = _tokens(text)
    pos, node = _parse(toks, 0)
    if pos != len(toks):
        raise ValueError(f"trailing input after formula at token {pos}")
    return node


def _scalar(tok):
    generic = tok.endswith("*")
    tok = tok.rstrip("*")
    v = complex(tok) if tok.endswith("j") else float(tok)
    return v, generic


def _parse(toks, pos):
    if pos >= len(toks) or toks[pos] != "(":
        raise ValueError(f"expected '(' at token {pos}")
    if pos + 1 >= len(toks):
        raise ValueError("unexpected end of input")
    head = toks[pos + 1]
    pos += 2
    args = []
    while pos < len(toks) and toks[pos] != ")":
        if toks[pos] == "(":
            pos, sub = _parse(toks, pos)
            args.append(sub)
        else:
            args.append(toks[pos])
            pos += 1
    if pos >= len(toks):
        raise ValueError("missing ')'")
    return pos + 1, _build(head, args)


def _build(head, args):
    if head == "I":
        return Identity(int(args[0]))
    if head == "J":
        return OppIdentity(int(args[0]))
    if head == "F2":
        return Butterfly()
    if head == "diag":
        vals = [_scalar(a) for a in args]
        return Diagonal(np.array([v for v, _ in vals]), tuple(g for _, g in vals))
    if head == "perm":
        return Permutation(tuple(int(a) for a in args))
    if head == "stride":
        return Stride(int(args[0]), int(args[1]))
    if head == "oddstride":
        return OddStride(int(args[0]), int(args[1]))
    if head == "dense":
        rows, cols = int(args[0]), int(args[1])
        ii, jj, vv, gen = [], [], [], set()
        for item in args[2:]:
            i, j, v = item.split(":", 2)
            val, g = _scalar(v)
            ii.append(int(i))
            jj.append(int(j))
            vv.append(val)
            if g:
                gen.add((int(i), int(j)))
        dtype = complex if any(isinstance(v, complex) for v in vv) else float
        m = sparse.csr_matrix((np.array(vv, dtype=dtype), (ii, jj)), shape=(rows, cols))
        return DenseBlock(m, frozenset(gen))
    if head == "compose":
        return Compose(tuple(args))
    if head == "dsum":
        return DirectSum(tuple(args))
    if head == "kronl":
        return KronLeft(args[0], int(args[1]))
    if head == "kronr":
        return KronRight(int(args[0]), args[1])
    if head == "transform":
        from .transforms import TransformId
        kw = {}
        for a in args[3:]:
            if a.startswith("r="):
                kw["r"] = Fraction(a[2:])
            elif a.startswith("a="):
                kw["a"] = Fraction(a[2:])
            else:
                kw[{"poly": "poly", "inv": "inverse", "t": "transposed"}[a]] = True
        return Transform(TransformId(args[0], int(args[1]), int(args[2]), **kw))
    raise ValueError(f"unknown constructor {head!r}")
