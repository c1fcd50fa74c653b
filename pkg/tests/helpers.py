"""Shared oracle checks used by the unit tests and the acceptance suite."""
from fractions import Fraction

import numpy as np

from dttalg import planner as pl
from dttalg.formula import densify
from dttalg.rules import expand, options
from dttalg.transforms import (DUAL, TransformId, dtt_matrix, gram_diagonal, reference,
                               skew_dtt_matrix, x_matrix)

SKEW_KINDS = ("C3", "S3", "C4", "S4")
KIND_TID = {"C3": ("DCT", 3), "S3": ("DST", 3), "C4": ("DCT", 4), "S4": ("DST", 4)}
ALL_DTTS = [(f, t) for f in ("DCT", "DST") for t in range(1, 9)]


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def one_level_error(t, tag, k=None):
    """Expand one rule and fill every leaf with its reference matrix."""
    f = expand(tag, t, k)
    return rel_err(densify(f, reference), reference(t))


def duality_error(family, type_, n):
    """diag((-1)^k) DTT J = DTT' on the closed-form matrices."""
    if family == "DCT" and type_ == 1 and n < 2:
        return 0.0
    dual = DUAL[(family, type_)]
    signs = np.array([(-1.0) ** k for k in range(n)]).reshape(-1, 1)
    lhs = signs * dtt_matrix(family, type_, n)[:, ::-1]
    return rel_err(lhs, dtt_matrix(*dual, n))


def half_reduction_error(kind, n):
    return rel_err(skew_dtt_matrix(kind, n, Fraction(1, 2)), dtt_matrix(*KIND_TID[kind], n))


def translation_error(kind, n, r):
    """DTT(r) = DTT X(r)."""
    lhs = dtt_matrix(*KIND_TID[kind], n) @ x_matrix(kind, n, r)
    return rel_err(lhs, skew_dtt_matrix(kind, n, r))


def inversion_error(kind, n, r):
    """The inverse-by-transpose rule against gram * numpy's inverse of DTT(r)."""
    fam, typ = KIND_TID[kind]
    t = TransformId(fam, typ, n, r, inverse=True)
    got = densify(expand("inverse-via-transpose", t), reference)
    want = gram_diagonal(kind, n).reshape(-1, 1) * np.linalg.inv(skew_dtt_matrix(kind, n, r))
    return rel_err(got, want)


def base_change_errors(n, r):
    """The two DCT-4 via DCT-2 rewrites (plain and skew) at size n."""
    plain = one_level_error(TransformId("DCT", 4, n), "dct4-via-dct2")
    skew = one_level_error(TransformId("DCT", 4, n, r), "skew-dct4-via-dct2")
    return plain, skew


def root_rule_sweep(transforms, tol=1e-10, planner=None):
    """Every admissible (rule, parameter) at the root, children min-cost; returns failures."""
    bad, count = [], 0
    for t in transforms:
        for rule, param in options(t):
            p = pl.plan_with(t, rule.tag, param, planner=planner)
            e = pl.verify_plan(p)
            count += 1
            if not e <= tol:
                bad.append((t.label(), rule.tag, param, e))
    return bad, count


def strategy_sweep(transforms, strategies, tol=1e-10, planner=None):
    """Plans for every strategy (distinct plans verified once); returns failures and rule usage."""
    bad, used, count = [], set(), 0
    for t in transforms:
        seen = set()
        for s in strategies:
            try:
                p = pl.plan(t, s, planner)
            except pl.PlanError as e:
                bad.append((t.label(), str(s), str(e)))
                continue
            trace = pl.compact_trace(p)
            if trace in seen:
                continue
            seen.add(trace)
            count += 1
            e = pl.verify_plan(p)
            used.update(q.rule for q in p.walk())
            if not e <= tol:
                bad.append((t.label(), str(s), e))
    return bad, used, count


# Chebyshev identity cases, result degree <= max_degree ----------------------

def identity_cases(max_degree=64):
    from dttalg.chebyshev import COMPOSITIONS, KINDS, NEIGHBOR_COLUMNS, SIZE_SPLITS
    yield "split.t3-cubic", {}
    for n in range(1, max_degree // 2 + 1):
        yield "split.u-odd-split", {"n": n}
        yield "split.u-even-split", {"n": n}
    for n in range(0, (max_degree - 1) // 3 + 1):
        yield "split.v-third-split", {"n": n}
        yield "split.w-third-split", {"n": n}
    assert set(SIZE_SPLITS) == {"t3-cubic", "u-odd-split", "u-even-split", "v-third-split",
                                "w-third-split"}
    for k in range(1, max_degree + 1):
        for m in range(1, max_degree // k + 1):
            yield "compose.t-compose", {"k": k, "m": m}
            yield "compose.u-compose", {"k": k, "m": m}
            if k % 2 and (k - 1) // 2 + k * m <= max_degree:
                yield "compose.v-compose", {"k": k, "m": m}
                yield "compose.w-compose", {"k": k, "m": m}
            if m % 2 == 0 and k * m + m // 2 <= max_degree:
                yield "compose.t-half-compose", {"k": k, "m": m}
                yield "compose.u-half-compose", {"k": k, "m": m}
    assert len(COMPOSITIONS) == 6
    for kind in KINDS:
        for n in range(2, max_degree + 1):
            yield f"u-expansion.{kind}", {"n": n}
            for col in NEIGHBOR_COLUMNS:
                yield f"neighbor.{kind}.{col}", {"n": n}
        for n in range(1, max_degree + 1):
            for k in range(0, min(n, max_degree - n) + 1):
                yield f"t-product.{kind}", {"k": k, "n": n}


def skew_factorization_error(n, r):
    """T_n - cos(r pi) against 2^(n-1) prod (x - cos((r + 2i) pi / n)), coefficientwise."""
    import math
    from dttalg.chebyshev import cheb
    r = float(r)
    zeros = [math.cos((r + 2 * i) * math.pi / n) for i in range(n)]
    prod = np.array([1.0])
    for z in zeros:
        prod = np.convolve(prod, [-z, 1.0])
    rhs = 2.0 ** (n - 1) * prod
    lhs = np.array(cheb("T", n).float_coeffs())
    lhs[0] -= math.cos(r * math.pi)
    return float(np.abs(lhs - rhs).max() / np.abs(lhs).max())
