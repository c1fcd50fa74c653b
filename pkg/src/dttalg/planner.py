"""Recursive planning: expand a transform into a formula without transform leaves.

A plan records, at every node, the rule and split parameter that were
applied and one child plan per distinct transform leaf.  Strategies:

* ``min-cost``: exhaustive search over all admissible rules and splits.
  Results are memoized per structural key (family, type, n, flags); the
  skew parameter is left out of the key since it changes constants only.
* ``fixed-radix:k``: prefer splits with parameter k.
* ``rightmost-balanced``: prefer the split closest to sqrt(n), larger
  coarse size on ties.
* ``priority``: the first rule in catalog order that leads to base cases.
* ``rule:TAG`` / ``fact``: prefer the named rule(s) wherever they apply.
"""
from __future__ import annotations

import csv
import heapq
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .formula import (Compose, CostTriple, DirectSum, KronLeft, KronRight, Transform,
                      ZERO_COST, apply, cost, densify, substitute)
from .rules import PRIORITY, RULES, RULES_BY_TAG, RuleError, get_rule, options
from .transforms import TransformId, kind_of, reference

DENSE_VERIFY_MAX = 256
MAX_SEARCH_N = 4096
VERIFY_VECTORS = 10

FACT_TAGS = ("fact-U2n", "fact-V2n", "fact-V", "fact-W")


class PlanError(RuleError):
    pass


@dataclass(frozen=True, eq=False)
class Plan:
    tid: TransformId
    rule: str
    param: object
    formula: object  # one-level expansion, leaves are the children's roots
    children: tuple = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def node(self):
        return (self.rule, self.param)

    def child(self, tid):
        for c in self.children:
            if c.tid == tid:
                return c
        raise KeyError(tid)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


# strategies ------------------------------------------------------------------

@dataclass(frozen=True)
class Strategy:
    kind: str  # min-cost | fixed-radix | rightmost-balanced | priority | prefer
    k: int | None = None
    tags: tuple = ()

    def __str__(self):
        if self.kind == "fixed-radix":
            return f"fixed-radix:{self.k}"
        if self.kind == "prefer":
            return "fact" if self.tags == FACT_TAGS else "rule:" + ",".join(self.tags)
        return self.kind


MIN_COST = Strategy("min-cost")


def parse_strategy(text):
    if isinstance(text, Strategy):
        return text
    text = text.strip()
    if text in ("min-cost", "mincost"):
        return MIN_COST
    if text in ("rightmost-balanced", "balanced"):
        return Strategy("rightmost-balanced")
    if text in ("priority", "default"):
        return Strategy("priority")
    if text == "radix2-where-possible":
        return Strategy("fixed-radix", 2)
    if text == "fact":
        return Strategy("prefer", tags=FACT_TAGS)
    for prefix in ("fixed-radix:", "fixed-radix-", "radix"):
        if text.startswith(prefix):
            try:
                k = int(text[len(prefix):])
            except ValueError:
                break
            if k < 2:
                break
            return Strategy("fixed-radix", k)
    if text.startswith("rule:"):
        tags = tuple(t for t in text[5:].split(",") if t)
        for t in tags:
            get_rule(t)
        if tags:
            return Strategy("prefer", tags=tags)
    raise ValueError(f"unknown strategy {text!r}; use min-cost, fixed-radix:K, "
                     "radix2-where-possible, rightmost-balanced, priority, fact or rule:TAG")


def strategy_names():
    return ["min-cost", "fixed-radix:2", "fixed-radix:3", "rightmost-balanced", "priority", "fact"]


def _rank(strategy, t, rule, param):
    base = 0 if rule.tag == "base-case" else 1
    prio = PRIORITY[rule.tag]
    p = param if isinstance(param, int) else -1
    if strategy.kind == "fixed-radix":
        return (base, 0 if param == strategy.k else 1, prio, p)
    if strategy.kind == "rightmost-balanced":
        if isinstance(param, int):
            return (base, 0, abs(math.log(param) - math.log(t.n / param)), -param, prio)
        return (base, 1, 0.0, 0, prio)
    if strategy.kind == "prefer":
        return (base, 0 if rule.tag in strategy.tags else 1, prio, p)
    return (base, prio, p)


# structural keys -------------------------------------------------------------

def memo_key(t):
    """(family, type, n, flags): the skew value itself is not part of the key."""
    if t.family == "DFT":
        sign = 0 if t.a is None else (1 if t.a > 0 else -1)
        return ("DFT", t.type, t.n, t.r is not None, sign, False, t.transposed, 0)
    skew = 0 if t.r is None else (1 if 0 < t.r < 1 else 2)
    return (t.family, t.type, t.n, t.poly, 0, t.inverse, t.transposed, skew)


def leaf_counts(f, mult=1, out=None):
    """How often each Transform leaf is applied when the formula is applied once."""
    out = Counter() if out is None else out
    if isinstance(f, Transform):
        out[f.tid] += mult
    elif isinstance(f, Compose):
        for g in f.factors:
            leaf_counts(g, mult, out)
    elif isinstance(f, DirectSum):
        for g in f.blocks:
            leaf_counts(g, mult, out)
    elif isinstance(f, KronLeft):
        leaf_counts(f.a, mult * f.m, out)
    elif isinstance(f, KronRight):
        leaf_counts(f.b, mult * f.k, out)
    return out


def _no_leaves(_):
    return ZERO_COST


def _distinct_leaves(f):
    seen = []
    for t in leaf_counts(f):
        if t not in seen:
            seen.append(t)
    return seen


def _blocking(t):
    relevant = {"T": ("base-case", "fused-T-basis", "via-T-basis", "via-U-basis", "twiddle",
                      "inverted", "inverse-via-transpose", "skew-translate"),
                "U": ("fact-U2n", "fact-V2n", "u-group-decomp"),
                "V": ("fact-V", "v-group-decomp", "duality"),
                "W": ("base-case", "fact-W", "w-group-decomp", "duality"),
                None: ("base-case", "dft-radix2", "dft-ct", "dft-twist")}[t.group]
    parts = [f"{tag} needs {RULES_BY_TAG[tag].constraint}" for tag in relevant]
    parts.append(f"by-definition needs {RULES_BY_TAG['by-definition'].constraint}")
    return "; ".join(parts)


# the planner -----------------------------------------------------------------

@dataclass
class _Option:
    tag: str
    param: object
    own: CostTriple
    kids: tuple  # ((child tid, multiplicity), ...)


def _order_key(c, tag, param):
    return (c.total, c.mults, tag, str(param))


class Planner:
    """Holds the min-cost memo.  One instance is one planning session."""

    def __init__(self):
        self._opts = {}  # key -> list of _Option (for a representative tid)
        self._best = {}  # key -> (cost, tag, param)
        self._dead = set()  # keys with no finite option
        self._plans = {}  # tid -> min-cost Plan

    # min-cost ---------------------------------------------------------------
    def _discover(self, root):
        new, stack = [], [root]
        while stack:
            t = stack.pop()
            key = memo_key(t)
            if key in self._opts:
                continue
            opts = []
            for rule, param in options(t):
                f = rule.expand(t, param)
                counts = leaf_counts(f)
                opts.append(_Option(rule.tag, param, cost(f, _no_leaves), tuple(counts.items())))
                for c in counts:
                    if memo_key(c) not in self._opts:
                        stack.append(c)
            self._opts[key] = opts
            new.append(key)
        return new

    def _solve(self, keys):
        """Knuth's generalization of Dijkstra: each key is finalized at its
        cheapest option whose children are already final, so choices never cycle."""
        pending = set(keys)
        parents = {}
        for key in keys:
            for o in self._opts[key]:
                for c, _ in o.kids:
                    parents.setdefault(memo_key(c), set()).add(key)
        heap = []

        def candidate(key):
            best = None
            for o in self._opts[key]:
                total = o.own
                ok = True
                for c, mult in o.kids:
                    got = self._best.get(memo_key(c))
                    if got is None:
                        ok = False
                        break
                    total = total + got[0].scale(mult)
                if ok:
                    cand = (_order_key(total, o.tag, o.param), total, o.tag, o.param)
                    if best is None or cand[0] < best[0]:
                        best = cand
            return best

        def push(key):
            cand = candidate(key)
            if cand is not None:
                heapq.heappush(heap, (cand[0], key, cand[1], cand[2], cand[3]))

        for key in sorted(keys):
            push(key)
        while heap:
            order, key, total, tag, param = heapq.heappop(heap)
            if key not in pending:
                continue
            pending.discard(key)
            self._best[key] = (total, tag, param)
            for parent in sorted(parents.get(key, ())):
                if parent in pending:
                    push(parent)
        self._dead.update(pending)

    def min_cost(self, t):
        """Cheapest cost triple reachable for the structural class of ``t``."""
        self._prepare(t)
        return self._best[memo_key(t)][0]

    def _prepare(self, t):
        if t.n > MAX_SEARCH_N:
            raise PlanError(f"{t}: exhaustive search supports n <= {MAX_SEARCH_N}")
        key = memo_key(t)
        if key not in self._opts:
            self._solve(self._discover(t))
        if key not in self._best:
            if not self._opts[key]:
                raise PlanError(f"no rule applies to {t}: {_blocking(t)}")
            raise PlanError(f"no algorithm reaches base cases for {t}; every admissible rule "
                            f"leads to an unreachable transform ({_blocking(t)})")

    def _plan_min_cost(self, t):
        p = self._plans.get(t)
        if p is None:
            self._prepare(t)
            _, tag, param = self._best[memo_key(t)]
            p = _make(t, tag, param, self._plan_min_cost)
            self._plans[t] = p
        return p

    # ranked strategies --------------------------------------------------------
    def _plan_ranked(self, t, strategy, memo, path):
        if t in memo:
            return memo[t]
        if t in path:
            raise PlanError(f"rewrite cycle at {t}")
        opts = options(t)
        if not opts:
            raise PlanError(f"no rule applies to {t}: {_blocking(t)}")
        opts = sorted(opts, key=lambda o: _rank(strategy, t, o[0], o[1]))
        path.add(t)
        errors = []
        try:
            for rule, param in opts:
                try:
                    p = _make(t, rule.tag, param,
                              lambda c: self._plan_ranked(c, strategy, memo, path))
                except PlanError as e:
                    errors.append(f"{rule.tag}: {e}")
                    continue
                memo[t] = p
                return p
        finally:
            path.discard(t)
        raise PlanError(f"no algorithm reaches base cases for {t} under {strategy}: "
                        + " | ".join(errors[:3]))

    def plan(self, t, strategy=MIN_COST):
        strategy = parse_strategy(strategy) if isinstance(strategy, str) else strategy
        if strategy.kind == "min-cost":
            return self._plan_min_cost(t)
        return self._plan_ranked(t, strategy, {}, set())


def _make(t, tag, param, child_plan):
    f = get_rule(tag).expand(t, param)
    kids = tuple(child_plan(c) for c in _distinct_leaves(f))
    return Plan(t, tag, param, f, kids)


_DEFAULT = Planner()


def plan(t, strategy=MIN_COST, planner=None):
    return (planner or _DEFAULT).plan(t, strategy)


def plan_with(t, tag, k=None, strategy=MIN_COST, planner=None):
    """Plan whose root applies the given rule; children follow ``strategy``."""
    planner = planner or _DEFAULT
    f = get_rule(tag).expand(t, k)
    if k is None:
        k = get_rule(tag).params(t)[0]
    kids = tuple(planner.plan(c, strategy) for c in _distinct_leaves(f))
    return Plan(t, tag, k, f, kids)


# the supported catalog -------------------------------------------------------

SKEW_SAMPLES = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
TWO_POWERS = (2, 4, 8, 16, 32, 64)
THREE_POWERS = (3, 9, 27)


def catalog_sizes(family, type_, limit=41):
    """Natural size families: 2-powers (T/U-group, plus 3-powers for the
    T-group), 3m+1 / 3m+2 (V-group) and (3^t -+ 1)/2 (W-group)."""
    if type_ in (3, 4):
        return TWO_POWERS + THREE_POWERS
    if type_ in (1, 2):
        return TWO_POWERS
    if type_ in (7, 8):
        return tuple(n for n in range(1, limit + 1) if n % 3 in (1, 2))
    plus = family == "DCT"
    out, p = [], 1
    while (p + (1 if plus else -1)) // 2 <= limit:
        n = (p + (1 if plus else -1)) // 2
        if n >= 1:
            out.append(n)
        p *= 3
    return tuple(out)


def catalog():
    """Every transform variant exercised by the full verification sweep."""
    out = []
    for family in ("DCT", "DST"):
        for type_ in range(1, 9):
            for n in catalog_sizes(family, type_):
                out.append(TransformId(family, type_, n))
                out.append(TransformId(family, type_, n, poly=True))
                if type_ in (3, 4):
                    out.append(TransformId(family, type_, n, inverse=True))
                    for r in SKEW_SAMPLES:
                        if r == Fraction(1, 2):
                            continue
                        out.append(TransformId(family, type_, n, r))
                        out.append(TransformId(family, type_, n, r, poly=True))
                        out.append(TransformId(family, type_, n, r, inverse=True))
                if type_ in (2, 3):
                    out.append(TransformId(family, type_, n, transposed=True))
    for n in TWO_POWERS + (3, 12):
        for type_ in (1, 2, 3, 4):
            out.append(TransformId("DFT", type_, n))
    return out


# interpretation --------------------------------------------------------------

def resolve(p):
    """The plan as a formula without transform leaves."""
    got = p._cache.get("resolved")
    if got is None:
        kids = {c.tid: c for c in p.children}
        got = substitute(p.formula, lambda tid: resolve(kids[tid]))
        post = get_rule(p.rule).post
        if post is not None:
            got = post(got)
        p._cache["resolved"] = got
    return got


def plan_cost(p):
    got = p._cache.get("cost")
    if got is None:
        if get_rule(p.rule).post is not None:
            got = cost(resolve(p))
        else:
            kids = {c.tid: c for c in p.children}
            got = cost(p.formula, lambda tid: plan_cost(kids[tid]))
        p._cache["cost"] = got
    return got


def plan_matrix(p):
    got = p._cache.get("matrix")
    if got is None:
        got = densify(resolve(p))
        p._cache["matrix"] = got
    return got


def verify_plan(p, seed=0, vectors=VERIFY_VECTORS):
    """Largest relative error of the plan against the reference matrix.

    Dense comparison (Frobenius) up to n = 256, plus ``vectors`` random
    apply checks at every size.
    """
    ref = reference(p.tid)
    n = p.tid.n
    err = 0.0
    if n <= DENSE_VERIFY_MAX:
        err = float(np.linalg.norm(plan_matrix(p) - ref) / np.linalg.norm(ref))
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, vectors))
    y = apply(resolve(p), x)
    want = ref @ x
    err = max(err, float(np.linalg.norm(y - want) / np.linalg.norm(want)))
    return err


# closed forms ----------------------------------------------------------------

def _exact_log(n, base):
    t, m = 0, 1
    while m < n:
        m *= base
        t += 1
    return t if m == n else None


def _triple(a, m, m2):
    vals = [Fraction(v) for v in (a, m, m2)]
    if any(v.denominator != 1 for v in vals):
        raise ValueError(f"closed form is not integral: {vals}")
    return CostTriple(*(int(v) for v in vals))


def closed_form_cost(t):
    """Closed-form cost of a T-group DTT for 2-power and 3-power n.

    Returns None for transforms without a known closed form (inverse
    variants, the W-group and polynomial variants at 3-power sizes);
    raises ValueError for sizes outside both families.
    """
    if t.family == "DFT" or t.inverse:
        return None
    if t.type not in (3, 4):
        if t.type in (5, 6):
            return None
        raise ValueError(f"no closed-form cost row for {t.family}-{t.type}")
    kind = kind_of(t.family, t.type)
    n = t.n
    h = Fraction(1, 2)
    two, three = _exact_log(n, 2), _exact_log(n, 3)
    if two is not None and n >= 2:
        L = n * two
        if kind in ("C3", "S3"):
            if kind == "S3" and t.skew:
                a, m = Fraction(3, 2) * L - n + 1, h * L + h * n
                if t.poly:
                    m -= h * n
                return _triple(a, m, 0)
            if kind == "S3" and t.poly:
                return None
            return _triple(Fraction(3, 2) * L - n + 1, h * L, 0)
        m = h * L + n
        if t.poly:
            m -= n
        return _triple(Fraction(3, 2) * L, m, 0)
    if three is not None and n >= 3:
        if t.poly and not (kind == "C3"):
            return None
        L = n * three
        e = Fraction(8, 3) * L
        f = Fraction(4, 3) * L
        if kind in ("C3", "S3") and not t.skew:
            return _triple(e - 2 * n + 2, f - Fraction(3, 2) * n + Fraction(3, 2), h * n - h)
        if kind in ("C4", "S4") and not t.skew:
            return _triple(e - n + 1, f - h * n + Fraction(3, 2), h * n - h)
        if kind == "C3":
            return _triple(e - n + 1, f, 0)
        if kind == "S3":
            return _triple(e - n + 1, f + h * n + h, h * n - h)
        return _triple(e, f + h * n + h, h * n - h)
    raise ValueError(f"n = {n} is neither a power of 2 nor a power of 3")


# traces and reports ------------------------------------------------------------

def _node_text(p):
    return p.rule if p.param is None else f"{p.rule}:{p.param}"


def compact_trace(p):
    """One-line trace; runs of identical sibling traces are written as ``c*trace``."""
    got = p._cache.get("trace")
    if got is None:
        parts = []
        for c in p.children:
            s = compact_trace(c)
            if parts and parts[-1][1] == s:
                parts[-1][0] += 1
            else:
                parts.append([1, s])
        inner = " ".join(s if c == 1 else f"{c}*{s}" for c, s in parts)
        got = _node_text(p) + (f"({inner})" if inner else "")
        p._cache["trace"] = got
    return got


def trace_tree(p, indent=""):
    lines = [f"{indent}{p.tid.label()}  {_node_text(p)}"]
    for c in p.children:
        lines.extend(trace_tree(c, indent + "  ").splitlines())
    return "\n".join(lines)


REPORT_COLUMNS = ("transform", "n", "rule-trace", "adds", "mults", "m2", "total",
                  "closed-form total", "delta")


def cost_row(p):
    c = plan_cost(p)
    try:
        cf = closed_form_cost(p.tid)
    except ValueError:
        cf = None
    name = p.tid.label().replace(f"_{p.tid.n}", "", 1)
    return {"transform": name, "n": p.tid.n, "rule-trace": compact_trace(p), "adds": c.adds,
            "mults": c.mults, "m2": c.two_power_mults, "total": c.total,
            "closed-form total": "" if cf is None else cf.total,
            "delta": "" if cf is None else c.total - cf.total}


def report_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def report_text(rows, trace_width=48):
    cells = [list(REPORT_COLUMNS)]
    for r in rows:
        row = [str(r[c]) for c in REPORT_COLUMNS]
        if len(row[2]) > trace_width:
            row[2] = row[2][:trace_width - 3] + "..."
        cells.append(row)
    widths = [max(len(row[i]) for row in cells) for i in range(len(REPORT_COLUMNS))]
    out = []
    for row in cells:
        out.append("  ".join(v.ljust(w) if i == 2 or i == 0 else v.rjust(w)
                             for i, (v, w) in enumerate(zip(row, widths))).rstrip())
    return "\n".join(out) + "\n"
