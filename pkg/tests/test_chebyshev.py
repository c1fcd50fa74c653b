import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dttalg.chebyshev import (ExactPoly, KINDS, check_identity, cheb, cheb_values, cheb_zero_angles,
                              cheb_zeros, cos_pi, identity_tags, rational_cos_pi, skew_zero_angles)

from helpers import identity_cases, skew_factorization_error

# closed forms C_n(cos t), independent of the recurrence
CLOSED = {
    "T": lambda n, t: math.cos(n * t),
    "U": lambda n, t: math.sin((n + 1) * t) / math.sin(t),
    "V": lambda n, t: math.cos((n + 0.5) * t) / math.cos(t / 2),
    "W": lambda n, t: math.sin((n + 0.5) * t) / math.sin(t / 2),
}


def test_low_degree_polynomials():
    assert str(cheb("T", 3)) == "4x^3 - 3x"
    assert cheb("U", 2) == ExactPoly((-1, 0, 4))
    assert cheb("V", 1) == ExactPoly((-1, 2))
    assert cheb("W", 1) == ExactPoly((1, 2))
    # backwards recurrence gives the usual symmetries
    assert cheb("T", -3) == cheb("T", 3)
    assert cheb("U", -1) == ExactPoly()
    assert cheb("U", -2) == -cheb("U", 0)


@pytest.mark.parametrize("kind", KINDS)
def test_polynomials_match_trig_closed_forms(kind):
    for n in range(12):
        p = cheb(kind, n)
        for t in (0.3, 1.1, 2.5):
            assert p.eval(math.cos(t)) == pytest.approx(CLOSED[kind](n, t), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("kind", KINDS)
def test_zeros_are_roots(kind):
    for n in range(1, 14):
        zs = cheb_zeros(kind, n)
        assert len(zs) == n and zs == sorted(zs, reverse=True)
        p = cheb(kind, n)
        scale = float(max(abs(c) for c in p.coeffs))
        for z in zs:
            assert abs(p.eval(z)) <= 1e-11 * scale
    assert cheb_zero_angles("T", 2) == [Fraction(1, 4), Fraction(3, 4)]


def test_cheb_values_agree_with_exact():
    for kind in KINDS:
        vals = cheb_values(kind, 9, 0.37)
        assert np.allclose(vals, [cheb(kind, n).eval(0.37) for n in range(9)])


def test_cos_pi_is_exact_at_thirds():
    assert cos_pi(Fraction(1, 3)) == 0.5
    assert cos_pi(Fraction(5, 2)) == 0.0
    assert rational_cos_pi(Fraction(2, 3)) == Fraction(-1, 2)
    assert rational_cos_pi(Fraction(1, 4)) is None


def test_skew_zero_angles_order():
    assert skew_zero_angles(3, Fraction(1, 3)) == [Fraction(1, 9), Fraction(5, 9), Fraction(7, 9)]
    assert skew_zero_angles(2, Fraction(1, 2)) == [Fraction(1, 4), Fraction(3, 4)]
    with pytest.raises(ValueError):
        skew_zero_angles(3, Fraction(3, 2))


def test_exact_division():
    q, r = cheb("U", 7).divmod(cheb("T", 4))
    assert r.is_zero() and q == 2 * cheb("U", 3)
    q, r = cheb("T", 5).divmod(cheb("T", 2))
    assert q * cheb("T", 2) + r == cheb("T", 5)


def test_identity_tags_cover_every_family():
    tags = identity_tags()
    assert len(tags) == len(set(tags))
    seen = {tag for tag, _ in identity_cases(16)}
    assert seen == set(tags)
    with pytest.raises(ValueError):
        check_identity("split.nope", n=2)


def test_identities_hold_exactly_to_degree_32():
    bad = [(tag, kw) for tag, kw in identity_cases(32) if not check_identity(tag, **kw)]
    assert bad == []


def test_broken_identity_is_detected():
    # a wrong variant of the split must not pass the exact comparison
    assert cheb("U", 7) != 2 * cheb("U", 3) * cheb("T", 3)
    assert cheb("T", 6) != cheb("T", 2).compose(cheb("T", 2))


def test_odd_only_compositions_reject_even_k():
    with pytest.raises(ValueError):
        check_identity("compose.v-compose", k=2, m=3)
    with pytest.raises(ValueError):
        check_identity("compose.t-half-compose", k=1, m=3)


@pytest.mark.parametrize("r", [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1, 7)])
def test_skew_factorization_of_t_minus_cos(r):
    for n in range(1, 17):
        assert skew_factorization_error(n, r) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(KINDS), st.integers(0, 20), st.integers(-5, 5))
def test_recurrence_holds_everywhere(kind, n, shift):
    n = n + shift
    x = ExactPoly.x()
    assert cheb(kind, n + 2) == 2 * x * cheb(kind, n + 1) - cheb(kind, n)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8))
def test_t_composition_property(k, m):
    assert cheb("T", k * m) == cheb("T", k).compose(cheb("T", m))
