import warnings

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cyclodec.cyclotomic import (
    CpIndexError,
    DegenerateIndexWarning,
    compact,
    cyclotomic_poly,
    cyclotomic_rational,
    cyclotomic_unchecked,
    dc_gain,
    divisors,
    is_expansion_of,
    mobius,
    radical,
    totient,
    verify_product_identity,
)
from cyclodec.polynomial import IntPoly, TrinomPlus, expand, parse_poly
from reference_data import CP_RATIONAL

z = sympy.Symbol("z")


def _sympy_cp(q):
    # z^-phi(q) Phi_q(z): descending powers of z are ascending powers of z^-1.
    return IntPoly(int(c) for c in sympy.Poly(sympy.cyclotomic_poly(q, z), z).all_coeffs())


@pytest.mark.parametrize("q", range(1, 105))
def test_matches_sympy(q):
    assert cyclotomic_poly(q) == _sympy_cp(q)


@given(st.integers(1, 400))
def test_totient_and_mobius_match_sympy(n):
    assert totient(n) == int(sympy.totient(n))
    assert mobius(n) == int(sympy.mobius(n))


@given(st.integers(1, 300), st.integers(1, 300))
def test_mobius_multiplicative(a, b):
    if sympy.gcd(a, b) == 1:
        assert mobius(a * b) == mobius(a) * mobius(b)
        assert totient(a * b) == totient(a) * totient(b)


@given(st.integers(1, 500))
def test_mobius_sums_to_delta(n):
    assert sum(mobius(d) for d in divisors(n)) == (1 if n == 1 else 0)


def test_examples():
    assert cyclotomic_poly(1) == IntPoly([1, -1])
    assert cyclotomic_poly(12) == parse_poly("1 - z^-2 + z^-4")
    assert cyclotomic_poly(60) == parse_poly("1 + z^-2 - z^-6 - z^-8 - z^-10 + z^-14 + z^-16")
    assert radical(72) == 6


def test_index_range():
    with pytest.raises(CpIndexError):
        cyclotomic_poly(105)
    with pytest.raises(CpIndexError):
        cyclotomic_poly(0)
    assert max(abs(c) for c in cyclotomic_unchecked(105).coeffs) == 2


@pytest.mark.parametrize("q", range(2, 105))
def test_palindromic(q):
    assert cyclotomic_poly(q).is_palindromic()


@given(st.integers(1, 52).filter(lambda n: n % 2))
def test_odd_doubling(n):
    # C_2n(z) = C_n(-z) for odd n > 1
    if n > 1:
        assert cyclotomic_poly(2 * n) == cyclotomic_poly(n).alternate()


def test_dc_gain():
    assert dc_gain(2) == 2
    assert dc_gain(8) == 2
    assert dc_gain(27) == 3
    assert dc_gain(12) == 1
    for q in range(2, 105):
        assert cyclotomic_poly(q)(1) == dc_gain(q)
    with pytest.raises(CpIndexError):
        dc_gain(1)


def test_product_identity_small():
    assert all(verify_product_identity(D) for D in range(1, 65))


def test_mobius_form_examples():
    assert str(cyclotomic_rational(12)) == "(1 - z^-2)(1 - z^-12) / ((1 - z^-4)(1 - z^-6))"
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        cyclotomic_rational(1)
    assert any(issubclass(x.category, DegenerateIndexWarning) for x in w)


@pytest.mark.parametrize("q", range(2, 105))
def test_rational_forms_expand_to_cp(q):
    mob = cyclotomic_rational(q)
    assert is_expansion_of(mob, q)
    cmp_ = compact(mob)
    assert is_expansion_of(cmp_, q)
    assert (cmp_.adders, cmp_.delays) <= (mob.adders, mob.delays)


def test_compact_33():
    mob = cyclotomic_rational(33)
    assert (mob.adders, mob.delays) == (4, 34)
    cmp_ = compact(mob)
    assert cmp_.as_dict() == {TrinomPlus(11): 1, TrinomPlus(1): -1}
    assert (cmp_.adders, cmp_.delays) == (4, 22)


@pytest.mark.parametrize("q", sorted(CP_RATIONAL))
def test_printed_rational_forms(q):
    num, den = (parse_poly(s) for s in CP_RATIONAL[q])
    assert num.exact_div(den) == cyclotomic_poly(q)
    assert expand(compact(cyclotomic_rational(q))) == cyclotomic_poly(q)
