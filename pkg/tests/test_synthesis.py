import itertools
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclodec.cyclotomic import totient
from cyclodec.polynomial import BinomMinus, IntPoly, RationalForm, expand
from cyclodec.synthesis import (
    EmptyCascadeWarning,
    NobleShiftError,
    architecture_json,
    architectures,
    bit_growth,
    cascade_orders,
    cascade_pow2_stages,
    expand_impulse,
    noble_shift,
    polyphase_decompose,
    pow2_decompose,
    recursive_cic_form,
    recursive_graph,
    shift_add_report,
    wordlength_plan,
)
from reference_data import C17_4, H82

orders_st = st.dictionaries(st.sampled_from([2, 3, 4, 8, 9, 11, 16, 17, 27, 31, 33]),
                            st.integers(1, 3), min_size=1, max_size=3)


def test_expand_impulse_examples():
    h = expand_impulse(H82)
    assert len(h) == 21
    assert (h[0], h[8], h[16]) == (1, 22, 9)
    assert expand_impulse({2: 1}) == IntPoly([1, 1])
    with pytest.warns(EmptyCascadeWarning):
        assert expand_impulse({}) == IntPoly.one()


@given(orders_st)
def test_impulse_length(orders):
    assert len(expand_impulse(orders)) == 1 + sum(m * totient(q) for q, m in orders.items())


def test_polyphase_examples():
    bank = polyphase_decompose(IntPoly([1, 3, 3, 1]), 2)
    assert bank.components == (IntPoly([1, 3]), IntPoly([3, 1]))
    bank = polyphase_decompose(IntPoly.one(), 4)
    assert bank.components[0] == IntPoly.one()
    assert all(e.is_zero() for e in bank.components[1:])


def test_recursive_form_examples():
    r = recursive_cic_form(H82)
    # Also written (1 - z^-8)^3 / ((1 - z^-1)^3 (1 + z^-1)); same expansion.
    assert r.numerator() == BinomMinus(8).poly() ** 3
    assert r.denominator() == IntPoly([1, -2, 0, 2, -1])
    assert r.denominator() == IntPoly([1, -1]) ** 3 * IntPoly([1, 1])
    assert (r.numerator().degree, r.denominator().degree) == (24, 4)
    assert recursive_cic_form({3: 1}) == RationalForm({BinomMinus(3): 1, BinomMinus(1): -1})


@given(orders_st)
def test_all_forms_expand_to_impulse(orders):
    h = expand_impulse(orders)
    assert expand(recursive_cic_form(orders)) == h
    for D in (2, 4, 8):
        assert polyphase_decompose(h, D).reconstruct() == h
        for g in architectures(orders, D).values():
            assert g.equivalent() == h
            assert g.D == D


def test_cascade():
    g = cascade_pow2_stages(H82, 8)
    assert cascade_orders(g) == (2, 3, 3)
    assert [s.decimate_by for s in g.stages] == [2, 2, 2]
    assert cascade_pow2_stages({11: 1}, 8) is None
    g = cascade_pow2_stages({2: 5}, 8)
    assert cascade_orders(g) == (5,) and g.stages[0].decimate_by == 8
    assert cascade_pow2_stages(C17_4, 32) is None
    assert cascade_pow2_stages({32: 1}, 8) is None  # spacing 16 does not divide 8


def test_noble_shift():
    pre, post = noble_shift(RationalForm({BinomMinus(8): 3}), 8)
    assert pre == RationalForm.identity()
    assert post == RationalForm({BinomMinus(1): 3})
    assert noble_shift(RationalForm.identity(), 8) == (RationalForm.identity(), RationalForm.identity())
    _, post = noble_shift(RationalForm({BinomMinus(16): 2}), 8)
    assert post == RationalForm({BinomMinus(2): 2})
    with pytest.raises(NobleShiftError):
        noble_shift(RationalForm({BinomMinus(12): 1}), 8, move=[BinomMinus(12)])


def test_noble_shift_keeps_integrators_in_front():
    pre, post = noble_shift(recursive_cic_form(H82), 8)
    assert pre.numerator_factors() == ()
    assert post.denominator_factors() == ()
    pre, post = noble_shift(recursive_cic_form(C17_4), 32)
    assert post == RationalForm.identity()


def _min_signed_digits(n):
    # Exhaustive oracle: fewest signed powers of two summing to n.
    if n == 0:
        return 0
    k = abs(n).bit_length() + 1
    for count in range(1, k + 1):
        for shifts in itertools.combinations(range(k + 1), count):
            for signs in itertools.product((1, -1), repeat=count):
                if sum(s << p for s, p in zip(signs, shifts)) == n:
                    return count
    raise AssertionError(n)


def test_pow2_examples():
    f = pow2_decompose(22)
    assert f.value() == 22 and f.digits == 3 == _min_signed_digits(22)
    assert f.terms == ((1, 5), (-1, 3), (-1, 1))
    assert pow2_decompose(9).terms == ((1, 3), (1, 0))
    assert pow2_decompose(0).terms == ()


@given(st.integers(-300, 300))
def test_pow2_canonical(n):
    f = pow2_decompose(n)
    assert f.value() == n
    shifts = sorted(k for _, k in f.terms)
    assert all(b - a >= 2 for a, b in zip(shifts, shifts[1:]))


@settings(max_examples=60, deadline=None)
@given(st.integers(-100, 100))
def test_pow2_minimal(n):
    assert pow2_decompose(n).digits == _min_signed_digits(n)


def test_wordlength_examples():
    g = wordlength_plan(cascade_pow2_stages(H82, 8), 1)
    assert [s.width_bits for s in g.stages] == [3, 6, 9]
    assert bit_growth(IntPoly.one()) == 0
    assert bit_growth(expand_impulse(H82)) == 8  # sum |h| = H(1) = 256


@given(orders_st)
def test_cascade_widths_nondecreasing(orders):
    g = cascade_pow2_stages(orders, 16)
    if g is not None:
        w = [s.width_bits for s in wordlength_plan(g, 2).stages]
        assert w == sorted(w)


def test_recursive_graph_and_json():
    g = wordlength_plan(recursive_graph(H82, 8), 1)
    assert [s.width_bits for s in g.stages] == [9, 9]
    doc = architecture_json(H82, 8)
    assert doc["polyphase"][0] == [1, 22, 9]
    assert doc["cascade"]["stages"][0]["width_bits"] == 3
    assert architecture_json({17: 4}, 32, arch="cascade")["cascade"] is None


def test_shift_add_report():
    rep = shift_add_report(polyphase_decompose(expand_impulse(H82), 8))
    b0 = rep["branches"][0]
    assert b0["csd"] == ["+2^0", "+2^5 -2^3 -2^1", "+2^3 +2^0"]
    assert b0["coefficient_adders"] == 3 and b0["accumulation_adders"] == 2
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert rep["total_adders"] > 0
