"""Acceptance gate: one group of checks per criterion, tolerances pinned.

The terminal summary prints one PASS/FAIL line per criterion.
"""
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclodec.catalog import best_cost
from cyclodec.cyclotomic import (
    cyclotomic_poly,
    cyclotomic_unchecked,
    mobius,
    totient,
    verify_product_identity,
)
from cyclodec.design import design_stage
from cyclodec.eligibility import eligible_set
from cyclodec.polynomial import IntPoly, parse_poly
from cyclodec.simulate import Stimulus, equivalence_check
from cyclodec.spectrum import DesignSpec, verify_spec
from cyclodec.synthesis import (
    cascade_orders,
    cascade_pow2_stages,
    direct_graph,
    expand_impulse,
    polyphase_decompose,
    recursive_cic_form,
    wordlength_plan,
)
from reference_data import (
    C17_4,
    CP_TABLE,
    ELIGIBLE,
    H82,
    MOBIUS_MINUS,
    MOBIUS_PLUS,
    MOBIUS_ZERO,
    NU,
    PUBLISHED_DESIGNS,
    TOTIENT_1_69,
)

DB_TOL = 0.01
VERIFY_GRID = 4096
DESIGN_IDS = [f"D{D}-Rp{Rp}-As{As}" for D, Rp, As in PUBLISHED_DESIGNS]


def criterion(n, title):
    return pytest.mark.criterion(n, title)


def _catalog_cost(orders):
    return sum(m * best_cost(q).N_a for q, m in orders.items())


# 1 -------------------------------------------------------------------------

@criterion(1, "number-theory fixtures")
def test_totient_table():
    assert [totient(n) for n in range(1, 70)] == TOTIENT_1_69


@criterion(1, "number-theory fixtures")
def test_mobius_table():
    got = {v: [n for n in range(1, 105) if mobius(n) == v] for v in (-1, 1, 0)}
    assert got[-1] == MOBIUS_MINUS
    assert got[1] == MOBIUS_PLUS
    assert got[0] == MOBIUS_ZERO


# 2 -------------------------------------------------------------------------

@criterion(2, "CP generation")
def test_cp_coefficients_and_degree():
    t0 = time.perf_counter()
    for q in range(1, 105):
        p = cyclotomic_poly(q)
        assert set(p.coeffs) <= {-1, 0, 1}, q
        assert p.degree == totient(q), q
    assert time.perf_counter() - t0 < 1.0


@criterion(2, "CP generation")
@pytest.mark.parametrize("q", sorted(CP_TABLE))
def test_cp_table_fixture(q):
    assert cyclotomic_poly(q) == parse_poly(CP_TABLE[q])


# 3 -------------------------------------------------------------------------

@criterion(3, "product identity D <= 256")
def test_product_identity():
    bad = [D for D in range(1, 257) if not verify_product_identity(D)]
    assert bad == []


# 4 -------------------------------------------------------------------------

@criterion(4, "eligible sets")
@pytest.mark.parametrize("D", [8, 16, 32])
def test_eligible_sets(D):
    assert eligible_set(DesignSpec(D, NU)) == ELIGIBLE[D]


# 5 -------------------------------------------------------------------------

@criterion(5, "published designs meet their specs")
@pytest.mark.parametrize("key", list(PUBLISHED_DESIGNS), ids=DESIGN_IDS)
def test_published_design_feasible(key):
    D, Rp, As = key
    rep = verify_spec(PUBLISHED_DESIGNS[key], DesignSpec(D, NU, Rp, As), grid=VERIFY_GRID)
    print(f"{key}: dev {rep.passband_dev_db:.3f} dB, worst band {min(rep.band_attenuation_db):.2f} dB")
    assert rep.passband_dev_db <= Rp + DB_TOL
    assert min(rep.band_attenuation_db) >= As - DB_TOL


# 6 -------------------------------------------------------------------------

@criterion(6, "optimizer quality")
@pytest.mark.parametrize("key", list(PUBLISHED_DESIGNS), ids=DESIGN_IDS)
def test_optimizer_quality(key):
    D, Rp, As = key
    t0 = time.perf_counter()
    result = design_stage(DesignSpec(D, NU, Rp, As))
    elapsed = time.perf_counter() - t0
    sol = result.solution
    print(f"{key}: cost {sol.cost:g} {sol.orders} in {elapsed:.2f} s")
    assert sol.status == "optimal"
    assert sol.cost <= _catalog_cost(PUBLISHED_DESIGNS[key])
    assert verify_spec(sol.orders, result.spec, grid=VERIFY_GRID).passed
    assert elapsed <= 60.0


# 7 -------------------------------------------------------------------------

@criterion(7, "synthesis fixtures")
def test_synthesis_fixtures():
    h = expand_impulse(H82)
    assert len(h) == 21
    bank = polyphase_decompose(h, 8)
    assert bank.components[0] == IntPoly([1, 22, 9])
    assert bank.components[1] == IntPoly([2, 24, 6])
    assert recursive_cic_form(H82).denominator() == IntPoly([1, -2, 0, 2, -1])
    assert cascade_orders(cascade_pow2_stages(H82, 8)) == (2, 3, 3)


# 8 -------------------------------------------------------------------------

STIMULI = [Stimulus("impulse", 1024), Stimulus("step", 1024), Stimulus("prng", 10_000, width=1)]


@criterion(8, "architecture equivalence")
@pytest.mark.parametrize("orders, D, expected", [
    (H82, 8, {"direct", "polyphase", "recursive", "cascade"}),
    (C17_4, 32, {"direct", "polyphase", "recursive"}),
], ids=["H82", "C17^4"])
def test_architecture_equivalence(orders, D, expected):
    rep = equivalence_check(orders, D, STIMULI)
    assert set(rep.latencies) == expected
    assert rep.passed, rep.first_mismatch


# 9 -------------------------------------------------------------------------

@criterion(9, "wordlength")
def test_wordlength_first_cascade_substage():
    g = wordlength_plan(cascade_pow2_stages(H82, 8), 1)
    assert g.stages[0].width_bits == 3


@criterion(9, "wordlength")
def test_wordlength_direct_final():
    g = wordlength_plan(direct_graph(H82, 8), 1)
    print(f"sum |h| = {expand_impulse(H82).abs_sum()}, planned width {g.output_width}")
    assert g.output_width == 8


# 10 ------------------------------------------------------------------------

@criterion(10, "property suites")
def test_conservativeness_random_orders():
    spec = DesignSpec(8, NU, 1.0, 50.0)
    result = design_stage(spec)
    table, problem = result.table, result.problem
    usable = [q for j, q in enumerate(result.S) if problem.u[j] > 0]
    rng = np.random.default_rng(2024)
    for _ in range(50):
        qs = rng.choice(usable, size=rng.integers(1, 6), replace=False)
        orders = {int(q): int(rng.integers(1, 4)) for q in qs}
        rep = verify_spec(orders, spec, grid=VERIFY_GRID)
        for k, got in enumerate(rep.band_attenuation_db, start=1):
            bound = sum(m * table.att[(k, q)] for q, m in orders.items())
            assert got >= bound - DB_TOL
        dev_bound = sum(m * table.dev[q] for q, m in orders.items())
        assert rep.passband_dev_db <= dev_bound + DB_TOL
        m = np.array([orders.get(q, 0) for q in result.S])
        if problem.feasible(m):
            assert rep.passed


@criterion(10, "property suites")
def test_optimizer_determinism():
    spec = DesignSpec(16, NU, 1.0, 50.0)
    runs = {design_stage(spec).solution.m for _ in range(5)}
    assert len(runs) == 1


@criterion(10, "property suites")
@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=60), st.integers(1, 12))
def test_polyphase_reconstruction(coeffs, D):
    h = IntPoly(coeffs)
    bank = polyphase_decompose(h, D)
    assert bank.reconstruct() == h
    assert sum(bank.dc_gains()) == sum(h)


def test_cp_index_range_is_the_coefficient_bound():
    # Sanity note backing criterion 2: the bound breaks first at q = 105.
    assert max(abs(c) for c in cyclotomic_unchecked(105).coeffs) == 2
