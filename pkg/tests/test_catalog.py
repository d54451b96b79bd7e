import csv
import io

import pytest

from cyclodec.catalog import NONRECURSIVE, RECURSIVE, best_cost, best_recursive, variants, write_catalog_csv
from cyclodec.cyclotomic import cyclotomic_poly
from cyclodec.polynomial import expand


def test_q33_counts():
    direct, mob, cmp_ = variants(33)
    assert (direct.adders, direct.delays) == (14, 20)
    assert (mob.adders, mob.delays) == (4, 34)
    assert (cmp_.adders, cmp_.delays) == (4, 22)
    entry = best_cost(33)
    assert (entry.N_a, entry.N_d) == (4, 22)
    assert entry.variant.kind == RECURSIVE


def test_short_cps_prefer_direct():
    for q in (2, 4, 8, 16, 12):
        assert best_cost(q).variant.kind == NONRECURSIVE
        assert best_cost(q).N_a == cyclotomic_poly(q).nonzero_count() - 1


def test_prime_comb_costs_two():
    # (1 - z^-p) / (1 - z^-1): two adders
    assert best_cost(29).N_a == 2
    assert best_cost(17).N_a == 2


@pytest.mark.parametrize("q", range(2, 105))
def test_variants_are_exact(q):
    best = best_cost(q)
    assert best.N_a == min(v.adders for v in variants(q))
    for v in variants(q):
        got = v.form if v.kind == NONRECURSIVE else expand(v.form)
        assert got == cyclotomic_poly(q)


def test_gamma_weighting():
    assert best_cost(33, gamma=1.0).variant.kind == RECURSIVE  # 4 + 22 < 14 + 20
    assert best_cost(3, gamma=1.0).variant.kind == NONRECURSIVE
    with pytest.raises(ValueError):
        best_cost(3, gamma=2.0)


def test_best_recursive_and_range():
    assert best_recursive(33).delays == 22
    with pytest.raises(ValueError):
        variants(1)


def test_csv():
    buf = io.StringIO()
    write_catalog_csv(buf)
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert len(rows) == 103
    r33 = next(r for r in rows if r["q"] == "33")
    assert (r33["Na_nonrec"], r33["Nd_nonrec"], r33["Na_rec"], r33["Nd_rec"]) == ("14", "20", "4", "22")
