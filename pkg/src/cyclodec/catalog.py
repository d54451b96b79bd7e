"""Architecture variants of each CP and their adder/delay counts."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

from .cyclotomic import MAX_INDEX, compact, cyclotomic_poly, cyclotomic_rational
from .polynomial import IntPoly, RationalForm

NONRECURSIVE = "nonrecursive"
RECURSIVE = "recursive"


@dataclass(frozen=True)
class ArchVariant:
    kind: str
    form: IntPoly | RationalForm
    adders: int
    delays: int
    label: str = ""

    def weighted(self, gamma: float) -> float:
        return self.adders + gamma * self.delays


@dataclass(frozen=True)
class CostEntry:
    q: int
    N_a: int
    N_d: int
    variant: ArchVariant

    def cost(self, gamma: float = 0.0) -> float:
        return self.N_a + gamma * self.N_d


def _direct(p: IntPoly) -> ArchVariant:
    return ArchVariant(NONRECURSIVE, p, p.nonzero_count() - 1, p.degree, "direct")


def _recursive(form: RationalForm, label: str) -> ArchVariant:
    return ArchVariant(RECURSIVE, form, form.adders, form.delays, label)


@lru_cache(maxsize=None)
def variants(q: int) -> tuple[ArchVariant, ...]:
    """Direct form, Mobius-inversion comb ratio and its compacted form.

    A compacted form with no denominator is the direct form again and is
    not listed twice.
    """
    if q < 2 or q > MAX_INDEX:
        raise ValueError(f"catalog covers q in [2, {MAX_INDEX}], got {q}")
    out = [_direct(cyclotomic_poly(q))]
    mob = cyclotomic_rational(q)
    out.append(_recursive(mob, "mobius"))
    cmp_ = compact(mob)
    if cmp_ != mob and not cmp_.is_polynomial_form():
        out.append(_recursive(cmp_, "compact"))
    return tuple(out)


def _rank(v: ArchVariant, gamma: float):
    return (v.weighted(gamma), v.delays, 0 if v.kind == NONRECURSIVE else 1)


def best_cost(q: int, gamma: float = 0.0) -> CostEntry:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    best = min(variants(q), key=lambda v: _rank(v, gamma))
    return CostEntry(q, best.adders, best.delays, best)


def best_recursive(q: int) -> ArchVariant:
    return min((v for v in variants(q) if v.kind == RECURSIVE), key=lambda v: (v.adders, v.delays))


def catalog_rows(gamma: float = 0.0, qs=range(2, MAX_INDEX + 1)) -> list[dict]:
    rows = []
    for q in qs:
        direct = variants(q)[0]
        rec = best_recursive(q)
        chosen = best_cost(q, gamma).variant
        rows.append({
            "q": q,
            "Na_nonrec": direct.adders,
            "Nd_nonrec": direct.delays,
            "Na_rec": rec.adders,
            "Nd_rec": rec.delays,
            "chosen": chosen.kind,
            "form": str(chosen.form),
        })
    return rows


def write_catalog_csv(fh, gamma: float = 0.0) -> None:
    rows = catalog_rows(gamma)
    w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
