"""Eligible CP selection by exact zero placement."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclotomic import MAX_INDEX
from .spectrum import Band, DesignSpec, folding_bands

DEFAULT_THRESHOLD = Fraction(1, 5)


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of C_q as frequencies i/q, gcd(i, q) = 1, folded into [0, 1/2]."""

    q: int
    zeros: tuple[Fraction, ...]
    degenerate: bool = False


def zero_set(q: int) -> ZeroSet:
    if q < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {q}")
    if q == 1:
        return ZeroSet(1, (Fraction(0),), degenerate=True)
    folded = {min(Fraction(i, q), 1 - Fraction(i, q)) for i in range(1, q) if gcd(i, q) == 1}
    return ZeroSet(q, tuple(sorted(folded)))


def passband_clear(zs: ZeroSet, f_c: Fraction) -> bool:
    """No zero strictly inside [0, f_c); a zero exactly at f_c is allowed."""
    return all(z >= f_c for z in zs.zeros)


def band_fraction(zs: ZeroSet, bands: list[Band]) -> Fraction:
    hits = sum(1 for z in zs.zeros if any(b.contains(z) for b in bands))
    return Fraction(hits, len(zs.zeros))


def is_eligible(q: int, spec: DesignSpec, threshold: Fraction = DEFAULT_THRESHOLD, bands=None) -> bool:
    if q < 2:
        return False
    zs = zero_set(q)
    if not passband_clear(zs, spec.f_c):
        return False
    bands = folding_bands(spec.D, spec.f_c) if bands is None else bands
    return band_fraction(zs, bands) >= threshold


def eligible_set(spec: DesignSpec, threshold: Fraction = DEFAULT_THRESHOLD, max_index: int = MAX_INDEX) -> list[int]:
    """Indices q in [2, max_index] whose zeros avoid the passband and put at
    least ``threshold`` of themselves inside the closed folding bands."""
    threshold = Fraction(threshold)
    bands = folding_bands(spec.D, spec.f_c)
    return [q for q in range(2, max_index + 1) if is_eligible(q, spec, threshold, bands)]
