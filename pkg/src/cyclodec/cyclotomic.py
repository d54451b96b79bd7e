"""Cyclotomic polynomials C_q(z) and their factored rational forms.

All arithmetic is exact. For q <= 104 every coefficient of C_q lies in
{-1, 0, +1}; that bound is the only index range the design flow accepts.
"""
from __future__ import annotations

import warnings
from functools import lru_cache
from math import gcd, prod

from .polynomial import (
    BinomMinus,
    BinomPlus,
    Factor,
    FactorKind,
    IntPoly,
    RationalForm,
    TrinomAlt,
    TrinomPlus,
    expand,
)

MAX_INDEX = 104


class CpIndexError(ValueError):
    """Cyclotomic index outside the supported range."""


class DegenerateIndexWarning(UserWarning):
    """q = 1: C_1(1) = 0, so no DC normalization exists."""


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def radical(n: int) -> int:
    """Squarefree kernel: product of the distinct primes of n."""
    return prod(factorize(n))


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius is defined for n >= 1, got {n}")
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    if n < 1:
        raise ValueError(f"totient is defined for n >= 1, got {n}")
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def _check_index(q: int, lo: int = 1) -> None:
    if not isinstance(q, int) or isinstance(q, bool):
        raise CpIndexError(f"cyclotomic index must be an integer, got {q!r}")
    if not lo <= q <= MAX_INDEX:
        raise CpIndexError(f"cyclotomic index {q} outside [{lo}, {MAX_INDEX}]")


def _squarefree_coeffs(q: int) -> list[int]:
    # c_{q,0} = 1; c_{q,d} = -mu(q)/d * sum_p c_{q,p} mu(g) phi(g), g = gcd(q, d-p).
    # c_{q,d} is the coefficient of z^-d (palindromic for q >= 2).
    phi = totient(q)
    mu_q = mobius(q)
    weight = {}
    c = [1]
    for d in range(1, phi + 1):
        acc = 0
        for p in range(d):
            g = gcd(q, d - p)
            if g not in weight:
                weight[g] = mobius(g) * totient(g)
            acc += c[p] * weight[g]
        num = -mu_q * acc
        assert num % d == 0, f"inexact step in coefficient recursion (q={q}, d={d})"
        c.append(num // d)
    return c


@lru_cache(maxsize=None)
def cyclotomic_unchecked(q: int) -> IntPoly:
    """C_q for any q >= 1, with no coefficient-range guarantee.

    Non-squarefree q uses C_q(z) = C_rad(q)(z^(q/rad(q))), which follows by
    repeating C_{m n^k}(z) = C_{mn}(z^(n^(k-1))) once per repeated prime.
    """
    if q < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {q}")
    r = radical(q)
    base = IntPoly(_squarefree_coeffs(r))
    return base.substitute(q // r) if q != r else base


def cyclotomic_poly(q: int) -> IntPoly:
    _check_index(q)
    return cyclotomic_unchecked(q)


def cyclotomic_rational(q: int) -> RationalForm:
    """Mobius-inversion form prod_{d|q} (1 - z^-d)^mu(q/d)."""
    _check_index(q)
    if q == 1:
        warnings.warn("C_1 = 1 - z^-1 is degenerate (zero at DC)", DegenerateIndexWarning, stacklevel=2)
    return RationalForm((BinomMinus(d), mobius(q // d)) for d in divisors(q))


# Each rewrite consumes a^s b^-s and produces c^s, for either sign s.
#   (1 - z^-2n) / (1 - z^-n)          = 1 + z^-n
#   (1 - z^-3n) / (1 - z^-n)          = 1 + z^-n + z^-2n
#   (1 + z^-3n) / (1 + z^-n)          = 1 - z^-n + z^-2n
#   (1 + z^-2n + z^-4n) / (1 + z^-n + z^-2n) = 1 - z^-n + z^-2n
_REWRITES = (
    (FactorKind.BINOM_MINUS, 2, FactorKind.BINOM_MINUS, FactorKind.BINOM_PLUS),
    (FactorKind.BINOM_MINUS, 3, FactorKind.BINOM_MINUS, FactorKind.TRINOM_PLUS),
    (FactorKind.BINOM_PLUS, 3, FactorKind.BINOM_PLUS, FactorKind.TRINOM_ALT),
    (FactorKind.TRINOM_PLUS, 2, FactorKind.TRINOM_PLUS, FactorKind.TRINOM_ALT),
)


def _rewrites(form: RationalForm):
    fac = form.as_dict()
    for f, e in fac.items():
        for big_kind, mult, small_kind, out_kind in _REWRITES:
            if f.kind != big_kind or f.n % mult:
                continue
            n = f.n // mult
            small = Factor(small_kind, n)
            es = fac.get(small, 0)
            if es == 0 or (es > 0) == (e > 0):
                continue
            k = min(abs(e), abs(es))
            s = 1 if e > 0 else -1
            yield form * RationalForm({f: -s * k, small: s * k, Factor(out_kind, n): s * k})


def _form_key(form: RationalForm):
    return (form.adders, form.delays, str(form))


def compact(form: RationalForm) -> RationalForm:
    """Merge comb ratios into binomial/trinomial sections.

    Explores every sequence of the exact factor rewrites above and keeps
    the result with the fewest adders, then fewest delays. The expansion
    is unchanged by construction.
    """
    best = form
    seen = {form}
    stack = [form]
    while stack:
        cur = stack.pop()
        for nxt in _rewrites(cur):
            if nxt in seen:
                continue
            seen.add(nxt)
            stack.append(nxt)
            if _form_key(nxt) < _form_key(best):
                best = nxt
    return best


def dc_gain(q: int) -> int:
    """C_q(1): p when q = p^k, else 1."""
    if q == 1:
        raise CpIndexError("C_1(1) = 0: no DC normalization exists")
    if q < 1:
        raise CpIndexError(f"cyclotomic index must be >= 1, got {q}")
    f = factorize(q)
    return next(iter(f)) if len(f) == 1 else 1


def verify_product_identity(D: int) -> bool:
    """Check prod_{q | D} C_q(z) == 1 - z^-D coefficient by coefficient."""
    if D < 1:
        raise ValueError("D must be a positive integer")
    acc = IntPoly.one()
    for q in divisors(D):
        acc = acc * cyclotomic_unchecked(q)
    return acc == BinomMinus(D).poly()


def is_expansion_of(form: RationalForm, q: int) -> bool:
    return expand(form) == cyclotomic_unchecked(q)


__all__ = [
    "MAX_INDEX",
    "BinomMinus",
    "BinomPlus",
    "TrinomAlt",
    "TrinomPlus",
    "CpIndexError",
    "DegenerateIndexWarning",
    "compact",
    "cyclotomic_poly",
    "cyclotomic_rational",
    "cyclotomic_unchecked",
    "dc_gain",
    "divisors",
    "factorize",
    "mobius",
    "radical",
    "totient",
    "verify_product_identity",
]
