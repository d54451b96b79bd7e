"""Exact integer polynomials in z^-1 and factored rational forms.

Everything here is integer arithmetic. Coefficient lists are stored in
ascending powers of z^-1, so ``IntPoly((1, 0, -1))`` is ``1 - z^-2``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping


class InexactDivisionError(ArithmeticError):
    """Raised when a polynomial division leaves a nonzero remainder."""


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0,)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial sum_i coeffs[i] z^-i with integer coefficients."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = (0,)):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def one(cls) -> IntPoly:
        return cls((1,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPoly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other: IntPoly) -> IntPoly:
        n = max(len(self), len(other))
        return IntPoly(self[i] + other[i] for i in range(n))

    def __neg__(self) -> IntPoly:
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other: IntPoly | int) -> IntPoly:
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = IntPoly.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Long division over the integers (highest power of z^-1 first).

        Raises InexactDivisionError if a quotient coefficient is not an
        integer, which means ``other`` does not divide ``self`` over Z.
        """
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        dq = len(rem) - len(other)
        if dq < 0:
            return IntPoly(), IntPoly(rem)
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            top = rem[k + other.degree]
            if top % lead:
                raise InexactDivisionError(f"{top} not divisible by leading coefficient {lead}")
            t = top // lead
            quot[k] = t
            if t:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= t * b
        return IntPoly(quot), IntPoly(rem[: max(other.degree, 1)])

    def exact_div(self, other: IntPoly) -> IntPoly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise InexactDivisionError(f"remainder {r} dividing {self} by {other}")
        return q

    def __call__(self, z):
        # Horner in the variable z^-1 evaluated at w = z; callers pass w = z^-1.
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def substitute(self, k: int) -> IntPoly:
        """P(z) -> P(z^k)."""
        if k < 1:
            raise ValueError("substitution power must be positive")
        out = [0] * (self.degree * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return IntPoly(out)

    def alternate(self) -> IntPoly:
        """P(z) -> P(-z): negate odd-index coefficients."""
        return IntPoly(-c if i % 2 else c for i, c in enumerate(self.coeffs))

    def nonzero_count(self) -> int:
        return sum(1 for c in self.coeffs if c)

    def abs_sum(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"


def format_poly(p: IntPoly) -> str:
    """Render as ``1 - z^-2 + z^-4`` (ascending powers, explicit signs)."""
    parts: list[str] = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        elif mag == 1:
            body = f"z^-{i}"
        else:
            body = f"{mag}z^-{i}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(parts) if parts else "0"


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(z\^-(\d+)|z\^\(-(\d+)\)|z(?![\^\w]))?")


def parse_poly(text: str) -> IntPoly:
    """Inverse of :func:`format_poly`; also accepts ``3*z^-2`` spellings."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    coeffs: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(s):
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            break
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, mag, zpart, e1, e2 = m.groups()
        if not sign and not first:
            raise ValueError(f"missing sign before term {s[pos:m.end()]!r}")
        c = int(mag) if mag else 1
        if sign == "-":
            c = -c
        if zpart is None:
            k = 0
        elif e1 is not None:
            k = int(e1)
        elif e2 is not None:
            k = int(e2)
        else:
            raise ValueError("positive powers of z are not allowed")
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        first = False
    out = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return IntPoly(out)


class FactorKind(enum.IntEnum):
    BINOM_MINUS = 0  # 1 - z^-n
    BINOM_PLUS = 1  # 1 + z^-n
    TRINOM_PLUS = 2  # 1 + z^-n + z^-2n
    TRINOM_ALT = 3  # 1 - z^-n + z^-2n


_BASE = {
    FactorKind.BINOM_MINUS: (1, -1),
    FactorKind.BINOM_PLUS: (1, 1),
    FactorKind.TRINOM_PLUS: (1, 1, 1),
    FactorKind.TRINOM_ALT: (1, -1, 1),
}


@dataclass(frozen=True, order=True)
class Factor:
    kind: FactorKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("factor spacing must be a positive integer")

    def poly(self) -> IntPoly:
        return IntPoly(_BASE[self.kind]).substitute(self.n)

    @property
    def degree(self) -> int:
        return (len(_BASE[self.kind]) - 1) * self.n

    @property
    def adders(self) -> int:
        return len(_BASE[self.kind]) - 1

    def scaled(self, k: int) -> Factor:
        return Factor(self.kind, self.n * k)

    def __str__(self) -> str:
        return f"({format_poly(self.poly())})"


def BinomMinus(n: int) -> Factor:
    return Factor(FactorKind.BINOM_MINUS, n)


def BinomPlus(n: int) -> Factor:
    return Factor(FactorKind.BINOM_PLUS, n)


def TrinomPlus(n: int) -> Factor:
    return Factor(FactorKind.TRINOM_PLUS, n)


def TrinomAlt(n: int) -> Factor:
    return Factor(FactorKind.TRINOM_ALT, n)


@dataclass(frozen=True)
class RationalForm:
    """Product of binomial/trinomial factors raised to signed exponents.

    Stored canonically: zero exponents dropped, factors sorted by (kind, n).
    """

    factors: tuple[tuple[Factor, int], ...]

    def __init__(self, factors: Mapping[Factor, int] | Iterable[tuple[Factor, int]] = ()):
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: dict[Factor, int] = {}
        for f, e in items:
            merged[f] = merged.get(f, 0) + int(e)
        object.__setattr__(
            self, "factors", tuple(sorted((f, e) for f, e in merged.items() if e != 0))
        )

    @classmethod
    def identity(cls) -> RationalForm:
        return cls()

    def as_dict(self) -> dict[Factor, int]:
        return dict(self.factors)

    def exponent(self, f: Factor) -> int:
        return self.as_dict().get(f, 0)

    def __mul__(self, other: RationalForm) -> RationalForm:
        return RationalForm(self.factors + other.factors)

    def __truediv__(self, other: RationalForm) -> RationalForm:
        return self * other ** -1

    def __pow__(self, k: int) -> RationalForm:
        return RationalForm((f, e * k) for f, e in self.factors)

    def numerator_factors(self) -> tuple[tuple[Factor, int], ...]:
        return tuple((f, e) for f, e in self.factors if e > 0)

    def denominator_factors(self) -> tuple[tuple[Factor, int], ...]:
        return tuple((f, -e) for f, e in self.factors if e < 0)

    def numerator(self) -> IntPoly:
        out = IntPoly.one()
        for f, e in self.numerator_factors():
            out = out * f.poly() ** e
        return out

    def denominator(self) -> IntPoly:
        out = IntPoly.one()
        for f, e in self.denominator_factors():
            out = out * f.poly() ** e
        return out

    def is_polynomial_form(self) -> bool:
        return not self.denominator_factors()

    @property
    def adders(self) -> int:
        """One adder per nonzero non-leading coefficient per factor occurrence."""
        return sum(f.adders * abs(e) for f, e in self.factors)

    @property
    def delays(self) -> int:
        """Shared delay line per section: max of numerator and denominator degree."""
        num = sum(f.degree * e for f, e in self.numerator_factors())
        den = sum(f.degree * e for f, e in self.denominator_factors())
        return max(num, den)

    def scaled(self, k: int) -> RationalForm:
        """H(z) -> H(z^k)."""
        return RationalForm((f.scaled(k), e) for f, e in self.factors)

    def __str__(self) -> str:
        def side(items):
            out = []
            for f, e in items:
                out.append(str(f) + (f"^{e}" if e != 1 else ""))
            return "".join(out)

        num = side(self.numerator_factors()) or "1"
        den_items = self.denominator_factors()
        if not den_items:
            return num
        den = side(den_items)
        if len(den_items) > 1 or den_items[0][1] != 1:
            den = f"({den})"
        return f"{num} / {den}"


def expand(form: RationalForm) -> IntPoly:
    """Exact polynomial denoted by a rational form (multiply, then long-divide)."""
    return form.numerator().exact_div(form.denominator())
