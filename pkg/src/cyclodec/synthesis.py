"""From an optimized CP product to realizable decimator structures.

Every structure here is exact: integer polynomials, factor bookkeeping on
rational forms, and integer bit-growth. Each one can be expanded back to
the full-rate impulse response for cross-checking.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable

from .cyclotomic import cyclotomic_poly, cyclotomic_rational, factorize
from .polynomial import (
    BinomPlus,
    Factor,
    IntPoly,
    RationalForm,
    expand,
    format_poly,
)


class EmptyCascadeWarning(UserWarning):
    """No CP has a positive order; the filter is the identity."""


class NobleShiftError(ValueError):
    """A factor asked to cross the decimator has spacing not divisible by D."""


def as_orders(orders) -> dict[int, int]:
    """Accept a ``{q: m}`` mapping or anything with an ``orders`` attribute."""
    if hasattr(orders, "orders"):
        orders = orders.orders
    out = {int(q): int(m) for q, m in dict(orders).items() if m}
    if any(m < 0 for m in out.values()):
        raise ValueError("CP orders must be non-negative")
    return dict(sorted(out.items()))


def expand_impulse(orders) -> IntPoly:
    """Full-rate impulse response prod_q C_q^m_q; length 1 + sum m_q phi(q)."""
    orders = as_orders(orders)
    if not orders:
        warnings.warn("empty cascade: impulse response is the constant 1", EmptyCascadeWarning, stacklevel=2)
    h = IntPoly.one()
    for q, m in orders.items():
        h = h * cyclotomic_poly(q) ** m
    return h


# -- polyphase ---------------------------------------------------------------

@dataclass(frozen=True)
class PolyphaseBank:
    D: int
    components: tuple[IntPoly, ...]

    def __post_init__(self):
        if self.D < 1 or len(self.components) != self.D:
            raise ValueError("a polyphase bank needs exactly D >= 1 components")

    def reconstruct(self) -> IntPoly:
        """H(z) = sum_i z^-i E_i(z^D)."""
        h = IntPoly()
        for i, e in enumerate(self.components):
            h = h + IntPoly.monomial(i) * e.substitute(self.D)
        return h

    def dc_gains(self) -> tuple[int, ...]:
        return tuple(sum(e) for e in self.components)

    def as_lists(self) -> list[list[int]]:
        return [list(e.coeffs) for e in self.components]


def polyphase_decompose(h: IntPoly, D: int) -> PolyphaseBank:
    """E_i collects h(D t + i)."""
    if D < 1:
        raise ValueError(f"decimation factor must be >= 1, got {D}")
    c = h.coeffs
    return PolyphaseBank(D, tuple(IntPoly(c[i::D] or (0,)) for i in range(D)))


# -- recursive (CIC-style) form ----------------------------------------------

def recursive_cic_form(orders) -> RationalForm:
    """Product of the comb-ratio forms of every factor.

    Common factors cancel through exponent arithmetic, so what remains is a
    numerator of combs over a denominator of integrators.
    """
    form = RationalForm.identity()
    for q, m in as_orders(orders).items():
        form = form * cyclotomic_rational(q) ** m
    return form


def noble_shift(form: RationalForm, D: int,
                move: Iterable[Factor] | None = None) -> tuple[RationalForm, RationalForm]:
    """Split ``form`` around a decimate-by-D into (pre, post).

    Numerator factors whose spacing is a multiple of D cross the decimator
    with their spacing divided by D. ``move`` restricts which factors cross;
    by default every eligible one does. Denominator factors (integrators)
    always stay in front.
    """
    if D < 1:
        raise ValueError(f"decimation factor must be >= 1, got {D}")
    num = dict(form.numerator_factors())
    if move is None:
        chosen = [f for f in num if f.n % D == 0]
    else:
        chosen = list(move)
        for f in chosen:
            if f not in num:
                raise NobleShiftError(f"{f} is not a numerator factor of {form}")
            if f.n % D:
                raise NobleShiftError(f"spacing of {f} is not a multiple of {D}")
    pre = form.as_dict()
    post: dict[Factor, int] = {}
    for f in chosen:
        e = pre.pop(f)
        post[Factor(f.kind, f.n // D)] = e
    return RationalForm(pre), RationalForm(post)


# -- stage graphs -------------------------------------------------------------

@dataclass(frozen=True)
class Stage:
    transfer: IntPoly | RationalForm
    decimate_by: int = 1
    input_rate_divisor: int = 1
    width_bits: int | None = None

    def impulse(self) -> IntPoly:
        t = self.transfer
        return expand(t) if isinstance(t, RationalForm) else t

    def describe(self) -> str:
        t = self.transfer
        return str(t) if isinstance(t, RationalForm) else format_poly(t)


@dataclass(frozen=True)
class StageGraph:
    kind: str
    stages: tuple[Stage, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def D(self) -> int:
        out = 1
        for s in self.stages:
            out *= s.decimate_by
        return out

    def equivalent(self) -> IntPoly:
        """Full-rate transfer: prod_r T_r(z^divisor_r) by the noble identity."""
        h = IntPoly.one()
        form = RationalForm.identity()
        for s in self.stages:
            t = s.transfer
            if isinstance(t, RationalForm):
                form = form * t.scaled(s.input_rate_divisor)
            else:
                h = h * t.substitute(s.input_rate_divisor)
        return h * expand(form)

    @property
    def output_width(self) -> int | None:
        return self.stages[-1].width_bits if self.stages else None

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "D": self.D,
            "stages": [
                {
                    "transfer": s.describe(),
                    "decimation": s.decimate_by,
                    "input_rate_divisor": s.input_rate_divisor,
                    "width_bits": s.width_bits,
                }
                for s in self.stages
            ],
            "notes": list(self.notes),
        }


def _chain(kind: str, parts: list[tuple[IntPoly | RationalForm, int]], notes=()) -> StageGraph:
    stages, div = [], 1
    for transfer, dec in parts:
        stages.append(Stage(transfer, dec, div))
        div *= dec
    return StageGraph(kind, tuple(stages), tuple(notes))


def direct_graph(orders, D: int) -> StageGraph:
    return _chain("direct", [(expand_impulse(orders), D)])


def recursive_graph(orders, D: int) -> StageGraph:
    """Integrators and unmovable combs before the decimator, the rest after."""
    pre, post = noble_shift(recursive_cic_form(orders), D)
    return _chain("recursive", [(pre, D), (post, 1)])


def _pow2_exponent(q: int) -> int | None:
    f = factorize(q)
    return f[2] if set(f) == {2} else None


def cascade_pow2_stages(orders, D: int) -> StageGraph | None:
    """Chain of (1 + z^-1)^t_r sections separated by decimate-by-2 steps.

    Applies when every factor is C_{2^j} = 1 + z^-(2^(j-1)) and the widest
    spacing 2^(R-1) divides D, R being the largest j. Stage r runs at
    f_in / 2^r; the last stage takes whatever decimation remains. Returns
    None when not applicable.
    """
    orders = as_orders(orders)
    if not orders:
        return None
    t: dict[int, int] = {}
    for q, m in orders.items():
        j = _pow2_exponent(q)
        if j is None:
            return None
        t[j - 1] = m
    R = max(t) + 1
    if D % (1 << (R - 1)):
        return None
    parts = []
    for r in range(R):
        dec = 2 if r < R - 1 else D >> (R - 1)
        parts.append((BinomPlus(1).poly() ** t.get(r, 0), dec))
    return _chain("cascade", parts)


def cascade_orders(g: StageGraph) -> tuple[int, ...]:
    """Exponent t_r of (1 + z^-1) in each stage of a cascade graph."""
    base = BinomPlus(1).poly()
    out = []
    for s in g.stages:
        h, t = s.impulse(), 0
        while h != IntPoly.one():
            h = h.exact_div(base)
            t += 1
        out.append(t)
    return tuple(out)


# -- bit growth ---------------------------------------------------------------

def bit_growth(p: IntPoly) -> int:
    """ceil(log2(sum |coefficients|)), the worst-case gain in bits."""
    s = p.abs_sum()
    if s == 0:
        raise ValueError("zero transfer has no bit growth")
    return (s - 1).bit_length()


def wordlength_plan(g: StageGraph, R_in: int) -> StageGraph:
    """Fill ``width_bits`` stage by stage.

    Polynomial stages grow by their own worst-case gain. A stage holding a
    rational form (integrators) is sized like a CIC register: at the
    width of the whole filter, R_in + growth of the full expansion, which
    the modular arithmetic then guarantees is enough.
    """
    if R_in < 1:
        raise ValueError("input width must be at least 1 bit")
    full = R_in + bit_growth(g.equivalent())
    width, out = R_in, []
    for s in g.stages:
        if isinstance(s.transfer, RationalForm):
            width = max(width, full)
        else:
            width += bit_growth(s.transfer)
        out.append(replace(s, width_bits=width))
    return replace(g, stages=tuple(out))


# -- power-of-two coefficients -------------------------------------------------

@dataclass(frozen=True)
class Pow2Form:
    coefficient: int
    terms: tuple[tuple[int, int], ...]  # (sign, shift), highest shift first

    def value(self) -> int:
        return sum(s << k for s, k in self.terms)

    @property
    def digits(self) -> int:
        return len(self.terms)

    @property
    def adders(self) -> int:
        return max(self.digits - 1, 0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " ".join(f"{'+' if s > 0 else '-'}2^{k}" for s, k in self.terms)


def pow2_decompose(n: int) -> Pow2Form:
    """Canonical signed-digit (non-adjacent) form of ``n``."""
    terms = []
    v, k = n, 0
    while v:
        if v & 1:
            d = 2 - (v & 3)  # +1 if v = 1 mod 4, -1 if v = 3 mod 4
            terms.append((d, k))
            v -= d
        v >>= 1
        k += 1
    return Pow2Form(n, tuple(reversed(terms)))


def shift_add_report(bank: PolyphaseBank) -> dict:
    """CSD adder and shift totals per polyphase branch, without sharing."""
    branches = []
    for i, e in enumerate(bank.components):
        taps = [pow2_decompose(c) for c in e.coeffs if c]
        mult = sum(t.adders for t in taps)
        accum = max(len(taps) - 1, 0)
        shifts = sum(1 for t in taps for _, k in t.terms if k)
        branches.append({
            "branch": i,
            "coefficients": list(e.coeffs),
            "csd": [str(t) for t in taps],
            "coefficient_adders": mult,
            "accumulation_adders": accum,
            "shifts": shifts,
        })
    total = sum(b["coefficient_adders"] + b["accumulation_adders"] for b in branches)
    # The D branch outputs are summed into one sample.
    total += max(sum(1 for e in bank.components if not e.is_zero()) - 1, 0)
    return {"D": bank.D, "branches": branches, "total_adders": total}


def architectures(orders, D: int, R_in: int = 1) -> dict[str, StageGraph]:
    """Every applicable stage graph with planned widths."""
    out = {
        "direct": direct_graph(orders, D),
        "recursive": recursive_graph(orders, D),
    }
    casc = cascade_pow2_stages(orders, D)
    if casc is not None:
        out["cascade"] = casc
    return {k: wordlength_plan(g, R_in) for k, g in out.items()}


def architecture_json(orders, D: int, R_in: int = 1, arch: str = "all") -> dict:
    graphs = architectures(orders, D, R_in)
    h = expand_impulse(orders)
    bank = polyphase_decompose(h, D)
    doc: dict = {"D": D, "R_in": R_in, "impulse": list(h.coeffs)}
    if arch in ("all", "polyphase"):
        doc["polyphase"] = bank.as_lists()
        doc["shift_add"] = shift_add_report(bank)
    for name, g in graphs.items():
        if arch in ("all", name):
            doc[name] = g.as_dict()
    if arch == "cascade" and "cascade" not in graphs:
        doc["cascade"] = None
    return doc

