"""Bit-exact streaming runs of each decimator structure.

Samples are Python integers. Structures with a planned width wrap their
registers to that many bits in two's complement, as hardware would; the
direct and polyphase forms are exact. All state starts at zero.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .polynomial import IntPoly, RationalForm
from .synthesis import (
    PolyphaseBank,
    StageGraph,
    as_orders,
    bit_growth,
    cascade_pow2_stages,
    expand_impulse,
    noble_shift,
    polyphase_decompose,
    recursive_cic_form,
    wordlength_plan,
)

XORSHIFT_SHIFTS = (13, 17, 5)
DEFAULT_SEED = 0xC0FFEE
_MASK32 = 0xFFFFFFFF

KINDS = ("impulse", "step", "prng", "file")


class OverflowRiskWarning(UserWarning):
    """Register width below the planned allocation; outputs may wrap."""


def wrap(v: int, width: int) -> int:
    """Reduce to a ``width``-bit two's-complement value."""
    half = 1 << (width - 1)
    return ((v + half) & ((1 << width) - 1)) - half


def signed_width(v: int) -> int:
    """Smallest two's-complement width holding ``v``."""
    return (v if v >= 0 else ~v).bit_length() + 1


def xorshift32(seed: int, n: int) -> list[int]:
    """``n`` successive 32-bit states of Marsaglia's xorshift (13, 17, 5)."""
    x = seed & _MASK32
    if x == 0:
        raise ValueError("xorshift32 seed must be nonzero mod 2^32")
    a, b, c = XORSHIFT_SHIFTS
    out = []
    for _ in range(n):
        x ^= (x << a) & _MASK32
        x ^= x >> b
        x ^= (x << c) & _MASK32
        out.append(x)
    return out


@dataclass(frozen=True)
class Stimulus:
    """Input stream of ``width``-bit two's-complement samples.

    ``prng`` takes the top ``width`` bits of each xorshift32 state. Impulse
    and step carry ``amplitude`` (default 1, so their default width is 2).
    ``file`` reads one decimal integer per line from ``path``.
    """

    kind: str
    length: int = 64
    seed: int = DEFAULT_SEED
    width: int | None = None
    amplitude: int = 1
    path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown stimulus kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise ValueError("file stimulus needs a path")
        if self.kind != "file" and self.length < 1:
            raise ValueError("stimulus length must be positive")
        if self.width is None:
            object.__setattr__(self, "width", 1 if self.kind == "prng" else
                               max(signed_width(self.amplitude), 2 if self.kind != "file" else 16))
        if self.width < 1:
            raise ValueError("sample width must be at least 1 bit")

    @property
    def label(self) -> str:
        if self.kind == "prng":
            return f"prng(seed={self.seed:#x}, n={self.length}, bits={self.width})"
        if self.kind == "file":
            return f"file({self.path})"
        return f"{self.kind}(n={self.length})"

    def samples(self) -> list[int]:
        if self.kind == "impulse":
            x = [self.amplitude] + [0] * (self.length - 1)
        elif self.kind == "step":
            x = [self.amplitude] * self.length
        elif self.kind == "prng":
            shift = 32 - self.width
            x = [wrap(s >> shift, self.width) for s in xorshift32(self.seed, self.length)]
        else:
            text = Path(self.path).read_text()
            x = [int(tok) for tok in text.split()]
        lo, hi = -(1 << (self.width - 1)), (1 << (self.width - 1)) - 1
        bad = next((v for v in x if not lo <= v <= hi), None)
        if bad is not None:
            raise ValueError(f"sample {bad} does not fit {self.width}-bit two's complement")
        return x


def _samples(x) -> list[int]:
    return x.samples() if isinstance(x, Stimulus) else [int(v) for v in x]


# -- kernels --------------------------------------------------------------------

def fir_decimate(h: IntPoly, D: int, x) -> list[int]:
    """y[n] = sum_i h(i) x[nD - i] for every nD inside the input."""
    if D < 1:
        raise ValueError("decimation factor must be >= 1")
    x = _samples(x)
    taps = [(i, c) for i, c in enumerate(h.coeffs) if c]
    return [sum(c * x[k - i] for i, c in taps if k >= i) for k in range(0, len(x), D)]


def polyphase_decimate(bank: PolyphaseBank, x) -> list[int]:
    """Commutator feeds branch i with x[nD - i]; each branch runs at the low rate."""
    x = _samples(x)
    D = bank.D
    n_out = (len(x) + D - 1) // D
    y = [0] * n_out
    for i, e in enumerate(bank.components):
        if e.is_zero():
            continue
        branch = [x[n * D - i] if n * D >= i else 0 for n in range(n_out)]
        taps = [(t, c) for t, c in enumerate(e.coeffs) if c]
        for n in range(n_out):
            y[n] += sum(c * branch[n - t] for t, c in taps if n >= t)
    return y


def _fir(p: IntPoly, x: list[int], width: int) -> list[int]:
    taps = [(i, c) for i, c in enumerate(p.coeffs) if c]
    return [wrap(sum(c * x[n - i] for i, c in taps if n >= i), width) for n in range(len(x))]


def _iir(p: IntPoly, x: list[int], width: int) -> list[int]:
    # y[n] = x[n] - sum_{i >= 1} p_i y[n - i]; p_0 = 1 for every section kind.
    fb = [(i, c) for i, c in enumerate(p.coeffs) if c and i]
    y: list[int] = []
    for n, v in enumerate(x):
        acc = v
        for i, c in fb:
            if n >= i:
                acc -= c * y[n - i]
        y.append(wrap(acc, width))
    return y


def _run_form(form: RationalForm, x: list[int], width: int) -> list[int]:
    """Integrators (denominator) first, then combs (numerator)."""
    for f, e in form.denominator_factors():
        for _ in range(e):
            x = _iir(f.poly(), x, width)
    for f, e in form.numerator_factors():
        for _ in range(e):
            x = _fir(f.poly(), x, width)
    return x


def recursive_decimate(pre: RationalForm, D: int, post: RationalForm, x, width: int,
                       required: int | None = None) -> list[int]:
    """Sections of ``pre`` at the input rate, keep every D-th sample, then ``post``.

    All registers are ``width`` bits wide and wrap. When ``required`` (the
    planned width) exceeds ``width`` an :class:`OverflowRiskWarning` is
    issued and the run proceeds.
    """
    if required is not None and width < required:
        warnings.warn(f"{width}-bit registers below the planned {required} bits",
                      OverflowRiskWarning, stacklevel=2)
    x = [wrap(v, width) for v in _samples(x)]
    y = _run_form(pre, x, width)[::D]
    return _run_form(post, y, width)


# -- architectures ----------------------------------------------------------------

@dataclass
class Architecture:
    """A runnable structure; ``latency`` is its output delay in output samples."""

    name: str
    latency: int = 0

    def run(self, x) -> list[int]:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass
class DirectArchitecture(Architecture):
    h: IntPoly = field(default_factory=IntPoly.one)
    D: int = 1

    def run(self, x) -> list[int]:
        return fir_decimate(self.h, self.D, x)


@dataclass
class PolyphaseArchitecture(Architecture):
    bank: PolyphaseBank | None = None

    def run(self, x) -> list[int]:
        return polyphase_decimate(self.bank, x)


@dataclass
class RecursiveArchitecture(Architecture):
    pre: RationalForm = field(default_factory=RationalForm.identity)
    D: int = 1
    post: RationalForm = field(default_factory=RationalForm.identity)
    width: int = 32
    required: int | None = None

    def run(self, x) -> list[int]:
        return recursive_decimate(self.pre, self.D, self.post, x, self.width, self.required)


@dataclass
class CascadeArchitecture(Architecture):
    graph: StageGraph | None = None

    def run(self, x) -> list[int]:
        y = _samples(x)
        for s in self.graph.stages:
            y = [wrap(v, s.width_bits) for v in fir_decimate(s.impulse(), s.decimate_by, y)]
        return y


def default_architectures(orders, D: int, R_in: int) -> list[Architecture]:
    """Direct (reference), polyphase, recursive and, when applicable, cascade."""
    h = expand_impulse(orders)
    planned = R_in + bit_growth(h)
    pre, post = noble_shift(recursive_cic_form(orders), D)
    out: list[Architecture] = [
        DirectArchitecture("direct", h=h, D=D),
        PolyphaseArchitecture("polyphase", bank=polyphase_decompose(h, D)),
        RecursiveArchitecture("recursive", pre=pre, D=D, post=post, width=planned, required=planned),
    ]
    casc = cascade_pow2_stages(orders, D)
    if casc is not None:
        out.append(CascadeArchitecture("cascade", graph=wordlength_plan(casc, R_in)))
    return out


# -- equivalence -------------------------------------------------------------------

@dataclass(frozen=True)
class StimulusRun:
    stimulus: str
    streams: dict[str, list[int]]
    mismatch: dict[str, int | None]
    max_width: int

    @property
    def passed(self) -> bool:
        return all(v is None for v in self.mismatch.values())


@dataclass(frozen=True)
class RunReport:
    runs: tuple[StimulusRun, ...]
    latencies: dict[str, int]
    warnings: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.runs)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def first_mismatch(self) -> tuple[str, str, int] | None:
        """(stimulus, architecture, output index) of the first disagreement."""
        for r in self.runs:
            for name, idx in r.mismatch.items():
                if idx is not None:
                    return r.stimulus, name, idx
        return None

    @property
    def max_width(self) -> int:
        return max((r.max_width for r in self.runs), default=0)

    def as_dict(self, include_streams: bool = False) -> dict:
        doc = {
            "verdict": self.verdict,
            "latencies": self.latencies,
            "max_width_bits": self.max_width,
            "first_mismatch": self.first_mismatch,
            "warnings": list(self.warnings),
            "runs": [],
        }
        for r in self.runs:
            entry = {"stimulus": r.stimulus, "passed": r.passed, "mismatch": r.mismatch,
                     "outputs": {k: len(v) for k, v in r.streams.items()}}
            if include_streams:
                entry["streams"] = r.streams
            doc["runs"].append(entry)
        return doc


def _first_diff(ref: list[int], ref_lat: int, y: list[int], lat: int) -> int | None:
    a, b = ref[ref_lat:], y[lat:]
    for n, (u, v) in enumerate(zip(a, b)):
        if u != v:
            return n
    return None if len(a) == len(b) else min(len(a), len(b))


def equivalence_check(orders, D: int, stimuli: Sequence[Stimulus],
                      architectures: Sequence[Architecture] | None = None) -> RunReport:
    """Run every architecture on every stimulus and compare against the first.

    Streams are aligned by each architecture's declared latency. When
    ``architectures`` is None the default set is built per stimulus width.
    """
    orders = as_orders(orders)
    runs, latencies, notes = [], {}, []
    for stim in stimuli:
        x = stim.samples()
        archs = list(architectures) if architectures is not None else \
            default_architectures(orders, D, stim.width)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", OverflowRiskWarning)
            streams = {a.name: a.run(x) for a in archs}
        notes.extend(str(w.message) for w in caught if issubclass(w.category, OverflowRiskWarning))
        ref = archs[0]
        mismatch = {a.name: _first_diff(streams[ref.name], ref.latency, streams[a.name], a.latency)
                    for a in archs[1:]}
        width = max((signed_width(v) for s in streams.values() for v in s), default=1)
        runs.append(StimulusRun(stim.label, streams, mismatch, width))
        latencies.update({a.name: a.latency for a in archs})
    return RunReport(tuple(runs), latencies, tuple(dict.fromkeys(notes)))
