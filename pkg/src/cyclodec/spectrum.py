"""Folding bands, normalized CP magnitude responses and attenuation tables.

Sign convention: attenuation is a positive number of dB. A cascade meets
its mask when sum_q m_q * dev(q) <= R_p and, for every folding band k,
sum_q m_q * att(k, q) >= A_s.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cyclotomic import cyclotomic_poly, cyclotomic_unchecked, dc_gain
from .polynomial import IntPoly

DB_TOL = 0.01
DEFAULT_GRID = 1024

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class SpecError(ValueError):
    """Design specification is inconsistent."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(1 << 40)


@dataclass(frozen=True)
class DesignSpec:
    """One decimation stage.

    ``f_c`` defaults to 1/(2 D nu), the first-stage signal edge when the
    oversampling ratio is D * nu. Validation requires 0 < f_c <= 1/(2D);
    the equality case (a Nyquist-edge final stage) is representable but
    rejected by :func:`folding_bands`.
    """

    D: int
    nu: int = 1
    R_p: float = 1.0
    A_s: float = 50.0
    f_c: Fraction | None = None
    grid: int = DEFAULT_GRID

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 2:
            raise SpecError(f"D must be an integer >= 2, got {self.D}")
        if int(self.nu) != self.nu or self.nu < 1:
            raise SpecError(f"nu must be an integer >= 1, got {self.nu}")
        fc = Fraction(1, 2 * self.D * self.nu) if self.f_c is None else _frac(self.f_c)
        object.__setattr__(self, "f_c", fc)
        if not 0 < fc <= Fraction(1, 2 * self.D):
            raise SpecError(f"f_c = {fc} must lie in (0, 1/(2D)] = (0, {Fraction(1, 2 * self.D)}]")
        if not self.R_p > 0:
            raise SpecError(f"R_p must be positive, got {self.R_p}")
        if not self.A_s >= 0:
            raise SpecError(f"A_s must be non-negative, got {self.A_s}")
        if self.grid < 64:
            raise SpecError(f"grid must be >= 64, got {self.grid}")

    @property
    def rho(self) -> int:
        return self.D * self.nu

    @property
    def delta_p(self) -> float:
        """Passband ripple from R_p = -20 log10((1 - d)/(1 + d))."""
        r = 10.0 ** (-self.R_p / 20.0)
        return (1.0 - r) / (1.0 + r)

    @property
    def delta_s(self) -> float:
        return 10.0 ** (-self.A_s / 20.0)


@dataclass(frozen=True)
class Band:
    lo: Fraction
    hi: Fraction

    def contains(self, f: Fraction) -> bool:
        return self.lo <= f <= self.hi

    def __iter__(self):
        return iter((self.lo, self.hi))


def band_count(D: int) -> int:
    return D // 2 if D % 2 == 0 else (D - 1) // 2


def folding_bands(D: int, f_c) -> list[Band]:
    """Intervals [k/D - f_c, k/D + f_c], k = 1..k_M, clipped at 1/2."""
    fc = _frac(f_c)
    if D < 2:
        raise SpecError(f"D must be >= 2, got {D}")
    if not 0 < fc < Fraction(1, 2 * D):
        raise SpecError(f"f_c = {fc} must satisfy 0 < f_c < 1/(2D) = {Fraction(1, 2 * D)}")
    half = Fraction(1, 2)
    return [Band(Fraction(k, D) - fc, min(Fraction(k, D) + fc, half)) for k in range(1, band_count(D) + 1)]


def stage_specs(factors: Sequence[int], f_o_cutoff, R_p: float, A_s: float, grid: int = DEFAULT_GRID) -> list[DesignSpec]:
    """Per-stage specs of a multistage chain; f_c grows by D_i at each stage."""
    if not factors:
        raise SpecError("at least one decimation factor is required")
    if any(d < 2 for d in factors):
        raise SpecError(f"every decimation factor must be >= 2, got {list(factors)}")
    fc = _frac(f_o_cutoff)
    if fc * math.prod(factors) > Fraction(1, 2):
        raise SpecError(f"output cutoff {fc * math.prod(factors)} exceeds Nyquist after decimating by {math.prod(factors)}")
    specs = []
    for i, d in enumerate(factors):
        nu = math.prod(factors[i + 1:])
        specs.append(DesignSpec(D=d, nu=nu, R_p=R_p, A_s=A_s, f_c=fc, grid=grid))
        fc *= d
    return specs


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class _Poly:
    coeffs: np.ndarray
    norm: float
    poly: IntPoly


def _prep(p: IntPoly, norm: float) -> _Poly:
    return _Poly(np.asarray(p.coeffs[::-1], dtype=float), float(norm), p)


def _is_exact_zero(p: IntPoly, f: float) -> bool:
    # p vanishes at e^{-j 2 pi a/b} (gcd(a, b) = 1) iff C_b divides p.
    r = Fraction(f).limit_denominator(1 << 20)
    if abs(float(r) - f) > 1e-15:
        return False
    try:
        _, rem = divmod(p, cyclotomic_unchecked(r.denominator))
    except ArithmeticError:
        return False
    return rem.is_zero()


def _gain(pp: _Poly, f: np.ndarray) -> np.ndarray:
    if f.size <= 64:
        taps = np.arange(len(pp.coeffs) - 1, -1, -1)
        mag = np.abs(np.exp(-2j * np.pi * np.outer(f.ravel(), taps)) @ pp.coeffs).reshape(f.shape)
    else:
        mag = np.abs(np.polyval(pp.coeffs, np.exp(-2j * np.pi * f)))
    with np.errstate(divide="ignore"):
        out = 20.0 * np.log10(mag / pp.norm)
    scale = float(np.abs(pp.coeffs).sum())
    near = np.flatnonzero(mag <= 1e-9 * scale)
    for i in near:
        if _is_exact_zero(pp.poly, float(f.flat[i])):
            out.flat[i] = -np.inf
    return out


def gain_db(p: IntPoly, f, norm: float = 1.0):
    """20 log10(|sum_i c_i e^{-j 2 pi f i}| / norm); -inf at exact zeros.

    ``f`` may be a scalar or array of frequencies in cycles/sample.
    """
    if not norm > 0:
        raise ValueError("norm must be positive")
    arr = np.asarray([float(v) for v in f] if isinstance(f, (list, tuple)) else f, dtype=float)
    out = _gain(_prep(p, norm), np.atleast_1d(arr))
    return float(out[0]) if arr.ndim == 0 else out


def _golden_max(fun, lo: np.ndarray, hi: np.ndarray, iters: int = 40) -> np.ndarray:
    """Vectorized golden-section maximization on independent brackets."""
    a, b = lo.copy(), hi.copy()
    for _ in range(iters):
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        left = fun(c) > fun(d)
        a, b = np.where(left, a, c), np.where(left, d, b)
    return np.maximum(fun(a), fun(b))


def _bands_max(fun, lo: np.ndarray, hi: np.ndarray, n: int, extra: Sequence[Sequence[float]] = ()) -> np.ndarray:
    """Maximum of ``fun`` over each closed interval [lo[k], hi[k]].

    Dense grid with both endpoints (plus any ``extra[k]`` points), then a
    golden-section polish around each grid argmax.
    """
    t = np.linspace(0.0, 1.0, n)
    grid = lo[:, None] + (hi - lo)[:, None] * t[None, :]
    vals = fun(grid.ravel()).reshape(grid.shape)
    best = vals.max(axis=1)
    for k, pts in enumerate(extra):
        if len(pts):
            best[k] = max(best[k], float(np.max(fun(np.asarray(pts, dtype=float)))))
    i = vals.argmax(axis=1)
    step = (hi - lo) / (n - 1)
    centre = grid[np.arange(len(lo)), i]
    a = np.maximum(lo, centre - step)
    b = np.minimum(hi, centre + step)
    return np.maximum(best, _golden_max(fun, a, b))


@dataclass(frozen=True)
class AttenuationTable:
    """dev[q]: worst |gain| in the closed passband (dB, may be +inf).
    att[(k, q)]: least attenuation of normalized C_q in folding band k (dB).
    """

    S: tuple[int, ...]
    bands: tuple[Band, ...]
    dev: Mapping[int, float] = field(default_factory=dict)
    att: Mapping[tuple[int, int], float] = field(default_factory=dict)

    @property
    def n_bands(self) -> int:
        return len(self.bands)

    def att_row(self, k: int) -> list[float]:
        return [self.att[(k, q)] for q in self.S]

    def dev_row(self) -> list[float]:
        return [self.dev[q] for q in self.S]


def _folded_zeros(q: int) -> list[Fraction]:
    return sorted({min(Fraction(i, q), 1 - Fraction(i, q)) for i in range(1, q) if math.gcd(i, q) == 1})


def cp_passband_deviation(q: int, f_c, grid: int = DEFAULT_GRID) -> float:
    """Largest |gain_db| of normalized C_q on the closed passband [0, f_c]."""
    fc = _frac(f_c)
    if any(z <= fc for z in _folded_zeros(q)):
        return math.inf
    pp = _prep(cyclotomic_poly(q), dc_gain(q))
    worst = _bands_max(lambda f: np.abs(_gain(pp, f)), np.array([0.0]), np.array([float(fc)]), grid)
    return float(worst[0])


def cp_band_attenuations(q: int, bands: Sequence[Band], grid: int = DEFAULT_GRID) -> list[float]:
    """Least attenuation (dB) of normalized C_q in each band."""
    pp = _prep(cyclotomic_poly(q), dc_gain(q))
    zeros = _folded_zeros(q)
    lo = np.array([float(b.lo) for b in bands])
    hi = np.array([float(b.hi) for b in bands])
    extra = [[float(z) for z in zeros if b.contains(z)] for b in bands]
    return (-_bands_max(lambda f: _gain(pp, f), lo, hi, grid, extra)).tolist()


def attenuation_table(S: Sequence[int], spec: DesignSpec) -> AttenuationTable:
    if not S:
        raise SpecError("eligible set is empty")
    if any(q < 2 for q in S):
        raise SpecError("q = 1 cannot be normalized and is never tabulated")
    bands = folding_bands(spec.D, spec.f_c)
    dev = {q: cp_passband_deviation(q, spec.f_c, spec.grid) for q in S}
    att = {}
    for q in S:
        for k, a in enumerate(cp_band_attenuations(q, bands, spec.grid), start=1):
            att[(k, q)] = a
    return AttenuationTable(tuple(S), tuple(bands), dev, att)


def _composite(orders: Mapping[int, int], f: np.ndarray) -> np.ndarray:
    out = np.zeros_like(f, dtype=float)
    for q in sorted(orders):
        m = orders[q]
        if m:
            out = out + m * _gain(_prep(cyclotomic_poly(q), dc_gain(q)), f)
    return out


def composite_response(orders: Mapping[int, int], grid: int = 2048) -> list[tuple[float, float]]:
    """Normalized composite gain in dB at ``grid`` points over [0, 1/2]."""
    f = np.linspace(0.0, 0.5, grid)
    return list(zip(f.tolist(), _composite(orders, f).tolist()))


def write_response_csv(points: Iterable[tuple[float, float]], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["f", "db"])
    for f, db in points:
        w.writerow([repr(float(f)), repr(float(db))])


@dataclass(frozen=True)
class VerifyReport:
    passband_dev_db: float
    band_attenuation_db: tuple[float, ...]
    R_p: float
    A_s: float
    tol: float = DB_TOL

    @property
    def ripple_ok(self) -> bool:
        return self.passband_dev_db <= self.R_p + self.tol

    @property
    def band_ok(self) -> tuple[bool, ...]:
        return tuple(a >= self.A_s - self.tol for a in self.band_attenuation_db)

    @property
    def passed(self) -> bool:
        return self.ripple_ok and all(self.band_ok)

    def as_dict(self) -> dict:
        return {
            "passband_dev_db": self.passband_dev_db,
            "Rp_db": self.R_p,
            "ripple_ok": self.ripple_ok,
            "band_attenuation_db": list(self.band_attenuation_db),
            "As_db": self.A_s,
            "band_ok": list(self.band_ok),
            "passed": self.passed,
        }


def verify_spec(orders: Mapping[int, int], spec: DesignSpec, grid: int | None = None) -> VerifyReport:
    """Direct check of the composite response on a dense per-band grid."""
    n = grid if grid is not None else 4 * spec.grid
    fp = np.linspace(0.0, float(spec.f_c), n)
    dev = float(np.max(np.abs(_composite(orders, fp))))
    atts = []
    for band in folding_bands(spec.D, spec.f_c):
        fb = np.linspace(float(band.lo), float(band.hi), n)
        atts.append(-float(np.max(_composite(orders, fb))))
    return VerifyReport(dev, tuple(atts), spec.R_p, spec.A_s)
