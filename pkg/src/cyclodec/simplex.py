"""Bounded-variable primal simplex for small dense LPs.

Solves  min c.x  s.t.  A x <= b,  lo <= x <= hi  (lo, hi finite)

with a two-phase method. Nonbasic variables sit at either bound, so
branch-and-bound children only tighten ``lo``/``hi`` and never add rows.
Bland's rule (lowest index enters, lowest index leaves on ties) rules out
cycling on degenerate pivots.

A solve may be warm-started from an earlier optimal basis of the same
A, b, c with different bounds: that basis stays dual feasible, so a bounded
dual simplex restores primal feasibility in a few pivots.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-11
REFACTOR_EVERY = 50

_BASIC, _LOWER, _UPPER = -1, 0, 1


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible"
    x: np.ndarray | None
    objective: float
    iterations: int
    warm: tuple | None = None  # (basis, state) over [x, slacks], reusable as a warm start


class _Tableau:
    def __init__(self, M: np.ndarray, b: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                 basis: list[int], state: np.ndarray, value: np.ndarray):
        self.M, self.b = M, b
        self.lo, self.hi = lo, hi
        self.basis = basis
        self.state = state
        self.value = value
        self.iterations = 0
        self.refactor()

    def refactor(self) -> None:
        B = self.M[:, self.basis]
        self.T = np.linalg.solve(B, self.M)
        nonbasic = self.state != _BASIC
        rhs = self.b - self.M[:, nonbasic] @ self.value[nonbasic]
        self.value[self.basis] = np.linalg.solve(B, rhs)

    def run_dual(self, cost: np.ndarray, max_iter: int) -> bool:
        """Dual simplex from a dual-feasible basis. False means infeasible."""
        basis = np.asarray(self.basis)
        while True:
            if self.iterations >= max_iter:
                raise RuntimeError("simplex iteration limit reached")
            xb = self.value[basis]
            below = self.lo[basis] - xb
            above = xb - self.hi[basis]
            bad = np.flatnonzero((below > FEAS_TOL) | (above > FEAS_TOL))
            if bad.size == 0:
                return True
            i = int(bad[np.argmin(basis[bad])])
            up = below[i] > FEAS_TOL
            row = self.T[i]
            nonbasic = (self.state != _BASIC) & (self.hi > self.lo)
            at_lo = self.state == _LOWER
            # Entering x_j must move x_B[i] toward its violated bound.
            if up:
                ok = nonbasic & ((at_lo & (row < -PIVOT_TOL)) | (~at_lo & (row > PIVOT_TOL)))
            else:
                ok = nonbasic & ((at_lo & (row > PIVOT_TOL)) | (~at_lo & (row < -PIVOT_TOL)))
            cand = np.flatnonzero(ok)
            if cand.size == 0:
                return False
            d = cost - cost[basis] @ self.T
            ratio = np.abs(d[cand]) / np.abs(row[cand])
            j = int(cand[np.flatnonzero(ratio <= ratio.min() + OPT_TOL)[0]])
            out = int(basis[i])
            self.state[out] = _LOWER if up else _UPPER
            self.value[out] = self.lo[out] if up else self.hi[out]
            self.state[j] = _BASIC
            basis[i] = j
            self.basis = [int(v) for v in basis]
            self.iterations += 1
            self.refactor()

    def run(self, cost: np.ndarray, max_iter: int) -> None:
        since = 0
        while True:
            if self.iterations >= max_iter:
                raise RuntimeError("simplex iteration limit reached")
            if since >= REFACTOR_EVERY:
                self.refactor()
                since = 0
            d = cost - cost[self.basis] @ self.T
            movable = self.hi > self.lo
            enter = np.flatnonzero(
                ((self.state == _LOWER) & (d < -OPT_TOL) & movable)
                | ((self.state == _UPPER) & (d > OPT_TOL))
            )
            if enter.size == 0:
                return
            j = int(enter[0])
            step_dir = 1.0 if self.state[j] == _LOWER else -1.0
            col = self.T[:, j] * step_dir
            xb = self.value[self.basis]
            lob = self.lo[self.basis]
            hib = self.hi[self.basis]

            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(col > PIVOT_TOL, (xb - lob) / col,
                             np.where(col < -PIVOT_TOL, (hib - xb) / -col, np.inf))
            t = np.maximum(t, 0.0)
            theta = float(t.min()) if t.size else np.inf
            leave = -1
            leave_to = _LOWER
            if np.isfinite(theta):
                # Bland: among near-ties, the lowest variable index leaves.
                ties = np.flatnonzero(t <= theta + FEAS_TOL)
                leave = int(ties[np.argmin(np.asarray(self.basis)[ties])])
                theta = float(t[leave])
                leave_to = _LOWER if col[leave] > 0 else _UPPER

            flip = self.hi[j] - self.lo[j]
            if flip <= theta + FEAS_TOL:
                self.value[self.basis] = xb - flip * col
                self.value[j] = self.hi[j] if step_dir > 0 else self.lo[j]
                self.state[j] = _UPPER if step_dir > 0 else _LOWER
            elif leave < 0:
                raise RuntimeError("LP unbounded; every structural variable must be bounded")
            else:
                self.value[self.basis] = xb - theta * col
                self.value[j] += step_dir * theta
                out = self.basis[leave]
                self.value[out] = self.lo[out] if leave_to == _LOWER else self.hi[out]
                self.state[out] = leave_to
                self.state[j] = _BASIC
                self.basis[leave] = j
                piv = self.T[leave, j]
                self.T[leave] /= piv
                others = np.arange(self.T.shape[0]) != leave
                self.T[others] -= np.outer(self.T[others, j], self.T[leave])
            self.iterations += 1
            since += 1


def _warm_solve(c, A, b, lo, hi, warm, max_iter) -> LPResult | None:
    m, n = A.shape
    basis, state = warm
    M = np.hstack([A, np.eye(m)])
    lo_all = np.concatenate([lo, np.zeros(m)])
    hi_all = np.concatenate([hi, np.full(m, np.inf)])
    state = np.array(state, dtype=int)
    value = np.where(state == _UPPER, hi_all, lo_all)
    try:
        tab = _Tableau(M, b, lo_all, hi_all, list(basis), state, value)
        cost = np.concatenate([c, np.zeros(m)])
        if not tab.run_dual(cost, max_iter):
            return LPResult("infeasible", None, np.inf, tab.iterations)
        tab.run(cost, max_iter)
        tab.refactor()
    except (np.linalg.LinAlgError, RuntimeError):
        return None
    if np.any(tab.value[tab.basis] < lo_all[tab.basis] - 1e-7) or np.any(tab.value[tab.basis] > hi_all[tab.basis] + 1e-7):
        return None
    return _result(c, lo, hi, tab, n + m)


def _result(c, lo, hi, tab: _Tableau, width: int) -> LPResult:
    n = len(c)
    x = np.clip(tab.value[:n], lo, hi)
    warm = None
    if all(k < width for k in tab.basis):
        warm = (tuple(tab.basis), tuple(int(v) for v in tab.state[:width]))
    return LPResult("optimal", x, float(c @ x), tab.iterations, warm)


def linprog_bounded(c, A, b, lo, hi, max_iter: int = 20000, warm=None) -> LPResult:
    """Minimize ``c @ x`` subject to ``A @ x <= b`` and ``lo <= x <= hi``.

    ``warm`` is the ``warm`` field of an earlier result on the same c, A, b.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    m, n = A.shape
    if np.any(lo > hi + FEAS_TOL):
        return LPResult("infeasible", None, np.inf, 0)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("structural bounds must be finite")
    if warm is not None:
        res = _warm_solve(c, A, b, lo, hi, warm, max_iter)
        if res is not None:
            return res

    resid = b - A @ lo
    short = np.flatnonzero(resid < 0)
    na = len(short)
    art = np.zeros((m, na))
    art[short, np.arange(na)] = -1.0
    M = np.hstack([A, np.eye(m), art])
    N = n + m + na
    lo_all = np.concatenate([lo, np.zeros(m + na)])
    hi_all = np.concatenate([hi, np.full(m + na, np.inf)])

    basis = [n + i for i in range(m)]
    for k, i in enumerate(short):
        basis[i] = n + m + k
    state = np.full(N, _LOWER, dtype=int)
    state[basis] = _BASIC
    value = lo_all.copy()

    tab = _Tableau(M, b, lo_all, hi_all, basis, state, value)
    scale = max(1.0, float(np.max(np.abs(b))) if m else 1.0)

    if na:
        phase1 = np.zeros(N)
        phase1[n + m:] = 1.0
        tab.run(phase1, max_iter)
        tab.refactor()
        if tab.value[n + m:].sum() > FEAS_TOL * scale * 10:
            return LPResult("infeasible", None, np.inf, tab.iterations)
        # Pin artificials at zero; basic ones stay degenerate.
        tab.hi[n + m:] = 0.0
        tab.refactor()

    phase2 = np.zeros(N)
    phase2[:n] = c
    tab.run(phase2, max_iter)
    tab.refactor()
    return _result(c, lo, hi, tab, n + m)
