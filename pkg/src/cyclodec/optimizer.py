"""Adder-minimizing integer program over CP orders.

    minimize    sum_q m_q (N_a,q + gamma N_d,q)
    subject to  sum_q m_q dev(q)   <= R_p
                sum_q m_q att(k,q) >= A_s     k = 1..k_M
                0 <= m_q <= u_q, m_q integer

solved exactly by depth-first branch and bound over LP relaxations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .catalog import CostEntry
from .simplex import linprog_bounded
from .spectrum import AttenuationTable, DesignSpec

DEFAULT_CAP = 16
CONSTRAINT_EPS = 1e-6
INT_TOL = 1e-6

OPTIMAL = "optimal"
FEASIBLE = "feasible"  # a heuristic point, optimality not proven
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Problem:
    """Row 0 of ``A`` is the ripple row (<= b[0]); rows 1.. are band rows (>= b[k])."""

    S: tuple[int, ...]
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        n = len(self.S)
        if self.c.shape != (n,) or self.u.shape != (n,) or self.A.shape != (len(self.b), n):
            raise ValueError("inconsistent problem dimensions")

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def ub_form(self) -> tuple[np.ndarray, np.ndarray]:
        """All rows as A_ub x <= b_ub."""
        sign = np.ones(self.n_rows)
        sign[1:] = -1.0
        return self.A * sign[:, None], self.b * sign

    def violation(self, m) -> float:
        A_ub, b_ub = self.ub_form()
        return float(np.max(A_ub @ np.asarray(m, dtype=float) - b_ub, initial=-np.inf))

    def feasible(self, m, eps: float = CONSTRAINT_EPS) -> bool:
        m = np.asarray(m)
        if np.any(m < 0) or np.any(m > self.u):
            return False
        return self.violation(m) <= eps

    def cost(self, m) -> float:
        return float(self.c @ np.asarray(m, dtype=float))

    def scaled(self, factor: float) -> Problem:
        """Attenuation rows and their targets multiplied by ``factor``."""
        A, b = self.A.copy(), self.b.copy()
        A[1:] *= factor
        b[1:] *= factor
        return Problem(self.S, self.c, A, b, self.u)


@dataclass(frozen=True)
class Solution:
    S: tuple[int, ...]
    m: tuple[int, ...]
    cost: float
    status: str
    node_count: int = 0
    lp_bound: float = math.nan
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def orders(self) -> dict[int, int]:
        return {q: k for q, k in zip(self.S, self.m) if k}


def build_problem(spec: DesignSpec, S: Sequence[int], table: AttenuationTable,
                  costs: Mapping[int, CostEntry] | Sequence[CostEntry], gamma: float = 0.0,
                  cap: int = DEFAULT_CAP) -> Problem:
    """Assemble c, A, b, u. A CP with a zero on the closed passband gets
    dev = +inf in the table; its column is zeroed and its order capped at 0."""
    if not S:
        raise ValueError("eligible set is empty")
    if not isinstance(costs, Mapping):
        costs = {e.q: e for e in costs}
    missing = [q for q in S if q not in costs or q not in table.dev]
    if missing:
        raise ValueError(f"table or costs missing entries for {missing}")
    n = len(S)
    k_m = table.n_bands
    c = np.array([costs[q].cost(gamma) for q in S], dtype=float)
    A = np.zeros((k_m + 1, n))
    u = np.zeros(n, dtype=int)
    for j, q in enumerate(S):
        dev = table.dev[q]
        if math.isinf(dev):
            u[j] = 0
        else:
            A[0, j] = dev
            u[j] = math.floor(spec.R_p / dev + 1e-9) if dev > 0 else cap
        for k in range(1, k_m + 1):
            A[k, j] = table.att[(k, q)]
    b = np.array([spec.R_p] + [spec.A_s] * k_m, dtype=float)
    return Problem(tuple(S), c, A, b, u)


def greedy_incumbent(p: Problem) -> Solution:
    """Increment the variable with the best deficit reduction per unit cost
    until every band row is met; ripple row and bounds are never exceeded.

    Status is ``feasible`` on success and ``infeasible`` when it gets stuck,
    which does not mean the problem itself is infeasible."""
    n = len(p.S)
    m = np.zeros(n, dtype=int)
    band_A, band_b = p.A[1:], p.b[1:]

    def deficit(x):
        return float(np.clip(band_b - band_A @ x, 0.0, None).sum())

    cur = deficit(m)
    while cur > CONSTRAINT_EPS:
        best_j, best_ratio, best_def = -1, 0.0, cur
        for j in range(n):
            if m[j] >= p.u[j] or p.A[0] @ m + p.A[0, j] > p.b[0] + CONSTRAINT_EPS:
                continue
            m[j] += 1
            d = deficit(m)
            m[j] -= 1
            gain = cur - d
            if gain <= CONSTRAINT_EPS:
                continue
            ratio = math.inf if p.c[j] <= 0 else gain / p.c[j]
            if ratio > best_ratio:
                best_j, best_ratio, best_def = j, ratio, d
        if best_j < 0:
            return Solution(p.S, tuple(int(v) for v in m), p.cost(m), INFEASIBLE)
        m[best_j] += 1
        cur = best_def
    return Solution(p.S, tuple(int(v) for v in m), p.cost(m), FEASIBLE if p.feasible(m) else INFEASIBLE)


@dataclass
class _Search:
    nodes: int = 0
    lp_iterations: int = 0
    root_bound: float = math.nan


def _branch_and_bound(c, A_ub, b_ub, lo, hi, incumbent, check, stats: _Search):
    """Depth-first B&B, most-fractional branching, floor child first.

    ``incumbent`` is (value, x) or None; returns the best (value, x) found.
    ``check`` validates a rounded integral point against the true rows.
    """
    integral_obj = np.allclose(c, np.round(c))
    best = incumbent
    stack = [(lo.astype(float), hi.astype(float), None)]
    root = True
    while stack:
        nlo, nhi, warm = stack.pop()
        res = linprog_bounded(c, A_ub, b_ub, nlo, nhi, warm=warm)
        stats.nodes += 1
        stats.lp_iterations += res.iterations
        if root:
            stats.root_bound = res.objective
            root = False
        if res.status != "optimal":
            continue
        bound = math.ceil(res.objective - INT_TOL) if integral_obj else res.objective
        if best is not None and bound >= best[0] - (0.5 if integral_obj else 1e-9):
            continue
        x = res.x
        frac = np.abs(x - np.round(x))
        if np.all(frac <= INT_TOL):
            xi = np.round(x).astype(int)
            val = float(c @ xi)
            if check(xi) and (best is None or val < best[0] - 1e-9):
                best = (val, xi)
            continue
        j = int(np.argmax(frac))
        up_lo, down_hi = nlo.copy(), nhi.copy()
        up_lo[j] = math.ceil(x[j])
        down_hi[j] = math.floor(x[j])
        stack.append((up_lo, nhi, res.warm))
        stack.append((nlo, down_hi, res.warm))
    return best


def solve(p: Problem) -> Solution:
    """Provably optimal orders; among equal-cost optima the lexicographically
    smallest m (in the order of ``p.S``) is returned."""
    n = len(p.S)
    A_ub, b_ub = p.ub_form()
    stats = _Search()
    lo = np.zeros(n)
    hi = p.u.astype(float)

    def check(x):
        return p.feasible(x)

    greedy = greedy_incumbent(p)
    inc = (greedy.cost, np.array(greedy.m)) if greedy.status == FEASIBLE else None
    best = _branch_and_bound(p.c, A_ub, b_ub, lo, hi, inc, check, stats)
    root_bound = stats.root_bound
    if best is None:
        return Solution(p.S, (0,) * n, math.inf, INFEASIBLE, stats.nodes, root_bound)
    opt_cost, x = best

    # Lexicographic tie-break: minimize m_j in turn with cost pinned at the optimum.
    A_lex = np.vstack([A_ub, p.c])
    b_lex = np.append(b_ub, opt_cost + CONSTRAINT_EPS)
    fixed_lo, fixed_hi = lo.copy(), hi.copy()
    for j in range(n):
        if x[j] > 0 and fixed_hi[j] > fixed_lo[j]:
            obj = np.zeros(n)
            obj[j] = 1.0
            sub = _branch_and_bound(obj, A_lex, b_lex, fixed_lo, fixed_hi, (float(x[j]), x), check, stats)
            x = sub[1]
        fixed_lo[j] = fixed_hi[j] = x[j]

    m = tuple(int(v) for v in x)
    return Solution(p.S, m, p.cost(m), OPTIMAL, stats.nodes, root_bound,
                    {"lp_iterations": stats.lp_iterations,
                     "greedy_cost": greedy.cost if inc is not None else None})
