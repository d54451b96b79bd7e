"""End-to-end stage design: eligibility, tables, catalog, optimizer."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .catalog import CostEntry, best_cost
from .eligibility import DEFAULT_THRESHOLD, eligible_set
from .optimizer import DEFAULT_CAP, Problem, Solution, build_problem, solve
from .spectrum import AttenuationTable, DesignSpec, VerifyReport, attenuation_table, verify_spec


@dataclass(frozen=True)
class DesignResult:
    spec: DesignSpec
    gamma: float
    S: tuple[int, ...]
    table: AttenuationTable
    costs: dict[int, CostEntry]
    problem: Problem
    solution: Solution

    def verify(self, grid: int | None = None) -> VerifyReport:
        return verify_spec(self.solution.orders, self.spec, grid)


def design_stage(spec: DesignSpec, gamma: float = 0.0, cap: int = DEFAULT_CAP,
                 threshold: Fraction = DEFAULT_THRESHOLD) -> DesignResult:
    S = tuple(eligible_set(spec, threshold))
    table = attenuation_table(S, spec)
    costs = {q: best_cost(q, gamma) for q in S}
    problem = build_problem(spec, S, table, costs, gamma, cap)
    return DesignResult(spec, gamma, S, table, costs, problem, solve(problem))
