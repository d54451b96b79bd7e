"""JSON design documents, validated on read."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from . import SCHEMA_VERSION
from .cyclotomic import MAX_INDEX
from .spectrum import DesignSpec


class OrderEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    q: int = Field(ge=2, le=MAX_INDEX)
    m: int = Field(ge=1)


class DesignFile(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    D: int = Field(ge=2)
    nu: int = Field(ge=1)
    Rp_db: float = Field(gt=0)
    As_db: float = Field(ge=0)
    gamma: float = Field(default=0.0, ge=0, le=1)
    orders: tuple[OrderEntry, ...] = ()
    cost_adders: int = Field(default=0, ge=0)
    cost_delays: int = Field(default=0, ge=0)
    cost: float = 0.0
    status: Literal["optimal", "infeasible"] = "optimal"
    version: str = SCHEMA_VERSION

    @field_validator("orders")
    @classmethod
    def _unique_sorted(cls, v):
        qs = [o.q for o in v]
        if len(set(qs)) != len(qs):
            raise ValueError("each CP index may appear once in orders")
        return tuple(sorted(v, key=lambda o: o.q))

    @property
    def order_map(self) -> dict[int, int]:
        return {o.q: o.m for o in self.orders}

    def spec(self, grid: int | None = None) -> DesignSpec:
        kw = {} if grid is None else {"grid": grid}
        return DesignSpec(self.D, self.nu, self.Rp_db, self.As_db, **kw)

    @classmethod
    def from_result(cls, result) -> DesignFile:
        s, sol = result.spec, result.solution
        orders = sol.orders
        return cls(
            D=s.D, nu=s.nu, Rp_db=s.R_p, As_db=s.A_s, gamma=result.gamma,
            orders=tuple(OrderEntry(q=q, m=m) for q, m in orders.items()),
            cost_adders=sum(m * result.costs[q].N_a for q, m in orders.items()),
            cost_delays=sum(m * result.costs[q].N_d for q, m in orders.items()),
            cost=sol.cost if sol.status == "optimal" else 0.0,
            status=sol.status,
        )

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> DesignFile:
        return cls.model_validate_json(text)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> DesignFile:
        return cls.from_json(Path(path).read_text())
