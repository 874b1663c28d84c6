"""Outcomes of decision and verification procedures."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Status(str, enum.Enum):
    LANTERN_FORCED = "LanternForced"
    TWO_CHAIN_FORCED = "TwoChainForced"
    INFEASIBLE = "Infeasible"
    RELATION_HOLDS = "RelationHolds"
    RELATION_FAILS = "RelationFails"

    @property
    def exit_code(self) -> int:
        return 0 if self in _PASSING else 1


_PASSING = {Status.LANTERN_FORCED, Status.TWO_CHAIN_FORCED, Status.RELATION_HOLDS}


@dataclass(frozen=True)
class Witness:
    """Evidence for a verdict; ``data`` is plain JSON-compatible values."""

    kind: str
    data: Any

    def to_json(self) -> dict:
        return {"kind": self.kind, "data": self.data}


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: str
    witness: Witness | None = None
    normalized: tuple[int, int] | None = None
    inverted: bool = False
    power: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status.exit_code == 0

    @property
    def exit_code(self) -> int:
        return self.status.exit_code

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "status": self.status.value,
            "reason": self.reason,
            "witness": self.witness.to_json() if self.witness else None,
            "normalized": None if self.normalized is None else {"j": self.normalized[0], "k": self.normalized[1]},
            "inverted": self.inverted,
        }
        if self.power is not None:
            out["power"] = self.power
        if self.details:
            out["details"] = self.details
        return out

    def summary(self) -> str:
        head = self.status.value
        if self.status is Status.TWO_CHAIN_FORCED:
            head += f"({self.power})"
        return f"{head}: {self.reason}"
