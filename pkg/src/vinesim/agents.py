"""Agent timing profiles and scan strategies."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .field import Difficulty


class ScanStrategy(enum.Enum):
    # one pass per row, operator looks at both sides
    SINGLE_PASS_BOTH_SIDES = "single_pass_both_sides"
    # one pass per row, left and right cameras
    SINGLE_PASS_DUAL_CAMERA = "single_pass_dual_camera"
    # single forward camera: out along the row for the left side, back for the right
    DOUBLE_PASS = "double_pass"

    @property
    def passes_per_row(self) -> int:
        return 2 if self is ScanStrategy.DOUBLE_PASS else 1


@dataclass(frozen=True)
class AgentProfile:
    name: str
    time_easy: float
    time_difficult: float
    speed: float
    row_transition_time: float
    scan_strategy: ScanStrategy
    has_memory: bool

    def __post_init__(self):
        for attr in ("time_easy", "time_difficult", "row_transition_time"):
            if getattr(self, attr) < 0:
                raise ValueError(f"{attr} must be >= 0 for profile {self.name!r}")
        if not self.speed > 0:
            raise ValueError(f"speed must be > 0 for profile {self.name!r}")


HUMAN = AgentProfile("human", 5.0, 5.0, 1.25, 5.0, ScanStrategy.SINGLE_PASS_BOTH_SIDES, False)
IMMERSIVE = AgentProfile("immersive", 24.0, 50.0, 1.25, 10.0, ScanStrategy.DOUBLE_PASS, True)
NON_IMMERSIVE = AgentProfile("non_immersive", 24.0, 50.0, 1.25, 10.0,
                             ScanStrategy.SINGLE_PASS_DUAL_CAMERA, True)

BASELINE = "human"


def builtin_profiles() -> dict[str, AgentProfile]:
    return {p.name: p for p in (HUMAN, IMMERSIVE, NON_IMMERSIVE)}


def service_time(profile: AgentProfile, difficulty: Difficulty) -> float:
    if difficulty is Difficulty.DIFFICULT:
        return profile.time_difficult
    return profile.time_easy
