"""Path cost, pair cost and feasibility for routing with modulation choice.

A cost model is any object with ``path_cost(length)``, ``pair_cost(c1, c2)``,
``decide(cu_size, length)`` and ``units(length)``.  :class:`RMSACostModel` is
the length-times-units instantiation; :class:`CostModel` is the protocol the
search code relies on, so other policies can be plugged in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Protocol

INFEASIBLE = math.inf
_REL_EPS = 1e-9


@dataclass(frozen=True)
class ModulationModel:
    """``levels`` modulations; the most efficient one reaches ``r1 / 2**(levels-1)``."""

    levels: int = 4
    reach_r1_km: float = 1.0

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("modulation levels must be >= 1")
        if not self.reach_r1_km > 0:
            raise ValueError("reach r1 must be positive")

    @property
    def reach_rM_km(self) -> float:
        return self.reach_r1_km / 2 ** (self.levels - 1)

    @classmethod
    def from_diameter(cls, diameter_km: float, levels: int = 4, factor: float = 1.5) -> "ModulationModel":
        return cls(levels, factor * diameter_km)


@dataclass(frozen=True)
class Demand:
    src: int
    dst: int
    units_g: int

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("demand end nodes must differ")
        if self.units_g < 1:
            raise ValueError("a demand requests at least one unit")


def units_needed(g: int, d: float, mod: ModulationModel) -> float:
    """Units for a ``g``-unit demand over ``d`` km; ``math.inf`` beyond reach."""
    r_m = mod.reach_rM_km
    if d <= r_m:
        return g
    if d > mod.reach_r1_km:
        return INFEASIBLE
    x = g * math.log2(2.0 * d / r_m)
    # keep exact powers of two from rounding up
    return math.ceil(x - _REL_EPS * x)


def units_from_bitrate(b: float, R: float, M: int, guard_units: int = 0) -> int:
    if b <= 0 or R <= 0 or M < 1 or guard_units < 0:
        raise ValueError("bitrate arguments out of range")
    q = b / (R * M)
    return math.ceil(q - _REL_EPS * q) + guard_units


def path_cost(length_km: float, g: int, mod: ModulationModel) -> float:
    if length_km == 0:
        return 0.0
    u = units_needed(g, length_km, mod)
    if u == INFEASIBLE:
        return INFEASIBLE
    return length_km * u


def decide(trait_cu_size: int, length_km: float, g: int, mod: ModulationModel) -> bool:
    u = units_needed(g, length_km, mod)
    return u != INFEASIBLE and u <= trait_cu_size


def pair_cost(c1: float, c2: float) -> float:
    return c1 + c2


class CostModel(Protocol):
    def path_cost(self, length_km: float) -> float: ...

    def pair_cost(self, c1: float, c2: float) -> float: ...

    def decide(self, cu_size: int, length_km: float) -> bool: ...

    def units(self, length_km: float) -> float: ...


class RMSACostModel:
    """Cost hooks for one demand of ``g`` units under a modulation model."""

    def __init__(self, g: int, modulation: ModulationModel):
        if g < 1:
            raise ValueError("g must be >= 1")
        self.g = int(g)
        self.modulation = modulation

    def units(self, length_km: float) -> float:
        return units_needed(self.g, length_km, self.modulation)

    def path_cost(self, length_km: float) -> float:
        return path_cost(length_km, self.g, self.modulation)

    def pair_cost(self, c1: float, c2: float) -> float:
        return c1 + c2

    def decide(self, cu_size: int, length_km: float) -> bool:
        return decide(cu_size, length_km, self.g, self.modulation)

    def __repr__(self) -> str:
        return f"RMSACostModel(g={self.g}, modulation={self.modulation!r})"


def resolve_r1(policy: Optional[float], diameter_km: float, factor: float = 1.5) -> float:
    """``None`` means ``factor`` times the longest shortest path; a number is taken as km."""
    if policy is None:
        return factor * diameter_km
    return float(policy)
