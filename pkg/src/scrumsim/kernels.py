"""Competence sharing, combination and adaptation rules.

All functions are pure and operate on plain floats. Team members are
passed as ``(sosd, c)`` pairs.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Tuple

from .model import SosdBand

__all__ = [
    "CombinationMode",
    "shared_competence",
    "combine_linear",
    "combine_nonlinear",
    "combine",
    "select_mode",
    "attempt",
    "update_on_success",
    "update_on_failure",
    "update_attitude",
]

Member = Tuple[float, float]


class CombinationMode(enum.Enum):
    SOLO = "solo"
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


def shared_competence(sosd: float, c: float) -> float:
    """Competence a developer is willing to share; negative for unhelpful sharers."""
    return sosd * c


def combine_linear(c_lead: float, members: Iterable[Member]) -> float:
    total = c_lead
    for sosd, c in members:
        total += shared_competence(sosd, c)
    return total


def _power_contribution(base: float, exponent: float, cap: float) -> float:
    if base <= 0.0:
        return 0.0
    # compare in log space first so huge powers never overflow
    if exponent * math.log(base) >= math.log(cap):
        return cap
    return min(base**exponent, cap)


def combine_nonlinear(
    c_lead: float,
    sosd_lead: float,
    members: Iterable[Member],
    exponent_cap: float = 8.0,
    contribution_cap: float = 1e9,
) -> float:
    """Lead competence plus each member's shared competence raised to the lead's.

    The exponent is the lead's shared competence clamped to
    ``[0, exponent_cap]``. Members sharing nothing or a negative amount
    contribute zero, and each contribution is capped at ``contribution_cap``.
    """
    p = min(max(shared_competence(sosd_lead, c_lead), 0.0), exponent_cap)
    total = c_lead
    for sosd, c in members:
        total += _power_contribution(shared_competence(sosd, c), p, contribution_cap)
    return total


def select_mode(
    sociable: bool, curious: bool, lead_band: SosdBand, lead_high_e: bool
) -> CombinationMode:
    if curious and lead_high_e and lead_band is SosdBand.HIGH:
        return CombinationMode.NONLINEAR
    if sociable and lead_band is not SosdBand.LOW:
        return CombinationMode.LINEAR
    return CombinationMode.SOLO


def combine(
    mode: CombinationMode,
    c_lead: float,
    sosd_lead: float,
    members: Iterable[Member],
    exponent_cap: float = 8.0,
    contribution_cap: float = 1e9,
) -> float:
    if mode is CombinationMode.SOLO:
        return c_lead
    if mode is CombinationMode.LINEAR:
        return combine_linear(c_lead, members)
    return combine_nonlinear(c_lead, sosd_lead, members, exponent_cap, contribution_cap)


def attempt(effective_c: float, d: float) -> bool:
    return effective_c > d


def update_on_success(c: float, r_i: float) -> float:
    return c * (1.0 + r_i)


def update_on_failure(c: float, r_d: float) -> float:
    return max(c * (1.0 - r_d), 0.0)


def update_attitude(sosd: float, solved: bool, r_i: float, r_d: float) -> float:
    """Scale sociability away from zero after a success, toward zero after a failure.

    The sign never changes and zero is a fixed point.
    """
    if solved:
        return sosd * (1.0 + r_i)
    return sosd * (1.0 - r_d)
