"""Core value types shared by the solvers, bound formulas and constructions.

An instance is a *budget utility set*: the box ``0 <= u_i <= L_i`` cut by a
single linear budget ``sum_i c_i u_i <= 1``.  All types here are immutable.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

FEASIBILITY_TOL = 1e-9


class InstanceError(ValueError):
    """Base class for rejected instances."""


class LengthMismatch(InstanceError):
    pass


class NonPositiveLimit(InstanceError):
    pass


class NegativeCost(InstanceError):
    pass


class UnachievableMaximum(InstanceError):
    """Some player's maximum utility violates the budget on its own (c_i * L_i > 1)."""


class InvalidN(ValueError):
    """Number of players below 2."""


class Criterion(str, enum.Enum):
    PF = "PF"
    MMF = "MMF"

    @classmethod
    def parse(cls, value: "str | Criterion") -> "Criterion":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown criterion {value!r}; expected 'pf' or 'mmf'") from None


class CaseTag(str, enum.Enum):
    PF_EQUAL_N2 = "PF-equal-n2"
    PF_EQUAL_BRANCH1 = "PF-equal-branch1"
    PF_EQUAL_BRANCH2 = "PF-equal-branch2"
    PF_UNEQUAL_CASE1 = "PF-unequal-case1"
    PF_UNEQUAL_CASE2_H = "PF-unequal-case2-h"
    PF_UNEQUAL_CASE2_YTILDE = "PF-unequal-case2-ytilde"
    MMF_S1 = "MMF-S1"
    MMF_S2 = "MMF-S2"


def check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise InvalidN(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise InvalidN(f"n must be at least 2, got {n}")
    return n


@dataclass(frozen=True)
class UtilityLimits:
    """Per-player maximum achievable utilities ``L``."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise InvalidN(f"need at least 2 players, got {len(vals)}")
        for i, v in enumerate(vals):
            if not math.isfinite(v) or v <= 0.0:
                raise NonPositiveLimit(f"L[{i}] = {v!r} must be positive and finite")

    @classmethod
    def equal(cls, n: int) -> "UtilityLimits":
        return cls((1.0,) * check_n(n))

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def sorted_descending(self) -> tuple["UtilityLimits", tuple[int, ...]]:
        return sorted_descending(self)

    def __len__(self) -> int:
        return len(self.values)


def sorted_descending(limits: UtilityLimits) -> tuple[UtilityLimits, tuple[int, ...]]:
    """Sort limits non-increasingly.

    Returns the sorted limits and ``perm`` with ``sorted[j] == limits[perm[j]]``.
    Equal entries keep their original relative order.
    """
    perm = sorted(range(limits.n), key=lambda i: -limits.values[i])
    return UtilityLimits(tuple(limits.values[i] for i in perm)), tuple(perm)


def unsort(sorted_values: Sequence[float], perm: Sequence[int]) -> tuple[float, ...]:
    """Invert :func:`sorted_descending`: place ``sorted_values[j]`` at ``perm[j]``."""
    out = [0.0] * len(perm)
    for j, i in enumerate(perm):
        out[i] = float(sorted_values[j])
    return tuple(out)


@dataclass(frozen=True)
class BudgetUtilitySet:
    """The set ``{u : 0 <= u_i <= L_i, sum_i c_i u_i <= 1}``.

    Construct through :func:`validate_instance`; direct construction validates too.
    """

    limits: UtilityLimits
    costs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "costs", tuple(float(c) for c in self.costs))
        _check_costs(self.limits, self.costs)

    @property
    def n(self) -> int:
        return self.limits.n

    @property
    def L(self) -> np.ndarray:
        return self.limits.as_array()

    @property
    def c(self) -> np.ndarray:
        return np.array(self.costs, dtype=float)

    def budget_use(self, u: Sequence[float]) -> float:
        return math.fsum(ci * ui for ci, ui in zip(self.costs, u))

    def contains(self, u: Sequence[float], tol: float = FEASIBILITY_TOL) -> bool:
        """Box and budget membership, within an absolute tolerance."""
        if len(u) != self.n:
            return False
        for ui, li in zip(u, self.limits.values):
            if ui < -tol or ui > li + tol:
                return False
        return self.budget_use(u) <= 1.0 + tol

    def to_dict(self) -> dict[str, list[float]]:
        return {"L": list(self.limits.values), "c": list(self.costs)}

    def to_json(self) -> str:
        # repr-precision floats so the file reloads to the identical instance
        return json.dumps(self.to_dict())


def _check_costs(limits: UtilityLimits, costs: Sequence[float]) -> None:
    if len(costs) != limits.n:
        raise LengthMismatch(f"{limits.n} limits but {len(costs)} costs")
    for i, (li, ci) in enumerate(zip(limits.values, costs)):
        if not math.isfinite(ci):
            raise NegativeCost(f"c[{i}] = {ci!r} is not finite")
        if ci < 0.0:
            raise NegativeCost(f"c[{i}] = {ci!r} is negative")
        if ci * li > 1.0:
            raise UnachievableMaximum(f"c[{i}] * L[{i}] = {ci * li!r} exceeds 1")


def validate_instance(
    limits: "UtilityLimits | Sequence[float]", costs: Sequence[float]
) -> BudgetUtilitySet:
    """Build a :class:`BudgetUtilitySet`, raising an :class:`InstanceError` if invalid.

    Comparisons are exact: ``c_i * L_i`` must not exceed 1 in floating point.
    """
    costs = tuple(costs)
    if not isinstance(limits, UtilityLimits):
        limits = tuple(limits)
        if len(limits) != len(costs):
            raise LengthMismatch(f"{len(limits)} limits but {len(costs)} costs")
        limits = UtilityLimits(limits)
    return BudgetUtilitySet(limits, costs)


@dataclass(frozen=True)
class Allocation:
    """A utility vector; ``total`` is always recomputed from ``utilities``."""

    utilities: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "utilities", tuple(float(x) for x in self.utilities))

    @property
    def total(self) -> float:
        return math.fsum(self.utilities)

    def as_array(self) -> np.ndarray:
        return np.array(self.utilities, dtype=float)

    def to_dict(self) -> dict[str, Any]:
        return {"u": list(self.utilities), "total": self.total}


@dataclass(frozen=True)
class KnapsackBreakdown:
    """Structure of the fractional-knapsack (utilitarian) solution.

    Attributes:
        order: player indices sorted by ascending cost (stable).
        split_index: number of fully served players ``l``.
        fraction: fill level of player ``order[l]``; 0 when ``l == n``.
        optimal_total: utilitarian welfare.
    """

    order: tuple[int, ...]
    split_index: int
    fraction: float
    optimal_total: float


@dataclass(frozen=True)
class BoundReport:
    bound: float
    criterion: Criterion
    case_tag: CaseTag
    l_star: int | None = None
    aux: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "bound": self.bound,
            "criterion": self.criterion.value,
            "case_tag": self.case_tag.value,
            "l_star": self.l_star,
            "aux": self.aux,
        }


def limits_from_dict(data: dict[str, Any]) -> UtilityLimits:
    if "L" not in data:
        raise InstanceError("missing field 'L'")
    return UtilityLimits(tuple(data["L"]))


def instance_from_dict(data: dict[str, Any]) -> BudgetUtilitySet:
    if "c" not in data:
        raise InstanceError("missing field 'c'")
    if "L" not in data:
        raise InstanceError("missing field 'L'")
    return validate_instance(tuple(data["L"]), tuple(data["c"]))
