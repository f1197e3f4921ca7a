"""Explicit budget instances on which the PF and MMF bounds hold with equality."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import bounds
from .allocation import compute_pof
from .domain import (
    BoundReport,
    BudgetUtilitySet,
    CaseTag,
    Criterion,
    UtilityLimits,
    check_n,
    sorted_descending,
    unsort,
    validate_instance,
)


def _affordable(cost: float, limit: float) -> float:
    """Round ``cost`` down by a few ulps if needed so that ``cost * limit <= 1`` holds exactly."""
    while cost * limit > 1.0:
        cost = math.nextafter(cost, 0.0)
    return cost


def _as_limits(limits: "UtilityLimits | list | tuple | np.ndarray") -> UtilityLimits:
    return limits if isinstance(limits, UtilityLimits) else UtilityLimits(tuple(limits))


def _instance(limits: UtilityLimits, sorted_L: np.ndarray, sorted_c: list[float], perm) -> BudgetUtilitySet:
    sorted_c = [_affordable(c, float(l)) for c, l in zip(sorted_c, sorted_L)]
    return validate_instance(limits, unsort(sorted_c, perm))


def construct_pf_worstcase_equal(n: int) -> BudgetUtilitySet:
    """Worst case for PF with all limits equal to 1.

    ``n = 2``: costs ``(sqrt 3 - 1, 1)``.  ``n >= 3``: ``m`` players cost ``1/m``
    and the rest cost 1, with ``m`` as in :func:`bounds.equal_pf_m`.
    """
    n = check_n(n)
    if n == 2:
        costs = [math.sqrt(3.0) - 1.0, 1.0]
    else:
        m = bounds.equal_pf_m(n)
        costs = [1.0 / m] * m + [1.0] * (n - m)
    return validate_instance(UtilityLimits.equal(n), costs)


def construct_pf_worstcase_unequal(limits: "UtilityLimits | list | tuple | np.ndarray") -> BudgetUtilitySet:
    """Worst case for PF given arbitrary limits, in the caller's player order.

    On sorted limits with split ``l*``: the first ``l*`` players get
    ``c_i = y / sqrt(L_i)`` with ``y = 1/A(l*)`` (or ``ytilde / sqrt(L_1)`` when
    that candidate wins), and every later player gets ``c_i = 1/L_i``.
    """
    limits = _as_limits(limits)
    report = bounds.pf_bound_unequal(limits)
    srt, perm = sorted_descending(limits)
    L = srt.as_array()
    l_star = report.l_star
    costs = list(1.0 / L)
    if report.case_tag is CaseTag.PF_UNEQUAL_CASE2_YTILDE:
        costs[0] = report.aux["ytilde"] / math.sqrt(L[0])
    else:
        y = report.aux["y_star"]
        for i in range(l_star):
            costs[i] = y / math.sqrt(L[i])
    return _instance(limits, L, costs, perm)


def mmf_worstcase_Y(report: BoundReport) -> float:
    Y = report.aux["Y"]
    assert Y > 0.0, f"degenerate MMF construction: Y = {Y!r} (l* = {report.l_star})"
    assert Y <= report.l_star
    return Y


def construct_mmf_worstcase(limits: "UtilityLimits | list | tuple | np.ndarray") -> BudgetUtilitySet:
    """Worst case for MMF: ``c_i = Y / (l* L_i)`` for the ``l*`` largest players, ``1/L_i`` otherwise."""
    limits = _as_limits(limits)
    report = bounds.mmf_bound_unequal(limits)
    srt, perm = sorted_descending(limits)
    L = srt.as_array()
    l_star = report.l_star
    Y = mmf_worstcase_Y(report)
    costs = [Y / (l_star * L[i]) if i < l_star else 1.0 / L[i] for i in range(len(L))]
    return _instance(limits, L, costs, perm)


def construct_worstcase(limits, criterion: "Criterion | str") -> BudgetUtilitySet:
    if Criterion.parse(criterion) is Criterion.PF:
        return construct_pf_worstcase_unequal(limits)
    return construct_mmf_worstcase(limits)


@dataclass(frozen=True)
class TightnessReport:
    criterion: Criterion
    bound: float
    achieved_pof: float
    tol: float
    instance: BudgetUtilitySet
    bound_report: BoundReport

    @property
    def gap(self) -> float:
        return abs(self.bound - self.achieved_pof)

    @property
    def passed(self) -> bool:
        return self.gap <= self.tol

    def to_dict(self) -> dict[str, Any]:
        return {
            "criterion": self.criterion.value,
            "bound": self.bound,
            "achieved_pof": self.achieved_pof,
            "gap": self.gap,
            "tol": self.tol,
            "pass": self.passed,
            "case_tag": self.bound_report.case_tag.value,
            "l_star": self.bound_report.l_star,
            "instance": self.instance.to_dict(),
        }


def verify_tightness(
    limits: "UtilityLimits | list | tuple | np.ndarray", criterion: "Criterion | str", tol: float = 1e-8
) -> TightnessReport:
    """Build the worst-case instance, solve it, and compare its POF to the bound."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    criterion = Criterion.parse(criterion)
    limits = _as_limits(limits)
    report = bounds.bound_for(limits, criterion)
    inst = construct_worstcase(limits, criterion)
    achieved = compute_pof(inst, criterion).pof
    return TightnessReport(criterion, report.bound, achieved, tol, inst, report)
