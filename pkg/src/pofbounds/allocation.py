"""Utilitarian, proportional-fair and max-min-fair allocations over a budget set."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import (
    FEASIBILITY_TOL,
    Allocation,
    BudgetUtilitySet,
    Criterion,
    KnapsackBreakdown,
)

DEFAULT_TOL = 1e-12
MAX_BISECTION_ITERS = 200


class ToleranceNotReached(RuntimeError):
    """Water-filling could not bracket or converge within the iteration cap."""


@dataclass(frozen=True)
class PofResult:
    utilitarian: Allocation
    fair: Allocation
    criterion: Criterion

    @property
    def pof(self) -> float:
        return 1.0 - self.fair.total / self.utilitarian.total

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "pof": self.pof,
            "utilitarian": self.utilitarian.to_dict(),
            "fair": self.fair.to_dict(),
        }


def solve_utilitarian(inst: BudgetUtilitySet) -> tuple[Allocation, KnapsackBreakdown]:
    """Maximize total utility: a fractional knapsack with reward L_i and weight c_i L_i.

    Players are served greedily in ascending order of ``c_i`` (reward per unit of
    budget is ``1 / c_i``); zero-cost players therefore come first and are always
    fully served.
    """
    L, c = inst.limits.values, inst.costs
    n = inst.n
    order = tuple(sorted(range(n), key=lambda i: c[i]))
    u = [0.0] * n
    used = 0.0
    split = n
    fraction = 0.0
    for pos, i in enumerate(order):
        weight = c[i] * L[i]
        if used + weight <= 1.0:
            used += weight
            u[i] = L[i]
            continue
        split = pos
        fraction = min((1.0 - used) / weight, math.nextafter(1.0, 0.0))
        fraction = max(fraction, 0.0)
        u[i] = fraction * L[i]
        break
    alloc = Allocation(tuple(u))
    return alloc, KnapsackBreakdown(order, split, fraction, alloc.total)


def solve_pf_closed_form(inst: BudgetUtilitySet, rtol: float = 1e-12) -> Allocation | None:
    """Return ``u_i = 1 / (n c_i)`` when it lies in the box, else ``None``.

    That vector exhausts the budget exactly and satisfies the PF optimality
    condition, so it is the PF solution whenever it is feasible.  ``rtol``
    absorbs rounding at the box boundary (``n c_i L_i == 1``).
    """
    n = inst.n
    u = []
    for li, ci in zip(inst.limits.values, inst.costs):
        if ci <= 0.0:
            return None
        ui = 1.0 / (n * ci)
        if ui > li * (1.0 + rtol):
            return None
        u.append(min(ui, li))
    return Allocation(tuple(u))


def solve_pf_waterfill(inst: BudgetUtilitySet, tol: float = DEFAULT_TOL) -> Allocation:
    """Maximize ``sum log u_i`` by KKT water-filling.

    Zero-cost players are pinned at their limits.  The rest get
    ``u_i(lam) = min(L_i, 1 / (lam c_i))`` where ``lam`` is found by bisection so
    that the budget binds to within ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    L, c = inst.L, inst.c
    if math.fsum(c * L) <= 1.0:
        return Allocation(tuple(L))
    pos = c > 0
    Lp, cp = L[pos], c[pos]

    def spend(lam: float) -> float:
        return math.fsum(cp * np.minimum(Lp, 1.0 / (lam * cp)))

    lo = hi = 1.0
    for _ in range(MAX_BISECTION_ITERS):
        if spend(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise ToleranceNotReached("could not find an upper bracket for the multiplier")
    for _ in range(MAX_BISECTION_ITERS):
        if spend(lo) >= 1.0:
            break
        lo *= 0.5
    else:
        raise ToleranceNotReached("could not find a lower bracket for the multiplier")

    lam = hi
    for _ in range(MAX_BISECTION_ITERS):
        lam = 0.5 * (lo + hi)
        g = spend(lam)
        if abs(g - 1.0) <= tol:
            break
        if g > 1.0:
            lo = lam
        else:
            hi = lam
    else:
        raise ToleranceNotReached(f"budget residual {abs(spend(lam) - 1.0):.3e} above tol {tol:.1e}")

    u = L.copy()
    u[pos] = np.minimum(Lp, 1.0 / (lam * cp))
    # a residual of +tol is allowed by the contract; never leave the budget by more
    used = float(np.dot(c, u))
    if used > 1.0:
        u[pos] /= used
    return Allocation(tuple(u))


def solve_pf(inst: BudgetUtilitySet, tol: float = DEFAULT_TOL) -> Allocation:
    """PF allocation: closed form when applicable, water-filling otherwise."""
    closed = solve_pf_closed_form(inst)
    if closed is not None:
        return closed
    return solve_pf_waterfill(inst, tol)


def mmf_level(inst: BudgetUtilitySet) -> float:
    """Common ratio ``phi = min(1, 1 / sum c_i L_i)`` of the costly players."""
    spend = math.fsum(ci * li for ci, li in zip(inst.costs, inst.limits.values))
    return 1.0 if spend <= 1.0 else 1.0 / spend


def solve_mmf(inst: BudgetUtilitySet) -> Allocation:
    """Lexicographic max-min of ``u_i / L_i``.

    With one budget constraint every costly player sits at the same ratio
    ``phi``; zero-cost players consume no budget and are served fully.
    """
    phi = mmf_level(inst)
    return Allocation(
        tuple(li if ci == 0.0 else phi * li for li, ci in zip(inst.limits.values, inst.costs))
    )


def solve_fair(inst: BudgetUtilitySet, criterion: "Criterion | str", tol: float = DEFAULT_TOL) -> Allocation:
    criterion = Criterion.parse(criterion)
    if criterion is Criterion.PF:
        return solve_pf(inst, tol)
    return solve_mmf(inst)


def compute_pof(inst: BudgetUtilitySet, criterion: "Criterion | str", tol: float = DEFAULT_TOL) -> PofResult:
    criterion = Criterion.parse(criterion)
    utilitarian, _ = solve_utilitarian(inst)
    fair = solve_fair(inst, criterion, tol)
    assert utilitarian.total > 0.0, "valid instances always have positive welfare"
    assert inst.contains(fair.utilities, FEASIBILITY_TOL)
    return PofResult(utilitarian, fair, criterion)
