"""Brute-force checks that do not share code paths with the solvers or bound formulas.

The grid minimizers search the space of budget costs directly, evaluating the
POF ratio objective over every split index, so they catch bound formulas that
are too optimistic.  The random samplers feed the optimality property tests.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .domain import Allocation, BudgetUtilitySet, UtilityLimits

LEX_TOL = 1e-9


class UnsupportedN(ValueError):
    """Grid search is only offered for 2 or 3 players."""


def _prepare(limits, coarse_steps: int, refine_rounds: int) -> np.ndarray:
    if not isinstance(limits, UtilityLimits):
        limits = UtilityLimits(tuple(limits))
    if limits.n not in (2, 3):
        raise UnsupportedN(f"grid search supports n in {{2, 3}}, got n={limits.n}")
    if coarse_steps < 50:
        raise ValueError("coarse_steps must be at least 50")
    if refine_rounds < 0:
        raise ValueError("refine_rounds must be non-negative")
    return np.sort(limits.as_array())[::-1]


def _pf_ratio(a: np.ndarray, L: np.ndarray) -> np.ndarray:
    """PF-to-utilitarian welfare ratio for costs ``c = a / L`` (rows of ``a``).

    Rows whose costs are not non-decreasing are infeasible (``inf``).
    """
    n = L.size
    c = a / L
    num = np.sum(1.0 / (n * c), axis=1)
    best = np.full(a.shape[0], np.inf)
    cum = np.cumsum(a, axis=1)
    for l in range(1, n):
        ok = (cum[:, l - 1] <= 1.0) & (cum[:, l] > 1.0)
        den = L[:l].sum() + (1.0 - cum[:, l - 1]) / c[:, l]
        best[ok] = np.minimum(best[ok], num[ok] / den[ok])
    # l = n: whole box affordable, PF and utilitarian coincide only if u^PF = L
    full = cum[:, -1] <= 1.0
    best = np.where(full, np.minimum(best, num / L.sum()), best)
    ordered = np.all(np.diff(c, axis=1) >= 0.0, axis=1)
    return np.where(ordered, best, np.inf)


def _mmf_ratio(a: np.ndarray, L: np.ndarray) -> np.ndarray:
    """MMF-to-utilitarian welfare ratio ``f3`` for costs ``c = a / L``; 1 when the box is affordable."""
    n = L.size
    c = a / L
    total_L = L.sum()
    spend = a.sum(axis=1)
    cum = np.cumsum(a, axis=1)
    best = np.where(spend <= 1.0, 1.0, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        for l in range(1, n):
            ok = (cum[:, l - 1] <= 1.0) & (cum[:, l] > 1.0)
            x = c[:, l]
            f3 = x * total_L / (spend * (x * L[:l].sum() + 1.0 - cum[:, l - 1]))
            best = np.where(ok, np.minimum(best, f3), best)
    ordered = np.all(np.diff(c, axis=1) >= 0.0, axis=1)
    return np.where(ordered, best, np.inf)


def _grid_minimize(
    ratio: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    steps: int,
    rounds: int,
    starts: int = 3,
) -> tuple[float, np.ndarray]:
    def evaluate(box_lo: np.ndarray, box_hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        axes = [np.linspace(a, b, steps + 1) for a, b in zip(box_lo, box_hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        return pts, ratio(pts)

    pts, vals = evaluate(lo, hi)
    # stable sort keeps lexicographic generation order among equal values
    order = np.argsort(vals, kind="stable")[:starts]
    best_val, best_pt = float(vals[order[0]]), pts[order[0]]
    width = hi - lo
    for idx in order:
        center, w = pts[idx], width.copy()
        val = float(vals[idx])
        if not math.isfinite(val):
            continue
        for _ in range(rounds):
            w = w / 10.0
            box_lo = np.maximum(lo, center - w / 2.0)
            box_hi = np.minimum(hi, center + w / 2.0)
            p, v = evaluate(box_lo, box_hi)
            j = int(np.argmin(v))
            if v[j] < val:
                val, center = float(v[j]), p[j]
        if val < best_val:
            best_val, best_pt = val, center
    return best_val, best_pt


def grid_min_pf_ratio(limits, coarse_steps: int = 50, refine_rounds: int = 3) -> tuple[float, np.ndarray]:
    """Smallest PF/utilitarian ratio found, and the normalized costs ``c_i L_i`` attaining it."""
    L = _prepare(limits, coarse_steps, refine_rounds)
    n = L.size
    lo, hi = np.full(n, 1.0 / n), np.ones(n)
    return _grid_minimize(lambda a: _pf_ratio(a, L), lo, hi, coarse_steps, refine_rounds)


def grid_min_mmf_ratio(limits, coarse_steps: int = 50, refine_rounds: int = 3) -> tuple[float, np.ndarray]:
    L = _prepare(limits, coarse_steps, refine_rounds)
    n = L.size
    lo, hi = np.zeros(n), np.ones(n)
    return _grid_minimize(lambda a: _mmf_ratio(a, L), lo, hi, coarse_steps, refine_rounds)


def grid_min_pf_bound(limits, coarse_steps: int = 50, refine_rounds: int = 3) -> float:
    """Estimate the PF POF bound for ``limits`` by grid search over budget costs."""
    return 1.0 - grid_min_pf_ratio(limits, coarse_steps, refine_rounds)[0]


def grid_min_mmf_bound(limits, coarse_steps: int = 50, refine_rounds: int = 3) -> float:
    """Estimate the MMF POF bound for ``limits`` by grid search over budget costs."""
    return 1.0 - grid_min_mmf_ratio(limits, coarse_steps, refine_rounds)[0]


def _fit_budget(u: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Scale rows of ``u`` so ``c @ u <= 1`` holds in floating point."""
    spend = u @ c
    over = spend > 1.0
    u[over] /= spend[over, None]
    spend = u @ c
    while np.any(spend > 1.0):
        bad = spend > 1.0
        u[bad] *= 1.0 - 2.0 ** -52
        spend = u @ c
    return u


def random_feasible_array(inst: BudgetUtilitySet, count: int, seed: int, boundary_share: float = 0.25) -> np.ndarray:
    """``count`` feasible utility vectors as a ``(count, n)`` array.

    Points are drawn uniformly in the box and shrunk onto the budget when they
    violate it.  A ``boundary_share`` of them are instead filled greedily, in a
    random player order, until the budget binds or the box is exhausted.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    L, c = inst.L, inst.c
    n = L.size
    u = rng.random((count, n)) * L
    u = _fit_budget(u, c)
    fill = rng.random(count) < boundary_share
    orders = rng.permuted(np.tile(np.arange(n), (count, 1)), axis=1)
    for row in np.flatnonzero(fill):
        used = float(u[row] @ c)
        for i in orders[row]:
            room = math.inf if c[i] == 0.0 else max(1.0 - used, 0.0) / c[i]
            new = min(L[i], u[row, i] + room)
            used += c[i] * (new - u[row, i])
            u[row, i] = new
    u = np.clip(u, 0.0, L)
    return _fit_budget(u, c)


def random_feasible_points(inst: BudgetUtilitySet, count: int, seed: int) -> list[Allocation]:
    return [Allocation(tuple(row)) for row in random_feasible_array(inst, count, seed)]


def lex_dominance_check(inst: BudgetUtilitySet, candidate: Allocation, trials: int, seed: int) -> bool:
    """True iff no sampled feasible point beats ``candidate`` lexicographically on sorted ratios.

    Ratios ``u_i / L_i`` are sorted ascending; a sample wins if, at the first
    component differing by more than ``LEX_TOL``, its ratio is larger.
    """
    L = inst.L
    mine = np.sort(candidate.as_array() / L)
    samples = np.sort(random_feasible_array(inst, trials, seed) / L, axis=1)
    diff = samples - mine
    differs = np.abs(diff) > LEX_TOL
    has = differs.any(axis=1)
    first = np.argmax(differs, axis=1)
    decisive = diff[np.arange(trials), first]
    return not bool(np.any(has & (decisive > 0.0)))
