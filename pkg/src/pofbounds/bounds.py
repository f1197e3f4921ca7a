"""Closed-form upper bounds on the price of fairness.

All bounds take the per-player maximum utilities ``L`` (or just ``n`` for the
equal case) and return a :class:`BoundReport`.  Unequal-case formulas work on
``L`` sorted non-increasingly; the permutation used is reported in ``aux``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import BoundReport, CaseTag, Criterion, UtilityLimits, check_n, sorted_descending


@dataclass(frozen=True)
class PrefixAggregates:
    """Prefix/tail sums of sorted limits, indexed by ``l = 0..n``.

    ``A[l] = sum_{i<=l} sqrt(L_i)``, ``M[l] = sum_{i<=l} L_i`` and
    ``B[l] = sum_{i>=l+2} L_i`` (1-based player indices).
    """

    A: np.ndarray
    M: np.ndarray
    B: np.ndarray

    @classmethod
    def from_sorted(cls, L: np.ndarray) -> "PrefixAggregates":
        n = len(L)
        A = np.concatenate(([0.0], np.cumsum(np.sqrt(L))))
        M = np.concatenate(([0.0], np.cumsum(L)))
        total = M[-1]
        # B[l] = total - M[l+1], clipped to zero for l >= n-1
        B = np.zeros(n + 1)
        B[: n - 1] = np.maximum(total - M[1:n], 0.0)
        return cls(A, M, B)

    def tail(self, l: int) -> float:
        """``sum_{i>l} L_i``, i.e. ``B[l-1]``."""
        return float(self.M[-1] - self.M[l])


def _sorted_limits(limits: "UtilityLimits | np.ndarray | list | tuple") -> tuple[np.ndarray, tuple[int, ...]]:
    if not isinstance(limits, UtilityLimits):
        limits = UtilityLimits(tuple(limits))
    srt, perm = sorted_descending(limits)
    return srt.as_array(), perm


def equal_pf_m(n: int) -> int:
    """Number of equally cheap players in the equal-case PF worst case (n >= 3).

    Minimizes ``m + n/m - 1`` over ``m in {floor(sqrt n), floor(sqrt n) + 1}``;
    ties (``n == k(k+1)``) go to the smaller ``m``.
    """
    k = math.isqrt(n)
    return k if k + n / k <= (k + 1) + n / (k + 1) else k + 1


def pf_bound_equal(n: int) -> BoundReport:
    """Tight PF bound when every player's maximum utility is the same."""
    n = check_n(n)
    if n == 2:
        return BoundReport((2.0 - math.sqrt(3.0)) / 4.0, Criterion.PF, CaseTag.PF_EQUAL_N2, 1,
                           {"c1": math.sqrt(3.0) - 1.0})
    k = math.isqrt(n)
    m = equal_pf_m(n)
    bound = 1.0 - (m + n / m - 1.0) / n
    tag = CaseTag.PF_EQUAL_BRANCH1 if m == k else CaseTag.PF_EQUAL_BRANCH2
    aux = {"m": m, "k": k, "epsilon": math.sqrt(n) - k,
           "branch_threshold": (1.0 + 2.0 * math.sqrt(n) - math.sqrt(1.0 + 4.0 * n)) / 2.0}
    return BoundReport(bound, Criterion.PF, tag, m, aux)


def pf_h_values(L_sorted: np.ndarray, agg: PrefixAggregates | None = None) -> np.ndarray:
    """``h(l) = (A(l)^2 + sum_{i>l} L_i) / M(l)`` for ``l = 1..n-1`` (entry ``l-1``)."""
    agg = agg or PrefixAggregates.from_sorted(L_sorted)
    n = len(L_sorted)
    ls = np.arange(1, n)
    tails = agg.M[-1] - agg.M[ls]
    return (agg.A[ls] ** 2 + tails) / agg.M[ls]


def pf_ytilde(L_sorted: np.ndarray) -> float:
    L1, L2 = float(L_sorted[0]), float(L_sorted[1])
    B0 = float(np.sum(L_sorted[1:]))
    return (-math.sqrt(L1) + math.sqrt(B0 + L1 + B0 * L1 / L2)) / B0


def pf_bound_unequal(limits: "UtilityLimits | list | tuple | np.ndarray") -> BoundReport:
    """Tight PF bound for arbitrary positive maximum utilities."""
    L, perm = _sorted_limits(limits)
    n = len(L)
    agg = PrefixAggregates.from_sorted(L)
    h = pf_h_values(L, agg)
    l_star = int(np.argmin(h)) + 1
    best = float(h[l_star - 1]) / n
    total = float(agg.M[-1])
    L1, L2 = float(L[0]), float(L[1])
    aux: dict = {"permutation": list(perm), "h": [float(v) for v in h]}
    tag = CaseTag.PF_UNEQUAL_CASE1
    if total * L2 > L1 * L1:
        tag = CaseTag.PF_UNEQUAL_CASE2_H
        rest = total - L1 - L2
        second = (math.sqrt(L2 * L2 + 2.0 * L1 * L2 + (L1 + L2) * rest) + math.sqrt(L1 * L2)) ** 2 / (
            n * (L1 + L2) ** 2
        )
        aux["second_candidate"] = second
        if second < best:
            best = second
            l_star = 1
            tag = CaseTag.PF_UNEQUAL_CASE2_YTILDE
            aux["ytilde"] = pf_ytilde(L)
    aux["x_star"] = 1.0 / float(L[l_star])
    if tag is not CaseTag.PF_UNEQUAL_CASE2_YTILDE:
        aux["y_star"] = 1.0 / float(agg.A[l_star])
    aux["A"] = float(agg.A[l_star])
    aux["M"] = float(agg.M[l_star])
    aux["B"] = float(agg.B[l_star])
    return BoundReport(1.0 - best, Criterion.PF, tag, l_star, aux)


def mmf_regimes(L_sorted: np.ndarray) -> list[int]:
    """Classify each split ``l = 1..n-1`` as 0, 1 or 2 (regimes S0, S1, S2)."""
    n = len(L_sorted)
    prefix = np.cumsum(L_sorted)
    out = []
    for l in range(1, n):
        A, nxt = float(prefix[l - 1]), float(L_sorted[l])
        if A > (n - l + 1) * nxt:
            out.append(2)
        elif A > (n - l - 1) * nxt:
            out.append(1)
        else:
            out.append(0)
    return out


def mmf_bound_unequal(limits: "UtilityLimits | list | tuple | np.ndarray") -> BoundReport:
    """Tight MMF bound for arbitrary positive maximum utilities."""
    L, perm = _sorted_limits(limits)
    n = len(L)
    regimes = mmf_regimes(L)
    assert regimes[-1] in (1, 2), "l = n-1 must fall in S1 or S2 for positive limits"
    total = math.fsum(L)
    s1 = [l for l, r in zip(range(1, n), regimes) if r == 1]
    aux: dict = {"permutation": list(perm), "regimes": regimes}
    if s1:
        l_star = max(s1)
        A, nxt = math.fsum(L[:l_star]), float(L[l_star])
        bound = 1.0 - 4.0 * nxt * total / (A + (n - l_star + 1) * nxt) ** 2
        aux["Y"] = 0.5 * (A / nxt - n + l_star + 1)
        tag = CaseTag.MMF_S1
    else:
        l_star = min(l for l, r in zip(range(1, n), regimes) if r == 2)
        A = math.fsum(L[:l_star])
        bound = 1.0 - total / (A * (n - l_star + 1))
        aux["Y"] = 1.0
        tag = CaseTag.MMF_S2
    aux["A"] = A
    aux["x_star"] = 1.0 / float(L[l_star])
    return BoundReport(bound, Criterion.MMF, tag, l_star, aux)


def bft_pf_bound_equal(n: int) -> float:
    """Earlier equal-utilities PF bound ``1 - (2 sqrt(n) - 1) / n`` (tight only for square n)."""
    n = check_n(n)
    return 1.0 - (2.0 * math.sqrt(n) - 1.0) / n


def bft_mmf_bound_equal(n: int) -> float:
    """Equal-utilities MMF bound ``1 - 4n / (n+1)^2``."""
    n = check_n(n)
    return 1.0 - 4.0 * n / (n + 1) ** 2


def delta_improvement(n: int) -> float:
    """Relative improvement of :func:`pf_bound_equal` over :func:`bft_pf_bound_equal`.

    For ``n >= 3`` the piecewise closed form in ``k = floor(sqrt n)`` and
    ``eps = sqrt(n) - k`` is used; the branch follows the optimal ``m`` rather
    than a floating threshold on ``eps``.  ``n = 2`` uses the ratio directly.
    """
    n = check_n(n)
    if n == 2:
        bft = bft_pf_bound_equal(2)
        return (bft - pf_bound_equal(2).bound) / bft
    k = math.isqrt(n)
    root = math.sqrt(n)
    eps = root - k
    denom = n - 2.0 * root + 1.0
    if equal_pf_m(n) == k:
        return eps * eps / (k * denom)
    return (1.0 - eps) ** 2 / ((k + 1) * denom)


def worst_case_sup(n: int, criterion: "Criterion | str" = Criterion.PF) -> float:
    """Supremum over all limit vectors of either bound: ``1 - 1/n`` (never attained)."""
    Criterion.parse(criterion)
    n = check_n(n)
    return 1.0 - 1.0 / n


def bound_for(limits: "UtilityLimits | list | tuple | np.ndarray", criterion: "Criterion | str") -> BoundReport:
    if Criterion.parse(criterion) is Criterion.PF:
        return pf_bound_unequal(limits)
    return mmf_bound_unequal(limits)
