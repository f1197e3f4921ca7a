"""Tabular reproductions of the bound sweeps and variance-sensitivity studies.

Every experiment returns a list of rows (``dict`` of column name to number)
with a fixed column set; :func:`write_csv` and :func:`write_svg` serialize them.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import bounds
from .domain import Criterion, UtilityLimits

ExperimentRow = dict[str, float]


class InvalidRange(ValueError):
    pass


class InvalidParams(ValueError):
    pass


def _check_range(n_min: int, n_max: int) -> None:
    if not (2 <= n_min <= n_max):
        raise InvalidRange(f"need 2 <= n_min <= n_max, got n_min={n_min}, n_max={n_max}")


def _bound(L, criterion: Criterion) -> float:
    return bounds.bound_for(L, criterion).bound


def sweep_bounds_vs_n(criterion: "Criterion | str", n_min: int, n_max: int) -> list[ExperimentRow]:
    """Equal-utilities bounds (ours and the earlier comparator) for each ``n`` in range."""
    criterion = Criterion.parse(criterion)
    _check_range(n_min, n_max)
    rows = []
    for n in range(n_min, n_max + 1):
        if criterion is Criterion.PF:
            ours, bft = bounds.pf_bound_equal(n).bound, bounds.bft_pf_bound_equal(n)
        else:
            ours, bft = bounds.mmf_bound_unequal(UtilityLimits.equal(n)).bound, bounds.bft_mmf_bound_equal(n)
        rows.append({"n": n, "our_bound": ours, "bft_bound": bft})
    return rows


def sweep_delta(n_min: int, n_max: int) -> list[ExperimentRow]:
    """Relative improvement per ``n``, flagging local maxima.

    ``n`` is a local maximum when it beats ``n + 1`` and, unless ``n == 2``
    (the smallest admissible ``n``), also ``n - 1``.  The flagged set is
    checked against ``{a(a+1)}`` over the range.
    """
    _check_range(n_min, n_max)
    delta = {n: bounds.delta_improvement(n) for n in range(max(2, n_min - 1), n_max + 2)}
    rows = []
    for n in range(n_min, n_max + 1):
        peak = delta[n] > delta[n + 1] and (n == 2 or delta[n] > delta[n - 1])
        rows.append({"n": n, "delta": delta[n], "local_max": int(peak)})
    found = {int(r["n"]) for r in rows if r["local_max"]}
    expected = {a * (a + 1) for a in range(1, math.isqrt(n_max) + 1) if n_min <= a * (a + 1) <= n_max}
    assert found == expected, f"local maxima {sorted(found)} != {sorted(expected)}"
    return rows


def sample_limits(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    """Draw ``n`` values from Normal(1, sigma), redrawing any non-positive component."""
    L = rng.normal(1.0, sigma, n) if sigma > 0 else np.ones(n)
    bad = L <= 0.0
    while np.any(bad):
        L[bad] = rng.normal(1.0, sigma, int(bad.sum()))
        bad = L <= 0.0
    return L


def variance_sensitivity(
    criterion: "Criterion | str",
    n: int = 9,
    sigma_step: float = 0.01,
    steps: int = 100,
    draws_per_sigma: int = 1,
    seed: int = 0,
) -> list[ExperimentRow]:
    """Bound against the sample variance of truncated-normal limit vectors.

    Step ``t`` (1-based) uses ``sigma = sigma_step * (t - 1)``.  Each draw has its
    own generator seeded from ``(seed, t, draw)`` so rows are order independent.
    """
    criterion = Criterion.parse(criterion)
    if n < 2 or steps < 1 or draws_per_sigma < 1 or sigma_step < 0 or not math.isfinite(sigma_step):
        raise InvalidParams("need n >= 2, steps >= 1, draws_per_sigma >= 1, sigma_step >= 0")
    rows = []
    for t in range(1, steps + 1):
        sigma = sigma_step * (t - 1)
        for d in range(draws_per_sigma):
            rng = np.random.default_rng([seed, t, d])
            L = sample_limits(rng, n, sigma)
            rows.append({
                "t": t,
                "draw": d,
                "sigma": sigma,
                "sample_variance": float(np.var(L)),
                "our_bound": _bound(L, criterion),
            })
    return rows


def n2_limit_sweep(l2_values: Iterable[float]) -> list[ExperimentRow]:
    """Two players with ``L = (1, L2)``; variance uses divisor n, so it peaks at 0.25."""
    rows = []
    for l2 in l2_values:
        l2 = float(l2)
        if not (0.0 < l2 <= 1.0):
            raise InvalidParams(f"L2 must lie in (0, 1], got {l2!r}")
        rows.append({
            "l2": l2,
            "sample_variance": (1.0 - l2) ** 2 / 4.0,
            "our_bound": bounds.pf_bound_unequal((1.0, l2)).bound,
        })
    return rows


def format_number(x: float) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.12g}"


def write_csv(rows: Sequence[ExperimentRow], out: TextIO) -> None:
    if not rows:
        return
    writer = csv.writer(out, lineterminator="\n")
    columns = list(rows[0])
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row[c]) for c in columns])


def to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def to_svg(rows: Sequence[ExperimentRow], x: str, y: str, width: int = 640, height: int = 400,
           title: str = "") -> str:
    """Minimal SVG line chart of column ``y`` against column ``x``."""
    if not rows:
        raise InvalidParams("no rows to plot")
    xs = np.array([float(r[x]) for r in rows])
    ys = np.array([float(r[y]) for r in rows])
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    pad = 50
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def sx(v: float) -> float:
        return pad + (v - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(v: float) -> float:
        return height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)

    points = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="2" points="{points}"/>',
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle" font-size="12">{x}</text>',
        f'<text x="15" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {height / 2})">{y}</text>',
        f'<text x="{pad}" y="{height - pad + 15}" font-size="10">{format_number(x0)}</text>',
        f'<text x="{width - pad}" y="{height - pad + 15}" font-size="10" text-anchor="end">{format_number(x1)}</text>',
        f'<text x="{pad - 5}" y="{height - pad}" font-size="10" text-anchor="end">{format_number(y0)}</text>',
        f'<text x="{pad - 5}" y="{pad + 4}" font-size="10" text-anchor="end">{format_number(y1)}</text>',
    ]
    if title:
        parts.append(f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
