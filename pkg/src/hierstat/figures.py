"""Deterministic tables behind the seven standard charts.

1 occupied share of capacity-1 states vs cost (falling sigmoid)
2 occupied share of capacity-1 states vs salary (rising sigmoid)
3 mean level population vs activity, several capacities
4 the same, relative to capacity
5 equation of state: pressure over temperature vs filling
6 shifted financial potential over temperature vs filling
7 filling vs temperature in condensation units

Each builder returns (header, rows, svg) with the activity grids pinned
so the tables regenerate byte for byte.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .errors import ValidationError
from .gentile import (
    EnergySign,
    GibbsParams,
    OccupancyLevel,
    activity,
    activity_for_mean,
    fermi_dirac,
    gentile_mean,
    log_partition,
)
from .svgplot import line_chart
from .thermostatics import eos_sweep

__all__ = ["FIGURE_IDS", "EOS_D_VALUES", "build_figure"]

FIGURE_IDS = (1, 2, 3, 4, 5, 6, 7)

#: capacities swept by the equation-of-state figures
EOS_D_VALUES = (1, 5, 50, 500, 5000, 50000)

_OVERLAY_D_VALUES = (1, 2, 5, 20)


def _share_sigmoid(sign: EnergySign, alpha: float):
    params = GibbsParams(alpha, 1.0)
    eps = np.linspace(0.0, 10.0, 201)
    share = [fermi_dirac(activity(OccupancyLevel(1, e, sign), params))
             for e in eps]
    return eps, share


def _fig1():
    eps, share = _share_sigmoid(EnergySign.COST, 5.0)
    rows = [(float(e), s) for e, s in zip(eps, share)]
    svg = line_chart([("occupied share", eps, share)],
                     x_label="cost epsilon", y_label="occupied share",
                     title="Share of occupied capacity-1 states vs cost")
    return ("epsilon", "share"), rows, svg


def _fig2():
    eps, share = _share_sigmoid(EnergySign.SALARY, -5.0)
    rows = [(float(e), s) for e, s in zip(eps, share)]
    svg = line_chart([("occupied share", eps, share)],
                     x_label="salary epsilon", y_label="occupied share",
                     title="Share of occupied capacity-1 states vs salary")
    return ("epsilon", "share"), rows, svg


def _overlay(relative: bool):
    lams = np.linspace(-10.0, 10.0, 401)
    columns = []
    for d in _OVERLAY_D_VALUES:
        vals = np.array([gentile_mean(l, d) for l in lams])
        columns.append(vals / d if relative else vals)
    prefix = "rel" if relative else "f_g"
    header = ("lambda",) + tuple(f"{prefix}_d{d}" for d in _OVERLAY_D_VALUES)
    rows = [tuple(float(v) for v in (lam, *[c[i] for c in columns]))
            for i, lam in enumerate(lams)]
    series = [(f"d={d}", lams, c) for d, c in zip(_OVERLAY_D_VALUES, columns)]
    y = "mean population / d" if relative else "mean population"
    svg = line_chart(series, x_label="activity lambda", y_label=y,
                     title="Level population vs activity")
    return header, rows, svg


def _activity_grid(d: int, lam_lo: float, lam_hi: float, points: int = 301):
    grid = np.linspace(lam_lo, lam_hi, points)
    grid = np.unique(np.concatenate([grid, [0.0]]))
    return grid


def _eos_rows(d: int):
    """(lambda, n, omega) over a grid spanning fillings 1e-3/d .. 0.99."""
    lam_lo = activity_for_mean(d, 1e-3)
    lam_hi = activity_for_mean(d, 0.99 * d)
    table = eos_sweep(d, _activity_grid(d, lam_lo, lam_hi))
    return table.lam, table.n_over_d * d, table.p_over_T


def _fig5():
    header = ("d", "lambda", "n_over_V", "n_over_Vd", "p_over_T")
    rows = []
    series = []
    for d in EOS_D_VALUES:
        grid, n, om = _eos_rows(d)
        rows.extend((d, float(l), float(nv), float(nv / d), float(o))
                    for l, nv, o in zip(grid, n, om))
        series.append((f"d={d}", n / d, om))
    svg = line_chart(series, x_label="N/(Vd)", y_label="p/T",
                     title="Thermal equation of state")
    return header, rows, svg


def _fig6():
    header = ("d", "lambda", "n_over_Vd", "mu_shifted_over_T")
    rows = []
    series = []
    for d in EOS_D_VALUES:
        grid, n, _ = _eos_rows(d)
        rows.extend((d, float(l), float(nv / d), float(l))
                    for l, nv in zip(grid, n))
        series.append((f"d={d}", n / d, grid))
    svg = line_chart(series, x_label="N/(Vd)",
                     y_label="(epsilon0 + mu)/T",
                     title="Financial potential vs filling")
    return header, rows, svg


def _solve_omega(d: int, target: float) -> float:
    """Activity at which log Z equals ``target`` (log Z is increasing)."""
    lo, hi = -1.0, 1.0
    while log_partition(lo, d) >= target:
        lo *= 2.0
    while log_partition(hi, d) <= target:
        hi *= 2.0
    return float(brentq(lambda l: log_partition(l, d) - target, lo, hi,
                        xtol=1e-15, rtol=8.882e-16, maxiter=200))


def _fig7():
    header = ("d", "lambda", "x", "n_over_d")
    rows = []
    series = []
    for d in EOS_D_VALUES:
        log_dp1 = math.log1p(d)
        lam_lo = _solve_omega(d, log_dp1 / 2.0)   # x = 2
        lam_hi = _solve_omega(d, log_dp1 / 0.4)   # x = 0.4
        table = eos_sweep(d, _activity_grid(d, lam_lo, lam_hi))
        rows.extend((d, float(l), float(x), float(fill))
                    for l, x, fill in zip(table.lam, table.x, table.n_over_d))
        series.append((f"d={d}", table.x, table.n_over_d))
    svg = line_chart(series, x_label="(T/p) ln(d+1)", y_label="N/(Vd)",
                     title="Condensation of a common-salary level")
    return header, rows, svg


_BUILDERS = {1: _fig1, 2: _fig2, 3: lambda: _overlay(False),
             4: lambda: _overlay(True), 5: _fig5, 6: _fig6, 7: _fig7}


def build_figure(fig_id: int):
    """(header, rows, svg) for one figure id."""
    if isinstance(fig_id, bool) or fig_id not in _BUILDERS:
        raise ValidationError(
            f"figure id must be one of {FIGURE_IDS}, got {fig_id!r}")
    return _BUILDERS[fig_id]()
