"""Single-level occupancy statistics for capacity-bounded systems.

A level holds at most ``d`` elements; a state with ``r`` occupants
carries the Gibbs weight exp(lambda * r), where the activity exponent
lambda folds together the per-element multiplier alpha, the inverse
money scale beta and the sign convention (cost vs salary).  The mean
occupation is the intermediate (Gentile) statistics: Fermi-Dirac at
d = 1, Bose-Einstein in the d -> infinity limit.

All evaluators are pure functions.  The closed forms have a removable
singularity at lambda = 0; a Laurent-series branch takes over once
|lambda| * (d + 1) drops below ``SERIES_CUTOFF``, and positive
activities are mapped through the complement identity
f(lambda) = d - f(-lambda) so nothing ever overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import ValidationError

__all__ = [
    "SERIES_CUTOFF",
    "EnergySign",
    "OccupancyLevel",
    "GibbsParams",
    "Activity",
    "OccupancyPmf",
    "activity",
    "partition",
    "log_partition",
    "partition_single",
    "occupancy_probabilities",
    "occupancy_pmf",
    "gentile_mean",
    "gentile_mean_direct",
    "gentile_mean_dlambda",
    "mean_occupancy",
    "fermi_dirac",
    "bose_einstein",
    "activity_for_mean",
]

#: below this value of |lambda| * (d + 1) the closed forms lose their
#: leading digits to cancellation and the series branch takes over
SERIES_CUTOFF = 1e-4

# the derivative cancels one order harder, so it switches earlier
_DERIV_SERIES_CUTOFF = 1e-2


class EnergySign(Enum):
    """How the money scale of a level enters the activity exponent.

    COST: occupying costs money, lambda = alpha - beta * epsilon.
    SALARY: occupying pays (a potential well), lambda = alpha + beta * epsilon.
    """

    COST = "cost"
    SALARY = "salary"


def _check_capacity(d) -> int:
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise ValidationError(f"capacity must be an integer, got {d!r}")
    if d < 1:
        raise ValidationError(f"capacity must be >= 1, got {d}")
    return int(d)


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not math.isfinite(lam):
        raise ValidationError(f"activity exponent must be finite, got {lam}")
    return lam


@dataclass(frozen=True)
class OccupancyLevel:
    """One hierarchical level: capacity, money scale and sign convention."""

    capacity: int
    money_scale: float
    sign: EnergySign = EnergySign.SALARY

    def __post_init__(self):
        problems = []
        if isinstance(self.capacity, bool) or not isinstance(self.capacity, (int, np.integer)):
            problems.append(f"capacity must be an integer, got {self.capacity!r}")
        elif self.capacity < 1:
            problems.append(f"capacity must be >= 1, got {self.capacity}")
        scale = self.money_scale
        if not isinstance(scale, (int, float, np.floating, np.integer)) \
                or not math.isfinite(scale) or scale < 0:
            problems.append(f"money_scale must be finite and >= 0, got {scale!r}")
        if not isinstance(self.sign, EnergySign):
            problems.append(f"sign must be an EnergySign, got {self.sign!r}")
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "capacity", int(self.capacity))
        object.__setattr__(self, "money_scale", float(scale))


@dataclass(frozen=True)
class GibbsParams:
    """Lagrange pair: element multiplier alpha and inverse money scale beta > 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        problems = []
        if not math.isfinite(self.alpha):
            problems.append(f"alpha must be finite, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            problems.append(f"beta must be finite and > 0, got {self.beta}")
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class Activity:
    """Per-element exponent lambda in the Gibbs weight exp(lambda * r)."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValidationError(f"activity must be finite, got {self.value}")
        object.__setattr__(self, "value", float(self.value))

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class OccupancyPmf:
    """Normalized occupation probabilities p(r), r = 0 .. capacity."""

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "probabilities", p)
        problems = []
        if p.ndim != 1 or p.size < 2:
            problems.append("probabilities must be a 1-d vector of length >= 2")
        else:
            if np.any(p < 0.0) or np.any(p > 1.0):
                problems.append("every probability must lie in [0, 1]")
            if abs(float(p.sum()) - 1.0) > 1e-12:
                problems.append(f"probabilities must sum to 1 within 1e-12, got {p.sum()!r}")
        if problems:
            raise ValidationError(problems)

    @property
    def capacity(self) -> int:
        return self.probabilities.size - 1

    def mean(self) -> float:
        r = np.arange(self.probabilities.size, dtype=float)
        return float(r @ self.probabilities)


def activity(level: OccupancyLevel, params: GibbsParams) -> Activity:
    """Activity exponent of a level under the given Gibbs parameters."""
    if level.sign is EnergySign.COST:
        return Activity(params.alpha - params.beta * level.money_scale)
    return Activity(params.alpha + params.beta * level.money_scale)


def _inv_expm1(x: float) -> float:
    # 1 / (e^x - 1) for x > 0; exact at both ends, never overflows
    return math.exp(-x) / (-math.expm1(-x))


_LN_HALF = math.log(0.5)


def _log1mexp(t: float) -> float:
    # log(1 - e^t) for t < 0 with full relative precision at both ends
    if t < _LN_HALF:
        return math.log1p(-math.exp(t))
    return math.log(-math.expm1(t))


def log_partition(lam, d: int) -> float:
    """log Z where Z = sum_{r=0}^{d} exp(lambda * r).

    Safe for any |lambda| * d, including values whose Z would overflow a
    double; callers in that regime must stay in log space.
    """
    lam = _check_lambda(lam)
    d = _check_capacity(d)
    x = lam * (d + 1.0)
    if abs(x) < SERIES_CUTOFF:
        return math.log1p(d) + 0.5 * lam * d + lam * lam * d * (d + 2.0) / 24.0
    if lam > 0.0:
        return lam * d + _log1mexp(-x) - _log1mexp(-lam)
    return _log1mexp(x) - _log1mexp(lam)


def partition(lam, d: int) -> float:
    """Z = sum_{r=0}^{d} exp(lambda * r), exactly d + 1 at lambda = 0.

    Raises OverflowError when lambda * d exceeds the double exponent
    range; use :func:`log_partition` there.
    """
    lam = _check_lambda(lam)
    d = _check_capacity(d)
    if lam == 0.0:
        return d + 1.0
    return math.exp(log_partition(lam, d))


def occupancy_probabilities(lam, d: int) -> np.ndarray:
    """p(r) = exp(lambda r) / Z, computed with the max exponent subtracted."""
    lam = _check_lambda(lam)
    d = _check_capacity(d)
    r = np.arange(d + 1, dtype=float)
    logw = lam * r
    w = np.exp(logw - logw.max())
    return w / w.sum()


def gentile_mean(lam, d: int) -> float:
    """Mean occupation of a capacity-d level at activity lambda.

    Closed form 1/(e^{-lam} - 1) - (d+1)/(e^{-lam(d+1)} - 1), with a
    series branch around the removable lambda = 0 point (value exactly
    d/2 there) and the complement identity for lambda > 0.  Strictly
    increasing in lambda with range (0, d).
    """
    lam = _check_lambda(lam)
    d = _check_capacity(d)
    x = lam * (d + 1.0)
    if abs(x) < SERIES_CUTOFF:
        dd = d + 1.0
        return 0.5 * d + lam * d * (d + 2.0) / 12.0 - lam ** 3 * (dd ** 4 - 1.0) / 720.0
    if lam > 0.0:
        return d - gentile_mean(-lam, d)
    return _inv_expm1(-lam) - (d + 1.0) * _inv_expm1(-x)


def gentile_mean_direct(lam, d: int) -> float:
    """Brute-force oracle for :func:`gentile_mean`.

    Evaluates sum_r r e^{lambda r} / sum_r e^{lambda r} term by term
    (O(d) work and memory); kept separate so the closed form can be
    cross-checked against it and never silently replaced by it.
    """
    lam = _check_lambda(lam)
    d = _check_capacity(d)
    r = np.arange(d + 1, dtype=float)
    logw = lam * r
    w = np.exp(logw - logw.max())
    return float((r * w).sum() / w.sum())


def gentile_mean_dlambda(lam, d: int) -> float:
    """d(gentile_mean)/d(lambda): the occupation-number variance.

    Even in lambda; equals d(d+2)/12 at lambda = 0.
    """
    lam = _check_lambda(lam)
    d = _check_capacity(d)
    x = lam * (d + 1.0)
    dd = d + 1.0
    if abs(x) < _DERIV_SERIES_CUTOFF:
        l2 = lam * lam
        return (d * (d + 2.0) / 12.0
                - l2 * (dd ** 4 - 1.0) / 240.0
                + l2 * l2 * (dd ** 6 - 1.0) / 6048.0)
    a = _inv_sq_sinh_half(abs(lam))
    b = _inv_sq_sinh_half(abs(x))
    return a - dd * dd * b


def _inv_sq_sinh_half(x: float) -> float:
    # 1 / (4 sinh^2(x/2)) = e^{-x} / (1 - e^{-x})^2 for x > 0
    t = math.exp(-x)
    u = -math.expm1(-x)
    return t / (u * u)


def fermi_dirac(lam) -> float:
    """Occupation 1 / (e^{-lambda} + 1) of a capacity-1 level."""
    lam = _check_lambda(lam)
    if lam >= 0.0:
        return 1.0 / (1.0 + math.exp(-lam))
    t = math.exp(lam)
    return t / (1.0 + t)


def bose_einstein(lam) -> float:
    """Occupation 1 / (e^{-lambda} - 1) of an unbounded level.

    Defined only for lambda < 0; at lambda >= 0 the unbounded form
    diverges and the caller must fall back to a finite capacity.
    """
    lam = _check_lambda(lam)
    if not lam < 0.0:
        raise ValidationError(
            f"bose_einstein requires lambda < 0 (diverges otherwise), got {lam}")
    return _inv_expm1(-lam)


def activity_for_mean(d: int, target: float) -> float:
    """Invert :func:`gentile_mean` in lambda at fixed capacity.

    The mean is strictly increasing, so the root is unique; solved by
    bracket expansion plus Brent iteration to machine precision.
    """
    d = _check_capacity(d)
    target = float(target)
    if not (math.isfinite(target) and 0.0 < target < d):
        raise ValidationError(
            f"target mean must lie strictly inside (0, {d}), got {target}")
    lo, hi = -1.0, 1.0
    while gentile_mean(lo, d) >= target:
        lo *= 2.0
        if lo < -1e9:  # pragma: no cover - target bounds make this unreachable
            raise ValidationError("failed to bracket the activity from below")
    while gentile_mean(hi, d) <= target:
        hi *= 2.0
        if hi > 1e9:  # pragma: no cover
            raise ValidationError("failed to bracket the activity from above")
    return float(brentq(lambda l: gentile_mean(l, d) - target, lo, hi,
                        xtol=1e-15, rtol=8.882e-16, maxiter=200))


# --- typed wrappers over the float kernels ---------------------------------

def partition_single(level: OccupancyLevel, lam) -> float:
    """Partition sum of one level at the given activity."""
    return partition(float(lam), level.capacity)


def occupancy_pmf(level: OccupancyLevel, lam) -> OccupancyPmf:
    """Normalized occupation distribution of one level."""
    return OccupancyPmf(occupancy_probabilities(float(lam), level.capacity))


def mean_occupancy(level: OccupancyLevel, lam) -> float:
    """Mean occupation of one level at the given activity."""
    return gentile_mean(float(lam), level.capacity)
