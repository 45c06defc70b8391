"""
Wundt-curve valence and the acceptable prediction error.

Valence is a reward sigmoid minus an aversion sigmoid of the information
gain, sharing one gradient ``c``:

    V(G) = h_r / (1 + exp(-c (G - G_r))) - h_a / (1 + exp(-c (G - G_a)))

Past its peak V falls through zero at G*.  Inverting G = 1/2 (A + B d^2) at
G* gives the largest squared prediction error that still feels positive,
``(2 G* - A) / B``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect
from scipy.special import expit

from .belief import HabituationParams
from .errors import DegenerateError, DomainError, NoCrossingError, ShapeError
from .gain import gain_terms

ROOT_XTOL = 1e-12


@dataclass(frozen=True)
class WundtParams:
    """Reward/aversion sigmoid constants.

    With ``strict=False`` the shape invariants are skipped; only useful for
    probing degenerate curves.
    """

    reward_threshold: float = 0.5
    aversion_threshold: float = 1.5
    reward_max: float = 1.0
    aversion_max: float = 1.2
    gradient: float = 5.0
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for name in ("reward_threshold", "aversion_threshold", "reward_max", "aversion_max", "gradient"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        for name in ("reward_max", "aversion_max", "gradient"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be > 0")
        if not self.strict:
            return
        if not self.aversion_max > self.reward_max:
            raise ShapeError("aversion_max must exceed reward_max for valence to turn negative")
        if not self.aversion_threshold > self.reward_threshold:
            raise ShapeError("aversion_threshold must exceed reward_threshold")
        gap = self.aversion_threshold - self.reward_threshold
        if not self.reward_max > self.aversion_max * math.exp(-self.gradient * gap):
            raise ShapeError("valence never becomes positive for these constants")

    def to_dict(self) -> dict:
        return {
            "reward_threshold": self.reward_threshold,
            "aversion_threshold": self.aversion_threshold,
            "reward_max": self.reward_max,
            "aversion_max": self.aversion_max,
            "gradient": self.gradient,
        }


def valence(gain, wundt: WundtParams):
    """V(G); accepts a scalar or an array of gains."""
    g = np.asarray(gain, dtype=float)
    c = wundt.gradient
    v = wundt.reward_max * expit(c * (g - wundt.reward_threshold)) - wundt.aversion_max * expit(
        c * (g - wundt.aversion_threshold)
    )
    return float(v) if v.ndim == 0 else v


def crossing_closed_form(wundt: WundtParams) -> float:
    """G* = (1/c) ln((h_a e^{c G_r} - h_r e^{c G_a}) / (h_r - h_a)), in log-safe form."""
    c = wundt.gradient
    gap = wundt.aversion_threshold - wundt.reward_threshold
    inner = wundt.reward_max - wundt.aversion_max * math.exp(-c * gap)
    denom = wundt.aversion_max - wundt.reward_max
    if inner <= 0.0 or denom <= 0.0:
        raise NoCrossingError("closed-form crossing argument is not positive")
    return wundt.aversion_threshold + (math.log(inner) - math.log(denom)) / c


def positive_gain_crossing(wundt: WundtParams) -> float:
    """Root of V beyond its peak, by bracketed bisection."""
    c = wundt.gradient
    lo_edge = wundt.reward_threshold - 10.0 / c
    hi_edge = wundt.aversion_threshold + 10.0 / c
    grid = np.linspace(min(lo_edge, hi_edge), max(lo_edge, hi_edge), 4001)
    values = valence(grid, wundt)
    peak = int(np.argmax(values))
    if values[peak] <= 0.0:
        raise NoCrossingError("valence is never positive")
    lo = float(grid[peak])
    hi = max(lo, wundt.aversion_threshold) + 1.0 / c
    for _ in range(200):
        if valence(hi, wundt) < 0.0:
            break
        hi = lo + 2.0 * (hi - lo)
    else:
        raise NoCrossingError("valence does not turn negative beyond its peak")
    return float(bisect(lambda g: valence(g, wundt), lo, hi, xtol=ROOT_XTOL, maxiter=500))


def literal_threshold(wundt: WundtParams) -> float:
    """(1/c) ln((h_a e^{G_r} - h_r e^{G_a}) / (h_r - h_a)) with the gradient left out of the exponents.

    Kept only for comparison output; it is not a root of V in general.
    """
    arg = (
        wundt.aversion_max * math.exp(wundt.reward_threshold)
        - wundt.reward_max * math.exp(wundt.aversion_threshold)
    ) / (wundt.reward_max - wundt.aversion_max)
    if not arg > 0.0:
        raise ShapeError(f"literal logarithm argument is not positive ({arg:g})")
    return math.log(arg) / wundt.gradient


def acceptable_prediction_error(
    params: HabituationParams,
    wundt: WundtParams,
    n: int,
    literal: bool = False,
    crossing: float | None = None,
) -> float:
    """Squared prediction error at which exposure ``n`` brings valence to zero.

    ``literal=True`` evaluates |threshold - A| / B with the uncorrected
    threshold instead, for comparison only.  ``crossing`` lets callers reuse a
    precomputed G*.
    """
    terms = gain_terms(params, n)
    if terms.b_term == 0.0:
        raise DegenerateError("B vanishes (zero learning rate); acceptable range undefined")
    if literal:
        return abs(literal_threshold(wundt) - terms.a_term) / terms.b_term
    g_star = positive_gain_crossing(wundt) if crossing is None else crossing
    excess = 2.0 * g_star - terms.a_term
    if excess < 0.0:
        raise ShapeError(
            f"variance-contraction gain A/2={terms.a_term / 2:g} already exceeds G*={g_star:g} at n={n}"
        )
    return excess / terms.b_term


def acceptable_range_trajectory(
    params: HabituationParams, wundt: WundtParams, literal: bool = False
) -> list[tuple[int, float]]:
    g_star = None if literal else positive_gain_crossing(wundt)
    return [
        (n, acceptable_prediction_error(params, wundt, n, literal=literal, crossing=g_star))
        for n in range(1, params.exposures + 1)
    ]
