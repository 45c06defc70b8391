"""Prediction error and uncertainty as functions of (continuous) exposure count.

    delta_n = delta_i S_l / g_n        S_pn = S_pl S_l / g_n

and their derivatives in n.  Also the condition under which two gain curves
of different initial uncertainty intersect at n = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .belief import HabituationParams
from .errors import DegenerateError, DomainError, NoCrossingError
from .gain import gain_terms


@dataclass(frozen=True)
class DecayRates:
    prediction_error_rate: float
    uncertainty_rate: float


def _check_n(n):
    # type preserved so extended-precision numbers (e.g. mpmath) pass through
    if not math.isfinite(float(n)) or n < 0:
        raise DomainError(f"n must be finite and >= 0, got {n!r}")
    return n


def prediction_error_at(params: HabituationParams, n: float) -> float:
    n = _check_n(n)
    return params.initial_prediction_error * params.noise / params.g(n)


def uncertainty_at(params: HabituationParams, n: float) -> float:
    n = _check_n(n)
    return params.initial_uncertainty * params.noise / params.g(n)


def decay_rates(params: HabituationParams, n: float) -> DecayRates:
    n = _check_n(n)
    alpha, s_pl, s_l = params.learning_rate, params.initial_uncertainty, params.noise
    ratio = s_pl / s_l
    error_rate = -alpha * params.initial_prediction_error * ratio / (alpha * n * ratio + 1.0) ** 2
    uncertainty_rate = -(alpha / s_l) / (alpha * n / s_l + 1.0 / s_pl) ** 2
    return DecayRates(error_rate, uncertainty_rate)


def _check_pair(s_p1, s_p2, noise, learning_rate):
    values = []
    for name, v in (("s_p1", s_p1), ("s_p2", s_p2), ("noise", noise), ("learning_rate", learning_rate)):
        v = float(v)
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"{name} must be finite and > 0, got {v!r}")
        values.append(v)
    return values


def crossover_exists(s_p1: float, s_p2: float, noise: float, learning_rate: float) -> bool:
    """Whether the n=1 gain curves for the two uncertainties intersect at some delta_i > 0."""
    s_p1, s_p2, noise, learning_rate = _check_pair(s_p1, s_p2, noise, learning_rate)
    return s_p1 * s_p2 > (noise / learning_rate) ** 2


def crossover_delta(
    s_p1: float, s_p2: float, noise: float, learning_rate: float, n: int = 1
) -> float:
    """Squared prediction error at which the two gain curves of exposure ``n`` meet.

    Solves 1/2 (A_1 + B_1 d^2) = 1/2 (A_2 + B_2 d^2) for d^2.
    """
    s_p1, s_p2, noise, learning_rate = _check_pair(s_p1, s_p2, noise, learning_rate)
    if s_p1 == s_p2:
        raise DegenerateError("equal uncertainties give identical gain curves")
    if n == 1 and not crossover_exists(s_p1, s_p2, noise, learning_rate):
        raise NoCrossingError(
            f"s_p1*s_p2={s_p1 * s_p2:g} does not exceed (noise/alpha)^2={(noise / learning_rate) ** 2:g}"
        )
    t1 = gain_terms(HabituationParams(0.0, s_p1, noise, learning_rate, n), n)
    t2 = gain_terms(HabituationParams(0.0, s_p2, noise, learning_rate, n), n)
    db = t1.b_term - t2.b_term
    if db == 0.0:
        raise NoCrossingError("gain curves are parallel in delta^2")
    delta_sq = (t2.a_term - t1.a_term) / db
    if not (delta_sq > 0.0 and math.isfinite(delta_sq)):
        raise NoCrossingError(f"curves meet at non-positive delta^2={delta_sq:g}")
    return delta_sq
