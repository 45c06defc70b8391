"""
Per-exposure information gain.

The gain of exposure ``n`` is the KL divergence from the belief after ``n-1``
exposures to the belief after ``n`` exposures:

    G_n = 1/2 (A_n + B_n delta_i^2)
    A_n = r - ln r - 1,  r = g_{n-1} / g_n
    B_n = a^2 S_pl S_l / (g_{n-1} g_n^2)
    g_x = a S_pl x + S_l

``A_n`` is the variance-contraction part, ``B_n delta_i^2`` the mean-shift part.
Units are nats.  ``kl_numeric`` integrates the divergence directly and serves
as an oracle for the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .belief import GaussianBelief, HabituationParams
from .errors import AccuracyError, DomainError

DEFAULT_QUAD_POINTS = 4001
DEFAULT_HALF_WIDTH_SIGMAS = 10.0
QUAD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GainTerms:
    a_term: float
    b_term: float
    g_prev: float
    g_curr: float

    def gain(self, prediction_error: float) -> float:
        return 0.5 * (self.a_term + self.b_term * prediction_error**2)


def _check_step(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"n must be an integer, got {n!r}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    return int(n)


def gain_terms(params: HabituationParams, n: int) -> GainTerms:
    n = _check_step(n)
    alpha, s_pl, s_l = params.learning_rate, params.initial_uncertainty, params.noise
    g_prev = params.g(n - 1)
    g_curr = params.g(n)
    # r - 1 = -a S_pl / g_n exactly; log1p keeps A accurate when r ~ 1
    u = -alpha * s_pl / g_curr
    a_term = max(u - math.log1p(u), 0.0)
    b_term = alpha**2 * s_pl * s_l / (g_prev * g_curr**2)
    return GainTerms(a_term, b_term, g_prev, g_curr)


def step_gain(params: HabituationParams, n: int) -> float:
    """Information gain (nats) of exposure ``n`` >= 1."""
    return gain_terms(params, n).gain(params.initial_prediction_error)


def gain_trajectory(params: HabituationParams) -> list[tuple[int, float]]:
    return [(n, step_gain(params, n)) for n in range(1, params.exposures + 1)]


def kl_gaussian(p: GaussianBelief, q: GaussianBelief) -> float:
    """KL(p || q) for univariate Gaussians, in nats."""
    ratio = p.variance / q.variance
    shift = (p.mean - q.mean) ** 2 / q.variance
    return 0.5 * (ratio + shift - 1.0 - math.log(ratio))


def _log_pdf(x, belief: GaussianBelief):
    return -0.5 * (math.log(2.0 * math.pi * belief.variance) + (x - belief.mean) ** 2 / belief.variance)


def kl_numeric(
    p: GaussianBelief,
    q: GaussianBelief,
    half_width_sigmas: float = DEFAULT_HALF_WIDTH_SIGMAS,
    points: int = DEFAULT_QUAD_POINTS,
) -> float:
    """KL(p || q) by composite Simpson quadrature of p ln(p/q).

    The integrand carries the weight p, so the window is centred on p and
    spans ``half_width_sigmas`` of p's standard deviation either side.  The
    mass of p over the same grid is checked against 1; a residual above
    1e-9 raises :class:`AccuracyError`.
    """
    if int(points) != points or points < 1001 or points % 2 == 0:
        raise DomainError(f"points must be an odd integer >= 1001, got {points!r}")
    if not half_width_sigmas >= 8.0:
        raise DomainError(f"half_width_sigmas must be >= 8, got {half_width_sigmas!r}")
    width = half_width_sigmas * p.std
    x = np.linspace(p.mean - width, p.mean + width, int(points))
    log_p = _log_pdf(x, p)
    dens = np.exp(log_p)
    mass = simpson(dens, x=x)
    residual = abs(mass - 1.0)
    if residual > QUAD_TOLERANCE:
        raise AccuracyError("quadrature window does not capture the density", residual)
    return float(simpson(dens * (log_p - _log_pdf(x, q)), x=x))
