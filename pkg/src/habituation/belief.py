"""
Gaussian belief over a stimulus feature and its tempered Bayesian update.

The likelihood of each exposure is raised to a learning-rate power before
being combined with the prior.  With a Gaussian prior N(eta, tau^2) and a
Gaussian likelihood of known variance sigma^2 the posterior stays Gaussian:

    eta_n   = (a n tau^2 xbar + sigma^2 eta) / (a n tau^2 + sigma^2)
    tau_n^2 = tau^2 sigma^2 / (a n tau^2 + sigma^2)

Every exposure is assumed to present the same stimulus, so the data are
summarised by their mean ``xbar`` alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

DEFAULT_LEARNING_RATE = 0.1


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _positive(name: str, value: float) -> float:
    value = _finite(name, value)
    if value <= 0.0:
        raise DomainError(f"{name} must be > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class GaussianBelief:
    """Belief N(mean, variance) over the estimated stimulus mean."""

    mean: float
    variance: float

    def __post_init__(self):
        object.__setattr__(self, "mean", _finite("mean", self.mean))
        object.__setattr__(self, "variance", _positive("variance", self.variance))

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class StimulusModel:
    """Gaussian likelihood of the repeated stimulus: data mean and noise variance."""

    data_mean: float
    noise: float

    def __post_init__(self):
        object.__setattr__(self, "data_mean", _finite("data_mean", self.data_mean))
        object.__setattr__(self, "noise", _positive("noise", self.noise))


@dataclass(frozen=True)
class HabituationParams:
    """Scenario driving the closed forms.

    Attributes:
        initial_prediction_error: |prior mean - data mean|, >= 0.
        initial_uncertainty: prior variance, > 0.
        noise: likelihood variance, > 0.
        learning_rate: likelihood exponent.  Zero is allowed here because the
            gain closed forms have a well defined (all-zero) limit there; the
            update functions reject it.
        exposures: number of repeated exposures N, >= 1.
    """

    initial_prediction_error: float
    initial_uncertainty: float
    noise: float
    learning_rate: float = DEFAULT_LEARNING_RATE
    exposures: int = 10

    def __post_init__(self):
        delta = _finite("initial_prediction_error", self.initial_prediction_error)
        if delta < 0.0:
            raise DomainError(f"initial_prediction_error must be >= 0, got {delta!r}")
        object.__setattr__(self, "initial_prediction_error", delta)
        object.__setattr__(
            self, "initial_uncertainty", _positive("initial_uncertainty", self.initial_uncertainty)
        )
        object.__setattr__(self, "noise", _positive("noise", self.noise))
        alpha = _finite("learning_rate", self.learning_rate)
        if alpha < 0.0:
            raise DomainError(f"learning_rate must be >= 0, got {alpha!r}")
        object.__setattr__(self, "learning_rate", alpha)
        if isinstance(self.exposures, bool) or int(self.exposures) != self.exposures:
            raise DomainError(f"exposures must be an integer, got {self.exposures!r}")
        object.__setattr__(self, "exposures", int(self.exposures))
        if self.exposures < 1:
            raise DomainError(f"exposures must be >= 1, got {self.exposures!r}")
        if alpha > 0.0 and not self.g(1) > self.g(0):
            raise DomainError("g_n must increase with n; learning rate underflows")

    def g(self, n: float) -> float:
        """g_n = alpha * S_pl * n + S_l."""
        return self.learning_rate * self.initial_uncertainty * n + self.noise

    def prior(self, prior_mean: float = 0.0) -> GaussianBelief:
        return GaussianBelief(prior_mean, self.initial_uncertainty)

    def stimulus(self, prior_mean: float = 0.0) -> StimulusModel:
        """Stimulus placed ``initial_prediction_error`` above ``prior_mean``."""
        return StimulusModel(prior_mean + self.initial_prediction_error, self.noise)


def _check_update_args(noise, learning_rate):
    noise = _positive("noise", noise)
    alpha = _positive("learning_rate", learning_rate)
    return noise, alpha


def single_update(
    prior: GaussianBelief,
    observation: float,
    noise: float,
    learning_rate: float = DEFAULT_LEARNING_RATE,
) -> GaussianBelief:
    """Posterior after one observation with the likelihood tempered by ``learning_rate``."""
    noise, alpha = _check_update_args(noise, learning_rate)
    x = _finite("observation", observation)
    denom = alpha * prior.variance + noise
    mean = (alpha * prior.variance * x + noise * prior.mean) / denom
    return GaussianBelief(mean, prior.variance * noise / denom)


def batch_update(
    prior: GaussianBelief,
    data_mean: float,
    n: int,
    noise: float,
    learning_rate: float = DEFAULT_LEARNING_RATE,
) -> GaussianBelief:
    """Posterior after ``n`` identical exposures at ``data_mean``; n=0 returns the prior."""
    noise, alpha = _check_update_args(noise, learning_rate)
    xbar = _finite("data_mean", data_mean)
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        return prior
    weight = alpha * n * prior.variance
    denom = weight + noise
    mean = (weight * xbar + noise * prior.mean) / denom
    return GaussianBelief(mean, prior.variance * noise / denom)


def posterior_sequence(params: HabituationParams, prior_mean: float = 0.0) -> list[GaussianBelief]:
    """Beliefs for n = 0..N under ``params``."""
    prior = params.prior(prior_mean)
    stim = params.stimulus(prior_mean)
    return [
        batch_update(prior, stim.data_mean, n, stim.noise, params.learning_rate)
        for n in range(params.exposures + 1)
    ]
