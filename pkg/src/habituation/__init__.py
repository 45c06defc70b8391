"""Bayesian model of emotional habituation to novelty.

Arousal is the information gain of each exposure to a repeated stimulus;
valence follows from arousal through a Wundt curve.
"""

from .belief import (
    GaussianBelief,
    HabituationParams,
    StimulusModel,
    batch_update,
    posterior_sequence,
    single_update,
)
from .dynamics import (
    DecayRates,
    crossover_delta,
    crossover_exists,
    decay_rates,
    prediction_error_at,
    uncertainty_at,
)
from .errors import (
    AccuracyError,
    DegenerateError,
    DomainError,
    EmitError,
    HabituationError,
    NoCrossingError,
    ShapeError,
)
from .experiments import Dataset, Series, SweepSpec, regenerate, reproduce_figure, sweep
from .gain import GainTerms, gain_terms, gain_trajectory, kl_gaussian, kl_numeric, step_gain
from .output import emit
from .valence import (
    WundtParams,
    acceptable_prediction_error,
    crossing_closed_form,
    positive_gain_crossing,
    valence,
)

__version__ = "0.1.0"
