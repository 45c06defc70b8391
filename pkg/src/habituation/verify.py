"""Randomised oracle checks shared by the ``verify`` command and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .belief import GaussianBelief, HabituationParams, batch_update, single_update
from .dynamics import crossover_delta, crossover_exists
from .gain import kl_gaussian, kl_numeric, step_gain
from .valence import (
    WundtParams,
    acceptable_prediction_error,
    crossing_closed_form,
    positive_gain_crossing,
    valence,
)
from .errors import ShapeError

ORACLE_TOL = 1e-9
SEQUENTIAL_RTOL = 1e-12
ROOT_TOL = 1e-10
SCAN_POINTS = 10_000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _log_uniform(rng, lo, hi):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def random_params(rng: np.random.Generator, count: int, max_steps: int = 30) -> list[HabituationParams]:
    """Scenarios with S_pl, S_l log-uniform in [1e-2, 1e2], delta in [0, 20], alpha in [0.01, 1]."""
    out = []
    for _ in range(count):
        out.append(
            HabituationParams(
                initial_prediction_error=float(rng.uniform(0.0, 20.0)),
                initial_uncertainty=_log_uniform(rng, 1e-2, 1e2),
                noise=_log_uniform(rng, 1e-2, 1e2),
                learning_rate=float(rng.uniform(0.01, 1.0)),
                exposures=int(rng.integers(1, max_steps + 1)),
            )
        )
    return out


def random_crossover_tuples(rng: np.random.Generator, count: int, margin: float = 0.05) -> list[tuple]:
    """(s_p1, s_p2, noise, alpha) tuples kept at least ``margin`` (in log) away from
    equal uncertainties and from the crossover boundary, where the flip sits at
    unbounded delta."""
    out = []
    while len(out) < count:
        s1 = _log_uniform(rng, 1e-2, 1e2)
        s2 = _log_uniform(rng, 1e-2, 1e2)
        noise = _log_uniform(rng, 1e-2, 1e1)
        alpha = float(rng.uniform(0.01, 1.0))
        if abs(math.log(s1 / s2)) < margin:
            continue
        if abs(math.log(s1 * s2 * alpha**2 / noise**2)) < margin:
            continue
        out.append((s1, s2, noise, alpha))
    return out


def random_wundt(rng: np.random.Generator, count: int) -> list[WundtParams]:
    out = []
    while len(out) < count:
        g_r = float(rng.uniform(0.0, 2.0))
        try:
            out.append(
                WundtParams(
                    reward_threshold=g_r,
                    aversion_threshold=g_r + float(rng.uniform(0.1, 2.0)),
                    reward_max=(h_r := float(rng.uniform(0.5, 2.0))),
                    aversion_max=h_r * (1.0 + float(rng.uniform(0.05, 1.0))),
                    gradient=float(rng.uniform(1.0, 20.0)),
                )
            )
        except ShapeError:
            continue
    return out


def kl_oracle_errors(params: HabituationParams, n: int, prior_mean: float = 0.0) -> tuple[float, float, float]:
    """Pairwise |differences| among closed-form gain, analytic KL and quadrature KL."""
    prior = params.prior(prior_mean)
    xbar = prior_mean + params.initial_prediction_error
    post = batch_update(prior, xbar, n, params.noise, params.learning_rate)
    before = batch_update(prior, xbar, n - 1, params.noise, params.learning_rate)
    g = step_gain(params, n)
    kl = kl_gaussian(post, before)
    kq = kl_numeric(post, before)
    return abs(g - kl), abs(g - kq), abs(kl - kq)


def sequential_error(prior: GaussianBelief, xbar: float, n: int, noise: float, alpha: float) -> float:
    """Largest relative deviation between n-fold single updates and one batch update."""
    belief = prior
    for _ in range(n):
        belief = single_update(belief, xbar, noise, alpha)
    batch = batch_update(prior, xbar, n, noise, alpha)
    scale = max(abs(prior.mean), abs(xbar), abs(batch.mean))
    return max(
        abs(belief.mean - batch.mean) / scale if scale > 0 else abs(belief.mean - batch.mean),
        abs(belief.variance - batch.variance) / batch.variance,
    )


def first_gain_curve(uncertainty: float, noise: float, alpha: float, deltas: np.ndarray) -> np.ndarray:
    """G at n = 1 over many prediction errors, as the KL between batch-updated beliefs.

    The posterior mean moves linearly with the data mean, so one update at
    unit prediction error gives the shift for every delta.
    """
    prior = GaussianBelief(0.0, uncertainty)
    unit = batch_update(prior, 1.0, 1, noise, alpha)
    ratio = unit.variance / prior.variance
    shift = (unit.mean * deltas) ** 2 / prior.variance
    return 0.5 * (ratio + shift - 1.0 - math.log(ratio))


def scan_flip(s_p1: float, s_p2: float, noise: float, alpha: float, deltas: np.ndarray) -> bool:
    """Brute force: does the ordering of the two n=1 gain curves change along ``deltas``?"""
    diff = first_gain_curve(s_p1, noise, alpha, deltas) - first_gain_curve(s_p2, noise, alpha, deltas)
    signs = np.sign(diff)
    signs = signs[signs != 0]
    return bool(signs.size and np.any(signs != signs[0]))


def scan_grid(tuples) -> np.ndarray:
    """Geometric grid on (0, 10 * sqrt(max crossing delta^2)] for the sample."""
    bound = 1.0
    for s1, s2, noise, alpha in tuples:
        if crossover_exists(s1, s2, noise, alpha):
            bound = max(bound, crossover_delta(s1, s2, noise, alpha))
    upper = 10.0 * math.sqrt(bound)
    return np.geomspace(upper * 1e-12, upper, SCAN_POINTS)


def check_kl_oracle(rng, samples) -> CheckResult:
    worst = 0.0
    for p in random_params(rng, samples):
        worst = max(worst, *kl_oracle_errors(p, p.exposures))
    return CheckResult("kl_oracle", worst <= ORACLE_TOL, f"samples={samples} max_abs_err={worst:.3e} tol={ORACLE_TOL:g}")


def check_sequential(rng, samples) -> CheckResult:
    worst = 0.0
    for p in random_params(rng, samples, max_steps=50):
        prior = GaussianBelief(float(rng.uniform(-10, 10)), p.initial_uncertainty)
        xbar = prior.mean + p.initial_prediction_error
        worst = max(worst, sequential_error(prior, xbar, p.exposures, p.noise, p.learning_rate))
    return CheckResult(
        "sequential_batch", worst <= SEQUENTIAL_RTOL, f"samples={samples} max_rel_err={worst:.3e} tol={SEQUENTIAL_RTOL:g}"
    )


def check_monotone(rng, samples) -> CheckResult:
    bad = 0
    for p in random_params(rng, samples):
        gains = [step_gain(p, n) for n in range(1, p.exposures + 2)]
        bad += any(b >= a for a, b in zip(gains, gains[1:]))
    return CheckResult("monotone_habituation", bad == 0, f"samples={samples} violations={bad}")


def check_crossover(rng, samples) -> CheckResult:
    tuples = random_crossover_tuples(rng, samples)
    grid = scan_grid(tuples)
    disagree = sum(crossover_exists(*t) != scan_flip(*t, grid) for t in tuples)
    crossing = sum(crossover_exists(*t) for t in tuples)
    return CheckResult(
        "crossover_scan", disagree == 0, f"samples={samples} crossing={crossing} disagreements={disagree}"
    )


def check_valence_root(rng, samples) -> CheckResult:
    worst_v = worst_cf = 0.0
    for w in [WundtParams()] + random_wundt(rng, samples):
        root = positive_gain_crossing(w)
        worst_v = max(worst_v, abs(valence(root, w)))
        worst_cf = max(worst_cf, abs(root - crossing_closed_form(w)))
    ok = worst_v < ROOT_TOL and worst_cf < ROOT_TOL
    return CheckResult(
        "valence_root", ok, f"samples={samples + 1} max_abs_V={worst_v:.3e} max_closed_form_err={worst_cf:.3e}"
    )


def check_range_growth(rng, samples) -> CheckResult:
    wundt = WundtParams()
    g_star = positive_gain_crossing(wundt)
    bad = 0
    for p in random_params(rng, samples):
        values = []
        for n in range(1, p.exposures + 2):
            try:
                values.append(acceptable_prediction_error(p, wundt, n, crossing=g_star))
            except ShapeError:
                # undefined until A_n/2 drops below G*; A_n decreases in n
                values = []
        bad += any(b <= a for a, b in zip(values, values[1:]))
    return CheckResult("acceptable_range_growth", bad == 0, f"samples={samples} violations={bad}")


def run_verification(samples: int = 1000, seed: int = 0) -> list[CheckResult]:
    """Run every oracle check; each gets its own child stream so results don't depend on order."""
    streams = np.random.default_rng(seed).spawn(6)
    return [
        check_kl_oracle(streams[0], samples),
        check_sequential(streams[1], samples),
        check_monotone(streams[2], samples),
        check_crossover(streams[3], max(samples // 2, 1)),
        check_valence_root(streams[4], max(samples // 10, 1)),
        check_range_growth(streams[5], samples),
    ]
