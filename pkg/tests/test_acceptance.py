"""Exit criteria for the package, each at its pinned tolerance.

Run ``pytest tests/test_acceptance.py`` for a PASS/FAIL line per criterion in
the terminal summary.
"""

import io
import math
import time

import mpmath
import numpy as np
import pytest

from habituation import (
    GaussianBelief,
    HabituationParams,
    WundtParams,
    acceptable_prediction_error,
    crossing_closed_form,
    crossover_exists,
    decay_rates,
    positive_gain_crossing,
    prediction_error_at,
    reproduce_figure,
    step_gain,
    uncertainty_at,
    valence,
)
from habituation.cli import main
from habituation.errors import ShapeError
from habituation.verify import (
    SCAN_POINTS,
    kl_oracle_errors,
    random_crossover_tuples,
    random_params,
    random_wundt,
    scan_flip,
    scan_grid,
    sequential_error,
)

SEED = 20240611


def rng(offset=0):
    return np.random.default_rng(SEED + offset)


@pytest.mark.criterion(1, "oracle equivalence: closed-form gain = analytic KL = quadrature KL (1e-9, 1000 tuples, <10 s)")
def test_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    samples = random_params(rng(1), 1000)
    for p in samples:
        worst = max(worst, *kl_oracle_errors(p, p.exposures))
    elapsed = time.perf_counter() - start
    print(f"max pairwise |diff| = {worst:.3e} over {len(samples)} tuples in {elapsed:.2f} s")
    assert worst <= 1e-9
    assert elapsed < 10.0


@pytest.mark.criterion(2, "sequential single updates equal batch update (rel 1e-12, n <= 50)")
def test_sequential_batch():
    r = rng(2)
    worst = 0.0
    for p in random_params(r, 1000, max_steps=50):
        prior = GaussianBelief(float(r.uniform(-10, 10)), p.initial_uncertainty)
        worst = max(worst, sequential_error(prior, prior.mean + p.initial_prediction_error, p.exposures, p.noise, p.learning_rate))
    print(f"max relative error = {worst:.3e}")
    assert worst <= 1e-12


@pytest.mark.criterion(3, "fig1: decreasing in n, increasing in delta, G(n=1, delta=4) = 0.2300497 +- 1e-6")
def test_fig1():
    ds = reproduce_figure("fig1")
    ys = np.array([s.ys for s in ds.series])
    assert np.all(np.diff(ys, axis=1) < 0)
    assert np.all(np.diff(ys, axis=0) > 0)
    assert abs(ds.get("delta=4").ys[0] - 0.2300497) <= 1e-6


@pytest.mark.criterion(4, "figs 2-3 interaction effect with S_pl in {5, 30} (tol 1e-9)")
def test_interaction_effect():
    tol = 1e-9

    def gains(delta, s_pl):
        p = HabituationParams(delta, s_pl, 0.5, 0.1, 10)
        return [step_gain(p, n) for n in range(1, 11)]

    lo4, hi4 = gains(4.0, 5.0), gains(4.0, 30.0)
    assert hi4[0] > lo4[0] + tol, "delta=4: G1(30) > G1(5)"
    assert hi4[1] < lo4[1] - tol, "delta=4: G2(30) < G2(5)"
    lo10, hi10 = gains(10.0, 5.0), gains(10.0, 30.0)
    assert all(l > h + tol for l, h in zip(lo10, hi10)), "delta=10: G_n(5) > G_n(30) for n in 1..10"
    drop_lo, drop_hi = lo10[0] - lo10[1], hi10[0] - hi10[1]
    print(f"delta=10 drop G1-G2: S_pl=5 -> {drop_lo:.6f}, S_pl=30 -> {drop_hi:.6f}")
    assert drop_hi > drop_lo + tol, (
        f"delta=10: G1-G2 drop for S_pl=30 ({drop_hi:.6f}) is not larger than for S_pl=5 ({drop_lo:.6f})"
    )


@pytest.mark.criterion(5, "crossover law vs brute-force ordering-flip scan (500 tuples, 10,000 points, 0 disagreements)")
def test_crossover_law():
    tuples = random_crossover_tuples(rng(5), 500)
    grid = scan_grid(tuples)
    assert grid.size == SCAN_POINTS
    disagreements = [t for t in tuples if crossover_exists(*t) != scan_flip(*t, grid)]
    crossing = sum(crossover_exists(*t) for t in tuples)
    print(f"{crossing} crossing / {len(tuples) - crossing} non-crossing tuples, {len(disagreements)} disagreements")
    assert 0 < crossing < len(tuples)
    assert not disagreements


@pytest.mark.criterion(6, "forward differences of G in n steeper for larger delta")
def test_decay_steepens_with_error():
    r = rng(6)
    violations = 0
    for p in random_params(r, 1000):
        bigger = HabituationParams(
            p.initial_prediction_error + float(r.uniform(0.01, 10.0)),
            p.initial_uncertainty, p.noise, p.learning_rate, p.exposures,
        )
        for n in range(1, p.exposures + 1):
            d_small = step_gain(p, n + 1) - step_gain(p, n)
            d_big = step_gain(bigger, n + 1) - step_gain(bigger, n)
            violations += not d_big < d_small
    assert violations == 0


@pytest.mark.criterion(7, "acceptable range grows in n, faster for larger S_pl; spot values 130.495 / 213.399 +- 1e-3")
def test_acceptable_range():
    w = WundtParams()
    g_star = positive_gain_crossing(w)
    fig1 = HabituationParams(0.0, 1.0, 0.5, 0.1)
    assert abs(acceptable_prediction_error(fig1, w, 1) - 130.495) <= 1e-3
    assert abs(acceptable_prediction_error(fig1, w, 2) - 213.399) <= 1e-3

    ds = reproduce_figure("fig4")
    growth = [np.diff(s.ys) for s in ds.series]
    assert all(np.all(g > 0) for g in growth)
    assert all(np.all(b > a) for a, b in zip(growth, growth[1:]))

    r = rng(7)
    checked = 0
    for p in random_params(r, 500):
        other = HabituationParams(0.0, p.initial_uncertainty * float(r.uniform(1.05, 100.0)), p.noise, p.learning_rate)

        def d2(q, n):
            return acceptable_prediction_error(q, w, n, crossing=g_star)

        for n in range(1, p.exposures + 1):
            try:
                small = (d2(p, n), d2(p, n + 1))
                large = (d2(other, n), d2(other, n + 1))
            except ShapeError:
                continue  # range empty until A_n/2 falls below G*
            assert small[1] > small[0] and large[1] > large[0]
            assert large[1] - large[0] > small[1] - small[0]
            checked += 1
    print(f"{checked} (tuple, n) growth comparisons")
    assert checked > 1000


@pytest.mark.criterion(8, "valence zero crossing: |V(G*)| < 1e-10, root = closed form within 1e-10 (default + 100 random)")
def test_valence_crossing():
    shapes = [WundtParams()] + random_wundt(rng(8), 100)
    for w in shapes:
        root = positive_gain_crossing(w)
        assert abs(valence(root, w)) < 1e-10
        assert abs(root - crossing_closed_form(w)) < 1e-10


@pytest.mark.criterion(9, "decay rates match central finite differences (rel 1e-6, h = 1e-5)")
def test_decay_rate_derivatives():
    r = rng(9)
    h = mpmath.mpf("1e-5")
    for p in random_params(r, 500):
        n = float(r.uniform(1.0, 50.0))
        with mpmath.workdps(40):
            x = mpmath.mpf(n)
            fd_err = float((prediction_error_at(p, x + h) - prediction_error_at(p, x - h)) / (2 * h))
            fd_unc = float((uncertainty_at(p, x + h) - uncertainty_at(p, x - h)) / (2 * h))
        rates = decay_rates(p, n)
        assert math.isclose(rates.prediction_error_rate, fd_err, rel_tol=1e-6, abs_tol=0.0 if fd_err else 1e-300)
        assert math.isclose(rates.uncertainty_rate, fd_unc, rel_tol=1e-6)


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out=out, err=err)
    return code, out.getvalue().encode()


@pytest.mark.criterion(10, "determinism: figure and verify --seed outputs byte-identical across runs")
def test_determinism(tmp_path):
    for fig in ("fig1", "fig2", "fig3", "fig4"):
        for fmt in ("csv", "json", "svg"):
            paths = [tmp_path / f"{fig}-{i}.{fmt}" for i in range(2)]
            for path in paths:
                assert _cli(["figure", fig, "--out", str(path)])[0] == 0
            assert paths[0].read_bytes() == paths[1].read_bytes()
    first = _cli(["verify", "--samples", "300", "--seed", "7"])
    second = _cli(["verify", "--samples", "300", "--seed", "7"])
    assert first[0] == 0
    assert first == second
