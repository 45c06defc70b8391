import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from habituation import (
    DegenerateError,
    HabituationParams,
    NoCrossingError,
    ShapeError,
    WundtParams,
    acceptable_prediction_error,
    crossing_closed_form,
    gain_terms,
    positive_gain_crossing,
    step_gain,
    valence,
)
from habituation.valence import acceptable_range_trajectory, literal_threshold
from habituation.verify import random_wundt

W = WundtParams()
FIG1 = HabituationParams(0.0, 1.0, 0.5, 0.1, 20)

G_STAR = 1.8202639021621145
DG2_N1 = 130.49542491108986
DG2_N2 = 213.3989749204218


def sigmoid(z):
    return 1.0 / (1.0 + math.exp(-z))


class TestValence:
    def test_identical_systems_cancel(self):
        w = WundtParams(1.0, 1.0, 1.0, 1.0, 3.0, strict=False)
        assert np.all(valence(np.linspace(-5, 5, 101), w) == 0.0)

    def test_default_value(self):
        expected = 1.0 * sigmoid(0.0) - 1.2 * sigmoid(-5.0)
        assert valence(0.5, W) == pytest.approx(expected, rel=1e-14)
        assert valence(0.5, W) == pytest.approx(0.49196857889085815, rel=1e-12)

    def test_inverted_u(self):
        g = np.linspace(0.0, 3.0, 3001)
        v = valence(g, W)
        peak = int(np.argmax(v))
        assert W.reward_threshold < g[peak] < W.aversion_threshold
        assert np.all(np.diff(v[: peak + 1]) > 0)
        assert np.all(np.diff(v[peak:]) < 0)

    def test_bounds(self):
        v = valence(np.linspace(-50, 50, 1001), W)
        assert np.all(v > -W.aversion_max) and np.all(v < W.reward_max)

    def test_sign_pattern(self):
        assert valence(0.0, W) >= 0
        assert np.all(valence(np.linspace(0, G_STAR, 500)[:-1], W) > 0)
        assert valence(10.0, W) < 0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(aversion_max=0.9),
            dict(aversion_threshold=0.4),
            dict(reward_max=1.0, aversion_max=1.2, gradient=0.1),
        ],
    )
    def test_shape_invariants(self, kwargs):
        with pytest.raises(ShapeError):
            WundtParams(**kwargs)


class TestCrossing:
    def test_default(self):
        root = positive_gain_crossing(W)
        assert root == pytest.approx(G_STAR, abs=1e-11)
        assert abs(valence(root, W)) < 1e-10
        assert crossing_closed_form(W) == pytest.approx(root, abs=1e-10)

    def test_closed_form_written_out(self):
        c = W.gradient
        direct = math.log(
            (W.aversion_max * math.exp(c * W.reward_threshold) - W.reward_max * math.exp(c * W.aversion_threshold))
            / (W.reward_max - W.aversion_max)
        ) / c
        assert crossing_closed_form(W) == pytest.approx(direct, rel=1e-13)

    @pytest.mark.parametrize("shift", [-0.4, 0.25, 3.0])
    def test_translation(self, shift):
        moved = WundtParams(W.reward_threshold + shift, W.aversion_threshold + shift, 1.0, 1.2, 5.0)
        assert positive_gain_crossing(moved) == pytest.approx(positive_gain_crossing(W) + shift, abs=1e-11)

    def test_random_shapes(self):
        for w in random_wundt(np.random.default_rng(11), 100):
            root = positive_gain_crossing(w)
            assert abs(valence(root, w)) < 1e-10
            assert root == pytest.approx(crossing_closed_form(w), abs=1e-10)

    def test_no_crossing(self):
        flat = WundtParams(0.5, 1.5, 1.0, 1.0, 5.0, strict=False)
        with pytest.raises(NoCrossingError):
            positive_gain_crossing(flat)
        never_positive = WundtParams(0.5, 0.6, 0.1, 1.0, 1.0, strict=False)
        with pytest.raises(NoCrossingError):
            positive_gain_crossing(never_positive)


class TestAcceptableRange:
    def test_spot_values(self):
        assert acceptable_prediction_error(FIG1, W, 1) == pytest.approx(DG2_N1, rel=1e-10)
        assert acceptable_prediction_error(FIG1, W, 2) == pytest.approx(DG2_N2, rel=1e-10)

    def test_pipeline_by_hand(self):
        t = gain_terms(FIG1, 1)
        assert acceptable_prediction_error(FIG1, W, 1) == pytest.approx((2 * G_STAR - t.a_term) / t.b_term, rel=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_gain_at_boundary_is_crossing(self, n):
        d2 = acceptable_prediction_error(FIG1, W, n)
        p = HabituationParams(math.sqrt(d2), 1.0, 0.5, 0.1)
        assert step_gain(p, n) == pytest.approx(positive_gain_crossing(W), rel=1e-12)
        assert abs(valence(step_gain(p, n), W)) < 1e-8

    def test_degenerate(self):
        with pytest.raises(DegenerateError):
            acceptable_prediction_error(HabituationParams(0.0, 1.0, 0.5, 0.0), W, 1)

    def test_shape_error_when_contraction_exceeds_crossing(self):
        p = HabituationParams(0.0, 100.0, 0.01, 1.0)
        with pytest.raises(ShapeError):
            acceptable_prediction_error(p, W, 1)

    def test_literal_reading(self):
        lit = literal_threshold(W)
        assert lit == pytest.approx(math.log((1.2 * math.exp(0.5) - math.exp(1.5)) / -0.2) / 5.0, rel=1e-14)
        t = gain_terms(FIG1, 1)
        assert acceptable_prediction_error(FIG1, W, 1, literal=True) == pytest.approx(
            abs(lit - t.a_term) / t.b_term, rel=1e-14
        )
        # the literal threshold is not a zero of V
        assert abs(valence(lit, W)) > 0.1

    def test_growth_ordered_by_uncertainty(self):
        curves = {
            s: [d for _, d in acceptable_range_trajectory(HabituationParams(0.0, s, 0.5, 0.1, 20), W)]
            for s in (1.0, 5.0, 30.0)
        }
        for s, c in curves.items():
            assert all(b > a for a, b in zip(c, c[1:])), s
        growth = {s: np.diff(c) for s, c in curves.items()}
        assert np.all(growth[5.0] > growth[1.0])
        assert np.all(growth[30.0] > growth[5.0])


@settings(max_examples=300, deadline=None)
@given(
    s_pl=st.floats(min_value=1e-2, max_value=1e2),
    factor=st.floats(min_value=1.05, max_value=100.0),
    s_l=st.floats(min_value=1e-2, max_value=1e2),
    alpha=st.floats(min_value=0.01, max_value=1.0),
    n=st.integers(1, 30),
)
def test_growth_properties(s_pl, factor, s_l, alpha, n):
    g_star = positive_gain_crossing(W)

    def d2(s, k):
        return acceptable_prediction_error(HabituationParams(0.0, s, s_l, alpha), W, k, crossing=g_star)

    try:
        lo = (d2(s_pl, n), d2(s_pl, n + 1))
        hi = (d2(s_pl * factor, n), d2(s_pl * factor, n + 1))
    except ShapeError:
        return
    assert lo[1] > lo[0] and hi[1] > hi[0]
    assert hi[1] - hi[0] > lo[1] - lo[0]
