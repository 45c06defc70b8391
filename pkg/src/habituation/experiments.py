"""
Figure reproduction and one-at-a-time parameter sweeps.

A sweep varies one scenario parameter over a list of values and evaluates a
metric over exposures for each value, producing one series per value.  The
figure presets live in ``defaults.json`` and are themselves sweeps.
"""

from __future__ import annotations

import copy
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources

from .belief import HabituationParams
from .dynamics import prediction_error_at, uncertainty_at
from .errors import DomainError
from .gain import step_gain
from .valence import (
    WundtParams,
    acceptable_prediction_error,
    positive_gain_crossing,
    valence,
)

# sweep parameter name -> (HabituationParams field, series label symbol)
PARAMETERS = {
    "delta": ("initial_prediction_error", "delta"),
    "uncertainty": ("initial_uncertainty", "S_pl"),
    "noise": ("noise", "S_l"),
    "alpha": ("learning_rate", "alpha"),
}

# metric -> (y axis label, first exposure index)
METRICS = {
    "gain": ("information gain G [nats]", 1),
    "prediction_error": ("prediction error delta_n", 0),
    "uncertainty": ("uncertainty S_pn", 0),
    "valence": ("valence V", 1),
    "acceptable_range": ("acceptable prediction error delta_g^2", 1),
}

X_AXIS = "exposures n"
FIGURES = ("fig1", "fig2", "fig3", "fig4")


@lru_cache(maxsize=1)
def _load_defaults() -> dict:
    text = resources.files(__package__).joinpath("defaults.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_defaults() -> dict:
    """A private copy of the versioned defaults."""
    return copy.deepcopy(_load_defaults())


def default_wundt() -> WundtParams:
    return WundtParams(**_load_defaults()["wundt"])


@dataclass(frozen=True)
class Series:
    label: str
    points: tuple

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if not pts:
            raise DomainError(f"series {self.label!r} is empty")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x1 > x0:
                raise DomainError(f"series {self.label!r}: x must be strictly increasing")
        if not all(math.isfinite(x) and math.isfinite(y) for x, y in pts):
            raise DomainError(f"series {self.label!r} has non-finite values")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "label", str(self.label))

    @property
    def xs(self) -> list[float]:
        return [p[0] for p in self.points]

    @property
    def ys(self) -> list[float]:
        return [p[1] for p in self.points]


@dataclass(frozen=True)
class Dataset:
    label: str
    axes: tuple
    series: tuple
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.axes) != 2:
            raise DomainError("axes must be (x_name, y_name)")
        object.__setattr__(self, "axes", (str(self.axes[0]), str(self.axes[1])))
        series = tuple(s if isinstance(s, Series) else Series(*s) for s in self.series)
        if not series:
            raise DomainError("dataset has no series")
        object.__setattr__(self, "series", series)

    def get(self, label: str) -> Series:
        for s in self.series:
            if s.label == label:
                return s
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "axes": list(self.axes),
            "series": [
                {"label": s.label, "points": [[x, y] for x, y in s.points]} for s in self.series
            ],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Dataset":
        return cls(
            label=data["label"],
            axes=tuple(data["axes"]),
            series=tuple(Series(s["label"], s["points"]) for s in data["series"]),
            provenance=data.get("provenance", {}),
        )


def _params_to_dict(p: HabituationParams) -> dict:
    return {
        "delta": p.initial_prediction_error,
        "uncertainty": p.initial_uncertainty,
        "noise": p.noise,
        "alpha": p.learning_rate,
        "steps": p.exposures,
    }


def _params_from_dict(d: dict) -> HabituationParams:
    return HabituationParams(d["delta"], d["uncertainty"], d["noise"], d["alpha"], d["steps"])


@dataclass(frozen=True)
class SweepSpec:
    """One varying parameter over ``values``, everything else from ``fixed``.

    ``steps`` overrides ``fixed.exposures`` when given.
    """

    varying: str
    values: tuple
    fixed: HabituationParams
    metric: str = "gain"
    steps: int | None = None
    wundt: WundtParams | None = None
    literal: bool = False

    def __post_init__(self):
        if self.varying not in PARAMETERS:
            raise DomainError(f"unknown sweep parameter {self.varying!r}; expected one of {sorted(PARAMETERS)}")
        if self.metric not in METRICS:
            raise DomainError(f"unknown metric {self.metric!r}; expected one of {sorted(METRICS)}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise DomainError("sweep needs at least one value")
        if len(set(values)) != len(values):
            raise DomainError("sweep values must be distinct")
        object.__setattr__(self, "values", values)
        if self.steps is not None:
            object.__setattr__(self, "fixed", replace(self.fixed, exposures=self.steps))
        object.__setattr__(self, "steps", self.fixed.exposures)
        if self.metric in ("valence", "acceptable_range") and self.wundt is None:
            raise DomainError(f"metric {self.metric!r} requires Wundt parameters")
        # constructing every scenario up front surfaces invalid values here
        for v in values:
            self.params_for(v)

    def params_for(self, value: float) -> HabituationParams:
        name = PARAMETERS[self.varying][0]
        return replace(self.fixed, **{name: value})

    def series_label(self, value: float) -> str:
        return f"{PARAMETERS[self.varying][1]}={value:g}"

    def to_dict(self) -> dict:
        return {
            "varying": self.varying,
            "values": list(self.values),
            "fixed": _params_to_dict(self.fixed),
            "metric": self.metric,
            "steps": self.steps,
            "wundt": self.wundt.to_dict() if self.wundt else None,
            "literal": self.literal,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        unknown = set(d) - {"varying", "values", "fixed", "metric", "steps", "wundt", "literal"}
        if unknown:
            raise DomainError(f"unknown sweep spec keys: {sorted(unknown)}")
        fixed = dict(_params_to_dict(HabituationParams(0.0, 1.0, 0.5)))
        fixed.update(d.get("fixed", {}))
        wundt = d.get("wundt")
        return cls(
            varying=d["varying"],
            values=tuple(d["values"]),
            fixed=_params_from_dict(fixed),
            metric=d.get("metric", "gain"),
            steps=d.get("steps"),
            wundt=WundtParams(**wundt) if wundt else None,
            literal=bool(d.get("literal", False)),
        )


def evaluate_metric(
    params: HabituationParams,
    metric: str,
    wundt: WundtParams | None = None,
    literal: bool = False,
) -> list[tuple[int, float]]:
    """(n, value) pairs over the exposures of ``params``."""
    if metric not in METRICS:
        raise DomainError(f"unknown metric {metric!r}")
    start = METRICS[metric][1]
    ns = range(start, params.exposures + 1)
    if metric == "gain":
        return [(n, step_gain(params, n)) for n in ns]
    if metric == "prediction_error":
        return [(n, prediction_error_at(params, n)) for n in ns]
    if metric == "uncertainty":
        return [(n, uncertainty_at(params, n)) for n in ns]
    if wundt is None:
        raise DomainError(f"metric {metric!r} requires Wundt parameters")
    if metric == "valence":
        return [(n, valence(step_gain(params, n), wundt)) for n in ns]
    g_star = None if literal else positive_gain_crossing(wundt)
    return [
        (n, acceptable_prediction_error(params, wundt, n, literal=literal, crossing=g_star))
        for n in ns
    ]


def sweep(spec: SweepSpec, workers: int | None = None) -> Dataset:
    """Evaluate ``spec``; with ``workers`` > 1 grid points run on a thread pool.

    Series order always follows ``spec.values``.
    """

    def run(value):
        return evaluate_metric(spec.params_for(value), spec.metric, spec.wundt, spec.literal)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, spec.values))
    else:
        results = [run(v) for v in spec.values]
    series = tuple(Series(spec.series_label(v), pts) for v, pts in zip(spec.values, results))
    return Dataset(
        label=f"sweep-{spec.varying}-{spec.metric}",
        axes=(X_AXIS, METRICS[spec.metric][0]),
        series=series,
        provenance={
            "generator": "sweep",
            "defaults_version": _load_defaults()["version"],
            "spec": spec.to_dict(),
        },
    )


_FIGURE_KEYS = {"values", "deltas", "uncertainties", "delta", "uncertainty", "noise", "alpha", "steps", "wundt", "literal"}


def figure_spec(fig_id: str, overrides: dict | None = None) -> SweepSpec:
    """The sweep behind a figure preset, with ``overrides`` applied."""
    defaults = _load_defaults()
    if fig_id not in defaults["figures"]:
        raise DomainError(f"unknown figure {fig_id!r}; expected one of {list(FIGURES)}")
    cfg = dict(defaults["figures"][fig_id])
    cfg.update({"noise": defaults["noise"], "alpha": defaults["learning_rate"]})
    wundt = dict(defaults["wundt"])
    literal = False
    for key, value in (overrides or {}).items():
        if key not in _FIGURE_KEYS:
            raise DomainError(f"invalid override {key!r} for {fig_id}")
        if value is None:
            continue
        if key in ("values", "deltas", "uncertainties"):
            expected = {"deltas": "delta", "uncertainties": "uncertainty"}.get(key)
            if expected and expected != cfg["vary"]:
                raise DomainError(f"{fig_id} varies {cfg['vary']}, cannot override {key}")
            cfg["values"] = list(value)
        elif key == cfg["vary"]:
            # a scalar override of the varied parameter collapses the family to one curve
            cfg["values"] = [value]
        elif key == "wundt":
            wundt.update(value)
        elif key == "literal":
            literal = bool(value)
        else:
            cfg[key] = value
    fixed = HabituationParams(cfg["delta"], cfg["uncertainty"], cfg["noise"], cfg["alpha"], cfg["steps"])
    needs_wundt = cfg["metric"] in ("valence", "acceptable_range")
    return SweepSpec(
        varying=cfg["vary"],
        values=tuple(cfg["values"]),
        fixed=fixed,
        metric=cfg["metric"],
        wundt=WundtParams(**wundt) if needs_wundt else None,
        literal=literal,
    )


def reproduce_figure(fig_id: str, overrides: dict | None = None, workers: int | None = None) -> Dataset:
    spec = figure_spec(fig_id, overrides)
    ds = sweep(spec, workers=workers)
    provenance = dict(ds.provenance, generator="figure", figure=fig_id)
    return replace(ds, label=fig_id, provenance=provenance)


def regenerate(dataset: Dataset) -> Dataset:
    """Rebuild a dataset from its embedded provenance."""
    prov = dataset.provenance
    if prov.get("generator") not in ("sweep", "figure") or "spec" not in prov:
        raise DomainError("dataset provenance cannot be replayed")
    ds = sweep(SweepSpec.from_dict(prov["spec"]))
    if prov["generator"] == "figure":
        ds = replace(ds, label=prov["figure"], provenance=dict(ds.provenance, generator="figure", figure=prov["figure"]))
    return ds
