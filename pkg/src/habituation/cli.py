"""Command-line interface.

Option precedence is flags > ``--config`` JSON file > built-in defaults.
The config file is a flat JSON object keyed by long flag names (dashes or
underscores), plus an optional nested ``wundt`` object.

Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .belief import HabituationParams, posterior_sequence
from .errors import HabituationError
from .experiments import FIGURES, METRICS, PARAMETERS, SweepSpec, default_wundt, reproduce_figure, sweep
from .gain import gain_terms, gain_trajectory
from .output import FORMATS, emit, format_from_path, render
from .valence import (
    WundtParams,
    acceptable_prediction_error,
    literal_threshold,
    positive_gain_crossing,
    valence,
)
from .verify import run_verification

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

DEFAULTS = {
    "delta": 4.0,
    "uncertainty": 1.0,
    "noise": 0.5,
    "alpha": 0.1,
    "steps": 10,
    "seed": 0,
    "samples": 1000,
    "format": None,
    "out": None,
    "eq5_literal": False,
    "prior_mean": 0.0,
    "workers": None,
    "vary": None,
    "values": None,
    "metric": "gain",
}

WUNDT_FLAGS = ("reward_threshold", "aversion_threshold", "reward_max", "aversion_max", "gradient")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("scenario")
    g.add_argument("--delta", type=float, help="initial prediction error |eta - xbar|")
    g.add_argument("--uncertainty", type=float, help="initial uncertainty S_pl (prior variance)")
    g.add_argument("--noise", type=float, help="external noise S_l (likelihood variance)")
    g.add_argument("--alpha", type=float, help="learning rate")
    g.add_argument("--steps", type=int, help="number of exposures N")
    g.add_argument("--config", help="JSON file with option defaults")
    w = common.add_argument_group("wundt curve")
    for name in WUNDT_FLAGS:
        w.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    w.add_argument("--eq5-literal", dest="eq5_literal", action="store_const", const=True,
                   help="also report the uncorrected closed form for the acceptable range")
    o = common.add_argument_group("output")
    o.add_argument("--out", help="write the dataset to this path")
    o.add_argument("--format", choices=FORMATS, help="output format (default: from --out extension, else csv)")
    o.add_argument("--workers", type=int, help="threads for grid evaluation")

    parser = _Parser(prog="habituation", description="Bayesian habituation-to-novelty simulations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("gain", parents=[common], help="print the information-gain trajectory")
    p = sub.add_parser("update", parents=[common], help="print the posterior sequence")
    p.add_argument("--prior-mean", dest="prior_mean", type=float)
    p = sub.add_parser("figure", parents=[common], help="reproduce a figure dataset")
    p.add_argument("figure", choices=FIGURES)
    p = sub.add_parser("sweep", parents=[common], help="one-at-a-time parameter sweep")
    p.add_argument("--vary", choices=sorted(PARAMETERS))
    p.add_argument("--values", type=_float_list)
    p.add_argument("--metric", choices=sorted(METRICS))
    p.add_argument("--spec", help="JSON sweep spec file (overrides --vary/--values/--metric)")
    sub.add_parser("valence", parents=[common], help="Wundt curve and acceptable prediction error table")
    p = sub.add_parser("verify", parents=[common], help="run the oracle suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    return parser


def _read_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise HabituationError(f"config {path} must hold a JSON object")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = set(data) - set(DEFAULTS) - {"wundt", "spec"}
    if unknown:
        raise HabituationError(f"config {path}: unknown keys {sorted(unknown)}")
    return data


def _merge(args: argparse.Namespace) -> tuple[dict, dict]:
    """Returns (merged options, options explicitly set by config or flags)."""
    explicit = _read_config(args.config) if args.config else {}
    wundt = dict(explicit.pop("wundt", None) or {})
    for key, value in vars(args).items():
        if value is None or key in ("config", "command"):
            continue
        if key in WUNDT_FLAGS:
            wundt[key] = value
        else:
            explicit[key] = value
    if wundt:
        explicit["wundt"] = wundt
    merged = dict(DEFAULTS)
    merged.update(explicit)
    return merged, explicit


def _params(opts: dict) -> HabituationParams:
    return HabituationParams(opts["delta"], opts["uncertainty"], opts["noise"], opts["alpha"], opts["steps"])


def _wundt(opts: dict) -> WundtParams:
    base = default_wundt().to_dict()
    base.update(opts.get("wundt") or {})
    return WundtParams(**base)


def _table(headers, rows) -> str:
    lines = ["".join(f"{h:>14}" for h in headers)]
    for row in rows:
        lines.append("".join(f"{v:>14}" if isinstance(v, (int, str)) else f"{v:>14.6g}" for v in row))
    return "\n".join(lines)


def _write_dataset(ds, opts, out):
    fmt = opts["format"] or (format_from_path(opts["out"]) if opts["out"] else None) or "csv"
    if opts["out"]:
        emit(ds, fmt, opts["out"])
    else:
        out.write(render(ds, fmt))


def _warn_alpha(opts, err):
    alpha = opts.get("alpha")
    if alpha is not None and alpha > 1.0:
        print(f"warning: learning rate {alpha:g} > 1 lies outside the range the model was explored in", file=err)


def cmd_gain(opts, out, err):
    params = _params(opts)
    rows = [(n, g) for n, g in gain_trajectory(params)]
    print(_table(("n", "G [nats]"), rows), file=out)
    return EXIT_OK


def cmd_update(opts, out, err):
    params = _params(opts)
    rows = [(n, b.mean, b.variance) for n, b in enumerate(posterior_sequence(params, opts["prior_mean"]))]
    print(_table(("n", "mean", "variance"), rows), file=out)
    return EXIT_OK


def cmd_figure(opts, explicit, out, err):
    overrides = {k: explicit[k] for k in ("delta", "uncertainty", "noise", "alpha", "steps", "wundt") if k in explicit}
    if explicit.get("eq5_literal"):
        overrides["literal"] = True
    ds = reproduce_figure(opts["figure"], overrides, workers=opts["workers"])
    _write_dataset(ds, opts, out)
    return EXIT_OK


def cmd_sweep(opts, out, err):
    if opts.get("spec"):
        with open(opts["spec"], encoding="utf-8") as fh:
            spec = SweepSpec.from_dict(json.load(fh))
    else:
        if not opts["vary"] or not opts["values"]:
            raise HabituationError("sweep needs --vary and --values (or --spec)")
        needs_wundt = opts["metric"] in ("valence", "acceptable_range")
        spec = SweepSpec(
            varying=opts["vary"],
            values=tuple(opts["values"]),
            fixed=_params(opts),
            metric=opts["metric"],
            wundt=_wundt(opts) if needs_wundt else None,
            literal=bool(opts["eq5_literal"]),
        )
    _write_dataset(sweep(spec, workers=opts["workers"]), opts, out)
    return EXIT_OK


def cmd_valence(opts, out, err):
    params = _params(opts)
    wundt = _wundt(opts)
    g_star = positive_gain_crossing(wundt)
    print(f"G* = {g_star:.10g} nats (valence zero crossing)", file=out)
    grid = np.linspace(0.0, g_star + 1.0, 13)
    print(_table(("G", "V"), zip(grid.tolist(), valence(grid, wundt).tolist())), file=out)
    print(file=out)
    headers = ["n", "A", "B", "delta_g^2", "delta_g"]
    if opts["eq5_literal"]:
        headers.append("literal")
        lit = literal_threshold(wundt)
    rows = []
    for n in range(1, params.exposures + 1):
        t = gain_terms(params, n)
        d2 = acceptable_prediction_error(params, wundt, n, crossing=g_star)
        row = [n, t.a_term, t.b_term, d2, d2**0.5]
        if opts["eq5_literal"]:
            row.append(abs(lit - t.a_term) / t.b_term)
        rows.append(row)
    print(_table(headers, rows), file=out)
    return EXIT_OK


def cmd_verify(opts, out, err):
    results = run_verification(samples=int(opts["samples"]), seed=int(opts["seed"]))
    for r in results:
        print(r.line(), file=out)
    passed = sum(r.passed for r in results)
    print(f"verify: {passed}/{len(results)} checks passed (seed={opts['seed']})", file=out)
    return EXIT_OK if passed == len(results) else EXIT_VERIFY


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        opts, explicit = _merge(args)
        _warn_alpha(opts, err)
        if args.command == "figure":
            return cmd_figure(opts, explicit, out, err)
        handler = {
            "gain": cmd_gain,
            "update": cmd_update,
            "sweep": cmd_sweep,
            "valence": cmd_valence,
            "verify": cmd_verify,
        }[args.command]
        return handler(opts, out, err)
    except (HabituationError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
