from __future__ import annotations

"""Command-line and config-file parsing into a validated RunConfig.

Precedence: built-in defaults < `--config` file (flat key=value) < command-line flags.
Config keys mirror the long flags, with either dashes or underscores (`t-end`, `t_end`).
"""

import argparse
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from dotenv import dotenv_values

from features.analysis import InitialCurveInfo
from sobolev.curve import (
    BUILTIN_SHAPES,
    MIN_SAMPLES,
    DiscreteCurve,
    circle,
    ellipse,
    limacon,
    square,
    star,
)
from sobolev.errors import DomainError, InputError, UsageError
from sobolev.types import FlowParams, StepControl
from utils.helpers import get_output_dir
from utils.io import read_curve

COMMANDS = ("evolve", "gradient", "verify", "circle-oracle", "benchmark")

DEFAULTS: dict[str, Any] = {
    "lam": 1.0,
    "a": 2.0,
    "extinction_eps": 1e-9,
    "n": 512,
    "t_end": 1.0,
    "rel_tol": 1e-7,
    "stride": 1,
    "radius": 1.0,
    "axes": (2.0, 1.0),
    "lobes": 3,
    "amplitude": 0.2,
    "side": 1.0,
    "frames": False,
    "rescaled": False,
    "frame_size": 512,
    "points_every": 1,
    "no_checks": False,
    "timings": False,
    "fixed_step": False,
    "lambdas": (0.1, 1.0),
    "workers": 1,
    "samples": 11,
    "repeats": 3,
}

COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "benchmark": {"n": 16384, "shape": "star"},
}

_NOT_CONFIGURABLE = {"config", "command"}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


@dataclass(frozen=True)
class CurveSpec:
    """One initial-curve source: a built-in shape with its parameters, or a JSON file."""

    shape: str | None = None
    path: Path | None = None
    n: int = 512
    radius: float = 1.0
    axes: tuple[float, float] = (2.0, 1.0)
    lobes: int = 3
    amplitude: float = 0.2
    side: float = 1.0

    def build(self) -> DiscreteCurve:
        if self.path is not None:
            return read_curve(self.path)
        if self.shape == "circle":
            return circle(self.radius, self.n)
        if self.shape == "ellipse":
            return ellipse(*self.axes, self.n)
        if self.shape == "star":
            return star(self.lobes, self.amplitude, self.n)
        if self.shape == "limacon":
            return limacon(*self.axes, self.n)
        if self.shape == "square":
            return square(self.side, max(self.n // 4, 2))
        raise UsageError(f"unknown shape {self.shape!r}")

    def info(self) -> InitialCurveInfo:
        if self.shape == "circle":
            return InitialCurveInfo("circle", self.radius)
        return InitialCurveInfo(self.shape)

    @property
    def label(self) -> str:
        return self.shape if self.shape is not None else str(self.path)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration of one CLI invocation."""

    command: str
    params: FlowParams
    ctrl: StepControl
    curve: CurveSpec | None = None
    n: int = 512
    t_end: float = 1.0
    stride: int = 1
    output_dir: Path = Path("runs")
    frames: bool = False
    rescaled: bool = False
    frame_size: int = 512
    points_every: int = 1
    checks: bool = True
    timings: bool = False
    lambdas: tuple[float, ...] = (0.1, 1.0)
    workers: int = 1
    samples: int = 11
    radius: float = 1.0
    repeats: int = 3
    log_level: str | None = None
    sources: dict[str, str] = field(default_factory=dict)


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw}")
    return value


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat key=value file with flag defaults")
    parser.add_argument("--out", dest="out", type=Path, help="output directory")
    parser.add_argument("--log-level", dest="log_level")


def _add_curve(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--shape", choices=sorted(BUILTIN_SHAPES))
    parser.add_argument(
        "--curve", dest="curve_path", type=Path, help="JSON {'points': [[x, y], ...]}"
    )
    parser.add_argument("--n", type=_positive_int, help="samples for built-in shapes")
    parser.add_argument("--radius", type=float)
    parser.add_argument("--axes", type=float, nargs=2, metavar=("A", "B"))
    parser.add_argument("--lobes", type=_positive_int)
    parser.add_argument("--amplitude", type=float)
    parser.add_argument("--side", type=float)


def _add_flow(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--a", type=float)
    parser.add_argument("--extinction-eps", dest="extinction_eps", type=float)


def _add_control(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-end", dest="t_end", type=float)
    parser.add_argument("--rel-tol", dest="rel_tol", type=float)
    parser.add_argument("--dt-init", dest="dt_init", type=float)
    parser.add_argument("--dt-min", dest="dt_min", type=float)
    parser.add_argument("--dt-max", dest="dt_max", type=float)
    parser.add_argument("--max-steps", dest="max_steps", type=_positive_int)
    parser.add_argument("--fixed-step", dest="fixed_step", action="store_true")
    parser.add_argument("--resample-every", dest="resample_every", type=float)


def build_parser() -> _Parser:
    parser = _Parser(prog="sobolev-flow", allow_abbrev=False, argument_default=argparse.SUPPRESS)
    commands = parser.add_subparsers(dest="command", required=True)

    evolve = commands.add_parser("evolve", allow_abbrev=False, argument_default=argparse.SUPPRESS)
    _add_common(evolve)
    _add_curve(evolve)
    _add_flow(evolve)
    _add_control(evolve)
    evolve.add_argument("--stride", type=_positive_int)
    evolve.add_argument("--points-every", dest="points_every", type=int)
    evolve.add_argument("--frames", action="store_true")
    evolve.add_argument("--rescaled", action="store_true")
    evolve.add_argument("--frame-size", dest="frame_size", type=_positive_int)
    evolve.add_argument("--no-checks", dest="no_checks", action="store_true")
    evolve.add_argument("--timings", action="store_true")

    gradient = commands.add_parser(
        "gradient", allow_abbrev=False, argument_default=argparse.SUPPRESS
    )
    _add_common(gradient)
    _add_curve(gradient)
    _add_flow(gradient)

    verify = commands.add_parser("verify", allow_abbrev=False, argument_default=argparse.SUPPRESS)
    _add_common(verify)
    verify.add_argument("--lambdas", type=float, nargs="+")
    verify.add_argument("--a", type=float)
    verify.add_argument("--n", type=_positive_int)
    verify.add_argument("--t-end", dest="t_end", type=float)
    verify.add_argument("--rel-tol", dest="rel_tol", type=float)
    verify.add_argument("--workers", type=_positive_int)
    verify.add_argument("--timings", action="store_true")

    oracle = commands.add_parser(
        "circle-oracle", allow_abbrev=False, argument_default=argparse.SUPPRESS
    )
    _add_common(oracle)
    _add_flow(oracle)
    oracle.add_argument("--radius", type=float)
    oracle.add_argument("--t-end", dest="t_end", type=float)
    oracle.add_argument("--samples", type=_positive_int)

    benchmark = commands.add_parser(
        "benchmark", allow_abbrev=False, argument_default=argparse.SUPPRESS
    )
    _add_common(benchmark)
    _add_curve(benchmark)
    _add_flow(benchmark)
    benchmark.add_argument("--repeats", type=_positive_int)
    return parser


def _option_index(parser: argparse.ArgumentParser, command: str) -> dict[str, argparse.Action]:
    subparsers = next(
        action for action in parser._actions if isinstance(action, argparse._SubParsersAction)
    )
    sub = subparsers.choices[command]
    index = {}
    for action in sub._actions:
        for option in action.option_strings:
            if option.startswith("--"):
                index[option[2:]] = action
    return index


def _convert(action: argparse.Action, key: str, raw: str | None) -> Any:
    if raw is None:
        raise UsageError(f"config key {key!r} has no value")
    if isinstance(action, argparse._StoreTrueAction):
        lowered = raw.strip().lower()
        if lowered in {"1", "true", "yes", "on"}:
            return True
        if lowered in {"0", "false", "no", "off"}:
            return False
        raise UsageError(f"config key {key!r} expects a boolean, got {raw!r}")
    convert = action.type or str
    parts = raw.replace(",", " ").split() if action.nargs not in (None, "?") else [raw.strip()]
    try:
        values = [convert(part) for part in parts]
    except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"config key {key!r}: cannot parse {raw!r}") from exc
    if action.choices is not None and any(value not in action.choices for value in values):
        raise UsageError(f"config key {key!r}: {raw!r} is not one of {sorted(action.choices)}")
    if action.nargs in (None, "?"):
        return values[0]
    if isinstance(action.nargs, int) and len(values) != action.nargs:
        raise UsageError(f"config key {key!r} expects {action.nargs} values, got {len(values)}")
    return tuple(values)


def read_config_file(path: Path, parser: argparse.ArgumentParser, command: str) -> dict[str, Any]:
    """Map a key=value file onto argparse destinations for `command`."""
    if not path.is_file():
        raise UsageError(f"config file {path} does not exist")
    options = _option_index(parser, command)
    values: dict[str, Any] = {}
    for key, raw in dotenv_values(path).items():
        option = key.strip().replace("_", "-")
        action = options.get(option)
        if action is None or action.dest in _NOT_CONFIGURABLE:
            raise UsageError(f"unknown config key {key!r} for {command}")
        values[action.dest] = _convert(action, key, raw)
    return values


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Parse argv (and an optional --config file) into a validated RunConfig."""
    parser = build_parser()
    namespace = vars(parser.parse_args(list(argv)))
    command = namespace.pop("command")
    file_values: dict[str, Any] = {}
    config_path = namespace.pop("config", None)
    if config_path is not None:
        file_values = read_config_file(Path(config_path), parser, command)

    values = {**DEFAULTS, **COMMAND_DEFAULTS.get(command, {}), **file_values, **namespace}
    sources = {key: "file" for key in file_values} | {key: "flag" for key in namespace}

    # a flag-level curve source replaces a file-level or built-in one
    if "curve_path" in namespace and "shape" not in namespace:
        values.pop("shape", None)
    elif "shape" in namespace and "curve_path" not in namespace:
        values.pop("curve_path", None)
    elif "curve_path" in file_values and "shape" not in file_values:
        values.pop("shape", None)

    try:
        return _build(command, values, sources)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _curve_spec(command: str, values: dict[str, Any]) -> CurveSpec:
    shape = values.get("shape")
    path = values.get("curve_path")
    if shape is not None and path is not None:
        raise UsageError("give either --shape or --curve, not both")
    if shape is None and path is None:
        raise UsageError(f"{command} needs an initial curve: --shape NAME or --curve FILE")
    if path is not None and not Path(path).is_file():
        raise InputError("curve file does not exist or is not readable", record=str(path))
    return CurveSpec(
        shape=shape,
        path=Path(path) if path is not None else None,
        n=int(values["n"]),
        radius=float(values["radius"]),
        axes=tuple(float(v) for v in values["axes"]),
        lobes=int(values["lobes"]),
        amplitude=float(values["amplitude"]),
        side=float(values["side"]),
    )


def _build(command: str, values: dict[str, Any], sources: dict[str, str]) -> RunConfig:
    params = FlowParams(
        lam=float(values["lam"]),
        a=float(values["a"]),
        extinction_eps=float(values["extinction_eps"]),
    )
    ctrl = StepControl.for_params(
        params,
        rel_tol=values.get("rel_tol"),
        dt_init=values.get("dt_init"),
        dt_min=values.get("dt_min"),
        dt_max=values.get("dt_max"),
        max_steps=values.get("max_steps"),
        adaptive=not values["fixed_step"],
        resample_every=values.get("resample_every"),
    )
    t_end = float(values["t_end"])
    if not (math.isfinite(t_end) and t_end >= 0):
        raise UsageError(f"--t-end must be finite and non-negative, got {t_end}")
    curve = _curve_spec(command, values) if command in {"evolve", "gradient", "benchmark"} else None
    if curve is not None and curve.shape is not None:
        # shape constructors raise DomainError on bad parameters
        curve.build()
    if command == "verify" and int(values["n"]) < MIN_SAMPLES:
        raise UsageError(f"--n must be at least {MIN_SAMPLES}, got {values['n']}")
    if command == "circle-oracle" and not float(values["radius"]) > 0:
        raise UsageError(f"--radius must be positive, got {values['radius']}")
    lambdas = tuple(float(lam) for lam in values["lambdas"])
    if any(not lam > 0 for lam in lambdas):
        raise UsageError(f"--lambdas must all be positive, got {lambdas}")
    out = values.get("out")
    return RunConfig(
        command=command,
        params=params,
        ctrl=ctrl,
        curve=curve,
        n=int(values["n"]),
        t_end=t_end,
        stride=int(values["stride"]),
        output_dir=Path(out) if out is not None else Path(get_output_dir()),
        frames=bool(values["frames"]),
        rescaled=bool(values["rescaled"]),
        frame_size=int(values["frame_size"]),
        points_every=int(values["points_every"]),
        checks=not values["no_checks"],
        timings=bool(values["timings"]),
        lambdas=lambdas,
        workers=int(values["workers"]),
        samples=int(values["samples"]),
        radius=float(values["radius"]),
        repeats=int(values["repeats"]),
        log_level=values.get("log_level"),
        sources=sources,
    )
