import json
import math
import re
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from respoles.core.config import settings
from respoles.core.exceptions import InvalidParameterError
from respoles.schemas.params import SystemParams
from respoles.schemas.poles import ContourBox
from respoles.schemas.run import (
    Command,
    OutputConfig,
    RunConfig,
    SimulationConfig,
    StabilityGridConfig,
)
from respoles.services.pole_service import pole_service
from respoles.services.stability_service import stability_service

_PI_TERM = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?P<coef>\d*\.?\d*(?:[eE][-+]?\d+)?)\s*\*?\s*pi\s*(?:/\s*(?P<den>\d*\.?\d+(?:[eE][-+]?\d+)?))?\s*$"
)
_RELATIVE = re.compile(r"^\s*(?P<factor>[-+]?\d*\.?\d+(?:[eE][-+]?\d+)?)?\s*\*?\s*kc\s*$")


def parse_scalar(text: Any) -> float:
    """Read a float or a multiple of pi such as ``pi/2``, ``-3pi/4`` or ``2*pi``."""
    if isinstance(text, (int, float)):
        return float(text)
    raw = str(text).strip().lower()
    try:
        return float(raw)
    except ValueError:
        pass
    match = _PI_TERM.match(raw)
    if match is None:
        raise InvalidParameterError(f"cannot read '{text}' as a number")
    coef = float(match["coef"]) if match["coef"] else 1.0
    den = float(match["den"]) if match["den"] else 1.0
    sign = -1.0 if match["sign"] == "-" else 1.0
    return sign * coef * math.pi / den


def parse_coupling(text: Any, tau: float, omega0: float) -> Tuple[float, Optional[float]]:
    """Absolute coupling, or a multiple of k_c written like ``0.8kc``.

    Returns the absolute value and the relative factor when one was given.
    """
    if isinstance(text, (int, float)):
        return float(text), None
    match = _RELATIVE.match(str(text).lower())
    if match is None:
        return parse_scalar(text), None
    factor = float(match["factor"]) if match["factor"] else 1.0
    return factor * stability_service.critical_coupling(tau, omega0), factor


def parse_range(text: Any) -> Tuple[int, int]:
    try:
        lo, hi = (int(part) for part in str(text).split(":"))
    except ValueError as exc:
        raise InvalidParameterError(f"branch range '{text}' must look like lo:hi") from exc
    return lo, hi


def parse_grid(text: Any) -> Tuple[float, float, int]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"grid '{text}' must look like start:stop:count")
    try:
        return parse_scalar(parts[0]), parse_scalar(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InvalidParameterError(f"grid '{text}' must look like start:stop:count") from exc


def load_config(path: Optional[Path]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParameterError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidParameterError("config file must hold a JSON object")
    return {key.replace("-", "_"): value for key, value in data.items()}


def merge_options(config_path: Optional[Path], **flags: Any) -> Dict[str, Any]:
    """Config file values overridden by every flag that was given."""
    merged = load_config(config_path)
    merged.update({key: value for key, value in flags.items() if value is not None})
    return merged


def _required(options: Dict[str, Any], key: str) -> Any:
    if options.get(key) is None:
        raise InvalidParameterError(f"--{key.replace('_', '-')} is required")
    return options[key]


def build_params(options: Dict[str, Any], need_k: bool = True) -> Tuple[SystemParams, Optional[float]]:
    tau = parse_scalar(_required(options, "tau"))
    omega0 = parse_scalar(_required(options, "omega0"))
    h = parse_scalar(options.get("h", settings.DEFAULT_H))
    if tau <= 0 or h <= 0:
        raise InvalidParameterError("tau and h must be positive", tau=tau, h=h)
    if need_k:
        k, relative = parse_coupling(_required(options, "k"), tau, omega0)
    else:
        k, relative = 0.0, None
    return SystemParams(k=k, tau=tau, omega0=omega0, h=h), relative


def build_run_config(command: Command, options: Dict[str, Any]) -> RunConfig:
    """Turn merged command line and file options into a validated RunConfig."""
    need_k = command not in (Command.KC, Command.STABILITY_MAP)
    if command == Command.STABILITY_MAP:
        # only omega0 enters the map; tau and k come from the grid
        params = SystemParams(
            k=0.0,
            tau=1.0,
            omega0=parse_scalar(_required(options, "omega0")),
            h=settings.DEFAULT_H,
        )
        relative = None
    else:
        params, relative = build_params(options, need_k=need_k)

    branches = parse_range(options["branches"]) if options.get("branches") is not None else None
    region = None
    if command in (Command.POLES, Command.COMPARE, Command.EXPANSION):
        if options.get("region") is not None:
            try:
                region = ContourBox.parse(options["region"])
            except ValueError as exc:
                raise InvalidParameterError(str(exc)) from exc
        elif branches is None and command != Command.POLES:
            region = pole_service.leading_region(params)
        else:
            reach = max(abs(branches[0]), abs(branches[1])) if branches else 5
            region = pole_service.default_region(params, max(1, reach))

    sim = None
    if command in (Command.SIMULATE, Command.COMPARE, Command.EXPANSION):
        sim = SimulationConfig(
            nodes=int(options.get("nodes", settings.DEFAULT_NODES)),
            dt_divisor=int(options.get("dt_divisor", settings.DEFAULT_DT_DIVISOR)),
            T=parse_scalar(options["T"]) if options.get("T") is not None else None,
            terms=int(options.get("terms", 8)),
            window_start=parse_scalar(options["window_start"]) if options.get("window_start") is not None else None,
        )

    grid = None
    if command == Command.STABILITY_MAP:
        tau_min, tau_max, tau_count = parse_grid(options.get("tau_grid", "0.1:6:200"))
        k_min, k_max, k_count = parse_grid(options.get("k_grid", "-3:3:200"))
        grid = StabilityGridConfig(
            tau_min=tau_min,
            tau_max=tau_max,
            tau_count=tau_count,
            k_min=k_min,
            k_max=k_max,
            k_count=k_count,
            mode=options.get("mode", "closed_form"),
        )

    io = OutputConfig(path=options.get("out"), format=options.get("format", "csv"))
    return RunConfig(
        command=command,
        params=params,
        region=region,
        branches=branches,
        sim=sim,
        grid=grid,
        io=io,
        jobs=int(options.get("jobs", -1)),
        k_relative=relative,
    )