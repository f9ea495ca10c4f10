"""Run configuration: a versioned JSON file parsed into a validated RunConfig.

Unknown keys are rejected, and every error message carries the config path
and a best-effort line number so it can be jumped to from a terminal.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .statistics import SourceKind
from .transmission import LossParameters, PriorityLogic

CONFIG_VERSION = 1

_TOP_KEYS = {
    "version",
    "losses",
    "source",
    "logics",
    "m_values",
    "n_values",
    "lambda_bounds",
    "output_dir",
    "validation",
}
_LOSS_KEYS = {"v_r", "v_t", "v_p", "v_p0_s", "v_d", "v_b", "v_r_s", "v_t_s"}
_VALIDATION_KEYS = {"trials", "seed", "points"}


class ConfigError(ValueError):
    """Invalid run configuration; message is ``path:line: detail``."""


@dataclass(frozen=True)
class RunConfig:
    """Validated contents of a run configuration file."""

    version: int
    losses: LossParameters
    source: SourceKind
    logics: tuple[PriorityLogic, ...]
    m_values: tuple[int, ...]
    n_values: tuple[int, ...]
    lambda_bounds: tuple[float, float] | None
    output_dir: Path
    validation_trials: int
    validation_seed: int
    validation_points: tuple[tuple[int, int, float], ...]


def _line_of(text: str, key: str) -> int:
    """Best-effort line number of a JSON key in the raw config text."""
    match = re.search(rf'"{re.escape(key)}"\s*:', text)
    if match is None:
        return 1
    return text.count("\n", 0, match.start()) + 1


def _fail(path: Path, text: str, key: str, message: str) -> ConfigError:
    return ConfigError(f"{path}:{_line_of(text, key)}: {message}")


def _require(raw: dict, path: Path, text: str, key: str, kind, what: str):
    if key not in raw:
        raise ConfigError(f"{path}:1: missing required key \"{key}\"")
    value = raw[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise _fail(path, text, key, f"\"{key}\" must be {what}")
    return value


def _int_grid(raw: dict, path: Path, text: str, key: str) -> tuple[int, ...]:
    values = _require(raw, path, text, key, list, "a non-empty list of integers")
    if not values or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise _fail(path, text, key, f"\"{key}\" must be a non-empty list of integers")
    for v in values:
        if v < 1 or v & (v - 1):
            raise _fail(path, text, key, f"\"{key}\" entries must be powers of 2, got {v}")
    return tuple(values)


def parse_config(path: str | Path) -> RunConfig:
    """Read and validate a JSON run configuration.

    Raises:
        ConfigError: on syntax errors, unknown keys, or invalid values,
            with a line-anchored message.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}:1: config file not found")
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}:1: config root must be a JSON object")
    for key in raw:
        if key not in _TOP_KEYS:
            raise _fail(path, text, key, f"unknown key \"{key}\"")

    version = _require(raw, path, text, "version", int, "an integer")
    if version != CONFIG_VERSION:
        raise _fail(path, text, "version", f"unsupported config version {version}, expected {CONFIG_VERSION}")

    losses_raw = _require(raw, path, text, "losses", dict, "an object of efficiencies")
    for key in losses_raw:
        if key not in _LOSS_KEYS:
            raise _fail(path, text, key, f"unknown loss key \"{key}\"")
    for key, value in losses_raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise _fail(path, text, key, f"loss \"{key}\" must be a number")
    try:
        losses = LossParameters(**{k: float(v) for k, v in losses_raw.items()})
    except (TypeError, ValueError) as exc:
        raise _fail(path, text, "losses", str(exc)) from exc

    source_raw = _require(raw, path, text, "source", str, "a string")
    try:
        source = SourceKind(source_raw)
    except ValueError as exc:
        raise _fail(path, text, "source", f"source must be one of {[k.value for k in SourceKind]}") from exc

    logics_raw = _require(raw, path, text, "logics", list, "a non-empty list of logic names")
    if not logics_raw:
        raise _fail(path, text, "logics", "\"logics\" must be a non-empty list")
    logics = []
    for name in logics_raw:
        try:
            logic = PriorityLogic(name)
        except ValueError as exc:
            raise _fail(
                path, text, "logics", f"logic must be one of {[k.value for k in PriorityLogic]}"
            ) from exc
        if logic in logics:
            raise _fail(path, text, "logics", f"duplicate logic \"{name}\"")
        logics.append(logic)

    m_values = _int_grid(raw, path, text, "m_values")
    n_values = _int_grid(raw, path, text, "n_values")

    lambda_bounds = None
    if raw.get("lambda_bounds") is not None:
        bounds = raw["lambda_bounds"]
        ok = (
            isinstance(bounds, list)
            and len(bounds) == 2
            and all(isinstance(b, (int, float)) and not isinstance(b, bool) for b in bounds)
        )
        if not ok or not 0.0 <= float(bounds[0]) < float(bounds[1]):
            raise _fail(path, text, "lambda_bounds", "\"lambda_bounds\" must be [lo, hi] with 0 <= lo < hi")
        lambda_bounds = (float(bounds[0]), float(bounds[1]))

    output_dir = Path(_require(raw, path, text, "output_dir", str, "a directory path"))

    trials, seed, points = 1_000_000, 0, ()
    if "validation" in raw:
        validation = _require(raw, path, text, "validation", dict, "an object")
        for key in validation:
            if key not in _VALIDATION_KEYS:
                raise _fail(path, text, key, f"unknown validation key \"{key}\"")
        if "trials" in validation:
            trials = validation["trials"]
            if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
                raise _fail(path, text, "trials", "\"trials\" must be a positive integer")
        if "seed" in validation:
            seed = validation["seed"]
            if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
                raise _fail(path, text, "seed", "\"seed\" must be a non-negative integer")
        if "points" in validation:
            points_raw = validation["points"]
            if not isinstance(points_raw, list):
                raise _fail(path, text, "points", "\"points\" must be a list of [m, n, lambda] triples")
            parsed = []
            for triple in points_raw:
                ok = (
                    isinstance(triple, list)
                    and len(triple) == 3
                    and isinstance(triple[0], int)
                    and isinstance(triple[1], int)
                    and isinstance(triple[2], (int, float))
                    and not any(isinstance(x, bool) for x in triple)
                )
                if not ok or triple[0] < 1 or triple[1] < 1 or triple[2] < 0:
                    raise _fail(path, text, "points", f"invalid validation point {triple!r}")
                parsed.append((triple[0], triple[1], float(triple[2])))
            points = tuple(parsed)

    return RunConfig(
        version=version,
        losses=losses,
        source=source,
        logics=tuple(logics),
        m_values=m_values,
        n_values=n_values,
        lambda_bounds=lambda_bounds,
        output_dir=output_dir,
        validation_trials=trials,
        validation_seed=seed,
        validation_points=points,
    )
