"""Experiment configuration files (JSON).

A config names a command, a problem instance and command options::

    {
      "command": "maxima",
      "instance": {
        "n": 2,
        "weights": [1, 1],
        "kernel": {"family": "log", "params": {}},
        "field": {
          "breakpoints": [0, 1],
          "pieces": [{"kind": "constant", "value": 0}],
          "point_values": [null, null],
          "translates": []
        }
      },
      "options": {"nodes": [0.3, 0.7]},
      "seed": 0
    }

Point values may be numbers, ``"-inf"`` or ``null`` (meaning "take the
one-sided limits").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from sot.problem import ProblemInstance

COMMANDS = ("eval", "maxima", "equioscillate", "minimax", "maximin", "compare", "search",
            "lemma-check", "golden")

# allowed option keys per command, with defaults
OPTION_DEFAULTS: dict[str, dict[str, Any]] = {
    "eval": {"nodes": None, "t": None},
    "maxima": {"nodes": None, "tol": 1e-12},
    "equioscillate": {"residual_tol": 1e-8, "max_sweeps": 500, "multistart": 8,
                      "direct_search_budget": 20_000, "maxima_tol": 1e-12, "start": None},
    "minimax": {"residual_tol": 1e-8, "max_sweeps": 500, "multistart": 8,
                "direct_search_budget": 20_000, "maxima_tol": 1e-12},
    "maximin": {"residual_tol": 1e-8, "max_sweeps": 500, "multistart": 8,
                "direct_search_budget": 20_000, "maxima_tol": 1e-12},
    "compare": {"x": None, "y": None, "value_tol": 1e-9, "tol": 1e-12},
    "search": {"budget": 1000, "strategy": "random_pairs", "value_tol": 1e-9, "mode": "weak",
               "admit_singular": False, "initial_pairs": [], "workers": 1, "tol": 1e-12,
               "log_all": False},
    "lemma-check": {"draws": 1000, "grid": 1000, "parts": ["a", "b", "c", "e"], "params": None,
                    "min_gap": 1e-3},
    "golden": {},
}

REQUIRED = {
    "eval": ("nodes", "t"),
    "maxima": ("nodes",),
    "compare": ("x", "y"),
}


class ConfigError(ValueError):
    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(f"field {path}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class ExperimentConfig:
    command: str
    instance: Optional[ProblemInstance]
    options: dict = field(default_factory=dict)
    seed: int = 0
    output: Optional[str] = None

    def to_dict(self) -> dict:
        d: dict = {"command": self.command, "options": self.options, "seed": self.seed}
        if self.instance is not None:
            d["instance"] = self.instance.to_dict()
        if self.output is not None:
            d["output"] = self.output
        return d

    def serialize(self) -> str:
        from sot.records import canonical_json

        return canonical_json(self.to_dict())

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return ExperimentConfig(self.command, self.instance, dict(self.options), int(seed), self.output)


def _build_instance(d: Any) -> ProblemInstance:
    if not isinstance(d, dict):
        raise ConfigError("instance must be an object", "instance")
    extra = set(d) - {"n", "weights", "kernel", "field"}
    if extra:
        raise ConfigError(f"unknown keys {sorted(extra)}", "instance")
    if "kernel" not in d:
        raise ConfigError("missing kernel", "instance.kernel")
    try:
        from sot.kernels import Kernel
        Kernel.from_dict(d["kernel"])
    except (ValueError, TypeError, AttributeError) as e:
        raise ConfigError(str(e), "instance.kernel") from None
    if "field" in d:
        from sot.fields import FieldFunction, Piece
        fd = d["field"]
        for k, p in enumerate(fd.get("pieces", []) if isinstance(fd, dict) else []):
            try:
                Piece.from_dict(p)
            except (ValueError, TypeError, AttributeError) as e:
                raise ConfigError(str(e), f"instance.field.pieces[{k}]") from None
        try:
            f = FieldFunction.from_dict(fd)
        except (ValueError, TypeError, KeyError, AttributeError) as e:
            raise ConfigError(str(e), "instance.field") from None
        if not f.non_usc_override and not f.is_usc():
            raise ConfigError("field is not upper semicontinuous", "instance.field")
        declared = [v for v in (fd.get("point_values") or [])]
        if declared and not f.non_usc_override:
            # a declared value below a one-sided limit makes the field non-usc as written
            from sot.extreal import parse_ext
            for k, v in enumerate(declared):
                if v is not None and parse_ext(v) < f.point_values[k]:
                    raise ConfigError(
                        f"point value {v} at t={f.breakpoints[k]} is below a one-sided limit "
                        f"({f.point_values[k]}); set non_usc_override to keep it",
                        f"instance.field.point_values[{k}]")
    weights = d.get("weights")
    if weights is not None:
        if not isinstance(weights, list):
            raise ConfigError("weights must be a list", "instance.weights")
        for k, w in enumerate(weights):
            if not isinstance(w, (int, float)) or isinstance(w, bool) or not w > 0:
                raise ConfigError("weights must be positive", f"instance.weights[{k}]")
    try:
        return ProblemInstance.from_dict(d)
    except (ValueError, TypeError, KeyError) as e:
        raise ConfigError(str(e), "instance") from None


def config_from_dict(d: Any, command: Optional[str] = None) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(d) - {"command", "instance", "options", "seed", "output"}
    if extra:
        raise ConfigError(f"unknown keys {sorted(extra)}")
    cmd = d.get("command", command)
    if command is not None and cmd != command:
        raise ConfigError(f"config is for command {cmd!r}, not {command!r}", "command")
    if cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}", "command")

    instance = None
    if "instance" in d:
        inst_d = d["instance"]
        if cmd == "lemma-check" and isinstance(inst_d, dict) and "n" not in inst_d and "weights" not in inst_d:
            inst_d = {**inst_d, "n": 1}
        instance = _build_instance(inst_d)
    elif cmd not in ("golden", "lemma-check"):
        raise ConfigError("missing instance", "instance")

    opts_in = d.get("options", {}) or {}
    if not isinstance(opts_in, dict):
        raise ConfigError("options must be an object", "options")
    allowed = OPTION_DEFAULTS[cmd]
    extra = set(opts_in) - set(allowed)
    if extra:
        raise ConfigError(f"unknown options for {cmd}: {sorted(extra)}", "options")
    options = {**allowed, **opts_in}
    for key in REQUIRED.get(cmd, ()):
        if options.get(key) is None:
            raise ConfigError(f"{cmd} needs option {key!r}", f"options.{key}")
    if cmd == "lemma-check" and instance is None:
        raise ConfigError("lemma-check needs instance.kernel", "instance")

    seed = d.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer", "seed")
    output = d.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output must be a path string", "output")
    return ExperimentConfig(cmd, instance, options, seed, output)


def parse_config(text: str, command: Optional[str] = None) -> ExperimentConfig:
    """Parse and validate a JSON config; errors carry line or field location."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, line=e.lineno) from None
    return config_from_dict(d, command)
