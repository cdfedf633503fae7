"""Kernel families on [-1, 1].

Every family is even in ``t`` and concave on both ``(-1, 0)`` and ``(0, 1)``.
Structural flags are derived from the family and its parameter; they cannot be
set by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from sot.extreal import NEG_INF

FAMILIES = ("log", "log_shifted", "power", "neg_parabola_nonmonotone")

# name of the single parameter each family takes
_PARAM_NAME = {
    "log": None,
    "log_shifted": "eps",
    "power": "alpha",
    "neg_parabola_nonmonotone": "c",
}


class KernelDomainError(ValueError):
    pass


@dataclass(frozen=True)
class Kernel:
    family: str
    param: float | None = None
    _fn: Callable[[float], float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.family == "log":
            if self.param is not None:
                raise ValueError("log kernel takes no parameter")
        else:
            if self.param is None:
                raise ValueError(f"{self.family} needs parameter {_PARAM_NAME[self.family]!r}")
            p = float(self.param)
            object.__setattr__(self, "param", p)
            if self.family == "log_shifted" and not p > 0:
                raise ValueError("log_shifted needs eps > 0")
            if self.family == "power" and not 0 < p <= 1:
                raise ValueError("power needs alpha in (0, 1]")
            if self.family == "neg_parabola_nonmonotone" and not 0 < p < 1:
                raise ValueError("neg_parabola_nonmonotone needs c in (0, 1)")
        object.__setattr__(self, "_fn", _scalar_fn(self.family, self.param))

    def __reduce__(self):
        return (Kernel, (self.family, self.param))

    # constructors -------------------------------------------------------

    @classmethod
    def log(cls) -> "Kernel":
        return cls("log")

    @classmethod
    def log_shifted(cls, eps: float) -> "Kernel":
        return cls("log_shifted", eps)

    @classmethod
    def power(cls, alpha: float) -> "Kernel":
        return cls("power", alpha)

    @classmethod
    def neg_parabola(cls, c: float) -> "Kernel":
        return cls("neg_parabola_nonmonotone", c)

    # flags --------------------------------------------------------------

    @property
    def singular(self) -> bool:
        return self.family == "log"

    @property
    def monotone(self) -> bool:
        return self.family != "neg_parabola_nonmonotone"

    @property
    def strictly_monotone(self) -> bool:
        return self.monotone

    @property
    def strictly_concave(self) -> bool:
        return not (self.family == "power" and self.param == 1.0)

    def flags(self) -> dict[str, bool]:
        return {
            "singular": self.singular,
            "monotone": self.monotone,
            "strictly_monotone": self.strictly_monotone,
            "strictly_concave": self.strictly_concave,
        }

    # evaluation ---------------------------------------------------------

    def __call__(self, t: float) -> float:
        if not -1.0 <= t <= 1.0:
            raise KernelDomainError(f"kernel argument {t!r} outside [-1, 1]")
        return self._fn(t)

    @property
    def fast(self) -> Callable[[float], float]:
        """Unchecked scalar evaluator for hot loops (caller guarantees |t| <= 1)."""
        return self._fn

    def eval_array(self, t: np.ndarray) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        if self.family == "log":
            with np.errstate(divide="ignore"):
                return np.log(t)
        if self.family == "log_shifted":
            return np.log(t + self.param)
        if self.family == "power":
            return t**self.param
        return -((t - self.param) ** 2)

    def sup(self) -> float:
        """``sup K`` over [-1, 1]."""
        if self.family == "log":
            return 0.0
        if self.family == "log_shifted":
            return math.log(1.0 + self.param)
        if self.family == "power":
            return 1.0
        return 0.0

    def reflected(self) -> "Kernel":
        """The kernel ``t -> K(-t)``; every family here is even, so this is ``self``."""
        return self

    def to_dict(self) -> dict:
        d: dict = {"family": self.family, "params": {}}
        if self.param is not None:
            d["params"][_PARAM_NAME[self.family]] = self.param
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Kernel":
        family = d.get("family")
        if family not in FAMILIES:
            raise ValueError(f"unknown kernel family {family!r}")
        params = dict(d.get("params") or {})
        name = _PARAM_NAME[family]
        if name is None:
            if params:
                raise ValueError(f"kernel {family} takes no params, got {sorted(params)}")
            return cls(family)
        if set(params) != {name}:
            raise ValueError(f"kernel {family} needs exactly params {{{name!r}}}, got {sorted(params)}")
        return cls(family, params[name])

    def __str__(self) -> str:
        if self.param is None:
            return self.family
        return f"{self.family}({_PARAM_NAME[self.family]}={self.param:g})"


def _scalar_fn(family: str, p: float | None) -> Callable[[float], float]:
    log = math.log
    if family == "log":
        def k(t):
            return log(abs(t)) if t != 0.0 else NEG_INF
    elif family == "log_shifted":
        def k(t):
            return log(abs(t) + p)
    elif family == "power":
        if p == 1.0:
            k = abs
        elif p == 0.5:
            sqrt = math.sqrt

            def k(t):
                return sqrt(abs(t))
        else:
            def k(t):
                return abs(t) ** p
    else:
        def k(t):
            d = abs(t) - p
            return -d * d
    return k


def check_kernel_properties(kernel: Kernel, grid_size: int = 1024) -> dict:
    """Empirically measure the structural properties of ``kernel`` on grids.

    Concavity is judged by second differences on each open side (slack 1e-10),
    monotonicity by exact comparisons.  The ``agrees`` entry says whether every
    measured flag matches the family's declared flag.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be >= 16")
    left = np.linspace(-1.0, 0.0, grid_size + 1)      # [-1, 0]
    right = np.linspace(0.0, 1.0, grid_size + 1)      # [0, 1]
    k = kernel.fast
    kl = np.array([k(t) for t in left])
    kr = np.array([k(t) for t in right])

    def second_diffs(v):
        return v[:-2] - 2.0 * v[1:-1] + v[2:]

    # open sides only: drop the origin
    dl = second_diffs(kl[:-1])
    dr = second_diffs(kr[1:])
    concave = bool(np.all(dl <= 1e-10) and np.all(dr <= 1e-10))
    strictly_concave = bool(np.all(dl < -1e-12) and np.all(dr < -1e-12))

    inc_l = np.diff(kl[:-1])   # (-1, 0) including -1
    inc_r = np.diff(kr[1:])    # (0, 1] including 1
    monotone = bool(np.all(inc_l <= 0.0) and np.all(inc_r >= 0.0))
    strictly_monotone = bool(np.all(inc_l < 0.0) and np.all(inc_r > 0.0))
    singular = k(0.0) == NEG_INF

    measured = {
        "singular": singular,
        "monotone": monotone,
        "strictly_monotone": strictly_monotone,
        "strictly_concave": strictly_concave,
    }
    declared = kernel.flags()
    return {
        **measured,
        "concave": concave,
        "bounded_above": bool(np.max(np.concatenate([kl, kr])) < math.inf),
        "agrees": concave and measured == declared,
        "declared": declared,
    }
