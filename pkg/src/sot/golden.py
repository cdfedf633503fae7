"""Built-in reference examples with known values."""

from __future__ import annotations

import math
from dataclasses import dataclass

from sot.fields import FieldFunction, Piece
from sot.intertwining import X_MAJORIZES_Y, compare_maxima
from sot.kernels import Kernel
from sot.lemmas import WideningParams, check_widening_part, kappa, widening_sides
from sot.problem import ProblemInstance
from sot.solvers import SolverOptions, find_equioscillation
from sot.translates import interval_maxima


@dataclass
class GoldenCheck:
    name: str
    expected: object
    actual: object
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "actual": self.actual,
                "tol": self.tol, "passed": self.passed}


def step_instance() -> ProblemInstance:
    """log kernel, n = 1, field -inf on [0, 2/3) and 0 on [2/3, 1]."""
    J = FieldFunction.from_pieces([0.0, 2 / 3, 1.0], [Piece.neg_inf(), Piece.constant(0.0)])
    return ProblemInstance((1.0,), Kernel.log(), J)


def chebyshev_nodes(n: int) -> list[float]:
    """Zeros of the degree-n Chebyshev polynomial mapped to [0, 1], ascending."""
    return sorted((1 + math.cos((2 * k - 1) * math.pi / (2 * n))) / 2 for k in range(1, n + 1))


def _close(a: float, b: float, tol: float) -> bool:
    if a == b:
        return True
    return abs(a - b) <= tol


def run_golden() -> list[GoldenCheck]:
    checks: list[GoldenCheck] = []

    def add(name, expected, actual, tol, passed=None):
        if passed is None:
            passed = _close(actual, expected, tol)
        checks.append(GoldenCheck(name, expected, actual, tol, bool(passed)))

    inst = step_instance()
    mx = interval_maxima(inst, (1 / 3,)).m
    my = interval_maxima(inst, (2 / 3,)).m
    add("step field: m0(x=1/3)", -math.inf, mx[0], 0.0)
    add("step field: m0(y=2/3)", -math.inf, my[0], 0.0)
    add("step field: m1(x=1/3)", math.log(2 / 3), mx[1], 1e-9)
    add("step field: m1(y=2/3)", math.log(1 / 3), my[1], 1e-9)
    rel = compare_maxima(inst, (1 / 3,), (2 / 3,)).relation
    add("step field: relation", X_MAJORIZES_Y, rel, 0.0, rel == X_MAJORIZES_Y)

    opts = SolverOptions()
    for n in (1, 2, 3):
        res = find_equioscillation(ProblemInstance.simple(Kernel.log(), n), opts)
        ref = chebyshev_nodes(n)
        err = max(abs(a - b) for a, b in zip(res.nodes, ref))
        add(f"chebyshev n={n}: nodes", ref, list(res.nodes), 1e-6, err <= 1e-6)
        add(f"chebyshev n={n}: value", (1 - 2 * n) * math.log(2), res.value, 1e-6)

    P = WideningParams(1.0, 1.0, 0.1, 0.2, 0.6, 0.7)
    add("widening: kappa", 1.0, kappa(P), 1e-12)
    lhs, rhs = widening_sides(Kernel.log(), P, 0.05)
    add("widening: lhs at t=0.05", math.log(0.0325), lhs, 1e-12)
    add("widening: rhs at t=0.05", math.log(0.0825), rhs, 1e-12)
    rep = check_widening_part(Kernel.log(), P, "c", 1000)
    add("widening: part c violations", 0, len(rep.violations) + len(rep.strict_failures), 0.0)
    return checks
