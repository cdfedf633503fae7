"""Shared instance families for unit, property and acceptance tests."""

from __future__ import annotations

import numpy as np

from sot import FieldFunction, Kernel, ProblemInstance, is_regular
from sot.fields import Piece

MONOTONE_KERNELS = {
    "log": Kernel.log(),
    "log_shifted": Kernel.log_shifted(0.1),
    "power0.5": Kernel.power(0.5),
}


def field_zero() -> FieldFunction:
    return FieldFunction.zero()


def field_step() -> FieldFunction:
    return FieldFunction.from_pieces([0.0, 0.4, 1.0], [Piece.constant(0.0), Piece.constant(0.3)])


def field_quad() -> FieldFunction:
    return FieldFunction.from_pieces([0.0, 1.0], [Piece.quadratic(-1.0, 0.6, 0.0)])


def field_gap() -> FieldFunction:
    return FieldFunction.from_pieces([0.0, 0.2, 1.0], [Piece.neg_inf(), Piece.constant(0.0)])


FIELDS = {"zero": field_zero, "step": field_step, "quad": field_quad, "gap": field_gap}
WEIGHTS = (1.0, 0.7, 1.3)


def fixture_instance(kernel_name: str, field_name: str, n: int) -> ProblemInstance:
    return ProblemInstance(WEIGHTS[:n], MONOTONE_KERNELS[kernel_name], FIELDS[field_name]())


def fixture_grid(ns=(1, 2, 3)):
    for k in MONOTONE_KERNELS:
        for f in FIELDS:
            for n in ns:
                yield k, f, n


def step_instance() -> ProblemInstance:
    J = FieldFunction.from_pieces([0.0, 2 / 3, 1.0], [Piece.neg_inf(), Piece.constant(0.0)])
    return ProblemInstance((1.0,), Kernel.log(), J)


def random_kernel(rng: np.random.Generator) -> Kernel:
    c = rng.integers(4)
    if c == 0:
        return Kernel.log()
    if c == 1:
        return Kernel.log_shifted(float(rng.uniform(0.01, 0.5)))
    if c == 2:
        return Kernel.power(float(rng.uniform(0.2, 1.0)))
    return Kernel.neg_parabola(float(rng.uniform(0.1, 0.9)))


def random_field(rng: np.random.Generator) -> FieldFunction:
    """Random usc field: 1..3 pieces, occasionally a -inf piece or a translate."""
    k = int(rng.integers(1, 4))
    cuts = sorted(set(np.round(rng.uniform(0.05, 0.95, k - 1), 6).tolist()))
    bps = [0.0, *cuts, 1.0]
    pieces = []
    for _ in range(len(bps) - 1):
        c = rng.integers(4)
        if c == 0 and len(bps) > 2 and not any(p.is_neg_inf for p in pieces):
            pieces.append(Piece.neg_inf())
        elif c == 1:
            pieces.append(Piece.constant(float(rng.uniform(-1, 1))))
        elif c == 2:
            pieces.append(Piece.affine(float(rng.uniform(-2, 2)), float(rng.uniform(-1, 1))))
        else:
            pieces.append(Piece.quadratic(float(-rng.uniform(0, 3)), float(rng.uniform(-2, 2)),
                                          float(rng.uniform(-1, 1))))
    if all(p.is_neg_inf for p in pieces):
        pieces[-1] = Piece.constant(0.0)
    f = FieldFunction.from_pieces(bps, pieces)
    if rng.random() < 0.25:
        f = f.with_translate(float(rng.uniform(0.1, 1.0)), float(rng.uniform(0, 1)), random_kernel(rng))
    return f


def random_instance(rng: np.random.Generator, n: int) -> ProblemInstance:
    w = tuple(float(v) for v in rng.uniform(0.3, 2.0, n))
    return ProblemInstance(w, random_kernel(rng), random_field(rng))


def random_regular_nodes(rng: np.random.Generator, inst: ProblemInstance, tries: int = 1000):
    for _ in range(tries):
        y = tuple(sorted(rng.uniform(0, 1, inst.n).tolist()))
        if is_regular(inst, y):
            return y
    raise RuntimeError("no regular node system found")
