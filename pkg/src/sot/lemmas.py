"""Executable form of the widening inequality for translate pairs.

For ``0 <= alpha < a < b < beta <= 1`` and ``p, q > 0`` the inequality

    p K(t - alpha) + q K(t - beta) <= p K(t - a) + q K(t - b)

holds on ``[0, alpha]`` (monotone K, kappa >= 1), on ``[beta, 1]`` (monotone K,
kappa <= 1), on both (kappa == 1, any kernel), and reverses on ``[a, b]``
(monotone K).  Strictly concave kernels make the first three strict; strictly
monotone kernels make the reversed one strict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from sot.kernels import Kernel

SLACK = 1e-10
KAPPA_ONE_TOL = 1e-12
PARTS = ("a", "b", "c", "e")


class HypothesisError(ValueError):
    """The requested lemma part does not apply to these parameters."""


@dataclass(frozen=True)
class WideningParams:
    p: float
    q: float
    alpha: float
    a: float
    b: float
    beta: float

    def __post_init__(self):
        for name in ("p", "q", "alpha", "a", "b", "beta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.p > 0 and self.q > 0):
            raise HypothesisError("p and q must be positive")
        if not 0.0 <= self.alpha < self.a < self.b < self.beta <= 1.0:
            raise HypothesisError(
                f"need 0 <= alpha < a < b < beta <= 1, got "
                f"{self.alpha}, {self.a}, {self.b}, {self.beta}"
            )

    @property
    def kappa(self) -> float:
        return kappa(self)

    @classmethod
    def with_unit_kappa(cls, p: float, q: float, a: float, b: float, beta: float) -> "WideningParams":
        """Solve for ``alpha`` so that kappa is exactly 1."""
        return cls(p, q, a - q * (beta - b) / p, a, b, beta)


def kappa(params: WideningParams) -> float:
    """``p (a - alpha) / (q (beta - b))``."""
    return params.p * (params.a - params.alpha) / (params.q * (params.beta - params.b))


def widening_sides(kernel: Kernel, params: WideningParams, t: float) -> tuple[float, float]:
    """``(pK(t-alpha) + qK(t-beta), pK(t-a) + qK(t-b))``; raises if a shift leaves [-1, 1]."""
    P = params
    lhs = P.p * kernel(t - P.alpha) + P.q * kernel(t - P.beta)
    rhs = P.p * kernel(t - P.a) + P.q * kernel(t - P.b)
    return lhs, rhs


@dataclass
class ViolationReport:
    part: str
    kernel: str
    kappa: float
    samples: int
    violations: list = field(default_factory=list)   # (t, lhs, rhs)
    min_margin: float = math.inf
    midpoint_margin: float = math.nan
    strict_required: bool = False
    strict_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.strict_failures


def _t_ranges(params: WideningParams, part: str) -> list[tuple[float, float]]:
    P = params
    if part == "a":
        return [(0.0, P.alpha)]
    if part == "b":
        return [(P.beta, 1.0)]
    if part == "c":
        return [(0.0, P.alpha), (P.beta, 1.0)]
    return [(P.a, P.b)]


def check_hypotheses(kernel: Kernel, params: WideningParams, part: str) -> None:
    if part not in PARTS:
        raise ValueError(f"unknown lemma part {part!r}")
    k = kappa(params)
    if part in ("a", "b", "e") and not kernel.monotone:
        raise HypothesisError(f"part {part} needs a monotone kernel")
    if part == "a" and not k >= 1.0:
        raise HypothesisError(f"part a needs kappa >= 1, got {k}")
    if part == "b" and not k <= 1.0:
        raise HypothesisError(f"part b needs kappa <= 1, got {k}")
    if part == "c" and abs(k - 1.0) > KAPPA_ONE_TOL:
        raise HypothesisError(f"part c needs kappa == 1, got {k}")


def check_widening_part(kernel: Kernel, params: WideningParams, part: str, grid: int = 1000) -> ViolationReport:
    """Sample the inequality of one lemma part over its t-range.

    Parts a, b, c check ``lhs <= rhs``; part e checks ``lhs >= rhs``.  A sample
    is a violation when it fails by more than ``SLACK``.  Where the lemma
    promises strictness, the sign margin must be positive at interior samples
    and at the midpoint of each range.
    """
    check_hypotheses(kernel, params, part)
    sign = -1.0 if part == "e" else 1.0     # margin = sign * (rhs - lhs) >= 0
    strict = kernel.strictly_monotone if part == "e" else kernel.strictly_concave
    report = ViolationReport(part, str(kernel), kappa(params), 0, strict_required=strict)

    mids = []
    for lo, hi in _t_ranges(params, part):
        ts = np.linspace(lo, hi, grid) if hi > lo else np.array([lo])
        lhs, rhs = _sides_array(kernel, params, ts)
        margin = _margin(lhs, rhs, sign)
        report.samples += len(ts)
        report.min_margin = min(report.min_margin, float(margin.min()))
        for i in np.flatnonzero(margin < -SLACK):
            report.violations.append((float(ts[i]), float(lhs[i]), float(rhs[i])))
        if strict and len(ts) > 2:
            inner = margin[1:-1]
            for i in np.flatnonzero(~(inner > 0)) + 1:
                if margin[i] >= -SLACK:
                    report.strict_failures.append((float(ts[i]), float(lhs[i]), float(rhs[i])))
        mid = 0.5 * (lo + hi)
        ml, mr = widening_sides(kernel, params, mid)
        mids.append(float(_margin(np.array([ml]), np.array([mr]), sign)[0]))
        if strict and hi > lo and not mids[-1] > 0:
            report.strict_failures.append((mid, ml, mr))
    report.midpoint_margin = min(mids)
    return report


def _sides_array(kernel: Kernel, P: WideningParams, ts: np.ndarray):
    K = kernel.eval_array
    lhs = P.p * K(ts - P.alpha) + P.q * K(ts - P.beta)
    rhs = P.p * K(ts - P.a) + P.q * K(ts - P.b)
    return lhs, rhs


def _margin(lhs: np.ndarray, rhs: np.ndarray, sign: float) -> np.ndarray:
    # margin of the promised inequality; both sides -inf counts as equality
    small, big = (lhs, rhs) if sign > 0 else (rhs, lhs)
    with np.errstate(invalid="ignore"):
        out = big - small
    return np.where(np.isneginf(small) & np.isneginf(big), 0.0, out)


def random_params(rng: np.random.Generator, part: str, min_gap: float = 1e-3) -> WideningParams:
    """Draw parameters satisfying the part's kappa hypothesis.

    Gaps between ``alpha, a, b, beta`` are kept above ``min_gap``.  Part c
    draws a, b, beta, p, q and solves for alpha (kappa == 1 by construction).
    """
    while True:
        p, q = rng.uniform(0.1, 3.0, size=2)
        if part == "c":
            a, b, beta = np.sort(rng.uniform(0.0, 1.0, size=3))
            alpha = a - q * (beta - b) / p
            pts = [alpha, a, b, beta]
            if alpha < 0 or min(np.diff(pts)) < min_gap:
                continue
            try:
                return WideningParams.with_unit_kappa(p, q, a, b, beta)
            except HypothesisError:
                continue
        alpha, a, b, beta = np.sort(rng.uniform(0.0, 1.0, size=4))
        if min(np.diff([alpha, a, b, beta])) < min_gap:
            continue
        P = WideningParams(p, q, alpha, a, b, beta)
        k = kappa(P)
        if part == "a" and k < 1.0:
            # rescale p to push kappa above one
            P = WideningParams(p / k * rng.uniform(1.0, 3.0), q, alpha, a, b, beta)
        elif part == "b" and k > 1.0:
            P = WideningParams(p / k * rng.uniform(1 / 3, 1.0), q, alpha, a, b, beta)
        if (part == "a" and kappa(P) < 1.0) or (part == "b" and kappa(P) > 1.0):
            continue
        return P
