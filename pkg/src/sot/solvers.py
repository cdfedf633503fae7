"""Equioscillation, simplex minimax and simplex maximin.

``find_equioscillation`` levels neighbouring interval maxima one node at a
time.  Moving ``y_i`` to the right raises every ``m_j`` with ``j < i`` and
lowers the others when the kernel is monotone, so ``m_{i-1} - m_i`` is
nondecreasing in ``y_i`` and a bracketing root search applies.  When the
sweeps stop making progress a derivative-free direct search on the residual
takes over.

``minimize_max`` and ``maximize_min`` add an independent direct search on
``m_bar`` / ``m_under`` so that the two simplex values can be compared.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from sot.extreal import NEG_INF
from sot.problem import NodeSystem, NodesLike, ProblemInstance
from sot.translates import DEFAULT_TOL, _MaximaContext, interval_maxima

log = logging.getLogger(__name__)

CONVERGED = "converged"
STALLED = "stalled"
BUDGET_EXHAUSTED = "budget_exhausted"


class SingularNodeSystemError(ValueError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    residual_tol: float = 1e-8
    max_sweeps: int = 500
    multistart: int = 8
    rng_seed: int = 0
    direct_search_budget: int = 20_000
    maxima_tol: float = DEFAULT_TOL
    step_floor: float = 1e-11

    def __post_init__(self):
        if not self.residual_tol > 0 or not self.maxima_tol > 0 or not self.step_floor > 0:
            raise ValueError("tolerances must be positive")
        if self.max_sweeps < 0 or self.multistart < 1 or self.direct_search_budget < 0:
            raise ValueError("max_sweeps, direct_search_budget must be >= 0 and multistart >= 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


@dataclass
class SolveResult:
    nodes: NodeSystem
    value: float
    residual: float
    status: str
    evaluations: int
    method: str = ""
    message: str = ""
    runs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        from sot.extreal import fmt_ext

        return {
            "nodes": list(self.nodes.nodes),
            "value": fmt_ext(self.value) if self.value == NEG_INF else self.value,
            "residual": self.residual if math.isfinite(self.residual) else "inf",
            "status": self.status,
            "evaluations": self.evaluations,
            "method": self.method,
            "message": self.message,
        }


def equioscillation_residual(instance: ProblemInstance, y: NodesLike, tol: float = DEFAULT_TOL) -> float:
    """``m_bar(y) - m_under(y)``; raises for singular node systems."""
    mv = interval_maxima(instance, y, tol)
    if not mv.regular:
        raise SingularNodeSystemError(f"node system {tuple(y)} is singular: m = {mv.m}")
    return mv.m_bar - mv.m_under


def _residual(m: Sequence[float]) -> float:
    # +inf sentinel for singular systems; never leaves this module as a value
    lo = min(m)
    if lo == NEG_INF:
        return math.inf
    return max(m) - lo


def project(y: Sequence[float]) -> tuple[float, ...]:
    """Map a vector into the closed ordered simplex: sort, then clamp to [0, 1]."""
    return tuple(min(1.0, max(0.0, float(v))) for v in sorted(y))


def uniform_nodes(n: int) -> tuple[float, ...]:
    return tuple((j + 1) / (n + 1) for j in range(n))


class _Counter:
    def __init__(self, instance: ProblemInstance, tol: float):
        self.instance = instance
        self.tol = tol
        self.count = 0

    def maxima(self, y) -> tuple[float, ...]:
        self.count += 1
        return interval_maxima(self.instance, y, self.tol).m

    def pair(self, y, j) -> tuple[float, float]:
        """``(m_{j-1}, m_j)`` only."""
        self.count += 1
        ctx = _MaximaContext(self.instance, y)
        return ctx.interval_max(j - 1, self.tol)[0], ctx.interval_max(j, self.tol)[0]


# --------------------------------------------------------------------------
# leveling sweeps


def _level_node(ev: _Counter, y: list[float], i: int, iters: int = 200) -> float:
    """Position of node ``i`` (1-based) in [y_{i-1}, y_{i+1}] equalizing m_{i-1} and m_i.

    Bracketing search on the sign of ``m_{i-1} - m_i``; false-position
    (Illinois) steps while both bracket values are finite, bisection otherwise.
    """
    ext = [0.0] + y + [1.0]
    lo, hi = ext[i - 1], ext[i + 1]
    if hi - lo <= 0:
        return lo
    glo, ghi = -math.inf, math.inf      # monotone response: m_{i-1} empty on the left
    side = 0
    trial = list(y)

    def g(s):
        trial[i - 1] = s
        a, b = ev.pair(trial, i)
        if a == b:
            return 0.0
        return a - b        # +-inf when exactly one side is -inf

    best_s, best_abs = 0.5 * (lo + hi), math.inf
    for _ in range(iters):
        width = hi - lo
        if math.isfinite(glo) and math.isfinite(ghi) and ghi != glo:
            s = (lo * ghi - hi * glo) / (ghi - glo)
            if not lo < s < hi:
                s = 0.5 * (lo + hi)
        else:
            s = 0.5 * (lo + hi)
        gs = g(s)
        if abs(gs) < best_abs:
            best_s, best_abs = s, abs(gs)
        if gs == 0.0:
            return s
        if gs < 0:
            lo, glo = s, gs
            if side == -1 and math.isfinite(ghi):
                ghi *= 0.5
            side = -1
        else:
            hi, ghi = s, gs
            if side == 1 and math.isfinite(glo):
                glo *= 0.5
            side = 1
        if hi - lo <= 4e-16 * max(1.0, abs(hi)) or (hi - lo) >= width:
            break
    # both -inf everywhere: no information, stay at the midpoint
    return best_s


def _sweep(ev: _Counter, y: list[float], m: tuple, res: float, accept_log: list | None):
    """One left-to-right sweep; each step is kept only if the residual does not grow."""
    n = len(y)
    for i in range(1, n + 1):
        target = _level_node(ev, y, i)
        old = y[i - 1]
        step = target - old
        for _ in range(8):
            if step == 0.0:
                break
            cand = list(y)
            cand[i - 1] = old + step
            cm = ev.maxima(cand)
            cres = _residual(cm)
            if cres <= res or (res == math.inf and max(cm) > NEG_INF and min(cm) >= min(m)):
                if accept_log is not None:
                    accept_log.append((i, res, cres))
                y, m, res = cand, cm, cres
                break
            step *= 0.5
    return y, m, res


def find_equioscillation(instance: ProblemInstance, options: SolverOptions = SolverOptions(),
                         start: Optional[NodesLike] = None, accept_log: list | None = None) -> SolveResult:
    """Node system with ``m_0 = ... = m_n``, by leveling sweeps with a direct-search fallback."""
    n = instance.n
    ev = _Counter(instance, options.maxima_tol)
    y = list(project(start if start is not None else uniform_nodes(n)))
    m = ev.maxima(y)
    res = _residual(m)
    status, message = STALLED, ""
    sweeps = 0
    for sweeps in range(1, options.max_sweeps + 1):
        if res <= options.residual_tol:
            break
        prev = res
        y, m, res = _sweep(ev, y, m, res, accept_log)
        if res <= options.residual_tol:
            break
        if not (prev - res >= 1e-14) and not (prev == math.inf and res < math.inf):
            message = f"leveling stalled after {sweeps} sweeps at residual {res:.3e}"
            break
    else:
        message = f"max_sweeps={options.max_sweeps} reached at residual {res:.3e}"

    result = SolveResult(NodeSystem(tuple(y)), max(m), res, STALLED, ev.count, "leveling", message)
    if res <= options.residual_tol:
        result.status = CONVERGED
        result.message = f"leveled in {sweeps} sweeps"
        return result

    log.info("equioscillation: %s; falling back to direct search", message)
    fb = _residual_search(instance, options, seeds=[tuple(y)])
    fb.evaluations += ev.count
    if fb.residual < result.residual:
        fb.message = f"{message}; direct search fallback: {fb.message}"
        return fb
    result.evaluations = fb.evaluations
    if fb.status == BUDGET_EXHAUSTED:
        result.status = BUDGET_EXHAUSTED
    if res == math.inf:
        result.message = message + "; no regular node system found"
    return result


# --------------------------------------------------------------------------
# direct search


def pattern_search(objective: Callable[[tuple], float], x0: Sequence[float], budget: int,
                   rng: np.random.Generator, step0: float = 0.05, step_floor: float = 1e-11,
                   n_random: int | None = None) -> tuple[tuple, float, int, bool]:
    """Minimize ``objective`` over the ordered simplex.

    Polls the coordinate directions first, then a fresh set of random unit
    directions; a successful poll doubles the step, a failed one halves it.
    Candidates are projected by sorting and clamping.  Returns
    ``(x, f(x), evaluations, budget_hit)``.
    """
    x = project(x0)
    fx = objective(x)
    evals = 1
    n = len(x)
    if n_random is None:
        n_random = 2 * n
    step = step0
    basis = [tuple(float(i == k) for i in range(n)) for k in range(n)]
    while step >= step_floor:
        improved = False
        dirs = [d for e in basis for d in (e, tuple(-v for v in e))]
        for _ in range(2):
            for d in dirs:
                if evals >= budget:
                    return x, fx, evals, True
                cand = project([xi + step * di for xi, di in zip(x, d)])
                if cand == x:
                    continue
                fc = objective(cand)
                evals += 1
                if fc < fx:
                    x, fx, improved = cand, fc, True
                    break
            if improved or n_random == 0:
                break
            r = rng.standard_normal((n_random, n))
            r /= np.linalg.norm(r, axis=1, keepdims=True)
            dirs = [tuple(v) for v in r]
        step = min(2 * step, 0.25) if improved else 0.5 * step
    return x, fx, evals, False


def _random_regular(instance: ProblemInstance, rng: np.random.Generator, tries: int = 1000) -> tuple:
    from sot.translates import is_regular

    for _ in range(tries):
        y = project(rng.uniform(0.0, 1.0, instance.n))
        if is_regular(instance, y):
            return y
    return project(rng.uniform(0.0, 1.0, instance.n))


def _starts(instance: ProblemInstance, options: SolverOptions, seeds: Sequence[tuple]) -> list[tuple]:
    rng = np.random.default_rng(options.rng_seed)
    starts = [project(s) for s in seeds]
    starts.append(uniform_nodes(instance.n))
    while len(starts) < options.multistart:
        starts.append(_random_regular(instance, rng))
    return starts[: max(options.multistart, len(seeds))]


def _multistart(instance: ProblemInstance, options: SolverOptions, objective_of_m, seeds, method: str):
    """Run pattern searches from several starts; objective is minimized."""
    ev = _Counter(instance, options.maxima_tol)
    starts = _starts(instance, options, seeds)
    budget = options.direct_search_budget
    rng = np.random.default_rng([options.rng_seed, 1])
    best = None
    runs = []
    hit = False

    def obj(y):
        return objective_of_m(ev.maxima(y))

    if budget == 0:
        # no search: report the best start as is
        for s in starts:
            fs = obj(s)
            if best is None or fs < best[1]:
                best = (s, fs)
        hit = True
    else:
        per_run = max(1, budget // len(starts))
        for k, s in enumerate(starts):
            remaining = budget - ev.count
            if remaining <= 0:
                hit = True
                break
            x, fx, _, h = pattern_search(obj, s, min(per_run, remaining) if k < len(starts) - 1 else remaining,
                                         rng, step_floor=options.step_floor)
            runs.append({"start": list(s), "nodes": list(x), "objective": fx, "budget_hit": h})
            hit = hit or h
            if best is None or fx < best[1]:
                best = (x, fx)
    return best, ev.count, hit, runs


def _residual_search(instance: ProblemInstance, options: SolverOptions, seeds=()) -> SolveResult:
    best, count, hit, runs = _multistart(instance, options, _residual, seeds, "residual")
    y, res = best
    mv = interval_maxima(instance, y, options.maxima_tol)
    status = CONVERGED if res <= options.residual_tol else (BUDGET_EXHAUSTED if hit else STALLED)
    return SolveResult(NodeSystem(y), mv.m_bar, res, status, count, "direct_search",
                       f"best residual {res:.3e}", runs)


def _neg_m_under(m):
    lo = min(m)
    return math.inf if lo == NEG_INF else -lo


def minimize_max(instance: ProblemInstance, options: SolverOptions = SolverOptions()) -> SolveResult:
    """Approximate ``M(S) = inf m_bar`` by equioscillation and by direct search; keep the better."""
    eq = find_equioscillation(instance, options)
    ds_opts = replace(options, multistart=1)
    best, count, hit, runs = _multistart(instance, ds_opts, max, seeds=[], method="m_bar")
    y, v = best
    mv = interval_maxima(instance, y, options.maxima_tol)
    ds = SolveResult(NodeSystem(y), v, _residual(mv.m), BUDGET_EXHAUSTED if hit else CONVERGED,
                     count, "direct_search", "", runs)
    total = eq.evaluations + ds.evaluations
    if ds.value < eq.value:
        chosen = ds
        chosen.message = f"direct search beat equioscillation ({eq.value!r}, {eq.status})"
        if hit:
            chosen.status = BUDGET_EXHAUSTED
    else:
        chosen = eq
        chosen.message = f"{eq.message}; direct search reached {ds.value!r}"
    chosen.evaluations = total
    chosen.runs = [{"method": "equioscillation", "value": eq.value, "status": eq.status,
                    "nodes": list(eq.nodes.nodes)},
                   {"method": "direct_search", "value": ds.value, "nodes": list(ds.nodes.nodes)}]
    return chosen


def maximize_min(instance: ProblemInstance, options: SolverOptions = SolverOptions()) -> SolveResult:
    """Approximate ``m(S) = sup m_under`` over regular systems by multistart direct search."""
    best, count, hit, runs = _multistart(instance, options, _neg_m_under, seeds=[], method="m_under")
    y, negv = best
    mv = interval_maxima(instance, y, options.maxima_tol)
    value = mv.m_under
    status = BUDGET_EXHAUSTED if hit else CONVERGED
    return SolveResult(NodeSystem(y), value, _residual(mv.m), status, count, "direct_search",
                       f"{len(runs)} runs", runs)
