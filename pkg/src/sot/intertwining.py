"""Comparing maxima vectors, searching for majorization, and two structural maps.

Coordinates equal to ``-inf`` in both vectors count as ties; a finite value
beats ``-inf``.  ``x`` majorizes ``y`` when every coordinate of ``m(x)`` is at
least the matching one of ``m(y)`` and one is strictly larger; the vectors
intertwine when each wins somewhere.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from sot.extreal import NEG_INF
from sot.problem import NodeSystem, NodesLike, ProblemInstance, as_nodes
from sot.solvers import project
from sot.translates import DEFAULT_TOL, interval_maxima, is_regular

EQUAL = "equal"
X_MAJORIZES_Y = "x_majorizes_y"
Y_MAJORIZES_X = "y_majorizes_x"
INTERTWINES = "intertwines"

NO_MAJORIZATION = "no_majorization_found"
CANDIDATE = "candidate_found"


@dataclass(frozen=True)
class Comparison:
    relation: str
    witness_up: Optional[int]       # i with m_i(x) > m_i(y)
    witness_down: Optional[int]     # j with m_j(x) < m_j(y)
    margins: tuple[float, ...]      # m_j(x) - m_j(y); +-inf against a lone -inf

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "witness_up": self.witness_up,
            "witness_down": self.witness_down,
            "margins": [_fmt_margin(d) for d in self.margins],
        }


def _fmt_margin(d: float):
    if math.isinf(d):
        return "inf" if d > 0 else "-inf"
    return d


def coordinate_diff(a: float, b: float) -> float:
    if a == b:
        return 0.0      # covers -inf vs -inf
    return a - b


def compare_vectors(mx: Sequence[float], my: Sequence[float], value_tol: float = 0.0) -> Comparison:
    if len(mx) != len(my):
        raise ValueError("maxima vectors differ in length")
    if value_tol < 0:
        raise ValueError("value_tol must be >= 0")
    diffs = tuple(coordinate_diff(a, b) for a, b in zip(mx, my))
    up = next((j for j, d in enumerate(diffs) if d > value_tol), None)
    down = next((j for j, d in enumerate(diffs) if d < -value_tol), None)
    if up is not None and down is not None:
        rel = INTERTWINES
    elif up is not None:
        rel = X_MAJORIZES_Y
    elif down is not None:
        rel = Y_MAJORIZES_X
    else:
        rel = EQUAL
    return Comparison(rel, up, down, diffs)


def compare_maxima(instance: ProblemInstance, x: NodesLike, y: NodesLike, value_tol: float = 0.0,
                   tol: float = DEFAULT_TOL) -> Comparison:
    """Classify the maxima vectors of two node systems."""
    mx = interval_maxima(instance, x, tol).m
    my = interval_maxima(instance, y, tol).m
    return compare_vectors(mx, my, value_tol)


# --------------------------------------------------------------------------
# majorization search


def majorization_margin(mx: Sequence[float], my: Sequence[float], strict: bool = False) -> float:
    """``min_j (m_j(y) - m_j(x))`` over coordinates where both are finite.

    Returns ``-inf`` when ``y`` cannot majorize ``x`` at all (``x`` finite where
    ``y`` is ``-inf``), and, with ``strict``, also when a coordinate ties at
    ``-inf``.  A coordinate where only ``x`` is ``-inf`` imposes no bound.
    """
    margin = math.inf
    for a, b in zip(mx, my):
        if a == NEG_INF:
            if b == NEG_INF and strict:
                return -math.inf
            continue
        if b == NEG_INF:
            return -math.inf
        margin = min(margin, b - a)
    return margin


@dataclass
class SearchReport:
    verdict: str
    best_margin: float
    best_pair: Optional[tuple[tuple[float, ...], tuple[float, ...]]]   # (majorized, majorizing)
    pairs_evaluated: int
    strategy: str
    budget: int
    rng_seed: int
    value_tol: float
    mode: str
    out_of_hypothesis: bool = False
    confirmed: Optional[bool] = None
    confirmed_margin: Optional[float] = None
    records: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "event": "summary",
            "verdict": self.verdict,
            "best_margin": _fmt_margin(self.best_margin),
            "best_pair": [list(self.best_pair[0]), list(self.best_pair[1])] if self.best_pair else None,
            "pairs_evaluated": self.pairs_evaluated,
            "strategy": self.strategy,
            "budget": self.budget,
            "rng_seed": self.rng_seed,
            "value_tol": self.value_tol,
            "mode": self.mode,
            "out_of_hypothesis": self.out_of_hypothesis,
            "confirmed": self.confirmed,
            "confirmed_margin": None if self.confirmed_margin is None else _fmt_margin(self.confirmed_margin),
        }


class _Scorer:
    def __init__(self, instance: ProblemInstance, tol: float, strict: bool, admit_singular: bool):
        self.instance = instance
        self.tol = tol
        self.strict = strict
        self.admit_singular = admit_singular

    def admissible(self, y) -> bool:
        return self.admit_singular or is_regular(self.instance, y)

    def maxima(self, y) -> tuple[float, ...]:
        return interval_maxima(self.instance, y, self.tol).m

    def score(self, x, mx, y, my):
        """Best orientation: ``(margin, majorized, majorizing)``."""
        a = majorization_margin(mx, my, self.strict)
        b = majorization_margin(my, mx, self.strict)
        return (a, x, y) if a >= b else (b, y, x)


def _random_system(sc: _Scorer, rng: np.random.Generator, tries: int = 10_000) -> tuple:
    for _ in range(tries):
        y = project(rng.uniform(0.0, 1.0, sc.instance.n))
        if sc.admissible(y):
            return y
    raise RuntimeError("could not sample an admissible node system")


class _Worker:
    """One deterministic slice of a search."""

    def __init__(self, sc: _Scorer, rng, worker: int, log_all: bool):
        self.sc = sc
        self.rng = rng
        self.worker = worker
        self.log_all = log_all
        self.evaluated = 0
        self.best = (-math.inf, None, None)
        self.records: list = []

    def consider(self, x, mx, y, my):
        self.evaluated += 1
        margin, lo, hi = self.sc.score(x, mx, y, my)
        improved = margin > self.best[0] or self.best[1] is None
        if improved:
            self.best = (margin, lo, hi)
        if improved or self.log_all:
            self.records.append({
                "event": "improved" if improved else "evaluated",
                "worker": self.worker,
                "pair_index": self.evaluated - 1,
                "margin": _fmt_margin(margin),
                "x": list(lo),
                "y": list(hi),
            })
        return margin

    def run_pairs(self, pairs, budget):
        for x, y in pairs:
            if self.evaluated >= budget:
                return
            self.consider(x, self.sc.maxima(x), y, self.sc.maxima(y))

    def random_pairs(self, budget: int):
        # pool of N systems, pairs enumerated in lexicographic order
        remaining = budget - self.evaluated
        if remaining <= 0:
            return
        N = 2
        while N * (N - 1) // 2 < remaining:
            N += 1
        pool = [_random_system(self.sc, self.rng) for _ in range(N)]
        ms = [self.sc.maxima(y) for y in pool]
        for a in range(N):
            for b in range(a + 1, N):
                if self.evaluated >= budget:
                    return
                self.consider(pool[a], ms[a], pool[b], ms[b])

    def hill_climb(self, budget: int, start=None, step0=0.05, floor=1e-7):
        sc = self.sc
        n = sc.instance.n
        while self.evaluated < budget:
            if start is not None:
                x, y = start
                start = None
            else:
                x, y = _random_system(sc, self.rng), _random_system(sc, self.rng)
            mx, my = sc.maxima(x), sc.maxima(y)
            cur = self.consider(x, mx, y, my)
            step = step0
            while step >= floor and self.evaluated < budget:
                moved = False
                for k in range(2 * n):
                    for sgn in (1.0, -1.0):
                        if self.evaluated >= budget:
                            return
                        src = list(x if k < n else y)
                        src[k % n] += sgn * step
                        cand = project(src)
                        if cand == (x if k < n else y) or not sc.admissible(cand):
                            continue
                        mc = sc.maxima(cand)
                        if k < n:
                            margin = self.consider(cand, mc, y, my)
                            # keep the orientation that scored, ascend the pair as a whole
                            if margin > cur:
                                x, mx, cur, moved = cand, mc, margin, True
                        else:
                            margin = self.consider(x, mx, cand, mc)
                            if margin > cur:
                                y, my, cur, moved = cand, mc, margin, True
                if not moved:
                    step *= 0.5


def _run_worker(args):
    instance, strategy, budget, seed, worker, tol, strict, admit, initial, log_all = args
    sc = _Scorer(instance, tol, strict, admit)
    rng = np.random.default_rng([seed, worker])
    w = _Worker(sc, rng, worker, log_all)
    if initial:
        w.run_pairs(initial, budget)
    if strategy == "random_pairs":
        w.random_pairs(budget)
    elif strategy == "hill_climb":
        w.hill_climb(budget)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return w.evaluated, w.best, w.records


def search_majorization(instance: ProblemInstance, budget: int, rng_seed: int = 0,
                        strategy: str = "random_pairs", value_tol: float = 1e-9,
                        mode: str = "weak", admit_singular: bool = False,
                        initial_pairs: Iterable[tuple[NodesLike, NodesLike]] = (),
                        workers: int = 1, processes: int = 1, tol: float = DEFAULT_TOL,
                        log_all: bool = False) -> SearchReport:
    """Look for pairs ``x != y`` whose maxima vectors are ordered.

    The score of a pair is :func:`majorization_margin` in its better
    orientation.  A pair is a candidate when its margin exceeds ``value_tol``
    and the node systems differ by more than 1e-9; candidates are recomputed
    with a ten times tighter maxima tolerance before being reported as
    confirmed.  ``mode="strict"`` additionally refuses ties at ``-inf``.
    By default only regular node systems are sampled.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if mode not in ("weak", "strict"):
        raise ValueError("mode must be 'weak' or 'strict'")
    if strategy not in ("random_pairs", "hill_climb"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    initial = [(project(as_nodes(x)), project(as_nodes(y))) for x, y in initial_pairs]
    strict = mode == "strict"

    shares = [budget // workers + (1 if w < budget % workers else 0) for w in range(workers)]
    jobs = [(instance, strategy, shares[w], rng_seed, w, tol, strict, admit_singular,
             initial if w == 0 else [], log_all) for w in range(workers)]
    if processes > 1 and workers > 1:
        with ProcessPoolExecutor(max_workers=processes) as ex:
            results = list(ex.map(_run_worker, jobs))
    else:
        results = [_run_worker(j) for j in jobs]

    evaluated = sum(r[0] for r in results)
    records = [rec for r in results for rec in r[2]]
    best = (-math.inf, None, None)
    for _, b, _ in results:
        if b[1] is not None and (best[1] is None or b[0] > best[0]):
            best = b
    margin, lo, hi = best
    report = SearchReport(
        NO_MAJORIZATION, margin, (lo, hi) if lo is not None else None, evaluated,
        strategy, budget, rng_seed, value_tol, mode, records=records,
    )
    if lo is None:
        return report
    report.out_of_hypothesis = not (is_regular(instance, lo) and is_regular(instance, hi))
    distinct = NodeSystem(lo).distance(NodeSystem(hi)) > 1e-9
    if margin > value_tol and distinct:
        report.verdict = CANDIDATE
        tight = tol / 10
        m2 = majorization_margin(interval_maxima(instance, lo, tight).m,
                                 interval_maxima(instance, hi, tight).m, strict)
        report.confirmed_margin = m2
        report.confirmed = m2 > value_tol
    return report


# --------------------------------------------------------------------------
# structural maps


def reflect_instance(instance: ProblemInstance, y: NodesLike) -> tuple[ProblemInstance, NodeSystem]:
    """Mirror ``t -> 1 - t``: ``F*(y*, s) = F(y, 1 - s)``."""
    y = instance.check_nodes(y)
    inst = ProblemInstance(
        tuple(reversed(instance.weights)),
        instance.kernel.reflected(),
        instance.field.reflected(),
    )
    return inst, NodeSystem(tuple(1.0 - v for v in reversed(y.nodes)))


def absorb_node(instance: ProblemInstance, x: NodesLike, i: int):
    """Move node ``i`` (1-based) into the field as a fixed translate.

    Returns the reduced instance, the reduced node system and the merge map:
    entry ``j`` lists the indices of the original maxima whose maximum is
    ``m*_j``.  Removing ``x_i`` joins ``I_{i-1}`` and ``I_i``.
    """
    x = instance.check_nodes(x)
    n = instance.n
    if not 1 <= i <= n:
        raise IndexError(f"node index {i} outside 1..{n}")
    if n == 1:
        raise ValueError("cannot absorb the only node (reduced problem would have n = 0)")
    field_ = instance.field.with_translate(instance.weights[i - 1], x.nodes[i - 1], instance.kernel)
    weights = instance.weights[: i - 1] + instance.weights[i:]
    nodes = x.nodes[: i - 1] + x.nodes[i:]
    merge = [(j,) for j in range(i - 1)] + [(i - 1, i)] + [(j + 1,) for j in range(i, n)]
    return ProblemInstance(weights, instance.kernel, field_), NodeSystem(nodes), merge


def apply_merge(m: Sequence[float], merge: Sequence[Sequence[int]]) -> tuple[float, ...]:
    return tuple(max(m[k] for k in group) for group in merge)
