"""Sum-of-translates functions and their interval maxima.

Between consecutive cut points (field breakpoints, nodes, centers of attached
translates) every term of ``F(y, .)`` is concave, so each open sub-segment is
maximized exactly by golden-section search.  The cut points themselves are
evaluated separately; that is where a supremum sitting on an upward jump of
the field is picked up.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Optional

from sot.extreal import NEG_INF, fmt_ext
from sot.fields import FieldError, Piece
from sot.problem import NodesLike, ProblemInstance

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
LOG_INV_PHI = math.log(INV_PHI)

DEFAULT_TOL = 1e-12


def f_pure(instance: ProblemInstance, y: NodesLike, t: float) -> float:
    """``sum_j nu_j K(t - y_j)``."""
    y = instance.check_nodes(y)
    if not 0.0 <= t <= 1.0:
        raise FieldError(f"t={t!r} outside [0, 1]")
    k = instance.kernel.fast
    v = 0.0
    for w, c in zip(instance.weights, y.nodes):
        v += w * k(t - c)
    return v


def F_weighted(instance: ProblemInstance, y: NodesLike, t: float) -> float:
    """``J(t) + sum_j nu_j K(t - y_j)``."""
    f = f_pure(instance, y, t)
    if f == NEG_INF:
        return f
    return instance.field(t) + f


def F_evaluator(instance: ProblemInstance, y: NodesLike) -> Callable[[float], float]:
    """Unchecked ``t -> F(y, t)`` for repeated evaluation at a fixed node system."""
    y = instance.check_nodes(y)
    field = instance.field
    k = instance.kernel.fast
    terms = list(zip(instance.weights, y.nodes))

    def F(t: float) -> float:
        v = field(t)
        if v == NEG_INF:
            return v
        for w, c in terms:
            v += w * k(t - c)
        return v

    return F


# --------------------------------------------------------------------------
# singularity structure


@dataclass(frozen=True)
class Component:
    """A maximal interval of the singularity set; ``lo == hi`` is an isolated point."""

    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, t: float) -> bool:
        left = self.lo < t or (self.lo == t and self.lo_closed)
        right = t < self.hi or (t == self.hi and self.hi_closed)
        return left and right

    def covers(self, a: float, b: float) -> bool:
        return self.contains(a) and self.contains(b)

    def __str__(self) -> str:
        if self.is_point:
            return f"{{{self.lo!r}}}"
        return f"{'[' if self.lo_closed else '('}{self.lo!r}, {self.hi!r}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class SingularitySet:
    components: tuple[Component, ...]

    def contains(self, t: float) -> bool:
        return any(c.contains(t) for c in self.components)

    def covers(self, a: float, b: float) -> bool:
        """Whether the closed interval [a, b] lies inside the set."""
        if a == b:
            return self.contains(a)
        # components are maximal, so a connected interval must sit in one of them
        return any(c.covers(a, b) for c in self.components)

    @property
    def points(self) -> list[float]:
        return [c.lo for c in self.components if c.is_point]

    @property
    def intervals(self) -> list[Component]:
        return [c for c in self.components if not c.is_point]

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        return " u ".join(str(c) for c in self.components) or "{}"


def _merge(parts: list[Component]) -> tuple[Component, ...]:
    parts = sorted(parts, key=lambda c: (c.lo, not c.lo_closed, c.hi))
    out: list[Component] = []
    for c in parts:
        if out:
            p = out[-1]
            touching = c.lo < p.hi or (c.lo == p.hi and (p.hi_closed or c.lo_closed))
            if touching:
                if c.hi > p.hi:
                    hi, hc = c.hi, c.hi_closed
                elif c.hi == p.hi:
                    hi, hc = p.hi, p.hi_closed or c.hi_closed
                else:
                    hi, hc = p.hi, p.hi_closed
                lc = p.lo_closed or (c.lo == p.lo and c.lo_closed)
                out[-1] = Component(p.lo, hi, lc, hc)
                continue
        out.append(c)
    return tuple(out)


def singularity_set(instance: ProblemInstance, y: NodesLike) -> SingularitySet:
    """Exact description of ``{t in [0, 1] : F(y, t) = -inf}``."""
    y = instance.check_nodes(y)
    field = instance.field
    bps = field.breakpoints
    parts: list[Component] = []
    for k, p in enumerate(field.pieces):
        if p.is_neg_inf:
            parts.append(Component(bps[k], bps[k + 1], False, False))
    for k, t in enumerate(bps):
        if field.point_values[k] == NEG_INF:
            parts.append(Component(t, t, True, True))
    for c in field.singular_translate_centers():
        parts.append(Component(c, c, True, True))
    if instance.kernel.singular:
        for c in y.nodes:
            parts.append(Component(c, c, True, True))
    return SingularitySet(_merge(parts))


def is_regular(instance: ProblemInstance, y: NodesLike) -> bool:
    """No interval ``I_j(y)`` lies inside the singularity set (decided symbolically)."""
    y = instance.check_nodes(y)
    xs = singularity_set(instance, y)
    return not any(xs.covers(*y.interval(j)) for j in range(y.n + 1))


# --------------------------------------------------------------------------
# interval maxima


@dataclass(frozen=True)
class MaximaVector:
    m: tuple[float, ...]
    argmax: tuple[Optional[float], ...]

    @property
    def regular(self) -> bool:
        return all(v != NEG_INF for v in self.m)

    @property
    def m_bar(self) -> float:
        return max(self.m)

    @property
    def m_under(self) -> float:
        return min(self.m)

    def __len__(self) -> int:
        return len(self.m)

    def __getitem__(self, j):
        return self.m[j]

    def to_dict(self) -> dict:
        return {
            "m": [fmt_ext(v) if v == NEG_INF else v for v in self.m],
            "argmax": list(self.argmax),
            "regular": self.regular,
        }


def golden_max(g: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Maximize a concave ``g`` on the open interval (lo, hi).

    Returns the best ``(value, t)`` among the points actually evaluated, so the
    value is always attained.  ``g`` is never evaluated at ``lo`` or ``hi``.
    """
    h = hi - lo
    c = hi - INV_PHI * h
    d = lo + INV_PHI * h
    gc = g(c)
    gd = g(d)
    best_v, best_t = (gc, c) if gc >= gd else (gd, d)
    steps = max(0, math.ceil(math.log(tol / h) / LOG_INV_PHI)) if h > tol else 0
    for _ in range(steps):
        if gc >= gd:
            hi = d
            d, gd = c, gc
            h *= INV_PHI
            c = hi - INV_PHI * h
            gc = g(c)
            if gc > best_v:
                best_v, best_t = gc, c
        else:
            lo = c
            c, gc = d, gd
            h *= INV_PHI
            d = lo + INV_PHI * h
            gd = g(d)
            if gd > best_v:
                best_v, best_t = gd, d
    return best_v, best_t


def _segment_fn(piece: Piece, node_terms, tr_terms, k) -> Callable[[float], float]:
    a, b, c = piece.a, piece.b, piece.c

    if not tr_terms:
        def g(t):
            v = (a * t + b) * t + c
            for w, y in node_terms:
                v += w * k(t - y)
            return v
    else:
        def g(t):
            v = (a * t + b) * t + c
            for w, y in node_terms:
                v += w * k(t - y)
            for w, y, kk in tr_terms:
                v += w * kk(t - y)
            return v
    return g


class _MaximaContext:
    """Per-(instance, y) data shared by the interval computations."""

    def __init__(self, instance: ProblemInstance, y: NodesLike):
        self.instance = instance
        self.y = instance.check_nodes(y)
        field = instance.field
        self.field = field
        self.k = instance.kernel.fast
        self.node_terms = list(zip(instance.weights, self.y.nodes))
        self.tr_terms = [(tr.weight, tr.center, tr.kernel.fast) for tr in field.translates]
        self.F = F_evaluator(instance, self.y)
        cuts = set(field.breakpoints) | set(self.y.nodes) | {tr.center for tr in field.translates}
        self.cuts = sorted(cuts)

    def interval_max(self, j: int, tol: float) -> tuple[float, Optional[float]]:
        a, b = self.y.interval(j)
        F = self.F
        if a == b:
            v = F(a)
            return v, (a if v != NEG_INF else None)
        lo_i = bisect.bisect_right(self.cuts, a)
        hi_i = bisect.bisect_left(self.cuts, b)
        pts = [a] + self.cuts[lo_i:hi_i] + [b]

        best_v, best_t = NEG_INF, None
        for t in pts:
            v = F(t)
            if v > best_v:
                best_v, best_t = v, t
        for s0, s1 in zip(pts, pts[1:]):
            piece = self.field.piece_at(s0, s1)
            if piece.is_neg_inf:
                continue
            g = _segment_fn(piece, self.node_terms, self.tr_terms, self.k)
            v, t = golden_max(g, s0, s1, tol)
            if v > best_v:
                best_v, best_t = v, t
        return best_v, best_t


def interval_max(instance: ProblemInstance, y: NodesLike, j: int, tol: float = DEFAULT_TOL) -> tuple[float, Optional[float]]:
    """``(m_j(y), witness)`` for a single interval."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    ctx = _MaximaContext(instance, y)
    if not 0 <= j <= ctx.y.n:
        raise IndexError(f"interval index {j} outside 0..{ctx.y.n}")
    return ctx.interval_max(j, tol)


def interval_maxima(instance: ProblemInstance, y: NodesLike, tol: float = DEFAULT_TOL) -> MaximaVector:
    """The vector ``(m_0(y), ..., m_n(y))`` with argmax witnesses."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    ctx = _MaximaContext(instance, y)
    ms, ts = [], []
    for j in range(ctx.y.n + 1):
        v, t = ctx.interval_max(j, tol)
        ms.append(v)
        ts.append(t)
    return MaximaVector(tuple(ms), tuple(ts))


def m_bar(instance: ProblemInstance, y: NodesLike, tol: float = DEFAULT_TOL) -> float:
    return interval_maxima(instance, y, tol).m_bar


def m_under(instance: ProblemInstance, y: NodesLike, tol: float = DEFAULT_TOL) -> float:
    return interval_maxima(instance, y, tol).m_under
