"""Values in R u {-inf}.

Extended reals are plain Python floats restricted to the finite values and
``-inf``.  IEEE arithmetic already gives ``x + (-inf) == -inf`` and a total
order with ``-inf`` at the bottom, so the only work left is rejecting ``+inf``
and NaN at the boundaries where values enter the library.
"""

from __future__ import annotations

import math
from typing import Iterable

NEG_INF = -math.inf


class ExtRealError(ValueError):
    """A value outside R u {-inf} was produced or supplied."""


def ext(x: float) -> float:
    """Coerce ``x`` to an extended real, rejecting ``+inf`` and NaN."""
    x = float(x)
    if math.isnan(x):
        raise ExtRealError("NaN is not an extended real")
    if x == math.inf:
        raise ExtRealError("+inf is not representable")
    return x


def is_finite(x: float) -> bool:
    return x != NEG_INF


def ext_add(*xs: float) -> float:
    total = 0.0
    for x in xs:
        if x == NEG_INF:
            return NEG_INF
        total += x
    return ext(total)


def ext_max(xs: Iterable[float]) -> float:
    xs = list(xs)
    if not xs:
        raise ValueError("max of an empty collection")
    return max(xs)


def ext_min(xs: Iterable[float]) -> float:
    xs = list(xs)
    if not xs:
        raise ValueError("min of an empty collection")
    return min(xs)


def fmt_ext(x: float) -> str:
    """Canonical text: shortest round-trip decimal, ``-inf`` as a literal."""
    if x == NEG_INF:
        return "-inf"
    return repr(ext(x))


def parse_ext(token) -> float:
    """Inverse of :func:`fmt_ext`; also accepts numbers and ``None`` (as -inf)."""
    if token is None:
        return NEG_INF
    if isinstance(token, str):
        s = token.strip().lower()
        if s in ("-inf", "-infinity"):
            return NEG_INF
        return ext(float(s))
    return ext(token)
