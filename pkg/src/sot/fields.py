"""Piecewise upper semicontinuous field functions on [0, 1].

A field is given by breakpoints ``0 = t_0 < ... < t_K = 1``, one concave
piece per open interval ``(t_k, t_{k+1})`` and a value at every breakpoint.
Unless ``non_usc_override`` is set, each breakpoint value is raised to the
largest of the declared value and the two one-sided limits, which makes the
field upper semicontinuous by construction.  Kernel translates
``weight * K(t - center)`` can be attached; they are how a node gets absorbed
into the field.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence

from sot.extreal import NEG_INF, fmt_ext, parse_ext
from sot.kernels import Kernel

PIECE_KINDS = ("neg_inf", "constant", "affine", "quadratic")


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class Piece:
    """``a t^2 + b t + c`` on an open interval, or identically ``-inf``."""

    kind: str
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in PIECE_KINDS:
            raise FieldError(f"unknown piece kind {self.kind!r}")
        for name in ("a", "b", "c"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise FieldError(f"piece coefficient {name} must be finite")
            object.__setattr__(self, name, v)
        if self.kind == "quadratic" and self.a > 0:
            raise FieldError("quadratic pieces must be concave (a <= 0)")
        if self.kind in ("constant", "neg_inf") and (self.a or self.b):
            raise FieldError(f"{self.kind} piece cannot carry a, b coefficients")
        if self.kind == "affine" and self.a:
            raise FieldError("affine piece cannot carry a quadratic coefficient")
        if self.kind == "neg_inf" and self.c:
            raise FieldError("neg_inf piece has no coefficients")

    @classmethod
    def neg_inf(cls) -> "Piece":
        return cls("neg_inf")

    @classmethod
    def constant(cls, value: float) -> "Piece":
        return cls("constant", c=value)

    @classmethod
    def affine(cls, slope: float, intercept: float) -> "Piece":
        return cls("affine", b=slope, c=intercept)

    @classmethod
    def quadratic(cls, a: float, b: float, c: float) -> "Piece":
        return cls("quadratic", a, b, c)

    @property
    def is_neg_inf(self) -> bool:
        return self.kind == "neg_inf"

    def __call__(self, t: float) -> float:
        if self.kind == "neg_inf":
            return NEG_INF
        return (self.a * t + self.b) * t + self.c

    def sup(self, lo: float, hi: float) -> float:
        if self.kind == "neg_inf":
            return NEG_INF
        best = max(self(lo), self(hi))
        if self.a < 0:
            v = -self.b / (2 * self.a)
            if lo < v < hi:
                best = max(best, self(v))
        return best

    def reflected(self) -> "Piece":
        """Coefficients of ``t -> p(1 - t)``."""
        if self.kind == "neg_inf":
            return self
        a, b, c = self.a, self.b, self.c
        return Piece(self.kind, a, -2 * a - b, a + b + c)

    def to_dict(self) -> dict:
        if self.kind == "neg_inf":
            return {"kind": "neg_inf"}
        if self.kind == "constant":
            return {"kind": "constant", "value": self.c}
        if self.kind == "affine":
            return {"kind": "affine", "slope": self.b, "intercept": self.c}
        return {"kind": "quadratic", "a": self.a, "b": self.b, "c": self.c}

    @classmethod
    def from_dict(cls, d: dict) -> "Piece":
        kind = d.get("kind")
        keys = {
            "neg_inf": set(),
            "constant": {"value"},
            "affine": {"slope", "intercept"},
            "quadratic": {"a", "b", "c"},
        }
        if kind not in keys:
            raise FieldError(f"unknown piece kind {kind!r}")
        got = set(d) - {"kind"}
        if got != keys[kind]:
            raise FieldError(f"{kind} piece needs keys {sorted(keys[kind])}, got {sorted(got)}")
        if kind == "neg_inf":
            return cls.neg_inf()
        if kind == "constant":
            return cls.constant(d["value"])
        if kind == "affine":
            return cls.affine(d["slope"], d["intercept"])
        return cls.quadratic(d["a"], d["b"], d["c"])


@dataclass(frozen=True)
class Translate:
    weight: float
    center: float
    kernel: Kernel

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "center", float(self.center))
        if not self.weight > 0:
            raise FieldError("translate weight must be positive")
        if not 0.0 <= self.center <= 1.0:
            raise FieldError("translate center must lie in [0, 1]")

    def __call__(self, t: float) -> float:
        return self.weight * self.kernel.fast(t - self.center)


@dataclass(frozen=True)
class FieldFunction:
    breakpoints: tuple[float, ...]
    pieces: tuple[Piece, ...]
    point_values: tuple[float, ...] = ()
    translates: tuple[Translate, ...] = ()
    non_usc_override: bool = False
    declared_values: tuple[float, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        bps = tuple(float(t) for t in self.breakpoints)
        pieces = tuple(self.pieces)
        if len(bps) < 2 or bps[0] != 0.0 or bps[-1] != 1.0:
            raise FieldError("breakpoints must start at 0 and end at 1")
        if any(not a < b for a, b in zip(bps, bps[1:])):
            raise FieldError("breakpoints must be strictly increasing")
        if len(pieces) != len(bps) - 1:
            raise FieldError(f"need {len(bps) - 1} pieces for {len(bps)} breakpoints, got {len(pieces)}")
        declared = tuple(self.point_values)
        if not declared:
            declared = (NEG_INF,) * len(bps)
        if len(declared) != len(bps):
            raise FieldError("one point value per breakpoint is required")
        declared = tuple(parse_ext(v) for v in declared)

        values = []
        for k, t in enumerate(bps):
            v = declared[k]
            if not self.non_usc_override:
                if k > 0:
                    v = max(v, pieces[k - 1](t))
                if k < len(pieces):
                    v = max(v, pieces[k](t))
            values.append(v)

        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "point_values", tuple(values))
        object.__setattr__(self, "translates", tuple(self.translates))
        object.__setattr__(self, "declared_values", declared)

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "FieldFunction":
        return cls((0.0, 1.0), (Piece.constant(0.0),))

    @classmethod
    def from_pieces(cls, breakpoints: Sequence[float], pieces: Sequence[Piece],
                    point_values: Sequence[float] | None = None, **kw) -> "FieldFunction":
        return cls(tuple(breakpoints), tuple(pieces), tuple(point_values or ()), **kw)

    def with_translate(self, weight: float, center: float, kernel: Kernel) -> "FieldFunction":
        return FieldFunction(
            self.breakpoints, self.pieces, self.declared_values,
            self.translates + (Translate(weight, center, kernel),),
            self.non_usc_override,
        )

    def reflected(self) -> "FieldFunction":
        """The field ``t -> J(1 - t)``."""
        return FieldFunction(
            tuple(1.0 - t for t in reversed(self.breakpoints)),
            tuple(p.reflected() for p in reversed(self.pieces)),
            tuple(reversed(self.point_values if not self.non_usc_override else self.declared_values)),
            tuple(Translate(tr.weight, 1.0 - tr.center, tr.kernel.reflected()) for tr in self.translates),
            self.non_usc_override,
        )

    # evaluation ---------------------------------------------------------

    def base(self, t: float) -> float:
        """The piecewise part alone, without attached translates."""
        bps = self.breakpoints
        k = bisect.bisect_left(bps, t)
        if k < len(bps) and bps[k] == t:
            return self.point_values[k]
        return self.pieces[k - 1](t)

    def __call__(self, t: float) -> float:
        if not 0.0 <= t <= 1.0:
            raise FieldError(f"field argument {t!r} outside [0, 1]")
        v = self.base(t)
        if v == NEG_INF:
            return v
        for tr in self.translates:
            v += tr(t)
        return v

    def piece_at(self, lo: float, hi: float) -> Piece:
        """The piece covering the open interval (lo, hi), which must not straddle a breakpoint."""
        k = bisect.bisect_right(self.breakpoints, lo)
        return self.pieces[k - 1]

    # structure ----------------------------------------------------------

    def is_usc(self) -> bool:
        for k, t in enumerate(self.breakpoints):
            v = self.point_values[k]
            if k > 0 and self.pieces[k - 1](t) > v:
                return False
            if k < len(self.pieces) and self.pieces[k](t) > v:
                return False
        return True

    def sup_bound(self) -> float:
        """An upper bound for the field on [0, 1] (finite for every valid field)."""
        best = max(self.point_values)
        for k, p in enumerate(self.pieces):
            best = max(best, p.sup(self.breakpoints[k], self.breakpoints[k + 1]))
        for tr in self.translates:
            best += tr.weight * tr.kernel.sup()
        return best

    def singular_translate_centers(self) -> list[float]:
        return sorted({tr.center for tr in self.translates if tr.kernel.singular})

    # serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        vals = self.declared_values if self.non_usc_override else self.point_values
        return {
            "breakpoints": list(self.breakpoints),
            "pieces": [p.to_dict() for p in self.pieces],
            "point_values": [v if v != NEG_INF else fmt_ext(v) for v in vals],
            "translates": [
                {"weight": tr.weight, "center": tr.center, "kernel": tr.kernel.to_dict()}
                for tr in self.translates
            ],
            "non_usc_override": self.non_usc_override,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FieldFunction":
        allowed = {"breakpoints", "pieces", "point_values", "translates", "non_usc_override"}
        extra = set(d) - allowed
        if extra:
            raise FieldError(f"unknown field keys {sorted(extra)}")
        pieces = [Piece.from_dict(p) for p in d.get("pieces", [])]
        pv = d.get("point_values")
        translates = tuple(
            Translate(tr["weight"], tr["center"], Kernel.from_dict(tr["kernel"]))
            for tr in d.get("translates", [])
        )
        return cls(
            tuple(d.get("breakpoints", ())),
            tuple(pieces),
            tuple(parse_ext(v) for v in pv) if pv else (),
            translates,
            bool(d.get("non_usc_override", False)),
        )


def validate_n_field(field: FieldFunction, n: int) -> tuple[bool, dict]:
    """Check that ``field`` is finite at more than ``n`` points, counted with weight.

    A finite piece of positive length counts as infinitely many points.
    Otherwise finite breakpoints in (0, 1) count 1 and finite endpoints 1/2.
    """
    sing_centers = set(field.singular_translate_centers())
    report: dict = {"n": n, "finite_pieces": [], "finite_points": []}
    for k, p in enumerate(field.pieces):
        if not p.is_neg_inf:
            report["finite_pieces"].append([field.breakpoints[k], field.breakpoints[k + 1]])
    if report["finite_pieces"]:
        report["weighted_count"] = math.inf
    else:
        count = 0.0
        for k, t in enumerate(field.breakpoints):
            if field.point_values[k] == NEG_INF or t in sing_centers:
                continue
            report["finite_points"].append(t)
            count += 0.5 if k in (0, len(field.breakpoints) - 1) else 1.0
        report["weighted_count"] = count
    report["bounded_above"] = field.sup_bound() < math.inf
    report["valid"] = bool(report["weighted_count"] > n and report["bounded_above"])
    return report["valid"], report

