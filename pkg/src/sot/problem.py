"""Node systems and problem instances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from sot.fields import FieldFunction, validate_n_field
from sot.kernels import Kernel


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class NodeSystem:
    """Ordered nodes ``0 <= y_1 <= ... <= y_n <= 1`` (a point of the closed simplex)."""

    nodes: tuple[float, ...]

    def __post_init__(self):
        nodes = tuple(float(v) for v in self.nodes)
        if any(not 0.0 <= v <= 1.0 for v in nodes):
            raise InstanceError(f"nodes must lie in [0, 1]: {nodes}")
        if any(a > b for a, b in zip(nodes, nodes[1:])):
            raise InstanceError(f"nodes must be nondecreasing: {nodes}")
        object.__setattr__(self, "nodes", nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def extended(self) -> tuple[float, ...]:
        """``(0, y_1, ..., y_n, 1)``."""
        return (0.0,) + self.nodes + (1.0,)

    def interval(self, j: int) -> tuple[float, float]:
        """``I_j = [y_j, y_{j+1}]`` for ``j = 0..n``."""
        e = self.extended
        return e[j], e[j + 1]

    @property
    def in_open_simplex(self) -> bool:
        e = self.extended
        return all(a < b for a, b in zip(e, e[1:]))

    def distance(self, other: "NodeSystem") -> float:
        return max((abs(a - b) for a, b in zip(self.nodes, other.nodes)), default=0.0)


NodesLike = Union[NodeSystem, Sequence[float]]


def as_nodes(y: NodesLike) -> NodeSystem:
    return y if isinstance(y, NodeSystem) else NodeSystem(tuple(y))


@dataclass(frozen=True)
class ProblemInstance:
    """Weights ``nu``, kernel ``K`` and field ``J``; ``n = len(weights)``."""

    weights: tuple[float, ...]
    kernel: Kernel
    field: FieldFunction

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if not w:
            raise InstanceError("need at least one node (n >= 1)")
        if any(not v > 0 for v in w):
            raise InstanceError("weights must be positive")
        object.__setattr__(self, "weights", w)
        ok, report = validate_n_field(self.field, len(w))
        if not ok:
            raise InstanceError(
                f"field is not a {len(w)}-field function: weighted count "
                f"{report['weighted_count']} must exceed {len(w)}"
            )

    @property
    def n(self) -> int:
        return len(self.weights)

    @classmethod
    def simple(cls, kernel: Kernel, n: int, field: FieldFunction | None = None,
               weights: Sequence[float] | None = None) -> "ProblemInstance":
        return cls(tuple(weights) if weights is not None else (1.0,) * n,
                   kernel, field if field is not None else FieldFunction.zero())

    def check_nodes(self, y: NodesLike) -> NodeSystem:
        y = as_nodes(y)
        if y.n != self.n:
            raise InstanceError(f"instance has n={self.n} but node system has {y.n} nodes")
        return y

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "weights": list(self.weights),
            "kernel": self.kernel.to_dict(),
            "field": self.field.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemInstance":
        weights = d.get("weights")
        n = d.get("n")
        if weights is None:
            if n is None:
                raise InstanceError("instance needs 'weights' or 'n'")
            weights = [1.0] * int(n)
        if n is not None and int(n) != len(weights):
            raise InstanceError(f"n={n} does not match {len(weights)} weights")
        field = FieldFunction.from_dict(d["field"]) if "field" in d else FieldFunction.zero()
        return cls(tuple(weights), Kernel.from_dict(d["kernel"]), field)
