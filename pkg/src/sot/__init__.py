"""Interval maxima of weighted sum-of-translates functions.

For a kernel ``K`` on ``[-1, 1]``, an upper semicontinuous field ``J`` on
``[0, 1]`` and positive weights ``nu``, the library evaluates

    F(y, t) = J(t) + sum_j nu_j K(t - y_j)

and the vector of its suprema over the intervals cut out by the node system
``0 <= y_1 <= ... <= y_n <= 1``.
"""

from sot.extreal import NEG_INF, ext, ext_max, ext_min, fmt_ext
from sot.kernels import Kernel
from sot.fields import FieldFunction, Piece, Translate, validate_n_field
from sot.problem import NodeSystem, ProblemInstance
from sot.translates import (
    MaximaVector,
    F_weighted,
    f_pure,
    interval_maxima,
    is_regular,
    m_bar,
    m_under,
    singularity_set,
)

__all__ = [
    "NEG_INF",
    "ext",
    "ext_max",
    "ext_min",
    "fmt_ext",
    "Kernel",
    "FieldFunction",
    "Piece",
    "Translate",
    "validate_n_field",
    "NodeSystem",
    "ProblemInstance",
    "MaximaVector",
    "F_weighted",
    "f_pure",
    "interval_maxima",
    "is_regular",
    "m_bar",
    "m_under",
    "singularity_set",
]

__version__ = "0.1.0"
