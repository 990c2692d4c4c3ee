"""Exact constructive solutions of the additive coboundary equation f = g o T - g.

Vector-valued step functions on [0,1), functions on finite sets and step
functions on Cantor sets are handled with rational arithmetic throughout.
"""

from .cantor import CantorLabel, CantorStep, TowerSolution, build_tower, check_tower
from .coboundary import (DiscreteSolution, StepSolution, browder_profile, diophantine_signed,
                         simplex_counterexample, solve_discrete, solve_equal_intervals,
                         verify_browder, verify_solution)
from .core import (DiscreteFunction, IntervalExchange, Norm, NormValue, RationalVector,
                   StepFunction, compose, vec)
from .errors import (BoundViolated, HomologicalError, InvalidInstance, NotMeanZero,
                     UnequalIntervals)
from .selection import VectorMatrix, bg_select, kwapien_permutations, kwapien_scalar
from .steinitz import steinitz_oracle, steinitz_rearrange

__version__ = "0.1.0"

__all__ = [
    "CantorLabel", "CantorStep", "TowerSolution", "build_tower", "check_tower",
    "DiscreteSolution", "StepSolution", "browder_profile", "diophantine_signed",
    "simplex_counterexample", "solve_discrete", "solve_equal_intervals", "verify_browder",
    "verify_solution", "DiscreteFunction", "IntervalExchange", "Norm", "NormValue",
    "RationalVector", "StepFunction", "compose", "vec", "BoundViolated", "HomologicalError",
    "InvalidInstance", "NotMeanZero", "UnequalIntervals", "VectorMatrix", "bg_select",
    "kwapien_permutations", "kwapien_scalar", "steinitz_oracle", "steinitz_rearrange",
]
