"""Generalized Stieltjes functions: operators, complete monotonicity and class tests."""

import json

from ._core import (
    CapabilityError,
    DivergenceError,
    DomainError,
    Function,
    NotAMeasureError,
    QuadratureError,
    SpecError,
    T_op,
    binomial,
    c_op,
    c_op_measure_side,
    chu_vandermonde,
    g_op,
    gamma_ratio,
    lower_incomplete_gamma,
    pochhammer,
)
from . import _core

__all__ = [
    "CapabilityError",
    "DivergenceError",
    "DomainError",
    "Function",
    "NotAMeasureError",
    "QuadratureError",
    "SpecError",
    "T_op",
    "binomial",
    "c_op",
    "c_op_measure_side",
    "chu_vandermonde",
    "class_membership",
    "cm_check",
    "function",
    "g_op",
    "gamma_ratio",
    "lower_incomplete_gamma",
    "pochhammer",
]


def function(spec, lam=None):
    """Build a Function from a spec dict or JSON string."""
    text = spec if isinstance(spec, str) else json.dumps(spec)
    return Function.from_spec(text, lam)


def cm_check(f, N=8, grid_min=1e-3, grid_max=1e3, points=64, tol=1e-9):
    return json.loads(_core.cm_check_json(f, N, grid_min, grid_max, points, tol))


def class_membership(f, N=8, grid_min=1e-3, grid_max=1e3, points=64, tol=1e-9):
    return json.loads(_core.class_membership_json(f, N, grid_min, grid_max, points, tol))
