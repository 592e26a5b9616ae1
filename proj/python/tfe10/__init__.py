"""Self-similar solutions of the tenth-order thin film equation.

Thin wrappers over the compiled core: records come back as dicts, sampled
profiles as lists under the keys ``y`` and ``f``.
"""

import json

from . import _core
from ._core import (
    TfeError,
    alpha0,
    decay_constant_formula,
    eigenvalue_linear,
    kernel_derivatives_1d,
    kernel_mass,
    kernel_values,
    p_critical,
    unstable_symbol,
)

__version__ = _core.version

__all__ = [
    "TfeError",
    "alpha0",
    "branch",
    "classify_conic",
    "cli",
    "conic_branch_count",
    "decay_constant_formula",
    "eigenvalue_linear",
    "exponents_unstable",
    "kernel_derivatives_1d",
    "kernel_mass",
    "kernel_values",
    "mu10",
    "p_critical",
    "quadratic_branch_count",
    "run_criterion",
    "solve_f0",
    "solve_f0_unstable",
    "solve_fk_linear",
    "unstable_symbol",
]


def _profile(result):
    record, y, f = result
    out = json.loads(record)
    out["y"] = y
    out["f"] = f
    return out


def solve_f0(n, N=1, delta=None, normalization=1.0):
    """First nonlinear eigenfunction f0 with its free boundary y0."""
    return _profile(_core.solve_f0(n, N, delta, normalization))


def solve_fk_linear(k, y_max=15.0, points=3001):
    """Linear eigenfunction f_k at n = 0 in one dimension."""
    return _profile(_core.solve_fk_linear(k, y_max, points))


def solve_f0_unstable(n, N=1):
    return _profile(_core.solve_f0_unstable(n, N))


def branch(n_max, N=1, n_start=1e-3):
    return json.loads(_core.trace_branch(n_max, N, n_start))


def mu10(N):
    return json.loads(_core.mu10(N))


def quadratic_branch_count(A, B, C, omega_norm=0.0):
    return json.loads(_core.quadratic_branch_count(A, B, C, omega_norm))


def conic_branch_count(f1, f2):
    """Each conic is (A, B, C, D, E, F0) for A x^2 + B y^2 + C x + D y + E xy + F0."""
    return json.loads(_core.conic_branch_count(tuple(f1), tuple(f2)))


def classify_conic(coefficients):
    kind, discriminant = _core.classify_conic(tuple(coefficients))
    return {"type": kind, "discriminant": discriminant}


def exponents_unstable(n, p, N=1):
    return json.loads(_core.exponents_unstable(n, p, N))


def run_criterion(criterion):
    passed, name, detail = _core.run_criterion(criterion)
    return {"passed": passed, "name": name, "detail": detail}


def cli(*args):
    """Run the command-line tool in-process; returns the exit code."""
    return _core.cli([str(a) for a in args])
