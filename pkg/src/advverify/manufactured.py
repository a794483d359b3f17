"""Manufactured solution u = 1 + exp(0.8 x - 0.35 t) and its forcing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid1D, SolutionField

X_RATE = 0.8
T_RATE = -0.35


@dataclass(frozen=True)
class ProblemSpec:
    """Constant-speed advection problem; only the speed is configurable."""

    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError(f"advection speed must be positive, got {self.a}")


def u_exact(x, t):
    return 1.0 + np.exp(X_RATE * x + T_RATE * t)


def forcing(spec: ProblemSpec, x, t):
    """du/dt + a du/dx of the exact solution."""
    # (0.8 a - 0.35) written with exactly representable 8 and 3.5 so that
    # the a = 0.4375 cancellation is exact
    coeff = (8.0 * spec.a - 3.5) / 10.0
    return coeff * np.exp(X_RATE * x + T_RATE * t)


def time_forcing(x, t):
    """du/dt of the exact solution alone.

    This is the source of the ODE-only problem, whose exact solution at
    every fixed x is again u_exact(x, t).
    """
    return T_RATE * np.exp(X_RATE * x + T_RATE * t)


def space_forcing(spec: ProblemSpec, x, t):
    """a du/dx of the exact solution alone, the source of the steady problem."""
    return X_RATE * spec.a * np.exp(X_RATE * x + T_RATE * t)


def inflow_exact(t):
    return u_exact(0.0, t)


def initial_field(spec: ProblemSpec, grid: Grid1D) -> SolutionField:
    return SolutionField(u_exact(grid.centers, 0.0), grid, 0.0)
