"""Fromm's second-order upwind residual and the direct steady-state solve."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .grid import MIN_CELLS, Grid1D, SolutionField
from .manufactured import ProblemSpec, inflow_exact, space_forcing

BoundaryValueFn = Callable[[float], float]

__all__ = ["BoundaryValueFn", "SolutionField", "face_fluxes", "flux_stencil",
           "residual", "residual_values", "steady_solve", "solve_linear_steady"]


def flux_stencil(grid: Grid1D):
    """Index/weight arrays for faces 1..N (face 0 is the inflow face).

    Face i carries ``a * (u[up] + g * (u[hi] - u[lo]))`` with ``up = i - 1``.
    Interior faces take the centered gradient of the upwind cell; the first
    and last faces use the one-sided gradients of the boundary closures.
    """
    n = grid.n_cells
    if n < MIN_CELLS:
        raise ValueError(f"Fromm stencil needs at least {MIN_CELLS} cells, got {n}")
    x, h = grid.centers, grid.volumes
    up = np.arange(n)
    lo = up - 1
    hi = up + 1
    lo[0], hi[0] = 0, 1
    lo[-1], hi[-1] = n - 2, n - 1
    g = h[up] / (2.0 * (x[hi] - x[lo]))
    return up, lo, hi, g


def face_fluxes(values: np.ndarray, grid: Grid1D, a: float, inflow_value: float) -> np.ndarray:
    up, lo, hi, g = flux_stencil(grid)
    f = np.empty(grid.n_cells + 1)
    f[0] = a * inflow_value
    f[1:] = a * (values[up] + g * (values[hi] - values[lo]))
    return f


def residual_values(values: np.ndarray, grid: Grid1D, a: float, inflow_value: float) -> np.ndarray:
    return np.diff(face_fluxes(values, grid, a, inflow_value))


def residual(field: SolutionField, spec: ProblemSpec, t: float,
             inflow: BoundaryValueFn = inflow_exact) -> np.ndarray:
    """Res_j = f_{j+1/2} - f_{j-1/2} for the field, with inflow value inflow(t)."""
    return residual_values(field.values, field.grid, spec.a, inflow(t))


def _banded_operator(grid: Grid1D, a: float) -> np.ndarray:
    # (l, u) = (2, 1): row j couples cells j-2 .. j+1
    n = grid.n_cells
    ab = np.zeros((4, n))
    up, lo, hi, g = flux_stencil(grid)

    def add(row, col, val):
        ab[1 + row - col, col] += val

    for i in range(n):
        face_terms = ((up[i], a), (hi[i], a * g[i]), (lo[i], -a * g[i]))
        # face i+1 is the right face of cell i and the left face of cell i+1
        for col, w in face_terms:
            add(i, col, w)
            if i + 1 < n:
                add(i + 1, col, -w)
    return ab


def solve_linear_steady(grid: Grid1D, a: float, inflow_value: float,
                        source_times_volume: np.ndarray) -> np.ndarray:
    """Solve Res(u) = source_times_volume with a banded LU factorization."""
    rhs = np.array(source_times_volume, dtype=np.float64)
    rhs[0] += a * inflow_value
    ab = _banded_operator(grid, a)
    try:
        u = solve_banded((2, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"steady system is singular on {grid.n_cells} cells") from exc
    return u


def steady_solve(spec: ProblemSpec, grid: Grid1D) -> SolutionField:
    """Solve Res_j - s(x_j, 0) h_j = 0 with inflow u_exact(0, 0).

    The source is the steady part a*du/dx of the forcing, so that
    u_exact(x, 0) is the exact steady solution.
    """
    source = space_forcing(spec, grid.centers, 0.0) * grid.volumes
    u = solve_linear_steady(grid, spec.a, float(inflow_exact(0.0)), source)
    return SolutionField(u, grid, 0.0)
