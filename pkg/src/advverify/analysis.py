"""Error norms and observed orders over refinement families."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import SolutionField
from .manufactured import u_exact

TIME_MATCH_TOL = 1e-12


def l1_norm(errors) -> float:
    """Unweighted mean of |e_j| (divides by N, not by cell volumes)."""
    return float(np.mean(np.abs(errors)))


def linf_norm(errors) -> tuple[float, int]:
    """Max |e_j| and the 1-based cell number attaining it (first on ties)."""
    abs_err = np.abs(np.asarray(errors))
    j = int(np.argmax(abs_err))
    return float(abs_err[j]), j + 1


def cell_errors(field: SolutionField, t: float) -> np.ndarray:
    if abs(field.time - t) > TIME_MATCH_TOL:
        raise ValueError(f"field is stamped t={field.time!r}, errors requested at t={t!r}")
    return field.values - u_exact(field.grid.centers, t)


def l1_error(field: SolutionField, t: float) -> float:
    return l1_norm(cell_errors(field, t))


def linf_error(field: SolutionField, t: float) -> tuple[float, int]:
    return linf_norm(cell_errors(field, t))


def observed_order(error_coarse: float, error_fine: float, refinement_ratio: float = 2.0) -> float:
    if not (error_coarse > 0.0 and error_fine > 0.0):
        raise ValueError(
            f"observed order needs positive errors, got {error_coarse!r}, {error_fine!r}")
    if not refinement_ratio > 1.0:
        raise ValueError(f"refinement ratio must exceed 1, got {refinement_ratio!r}")
    return math.log(error_coarse / error_fine) / math.log(refinement_ratio)


@dataclass(frozen=True)
class LevelErrors:
    n_cells: int
    l1_error: float
    linf_error: float
    linf_cell: int = 0


@dataclass(frozen=True)
class ConvergenceRow:
    level: int
    n_cells: int
    h: float
    l1_error: float
    linf_error: float
    l1_order: float | None
    linf_order: float | None
    linf_cell: int = 0


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple[ConvergenceRow, ...]

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def final_l1_order(self) -> float:
        return self.rows[-1].l1_order

    @property
    def final_linf_order(self) -> float:
        return self.rows[-1].linf_order

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


def build_table(levels: Sequence[LevelErrors]) -> ConvergenceTable:
    """Tabulate per-level errors with orders between consecutive levels."""
    if len(levels) < 2:
        raise ValueError("a convergence table needs at least 2 levels")
    rows = []
    prev = None
    for k, lev in enumerate(levels):
        if lev.l1_error < 0 or lev.linf_error < 0:
            raise ValueError("errors must be non-negative")
        if prev is None:
            l1_order = linf_order = None
        else:
            if lev.n_cells != 2 * prev.n_cells:
                raise ValueError(
                    f"level {k}: n_cells {lev.n_cells} is not double {prev.n_cells}")
            l1_order = observed_order(prev.l1_error, lev.l1_error)
            linf_order = observed_order(prev.linf_error, lev.linf_error)
        rows.append(ConvergenceRow(k, lev.n_cells, 1.0 / lev.n_cells, lev.l1_error,
                                   lev.linf_error, l1_order, linf_order, lev.linf_cell))
        prev = lev
    return ConvergenceTable(tuple(rows))
