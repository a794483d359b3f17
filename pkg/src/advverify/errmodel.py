"""Discretization-error model of a first-order boundary cell.

A single cell next to the inflow boundary, updated by forward Euler with
a one-sided upwind difference whose upstream value is taken from the exact
solution, has a first-order truncation error E = C1 (dt + h) but an error
recurrence e^{n+1} = (1 - mu) e^n + dt E. The closed form of that
recurrence shows when a time-dependent grid-refinement study sees the
first-order truncation error instead of the second-order discretization
error: the leftover weight exp(-a T_f / h) must vanish under refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .manufactured import ProblemSpec, forcing, u_exact


@dataclass(frozen=True)
class ErrorModelParams:
    a: float
    h: float
    mu: float
    c1: float = 1.0
    t_final: float = 0.0

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not self.h > 0.0:
            raise ValueError(f"h must be positive, got {self.h}")
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"CFL number must lie in (0, 1], got {self.mu}")
        if self.t_final < 0.0:
            raise ValueError(f"t_final must be non-negative, got {self.t_final}")

    @property
    def dt(self) -> float:
        return self.mu * self.h / self.a

    @property
    def truncation(self) -> float:
        """Modeled time-independent truncation error C1 (dt + h)."""
        return self.c1 * (self.dt + self.h)

    @property
    def n_final(self) -> float:
        """Number of steps a*T_f/(mu*h) to reach T_f; may be non-integer."""
        return self.a * self.t_final / (self.mu * self.h)


def truncation_error_special(a: float, h: float, dt: float, x1: float, t: float,
                             solution: Callable = u_exact,
                             source: Callable | None = None) -> float:
    """Local truncation error of the boundary-cell scheme at (x1, t).

    Substitutes ``solution`` into the forward-Euler / one-sided-upwind update
    and returns source minus the discrete operator.
    """
    if not (h > 0.0 and dt > 0.0):
        raise ValueError("h and dt must be positive")
    if source is None:
        spec = ProblemSpec(a)
        source = lambda x, tt: forcing(spec, x, tt)  # noqa: E731
    u_now = solution(x1, t)
    discrete = ((solution(x1, t + dt) - u_now) / dt
                + a * (u_now - solution(x1 - h, t)) / h)
    return float(source(x1, t) - discrete)


def recurrence_simulate(params: ErrorModelParams, n_steps: int) -> float:
    """Brute-force e^{n+1} = (1 - mu) e^n + dt E from e^0 = 0."""
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    damp = 1.0 - params.mu
    forcing_term = params.dt * params.truncation
    e = 0.0
    for _ in range(int(n_steps)):
        e = damp * e + forcing_term
    return e


def _history_weight(mu: float, n: float) -> float:
    # 1 - (1 - mu)**n, accurate for small mu and real n
    if n == 0:
        return 0.0
    if mu == 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-mu))


def closed_form(params: ErrorModelParams, n_steps: float) -> float:
    """[dt C1 (dt + h) / mu] (1 - (1 - mu)^n); n may be real."""
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    return params.dt * params.truncation / params.mu * _history_weight(params.mu, n_steps)


def single_step_error(params: ErrorModelParams) -> float:
    """Error after one step, dt C1 (dt + h): first order in h for fixed dt."""
    return params.dt * params.truncation


def exp_factor(a: float, t_final: float, h: float) -> float:
    if not h > 0.0:
        raise ValueError("h must be positive")
    return math.exp(-a * t_final / h)


def expansion_error(params: ErrorModelParams) -> tuple[float, float]:
    """Leading (first-order, second-order) terms of the small-mu expansion.

    first  = (mu C1 T_f / 2) (mu/a + 1) exp(-a T_f/h) h
    second = (C1 / a) (1 - exp(-a T_f/h)) (mu/a + 1) h^2
    """
    a, h, mu, c1 = params.a, params.h, params.mu, params.c1
    decay = exp_factor(a, params.t_final, h)
    first = 0.5 * mu * c1 * params.t_final * (mu / a + 1.0) * decay * h
    second = (c1 / a) * (1.0 - decay) * (mu / a + 1.0) * h * h
    return first, second


@dataclass(frozen=True)
class RemedySchedule:
    """Time step dt = mu h / a with T_f tied to the coarsest level's step."""

    a: float
    mu: float
    h_coarsest: float
    t_final_multiplier: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"CFL number must lie in (0, 1], got {self.mu}")
        if self.t_final_multiplier < 1.0:
            raise ValueError("t_final_multiplier must be at least 1")
        if not (self.a > 0.0 and self.h_coarsest > 0.0):
            raise ValueError("a and h_coarsest must be positive")

    @property
    def t_final(self) -> float:
        return self.t_final_multiplier * self.mu * self.h_coarsest / self.a

    def dt(self, h: float) -> float:
        return self.mu * h / self.a

    def steps(self, level: int) -> int:
        """Steps on level k (h = h_coarsest / 2**k) at multiplier 1."""
        return 2**level

    def factor(self, level: int) -> float:
        """Predicted exp(-a T_f / h) = exp(-n mu m) on level k."""
        return math.exp(-self.steps(level) * self.mu * self.t_final_multiplier)


def remedy_schedule(a: float, mu: float, h_coarsest: float,
                    t_final_multiplier: float = 1.0) -> RemedySchedule:
    return RemedySchedule(a, mu, h_coarsest, t_final_multiplier)


def pitfall_factors(a: float = 1.0, mu: float = 0.01, h_coarsest: float = 0.125,
                    n_levels: int = 6) -> list[tuple[float, float]]:
    """(a T_f / h, exp(-a T_f / h)) with dt = mu h / a and T_f = mu h_c.

    With the defaults this is the refined-small-step experiment whose
    factors stay O(1), so first-order error survives refinement.
    """
    t_final = mu * h_coarsest
    out = []
    for k in range(n_levels):
        h = h_coarsest / 2**k
        out.append((a * t_final / h, exp_factor(a, t_final, h)))
    return out


def remedy_factors(mu: float = 1.0, n_levels: int = 6,
                   t_final_multiplier: float = 1.0) -> list[tuple[int, float]]:
    """(n, exp(-n mu)) for the remedy schedule on levels 0 .. n_levels-1."""
    sched = RemedySchedule(1.0, mu, 1.0, t_final_multiplier)
    return [(sched.steps(k), sched.factor(k)) for k in range(n_levels)]
