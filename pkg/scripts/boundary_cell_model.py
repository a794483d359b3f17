"""Boundary-cell error model against a direct simulation of the one-cell scheme.

The cell next to the inflow boundary is advanced with forward Euler and a
one-sided upwind difference whose upstream value is exact. Its error after
the final step is compared with the closed-form model (C1 fitted from the
measured truncation error on the coarsest grid) for three schedules:
single tiny step, refined small steps, and the remedy.
"""

import math

from advverify.analysis import observed_order
from advverify.errmodel import ErrorModelParams, closed_form, truncation_error_special
from advverify.manufactured import ProblemSpec, forcing, u_exact

A = 1.0
H_COARSE = 1 / 8
SPEC = ProblemSpec(A)


def simulate_cell(h, dt, n_steps):
    x1 = h / 2
    u = u_exact(x1, 0.0)
    for n in range(n_steps):
        t = n * dt
        u = u - dt * A * (u - u_exact(x1 - h, t)) / h + dt * forcing(SPEC, x1, t)
    return abs(u - u_exact(x1, n_steps * dt))


def schedules():
    yield "single step dt = 1e-8", lambda h: (1e-8, 1)
    yield "dt = 0.01 h, T_f = 0.01 h_c", lambda h: (0.01 * h, round(H_COARSE / h))
    yield "remedy mu = 0.95, T_f = dt_c", lambda h: (0.95 * h, round(H_COARSE / h))


def main():
    hs = [H_COARSE / 2**k for k in range(6)]
    for title, rule in schedules():
        print(title)
        print(f"{'N':>5} {'measured':>12} {'model':>12} {'order':>6} {'model order':>11}")
        prev = None
        dt0, _ = rule(hs[0])
        c1 = abs(truncation_error_special(A, hs[0], dt0, hs[0] / 2, 0.0)) / (dt0 + hs[0])
        for h in hs:
            dt, n = rule(h)
            measured = simulate_cell(h, dt, n)
            model = closed_form(ErrorModelParams(A, h, A * dt / h, c1), n)
            if prev is None:
                print(f"{round(1 / h):>5} {measured:>12.4e} {model:>12.4e}")
            else:
                print(f"{round(1 / h):>5} {measured:>12.4e} {model:>12.4e} "
                      f"{observed_order(prev[0], measured):>6.3f} "
                      f"{observed_order(prev[1], model):>11.3f}")
            prev = (measured, model)
        print(f"  exp(-a T_f / h) on the finest level: "
              f"{math.exp(-A * rule(hs[-1])[0] * rule(hs[-1])[1] / hs[-1]):.3g}\n")


if __name__ == "__main__":
    main()
