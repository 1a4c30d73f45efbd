"""
Convergence against the exact junction solution
================================================

A Riemann problem placed across a virtual junction at x = 0. The exact
solution is known, so the L1 error of the relaxation scheme can be measured
while the grid is halved.
"""

import numpy as np

from relaxnet import convergence_study, get_preset

cfg = get_preset("Initial_Condition_Test1")
dx_list = [0.0625 / 2 ** k for k in range(5)]

# every run goes to T = 1 and is compared cell by cell with the sampled exact solution
report = convergence_study(cfg, dx_list, T=1.0)

print(f"{'dx':>10} {'err h (left)':>14} {'order':>7} {'err h (right)':>14} {'order':>7}")
for row in report.convergence:
    ol, orr = row.orders[(1, "u1")], row.orders[(2, "u1")]
    print(f"{row.dx:10.5f} {row.errors[(1, 'u1')]:14.5f} {'-' if ol is None else f'{ol:7.3f}':>7}"
          f" {row.errors[(2, 'u1')]:14.5f} {'-' if orr is None else f'{orr:7.3f}':>7}")

# the scheme is first order; the rarefaction side approaches one slowly
finest = report.convergence[-1]
print("finest-grid orders:", np.round([o for o in finest.orders.values()], 3))
