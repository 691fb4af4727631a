"""
Dynamical order parameter and the critical field
================================================

The long-time average of <Jz(t)>/j stays finite for weak quenches and
vanishes beyond the critical field, which approaches h = 0.5 for gamma = 0
and h0 = 0 as j grows.
"""

import numpy as np

from lmg_asymmetry.criticality import critical_point, order_parameter_curve
from lmg_asymmetry.dynamics import TimeGrid

hs = np.linspace(0.3, 0.7, 41)
grid = TimeGrid(t_max=200.0, n_samples=2001)
for j in (25, 50, 100):
    curve = order_parameter_curve(hs, j, gamma=0.0, h0=0.0, grid=grid)
    thr = critical_point(curve, "threshold_crossing", 0.1)
    slope = critical_point(curve, "max_neg_slope")
    print(f"j={j:>3}: h*(threshold)={thr.h_star:.4f}  h*(steepest drop)={slope.h_star:.4f}")
    print("        <Jz>/j:", np.round(curve.normalized[::5], 3))
