"""
Asymmetry of the evolving state
===============================

F_L(rho) = ||[rho, L]||_1. For pure states this is twice the standard
deviation of L, which is what the trajectories use. After the quench F_Jz
grows from zero and settles on a plateau.
"""

import numpy as np

from lmg_asymmetry.asymmetry import asymmetry_general, asymmetry_pure, asymmetry_series, generator
from lmg_asymmetry.dynamics import QuenchProtocol, TimeGrid, evolve

# a small example: |+x> under Jz for spin 1/2 gives exactly 1
plus = np.array([1.0, 1.0]) / np.sqrt(2)
print("F_Jz(|+x>) =", asymmetry_pure(plus, generator("z", 0.5)),
      "general path", asymmetry_general(np.outer(plus, plus), generator("z", 0.5)))

q = QuenchProtocol.field_quench(100, gamma=0.2, h0=0.0, h=0.8)
traj = evolve(q, TimeGrid())  # t in [0, 200], 4001 samples
for axis in "xyz":
    rec = asymmetry_series(traj, axis)
    early = rec.series[:: 400][:6]
    print(f"F_J{axis}: t=0,20,..,100 ->", np.round(early, 2),
          f"time average {rec.time_average:.3f} converged={rec.converged}")
