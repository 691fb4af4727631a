"""
Quench dynamics and the Loschmidt echo
======================================

Prepare the ground state at h0 = 0 and evolve it under the field h. The
return probability L(t) and the rate -ln L(t) / N come straight from the
spectral weights of the initial state.
"""

import numpy as np

from lmg_asymmetry.dynamics import QuenchProtocol, TimeGrid, evolve, expectation_series, rate_function, return_probability
from lmg_asymmetry.spin import HalfInteger, collective_operators

j = HalfInteger(200)
grid = TimeGrid(t_max=20.0, n_samples=401)
jz = collective_operators(j)[2]

for h in (0.3, 0.8):
    traj = evolve(QuenchProtocol.field_quench(j, gamma=0.0, h0=0.0, h=h), grid)
    mz = expectation_series(traj, jz) / j.value
    rate = rate_function(traj)
    print(f"h={h}: <Jz>/j at t=0,5,10,20 ->", np.round(mz[[0, 100, 200, 400]], 4))
    print(f"       max rate {rate[np.isfinite(rate)].max():.4f}, min L(t) {return_probability(traj).min():.3e}")

# norm and energy are checked on every trajectory
print("energy drift:", np.ptp(traj.observables["energy"]))
