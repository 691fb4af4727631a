"""
LMG Hamiltonian and its ground state
====================================

H = -(J/j)(Jz^2 + gamma Jy^2) - 2 h Jx. At zero field the ground state is
doubly degenerate for gamma < 1; the tie-break picks the Jz-polarised one.
"""

import numpy as np

from lmg_asymmetry.model import LmgParams, build_hamiltonian, ground_state, parity_operator
from lmg_asymmetry.spin import HalfInteger, collective_operators, commutator

j = HalfInteger(200)  # j = 100, the size used throughout
_, _, jz = collective_operators(j)

for gamma, h in [(0.2, 0.0), (0.2, 0.3), (0.2, 0.8), (0.8, 0.0)]:
    gs = ground_state(LmgParams(j, gamma, h))
    mz = np.vdot(gs.vector, jz @ gs.vector).real / j.value
    print(f"gamma={gamma} h={h}: E0={gs.energy:.6f} <Jz>/j={mz:+.4f} ({gs.selection_note})")

# the Z2 parity exp(-i pi Jx) commutes with every H
p = LmgParams(j, 0.5, 0.7)
H = build_hamiltonian(p)
print("||[H, Pi]|| =", np.linalg.norm(commutator(H, parity_operator(j))))

# at gamma = 1, [H, Jx] = 0 and the field only shifts levels
jx = collective_operators(j)[0]
print("gamma=1 ||[H, Jx]|| =", np.linalg.norm(commutator(build_hamiltonian(LmgParams(j, 1.0, 0.4)), jx)))
