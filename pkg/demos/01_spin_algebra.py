"""
Collective spin operators in the Dicke basis
=============================================

Build Jx, Jy, Jz for a given j, check the su(2) algebra, and compare them
against the operators obtained by brute force from N spin-1/2 particles.
"""

import numpy as np

from lmg_asymmetry.spin import HalfInteger, brute_force_symmetric_sector, collective_operators, commutator

# spin quantum numbers are stored as twice their value, so j = 3/2 is exact
j = HalfInteger(3)
print("j =", j, " dimension", j.dim, " m values", j.m_values())

jx, jy, jz = collective_operators(j)
print("Jz =\n", jz.real)

# [Jx, Jy] = i Jz and the Casimir equals j(j+1)
print("closure error:", np.abs(commutator(jx, jy) - 1j * jz).max())
casimir = jx @ jx + jy @ jy + jz @ jz
print("Casimir diagonal:", np.diag(casimir).real, " expected", j.value * (j.value + 1))

# the symmetric sector of N = 6 spins reproduces the j = 3 operators
for axis, op in zip("xyz", collective_operators(HalfInteger(6))):
    err = np.abs(brute_force_symmetric_sector(6, axis) - op).max()
    print(f"N=6 brute force vs Dicke J{axis}: {err:.1e}")
