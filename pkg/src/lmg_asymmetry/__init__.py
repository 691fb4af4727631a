"""Asymmetry monotones and dynamical criticality in the quenched LMG model."""

__version__ = "0.1.0"

from .spin import HalfInteger, Spectrum, collective_operators, hermitian_eigendecomposition, trace_norm
from .model import LmgParams, GroundState, build_hamiltonian, parity_operator, ground_state
from .dynamics import QuenchProtocol, TimeGrid, Trajectory, evolve, return_probability, rate_function, expectation_series
from .asymmetry import asymmetry_general, asymmetry_pure, asymmetry_series, time_average
from .thermo import ReferenceState, reference_state, bures_angle, fidelity, s_function, entropy_bound_series
from .criticality import order_parameter, order_parameter_curve, critical_point, phase_map
