import numpy as np
import pytest

from lmg_asymmetry.model import LmgParams, build_hamiltonian, ground_state, parity_operator
from lmg_asymmetry.spin import HalfInteger, collective_operators, commutator


def params(twice_j, gamma, h):
    return LmgParams(HalfInteger(twice_j), gamma, h)


class TestParams:
    @pytest.mark.parametrize("gamma", [-0.1, 1.01])
    def test_gamma_range(self, gamma):
        with pytest.raises(ValueError, match="gamma"):
            params(4, gamma, 0.1)

    @pytest.mark.parametrize("J", [0.0, -1.0])
    def test_coupling_sign(self, J):
        with pytest.raises(ValueError, match="coupling"):
            LmgParams(HalfInteger(4), 0.2, 0.1, J=J)


class TestHamiltonian:
    def test_diagonal_case(self):
        h = build_hamiltonian(params(4, 0.0, 0.0))
        m = np.array([2, 1, 0, -1, -2])
        np.testing.assert_allclose(h, np.diag(-(m**2) / 2))

    def test_real_symmetric(self):
        h = build_hamiltonian(params(21, 0.4, 0.7))
        assert np.abs(h.imag).max() == 0
        np.testing.assert_array_equal(h, h.T)

    @pytest.mark.parametrize("h", [0.0, 0.3, 1.7])
    def test_isotropic_conserves_jx(self, h):
        H = build_hamiltonian(params(40, 1.0, h))
        jx = collective_operators(20)[0]
        assert np.linalg.norm(commutator(H, jx)) < 1e-12 * np.linalg.norm(H) * np.linalg.norm(jx)

    @pytest.mark.parametrize("twice_j,gamma,h", [(1, 0.3, 0.2), (10, 0.0, 0.9), (31, 0.7, 0.4), (200, 0.2, 0.8)])
    def test_parity_symmetry(self, twice_j, gamma, h):
        H = build_hamiltonian(params(twice_j, gamma, h))
        P = parity_operator(HalfInteger(twice_j))
        assert np.linalg.norm(commutator(H, P)) < 1e-10 * max(np.linalg.norm(H), 1)
        assert np.abs(P @ H @ P.conj().T - H).max() < 1e-10


class TestParity:
    def test_spin_half(self):
        P = parity_operator(0.5)
        np.testing.assert_allclose(P, -1j * np.array([[0, 1], [1, 0]]), atol=1e-15)

    @pytest.mark.parametrize("j", [0.5, 1, 3.5, 10])
    def test_conjugation(self, j):
        P = parity_operator(j)
        jx, jy, jz = collective_operators(j)
        d = jx.shape[0]
        assert np.abs(P.conj().T @ P - np.eye(d)).max() < 1e-10
        assert np.abs(P @ jz @ P.conj().T + jz).max() < 1e-10
        assert np.abs(P @ jy @ P.conj().T + jy).max() < 1e-10
        assert np.abs(P @ jx @ P.conj().T - jx).max() < 1e-10


class TestGroundState:
    def test_anisotropic_zero_field_max_jz(self):
        gs = ground_state(params(200, 0.0, 0.0), "max_jz")
        jx, jy, jz = collective_operators(100)
        v = gs.vector
        assert gs.degenerate
        assert np.vdot(v, jz @ v).real == pytest.approx(100, abs=1e-9)
        assert abs(np.vdot(v, jy @ v)) < 1e-12

    def test_isotropic_zero_field_is_unique(self):
        # -(1/j)(C - Jx^2): minimum at m_x = 0, energy -(j + 1)
        gs = ground_state(params(200, 1.0, 0.0), "max_jx")
        assert not gs.degenerate
        assert gs.energy == pytest.approx(-101, abs=1e-9)

    def test_isotropic_level_crossing_max_jx(self):
        # E(m_x) = -(j + 1) + m_x^2 / j - 2 h m_x; m_x = 0 and 1 cross at h j = 1/2
        gs = ground_state(params(200, 1.0, 0.005), "max_jx")
        jx = collective_operators(100)[0]
        assert gs.degenerate
        assert np.vdot(gs.vector, jx @ gs.vector).real == pytest.approx(1, abs=1e-9)

    def test_unique_ground_state_residual(self):
        p = params(100, 0.2, 0.3)
        gs = ground_state(p, "max_jz")
        H = build_hamiltonian(p)
        assert np.linalg.norm(H @ gs.vector - gs.energy * gs.vector) < 1e-9 * np.linalg.norm(H, 2)
        assert np.linalg.norm(gs.vector) == pytest.approx(1, abs=1e-12)

    def test_tiebreak_ignored_when_unique(self):
        p = params(20, 0.5, 1.5)
        a, b = ground_state(p, "max_jz"), ground_state(p, "raw")
        assert not a.degenerate
        assert abs(np.vdot(a.vector, b.vector)) == pytest.approx(1, abs=1e-12)

    def test_raw_tiebreak_returns_solver_vector(self):
        gs = ground_state(params(20, 0.0, 0.0), "raw")
        assert gs.degenerate
        assert "solver" in gs.selection_note

    def test_energy_monotone_bound_in_field(self):
        # E0(h2) <= E0(h1) + 2 (h2 - h1) j for h2 > h1
        hs = np.linspace(0, 1.5, 16)
        for gamma in (0.0, 0.5, 1.0):
            e = [ground_state(params(40, gamma, h), "raw").energy for h in hs]
            for k in range(len(hs) - 1):
                assert e[k + 1] <= e[k] + 2 * (hs[k + 1] - hs[k]) * 20 + 1e-9

    def test_bad_tiebreak(self):
        with pytest.raises(ValueError):
            ground_state(params(4, 0.1, 0.1), "max_jy")
