import math

import numpy as np
import pytest
from scipy.linalg import expm

from loopgate import (
    BRANCHES,
    Circular,
    FockSpace,
    HamiltonianTier,
    PiecewiseConstant,
    PulseSpec,
    Trajectory,
    alpha_trajectory,
    hamiltonian_rwa,
    loop_closure_residual,
    propagate_displacement,
    propagate_numeric,
    sigma_x_basis_change,
    vacuum,
)
from loopgate.evolve import propagate_states


def circle_phase(g0, nu, loops, lam=2):
    """Closed-form loop phase: loops * 2*pi * lam^2 * g0^2 / (4 nu^2)."""
    return loops * 2 * math.pi * lam**2 * g0**2 / (4 * nu**2)


class TestNumericPropagator:
    def test_zero_drive_identity(self, zero_pulse):
        prop = propagate_numeric(
            HamiltonianTier.RWA_EFFECTIVE, zero_pulse, FockSpace(4), 0.0, zero_pulse.T, 0.1
        )
        assert np.abs(prop.unitary - np.eye(16)).max() < 1e-12

    def test_constant_hamiltonian_matches_direct_exponential(self):
        pulse = PulseSpec(
            g_shape=PiecewiseConstant(segments=((2.0, 0.2 + 0.1j),)), T=2.0, r0=0.0
        )
        space = FockSpace(6)
        prop = propagate_numeric(HamiltonianTier.RWA_EFFECTIVE, pulse, space, 0.0, 2.0, 0.05)
        exact = expm(-2j * hamiltonian_rwa(pulse, 1.0, space))
        assert np.abs(prop.unitary - exact).max() < 1e-10

    def test_result_unitary(self, standard_pulse):
        space = FockSpace(8)
        prop = propagate_numeric(
            HamiltonianTier.ROTATING_FRAME,
            PulseSpec(standard_pulse.g_shape, T=standard_pulse.T, r0=1.0),
            space,
            0.0,
            3.0,
            0.01,
        )
        defect = np.abs(prop.unitary.conj().T @ prop.unitary - np.eye(32)).max()
        assert defect < 1e-10

    def test_second_order_convergence(self):
        pulse = PulseSpec(g_shape=Circular(g0=0.2, nu=0.7, phase0=0.3), T=4.0, r0=1.0)
        space = FockSpace(6)

        def run(dt):
            return propagate_numeric(
                HamiltonianTier.ROTATING_FRAME, pulse, space, 0.0, 2.0, dt
            ).unitary

        reference = run(0.05 / 8)
        err_coarse = np.abs(run(0.05) - reference).max()
        err_fine = np.abs(run(0.025) - reference).max()
        assert err_coarse / err_fine >= 3.0

    def test_rejects_bad_window(self, standard_pulse):
        with pytest.raises(ValueError):
            propagate_numeric(
                HamiltonianTier.RWA_EFFECTIVE, standard_pulse, FockSpace(4), 2.0, 1.0, 0.1
            )

    def test_states_path_diverging_step_is_caught(self):
        from loopgate import NonUnitaryResultError

        pulse = PulseSpec(g_shape=PiecewiseConstant(segments=((3.0, 5.0),)), T=3.0)
        space = FockSpace(8)
        start = np.eye(32, 1, dtype=complex)
        with pytest.raises(NonUnitaryResultError):
            propagate_states(HamiltonianTier.RWA_EFFECTIVE, pulse, space, start, 0.0, 3.0, 3.0)

    def test_states_path_matches_full_unitary(self, standard_pulse):
        space = FockSpace(8)
        dt = standard_pulse.T / 200
        prop = propagate_numeric(
            HamiltonianTier.RWA_EFFECTIVE, standard_pulse, space, 0.0, standard_pulse.T, dt
        )
        columns = np.kron(sigma_x_basis_change(), vacuum(space).reshape(-1, 1))
        final = propagate_states(
            HamiltonianTier.RWA_EFFECTIVE, standard_pulse, space, columns, 0.0, standard_pulse.T, dt
        )
        assert np.abs(final - prop.unitary @ columns).max() < 1e-12


class TestDisplacementEngine:
    def test_lambda_zero_branches_exact(self, standard_pulse):
        for branch in ("+-", "-+"):
            result = propagate_displacement(standard_pulse, branch, 1000)
            assert result.phase == 0.0
            assert result.residual_displacement == 0j

    def test_circle_phase(self, standard_pulse):
        result = propagate_displacement(standard_pulse, "++", 100_000)
        assert result.phase == pytest.approx(circle_phase(0.1, 0.2, 1), abs=1e-6)
        assert result.phase == pytest.approx(math.pi / 2, abs=1e-6)
        assert abs(result.residual_displacement) < 1e-12

    @pytest.mark.parametrize("g0,nu,loops", [(0.05, 0.1, 1), (0.2, 0.5, 2), (0.15, -0.3, 1)])
    def test_circle_phase_family(self, g0, nu, loops):
        pulse = PulseSpec(
            g_shape=Circular(g0=g0, nu=nu), T=loops * 2 * math.pi / abs(nu)
        )
        expected = math.copysign(circle_phase(g0, nu, loops), nu)
        result = propagate_displacement(pulse, "++", 100_000)
        assert result.phase == pytest.approx(expected, rel=1e-6)

    def test_direction_reversal_negates_phase_and_area(self, standard_pulse):
        reversed_pulse = PulseSpec(
            g_shape=Circular(g0=0.1, nu=-0.2, phase0=0.0), T=standard_pulse.T
        )
        forward = propagate_displacement(standard_pulse, "++", 50_000)
        backward = propagate_displacement(reversed_pulse, "++", 50_000)
        assert backward.phase == pytest.approx(-forward.phase, abs=1e-9)
        # cross-check orientation against the signed shoelace area
        from loopgate import enclosed_area

        area_fwd = enclosed_area(alpha_trajectory(standard_pulse, "++", 50_001))
        area_bwd = enclosed_area(alpha_trajectory(reversed_pulse, "++", 50_001))
        assert forward.phase == pytest.approx(2 * area_fwd, rel=1e-6)
        assert area_bwd == pytest.approx(-area_fwd, rel=1e-9)

    def test_outer_branches_agree(self, standard_pulse):
        plus = propagate_displacement(standard_pulse, "++", 20_000)
        minus = propagate_displacement(standard_pulse, "--", 20_000)
        assert minus.phase == pytest.approx(plus.phase, abs=1e-9)


class TestTrajectory:
    def test_lambda_zero_is_flat(self, standard_pulse):
        traj = alpha_trajectory(standard_pulse, "-+", 101)
        assert np.abs(traj.alphas).max() == 0.0

    def test_circle_against_closed_form(self, standard_pulse):
        # integrating conj(g) for the circular drive: alpha(t) = -(g0/nu)(e^{i nu t} - 1);
        # trapezoid bias is (nu*h)^2/12 relative, so this grid sits below 1e-9
        traj = alpha_trajectory(standard_pulse, "++", 65537)
        expected = -(0.1 / 0.2) * (np.exp(1j * 0.2 * traj.times) - 1.0)
        np.testing.assert_allclose(traj.alphas, expected, atol=1e-8)

    def test_starts_at_zero_and_spans_cycle(self, standard_pulse):
        traj = alpha_trajectory(standard_pulse, "--", 33)
        assert traj.alphas[0] == 0
        assert traj.times[0] == 0.0
        assert traj.times[-1] == standard_pulse.T

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            Trajectory(times=np.array([0.0, 1.0]), alphas=np.array([1.0 + 0j, 0.0]), branch="++")
        with pytest.raises(ValueError):
            Trajectory(times=np.array([0.5, 1.0]), alphas=np.array([0.0j, 0.0]), branch="++")


class TestLoopClosure:
    def test_closed_circle(self, standard_pulse):
        assert loop_closure_residual(standard_pulse, "++") < 1e-8

    def test_three_quarter_loops(self):
        # |alpha(T)| = (g0/nu)|e^{i 1.5 * 2pi} - 1| = 2 g0/nu
        pulse = PulseSpec(g_shape=Circular(g0=0.1, nu=0.2), T=1.5 * 2 * math.pi / 0.2)
        assert loop_closure_residual(pulse, "++") == pytest.approx(2 * 0.1 / 0.2, rel=1e-6)

    def test_zero_drive(self, zero_pulse):
        assert loop_closure_residual(zero_pulse, "++") == 0.0
        assert loop_closure_residual(zero_pulse, "+-") == 0.0


class TestEngineAgreement:
    def test_numeric_phase_matches_analytic(self, standard_pulse):
        space = FockSpace(16)
        dt = standard_pulse.T / 800
        prop = propagate_numeric(
            HamiltonianTier.RWA_EFFECTIVE, standard_pulse, space, 0.0, standard_pulse.T, dt
        )
        columns = np.kron(sigma_x_basis_change(), vacuum(space).reshape(-1, 1))
        finals = prop.unitary @ columns
        matrix = columns.conj().T @ finals
        for idx, branch in enumerate(BRANCHES):
            analytic = propagate_displacement(standard_pulse, branch, 200_000)
            entry = matrix[idx, idx]
            assert abs(entry) > 1 - 1e-4
            assert math.remainder(np.angle(entry) - analytic.phase, 2 * math.pi) == pytest.approx(
                0.0, abs=1e-4
            )
            # cavity reduced state returns to vacuum on every branch
            amplitudes = finals[:, idx].reshape(4, space.dim)
            vacuum_population = float(np.sum(np.abs(amplitudes[:, 0]) ** 2))
            assert vacuum_population > 1 - 1e-4

    def test_square_loop_piecewise(self):
        # four equal-duration segments tracing a square in phase space
        segments = ((1.0, 0.2), (1.0, 0.2j), (1.0, -0.2), (1.0, -0.2j))
        pulse = PulseSpec(g_shape=PiecewiseConstant(segments=segments), T=4.0)
        space = FockSpace(8)
        columns = np.kron(sigma_x_basis_change(), vacuum(space).reshape(-1, 1))
        finals = propagate_states(
            HamiltonianTier.RWA_EFFECTIVE, pulse, space, columns, 0.0, pulse.T, pulse.T / 4000
        )
        matrix = columns.conj().T @ finals
        for idx, branch in enumerate(BRANCHES):
            analytic = propagate_displacement(pulse, branch, 400_000)
            numeric_phase = float(np.angle(matrix[idx, idx]))
            assert abs(math.remainder(numeric_phase - analytic.phase, 2 * math.pi)) < 1e-4
        # nonzero loop phase: the square has side 0.2 in alpha space
        assert abs(propagate_displacement(pulse, "++", 400_000).phase) == pytest.approx(
            2 * 0.2**2, rel=1e-3
        )
