import numpy as np
import pytest

from nmheom import (
    BathModel,
    CouplingOperator,
    NumericalDivergenceError,
    PropagatorConfig,
    Statistics,
    closed_form_G,
    propagate,
    propagate_rwa,
    solve_F,
    solve_rwa,
)

from conftest import EPSILON, fig_bath, excited_projector, random_density_matrix

OMEGA = 0.07745966692414835  # sqrt(lam^2 - 2*gamma0*lam) = sqrt(0.006)
G_AT_50 = 0.6503045482820805  # exp(-2.5)*(cosh(Omega*25) + (lam/Omega)*sinh(Omega*25))


def default_grid(dt=0.005, t_final=50.0):
    return np.arange(int(round(t_final / dt)) + 1) * dt


class TestSolveF:
    def test_decoupled_bath_gives_zero(self):
        f = solve_F(fig_bath(gamma0=0.0), default_grid())
        assert np.all(f == 0.0)

    def test_matches_closed_form_at_zero_detuning(self, bath):
        t = default_grid()
        f = solve_F(bath, t)
        # tanh form with arctanh(lam/Omega) continued to the coth branch
        closed = 0.5 * (bath.lam - OMEGA / np.tanh(0.5 * OMEGA * t + np.arctanh(OMEGA / bath.lam)))
        closed[0] = 0.0  # coth(arctanh(x)) -> 1/x limit handled exactly
        assert np.max(np.abs(f - closed)) < 1e-9

    def test_long_time_limit(self, bath):
        f = solve_F(bath, default_grid(t_final=400.0, dt=0.01))
        assert f[-1].real == pytest.approx(0.5 * (bath.lam - OMEGA), abs=1e-10)
        assert abs(f[-1].imag) < 1e-12

    def test_riccati_pole_raises(self):
        strong = BathModel(epsilon=2.0, lam=0.1, gamma0=1.0)
        with pytest.raises(NumericalDivergenceError, match="Riccati"):
            solve_F(strong, default_grid(t_final=200.0, dt=0.01))

    def test_rejects_nonuniform_grid(self, bath):
        with pytest.raises(ValueError):
            solve_F(bath, np.array([0.0, 0.1, 0.3]))


class TestClosedFormG:
    def test_starts_at_one(self, bath):
        assert closed_form_G(bath, 0.0) == 1.0

    def test_frozen_value_at_fifty(self, bath):
        assert closed_form_G(bath, 50.0) == pytest.approx(G_AT_50, abs=1e-15)

    def test_initial_slope_vanishes(self, bath):
        # dG/dt|0 = -F(0) G(0) = 0
        h = 1e-6
        slope = (closed_form_G(bath, h) - closed_form_G(bath, 0.0)) / h
        assert abs(slope) < 1e-5

    def test_consistent_with_integrated_F(self, bath):
        sol = solve_rwa(None, bath, default_grid())
        g_from_f = np.exp(-sol.decay_integral.real)
        assert np.max(np.abs(g_from_f - closed_form_G(bath, sol.times))) < 1e-7

    def test_requires_zero_detuning(self):
        with pytest.raises(ValueError):
            closed_form_G(fig_bath(delta=0.1), 1.0)

    def test_trigonometric_continuation(self):
        strong = BathModel(epsilon=2.0, lam=0.1, gamma0=0.2)
        t = np.linspace(0.0, 5.0, 11)
        g = closed_form_G(strong, t)
        assert g[0] == 1.0
        assert np.all(np.isfinite(g))
        sol = solve_rwa(None, strong, default_grid(t_final=5.0))
        assert sol.omega_regime == "trigonometric"

    def test_hyperbolic_regime_flag(self, bath):
        sol = solve_rwa(None, bath, default_grid(t_final=1.0))
        assert sol.omega_regime == "hyperbolic"


class TestPropagateRwa:
    def test_ground_state_is_fixed_point(self, bath):
        ground = np.diag([0.0, 1.0]).astype(complex)
        traj = propagate_rwa(ground, bath, default_grid())
        assert np.max(np.abs(traj.states - ground)) < 1e-12

    def test_population_decays_as_G_squared(self, bath):
        traj = propagate_rwa(excited_projector(), bath, default_grid())
        g = closed_form_G(bath, traj.times)
        assert np.max(np.abs(traj.rho_ee - g**2)) < 1e-9
        assert np.max(np.abs((1.0 - traj.rho_ee) - (1.0 - g**2))) < 1e-9

    def test_coherence_magnitude_follows_half_G(self, bath):
        plus = 0.5 * np.ones((2, 2), dtype=complex)
        traj = propagate_rwa(plus, bath, default_grid())
        g = closed_form_G(bath, traj.times)
        assert np.max(np.abs(np.abs(traj.rho_eg) - 0.5 * g)) < 1e-9
        assert np.max(np.abs(traj.rho_eg)) <= 0.5 + 1e-12

    def test_trace_preserved(self, bath):
        rng = np.random.default_rng(41)
        traj = propagate_rwa(random_density_matrix(rng), fig_bath(delta=0.8), default_grid())
        traces = traj.states[:, 0, 0] + traj.states[:, 1, 1]
        assert np.max(np.abs(traces - 1.0)) < 1e-12


class TestHeomEquivalence:
    @pytest.mark.parametrize("statistics", [Statistics.BOSE, Statistics.FERMI])
    @pytest.mark.parametrize("delta", [0.0, 0.5, 1.0])
    def test_oracle_matches_hierarchy_pointwise(self, statistics, delta):
        bath = fig_bath(delta=delta, statistics=statistics)
        cfg = PropagatorConfig(dt=0.005, t_final=50.0)
        rng = np.random.default_rng(43)
        rho0 = random_density_matrix(rng)
        heom_traj = propagate(rho0, bath, CouplingOperator(0.0), EPSILON, cfg)
        oracle = propagate_rwa(rho0, bath, heom_traj.times)
        assert np.max(np.abs(heom_traj.states - oracle.states)) < 1e-6
