"""Exact excitation-conserving (chi = 0) dynamics, used as the HEOM oracle.

The memory kernel collapses to a single scalar function F(t) obeying the
Riccati equation

    dF/dt = F^2 - (lam - 1j*delta) * F + gamma0*lam/2,   F(0) = 0,

after the free phase exp(-1j*epsilon*t) of the correlation function is
absorbed into the interaction picture.  The reduced state then follows the
time-local master equation

    drho/dt = -1j*epsilon/2 [sz, rho]
              + F(t)  (sm rho sp - sp sm rho)
              + F*(t) (sm rho sp - rho sp sm),

whose population decays as G(t)^2 with G = exp(-Integral F).  At zero
detuning G has the closed hyperbolic form implemented by
:func:`closed_form_G`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bath import BathModel
from .errors import NumericalDivergenceError
from .heom import Trajectory
from .operators import SIGMA_MINUS, SIGMA_PLUS, check_density_matrix

#: guard against the Riccati pole outside the validated parameter regime
F_LIMIT = 1e6


@dataclass
class RwaSolution:
    """Joint record of the scalar kernel and the reduced state evolution."""

    times: np.ndarray
    F_values: np.ndarray
    decay_integral: np.ndarray
    states: np.ndarray | None
    omega_regime: str  # "hyperbolic" for real Omega, "trigonometric" otherwise

    @property
    def trajectory(self) -> Trajectory:
        if self.states is None:
            raise ValueError("solution was computed without a state")
        return Trajectory(times=self.times, states=self.states)


def _check_grid(t_grid: np.ndarray) -> float:
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2:
        raise ValueError("t_grid must be a 1-d grid with at least two points")
    if t_grid[0] != 0.0:
        raise ValueError("t_grid must start at 0")
    steps = np.diff(t_grid)
    if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-12:
        raise ValueError("t_grid must be uniform and ascending")
    return float(steps[0])


def omega_regime(bath: BathModel) -> str:
    return "hyperbolic" if bath.lam >= 2.0 * bath.gamma0 else "trigonometric"


def solve_rwa(
    rho0: np.ndarray | None,
    bath: BathModel,
    t_grid: np.ndarray,
) -> RwaSolution:
    """RK4 integration of the joint system (F, Integral F, rho) on the grid.

    ``rho0=None`` solves the scalar part only.  Blows up with
    :class:`NumericalDivergenceError` if |F| crosses the Riccati-pole guard.
    """
    dt = _check_grid(t_grid)
    t_grid = np.asarray(t_grid, dtype=float)
    n = t_grid.size - 1
    a = 0.5 * bath.gamma0 * bath.lam
    c = bath.lam - 1j * bath.delta
    eps = bath.epsilon

    sm, sp = SIGMA_MINUS, SIGMA_PLUS
    sp_sm = sp @ sm
    hphase = -1j * 0.5 * eps * np.array([[0.0, 2.0], [-2.0, 0.0]])  # -i[H,.] factor

    with_state = rho0 is not None
    if with_state:
        rho = check_density_matrix(rho0).astype(complex)

    def f_rhs(F):
        return F * F - c * F + a

    def rho_rhs(F, r):
        sandwich = sm @ r @ sp
        return (
            hphase * r
            + F * (sandwich - sp_sm @ r)
            + np.conj(F) * (sandwich - r @ sp_sm)
        )

    F = 0.0 + 0.0j
    I = 0.0 + 0.0j
    Fs = np.empty(n + 1, dtype=complex)
    Is = np.empty(n + 1, dtype=complex)
    Fs[0], Is[0] = F, I
    states = None
    if with_state:
        states = np.empty((n + 1, 2, 2), dtype=complex)
        states[0] = rho

    for i in range(1, n + 1):
        k1F = f_rhs(F)
        F2 = F + 0.5 * dt * k1F
        k2F = f_rhs(F2)
        F3 = F + 0.5 * dt * k2F
        k3F = f_rhs(F3)
        F4 = F + dt * k3F
        k4F = f_rhs(F4)
        if with_state:
            k1r = rho_rhs(F, rho)
            k2r = rho_rhs(F2, rho + 0.5 * dt * k1r)
            k3r = rho_rhs(F3, rho + 0.5 * dt * k2r)
            k4r = rho_rhs(F4, rho + dt * k3r)
            rho = rho + (dt / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
            states[i] = rho
        I = I + (dt / 6.0) * (F + 2.0 * F2 + 2.0 * F3 + F4)
        F = F + (dt / 6.0) * (k1F + 2.0 * k2F + 2.0 * k3F + k4F)
        if not np.isfinite(F) or abs(F) > F_LIMIT:
            raise NumericalDivergenceError(
                f"|F| exceeded {F_LIMIT:.0e} at t={t_grid[i]:.4g}: Riccati pole "
                "(outside the validated parameter regime)"
            )
        Fs[i], Is[i] = F, I

    return RwaSolution(
        times=t_grid,
        F_values=Fs,
        decay_integral=Is,
        states=states,
        omega_regime=omega_regime(bath),
    )


def solve_F(bath: BathModel, t_grid: np.ndarray) -> np.ndarray:
    """Samples of the scalar kernel F(t) on the grid (RK4, F(0) = 0)."""
    return solve_rwa(None, bath, t_grid).F_values


def closed_form_G(bath: BathModel, t) -> np.ndarray | float:
    """Closed-form decay factor at zero detuning, G = exp(-Integral F).

    For Omega^2 = lam^2 - 2*gamma0*lam >= 0 (the validated regime),

        G(t) = exp(-lam*t/2) * [cosh(Omega*t/2) + (lam/Omega) sinh(Omega*t/2)];

    for Omega^2 < 0 the expression continues analytically to cos/sin.
    """
    if bath.delta != 0.0:
        raise ValueError("closed-form decay factor requires zero detuning")
    t = np.asarray(t, dtype=float)
    lam = bath.lam
    om_sq = lam * lam - 2.0 * bath.gamma0 * lam
    envelope = np.exp(-0.5 * lam * t)
    if om_sq > 0:
        om = np.sqrt(om_sq)
        out = envelope * (np.cosh(0.5 * om * t) + (lam / om) * np.sinh(0.5 * om * t))
    elif om_sq < 0:
        om = np.sqrt(-om_sq)
        out = envelope * (np.cos(0.5 * om * t) + (lam / om) * np.sin(0.5 * om * t))
    else:
        out = envelope * (1.0 + 0.5 * lam * t)
    return float(out) if out.ndim == 0 else out


def propagate_rwa(
    rho0: np.ndarray,
    bath: BathModel,
    t_grid: np.ndarray,
) -> Trajectory:
    """Reduced-state evolution under the exact chi = 0 master equation."""
    return solve_rwa(rho0, bath, t_grid).trajectory
