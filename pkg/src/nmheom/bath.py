"""Lorentzian environment model and its exponential correlation function.

The environment enters the dynamics only through the correlation function
``C(t) = alpha * exp(-beta * t)`` with ``alpha = gamma0 * lam / 2`` and
``beta = lam + 1j * (epsilon - delta)``; the microscopic mode frequencies
and couplings are never materialized.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Statistics(enum.Enum):
    """Exchange statistics of the environmental modes."""

    BOSE = "bose"
    FERMI = "fermi"


@dataclass(frozen=True)
class BathModel:
    """Zero-temperature Lorentzian bath configuration.

    Parameters
    ----------
    epsilon : float
        Qubit transition frequency (inverse time units).
    lam : float
        Spectral width of the Lorentzian, > 0.
    gamma0 : float
        System-bath coupling strength, >= 0.
    delta : float
        Detuning of the spectral peak from the qubit frequency.
    statistics : Statistics
        Bose or Fermi exchange statistics of the modes.
    """

    epsilon: float
    lam: float = 0.1
    gamma0: float = 0.02
    delta: float = 0.0
    statistics: Statistics = Statistics.BOSE

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.gamma0 < 0:
            raise ValueError(f"gamma0 must be non-negative, got {self.gamma0}")
        if not isinstance(self.statistics, Statistics):
            object.__setattr__(self, "statistics", Statistics(self.statistics))

    @property
    def alpha(self) -> float:
        """Amplitude of the exponential correlation function."""
        return 0.5 * self.gamma0 * self.lam

    @property
    def beta(self) -> complex:
        """Complex decay rate of the correlation function; Re(beta) > 0."""
        return self.lam + 1j * (self.epsilon - self.delta)

    def correlation(self, t):
        """Bath correlation function ``alpha * exp(-beta * t)`` for t >= 0."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("correlation is defined for t >= 0")
        out = self.alpha * np.exp(-self.beta * t)
        return complex(out) if out.ndim == 0 else out

    def spectral_density(self, omega):
        """Lorentzian spectral density of width ``lam`` peaked at ``epsilon - delta``."""
        omega = np.asarray(omega, dtype=float)
        out = (self.gamma0 * self.lam**2 / (2.0 * np.pi)) / (
            (omega - self.epsilon + self.delta) ** 2 + self.lam**2
        )
        return float(out) if out.ndim == 0 else out
