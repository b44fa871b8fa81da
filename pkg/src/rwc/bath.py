"""Ohmic bosonic bath with exponential cutoff.

Units: hbar = k_B = 1 and the qubit splitting omega_0 = 1, so frequencies,
temperatures and inverse times are all measured in omega_0.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["OhmicBath"]

# beyond this value of omega/T the Bose factor is replaced by exp(-omega/T)
_ASYMPTOTIC_RATIO = 700.0


def _nonnegative(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("frequency must be non-negative")
    return omega


@dataclass(frozen=True)
class OhmicBath:
    """Spectral density ``J(w) = alpha w exp(-w/omega_c)`` at temperature ``T``.

    Parameters
    ----------
    alpha : float
        Dimensionless coupling strength, > 0.
    omega_c : float
        Cutoff frequency in units of omega_0, > 0.
    temperature : float
        Bath temperature in units of omega_0, >= 0.
    """

    alpha: float = 0.05
    omega_c: float = 5.0
    temperature: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "omega_c", "temperature"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, float(value))
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")

    def spectral_density(self, omega):
        omega = _nonnegative(omega)
        return self.alpha * omega * np.exp(-omega / self.omega_c)

    def occupation(self, omega):
        """Bose-Einstein occupation ``1/(exp(w/T) - 1)`` for ``w > 0``."""
        omega = np.asarray(omega, dtype=float)
        if np.any(omega <= 0):
            raise ValueError("occupation requires omega > 0")
        if self.temperature == 0:
            return np.zeros_like(omega)
        x = omega / self.temperature
        big = x > _ASYMPTOTIC_RATIO
        safe = np.where(big, 1.0, x)
        return np.where(big, np.exp(-x), 1.0 / np.expm1(safe))

    def thermal_weight_plus(self, omega):
        """``J(w) [n(w) + 1]``, the emission weight; ``alpha T`` at ``w = 0``."""
        omega = _nonnegative(omega)
        if self.temperature == 0:
            return self.spectral_density(omega)
        # J (n+1) = alpha w exp(-w/wc) / (1 - exp(-w/T))
        x = omega / self.temperature
        pos = omega > 0
        xs = np.where(pos, x, 1.0)
        ratio = np.where(pos, omega / -np.expm1(-xs), self.temperature)
        return self.alpha * ratio * np.exp(-omega / self.omega_c)

    def thermal_weight_minus(self, omega):
        """``J(w) n(w)``, the absorption weight; ``alpha T`` at ``w = 0``."""
        omega = _nonnegative(omega)
        if self.temperature == 0:
            return np.zeros_like(omega)
        x = omega / self.temperature
        pos = omega > 0
        big = x > _ASYMPTOTIC_RATIO
        xs = np.where(pos & ~big, x, 1.0)
        ratio = np.where(pos, omega / np.expm1(xs), self.temperature)
        ratio = np.where(big, omega * np.exp(-np.where(big, x, 0.0)), ratio)
        return self.alpha * ratio * np.exp(-omega / self.omega_c)

    def symmetric_weight(self, omega):
        """``J(w) [2 n(w) + 1]``."""
        return self.thermal_weight_plus(omega) + self.thermal_weight_minus(omega)

    def spectral_function(self, nu):
        """Bath spectral function on the whole real line.

        ``J(nu)(n+1)`` for ``nu > 0`` and ``J(|nu|) n(|nu|)`` for ``nu < 0``;
        continuous at zero.
        """
        nu = np.asarray(nu, dtype=float)
        a = np.abs(nu)
        return np.where(nu >= 0, self.thermal_weight_plus(a), self.thermal_weight_minus(a))
