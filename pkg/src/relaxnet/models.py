"""Physical models: shallow water and 1-D arterial blood flow.

Both models share one interface. States are passed as the pair of conserved
components ``(u1, u2)`` where ``u1`` is the water height ``h`` (or vessel
section ``a``) and ``u2`` the discharge. Every method accepts scalars or numpy
arrays and broadcasts.

The per-cell reference datum ``ref`` is the bottom elevation ``z`` for shallow
water and the reference section ``a0`` for blood flow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DRY_THRESHOLD = 1e-12


class ConfigurationError(ValueError):
    """Invalid physical parameters."""


def velocity(u1, u2):
    """Return ``u2 / u1``, defined as 0 where ``u1`` is below the dry threshold."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    wet = u1 > DRY_THRESHOLD
    return np.where(wet, u2 / np.where(wet, u1, 1.0), 0.0)


def _check_nonnegative(u1):
    if np.any(np.asarray(u1) < 0):
        raise ValueError("negative height/section passed to the model")


@dataclass(frozen=True)
class ShallowWater:
    """Saint-Venant equations on a rectangular canal."""

    g: float = 9.81

    kind = "shallow_water"
    u1_name = "h"
    ref_name = "z"

    def __post_init__(self):
        if not self.g > 0:
            raise ConfigurationError("gravity must be positive")

    def flux(self, u1, u2, ref=0.0):
        _check_nonnegative(u1)
        v = velocity(u1, u2)
        return np.asarray(u2, dtype=float) * 1.0, u2 * v + self.pressure_flux(u1, ref)

    def pressure_flux(self, u1, ref=0.0):
        """Hydrostatic part of the momentum flux, ``g h^2 / 2``."""
        u1 = np.asarray(u1, dtype=float)
        return 0.5 * self.g * u1 * u1

    def wave_speed(self, u1, ref=0.0):
        return np.sqrt(self.g * np.maximum(np.asarray(u1, dtype=float), 0.0))

    def eigenvalues(self, u1, u2, ref=0.0):
        v = velocity(u1, u2)
        c = self.wave_speed(u1, ref)
        return v - c, v + c

    def max_speed(self, u1, u2, ref=0.0):
        return np.abs(velocity(u1, u2)) + self.wave_speed(u1, ref)

    def jacobian(self, u1, u2, ref=0.0):
        v = float(velocity(u1, u2))
        return np.array([[0.0, 1.0], [-v * v + self.g * float(u1), 2.0 * v]])

    def froude(self, u1, u2, ref=0.0):
        c = self.wave_speed(u1, ref)
        v = np.abs(velocity(u1, u2))
        return np.where(c > 0, v / np.where(c > 0, c, 1.0), 0.0)

    def pressure(self, u1, ref=0.0):
        return self.pressure_flux(u1, ref)

    def junction_level(self, u1, ref=0.0):
        """Quantity equalised by pressure continuity at a junction: ``g (h + z)``.

        On a bottom that is continuous at the junction this is equivalent to
        equal heights, i.e. equal hydrostatic pressure.
        """
        return self.g * (np.asarray(u1, dtype=float) + ref)

    def energy_head(self, u1, u2, ref=0.0):
        v = velocity(u1, u2)
        return self.g * (np.asarray(u1, dtype=float) + ref) + 0.5 * v * v

    def friction_source(self, u1, u2, ref=0.0):
        z = np.zeros_like(np.asarray(u2, dtype=float))
        return z, z.copy()

    def entropy_pair(self, u1, u2, ref=0.0):
        """Entropy and entropy flux, corrected for the bottom topography."""
        h = np.asarray(u1, dtype=float)
        q = np.asarray(u2, dtype=float)
        v = velocity(h, q)
        kinetic = 0.5 * h * v * v
        eta = kinetic + 0.5 * self.g * h * h + self.g * h * ref
        flux = (kinetic + self.g * h * h) * v + self.g * q * ref
        return eta, flux


@dataclass(frozen=True)
class BloodFlow:
    """One-dimensional blood flow with the square-root tube law.

    Parameters
    ----------
    rho : float
        Blood density.
    beta : float
        Wall stiffness in ``p(a) = beta (sqrt(a/a0) - 1)``.
    alpha : float
        Momentum-flux correction coefficient (>= 1).
    nu : float
        Kinematic viscosity; must be zero when ``alpha == 1``.
    literal_kappa : bool
        Use ``kappa = beta / (3 sqrt(a0))`` in the entropy instead of the
        dimensionally consistent ``beta / (3 rho sqrt(a0))``.
    """

    rho: float = 1060.0
    beta: float = 1.0e8
    alpha: float = 1.0
    nu: float = 0.0
    literal_kappa: bool = False

    kind = "blood_flow"
    u1_name = "a"
    ref_name = "a0"

    def __post_init__(self):
        if not (self.rho > 0 and self.beta > 0):
            raise ConfigurationError("rho and beta must be positive")
        if self.alpha < 1:
            raise ConfigurationError("alpha must be >= 1")
        if self.nu < 0:
            raise ConfigurationError("nu must be non-negative")
        if self.alpha == 1 and self.nu != 0:
            raise ConfigurationError("friction requires alpha > 1 (coefficient is singular at alpha = 1)")

    def pi(self, a, a0):
        """Integrated pressure ``pi(a) = (beta/3) (sqrt(a^3/a0) - a0)``."""
        a = np.asarray(a, dtype=float)
        return self.beta / 3.0 * (a * np.sqrt(a) / np.sqrt(a0) - a0)

    def dpi(self, a, a0):
        return 0.5 * self.beta * np.sqrt(np.asarray(a, dtype=float) / a0)

    def pressure_flux(self, u1, ref):
        return self.pi(u1, ref) / self.rho

    def flux(self, u1, u2, ref):
        _check_nonnegative(u1)
        v = velocity(u1, u2)
        return np.asarray(u2, dtype=float) * 1.0, self.alpha * u2 * v + self.pressure_flux(u1, ref)

    def wave_speed(self, u1, ref):
        """Moens-Korteweg speed ``sqrt(pi'(a) / rho)``."""
        return np.sqrt(self.dpi(np.maximum(u1, 0.0), ref) / self.rho)

    def eigenvalues(self, u1, u2, ref):
        v = velocity(u1, u2)
        radicand = self.alpha * (self.alpha - 1.0) * v * v + self.dpi(u1, ref) / self.rho
        if np.any(radicand < 0):
            raise FloatingPointError("negative radicand in blood-flow eigenvalues")
        r = np.sqrt(radicand)
        return self.alpha * v - r, self.alpha * v + r

    def max_speed(self, u1, u2, ref):
        l1, l2 = self.eigenvalues(u1, u2, ref)
        return np.maximum(np.abs(l1), np.abs(l2))

    def jacobian(self, u1, u2, ref):
        v = float(velocity(u1, u2))
        return np.array([
            [0.0, 1.0],
            [-self.alpha * v * v + float(self.dpi(u1, ref)) / self.rho, 2.0 * self.alpha * v],
        ])

    def froude(self, u1, u2, ref):
        return np.abs(velocity(u1, u2)) / self.wave_speed(u1, ref)

    def pressure(self, u1, ref):
        return self.beta * (np.sqrt(np.asarray(u1, dtype=float) / ref) - 1.0)

    def junction_level(self, u1, ref):
        return self.pressure(u1, ref) / self.rho

    def energy_head(self, u1, u2, ref):
        v = velocity(u1, u2)
        return 0.5 * self.alpha * v * v + self.pressure(u1, ref) / self.rho

    def friction_coefficient(self):
        if self.nu == 0:
            return 0.0
        return 2.0 * self.alpha * self.nu / (self.alpha - 1.0)

    def friction_source(self, u1, u2, ref=None):
        q = np.asarray(u2, dtype=float)
        k = self.friction_coefficient()
        return np.zeros_like(q), -k * velocity(u1, q)

    def kappa(self, a0):
        k = self.beta / (3.0 * np.sqrt(a0))
        return k if self.literal_kappa else k / self.rho

    def entropy_pair(self, u1, u2, ref):
        a = np.asarray(u1, dtype=float)
        v = velocity(a, u2)
        gamma = 1.5
        kappa = self.kappa(ref)
        kinetic = 0.5 * a * v * v
        eta = kinetic + kappa * a**gamma / (gamma - 1.0)
        flux = (kinetic + gamma * kappa * a**gamma / (gamma - 1.0) - kappa * ref**gamma) * v
        return eta, flux

    def entropy_production(self, u1, u2, ref=None):
        """Viscous production term ``sigma(U) v`` with ``sigma = 2 alpha nu v^2 / (alpha - 1)``."""
        v = velocity(u1, u2)
        return self.friction_coefficient() * v * v * v


def make_model(name: str, **params):
    """Build a model from its name (``shallow_water`` or ``blood_flow``)."""
    key = name.strip().lower().replace("-", "_")
    if key in ("shallow_water", "sw", "swe"):
        return ShallowWater(**params)
    if key in ("blood_flow", "bf", "arterial"):
        return BloodFlow(**params)
    raise ConfigurationError(f"unknown model {name!r}")
