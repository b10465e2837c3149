"""Spectral kinematics and unit conventions shared by all modules.

Every quantity in this package is indexed by the triple (Q, frequency,
polarization): the wavevector component parallel to the mirrors, a
frequency on either the real or the imaginary axis, and s or p
polarization.  This module fixes the branch convention for the normal
wavevector component and provides conversions between SI and natural
(gap-based) units.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

from scipy.constants import c as C_LIGHT
from scipy.constants import hbar as HBAR
from scipy.constants import k as K_BOLTZMANN

__all__ = [
    "C_LIGHT",
    "HBAR",
    "K_BOLTZMANN",
    "Polarization",
    "POLARIZATIONS",
    "SpectralPoint",
    "NormalWavevector",
    "UnitSystem",
    "branch_sqrt",
    "normal_wavevector",
    "imaginary_axis_kappa",
]

Polarization = Literal["s", "p"]
POLARIZATIONS: tuple[Polarization, ...] = ("s", "p")

_REAL_TOL = 1e-14


@dataclass(frozen=True)
class SpectralPoint:
    """A (Q, frequency, polarization) evaluation point.

    ``axis`` selects whether ``frequency`` is a real-axis angular
    frequency omega or an imaginary-axis angular frequency xi (the point
    omega = i*xi).  Frequencies and Q are non-negative.
    """

    Q: float
    frequency: float
    axis: Literal["real", "imag"]
    pol: Polarization

    def __post_init__(self):
        if self.Q < 0.0:
            raise ValueError(f"Q must be >= 0, got {self.Q}")
        if self.frequency < 0.0:
            raise ValueError(f"frequency must be >= 0, got {self.frequency}")
        if self.axis not in ("real", "imag"):
            raise ValueError(f"axis must be 'real' or 'imag', got {self.axis!r}")
        if self.pol not in POLARIZATIONS:
            raise ValueError(f"pol must be 's' or 'p', got {self.pol!r}")

    @classmethod
    def real_axis(cls, Q, omega, pol):
        return cls(Q=Q, frequency=omega, axis="real", pol=pol)

    @classmethod
    def imaginary_axis(cls, Q, xi, pol):
        return cls(Q=Q, frequency=xi, axis="imag", pol=pol)


@dataclass(frozen=True)
class NormalWavevector:
    """Normal wavevector component with its sector tag.

    In vacuum on the real frequency axis the value is real for
    Q <= omega/c (propagating) and purely imaginary, i*kappa with
    kappa > 0, for Q > omega/c (evanescent).
    """

    value: complex
    sector: Literal["propagating", "evanescent"]

    @property
    def kappa(self) -> float:
        """Decay constant kappa for an evanescent wavevector i*kappa."""
        if self.sector != "evanescent":
            raise ValueError("kappa is defined for the evanescent sector only")
        return self.value.imag


def branch_sqrt(z: complex) -> complex:
    """Square root on the branch with Im >= 0 (Re >= 0 when Im == 0).

    This is the physical branch: transmitted and evanescent fields decay
    away from an interface.
    """
    w = cmath.sqrt(z)
    if w.imag < 0.0 or (w.imag == 0.0 and w.real < 0.0):
        w = -w
    return w


def normal_wavevector(Q: float, omega: float, eps: complex = 1.0, *, c: float = C_LIGHT) -> NormalWavevector:
    """Normal wavevector sqrt(eps*omega^2/c^2 - Q^2) on the physical branch.

    Parameters
    ----------
    Q : float
        Parallel wavevector magnitude [rad/m], >= 0.
    omega : float
        Real-axis angular frequency [rad/s], >= 0.
    eps : complex
        Relative permittivity of the medium the wave lives in.
    c : float
        Speed of light; pass 1.0 for natural units.

    Returns
    -------
    NormalWavevector
        Tagged propagating when the result is real (within rounding),
        evanescent otherwise.  The light-line point Q = omega/c belongs
        to the propagating sector with value 0.
    """
    if Q < 0.0:
        raise ValueError(f"Q must be >= 0, got {Q}")
    if omega < 0.0:
        raise ValueError(f"omega must be >= 0, got {omega}")
    if omega == 0.0 and Q == 0.0:
        raise ValueError("normal_wavevector is undefined at Q = 0, omega = 0")
    k = branch_sqrt(complex(eps) * (omega / c) ** 2 - Q * Q)
    scale = abs(k) + Q + omega / c
    if abs(k.imag) <= _REAL_TOL * scale:
        return NormalWavevector(complex(k.real, 0.0), "propagating")
    return NormalWavevector(k, "evanescent")


def imaginary_axis_kappa(Q: float, xi: float, *, c: float = C_LIGHT) -> float:
    """Decay constant kappa = sqrt(xi^2/c^2 + Q^2) on the imaginary axis.

    On the imaginary frequency axis every mode decays across the gap:
    exp(2*i*k_v*L) becomes exp(-2*kappa*L).
    """
    if Q < 0.0 or xi < 0.0:
        raise ValueError("Q and xi must be >= 0")
    if Q == 0.0 and xi == 0.0:
        raise ValueError("imaginary_axis_kappa is undefined at Q = 0, xi = 0")
    return math.hypot(xi / c, Q)


@dataclass(frozen=True)
class UnitSystem:
    """Conversion between SI and natural units.

    Natural units measure lengths in units of the gap width L and
    frequencies in units of c/L; hbar = c = k_B = 1.  ``gap`` is the
    reference length in meters.
    """

    mode: Literal["si", "natural"]
    gap: float = 1.0

    def __post_init__(self):
        if self.mode not in ("si", "natural"):
            raise ValueError(f"mode must be 'si' or 'natural', got {self.mode!r}")
        if self.gap <= 0.0:
            raise ValueError("gap must be positive")

    # SI value -> dimensionless natural value
    def length_to_natural(self, x_m: float) -> float:
        return x_m / self.gap

    def length_from_natural(self, x: float) -> float:
        return x * self.gap

    def frequency_to_natural(self, omega_rad_s: float) -> float:
        return omega_rad_s * self.gap / C_LIGHT

    def frequency_from_natural(self, omega: float) -> float:
        return omega * C_LIGHT / self.gap

    def wavevector_to_natural(self, q_rad_m: float) -> float:
        return q_rad_m * self.gap

    def wavevector_from_natural(self, q: float) -> float:
        return q / self.gap

    def temperature_to_natural(self, T_kelvin: float) -> float:
        """k_B*T in units of hbar*c/L."""
        return K_BOLTZMANN * T_kelvin * self.gap / (HBAR * C_LIGHT)

    def temperature_from_natural(self, tau: float) -> float:
        return tau * HBAR * C_LIGHT / (K_BOLTZMANN * self.gap)
