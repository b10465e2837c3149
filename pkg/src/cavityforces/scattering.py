"""Interface scattering and lossless total-reflection amplitudes.

A lossy cavity wall can be replaced, for equilibrium purposes, by a
lossless construction: an infinitesimally thin interface that reproduces
the wall's reflection amplitude r_v, backed by machinery that eventually
re-injects every photon the wall would have absorbed or transmitted.
Two equivalent realizations are provided here.

* ``build_interface_*`` + ``total_reflection_multiple``: an explicit
  unitary (or flux-balanced) interface with a perfect back mirror a
  distance L_d behind it; the total amplitude follows from summing
  multiple reflections.
* ``total_reflection_delay``: the same total amplitude parametrized only
  by the wall's r_v, a slow phase delta and the round-trip phase
  omega*T of the re-injection delay.  For propagating waves |r_t| = 1
  exactly; for evanescent waves r_t is real (no net evanescent energy
  flow), which is what makes the cavity's normal modes real.

``delay_consistency_check`` certifies that the two constructions agree
pointwise once the free phases are identified.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import NormalWavevector
from .mirrors import PASSIVITY_TOL, PassivityError, passivity_check

__all__ = [
    "Sector",
    "ResonanceError",
    "InterfaceScattering",
    "DelayedMirror",
    "energy_flux",
    "build_interface_propagating",
    "build_interface_evanescent",
    "total_reflection_multiple",
    "total_reflection_series",
    "total_reflection_delay",
    "delay_coefficients",
    "delay_consistency_check",
]

Sector = Literal["propagating", "evanescent"]

LOSSLESS_EPS = 1e-12


class ResonanceError(ZeroDivisionError):
    """Denominator of a total-reflection amplitude vanished.

    For the delay form this is the injection resonance
    delta + omega*T = pi (mod 2 pi).
    """


@dataclass(frozen=True)
class InterfaceScattering:
    """Amplitudes {r_v, r_d, t_v, t_d} of a fictitious thin interface.

    k_v is the vacuum-side normal wavevector (real, or i*kappa_v in the
    evanescent sector); k_d is the real normal wavevector on the far
    (dielectric) side.  ``decoupled`` marks the evanescent case
    Im r_v = 0 where no energy crosses and t_v = 0.
    """

    r_v: complex
    r_d: complex
    t_v: complex
    t_d: complex
    k_v: complex
    k_d: float
    sector: Sector
    decoupled: bool = False

    @property
    def kappa_v(self) -> float:
        if self.sector != "evanescent":
            raise ValueError("kappa_v applies to the evanescent sector only")
        return self.k_v.imag

    def scatter(self, i_v: complex, i_d: complex) -> tuple[complex, complex]:
        """Outgoing amplitudes (o_v, o_d) for given incoming amplitudes."""
        return (self.r_v * i_v + self.t_d * i_d,
                self.t_v * i_v + self.r_d * i_d)

    def s_matrix(self) -> np.ndarray:
        """Flux-normalized 2x2 scattering matrix (propagating sector)."""
        if self.sector != "propagating":
            raise ValueError("the flux-normalized S-matrix exists in the propagating sector only")
        kv, kd = self.k_v.real, self.k_d
        return np.array(
            [[self.r_v, self.t_d * math.sqrt(kv / kd)],
             [self.t_v * math.sqrt(kd / kv), self.r_d]],
            dtype=complex,
        )

    def flux_mismatch(self, i_v: complex, i_d: complex) -> float:
        """S_vz - S_dz for the given incoming amplitudes (0 when balanced)."""
        o_v, o_d = self.scatter(i_v, i_d)
        if self.sector == "propagating":
            s_v = self.k_v.real * (abs(i_v) ** 2 - abs(o_v) ** 2)
        else:
            s_v = 2.0 * self.kappa_v * (i_v.conjugate() * o_v).imag
        s_d = self.k_d * (abs(o_d) ** 2 - abs(i_d) ** 2)
        return s_v - s_d


@dataclass(frozen=True)
class DelayedMirror:
    """A wall reflection r(omega) wrapped with re-injection delay T and slow phase delta.

    ``reflection`` takes (omega, Q, pol) and returns the coherent
    amplitude r_v; the delay supplies the rapidly varying phase
    exp(i*(delta + omega*T)) of the re-injected field.
    """

    reflection: object  # Callable[[float, float, str], complex]
    T: float
    delta: float = 0.0

    def __post_init__(self):
        if self.T <= 0.0:
            raise ValueError("delay T must be positive")


def energy_flux(i: complex, o: complex, k: NormalWavevector) -> float:
    """Normal energy flux on the vacuum side, prefactor c^2/(8 pi omega) dropped.

    Propagating: k (|i|^2 - |o|^2).  Evanescent: 2 kappa Im(i* o) --
    incident and reflected evanescent waves carry energy only jointly.
    """
    if k.sector == "propagating":
        return k.value.real * (abs(i) ** 2 - abs(o) ** 2)
    return 2.0 * k.kappa * (complex(i).conjugate() * o).imag


def build_interface_propagating(r_v: complex, k_v: float, k_d: float) -> InterfaceScattering:
    """Unitary interface with prescribed vacuum-side reflection r_v.

    The flux-normalized S-matrix built from the returned amplitudes is
    exactly unitary; the remaining free phases are fixed by taking t_v
    (and t_d) real and non-negative, which forces r_d = -conj(r_v).

    Parameters
    ----------
    r_v : complex
        Wall reflection amplitude, |r_v| <= 1.
    k_v, k_d : float
        Real normal wavevectors on the vacuum and dielectric sides.
    """
    if k_v <= 0.0 or k_d <= 0.0:
        raise ValueError("k_v and k_d must be positive")
    r_v = complex(r_v)
    passivity_check(r_v, "propagating").require()
    t2 = max(0.0, 1.0 - abs(r_v) ** 2)
    t = math.sqrt(t2)
    return InterfaceScattering(
        r_v=r_v,
        r_d=-r_v.conjugate(),
        t_v=t * math.sqrt(k_v / k_d),
        t_d=t * math.sqrt(k_d / k_v),
        k_v=complex(k_v),
        k_d=k_d,
        sector="propagating",
    )


def build_interface_evanescent(r_v: complex, kappa_v: float, k_d: float,
                               r_d_phase: float = 0.0) -> InterfaceScattering:
    """Flux-balanced interface for waves evanescent in vacuum.

    No unitary S-matrix exists here; energy balance instead fixes
    |r_d| = 1, |t_v|^2 = 2 (kappa_v/k_d) Im r_v and
    t_d = i (k_d/kappa_v) conj(t_v) r_d.  The free r_d phase is an input
    (it drops out of every physical result in the long-delay limit).

    Im r_v = 0 describes a lossless wall: the interface decouples
    (t_v = 0) and is flagged accordingly.
    """
    if kappa_v <= 0.0 or k_d <= 0.0:
        raise ValueError("kappa_v and k_d must be positive")
    r_v = complex(r_v)
    passivity_check(r_v, "evanescent").require()
    im = max(0.0, r_v.imag)
    t_v = math.sqrt(2.0 * (kappa_v / k_d) * im)
    r_d = cmath.exp(1j * r_d_phase)
    return InterfaceScattering(
        r_v=r_v,
        r_d=r_d,
        t_v=complex(t_v),
        t_d=1j * (k_d / kappa_v) * t_v * r_d,
        k_v=1j * kappa_v,
        k_d=k_d,
        sector="evanescent",
        decoupled=(im == 0.0),
    )


def total_reflection_multiple(iface: InterfaceScattering, L_d: float) -> complex:
    """Total reflection of the interface backed by a perfect mirror at L_d.

    Closed form of the multiple-reflection sum:

        r_t = (r_v + (r_v r_d - t_v t_d) e^{2 i k_d L_d}) / (1 + r_d e^{2 i k_d L_d}).

    Propagating interfaces give |r_t| = 1 (all transmitted energy
    eventually returns); evanescent interfaces give real r_t.
    """
    if L_d <= 0.0:
        raise ValueError("L_d must be positive")
    z = cmath.exp(2j * iface.k_d * L_d)
    den = 1.0 + iface.r_d * z
    if abs(den) < 1e-14:
        raise ResonanceError(f"multiple-reflection denominator |1 + r_d e^(2ik_dL_d)| = {abs(den):.2e}")
    return (iface.r_v + (iface.r_v * iface.r_d - iface.t_v * iface.t_d) * z) / den


def total_reflection_series(iface: InterfaceScattering, L_d: float,
                            max_bounces: int = 1000, tail: float = 1e-15) -> complex:
    """Direct bounce-by-bounce sum of the multiple-reflection series.

    Oracle for ``total_reflection_multiple``; truncated when the
    geometric tail |r_d|^N drops below ``tail`` or after ``max_bounces``.
    Only meaningful when |r_d| < 1 (the closed form handles |r_d| = 1).
    """
    z = cmath.exp(2j * iface.k_d * L_d)
    ratio = -iface.r_d * z
    acc = 0.0 + 0.0j
    term = 1.0 + 0.0j
    mag = abs(iface.r_d)
    for n in range(max_bounces):
        acc += term
        term *= ratio
        if mag**n < tail:
            break
    return iface.r_v - iface.t_v * iface.t_d * z * acc


def delay_coefficients(r_v: complex, delta: float, sector: Sector) -> tuple[complex, complex]:
    """Slow coefficients (a, b) of r_t = (r_v + a e^{i omega T})/(1 + b e^{i omega T}).

    Equilibrium fixes them up to the slow phase delta:
    propagating a = e^{i delta}, b = conj(r_v) e^{i delta};
    evanescent  b = e^{i delta}, a = conj(r_v) e^{i delta}.
    """
    ph = cmath.exp(1j * delta)
    if sector == "propagating":
        return ph, complex(r_v).conjugate() * ph
    if sector == "evanescent":
        return complex(r_v).conjugate() * ph, ph
    raise ValueError(f"unknown sector {sector!r}")


def total_reflection_delay(r_v: complex, delta: float, omega_T: float, sector: Sector) -> complex:
    """Delay-form total reflection amplitude.

    Propagating:  r_t = (r_v + e^{i phi}) / (1 + conj(r_v) e^{i phi}),
    with phi = delta + omega*T; |r_t| = 1 exactly.  A lossless wall
    (|r_v| = 1) needs no re-injection and returns r_v unchanged.

    Evanescent:   r_t = (r_v + conj(r_v) e^{i phi}) / (1 + e^{i phi}),
    real for any passive r_v; diverges at the injection resonance
    phi = pi (mod 2 pi), reported as ResonanceError.
    """
    r_v = complex(r_v)
    ph = cmath.exp(1j * (delta + omega_T))
    if sector == "propagating":
        passivity_check(r_v, "propagating").require()
        if abs(r_v) >= 1.0 - LOSSLESS_EPS:
            return r_v
        return (r_v + ph) / (1.0 + r_v.conjugate() * ph)
    if sector == "evanescent":
        passivity_check(r_v, "evanescent").require()
        den = 1.0 + ph
        if abs(den) < 1e-13:
            raise ResonanceError(
                f"injection resonance: delta + omega*T = pi (mod 2 pi), |1 + e^(i phi)| = {abs(den):.2e}"
            )
        return (r_v + r_v.conjugate() * ph) / den
    raise ValueError(f"unknown sector {sector!r}")


def delay_consistency_check(iface: InterfaceScattering, L_d_values) -> float:
    """Max deviation between multiple-reflection and delay-form amplitudes.

    Identifies e^{i delta} = r_v / conj(r_d) (propagating, with
    e^{i delta} = -t_v t_d when r_v = 0) or e^{i delta} = r_d
    (evanescent), omega*T = 2 k_d L_d, and sweeps L_d.  Any deviation
    beyond rounding signals a phase-convention error.
    """
    if iface.sector == "propagating":
        if abs(iface.r_v) > LOSSLESS_EPS:
            delta = cmath.phase(iface.r_v / iface.r_d.conjugate())
        else:
            delta = cmath.phase(-iface.t_v * iface.t_d)
    else:
        delta = cmath.phase(iface.r_d)
    worst = 0.0
    for L_d in np.atleast_1d(L_d_values):
        omega_T = 2.0 * (iface.k_d.real if isinstance(iface.k_d, complex) else iface.k_d) * float(L_d)
        try:
            r_multi = total_reflection_multiple(iface, float(L_d))
            r_delay = total_reflection_delay(iface.r_v, delta, omega_T, iface.sector)
        except ResonanceError:
            continue
        worst = max(worst, abs(r_multi - r_delay))
    return worst
