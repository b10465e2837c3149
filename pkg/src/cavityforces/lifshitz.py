"""Cavity thermodynamics from wall reflection amplitudes.

Ground-state energy, internal energy, free energy, entropy and Casimir
pressure per unit mirror area, for a planar gap whose walls are
described by MirrorModel reflection amplitudes.  All production
evaluation happens on the imaginary frequency axis, where the integrands
are real and sign-definite for passive walls; finite temperature becomes
the usual Matsubara sum with the n = 0 term at half weight.

Inside the quadratures everything runs on the dimensionless variables

    x = 2 L xi / c        (imaginary frequency)
    y = 2 kappa L         (transverse decay exponent)

so the exp(-y) factor supplies analytic tail bounds for both the
frequency cutoff and the Matsubara truncation.

Sign conventions: free energy and ground-state energy of passive
cavities are negative; pressure is negative for attraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import C_LIGHT, HBAR, K_BOLTZMANN
from .mirrors import MirrorModel, PassivityError
from .quadrature import adaptive_gk15

__all__ = [
    "PhysicalConstants",
    "SI",
    "NATURAL",
    "PlanarCavity",
    "QuadratureSpec",
    "Estimate",
    "ThermoResult",
    "occupation",
    "mode_partition",
    "zeta_factor",
    "zeta_factor_imag",
    "matsubara_lattice",
    "spectral_average",
    "ground_state_energy",
    "free_energy",
    "internal_energy",
    "entropy",
    "casimir_pressure",
    "compute_thermodynamics",
]

_ZETA3 = 1.2020569031595943


@dataclass(frozen=True)
class PhysicalConstants:
    """Unit bundle so natural-unit runs can set c = hbar = k_B = 1."""

    c: float = C_LIGHT
    hbar: float = HBAR
    k_B: float = K_BOLTZMANN


SI = PhysicalConstants()
NATURAL = PhysicalConstants(c=1.0, hbar=1.0, k_B=1.0)


@dataclass(frozen=True)
class PlanarCavity:
    """Two mirrors a distance L apart."""

    mirror1: MirrorModel
    mirror2: MirrorModel
    L: float

    def __post_init__(self):
        if self.L <= 0.0:
            raise ValueError("gap L must be positive")

    @property
    def analytic_in_xi(self) -> bool:
        return self.mirror1.analytic_in_xi and self.mirror2.analytic_in_xi


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature and truncation policy for the thermodynamic integrals.

    rel_tol drives everything: inner panels aim at rel_tol/10, y-cutoffs
    and the Matsubara truncation push their analytic tail bounds below
    matsubara_tail_fraction times the running tolerance.
    """

    rel_tol: float = 1e-8
    inner_rel_tol: float | None = None
    matsubara_tail_fraction: float = 1e-2
    max_panels: int = 4000
    fd_step_L: float = 1e-4
    fd_step_T: float = 1e-4
    cross_check: bool = True

    @property
    def inner_tol(self) -> float:
        return self.inner_rel_tol if self.inner_rel_tol is not None else 0.1 * self.rel_tol


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class Estimate:
    """A value with its quadrature error bound and optional cross-check path."""

    value: float
    error: float
    alt_value: float | None = None
    alt_error: float | None = None
    flags: tuple[str, ...] = ()

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class ThermoResult:
    """Per-unit-area thermodynamics of one cavity configuration."""

    L: float
    temperature: float
    U0: Estimate
    U: Estimate
    F_free: Estimate
    S_entropy: Estimate | None
    pressure: Estimate
    pressure_printed_form: float = field(default=0.0)
    identity_residual: float | None = None
    flags: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# occupation and mode-count helpers
# ---------------------------------------------------------------------------

def occupation(omega, temperature, constants: PhysicalConstants = SI):
    """Mean occupation g = (1/2) coth(beta hbar omega / 2); 1/2 at T = 0."""
    omega = np.asarray(omega, dtype=float)
    if temperature == 0.0:
        return np.full_like(omega, 0.5)
    x = constants.hbar * omega / (2.0 * constants.k_B * temperature)
    return 0.5 / np.tanh(x)


def mode_partition(omega, temperature, constants: PhysicalConstants = SI):
    """Single-mode partition function z = (1/2) csch(beta hbar omega / 2)."""
    if temperature <= 0.0:
        raise ValueError("mode_partition needs temperature > 0")
    x = constants.hbar * np.asarray(omega, dtype=float) / (2.0 * constants.k_B * temperature)
    with np.errstate(over="ignore"):
        return 0.5 / np.sinh(x)


def zeta_factor(r1r2: complex, k_v: complex, L: float) -> complex:
    """zeta = 1 / (r1 r2 exp(2 i k_v L))."""
    return 1.0 / (r1r2 * np.exp(2j * k_v * L))


def zeta_factor_imag(r1r2: float, kappa: float, L: float) -> float:
    """Imaginary-axis zeta = exp(2 kappa L)/(r1 r2); > 1 for passive walls."""
    return math.exp(2.0 * kappa * L) / r1r2


# ---------------------------------------------------------------------------
# integrand machinery (dimensionless x, y variables)
# ---------------------------------------------------------------------------

def _products(cavity: PlanarCavity, xi, Q, constants: PhysicalConstants):
    """(r_s1 r_s2, r_p1 r_p2) on the imaginary axis."""
    kw = {} if constants.c == C_LIGHT else {"c": constants.c}
    try:
        rs1, rp1 = cavity.mirror1.r_imag(xi, Q, **kw)
    except TypeError:
        rs1, rp1 = cavity.mirror1.r_imag(xi, Q)
    try:
        rs2, rp2 = cavity.mirror2.r_imag(xi, Q, **kw)
    except TypeError:
        rs2, rp2 = cavity.mirror2.r_imag(xi, Q)
    return rs1 * rs2, rp1 * rp2


def _check_passive_products(ps, pp, expy, xi, Q):
    """Reject gain-like products that push 1 - p*exp(-y) out of the log domain."""
    for name, p in (("s", ps), ("p", pp)):
        bad = 1.0 - p * expy <= 0.0
        if np.any(bad):
            i = int(np.argmax(bad))
            raise PassivityError(
                f"non-passive reflection product for pol={name}: r1*r2 = {np.ravel(p)[i]:.6g} "
                f"at (Q = {np.ravel(Q)[i]:.6g} rad/m, xi = {np.ravel(xi)[i]:.6g} rad/s)"
            )


def _phi(cavity, x, y, constants):
    """Sum over polarizations of ln(1 - r1 r2 e^{-y}) at x = 2 L xi / c."""
    L = cavity.L
    xi = x * constants.c / (2.0 * L)
    Q = np.sqrt(np.maximum(y * y - x * x, 0.0)) / (2.0 * L)
    ps, pp = _products(cavity, xi, Q, constants)
    expy = np.exp(-y)
    _check_passive_products(ps, pp, expy, xi, Q)
    return np.log1p(-ps * expy) + np.log1p(-pp * expy)


def _psi(cavity, x, y, constants):
    """Sum over polarizations of p e^{-y} / (1 - p e^{-y})."""
    L = cavity.L
    xi = x * constants.c / (2.0 * L)
    Q = np.sqrt(np.maximum(y * y - x * x, 0.0)) / (2.0 * L)
    ps, pp = _products(cavity, xi, Q, constants)
    expy = np.exp(-y)
    _check_passive_products(ps, pp, expy, xi, Q)
    a, b = ps * expy, pp * expy
    return a / (1.0 - a) + b / (1.0 - b)


def _dphi_dxi(cavity, xi_n, Q, constants):
    """d/dxi of sum_mu ln(1 - p_mu e^{-2 kappa L}) at fixed Q.

    Complex step for analytic mirror models (exact to rounding), 5-point
    Richardson central differences otherwise.
    """
    L, c = cavity.L, constants.c

    def phi_of(xi):
        kappa = np.sqrt((xi / c) ** 2 + Q * Q)
        ps, pp = _products(cavity, xi, Q, constants)
        e = np.exp(-2.0 * kappa * L)
        return np.log(1.0 - ps * e) + np.log(1.0 - pp * e)

    if cavity.analytic_in_xi:
        h = xi_n * 1e-100
        return phi_of(xi_n + 1j * h).imag / h
    h = xi_n * 1e-5
    d1 = (phi_of(xi_n + h) - phi_of(xi_n - h)) / (2.0 * h)
    d2 = (phi_of(xi_n + 0.5 * h) - phi_of(xi_n - 0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


# analytic envelopes of the dimensionless integrals, |r1 r2| <= 1
def _log_kernel_tail(y0):
    """Bound on int_{y0}^inf y * 2|ln(1 - e^-y)| dy."""
    if y0 < 1.0:
        return 2.0 * _ZETA3
    return 2.0 / (1.0 - math.exp(-1.0)) * (y0 + 1.0) * math.exp(-y0)


def _pressure_kernel_tail(y0):
    """Bound on int_{y0}^inf y^2 * 2 e^-y/(1 - e^-y) dy."""
    if y0 < 1.0:
        return 4.0 * _ZETA3
    return 2.0 / (1.0 - math.exp(-1.0)) * (y0 * y0 + 2.0 * y0 + 2.0) * math.exp(-y0)


def _y_cutoff(x_lo):
    """Upper y limit: beyond it the kernel tails are below 1e-18 of scale."""
    return x_lo + 55.0 + math.log1p(x_lo)


# ---------------------------------------------------------------------------
# zero-temperature integrals
# ---------------------------------------------------------------------------

def _double_integral(cavity, kernel, weight_power, quad, constants):
    """int_0^inf dy y^w int_0^y dx kernel(x, y), adaptively in both directions."""
    inner_err = [0.0]

    def outer(y_arr):
        out = np.empty_like(y_arr)
        for i, y in enumerate(y_arr):
            if y <= 0.0:
                out[i] = 0.0
                continue
            val, err = adaptive_gk15(
                lambda x, _y=y: kernel(cavity, x, np.full_like(x, _y), constants),
                0.0, y, rel_tol=quad.inner_tol, abs_tol=1e-300,
                max_panels=quad.max_panels,
            )
            inner_err[0] = max(inner_err[0], err / max(abs(val), 1e-300))
            out[i] = y**weight_power * val
        return out

    y_max = _y_cutoff(0.0)
    val, err = adaptive_gk15(outer, 0.0, y_max, rel_tol=quad.rel_tol,
                             abs_tol=1e-300, max_panels=quad.max_panels)
    return val, err + inner_err[0] * abs(val)


def ground_state_energy(cavity: PlanarCavity, quad: QuadratureSpec = DEFAULT_QUAD,
                        constants: PhysicalConstants = SI) -> Estimate:
    """Zero-temperature energy per unit area [J/m^2].

    Imaginary-axis form

        U0/A = (hbar/4 pi^2) int dQ Q int dxi
               ln[(1 - r_s1 r_s2 e^{-2 kappa L})(1 - r_p1 r_p2 e^{-2 kappa L})]

    evaluated in the dimensionless (x, y) variables.  Negative for
    passive mirrors; -pi^2 hbar c / (720 L^3) in the ideal-mirror limit.
    """
    L = cavity.L
    val, err = _double_integral(cavity, _phi, 1, quad, constants)
    pref = constants.hbar * constants.c / (32.0 * math.pi**2 * L**3)
    return Estimate(pref * val, pref * err)


def _pressure_T0(cavity, quad, constants):
    L = cavity.L
    val, err = _double_integral(cavity, _psi, 2, quad, constants)
    pref = constants.hbar * constants.c / (32.0 * math.pi**2 * L**4)
    return Estimate(-pref * val, pref * err)


# ---------------------------------------------------------------------------
# Matsubara machinery
# ---------------------------------------------------------------------------

def matsubara_xi(n, temperature, constants: PhysicalConstants = SI):
    """n-th Matsubara frequency xi_n = 2 pi n k_B T / hbar."""
    return 2.0 * math.pi * n * constants.k_B * temperature / constants.hbar


def matsubara_lattice(temperature, L=None, quad: QuadratureSpec = DEFAULT_QUAD,
                      constants: PhysicalConstants = SI, n_max=None):
    """Matsubara frequencies and summation weights.

    xi_n = 2 pi n k_B T / hbar with weight 1/2 at n = 0 and 1 otherwise
    (the half weight makes the T -> 0 limit the trapezoidal integral).
    When ``n_max`` is not given, L must be: the lattice is truncated
    where the analytic e^{-2 xi_n L / c} envelope falls below the
    tolerance policy of ``quad``.

    Returns
    -------
    (xi, weights) : two 1-d ndarrays, n = 0 .. n_max.
    """
    if temperature <= 0.0:
        raise ValueError("matsubara_lattice needs temperature > 0")
    if n_max is None:
        if L is None:
            raise ValueError("give either n_max or the gap L for the tail bound")
        x1 = 2.0 * L * matsubara_xi(1, temperature, constants) / constants.c
        scale = max(1.0, _log_kernel_tail(x1))
        threshold = quad.matsubara_tail_fraction * quad.rel_tol * scale
        n = 1
        while _log_kernel_tail(max(n * x1, 1.0)) > threshold and n < 10**7:
            n += 1
        n_max = n
    n_arr = np.arange(n_max + 1)
    xi = 2.0 * math.pi * n_arr * constants.k_B * temperature / constants.hbar
    w = np.ones(n_max + 1)
    w[0] = 0.5
    return xi, w


def _matsubara_sum(cavity, temperature, quad, constants, term):
    """Sum w_n * term(n, x_n) with analytic tail-bound truncation.

    ``term(n, x_n) -> (value, error)``; the envelope of |term| is
    assumed bounded by the log-kernel tail at x_n (true for all kernels
    used here, |r1 r2| <= 1).
    """
    L, c = cavity.L, constants.c
    x1 = 4.0 * math.pi * constants.k_B * temperature * L / (constants.hbar * c)
    total = 0.0
    tot_err = 0.0
    v0, e0 = term(0, 0.0)
    total += 0.5 * v0
    tot_err += 0.5 * e0
    scale = max(abs(total), abs(v0), 1e-300)
    n = 1
    q = math.exp(-x1)
    while True:
        x_n = n * x1
        v, e = term(n, x_n)
        total += v
        tot_err += e
        scale = max(scale, abs(total))
        if x_n >= 1.0:
            # remaining-tail bound: sum_{m>n} C (x_m + 1) e^{-x_m}
            C = 2.0 / (1.0 - math.exp(-1.0))
            x_next = x_n + x1
            tail = C * math.exp(-x_next) * ((x_next + 1.0) / (1.0 - q) + x1 * q / (1.0 - q) ** 2)
            if tail < quad.matsubara_tail_fraction * quad.rel_tol * scale:
                tot_err += tail
                break
        if n >= 10**7:
            raise RuntimeError("Matsubara sum failed to truncate")
        n += 1
    return total, tot_err, n


def free_energy(cavity: PlanarCavity, temperature: float,
                quad: QuadratureSpec = DEFAULT_QUAD,
                constants: PhysicalConstants = SI) -> Estimate:
    """Free energy per unit area [J/m^2].

    T > 0: Matsubara sum (k_B T / 8 pi L^2) sum_n' int_{x_n} dy y
    sum_mu ln(1 - r1 r2 e^{-y}); T = 0: the genuine frequency integral
    of ``ground_state_energy`` (not a tiny-T sum).
    """
    if temperature < 0.0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0.0:
        return ground_state_energy(cavity, quad, constants)
    L = cavity.L
    inner_scale = [1.0]

    def term(n, x_n):
        abs_tol = 0.01 * quad.rel_tol * inner_scale[0]
        val, err = adaptive_gk15(
            lambda y: _phi(cavity, np.full_like(y, x_n), y, constants) * y,
            x_n, _y_cutoff(x_n), rel_tol=quad.inner_tol, abs_tol=abs_tol,
            max_panels=quad.max_panels,
        )
        if n == 0:
            inner_scale[0] = max(abs(val), 1e-300)
        return val, err

    total, err, _ = _matsubara_sum(cavity, temperature, quad, constants, term)
    pref = constants.k_B * temperature / (8.0 * math.pi * L**2)
    return Estimate(pref * total, pref * err)


def _lattice_derivative_sum(cavity, temperature, quad, constants, variant="y"):
    """sum_{n>=1} xi_n * int dy y dphi/dxi -- the engine behind S and U.

    This is d(beta F)/d beta up to the -(k_B T / 8 pi L^2) prefactor:
    only the n >= 1 terms move with temperature.  ``variant`` picks the
    integration variable (decay exponent y, or Q directly); entropy and
    the internal-energy cross-check use different variants so that their
    agreement certifies independent quadratures.
    """
    L, c = cavity.L, constants.c

    def term(n, x_n):
        if n == 0:
            return 0.0, 0.0
        xi_n = x_n * c / (2.0 * L)
        if variant == "y":
            def f(y):
                Q = np.sqrt(np.maximum(y * y - x_n * x_n, 0.0)) / (2.0 * L)
                return _dphi_dxi(cavity, xi_n, Q, constants) * y

            val, err = adaptive_gk15(f, x_n, _y_cutoff(x_n), rel_tol=quad.inner_tol,
                                     abs_tol=1e-300, max_panels=quad.max_panels)
        else:
            # same integral in the Q variable: int dQ Q dphi/dxi * (2L)^2
            q_max = math.sqrt(max(_y_cutoff(x_n) ** 2 - x_n * x_n, 0.0)) / (2.0 * L)

            def f(Q):
                return _dphi_dxi(cavity, xi_n, Q, constants) * Q * (2.0 * L) ** 2

            val, err = adaptive_gk15(f, 0.0, q_max, rel_tol=quad.inner_tol,
                                     abs_tol=1e-300, max_panels=quad.max_panels)
        return xi_n * val, xi_n * err

    return _matsubara_sum(cavity, temperature, quad, constants, term)


def entropy(cavity: PlanarCavity, temperature: float,
            quad: QuadratureSpec = DEFAULT_QUAD,
            constants: PhysicalConstants = SI) -> Estimate:
    """Entropy per unit area [J/(K m^2)], S = -dF/dT.

    Primary path differentiates the Matsubara representation in T
    analytically: both through the k_B T prefactor and through the
    motion of the xi_n lattice (the frequency derivative of the
    integrand is taken by complex step for analytic mirror models).
    Cross-check path: central finite difference of the free energy with
    step fd_step_T * T; disagreement beyond the combined error bounds is
    flagged.
    """
    if temperature <= 0.0:
        raise ValueError("entropy needs temperature > 0")
    L = cavity.L
    F = free_energy(cavity, temperature, quad, constants)
    dsum, dsum_err, _ = _lattice_derivative_sum(cavity, temperature, quad, constants)
    pref = constants.k_B / (8.0 * math.pi * L**2)
    value = -F.value / temperature - pref * dsum
    error = F.error / temperature + pref * dsum_err

    alt_value = alt_error = None
    flags = ()
    if quad.cross_check:
        dT = quad.fd_step_T * temperature
        tight = replace(quad, rel_tol=quad.rel_tol * 1e-2, cross_check=False)
        Fp = free_energy(cavity, temperature + dT, tight, constants)
        Fm = free_energy(cavity, temperature - dT, tight, constants)
        alt_value = -(Fp.value - Fm.value) / (2.0 * dT)
        alt_error = (Fp.error + Fm.error) / (2.0 * dT) + quad.fd_step_T**2 * abs(alt_value)
        combined = 4.0 * (error + alt_error) + 1e-4 * abs(value)
        if abs(value - alt_value) > combined:
            flags = ("entropy-path-disagreement",)
    return Estimate(value, error, alt_value, alt_error, flags)


def internal_energy(cavity: PlanarCavity, temperature: float,
                    quad: QuadratureSpec = DEFAULT_QUAD,
                    constants: PhysicalConstants = SI) -> Estimate:
    """Internal energy per unit area [J/m^2].

    Primary path: U = F + T S from the neighbouring operations.
    Cross-check path (``alt_value``): the deformed-contour evaluation,
    which collapses to U = d(beta F)/d beta = -(k_B T / 8 pi L^2)
    sum_{n>=1} xi_n int dy y dphi/dxi, computed with its own
    quadratures.  Both are reported; disagreement is flagged.
    """
    if temperature < 0.0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0.0:
        U0 = ground_state_energy(cavity, quad, constants)
        return Estimate(U0.value, U0.error, U0.value, U0.error)
    L = cavity.L
    F = free_energy(cavity, temperature, quad, constants)
    S = entropy(cavity, temperature, replace(quad, cross_check=False), constants)
    value = F.value + temperature * S.value
    error = F.error + temperature * S.error

    dsum, dsum_err, _ = _lattice_derivative_sum(cavity, temperature, quad, constants, variant="q")
    pref = constants.k_B * temperature / (8.0 * math.pi * L**2)
    alt_value = -pref * dsum
    alt_error = pref * dsum_err
    flags = ()
    if abs(value - alt_value) > 4.0 * (error + alt_error) + 1e-6 * abs(F.value):
        flags = ("internal-energy-path-disagreement",)
    return Estimate(value, error, alt_value, alt_error, flags)


def casimir_pressure(cavity: PlanarCavity, temperature: float,
                     quad: QuadratureSpec = DEFAULT_QUAD,
                     constants: PhysicalConstants = SI) -> Estimate:
    """Casimir pressure [Pa], negative = attraction.

    Defining relation P = -d(F/A)/dL, differentiated analytically inside
    the Matsubara (or T = 0) representation:

        P = -(hbar/2 pi^2) int dxi int dQ Q kappa
            sum_mu r1 r2 e^{-2 kappa L} / (1 - r1 r2 e^{-2 kappa L})

    at T = 0, with the analogous lattice sum at T > 0.  Cross-check
    path: central finite difference of the free energy in L.
    """
    if temperature < 0.0:
        raise ValueError("temperature must be >= 0")
    L = cavity.L
    if temperature == 0.0:
        est = _pressure_T0(cavity, quad, constants)
    else:
        inner_scale = [1.0]

        def term(n, x_n):
            abs_tol = 0.01 * quad.rel_tol * inner_scale[0]
            val, err = adaptive_gk15(
                lambda y: _psi(cavity, np.full_like(y, x_n), y, constants) * y * y,
                x_n, _y_cutoff(x_n), rel_tol=quad.inner_tol, abs_tol=abs_tol,
                max_panels=quad.max_panels,
            )
            if n == 0:
                inner_scale[0] = max(abs(val), 1e-300)
            return val, err

        total, err, _ = _matsubara_sum(cavity, temperature, quad, constants, term)
        pref = constants.k_B * temperature / (8.0 * math.pi * L**3)
        est = Estimate(-pref * total, pref * err)

    alt_value = alt_error = None
    flags = ()
    if quad.cross_check:
        dL = quad.fd_step_L * L
        tight = replace(quad, rel_tol=quad.rel_tol * 1e-2, cross_check=False)
        Fp = free_energy(replace(cavity, L=L + dL), temperature, tight, constants)
        Fm = free_energy(replace(cavity, L=L - dL), temperature, tight, constants)
        alt_value = -(Fp.value - Fm.value) / (2.0 * dL)
        alt_error = (Fp.error + Fm.error) / (2.0 * dL) + quad.fd_step_L**2 * abs(alt_value)
        if abs(est.value - alt_value) > 1e-4 * abs(est.value) + 4.0 * alt_error:
            flags = ("pressure-path-disagreement",)
    return Estimate(est.value, est.error, alt_value, alt_error, flags)


# ---------------------------------------------------------------------------
# generic spectral average
# ---------------------------------------------------------------------------

def spectral_average(w_im, cavity: PlanarCavity,
                     quad: QuadratureSpec = DEFAULT_QUAD,
                     constants: PhysicalConstants = SI) -> Estimate:
    """Wall contribution to the average of a real spectral quantity, per unit area.

    For a weight W(Q, omega, mu) analytic in the upper-right frequency
    quadrant and free of imaginary-axis poles, the real-axis average
    deforms to

        <W>/A = -(1/2 pi^2) sum_mu int dQ Q int dxi
                Im[W_mu(i xi)] d/dxi ln(1 - r1 r2 e^{-2 kappa L}).

    Parameters
    ----------
    w_im : callable
        ``w_im(xi, Q, pol) -> ndarray`` returning Im W(i xi); vectorized
        over xi/Q arrays.  W = hbar*omega/2 (w_im = hbar*xi/2)
        reproduces the ground-state energy.

    Notes
    -----
    Thermal weights built from the occupation g have Matsubara poles on
    the imaginary axis and are outside this entry point; the dedicated
    operations handle them.
    """
    L, c = cavity.L, constants.c
    xi_max = c / (2.0 * L) * _y_cutoff(0.0)
    inner_err = [0.0]

    def outer(xi_arr):
        out = np.empty_like(xi_arr)
        for i, xi in enumerate(xi_arr):
            if xi <= 0.0:
                out[i] = 0.0
                continue
            x = 2.0 * L * xi / c

            def f(y, _xi=xi, _x=x):
                Q = np.sqrt(np.maximum(y * y - _x * _x, 0.0)) / (2.0 * L)
                ds, dp = _dlogD_dxi_pair(cavity, _xi, Q, constants)
                w_s = np.asarray(w_im(_xi, Q, "s"), dtype=float)
                w_p = np.asarray(w_im(_xi, Q, "p"), dtype=float)
                if not (np.all(np.isfinite(w_s)) and np.all(np.isfinite(w_p))):
                    raise ValueError("non-convergent weight: Im W(i xi) not finite")
                return (w_s * ds + w_p * dp) * y

            val, err = adaptive_gk15(f, x, _y_cutoff(x), rel_tol=quad.inner_tol,
                                     abs_tol=1e-300, max_panels=quad.max_panels)
            inner_err[0] = max(inner_err[0], err)
            out[i] = val
        return out

    val, err = adaptive_gk15(outer, 0.0, xi_max, rel_tol=quad.rel_tol,
                             abs_tol=1e-300, max_panels=quad.max_panels)
    pref = -1.0 / (2.0 * math.pi**2) / (4.0 * L**2)
    return Estimate(pref * val, abs(pref) * (err + inner_err[0]))


def _dlogD_dxi_pair(cavity, xi, Q, constants):
    """Per-polarization d/dxi ln(1 - p e^{-2 kappa L}) at fixed Q."""
    L, c = cavity.L, constants.c

    def pair_of(xi_c):
        kappa = np.sqrt((xi_c / c) ** 2 + Q * Q)
        ps, pp = _products(cavity, xi_c, Q, constants)
        e = np.exp(-2.0 * kappa * L)
        return np.log(1.0 - ps * e), np.log(1.0 - pp * e)

    if cavity.analytic_in_xi:
        h = xi * 1e-100
        ls, lp = pair_of(xi + 1j * h)
        return ls.imag / h, lp.imag / h
    h = xi * 1e-5
    lsp, lpp = pair_of(xi + h)
    lsm, lpm = pair_of(xi - h)
    lsp2, lpp2 = pair_of(xi + 0.5 * h)
    lsm2, lpm2 = pair_of(xi - 0.5 * h)
    ds = (4.0 * (lsp2 - lsm2) / h - (lsp - lsm) / (2.0 * h)) / 3.0
    dp = (4.0 * (lpp2 - lpm2) / h - (lpp - lpm) / (2.0 * h)) / 3.0
    return ds, dp


# ---------------------------------------------------------------------------
# bundled record
# ---------------------------------------------------------------------------

def compute_thermodynamics(cavity: PlanarCavity, temperature: float,
                           quad: QuadratureSpec = DEFAULT_QUAD,
                           constants: PhysicalConstants = SI) -> ThermoResult:
    """All per-unit-area thermodynamic quantities for one configuration.

    ``pressure_printed_form`` is a diagnostic: the pressure evaluated
    with half the defining prefactor, for comparison against the
    alternative normalization of the force formula (see README).
    """
    U0 = ground_state_energy(cavity, quad, constants)
    F = free_energy(cavity, temperature, quad, constants)
    P = casimir_pressure(cavity, temperature, quad, constants)
    flags = list(P.flags)
    if temperature > 0.0:
        S = entropy(cavity, temperature, quad, constants)
        U = internal_energy(cavity, temperature, quad, constants)
        flags += list(S.flags) + list(U.flags)
        identity = abs(U.alt_value - (F.value + temperature * S.value))
    else:
        S = None
        U = Estimate(U0.value, U0.error, U0.value, U0.error)
        identity = 0.0
    return ThermoResult(
        L=cavity.L, temperature=temperature,
        U0=U0, U=U, F_free=F, S_entropy=S, pressure=P,
        pressure_printed_form=0.5 * P.value,
        identity_residual=identity,
        flags=tuple(flags),
    )
