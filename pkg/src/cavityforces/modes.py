"""Normal modes and wall density of states of the lossless-equivalent cavity.

With both walls replaced by their delay-form total reflection amplitudes
the dispersion relation D_t = 1 - r_1t r_2t exp(2 i k_v L) has only real
zeros; as the re-injection delays grow the zeros densify into a
quasi-continuum whose count, minus the delay-lattice background, is what
the walls contribute to the density of states:

    rho = -(1/pi) Im d/domega ln(1 - r1 r2 exp(2 i k_v L)),

valid in the propagating and the evanescent sector alike.  This module
finds the modes directly (monotone phase accumulation / sign changes),
counts them independently through the argument principle, and compares
both censuses against the closed-form rho -- the numerical verification
engine behind the thermodynamic formulas.

Everything here works in any consistent unit system (pass c = 1 for
natural units); reflection callables have signature r(omega, Q, pol) and
must broadcast over omega arrays.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .core import C_LIGHT
from .mirrors import MirrorModel
from .scattering import DelayedMirror

__all__ = [
    "WindowError",
    "CavityConfig",
    "ModeWindow",
    "DOSCensusRow",
    "uniform_reflection",
    "model_reflection",
    "delay_lattice_frequency",
    "dispersion_D",
    "dispersion_Dt",
    "validate_window",
    "find_modes",
    "count_modes_argument_principle",
    "smoothed_mode_count",
    "wall_dos",
    "dos_census_study",
]

_LOSSLESS_EPS = 1e-9
_MAX_GRID = 2_000_000


class WindowError(ValueError):
    """Analysis window violates its smallness/size invariants."""


@dataclass(frozen=True)
class CavityConfig:
    """Two delayed mirrors a distance L apart."""

    mirror1: DelayedMirror
    mirror2: DelayedMirror
    L: float
    c: float = 1.0

    def __post_init__(self):
        if self.L <= 0.0:
            raise ValueError("gap L must be positive")

    @property
    def T_total(self) -> float:
        return self.mirror1.T + self.mirror2.T


@dataclass(frozen=True)
class ModeWindow:
    """Frequency window [center - width/2, center + width/2]."""

    center: float
    width: float

    def __post_init__(self):
        if self.width <= 0.0 or self.center - 0.5 * self.width < 0.0:
            raise ValueError("need width > 0 and a non-negative lower edge")

    @property
    def lo(self) -> float:
        return self.center - 0.5 * self.width

    @property
    def hi(self) -> float:
        return self.center + 0.5 * self.width


def uniform_reflection(r_s: complex, r_p: complex | None = None):
    """Constant reflection amplitude (same at every omega, Q)."""
    r_p = r_s if r_p is None else r_p

    def refl(omega, Q, pol):
        r = r_s if pol == "s" else r_p
        return np.full_like(np.asarray(omega, dtype=complex), r)

    return refl


def model_reflection(model: MirrorModel, c: float = C_LIGHT):
    """Adapt a MirrorModel to the r(omega, Q, pol) callable interface."""
    from .core import SpectralPoint

    def refl(omega, Q, pol):
        arr = np.asarray(omega, dtype=float)
        out = np.empty(arr.shape, dtype=complex)
        for idx in np.ndindex(arr.shape or (1,)):
            w = float(arr[idx]) if arr.shape else float(arr)
            val = model.reflection(SpectralPoint.real_axis(Q, w, pol), c=c)
            if arr.shape:
                out[idx] = val
            else:
                return np.asarray(val, dtype=complex)
        return out

    return refl


def delay_lattice_frequency(ell: int, kv_L: float, delta: float, T: float) -> float:
    """Vacuum-wall eigenfrequency omega_l0 = (2 pi l - 2 k_v L - delta)/T."""
    return (2.0 * math.pi * ell - 2.0 * kv_L - delta) / T


def dispersion_D(r1: complex, r2: complex, k_v: complex, L: float) -> complex:
    """Bare dispersion function D = 1 - r1 r2 exp(2 i k_v L)."""
    return 1.0 - r1 * r2 * np.exp(2j * np.asarray(k_v) * L)


def _sector_of(Q, omega, c):
    return "propagating" if omega >= Q * c else "evanescent"


def _kv_array(Q, omega, c):
    """Vacuum normal wavevector over an omega array, continuous branch."""
    omega = np.asarray(omega, dtype=complex)
    return np.sqrt((omega / c) ** 2 - Q * Q + 0j)


def _rt_delay_array(r, delta, omega_T, sector):
    """Delay-form total reflection over arrays (inf at injection poles)."""
    r = np.asarray(r, dtype=complex)
    ph = np.exp(1j * (delta + np.asarray(omega_T)))
    with np.errstate(divide="ignore", invalid="ignore"):
        if sector == "propagating":
            rt = (r + ph) / (1.0 + np.conj(r) * ph)
            lossless = np.abs(r) >= 1.0 - _LOSSLESS_EPS
            return np.where(lossless, r, rt)
        return (r + np.conj(r) * ph) / (1.0 + ph)


def dispersion_Dt(config: CavityConfig, Q: float, omega, pol: str):
    """Equilibrium dispersion function D_t = 1 - r_1t r_2t exp(2 i k_v L).

    Real-axis frequencies only; with lossless total amplitudes its zeros
    are real.  Vectorized over omega; injection resonances of the
    evanescent delay form propagate as inf/nan values.
    """
    omega = np.asarray(omega, dtype=float)
    sector = _sector_of(Q, float(np.min(omega)), config.c)
    if sector != _sector_of(Q, float(np.max(omega)), config.c):
        raise WindowError("omega range straddles the light line; split it per sector")
    m1, m2 = config.mirror1, config.mirror2
    r1t = _rt_delay_array(m1.reflection(omega, Q, pol), m1.delta, omega * m1.T, sector)
    r2t = _rt_delay_array(m2.reflection(omega, Q, pol), m2.delta, omega * m2.T, sector)
    kv = _kv_array(Q, omega, config.c)
    return 1.0 - r1t * r2t * np.exp(2j * kv * config.L)


# ---------------------------------------------------------------------------
# window validation
# ---------------------------------------------------------------------------

def _dlogr_domega(refl, omega, Q, pol, h):
    r0 = complex(refl(np.asarray(omega), Q, pol))
    if abs(r0) < 1e-12:
        return 0.0, r0
    rp = complex(refl(np.asarray(omega + h), Q, pol))
    rm = complex(refl(np.asarray(omega - h), Q, pol))
    return abs((rp - rm) / (2.0 * h) / r0), r0


def validate_window(window: ModeWindow, config: CavityConfig, Q: float, pol: str,
                    *, census: bool = False, strict: bool = True) -> dict:
    """Check the analysis-window invariants.

    Hard requirements: single sector, and slow wall variation
    |d ln r/d omega| * width < 0.01 per mirror.  Census runs additionally
    need width * (T1 + T2) > 1e3 (raised only when ``strict``).
    Returns the measured diagnostics.
    """
    c = config.c
    if _sector_of(Q, window.lo, c) != _sector_of(Q, window.hi, c):
        raise WindowError("window straddles the light line Q = omega/c")
    h = window.width / 50.0
    slopes = []
    for m in (config.mirror1, config.mirror2):
        slope, _ = _dlogr_domega(m.reflection, window.center, Q, pol, h)
        slopes.append(slope)
        if slope * window.width >= 0.01:
            raise WindowError(
                f"wall reflection varies too fast for this window: "
                f"|dln r/domega| * width = {slope * window.width:.3g} >= 0.01"
            )
    cycles = window.width * config.T_total
    if census and strict and cycles <= 1e3:
        raise WindowError(
            f"census window needs width * (T1 + T2) > 1e3, got {cycles:.3g}"
        )
    return {"cycles": cycles, "slopes": tuple(slopes)}


# ---------------------------------------------------------------------------
# direct mode finding
# ---------------------------------------------------------------------------

def _theta_builder(config, Q, pol, omega_ref):
    """Continuous total phase theta(omega) = arg(r_1t r_2t e^{2ik_vL}), unwrapped.

    Strictly increasing in omega for passive walls; D_t = 0 exactly at
    theta = 2 pi l.
    """
    c, L = config.c, config.L
    anchors = []
    for m in (config.mirror1, config.mirror2):
        r_ref = complex(m.reflection(np.asarray(omega_ref), Q, pol))
        anchors.append(r_ref / abs(r_ref) if abs(r_ref) > 0.0 else 1.0 + 0j)

    def theta(omega):
        omega = np.asarray(omega, dtype=float)
        kv = np.sqrt(np.maximum((omega / c) ** 2 - Q * Q, 0.0))
        acc = 2.0 * kv * L
        for m, anchor in zip((config.mirror1, config.mirror2), anchors):
            r = np.asarray(m.reflection(omega, Q, pol), dtype=complex)
            phi = m.delta + omega * m.T
            lossless = np.abs(r) >= 1.0 - _LOSSLESS_EPS
            if np.all(lossless):
                acc = acc + np.angle(r * np.conj(anchor)) + np.angle(anchor)
            else:
                acc = acc + phi + 2.0 * np.angle(1.0 + r * np.exp(-1j * phi))
        return acc

    return theta


def _propagating_grid(config, window, Q, pol):
    """Sampling grid fine enough for < pi phase advance per step."""
    c, L = config.c, config.L
    rate = 0.0
    for m in (config.mirror1, config.mirror2):
        rmag = abs(complex(m.reflection(np.asarray(window.center), Q, pol)))
        if rmag < 1.0 - _LOSSLESS_EPS:
            rate += m.T * (1.0 + rmag) / (1.0 - rmag)
    kv_lo = math.sqrt(max((window.lo / c) ** 2 - Q * Q, 0.0))
    if kv_lo <= 0.0:
        raise WindowError("window touches the light line; propagating analysis needs k_v > 0")
    rate += 2.0 * L * window.hi / (c * c * kv_lo)
    step = math.pi / (2.0 * rate) if rate > 0.0 else window.width
    n = int(math.ceil(window.width / step)) + 2
    if n > _MAX_GRID:
        raise WindowError(
            f"phase advance per step exceeds pi at any affordable grid: "
            f"need step <= {step:.3e} ({n} points); shrink the window"
        )
    return np.linspace(window.lo, window.hi, n)


def find_modes(config: CavityConfig, Q: float, pol: str, window: ModeWindow,
               *, validate: bool = True) -> np.ndarray:
    """Real eigenfrequencies of D_t inside the window, in increasing order.

    Propagating sector: the unimodular products make D_t = 0 a pure
    phase condition; the strictly increasing total phase is accumulated
    on a sub-pi grid and each 2 pi crossing is bisected.  Evanescent
    sector: roots of the real, pole-free rescaling of D_t are bracketed
    by sign changes.  Every returned root satisfies |D_t| < 1e-9.
    """
    if validate:
        validate_window(window, config, Q, pol, census=False)
    sector = _sector_of(Q, window.center, config.c)
    if sector == "propagating":
        roots = _find_modes_propagating(config, Q, pol, window)
    else:
        roots = _find_modes_evanescent(config, Q, pol, window)
    if roots.size:
        resid = np.abs(dispersion_Dt(config, Q, roots, pol))
        if np.max(resid) > 1e-9:
            raise RuntimeError(f"mode polishing failed: max |D_t| = {np.max(resid):.3e}")
    return roots


def _find_modes_propagating(config, Q, pol, window):
    theta = _theta_builder(config, Q, pol, window.center)
    grid = _propagating_grid(config, window, Q, pol)
    tg = theta(grid)
    steps = np.diff(tg)
    if np.any(steps <= 0.0):
        raise WindowError("total phase is not increasing; window invariants are violated")
    if np.max(steps) > math.pi:
        raise WindowError(
            f"phase advance per grid step reached {np.max(steps):.3f} > pi; "
            f"required step <= {(grid[1] - grid[0]) * math.pi / np.max(steps):.3e}"
        )
    l_lo = int(math.ceil(tg[0] / (2.0 * math.pi) - 1e-12))
    l_hi = int(math.floor(tg[-1] / (2.0 * math.pi) + 1e-12))
    roots = []
    for ell in range(l_lo, l_hi + 1):
        target = 2.0 * math.pi * ell
        k = int(np.searchsorted(tg, target))
        if k == 0 or k == tg.size:
            continue
        root = brentq(lambda w: float(theta(w)) - target, grid[k - 1], grid[k],
                      xtol=1e-300, rtol=8.9e-16)
        roots.append(root)
    return np.array(sorted(roots))


def _evanescent_M(config, Q, pol, omega):
    """Pole-free real rescaling of the evanescent D_t.

    M = cos(phi1/2) cos(phi2/2)
        - Re(r1 e^{-i phi1/2}) Re(r2 e^{-i phi2/2}) e^{-2 kappa L};
    M and D_t share zeros wherever the injection denominators are
    nonzero.
    """
    omega = np.asarray(omega, dtype=float)
    c, L = config.c, config.L
    kappa = np.sqrt(np.maximum(Q * Q - (omega / c) ** 2, 0.0))
    decay = np.exp(-2.0 * kappa * L)
    out = decay * 0.0 + 1.0
    halves = []
    for m in (config.mirror1, config.mirror2):
        phi_half = 0.5 * (m.delta + omega * m.T)
        r = np.asarray(m.reflection(omega, Q, pol), dtype=complex)
        halves.append((np.cos(phi_half), np.real(r * np.exp(-1j * phi_half))))
    return halves[0][0] * halves[1][0] - halves[0][1] * halves[1][1] * decay


def _delay_breakpoints(mirror, Q, pol, window, which):
    """Frequencies where the evanescent total amplitude has poles or zeros.

    With r_t = Re r + Im r * tan(phi/2), phi = delta + omega*T, the
    poles sit at phi = pi (mod 2 pi) and the zeros at
    phi = 2*atan(-Re r / Im r) (mod 2 pi); both lattices drift slowly
    with omega through r and are refined by one fixed-point pass.
    """
    T, delta = mirror.T, mirror.delta

    def target(omega):
        if which == "pole":
            return math.pi
        r = complex(mirror.reflection(np.asarray(omega), Q, pol))
        if r.imag <= 1e-12 * abs(r):
            return None
        return 2.0 * math.atan2(-r.real, r.imag)

    t0 = target(window.center)
    if t0 is None:
        return np.array([])
    m_lo = math.floor((window.lo * T + mirror.delta - t0) / (2.0 * math.pi)) - 1
    m_hi = math.ceil((window.hi * T + mirror.delta - t0) / (2.0 * math.pi)) + 1
    pts = []
    for m in range(int(m_lo), int(m_hi) + 1):
        omega = (t0 + 2.0 * math.pi * m - delta) / T
        if omega <= 0.0:
            continue
        t1 = target(omega)
        if t1 is None:
            continue
        omega = (t1 + 2.0 * math.pi * m - delta) / T
        if window.lo < omega < window.hi:
            pts.append(omega)
    return np.array(pts)


def _find_modes_evanescent(config, Q, pol, window):
    """Evanescent roots of D_t by exhaustive inter-breakpoint bracketing.

    Each lossy mirror's total amplitude sweeps the real line once per
    delay period, so its poles and zeros split the window into
    subintervals on which the product r_1t r_2t is monotone with fixed
    sign; D_t - on each such piece crosses zero at most once and a sign
    check at the (inset) endpoints brackets every root.
    """
    edges = [np.array([window.lo, window.hi])]
    lossy = False
    for m in (config.mirror1, config.mirror2):
        r0 = complex(m.reflection(np.asarray(window.center), Q, pol))
        if r0.imag > 1e-12 * max(abs(r0), 1.0):
            lossy = True
        edges.append(_delay_breakpoints(m, Q, pol, window, "pole"))
        edges.append(_delay_breakpoints(m, Q, pol, window, "zero"))
    if not lossy:
        # lossless walls: r_t = r, D_t is slowly varying; coarse scan
        grid = np.linspace(window.lo, window.hi, 4096)
    else:
        grid = np.unique(np.concatenate(edges))
        if grid.size > _MAX_GRID:
            raise WindowError(f"evanescent scan needs {grid.size} subintervals; shrink the window")

    def d_real(w):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.real(dispersion_Dt(config, Q, np.asarray(w), pol))

    roots = []
    inset = 1e-10 * (window.width / max(grid.size - 1, 1))
    for a, b in zip(grid[:-1], grid[1:]):
        aa, bb = a + inset, b - inset
        fa, fb = float(d_real(aa)), float(d_real(bb))
        if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0.0:
            continue
        root = brentq(lambda w: float(d_real(w)), aa, bb, xtol=1e-300, rtol=8.9e-16)
        resid = abs(complex(dispersion_Dt(config, Q, np.asarray(root), pol)))
        if np.isfinite(resid) and resid < 1e-7:
            roots.append(root)
    return np.array(sorted(roots))


# ---------------------------------------------------------------------------
# argument-principle counting
# ---------------------------------------------------------------------------

def _linearized(refl, omega_bar, Q, pol, h):
    r0 = complex(refl(np.asarray(omega_bar), Q, pol))
    rp = complex(refl(np.asarray(omega_bar + h), Q, pol))
    rm = complex(refl(np.asarray(omega_bar - h), Q, pol))
    rp2 = complex(refl(np.asarray(omega_bar + 0.5 * h), Q, pol))
    rm2 = complex(refl(np.asarray(omega_bar - 0.5 * h), Q, pol))
    d1 = (rp - rm) / (2.0 * h)
    d2 = (rp2 - rm2) / h
    return r0, (4.0 * d2 - d1) / 3.0


def _counting_function(config, Q, pol, window, sector):
    """Entire counting function f sharing the window zeros of D_t.

    Built from first-order analytic surrogates r~ and r~* of the wall
    amplitudes and their conjugates about the window center, so f is
    analytic in omega even though conj(r(omega)) is not.
    """
    c, L = config.c, config.L
    h = window.width / 50.0
    lin = []
    for m in (config.mirror1, config.mirror2):
        r0, r1 = _linearized(m.reflection, window.center, Q, pol, h)
        lin.append((r0, r1, m.delta, m.T))
    wbar = window.center

    def f(z):
        z = np.asarray(z, dtype=complex)
        terms = []
        for r0, r1, delta, T in lin:
            r = r0 + r1 * (z - wbar)
            rcc = np.conj(r0) + np.conj(r1) * (z - wbar)
            e = np.exp(1j * (delta + z * T))
            terms.append((r, rcc, e))
        (ra, rca, ea), (rb, rcb, eb) = terms
        if sector == "propagating":
            kv = np.sqrt((z / c) ** 2 - Q * Q + 0j)
            return (1.0 + rca * ea) * (1.0 + rcb * eb) - (ra + ea) * (rb + eb) * np.exp(2j * kv * L)
        kappa = np.sqrt(Q * Q - (z / c) ** 2 + 0j)
        return (1.0 + ea) * (1.0 + eb) - (ra + rca * ea) * (rb + rcb * eb) * np.exp(-2.0 * kappa * L)

    return f


def _march_phase(f, za, zb, fa, fb, depth=0):
    """Accumulated phase of f from za to zb, bisecting while steps exceed pi/2."""
    d = cmath.phase(fb / fa)
    if abs(d) <= 0.5 * math.pi:
        return d
    if depth >= 48:
        raise RuntimeError("phase marching failed to resolve the contour")
    zm = 0.5 * (za + zb)
    fm = complex(f(zm))
    if fm == 0.0:
        raise ZeroDivisionError("contour point hit a zero")
    return (_march_phase(f, za, zm, fa, fm, depth + 1)
            + _march_phase(f, zm, zb, fm, fb, depth + 1))


def count_modes_argument_principle(config: CavityConfig, Q: float, pol: str,
                                   window: ModeWindow, *, eta: float | None = None,
                                   census: bool = False, strict: bool = False,
                                   validate: bool = True) -> int:
    """Number of counting-function zeros in the window (argument principle).

    Winds the analytic counting function around a rectangle enclosing
    the real-frequency window and accumulates its phase; the winding
    number equals the zero count.  With zero walls this counts the
    delay-lattice background N0 (the propagating vacuum modes; in the
    evanescent sector the lattice of re-injection resonances), which the
    census subtracts.

    A contour passing within ~1e-12 of a zero is nudged and the count
    retried, at most 5 times.
    """
    if validate:
        validate_window(window, config, Q, pol, census=census, strict=strict)
    sector = _sector_of(Q, window.center, config.c)
    f = _counting_function(config, Q, pol, window, sector)
    t_tot = config.T_total
    eta0 = eta if eta is not None else min(window.width / 4.0, 6.0 * math.pi / t_tot)
    lo, hi = window.lo, window.hi
    spacing = 2.0 * math.pi / t_tot

    for attempt in range(5):
        e = eta0 * (1.0 + 0.37 * attempt)
        shift = 1e-6 * spacing * attempt
        a, b = lo - shift, hi + shift
        corners = [a - 1j * e, b - 1j * e, b + 1j * e, a + 1j * e]
        n_horiz = max(96, int(8 * window.width * t_tot / (2.0 * math.pi)))
        if n_horiz > _MAX_GRID:
            raise WindowError(f"contour needs {n_horiz} points; shrink the window")
        try:
            total = 0.0
            ok = True
            for k in range(4):
                za, zb = corners[k], corners[(k + 1) % 4]
                n_pts = n_horiz if k % 2 == 0 else 96
                pts = za + (zb - za) * np.linspace(0.0, 1.0, n_pts)
                vals = f(pts)
                if np.any(np.abs(vals) < 1e-12 * np.median(np.abs(vals))):
                    ok = False
                    break
                for j in range(n_pts - 1):
                    total += _march_phase(f, pts[j], pts[j + 1],
                                          complex(vals[j]), complex(vals[j + 1]))
            if not ok:
                continue
            winding = total / (2.0 * math.pi)
            if abs(winding - round(winding)) < 0.05:
                return int(round(winding))
        except (ZeroDivisionError, RuntimeError):
            continue
    raise RuntimeError("argument-principle count failed after 5 contour nudges")


def _vacuum_config(config: CavityConfig) -> CavityConfig:
    zero = uniform_reflection(0.0)
    return replace(
        config,
        mirror1=replace(config.mirror1, reflection=zero),
        mirror2=replace(config.mirror2, reflection=zero),
    )


def _line_phase(f, z_a, z_b, n_pts):
    """Branch-tracked phase accumulated by f along the segment z_a -> z_b."""
    pts = z_a + (z_b - z_a) * np.linspace(0.0, 1.0, n_pts)
    vals = f(pts)
    total = 0.0
    for j in range(n_pts - 1):
        total += _march_phase(f, pts[j], pts[j + 1], complex(vals[j]), complex(vals[j + 1]))
    return total


def smoothed_mode_count(config: CavityConfig, Q: float, pol: str, window: ModeWindow,
                        *, eta: float | None = None, validate: bool = True) -> float:
    """Smoothed (non-integer) mode count of the counting function.

    Evaluates the argument-principle integral along the two horizontal
    lines Im omega = -eta and Im omega = +eta only,

        N(Omega) = [arg f]_lower / 2 pi - [arg f]_upper / 2 pi,

    dropping the vertical closures.  For eta * T >> 1 this smooths the
    integer mode staircase into the continuous counting function whose
    vacuum-subtracted density is the wall density of states; the
    difference from the closed-contour integer count decays like
    exp(-eta*T).  This is the census estimator: the wall contribution to
    the *count* in any window is sub-integer (bounded by the reflection
    phase sweep), so only the smoothed count can resolve it.
    """
    if validate:
        validate_window(window, config, Q, pol, census=False)
    sector = _sector_of(Q, window.center, config.c)
    f = _counting_function(config, Q, pol, window, sector)
    t_tot = config.T_total
    if eta is None:
        # eta*T large enough to smooth the staircase, eta small enough
        # not to broaden the density of states being measured
        eta = min(window.width / 10.0, 25.0 / t_tot)
    n_horiz = max(96, int(8 * window.width * t_tot / (2.0 * math.pi)))
    if n_horiz > _MAX_GRID:
        raise WindowError(f"smoothed census needs {n_horiz} points; shrink the window")
    lower = _line_phase(f, window.lo - 1j * eta, window.hi - 1j * eta, n_horiz)
    upper = _line_phase(f, window.lo + 1j * eta, window.hi + 1j * eta, n_horiz)
    return (lower - upper) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# density of states
# ---------------------------------------------------------------------------

def wall_dos(r1, r2, Q: float, omega: float, L: float, *, c: float = 1.0,
             pol: str = "s", h: float | None = None) -> float:
    """Wall contribution to the density of states at fixed (Q, pol).

    rho = -(1/pi) Im d/domega ln(1 - r1 r2 exp(2 i k_v L)), with r1, r2
    callables of (omega, Q, pol).  The derivative uses branch-tracked
    central differences (the log of the ratio D(omega+h)/D(omega-h))
    with Richardson extrapolation; a detected branch jump shrinks the
    step, and steps below 1e-12 * omega are a hard error.
    """
    def logD(w):
        kv = complex(np.sqrt(complex((w / c) ** 2 - Q * Q)))
        if kv.imag < 0.0 or (kv.imag == 0.0 and kv.real < 0.0):
            kv = -kv
        r = complex(np.asarray(r1(np.asarray(w), Q, pol))) * complex(np.asarray(r2(np.asarray(w), Q, pol)))
        return 1.0 - r * cmath.exp(2j * kv * L)

    def slope(step):
        ratio = logD(omega + step) / logD(omega - step)
        if abs(cmath.phase(ratio)) > 0.5 * math.pi:
            return None
        return cmath.log(ratio) / (2.0 * step)

    h0 = h if h is not None else 1e-5 * max(omega, Q * c)
    while True:
        d1 = slope(h0)
        d2 = slope(0.5 * h0)
        if d1 is not None and d2 is not None:
            deriv = (4.0 * d2 - d1) / 3.0
            return -deriv.imag / math.pi
        h0 *= 0.25
        if h0 < 1e-12 * max(omega, Q * c):
            raise RuntimeError("branch jump persists at the smallest usable step")


@dataclass(frozen=True)
class DOSCensusRow:
    """One delay value of the census convergence study."""

    T_total: float
    N: int
    N0: int
    n_roots: int
    census_rho: float
    formula_rho: float
    deviation: float
    quantization: float
    delta_invariant: bool
    flags: tuple[str, ...] = ()


def dos_census_study(reflection1, reflection2, Q: float, pol: str,
                     window: ModeWindow, L: float,
                     T_values=(1e2, 1e3, 1e4), deltas=(0.0, 0.0),
                     delta_shift: float = 1.0, c: float = 1.0) -> list[DOSCensusRow]:
    """Mode-census convergence study across re-injection delays.

    For each total delay T:

    * integer censuses: the closed-contour zero count N, its vacuum
      (delay-lattice) background N0, and the direct root count of
      ``find_modes`` -- these agree exactly, and N - N0 stays within the
      +-1 counting quantization of the sub-integer wall contribution;
    * smoothed census: the open-contour count at finite smoothing eta
      (``smoothed_mode_count``), vacuum-subtracted and divided by the
      window width.  Its deviation from the closed-form ``wall_dos`` at
      the window center decays as width*T grows -- the convergence this
      study demonstrates.

    Both censuses must be invariant under shifting either slow phase
    delta by ``delta_shift`` (within +-1 mode / within quantization).
    Sub-threshold delays (width*T <= 1e3) are admitted here -- that is
    the point of a convergence study -- and flagged.
    """
    rho_f = wall_dos(reflection1, reflection2, Q, window.center, L, c=c, pol=pol)
    rows = []
    prev_dev = None
    for T_tot in T_values:
        half = 0.5 * T_tot
        config = CavityConfig(
            DelayedMirror(reflection1, half, deltas[0]),
            DelayedMirror(reflection2, half, deltas[1]),
            L, c,
        )
        flags = []
        diag = validate_window(window, config, Q, pol, census=True, strict=False)
        if diag["cycles"] <= 1e3:
            flags.append("below-census-threshold")
        N = count_modes_argument_principle(config, Q, pol, window, census=True, validate=False)
        N0 = count_modes_argument_principle(_vacuum_config(config), Q, pol, window,
                                            census=True, validate=False)
        n_roots = int(find_modes(config, Q, pol, window, validate=False).size)
        quant = 1.0 / (window.width * T_tot)
        census = (smoothed_mode_count(config, Q, pol, window, validate=False)
                  - smoothed_mode_count(_vacuum_config(config), Q, pol, window,
                                        validate=False)) / window.width
        dev = abs(census - rho_f)

        shifted = CavityConfig(
            DelayedMirror(reflection1, half, deltas[0] + delta_shift),
            DelayedMirror(reflection2, half, deltas[1]),
            L, c,
        )
        Ns = count_modes_argument_principle(shifted, Q, pol, window, census=True, validate=False)
        N0s = count_modes_argument_principle(_vacuum_config(shifted), Q, pol, window,
                                             census=True, validate=False)
        delta_ok = abs((Ns - N0s) - (N - N0)) <= 1

        if prev_dev is not None and dev > prev_dev + 2.0 * quant:
            flags.append("non-monotone-beyond-quantization")
        prev_dev = dev
        rows.append(DOSCensusRow(
            T_total=T_tot, N=N, N0=N0, n_roots=n_roots,
            census_rho=census, formula_rho=rho_f, deviation=dev,
            quantization=quant, delta_invariant=delta_ok, flags=tuple(flags),
        ))
    return rows
