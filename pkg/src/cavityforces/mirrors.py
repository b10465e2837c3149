"""Reflection amplitudes of the cavity walls.

The walls enter every downstream formula only through their reflection
amplitudes r(Q, frequency, polarization).  This module produces those
amplitudes from standard optical models (perfect mirror, homogeneous
half-space, layered stack) or from tabulated data, and validates
passivity: |r| <= 1 for propagating waves, Im r >= 0 for evanescent
waves.

Imaginary-axis evaluation is the production path for the thermodynamic
integrals; it is vectorized over numpy arrays and accepts complex xi so
that derivatives can be taken by complex step.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from scipy.interpolate import PchipInterpolator, RegularGridInterpolator

from .core import C_LIGHT, Polarization, SpectralPoint, branch_sqrt, normal_wavevector

__all__ = [
    "PassivityError",
    "PassivityReport",
    "FresnelPole",
    "PermittivityModel",
    "Constant",
    "Drude",
    "Plasma",
    "TabulatedPermittivity",
    "MirrorModel",
    "PerfectMirror",
    "HalfSpace",
    "Stack",
    "TabulatedReflection",
    "VACUUM",
    "permittivity",
    "reflect_halfspace",
    "reflect_interface",
    "reflect_stack",
    "passivity_check",
    "load_permittivity_table",
    "load_reflection_table",
    "load_stack",
    "parse_permittivity_spec",
    "parse_mirror_spec",
]

PASSIVITY_TOL = 1e-9


class PassivityError(ValueError):
    """A reflection amplitude or material model implies gain."""


class FresnelPole(ZeroDivisionError):
    """Vanishing Fresnel denominator (lossless pole condition)."""


# ---------------------------------------------------------------------------
# permittivity models
# ---------------------------------------------------------------------------

class PermittivityModel:
    """Base class for permittivity providers.

    Subclasses supply eps on the real axis (complex) and on the
    imaginary axis (real, >= 1 for passive causal media).  The helpers
    ``eps_xi2`` (eps(i xi) * xi^2) and ``inv_eps`` (1/eps(i xi)) stay
    regular at xi = 0 even when eps itself diverges there, which is what
    the zero-frequency Matsubara term needs.
    """

    analytic_in_xi = True

    def eps_real_axis(self, omega):
        raise NotImplementedError

    def eps_imag_axis(self, xi):
        raise NotImplementedError

    def eps_xi2(self, xi):
        return self.eps_imag_axis(xi) * xi * xi

    def inv_eps(self, xi):
        return 1.0 / self.eps_imag_axis(xi)


@dataclass(frozen=True)
class Constant(PermittivityModel):
    """Frequency-independent permittivity."""

    eps: complex

    def eps_real_axis(self, omega):
        return np.asarray(self.eps) + 0.0 * np.asarray(omega)

    def eps_imag_axis(self, xi):
        e = complex(self.eps)
        if abs(e.imag) > 0.0 or e.real < 1.0:
            raise PassivityError(
                f"constant eps on the imaginary axis must be real and >= 1, got {self.eps}"
            )
        return e.real + 0.0 * np.asarray(xi)

    def eps_xi2(self, xi):
        xi = np.asarray(xi)
        return self.eps_imag_axis(np.real(xi)) * xi * xi

    def inv_eps(self, xi):
        return 1.0 / self.eps_imag_axis(np.real(np.asarray(xi))) + 0.0 * np.asarray(xi)


@dataclass(frozen=True)
class Drude(PermittivityModel):
    """Drude metal: eps(omega) = 1 - wp^2/(omega*(omega + i*gamma)).

    On the imaginary axis eps(i xi) = 1 + wp^2/(xi*(xi + gamma)) is
    real, > 1 and monotone decreasing in xi.
    """

    wp: float
    gamma: float

    def __post_init__(self):
        if self.wp <= 0.0 or self.gamma < 0.0:
            raise ValueError("Drude requires wp > 0 and gamma >= 0")

    def eps_real_axis(self, omega):
        omega = np.asarray(omega, dtype=complex)
        if np.any(np.abs(omega) == 0.0):
            raise ValueError("Drude permittivity has a pole at omega = 0")
        return 1.0 - self.wp**2 / (omega * (omega + 1j * self.gamma))

    def eps_imag_axis(self, xi):
        xi = np.asarray(xi)
        return 1.0 + self.wp**2 / (xi * (xi + self.gamma))

    def eps_xi2(self, xi):
        xi = np.asarray(xi)
        return xi * xi + self.wp**2 * xi / (xi + self.gamma)

    def inv_eps(self, xi):
        xi = np.asarray(xi)
        s = xi * (xi + self.gamma)
        return s / (s + self.wp**2)


@dataclass(frozen=True)
class Plasma(PermittivityModel):
    """Collisionless plasma: Drude with gamma = 0."""

    wp: float

    def __post_init__(self):
        if self.wp <= 0.0:
            raise ValueError("Plasma requires wp > 0")

    def eps_real_axis(self, omega):
        omega = np.asarray(omega, dtype=complex)
        if np.any(np.abs(omega) == 0.0):
            raise ValueError("Plasma permittivity has a pole at omega = 0")
        return 1.0 - self.wp**2 / (omega * omega)

    def eps_imag_axis(self, xi):
        xi = np.asarray(xi)
        return 1.0 + self.wp**2 / (xi * xi)

    def eps_xi2(self, xi):
        xi = np.asarray(xi)
        return xi * xi + self.wp**2

    def inv_eps(self, xi):
        xi = np.asarray(xi)
        return xi * xi / (xi * xi + self.wp**2)


@dataclass(frozen=True)
class TabulatedPermittivity(PermittivityModel):
    """Permittivity sampled on the imaginary axis.

    Interpolation is monotone piecewise-cubic in log(xi).  Above the
    last sample a Drude-asymptote tail 1 + A/xi^2 applies (A matched at
    the last sample unless given); below the first sample the query is
    rejected unless ``low_tail="constant"`` is configured.  Real-axis
    queries are out of scope for tabulated data.
    """

    xi: np.ndarray
    eps: np.ndarray
    tail_A: float | None = None
    low_tail: Literal["constant"] | None = None
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)
    _A: float = field(init=False, repr=False, compare=False)

    analytic_in_xi = False

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        if xi.ndim != 1 or xi.size < 2 or eps.shape != xi.shape:
            raise ValueError("need matching 1-d xi and eps arrays with >= 2 samples")
        if np.any(np.diff(xi) <= 0.0) or xi[0] <= 0.0:
            raise ValueError("xi grid must be positive and strictly increasing")
        if np.any(eps < 1.0):
            raise PassivityError("tabulated eps(i xi) must be >= 1 everywhere")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "_interp", PchipInterpolator(np.log(xi), eps, extrapolate=False))
        A = self.tail_A if self.tail_A is not None else (eps[-1] - 1.0) * xi[-1] ** 2
        object.__setattr__(self, "_A", float(A))

    def eps_real_axis(self, omega):
        raise ValueError("tabulated permittivity is defined on the imaginary axis only")

    def eps_imag_axis(self, xi):
        x = np.asarray(xi, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        below = x < self.xi[0]
        above = x > self.xi[-1]
        inside = ~(below | above)
        if np.any(below):
            if self.low_tail == "constant":
                out[below] = self.eps[0]
            else:
                raise ValueError(
                    f"xi = {x[below].min():g} below tabulated range "
                    f"[{self.xi[0]:g}, {self.xi[-1]:g}] and no low-frequency tail configured"
                )
        if np.any(above):
            out[above] = 1.0 + self._A / x[above] ** 2
        if np.any(inside):
            out[inside] = self._interp(np.log(x[inside]))
        return out[0] if scalar else out

    def eps_xi2(self, xi):
        x = np.asarray(xi, dtype=float)
        if self.low_tail == "constant":
            # regular at 0: eps bounded there
            return np.where(x == 0.0, 0.0, self.eps_imag_axis(np.maximum(x, self.xi[0] * 1e-6)) * x * x)
        return self.eps_imag_axis(x) * x * x


# ---------------------------------------------------------------------------
# Fresnel amplitudes and passivity
# ---------------------------------------------------------------------------

def permittivity(model: PermittivityModel, point: SpectralPoint) -> complex:
    """Evaluate a permittivity model at a spectral point."""
    if point.axis == "real":
        return complex(model.eps_real_axis(point.frequency))
    return complex(model.eps_imag_axis(point.frequency))


def reflect_interface(pol: Polarization, k_a: complex, k_b: complex,
                      eps_a: complex, eps_b: complex) -> complex:
    """Fresnel amplitude for incidence from medium a onto medium b.

    s: (k_a - k_b)/(k_a + k_b);  p: (eps_b k_a - eps_a k_b)/(eps_b k_a + eps_a k_b).
    """
    if pol == "s":
        num, den = k_a - k_b, k_a + k_b
    else:
        num, den = eps_b * k_a - eps_a * k_b, eps_b * k_a + eps_a * k_b
    if abs(den) < 1e-300 or abs(den) < 1e-14 * (abs(num) + abs(k_a) + abs(k_b)):
        raise FresnelPole(f"vanishing Fresnel denominator for pol={pol}")
    return num / den


def reflect_halfspace(point: SpectralPoint, eps: complex, *, c: float = C_LIGHT) -> complex:
    """Fresnel reflection of a vacuum/half-space interface at a spectral point."""
    if point.axis == "imag":
        e = complex(eps)
        if e.imag != 0.0 or e.real < 1.0:
            raise PassivityError(f"imaginary-axis eps must be real >= 1, got {eps}")
        return complex(_halfspace_imag(Constant(e.real), point.frequency, point.Q, point.pol, c))
    k_v = normal_wavevector(point.Q, point.frequency, 1.0, c=c).value
    k_m = normal_wavevector(point.Q, point.frequency, eps, c=c).value
    return reflect_interface(point.pol, k_v, k_m, 1.0, eps)


def _halfspace_imag(material: PermittivityModel, xi, Q, pol: Polarization, c: float):
    """Imaginary-axis Fresnel amplitude, regular at xi = 0.

    Uses kappa_m = sqrt(eps*xi^2/c^2 + Q^2) through the xi^2*eps
    combination so that diverging static permittivities (metals) give
    the correct zero-frequency limits.  Vectorized; accepts complex xi.
    """
    xi = np.asarray(xi)
    Q = np.asarray(Q)
    kappa = np.sqrt((xi / c) ** 2 + Q * Q)
    kappa_m = np.sqrt(material.eps_xi2(xi) / c**2 + Q * Q)
    r_s = (kappa - kappa_m) / (kappa + kappa_m)
    if pol == "s":
        return r_s
    inv = material.inv_eps(xi)
    return (kappa - inv * kappa_m) / (kappa + inv * kappa_m)


def passivity_check(r: complex, sector: Literal["propagating", "evanescent"],
                    tol: float = PASSIVITY_TOL, point: SpectralPoint | None = None):
    """Check that a reflection amplitude is consistent with a passive wall.

    Propagating: |r| <= 1 (no gain).  Evanescent: Im r >= 0 (the wall
    absorbs, never emits, net evanescent energy).

    Returns
    -------
    PassivityReport
        ``ok`` flag plus the violation magnitude and a diagnostic
        message carrying the offending point when one was given.
    """
    if sector == "propagating":
        excess = abs(r) - 1.0
        ok = excess <= tol * max(1.0, abs(r))
        kind = "|r| > 1"
    elif sector == "evanescent":
        excess = -r.imag
        ok = excess <= tol * max(1.0, abs(r))
        kind = "Im r < 0"
    else:
        raise ValueError(f"unknown sector {sector!r}")
    where = ""
    if point is not None:
        where = f" at (Q={point.Q:g}, {point.axis} freq={point.frequency:g}, pol={point.pol})"
    msg = "pass" if ok else f"passivity violated ({kind}, excess {max(excess, 0.0):.3e}){where}"
    return PassivityReport(ok=ok, sector=sector, value=complex(r), excess=max(excess, 0.0), message=msg)


@dataclass(frozen=True)
class PassivityReport:
    ok: bool
    sector: str
    value: complex
    excess: float
    message: str

    def require(self):
        if not self.ok:
            raise PassivityError(self.message)


# ---------------------------------------------------------------------------
# mirror models
# ---------------------------------------------------------------------------

class MirrorModel:
    """Base class: a provider of r_s, r_p at any spectral point."""

    analytic_in_xi = True

    def reflection(self, point: SpectralPoint, *, c: float = C_LIGHT) -> complex:
        raise NotImplementedError

    def r_imag(self, xi, Q):
        """(r_s, r_p) on the imaginary axis; vectorized, complex-step safe."""
        raise NotImplementedError


@dataclass(frozen=True)
class PerfectMirror(MirrorModel):
    """Ideal conductor: r_s = -1, r_p = +1 at every point.

    Sign convention fixed by the eps -> infinity Fresnel limit; only the
    product r1*r2 enters physical results.
    """

    def reflection(self, point: SpectralPoint, *, c: float = C_LIGHT) -> complex:
        return -1.0 if point.pol == "s" else 1.0

    def r_imag(self, xi, Q):
        shape = np.broadcast(np.asarray(xi), np.asarray(Q)).shape
        return -np.ones(shape), np.ones(shape)


@dataclass(frozen=True)
class HalfSpace(MirrorModel):
    """Homogeneous half-space described by a permittivity model."""

    material: PermittivityModel

    @property
    def analytic_in_xi(self):
        return self.material.analytic_in_xi

    def reflection(self, point: SpectralPoint, *, c: float = C_LIGHT) -> complex:
        if point.axis == "imag":
            return complex(_halfspace_imag(self.material, point.frequency, point.Q, point.pol, c))
        eps = self.material.eps_real_axis(point.frequency)
        k_v = normal_wavevector(point.Q, point.frequency, 1.0, c=c).value
        k_m = normal_wavevector(point.Q, point.frequency, complex(eps), c=c).value
        return reflect_interface(point.pol, k_v, k_m, 1.0, complex(eps))

    def r_imag(self, xi, Q, *, c: float = C_LIGHT):
        return (_halfspace_imag(self.material, xi, Q, "s", c),
                _halfspace_imag(self.material, xi, Q, "p", c))


VACUUM = Constant(1.0)


@dataclass(frozen=True)
class Stack(MirrorModel):
    """Layered mirror: finite layers over a half-space (or vacuum) substrate.

    ``layers`` is an ordered tuple of (material, thickness) from the
    cavity side inward.  Reflections combine innermost-out through

        r = (r_top + r_below e^{2 i k d}) / (1 + r_top r_below e^{2 i k d})

    with k the normal wavevector inside each layer.
    """

    layers: tuple[tuple[PermittivityModel, float], ...]
    substrate: PermittivityModel | None = None

    def __post_init__(self):
        for _, d in self.layers:
            if d <= 0.0:
                raise ValueError("layer thicknesses must be positive")

    @property
    def analytic_in_xi(self):
        mats = [m for m, _ in self.layers] + ([self.substrate] if self.substrate else [])
        return all(m.analytic_in_xi for m in mats)

    def _media(self):
        mats = [VACUUM] + [m for m, _ in self.layers] + [self.substrate or VACUUM]
        widths = [math.inf] + [d for _, d in self.layers] + [math.inf]
        return mats, widths

    def reflection(self, point: SpectralPoint, *, c: float = C_LIGHT) -> complex:
        if point.axis == "imag":
            return complex(self._r_imag_pol(point.frequency, point.Q, point.pol, c))
        mats, widths = self._media()
        eps = [complex(m.eps_real_axis(point.frequency)) for m in mats]
        kz = [normal_wavevector(point.Q, point.frequency, e, c=c).value for e in eps]
        r = reflect_interface(point.pol, kz[-2], kz[-1], eps[-2], eps[-1])
        for j in range(len(mats) - 2, 0, -1):
            phase = cmath.exp(2j * kz[j] * widths[j])
            r_j = reflect_interface(point.pol, kz[j - 1], kz[j], eps[j - 1], eps[j])
            r = (r_j + r * phase) / (1.0 + r_j * r * phase)
        return r

    def _r_imag_pol(self, xi, Q, pol: Polarization, c: float):
        xi = np.asarray(xi)
        Q = np.asarray(Q)
        if np.any(np.real(xi) == 0.0):
            # static limit taken numerically; layered metals have no
            # closed regular form there
            lo = 1e-8 * (np.max(np.abs(Q)) * c + 1.0)
            r1 = self._r_imag_pol(np.asarray(lo), Q, pol, c)
            r2 = self._r_imag_pol(np.asarray(2.0 * lo), Q, pol, c)
            return 2.0 * r1 - r2
        mats, widths = self._media()
        eps = [m.eps_imag_axis(xi) for m in mats]
        kz = [np.sqrt(e * (xi / c) ** 2 + Q * Q) for e in eps]
        r = self._fresnel_imag(pol, kz[-2], kz[-1], eps[-2], eps[-1])
        for j in range(len(mats) - 2, 0, -1):
            decay = np.exp(-2.0 * kz[j] * widths[j])
            r_j = self._fresnel_imag(pol, kz[j - 1], kz[j], eps[j - 1], eps[j])
            r = (r_j + r * decay) / (1.0 + r_j * r * decay)
        return r

    @staticmethod
    def _fresnel_imag(pol, ka, kb, ea, eb):
        if pol == "s":
            return (ka - kb) / (ka + kb)
        return (eb * ka - ea * kb) / (eb * ka + ea * kb)

    def r_imag(self, xi, Q, *, c: float = C_LIGHT):
        return (self._r_imag_pol(xi, Q, "s", c), self._r_imag_pol(xi, Q, "p", c))


@dataclass(frozen=True)
class TabulatedReflection(MirrorModel):
    """Reflection amplitudes sampled on an imaginary-axis (xi, Q) grid.

    Bilinear interpolation (keeps the tabulated bounds, so passive input
    stays passive).  Queries outside the grid are rejected.  Real-axis
    evaluation is out of scope for tabulated reflection data.
    """

    xi: np.ndarray
    Q: np.ndarray
    r_s: np.ndarray
    r_p: np.ndarray
    _interp_s: RegularGridInterpolator = field(init=False, repr=False, compare=False)
    _interp_p: RegularGridInterpolator = field(init=False, repr=False, compare=False)

    analytic_in_xi = False

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        Q = np.asarray(self.Q, dtype=float)
        rs = np.asarray(self.r_s, dtype=float)
        rp = np.asarray(self.r_p, dtype=float)
        if rs.shape != (xi.size, Q.size) or rp.shape != rs.shape:
            raise ValueError("r_s/r_p must have shape (len(xi), len(Q))")
        if np.any(np.diff(xi) <= 0.0) or np.any(np.diff(Q) <= 0.0):
            raise ValueError("xi and Q grids must be strictly increasing")
        if np.max(np.abs(rs)) > 1.0 + PASSIVITY_TOL or np.max(np.abs(rp)) > 1.0 + PASSIVITY_TOL:
            raise PassivityError("tabulated |r| exceeds 1 on the imaginary axis")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "r_s", rs)
        object.__setattr__(self, "r_p", rp)
        object.__setattr__(self, "_interp_s",
                           RegularGridInterpolator((xi, Q), rs, method="linear", bounds_error=True))
        object.__setattr__(self, "_interp_p",
                           RegularGridInterpolator((xi, Q), rp, method="linear", bounds_error=True))

    def reflection(self, point: SpectralPoint, *, c: float = C_LIGHT) -> complex:
        if point.axis != "imag":
            raise ValueError("tabulated reflection data are defined on the imaginary axis only")
        rs, rp = self.r_imag(point.frequency, point.Q)
        return complex(rs if point.pol == "s" else rp)

    def r_imag(self, xi, Q):
        xi = np.real(np.asarray(xi, dtype=complex))
        Q = np.real(np.asarray(Q, dtype=complex))
        xi, Q = np.broadcast_arrays(xi, Q)
        pts = np.stack([xi.ravel(), Q.ravel()], axis=-1)
        try:
            rs = self._interp_s(pts).reshape(xi.shape)
            rp = self._interp_p(pts).reshape(xi.shape)
        except ValueError as exc:
            raise ValueError(
                f"tabulated reflection queried outside its grid "
                f"(xi in [{self.xi[0]:g}, {self.xi[-1]:g}], Q in [{self.Q[0]:g}, {self.Q[-1]:g}]): {exc}"
            ) from None
        return rs, rp


def reflect_stack(stack: Stack, point: SpectralPoint) -> complex:
    """Reflection amplitude of a layered mirror at a spectral point."""
    return stack.reflection(point)


# ---------------------------------------------------------------------------
# file loaders and model spec parsing
# ---------------------------------------------------------------------------

def _data_rows(path, n_cols):
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != n_cols:
            raise ValueError(f"{path}:{lineno}: expected {n_cols} columns, got {len(parts)}")
        try:
            rows.append(([float(p) for p in parts], lineno))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric field in {line!r}") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def load_permittivity_table(path, **kwargs) -> TabulatedPermittivity:
    """Load a two-column ``xi_rad_per_s  eps_at_i_xi`` table."""
    rows = _data_rows(path, 2)
    xi = []
    eps = []
    for (x, e), lineno in rows:
        if xi and x == xi[-1]:
            raise ValueError(f"{path}:{lineno}: duplicate xi = {x:g}")
        if xi and x < xi[-1]:
            raise ValueError(f"{path}:{lineno}: xi grid must be strictly increasing")
        xi.append(x)
        eps.append(e)
    return TabulatedPermittivity(np.array(xi), np.array(eps), **kwargs)


def load_reflection_table(path) -> TabulatedReflection:
    """Load a four-column ``xi  Q  r_s  r_p`` rectangular-grid table."""
    rows = _data_rows(path, 4)
    seen = set()
    for vals, lineno in rows:
        key = (vals[0], vals[1])
        if key in seen:
            raise ValueError(f"{path}:{lineno}: duplicate (xi, Q) row {key}")
        seen.add(key)
    data = np.array([vals for vals, _ in rows])
    xi_vals = np.unique(data[:, 0])
    q_vals = np.unique(data[:, 1])
    if xi_vals.size * q_vals.size != data.shape[0]:
        raise ValueError(f"{path}: (xi, Q) samples do not form a rectangular grid")
    rs = np.full((xi_vals.size, q_vals.size), np.nan)
    rp = np.full_like(rs, np.nan)
    ix = np.searchsorted(xi_vals, data[:, 0])
    iq = np.searchsorted(q_vals, data[:, 1])
    rs[ix, iq] = data[:, 2]
    rp[ix, iq] = data[:, 3]
    if np.any(np.isnan(rs)) or np.any(np.isnan(rp)):
        raise ValueError(f"{path}: missing grid entries")
    return TabulatedReflection(xi_vals, q_vals, rs, rp)


_SPEC_RE = re.compile(r"^(?P<name>[a-z]+)(?::(?P<args>.*))?$")


def _parse_kwargs(argstr):
    out = {}
    for item in argstr.split(","):
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"expected key=value, got {item!r}")
        key, val = item.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def parse_permittivity_spec(spec: str) -> PermittivityModel:
    """Parse a material spec such as ``drude:wp=1.37e16,gamma=5.3e13``.

    Grammar: ``vacuum`` | ``constant:eps=..`` | ``eps=..`` |
    ``drude:wp=..,gamma=..`` | ``plasma:wp=..`` | ``table:file=..``.
    """
    spec = spec.strip()
    if spec == "vacuum":
        return VACUUM
    if spec.startswith("eps="):
        return Constant(complex(spec[4:]))
    m = _SPEC_RE.match(spec)
    if not m:
        raise ValueError(f"cannot parse material spec {spec!r}")
    name, args = m.group("name"), _parse_kwargs(m.group("args") or "")
    if name == "constant":
        return Constant(complex(args["eps"]))
    if name == "drude":
        return Drude(float(args["wp"]), float(args.get("gamma", "0")))
    if name == "plasma":
        return Plasma(float(args["wp"]))
    if name == "table":
        return load_permittivity_table(args["file"])
    raise ValueError(f"unknown material {name!r} in spec {spec!r}")


def load_stack(path) -> Stack:
    """Load a stack file: one ``material thickness_m`` line per layer.

    A final line with thickness ``inf`` gives the substrate half-space;
    without one the stack terminates in vacuum.
    """
    layers = []
    substrate = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if substrate is not None:
            raise ValueError(f"{path}:{lineno}: layers after the semi-infinite substrate line")
        parts = line.rsplit(None, 1)
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'material thickness'")
        mat_spec, thick = parts
        try:
            material = parse_permittivity_spec(mat_spec)
        except (ValueError, KeyError) as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
        if thick in ("inf", "semi-infinite"):
            substrate = material
            continue
        try:
            d = float(thick)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad thickness {thick!r}") from None
        if d <= 0.0:
            raise ValueError(f"{path}:{lineno}: thickness must be positive")
        layers.append((material, d))
    if not layers and substrate is None:
        raise ValueError(f"{path}: empty stack file")
    return Stack(tuple(layers), substrate)


def parse_mirror_spec(spec: str) -> MirrorModel:
    """Parse a mirror spec as used on the command line.

    Grammar: ``perfect`` | ``halfspace:eps=..`` | ``halfspace:<material>``
    | ``drude:wp=..,gamma=..`` | ``plasma:wp=..`` | ``stack:file=..`` |
    ``table:file=..``.  The bare ``drude``/``plasma`` forms are
    shorthand for half-spaces of those metals.
    """
    spec = spec.strip()
    if spec == "perfect":
        return PerfectMirror()
    if spec.startswith("halfspace:"):
        return HalfSpace(parse_permittivity_spec(spec[len("halfspace:"):]))
    if spec.startswith(("drude:", "plasma:")):
        return HalfSpace(parse_permittivity_spec(spec))
    if spec.startswith("stack:"):
        args = _parse_kwargs(spec[len("stack:"):])
        return load_stack(args["file"])
    if spec.startswith("table:"):
        args = _parse_kwargs(spec[len("table:"):])
        return load_reflection_table(args["file"])
    raise ValueError(f"cannot parse mirror spec {spec!r}")
