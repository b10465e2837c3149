"""Command-line front end: sweeps, machine-readable output, diagnostics.

Exit codes: 0 success, 2 configuration error, 3 numerical flag
(passivity failure, cross-check path disagreement, resonance pole,
quadrature non-convergence).  Output is CSV by default (JSON with
--format json) and is byte-stable for identical configurations.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .core import C_LIGHT, HBAR, K_BOLTZMANN
from .lifshitz import (
    NATURAL,
    SI,
    PlanarCavity,
    QuadratureSpec,
    compute_thermodynamics,
)
from .mirrors import PassivityError, parse_mirror_spec
from .modes import (
    CavityConfig,
    ModeWindow,
    dos_census_study,
    find_modes,
    model_reflection,
    uniform_reflection,
    wall_dos,
)
from .quadrature import QuadratureConvergenceError
from .scattering import (
    DelayedMirror,
    ResonanceError,
    build_interface_evanescent,
    build_interface_propagating,
    delay_consistency_check,
    total_reflection_multiple,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parse_sweep(text, kind):
    """start:stop:count:lin|log, or a comma list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"{kind}: expected start:stop:count:lin|log, got {text!r}")
        start, stop, count, scale = float(parts[0]), float(parts[1]), int(parts[2]), parts[3]
        if count < 2 or start == stop:
            raise ConfigError(f"{kind}: need count >= 2 and start != stop")
        if scale == "lin":
            vals = np.linspace(start, stop, count)
        elif scale == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError(f"{kind}: log sweep needs positive endpoints")
            vals = np.geomspace(start, stop, count)
        else:
            raise ConfigError(f"{kind}: scale must be lin or log, got {scale!r}")
    else:
        vals = np.array([float(v) for v in text.split(",")])
    if np.any(np.diff(vals) == 0.0) or not (np.all(np.diff(vals) > 0) or np.all(np.diff(vals) < 0)):
        raise ConfigError(f"{kind}: sweep values must be strictly monotone")
    return [float(v) for v in vals]


def _parse_window(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"--window: expected lo:hi, got {text!r}") from None
    if not hi > lo:
        raise ConfigError("--window: need hi > lo")
    return ModeWindow(0.5 * (lo + hi), hi - lo)


def _add_common(p):
    p.add_argument("--units", choices=("si", "natural"), default="si",
                   help="si (m, rad/s, K) or natural (c = hbar = k_B = 1, lengths in the gap unit)")
    p.add_argument("--tol", type=float, default=1e-8, help="relative quadrature tolerance")
    p.add_argument("--out", default="-", help="output path ('-' = stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=0,
                   help="worker processes for sweeps (0 = all logical processors)")
    p.add_argument("--config", default=None,
                   help="key=value file of defaults; explicit flags override it")


def _add_cavity(p):
    p.add_argument("--mirror1", required=True,
                   help="perfect | halfspace:eps=.. | drude:wp=..,gamma=.. | plasma:wp=.. "
                        "| stack:file=.. | table:file=..")
    p.add_argument("--mirror2", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gap", type=float, help="gap width [m] (or gap units when natural)")
    g.add_argument("--gap-sweep", help="start:stop:count:lin|log or comma list")
    t = p.add_mutually_exclusive_group()
    t.add_argument("--temperature", type=float, default=0.0,
                   help="temperature [K] (k_B T in hbar*c/gap-unit when natural)")
    t.add_argument("--temperature-sweep", help="start:stop:count:lin|log or comma list")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cavityforces",
        description="Casimir forces and cavity thermodynamics from mirror reflection amplitudes.",
    )
    parser.add_argument("--version", action="version", version=f"cavityforces {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, doc in (("force", "Casimir pressure (negative = attraction)"),
                      ("energy", "internal energy per unit area"),
                      ("free-energy", "free energy per unit area"),
                      ("entropy", "entropy per unit area")):
        p = sub.add_parser(name, help=doc)
        _add_cavity(p)
        _add_common(p)

    p = sub.add_parser("dos", help="wall density of states (and optional mode census)")
    p.add_argument("--r-product", type=float, default=None,
                   help="constant reflection product r1*r2 (overrides mirrors)")
    p.add_argument("--mirror1", default=None)
    p.add_argument("--mirror2", default=None)
    p.add_argument("--gap", type=float, required=True)
    p.add_argument("--q", type=float, default=0.0, help="parallel wavevector")
    p.add_argument("--pol", choices=("s", "p"), default="s")
    p.add_argument("--window", required=True, help="lo:hi frequency window")
    p.add_argument("--points", type=int, default=11, help="omega samples across the window")
    p.add_argument("--census-T", default=None,
                   help="comma list of total delays; adds census columns")
    p.add_argument("--delta1", type=float, default=0.0)
    p.add_argument("--delta2", type=float, default=0.0)
    _add_common(p)

    p = sub.add_parser("modes", help="cavity eigenfrequencies in a window")
    p.add_argument("--r-product", type=float, default=None)
    p.add_argument("--mirror1", default=None)
    p.add_argument("--mirror2", default=None)
    p.add_argument("--gap", type=float, required=True)
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--pol", choices=("s", "p"), default="s")
    p.add_argument("--window", required=True)
    p.add_argument("--delay", type=float, required=True, help="total re-injection delay T1 + T2")
    p.add_argument("--delta1", type=float, default=0.0)
    p.add_argument("--delta2", type=float, default=0.0)
    _add_common(p)

    p = sub.add_parser("smatrix-check", help="interface scattering diagnostics")
    p.add_argument("--r-v", required=True, help="wall reflection amplitude, e.g. 0.3+0.4j")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--kv", type=float, help="vacuum normal wavevector (propagating)")
    g.add_argument("--kappa-v", type=float, help="vacuum decay constant (evanescent)")
    p.add_argument("--kd", type=float, required=True, help="far-side normal wavevector")
    p.add_argument("--ld", type=float, default=None, help="back-mirror distance for r_t")
    p.add_argument("--rd-phase", type=float, default=0.0)
    _add_common(p)

    return parser, dict(sub.choices)


def _apply_config_file(argv, subparsers):
    """Load key=value defaults from --config; explicit flags still win."""
    path = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
    if path is None:
        return
    defaults = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        defaults[key.replace("-", "_")] = val
    command = next((a for a in argv if not a.startswith("-")), None)
    sub = subparsers.get(command)
    if sub is None:
        return
    usable = {a.dest: a for a in sub._actions}
    cast = {}
    for key, val in defaults.items():
        if key in usable:
            action = usable[key]
            cast[key] = action.type(val) if action.type is not None else val
    if cast:
        sub.set_defaults(**cast)


# ---------------------------------------------------------------------------
# record emission
# ---------------------------------------------------------------------------

_HEADER_NOTES = {
    "force": "pressure_Pa: Casimir pressure per unit area; negative = attraction",
    "energy": "U_J_per_m2: internal energy per unit area",
    "free-energy": "F_J_per_m2: free energy per unit area",
    "entropy": "S_J_per_K_m2: entropy per unit area",
    "dos": "rho: wall density of states per (Q, polarization) [time units]",
    "modes": "omega_l: cavity eigenfrequencies",
    "smatrix-check": "interface amplitudes and conservation residuals",
}


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def emit(records, command, args):
    lines = []
    if args.format == "csv":
        lines.append(f"# cavityforces {__version__} :: {command}")
        lines.append(f"# units: {args.units}")
        lines.append(f"# {_HEADER_NOTES[command]}")
        if records:
            cols = list(records[0].keys())
            lines.append(",".join(cols))
            for rec in records:
                lines.append(",".join(_fmt(rec.get(c)) for c in cols))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            {"tool": "cavityforces", "version": __version__, "command": command,
             "units": args.units, "records": records},
            indent=2, sort_keys=False, default=_fmt,
        ) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


# ---------------------------------------------------------------------------
# thermodynamic commands
# ---------------------------------------------------------------------------

def _thermo_payloads(args):
    gaps = [args.gap] if args.gap is not None else _parse_sweep(args.gap_sweep, "--gap-sweep")
    if getattr(args, "temperature_sweep", None):
        temps = _parse_sweep(args.temperature_sweep, "--temperature-sweep")
    else:
        temps = [args.temperature]
    points = [(L, T) for L in gaps for T in temps]
    return [
        {"command": args.command, "mirror1": args.mirror1, "mirror2": args.mirror2,
         "gap": L, "temperature": T, "tol": args.tol, "units": args.units}
        for L, T in points
    ]


def _thermo_worker(payload):
    constants = NATURAL if payload["units"] == "natural" else SI
    m1 = parse_mirror_spec(payload["mirror1"])
    m2 = parse_mirror_spec(payload["mirror2"])
    cavity = PlanarCavity(m1, m2, payload["gap"])
    quad = QuadratureSpec(rel_tol=payload["tol"])
    res = compute_thermodynamics(cavity, payload["temperature"], quad, constants)
    rec = {"gap_m": res.L, "temperature_K": res.temperature,
           "mirror1": payload["mirror1"], "mirror2": payload["mirror2"]}
    cmd = payload["command"]
    if cmd == "force":
        rec.update({
            "pressure_Pa": res.pressure.value,
            "pressure_error_Pa": res.pressure.error,
            "pressure_fd_Pa": res.pressure.alt_value,
            "pressure_printed_form_Pa": res.pressure_printed_form,
        })
    elif cmd == "energy":
        rec.update({
            "U_J_per_m2": res.U.value, "U_error_J_per_m2": res.U.error,
            "U_direct_J_per_m2": res.U.alt_value,
            "U0_J_per_m2": res.U0.value,
            "identity_residual_J_per_m2": res.identity_residual,
        })
    elif cmd == "free-energy":
        rec.update({
            "F_J_per_m2": res.F_free.value, "F_error_J_per_m2": res.F_free.error,
            "U0_J_per_m2": res.U0.value,
        })
    elif cmd == "entropy":
        if res.S_entropy is None:
            raise ConfigError("entropy needs temperature > 0")
        rec.update({
            "S_J_per_K_m2": res.S_entropy.value,
            "S_error_J_per_K_m2": res.S_entropy.error,
            "S_fd_J_per_K_m2": res.S_entropy.alt_value,
        })
    rec["flags"] = ";".join(res.flags)
    rec["tool_version"] = __version__
    return rec


def _run_thermo(args):
    payloads = _thermo_payloads(args)
    jobs = args.jobs if args.jobs > 0 else None
    if len(payloads) > 1 and (jobs is None or jobs > 1):
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_thermo_worker, payloads))
    else:
        records = [_thermo_worker(p) for p in payloads]
    emit(records, args.command, args)
    flagged = [r for r in records if r["flags"]]
    if flagged:
        r = flagged[0]
        print(f"numerical flag at gap={r['gap_m']:g}, T={r['temperature_K']:g}: {r['flags']}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


# ---------------------------------------------------------------------------
# dos / modes commands
# ---------------------------------------------------------------------------

def _window_reflections(args, c):
    if args.r_product is not None:
        if abs(args.r_product) >= 1.0:
            raise ConfigError("--r-product must satisfy |r1*r2| < 1")
        root = float(np.sqrt(abs(args.r_product)))
        return (uniform_reflection(np.sign(args.r_product) * root),
                uniform_reflection(root))
    if not (args.mirror1 and args.mirror2):
        raise ConfigError("give --r-product or both --mirror1 and --mirror2")
    return (model_reflection(parse_mirror_spec(args.mirror1), c),
            model_reflection(parse_mirror_spec(args.mirror2), c))


def _run_dos(args):
    c = 1.0 if args.units == "natural" else C_LIGHT
    r1, r2 = _window_reflections(args, c)
    window = _parse_window(args.window)
    records = []
    omegas = np.linspace(window.lo, window.hi, args.points)
    for w in omegas:
        rho = wall_dos(r1, r2, args.q, float(w), args.gap, c=c, pol=args.pol)
        records.append({"omega": float(w), "rho": rho})
    if args.census_T:
        t_values = [float(v) for v in args.census_T.split(",")]
        rows = dos_census_study(r1, r2, args.q, args.pol, window, args.gap,
                                T_values=t_values, deltas=(args.delta1, args.delta2), c=c)
        records = [
            {"omega_bar": window.center, "T_total": row.T_total,
             "rho_formula": row.formula_rho, "rho_census": row.census_rho,
             "deviation": row.deviation, "N": row.N, "N0": row.N0,
             "n_roots": row.n_roots, "delta_invariant": row.delta_invariant,
             "flags": ";".join(row.flags)}
            for row in rows
        ]
    for rec in records:
        rec["tool_version"] = __version__
    emit(records, "dos", args)
    return EXIT_OK


def _run_modes(args):
    c = 1.0 if args.units == "natural" else C_LIGHT
    r1, r2 = _window_reflections(args, c)
    window = _parse_window(args.window)
    config = CavityConfig(
        DelayedMirror(r1, 0.5 * args.delay, args.delta1),
        DelayedMirror(r2, 0.5 * args.delay, args.delta2),
        args.gap, c,
    )
    roots = find_modes(config, args.q, args.pol, window)
    records = [{"ell": i, "omega_l": float(w), "tool_version": __version__}
               for i, w in enumerate(roots)]
    emit(records, "modes", args)
    return EXIT_OK


def _run_smatrix(args):
    r_v = complex(args.r_v)
    rng = np.random.default_rng(20240811)
    if args.kv is not None:
        iface = build_interface_propagating(r_v, args.kv, args.kd)
        s = iface.s_matrix()
        unitarity = float(np.max(np.abs(s.conj().T @ s - np.eye(2))))
    else:
        iface = build_interface_evanescent(r_v, args.kappa_v, args.kd, args.rd_phase)
        unitarity = None
    flux = 0.0
    for _ in range(16):
        i_v, i_d = (complex(*rng.standard_normal(2)) for _ in range(2))
        flux = max(flux, abs(iface.flux_mismatch(i_v, i_d)))
    rec = {
        "sector": iface.sector,
        "r_v": str(iface.r_v), "r_d": str(iface.r_d),
        "t_v": str(iface.t_v), "t_d": str(iface.t_d),
        "unitarity_residual": unitarity,
        "flux_residual": flux,
    }
    if args.ld is not None:
        r_t = total_reflection_multiple(iface, args.ld)
        rec["r_t"] = str(r_t)
        rec["r_t_defect"] = (abs(abs(r_t) - 1.0) if iface.sector == "propagating"
                             else abs(r_t.imag))
        rec["delay_consistency"] = delay_consistency_check(
            iface, np.linspace(0.5, 3.0, 41) * args.ld)
    rec["tool_version"] = __version__
    emit([rec], "smatrix-check", args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(argv, parser)
        args = parser.parse_args(argv)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command in ("force", "energy", "free-energy", "entropy"):
            return _run_thermo(args)
        if args.command == "dos":
            return _run_dos(args)
        if args.command == "modes":
            return _run_modes(args)
        if args.command == "smatrix-check":
            return _run_smatrix(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # model/spec validation problems are configuration errors
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PassivityError, ResonanceError, QuadratureConvergenceError) as exc:
        print(f"numerical flag: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
