"""Command-line front end: every figure-class computation as a subcommand
writing a CSV plus a JSON sidecar with the fully resolved configuration.

Config files are INI (key = value under any section); command-line flags
override file values.  Exit codes: 0 success, 1 invalid input, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bilayer import BilayerConfig, efficiency_map
from .designs import find_resonant_sets, resonant_curve
from .dipole_sim import (
    GaussianBeam,
    ScatteringProblem,
    build_positions,
    find_resonance,
    scaling_sweep,
)
from .lattice import GrazingOrderError, gamma_1d, make_geometry
from .memory import (
    LightShiftSystem,
    MemorySchedule,
    approx_rf,
    lightshift_control,
    lightshift_optimal_pulse,
    simulate_lightshift,
    storage_efficiency_rf,
)

_FMT = "%.17g"


class CliError(ValueError):
    """Invalid user input (exit code 1)."""


def _parse_range(text: str) -> np.ndarray:
    """'lo:hi:step', 'lo:hi:logN' (log-spaced count), or comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"range must be lo:hi:step or lo:hi:logN, got {text!r}")
        lo, hi = float(parts[0]), float(parts[1])
        if parts[2].startswith("log"):
            n = int(parts[2][3:])
            if n < 2 or lo <= 0:
                raise CliError(f"bad log range {text!r}")
            return np.logspace(math.log10(lo), math.log10(hi), n)
        step = float(parts[2])
        if step <= 0 or hi <= lo:
            raise CliError(f"bad range {text!r}")
        return np.arange(lo, hi + step / 2, step)
    return np.array([float(x) for x in text.split(",")])


def _parse_q(text: str) -> float:
    if text in ("0", "0.0"):
        return 0.0
    if text.lower() in ("pi", "3.141592653589793"):
        return math.pi
    raise CliError(f"q must be 0 or pi, got {text!r}")


def _parse_shift(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(f"shift must be dx,dy, got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                v if isinstance(v, str) else _FMT % v for v in row
            ) + "\n")


def _write_sidecar(csv_path: Path, subcommand: str, config: dict,
                   results: dict | None = None) -> None:
    sidecar = {
        "version": __version__,
        "schema_version": 1,
        "subcommand": subcommand,
        "config": config,
        "results": results or {},
    }
    csv_path.with_suffix(".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )


def _resolved(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys}


def _cmd_map(args) -> int:
    q = _parse_q(args.q)
    az = _parse_range(args.az)
    a = _parse_range(args.a)
    shift = _parse_shift(args.shift)
    cfg = BilayerConfig(
        layer=make_geometry(args.kind, float(a[0])),
        interlayer_spacing=float(az[0]),
        lateral_shift=shift,
        individual_loss=args.gs,
    )
    emap = efficiency_map(cfg, q, az, a)
    out = Path(args.output)
    _write_csv(out, ["az", "a", "r_q"], emap.rows())
    _write_sidecar(out, "map", {
        "kind": args.kind, "q": q, "az": args.az, "a": args.a,
        "shift": list(shift), "gs": args.gs,
    })
    return 0


def _cmd_curves(args) -> int:
    q = _parse_q(args.q)
    curve = resonant_curve(args.kind, q, args.nc)
    az_max = args.az_max if args.az_max is not None else 3.0 * curve.az_min
    samples = curve.sample(args.n, az_max=az_max)
    out = Path(args.output)
    _write_csv(out, ["az", "a"], samples)
    _write_sidecar(out, "curves", {
        "kind": args.kind, "q": q, "nc": args.nc, "n": args.n,
        "az_max": az_max,
    }, {"nu": curve.nu, "az_min": curve.az_min})
    return 0


def _cmd_sets(args) -> int:
    q = _parse_q(args.q)
    shift = _parse_shift(args.shift)
    a_win = tuple(float(x) for x in args.a_window.split(":"))
    az_win = tuple(float(x) for x in args.az_window.split(":"))
    if len(a_win) != 2 or len(az_win) != 2:
        raise CliError("windows must be lo:hi")
    sets = find_resonant_sets(args.kind, shift, q, a_win, az_win)
    out = Path(args.output)
    _write_csv(out, ["a", "az", "residual"],
               ((s.a, s.az, s.residual) for s in sets))
    _write_sidecar(out, "sets", {
        "kind": args.kind, "q": q, "shift": list(shift),
        "a_window": list(a_win), "az_window": list(az_win),
    }, {"count": len(sets)})
    return 0


def _scatter_row(kind, a, az, shift, q, n, wl):
    cfg = BilayerConfig(
        layer=make_geometry(kind, a), interlayer_spacing=az,
        lateral_shift=shift,
    )
    arr = build_positions(cfg, n)
    beam = GaussianBeam(waist=wl * arr.layer_size)
    problem = ScatteringProblem(arr, beam)
    res = find_resonance(arr, beam, q, problem=problem)
    rq = res.efficiency.real
    return (n, res.delta_star, res.t.real, res.t.imag, res.r.real,
            res.r.imag, rq, 1.0 - rq)


_SCATTER_HEADER = ["N", "delta_star", "re_t", "im_t", "re_r", "im_r",
                   "r_q", "one_minus_r_q"]


def _cmd_scatter(args) -> int:
    q = _parse_q(args.q)
    shift = _parse_shift(args.shift)
    row = _scatter_row(args.kind, args.a, args.az, shift, q, args.N, args.wl)
    out = Path(args.output)
    _write_csv(out, _SCATTER_HEADER, [row])
    _write_sidecar(out, "scatter", {
        "kind": args.kind, "a": args.a, "az": args.az, "shift": list(shift),
        "q": q, "N": args.N, "wl": args.wl,
    }, {"r_q": row[6]})
    return 0


def _cmd_scaling(args) -> int:
    q = _parse_q(args.q)
    shift = _parse_shift(args.shift)
    n_list = [int(x) for x in args.N.split(",")]
    cfg = BilayerConfig(
        layer=make_geometry(args.kind, args.a), interlayer_spacing=args.az,
        lateral_shift=shift,
    )
    sweep = scaling_sweep(cfg, q, n_list, waist_ratio=args.wl)
    out = Path(args.output)
    _write_csv(out, _SCATTER_HEADER, (
        (r.atoms_per_layer, r.delta_star, r.t.real, r.t.imag, r.r.real,
         r.r.imag, r.efficiency, r.inefficiency)
        for r in sweep.rows
    ))
    _write_sidecar(out, "scaling", {
        "kind": args.kind, "a": args.a, "az": args.az, "shift": list(shift),
        "q": q, "wl": args.wl, "N": n_list,
    }, {"exponent": sweep.exponent})
    return 0


def _cmd_memory(args) -> int:
    taus = _parse_range(args.tau)
    gs = 2.0 * args.gs_ratio  # ratio is gamma_s / (2 Gamma_1D); Gamma_1D = 1
    rows = []
    for tau in taus:
        sched = MemorySchedule(
            kind=args.schedule, tau=float(tau), duration=args.T,
            loss_rate=gs, coupling_unit=1.0,
        )
        rf = storage_efficiency_rf(sched)
        est, _, _ = approx_rf(float(tau), 1.0, gs, kind=args.schedule)
        rows.append((tau, 1.0 - rf, 1.0 - est))
    out = Path(args.output)
    _write_csv(out, ["tau_Gamma1D", "one_minus_rf_numeric",
                     "one_minus_rf_approx"], rows)
    _write_sidecar(out, "memory", {
        "schedule": args.schedule, "T": args.T, "gs_ratio": args.gs_ratio,
        "tau": args.tau,
    }, {"plateau": args.gs_ratio})
    return 0


def _cmd_lightshift(args) -> int:
    gs = 2.0 * args.gs_ratio * args.gamma1d
    sched = MemorySchedule(
        kind="exponential", tau=args.tau, duration=args.T,
        loss_rate=gs, coupling_unit=args.gamma1d,
    )
    sys_ = LightShiftSystem(gamma_1d=args.gamma1d, gamma_s=gs)
    control = lightshift_control(sched, sys_)
    times, pulse, _ = lightshift_optimal_pulse(sys_, control, args.T)
    eff = simulate_lightshift(sys_, control, (times, pulse), args.T)
    est, b, _ = approx_rf(args.tau, args.gamma1d, gs)
    approx = 1.0 - gs / args.gamma1d - b * gs * args.tau
    out = Path(args.output)
    _write_csv(out, ["tau", "T", "gamma_s", "efficiency", "approx"],
               [(args.tau, args.T, gs, eff, approx)])
    _write_sidecar(out, "lightshift", {
        "tau": args.tau, "T": args.T, "gs_ratio": args.gs_ratio,
        "gamma1d": args.gamma1d,
    }, {"efficiency": eff, "approx": approx})
    return 0


def _cmd_check(args) -> int:
    """Fast invariant suite; prints one line per check."""
    from .iface1d import efficiency_from_params, efficiency_from_scattering
    from .bilayer import analytic_scattering, effective_params, mode_coefficients
    from .memory import abrupt_rf_closed_form

    rng = np.random.default_rng(7)
    failures = 0

    def report(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        if not ok:
            failures += 1

    worst = 0.0
    for _ in range(1000):
        az = rng.uniform(0.05, 3.0)
        a = rng.uniform(0.3, 0.95)
        cfg = BilayerConfig(layer=make_geometry("square", a),
                            interlayer_spacing=az)
        g1d = gamma_1d(cfg.layer)
        total = sum(effective_params(cfg, q).params.coupling_rate
                    for q in (0.0, math.pi))
        worst = max(worst, abs(total - 2.0 * g1d) / g1d)
    report("coupling sum rule", worst < 1e-12, f"worst {worst:.2e}")

    worst = 0.0
    for _ in range(200):
        az = rng.uniform(0.05, 0.95)
        a = rng.uniform(0.3, 0.95)
        delta = rng.uniform(-3.0, 3.0)
        cfg = BilayerConfig(layer=make_geometry("square", a),
                            interlayer_spacing=az)
        sc = analytic_scattering(cfg, delta)
        worst = max(worst, abs(abs(sc.r_plus) ** 2 + abs(sc.t_plus) ** 2 - 1.0))
    report("subwavelength unitarity", worst < 1e-10, f"worst {worst:.2e}")

    worst = 0.0
    for _ in range(200):
        mode = effective_params(
            BilayerConfig(layer=make_geometry("square", rng.uniform(0.3, 0.95)),
                          interlayer_spacing=rng.uniform(0.05, 3.0),
                          individual_loss=rng.uniform(0.0, 0.5)),
            float(rng.choice([0.0, math.pi])),
        )
        if mode.params.coupling_rate == 0.0:
            continue
        from .iface1d import scattering_from_params
        sc = scattering_from_params(mode.params, mode.coefficients,
                                    mode.params.collective_shift)
        via_sc = efficiency_from_scattering(sc, mode.coefficients).real
        direct = efficiency_from_params(mode.params)
        worst = max(worst, abs(via_sc - direct))
    report("1D self-consistency", worst < 1e-10, f"worst {worst:.2e}")

    worst = 0.0
    for g1d in (0.5, 1.0, 2.0):
        for gsv in (0.0, 0.01, 0.1):
            for tau in (0.5, 2.0):
                sched = MemorySchedule(kind="abrupt", tau=tau, duration=8.0,
                                       loss_rate=gsv, coupling_unit=g1d)
                got = storage_efficiency_rf(sched)
                want = abrupt_rf_closed_form(g1d, gsv, tau, 8.0)
                worst = max(worst, abs(got - want))
    report("abrupt-switch oracle", worst < 1e-10, f"worst {worst:.2e}")

    if failures:
        print(f"{failures} check(s) failed")
        return 2
    print("all checks passed")
    return 0


def _add_common(sub):
    sub.add_argument("--config", help="INI config file; flags override it")
    sub.add_argument("--output", help="output CSV path")
    sub.add_argument("--threads", type=int, default=None,
                     help="cap BLAS/threadpool parallelism")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biarray",
        description="Bilayer atomic-array interface calculations",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("map", help="efficiency map over an (az, a) grid")
    _add_common(p)
    p.add_argument("--kind", choices=["square", "triangular"])
    p.add_argument("--q")
    p.add_argument("--az", help="lo:hi:step")
    p.add_argument("--a", help="lo:hi:step")
    p.add_argument("--shift")
    p.add_argument("--gs", type=float)
    p.set_defaults(func=_cmd_map)

    p = subs.add_parser("curves", help="sample a loss-cancelling curve")
    _add_common(p)
    p.add_argument("--kind", choices=["square", "triangular"])
    p.add_argument("--q")
    p.add_argument("--nc", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--az-max", dest="az_max", type=float, default=None)
    p.set_defaults(func=_cmd_curves)

    p = subs.add_parser("sets", help="solve for two-shell cancellation points")
    _add_common(p)
    p.add_argument("--kind", choices=["square", "triangular"])
    p.add_argument("--q")
    p.add_argument("--shift")
    p.add_argument("--a-window", dest="a_window")
    p.add_argument("--az-window", dest="az_window")
    p.set_defaults(func=_cmd_sets)

    p = subs.add_parser("scatter", help="single finite-array run")
    _add_common(p)
    p.add_argument("--kind", choices=["square", "triangular"])
    p.add_argument("--a", type=float)
    p.add_argument("--az", type=float)
    p.add_argument("--shift")
    p.add_argument("--q")
    p.add_argument("--N", type=int)
    p.add_argument("--wl", type=float)
    p.set_defaults(func=_cmd_scatter)

    p = subs.add_parser("scaling", help="finite-array N sweep with fit")
    _add_common(p)
    p.add_argument("--kind", choices=["square", "triangular"])
    p.add_argument("--a", type=float)
    p.add_argument("--az", type=float)
    p.add_argument("--shift")
    p.add_argument("--q")
    p.add_argument("--N", help="comma list of atoms per layer")
    p.add_argument("--wl", type=float)
    p.set_defaults(func=_cmd_scaling)

    p = subs.add_parser("memory", help="storage-efficiency sweep over tau")
    _add_common(p)
    p.add_argument("--schedule", choices=["exponential", "linear", "abrupt"],
                   default=None)
    p.add_argument("--T", type=float)
    p.add_argument("--gs-ratio", dest="gs_ratio", type=float,
                   help="gamma_s / (2 Gamma_1D)")
    p.add_argument("--tau", help="lo:hi:logN or comma list, units 1/Gamma_1D")
    p.set_defaults(func=_cmd_memory)

    p = subs.add_parser("lightshift", help="all-optical storage run")
    _add_common(p)
    p.add_argument("--tau", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--gs-ratio", dest="gs_ratio", type=float)
    p.add_argument("--gamma1d", type=float)
    p.set_defaults(func=_cmd_lightshift)

    p = subs.add_parser("check", help="run the fast invariant suite")
    _add_common(p)
    p.set_defaults(func=_cmd_check)

    return parser


# fields that are not plain strings, per subcommand, for config-file coercion
_FIELD_TYPES = {
    "map": {"gs": float},
    "curves": {"nc": int, "n": int, "az_max": float},
    "sets": {},
    "scatter": {"a": float, "az": float, "N": int, "wl": float},
    "scaling": {"a": float, "az": float, "wl": float},
    "memory": {"T": float, "gs_ratio": float},
    "lightshift": {"tau": float, "T": float, "gs_ratio": float,
                   "gamma1d": float},
    "check": {},
}


def _apply_config_file(args) -> None:
    """Fill argument values left unset from the INI file, if given."""
    if not getattr(args, "config", None):
        return
    path = Path(args.config)
    if not path.exists():
        raise CliError(f"config file not found: {path}")
    ini = configparser.ConfigParser()
    ini.read(path)
    types = _FIELD_TYPES[args.subcommand]
    types = dict(types, threads=int)
    for section in ini.sections():
        for key, value in ini.items(section):
            key = key.replace("-", "_")
            if not hasattr(args, key) or getattr(args, key) is not None:
                continue
            if key in types:
                try:
                    value = types[key](value)
                except ValueError as exc:
                    raise CliError(f"bad value for {key}: {value!r}") from exc
            setattr(args, key, value)


# applied after the config file so either source can set them
_FALLBACKS = {
    "shift": "0,0",
    "gs": 0.0,
    "n": 200,
    "wl": 0.26,
    "schedule": "exponential",
    "gamma1d": 1.0,
}


def _apply_fallbacks(args) -> None:
    for key, value in _FALLBACKS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _validate_required(args) -> None:
    required = {
        "map": ["kind", "q", "az", "a", "output"],
        "curves": ["kind", "q", "nc", "output"],
        "sets": ["kind", "q", "a_window", "az_window", "output"],
        "scatter": ["kind", "a", "az", "q", "N", "output"],
        "scaling": ["kind", "a", "az", "q", "N", "output"],
        "memory": ["T", "gs_ratio", "tau", "output"],
        "lightshift": ["tau", "T", "gs_ratio", "output"],
        "check": [],
    }
    for key in required[args.subcommand]:
        if getattr(args, key, None) is None:
            raise CliError(f"missing required option --{key.replace('_', '-')}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        _apply_fallbacks(args)
        _validate_required(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    def run():
        return args.func(args)

    try:
        if getattr(args, "threads", None):
            import threadpoolctl
            with threadpoolctl.threadpool_limits(limits=args.threads):
                return run()
        return run()
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, GrazingOrderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
