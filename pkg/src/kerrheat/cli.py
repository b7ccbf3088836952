"""Command-line front end.

    kerrheat <command> --config run.toml --out results/ [--threads N]
             [--teff-convention dressed-lab|quasienergy]

Commands: steady, diagram, heat, spectrum, sideband, oracle, fit.
Exit codes: 0 success, 1 numeric failure, 2 configuration error.
All outputs are deterministic for a given config and tool version.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, DomainError, KerrheatError, NoBistabilityError
from .fluctuations import effective_temperature, heating_sweep, linearize
from .model import (
    DriveParams,
    config_hash,
    critical_power,
    load_config,
    params_from_config,
    power_to_amplitude,
    reduced_detuning,
    TWOPI,
)
from .output import read_csv, standard_metadata, write_csv, write_json
from .steadystate import (
    Branch,
    bifurcation_thresholds,
    solve_steady_states,
    stability_diagram,
)

def _grid_from_spec(spec, what: str) -> np.ndarray:
    if isinstance(spec, dict):
        try:
            start, stop, num = spec["start"], spec["stop"], int(spec["num"])
        except KeyError as exc:
            raise ConfigError(f"[sweep] {what} needs start/stop/num, missing {exc}")
        if num < 1 or stop <= start:
            raise ConfigError(f"[sweep] {what} range is empty")
        return np.linspace(float(start), float(stop), num)
    if isinstance(spec, list):
        arr = np.asarray(spec, dtype=float)
        if arr.size == 0 or np.any(np.diff(arr) <= 0):
            raise ConfigError(f"[sweep] {what} list must be ascending and non-empty")
        return arr
    raise ConfigError(f"[sweep] {what} must be a table or a list")


def _power_axis(cfg, res, drive):
    """Power grid in watts plus the relative-axis labels used in output.

    Returns (p_watts, p_over_pplus, label_kind).  Falls back to the
    single [drive] point when no sweep axis is configured.
    """
    sweep = cfg.get("sweep", {})
    omega_reduced = reduced_detuning(res, drive)
    try:
        _, p_plus = bifurcation_thresholds(res, omega_reduced)
    except NoBistabilityError:
        p_plus = math.nan
    if "p_over_pplus" in sweep:
        if not math.isfinite(p_plus):
            raise ConfigError(
                "sweep given in P/P_plus but no bistable window exists at this detuning"
            )
        rel = _grid_from_spec(sweep["p_over_pplus"], "p_over_pplus")
        return rel * p_plus, rel, "p_over_pplus"
    if "p_over_pc" in sweep:
        pc = critical_power(res, drive.omega_p)
        rel = _grid_from_spec(sweep["p_over_pc"], "p_over_pc")
        watts = rel * pc
        return watts, watts / p_plus if math.isfinite(p_plus) else np.full_like(watts, math.nan), "p_over_pc"
    from .model import amplitude_to_power

    p0 = amplitude_to_power(res, drive.omega_p, drive.epsilon_p)
    rel = np.array([p0 / p_plus]) if math.isfinite(p_plus) else np.array([math.nan])
    return np.array([p0]), rel, "single"


def _drive_at(res, drive, p_watts: float) -> DriveParams:
    return DriveParams(
        omega_p=drive.omega_p,
        epsilon_p=power_to_amplitude(res, drive.omega_p, p_watts),
    )


def _branch(cfg) -> Branch:
    name = cfg.get("sweep", {}).get("branch", "H")
    try:
        return Branch(name)
    except ValueError:
        raise ConfigError(f"unknown branch {name!r} (use 'L' or 'H')")


def cmd_steady(cfg, res, drive, qubit, args) -> None:
    p_watts, p_rel, _ = _power_axis(cfg, res, drive)
    rows = []
    for p, rel in zip(p_watts, p_rel):
        d = _drive_at(res, drive, p)
        for sol in solve_steady_states(res, d):
            rows.append((
                float(p), float(rel), sol.branch.value, sol.n,
                sol.alpha.real, sol.alpha.imag, sol.stable,
            ))
    meta = standard_metadata(args.cfg_hash, args.teff_convention,
                             omega_reduced=reduced_detuning(res, drive))
    write_csv(
        os.path.join(args.out, "steady_states.csv"), meta,
        ["p_watts", "p_over_pplus", "branch", "n", "alpha_re", "alpha_im", "stable"],
        rows,
    )


def cmd_diagram(cfg, res, drive, qubit, args) -> None:
    sweep = cfg.get("sweep", {})
    omega_grid = _grid_from_spec(
        sweep.get("omega_reduced", {"start": 0.5, "stop": 6.0, "num": 56}),
        "omega_reduced",
    )
    log_spec = sweep.get("p_over_pc_log10", {"start": -1.0, "stop": 1.3, "num": 70})
    p_grid = 10.0 ** _grid_from_spec(log_spec, "p_over_pc_log10")
    diagram = stability_diagram(res, omega_grid, p_grid, threads=args.threads)
    meta = standard_metadata(args.cfg_hash, args.teff_convention)
    rows = [
        (float(om), float(p), diagram.region[i][j])
        for i, om in enumerate(diagram.omega_axis)
        for j, p in enumerate(diagram.power_axis)
    ]
    write_csv(os.path.join(args.out, "diagram.csv"), meta,
              ["omega_reduced", "p_over_pc", "region"], rows)
    write_csv(
        os.path.join(args.out, "diagram_thresholds.csv"), meta,
        ["omega_reduced", "p_minus_over_pc", "p_plus_over_pc"],
        [(float(om), float(diagram.p_minus[i]), float(diagram.p_plus[i]))
         for i, om in enumerate(diagram.omega_axis)],
    )


def cmd_heat(cfg, res, drive, qubit, args) -> None:
    p_watts, _, _ = _power_axis(cfg, res, drive)
    omega_reduced = reduced_detuning(res, drive)
    points = heating_sweep(res, omega_reduced, p_watts, _branch(cfg),
                           teff_convention=args.teff_convention)
    meta = standard_metadata(args.cfg_hash, args.teff_convention,
                             omega_reduced=omega_reduced)
    write_csv(
        os.path.join(args.out, "heating.csv"), meta,
        ["p_watts", "p_over_pplus", "branch", "n", "delta_tilde_hz",
         "n_tilde", "t_eff_kelvin", "t_eff_convention"],
        [(pt.p_watts, pt.p_over_pplus, pt.branch.value, pt.n,
          pt.delta_tilde / TWOPI, pt.n_tilde, pt.t_eff, pt.t_eff_convention)
         for pt in points],
    )


def _spectrum_grid(cfg, res) -> np.ndarray:
    spec = cfg.get("sweep", {}).get(
        "delta_omega_kappa", {"start": -3.0, "stop": 3.0, "num": 241}
    )
    return _grid_from_spec(spec, "delta_omega_kappa") * res.kappa


def cmd_spectrum(cfg, res, drive, qubit, args) -> None:
    from .lindblad import displaced_frame_steady_state, emission_spectrum

    branch = _branch(cfg)
    oracle_cfg = cfg.get("oracle", {})
    n_init = int(oracle_cfg.get("n_init", 12))
    max_dim = int(args.max_dim or oracle_cfg.get("max_dim", 96))
    grid = _spectrum_grid(cfg, res)
    p_watts, p_rel, _ = _power_axis(cfg, res, drive)
    rows = []
    for p, rel in zip(p_watts, p_rel):
        d = _drive_at(res, drive, p)
        sols = [s for s in solve_steady_states(res, d) if s.branch is branch]
        if not sols:
            continue
        rho, liou = displaced_frame_steady_state(
            res, d, sols[0].alpha, n_init, max_dim=max_dim
        )
        trace = emission_spectrum(liou, rho, grid, threads=args.threads)
        for w, s in zip(trace.x, trace.y):
            rows.append((float(p), float(rel), liou.N, float(w / TWOPI), float(s)))
    meta = standard_metadata(args.cfg_hash, args.teff_convention,
                             frame="displaced", branch=branch.value)
    write_csv(
        os.path.join(args.out, "spectrum.csv"), meta,
        ["p_watts", "p_over_pplus", "n_fock", "delta_omega_hz", "s_value"],
        rows,
    )


def cmd_sideband(cfg, res, drive, qubit, args) -> None:
    from .spectroscopy import (
        fit_three_lorentzians,
        qubit_spectrum_analytic,
        ratio_prediction,
        thermometry,
    )

    if qubit is None:
        raise ConfigError("sideband spectroscopy needs a [qubit] block")
    spect = cfg.get("spectroscopy", {})
    g_eff = TWOPI * float(spect.get("g_eff_hz", qubit.g0 / TWOPI * 0.01))
    alpha_s = complex(spect.get("alpha_s", 0.05))
    sweep = cfg.get("sweep", {})
    half_window = float(sweep.get("omega_q_window_kappa", 3.0)) * res.kappa
    npts = int(sweep.get("omega_q_points", 601))
    branch = _branch(cfg)
    p_watts, p_rel, _ = _power_axis(cfg, res, drive)
    rows = []
    reports = []
    import warnings as _warnings

    for p, rel in zip(p_watts, p_rel):
        d = _drive_at(res, drive, p)
        sols = [s for s in solve_steady_states(res, d) if s.branch is branch]
        if not sols:
            continue
        mode = linearize(res, d, sols[0])
        omega_stark = qubit.omega_ge + 2.0 * qubit.g0 ** 2 / (qubit.omega_ge - res.omega_c) * mode.n
        span = max(half_window, abs(mode.delta_tilde) * 1.5)
        grid = np.linspace(omega_stark - span, omega_stark + span, npts)
        trace = qubit_spectrum_analytic(mode, qubit, g_eff, alpha_s, grid)
        for wq, pe in zip(trace.x, trace.y):
            rows.append((float(p), float(rel), float(wq / TWOPI), float(pe)))
        centers = sorted([
            omega_stark - abs(mode.delta_tilde),
            omega_stark,
            omega_stark + abs(mode.delta_tilde),
        ])
        fit = fit_three_lorentzians(trace, centers)
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore")
            r_pred = ratio_prediction(mode)
        try:
            r, n_tilde, t_eff = thermometry(fit, mode, args.teff_convention)
            therm = {"r": r, "n_tilde": n_tilde, "t_eff_kelvin": t_eff}
        except DomainError as exc:
            therm = {"error": str(exc)}
        # the two satellites straddle the Stark-shifted line; report the
        # fitted spacing both ways so either reading can be compared
        full_sep = fit.peaks[-1].center - fit.peaks[0].center
        reports.append({
            "p_watts": float(p),
            "p_over_pplus": float(rel),
            "delta_tilde_hz": mode.delta_tilde / TWOPI,
            "satellite_separation_full_hz": full_sep / TWOPI,
            "satellite_separation_half_hz": 0.5 * full_sep / TWOPI,
            "n_tilde_model": mode.n_tilde,
            "ratio_predicted": r_pred,
            "peaks": [
                {"center_hz": pk.center / TWOPI, "fwhm_hz": pk.fwhm / TWOPI,
                 "height": pk.height}
                for pk in fit.peaks
            ],
            "baseline": fit.baseline,
            "residual_rms": fit.residual_rms,
            "thermometry": therm,
            "t_eff_convention": args.teff_convention,
        })
    meta = standard_metadata(args.cfg_hash, args.teff_convention, branch=branch.value)
    write_csv(
        os.path.join(args.out, "sideband.csv"), meta,
        ["p_watts", "p_over_pplus", "omega_q_hz", "p_e"],
        rows,
    )
    write_json(
        os.path.join(args.out, "sideband_fits.json"),
        {"tool": f"kerrheat {__version__}", "config_sha256": args.cfg_hash,
         "t_eff_convention": args.teff_convention, "points": reports},
    )


def cmd_oracle(cfg, res, drive, qubit, args) -> None:
    from .lindblad import displaced_frame_steady_state, dressed_occupation

    branch = _branch(cfg)
    oracle_cfg = cfg.get("oracle", {})
    n_init = int(oracle_cfg.get("n_init", 12))
    max_dim = int(args.max_dim or oracle_cfg.get("max_dim", 96))
    tail_tol = float(args.tol or oracle_cfg.get("tail_tol", 1e-6))
    p_watts, p_rel, _ = _power_axis(cfg, res, drive)
    points = []
    for p, rel in zip(p_watts, p_rel):
        d = _drive_at(res, drive, p)
        sols = [s for s in solve_steady_states(res, d) if s.branch is branch]
        if not sols:
            continue
        mode = linearize(res, d, sols[0])
        rho, liou = displaced_frame_steady_state(
            res, d, sols[0].alpha, n_init, max_dim=max_dim, tail_tol=tail_tol
        )
        n_oracle = dressed_occupation(rho, mode)
        rel_err = abs(n_oracle - mode.n_tilde) / mode.n_tilde if mode.n_tilde > 0 else math.nan
        points.append({
            "p_watts": float(p),
            "p_over_pplus": float(rel),
            "branch": branch.value,
            "n_fock": liou.N,
            "n_tilde_linearized": mode.n_tilde,
            "n_tilde_oracle": n_oracle,
            "rel_error": rel_err,
            "t_eff_linearized_kelvin": effective_temperature(mode, args.teff_convention),
        })
    write_json(
        os.path.join(args.out, "oracle_compare.json"),
        {"tool": f"kerrheat {__version__}", "config_sha256": args.cfg_hash,
         "t_eff_convention": args.teff_convention, "compare": args.compare,
         "points": points},
    )


def cmd_fit(cfg, res, drive, qubit, args) -> None:
    from .spectroscopy import SpectrumTrace, fit_three_lorentzians

    if not args.input:
        raise ConfigError("fit needs --input CSV")
    if not args.centers_hz or len(args.centers_hz) != 3:
        raise ConfigError("fit needs --centers-hz C1 C2 C3 (cyclic Hz)")
    meta, columns, raw = read_csv(args.input)
    if args.x_col not in columns or args.y_col not in columns:
        raise ConfigError(
            f"columns {args.x_col!r}/{args.y_col!r} not in {args.input}: {columns}"
        )
    ix, iy = columns.index(args.x_col), columns.index(args.y_col)
    x = np.array([float(r[ix]) for r in raw]) * TWOPI
    y = np.array([float(r[iy]) for r in raw])
    trace = SpectrumTrace(x=x, y=y, meta={"kappa": res.kappa} if res else {})
    fit = fit_three_lorentzians(trace, [TWOPI * c for c in args.centers_hz])
    write_json(
        os.path.join(args.out, "fit.json"),
        {
            "tool": f"kerrheat {__version__}",
            "config_sha256": args.cfg_hash,
            "input": os.path.basename(args.input),
            "peaks": [
                {"center_hz": p.center / TWOPI, "fwhm_hz": p.fwhm / TWOPI,
                 "height": p.height}
                for p in fit.peaks
            ],
            "baseline": fit.baseline,
            "residual_rms": fit.residual_rms,
            "significant": list(fit.significant),
            "converged": True,
        },
    )


_COMMANDS = {
    "steady": cmd_steady,
    "diagram": cmd_diagram,
    "heat": cmd_heat,
    "spectrum": cmd_spectrum,
    "sideband": cmd_sideband,
    "oracle": cmd_oracle,
    "fit": cmd_fit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrheat",
        description="Pumped Kerr resonator: steady states, quantum heating, spectra.",
    )
    parser.add_argument("--version", action="version", version=f"kerrheat {__version__}")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="TOML or JSON run configuration")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument(
        "--teff-convention", choices=["dressed-lab", "quasienergy"],
        default="dressed-lab",
        help="reference frequency for effective temperatures",
    )
    parser.add_argument("--max-dim", type=int, default=None,
                        help="oracle truncation cap override")
    parser.add_argument("--tol", type=float, default=None,
                        help="oracle tail tolerance override")
    parser.add_argument("--input", help="input CSV (fit command)")
    parser.add_argument("--x-col", default="omega_q_hz")
    parser.add_argument("--y-col", default="p_e")
    parser.add_argument("--centers-hz", type=float, nargs=3,
                        help="three initial peak centers, cyclic Hz (fit command)")
    parser.add_argument("--compare", action="store_true", default=True,
                        help="emit linearized-vs-oracle comparison (oracle command)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fit" and not args.config:
            cfg, res, drive, qubit = {}, None, None, None
            args.cfg_hash = None
        else:
            if not args.config:
                raise ConfigError(f"'{args.command}' needs --config")
            cfg = load_config(args.config)
            args.cfg_hash = config_hash(cfg)
            try:
                res, drive, qubit = params_from_config(cfg)
            except DomainError as exc:
                raise ConfigError(str(exc)) from exc
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        _COMMANDS[args.command](cfg, res, drive, qubit, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KerrheatError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
