"""Command-line entry point: mchist VERB --config PATH [--out DIR] [--seed N] [--quiet]."""
from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import io
from .config import ExperimentConfig, load_config
from .errors import ConfigError, DataIOError, MCHError
from .experiments import periodic_grid, resolution_experiment, soliton_field_grid
from .pde import FieldGrid, evolve, pde_residual
from .phase import PhaseContext, check_sector_bound, expand_spectrum, partition_spectrum, signature_grid
from .predictor import predict, window_error
from .scattering import (InitialProfile, ScatteringData, a_at_i_closed_form, a_at_i_printed,
                         locate_zeros, log_symmetric_grid, moment_zero_check, reflection_grid,
                         spectrum_from_zeros)
from .soliton import SolitonData, profile_on_x_grid

log = logging.getLogger("mchist")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _ctx(cfg):
    c = cfg["ctx"]
    try:
        return PhaseContext(c["xi"], c["delta0"])
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _tag(t):
    return f"{float(t):.6g}".replace("-", "m")


def _profile(cfg) -> InitialProfile:
    p, g = cfg["profile"], cfg["grids"]
    if p["kind"] == "gaussian":
        return InitialProfile.gaussian(p.get("A", 0.5), p.get("w", 1.0), g["X"], g["h"])
    if p["kind"] == "zero":
        return InitialProfile.zero(g["X"], g["h"])
    if p["kind"] == "file":
        return InitialProfile.from_file(p["path"], X=None, h=None)
    # soliton: sample m of the engine profile on a periodic grid
    data = SolitonData.from_spectrum(expand_spectrum(cfg.generators("profile")))
    fg = soliton_field_grid(data, p.get("t", 0.0), 2 * g["X"], g["n"], -g["X"])
    return InitialProfile.from_samples(fg.x, fg.m, X=g["X"] - 2 * g["X"] / g["n"])


def _scattering_data(cfg) -> ScatteringData:
    p, g = cfg["profile"], cfg["grids"]
    z = log_symmetric_grid(g["z_n"], g["z_max"])
    if p["kind"] == "soliton":
        return ScatteringData.reflectionless(expand_spectrum(cfg.generators("profile")), z)
    prof = _profile(cfg)
    sd = reflection_grid(prof, z, cfg["tolerances"]["a_min"])
    if cfg["region"] is not None:
        sd.spectrum = spectrum_from_zeros(locate_zeros(prof, cfg["region"]))
    return sd


def _x_grid(cfg):
    xg = cfg["x_grid"]
    return np.linspace(xg["start"], xg["stop"], xg["num"])


def cmd_scatter(cfg, out):
    prof = _profile(cfg)
    g = cfg["grids"]
    sd = reflection_grid(prof, log_symmetric_grid(g["z_n"], g["z_max"]), cfg["tolerances"]["a_min"])
    io.write_columns(os.path.join(out, "reflection.txt"),
                     [sd.z_grid, sd.r.real, sd.r.imag, np.abs(sd.a), np.abs(sd.b)],
                     ["z", "re_r", "im_r", "abs_a", "abs_b"])
    sym = sd.symmetry_defects()
    rep = {
        "unitarity_defect": float(np.max(np.abs(np.abs(sd.a) ** 2 + np.abs(sd.b) ** 2 - 1))),
        "sym_inverse": sym["inv"], "sym_negative": sym["neg"], "abs_r_near_0": sym["near0"],
        "a_i_wronskian": sd.a_at_i,
        "a_i_closed_form": a_at_i_closed_form(prof),
        "a_i_printed": a_at_i_printed(prof),
        "moment_zero": moment_zero_check(sd),
    }
    if cfg["region"] is not None:
        zeros = locate_zeros(prof, cfg["region"])
        io.write_spectrum(os.path.join(out, "spectrum.txt"), spectrum_from_zeros(zeros).expanded)
        rep["zeros_found"] = len(zeros)
    io.write_record(os.path.join(out, "scatter_report.json"), rep)


def cmd_partition(cfg, out):
    ctx = _ctx(cfg)
    spec = expand_spectrum(cfg.generators())
    part = partition_spectrum(spec, ctx)
    io.write_record(os.path.join(out, "partition.json"), {
        "xi": ctx.xi, "regime": ctx.regime.value, "nabla": list(part.nabla),
        "delta": list(part.delta), "lambda": list(part.lam), "rho0": part.rho0,
        "im_theta": list(part.im_theta)})
    io.write_spectrum(os.path.join(out, "spectrum.txt"), spec.expanded)
    s = cfg["signature"]
    X, Y, S = signature_grid(ctx, s["window"], s["n"])
    io.write_columns(os.path.join(out, "signature.txt"), [X, Y, S], ["re_z", "im_z", "sign"])


def cmd_solitons(cfg, out):
    data = SolitonData.from_spectrum(expand_spectrum(cfg.generators()))
    x = _x_grid(cfg)
    for t in cfg["times"]:
        u = profile_on_x_grid(data, t, x, dy=cfg["grids"]["dy"])
        io.write_columns(os.path.join(out, f"soliton_t{_tag(t)}.txt"), [x, u], ["x", "u"])


def cmd_predict(cfg, out):
    ctx = _ctx(cfg)
    sd = _scattering_data(cfg)
    x = _x_grid(cfg)
    exact = None
    if cfg["profile"]["kind"] == "soliton":
        exact = SolitonData.from_spectrum(sd.spectrum)
    diags = {}
    for t in cfg["times"]:
        pred = predict(sd, ctx, t, x, rho=cfg["ctx"]["rho"], dy=cfg["grids"]["dy"])
        ref = profile_on_x_grid(exact, t, x) if exact is not None else np.full_like(x, np.nan)
        io.write_columns(os.path.join(out, f"prediction_t{_tag(t)}.txt"), [x, pred.u_pred, ref],
                         ["x", "u_pred", "u_reference"])
        diags[_tag(t)] = pred.diagnostics
    io.write_record(os.path.join(out, "prediction_diagnostics.json"), diags)


def _initial_grid(cfg) -> FieldGrid:
    p, g = cfg["profile"], cfg["grids"]
    if p["kind"] == "soliton":
        data = SolitonData.from_spectrum(expand_spectrum(cfg.generators("profile")))
        return soliton_field_grid(data, p.get("t", 0.0), g["L"], g["n"], g["x0"])
    prof = _profile(cfg)
    x = periodic_grid(g["L"], g["n"], g["x0"])
    m = np.where(np.abs(x) <= prof.X, prof.m_func(np.clip(x, -prof.X, prof.X)), 0.0)
    return FieldGrid.from_m(m, g["L"], g["x0"])


def cmd_evolve(cfg, out):
    g = cfg["grids"]
    grid = _initial_grid(cfg)
    dt = g["dt"]
    rows = [(grid.t, np.max(np.abs(grid.u)), np.sum(grid.m) * grid.L / grid.n, np.nan)]
    last = {}

    def keep(t, m):
        last["prev"], last["cur"] = last.get("cur"), m

    for t in sorted(cfg["times"]):
        grid = evolve(grid, t, dt, callback=keep)
        nxt = evolve(grid, t + dt, dt)
        prev_u = None if last.get("prev") is None else FieldGrid.from_m(last["prev"], grid.L).u
        res = pde_residual([prev_u, grid.u, nxt.u], dt, grid.L) if prev_u is not None else np.nan
        rows.append((t, np.max(np.abs(grid.u)), np.sum(grid.m) * grid.L / grid.n, res))
        io.write_columns(os.path.join(out, f"checkpoint_t{_tag(t)}.txt"), [grid.x, grid.u], ["x", "u"])
        io.write_record(os.path.join(out, f"checkpoint_t{_tag(t)}.json"),
                        {"L": grid.L, "n": grid.n, "t": t, "dt": dt})
    io.write_columns(os.path.join(out, "timeseries.txt"), list(zip(*rows)),
                     ["t", "max_abs_u", "int_m", "residual"])


def cmd_compare(cfg, out):
    if cfg["profile"]["kind"] != "soliton":
        raise ConfigError("compare needs reflectionless data: profile.kind = 'soliton'")
    g = cfg["grids"]
    res = resolution_experiment(cfg.generators("profile"), _ctx(cfg), cfg["times"], g["L"], g["n"],
                                g["x0"], g["dt"], cfg["compare"]["half_width_frac"], cfg["ctx"]["rho"])
    io.write_columns(os.path.join(out, "errors.txt"), [res.times, res.errors, res.centers, res.pde_vs_exact],
                     ["t", "window_error", "window_center", "pde_vs_exact"])
    io.write_record(os.path.join(out, "decay_fit.json"), {
        "slope": res.slope, "strictly_decreasing": res.strictly_decreasing,
        "rho": cfg["ctx"]["rho"], "predicted_exponent": -1 + 2 * cfg["ctx"]["rho"]})


def cmd_sectors(cfg, out):
    ctx = _ctx(cfg)
    s = cfg["sectors"]
    rep = check_sector_bound(ctx, s["phi"], s["samples"], cfg.seed, s["radius"])
    io.write_record(os.path.join(out, "sectors.json"), {
        "xi": ctx.xi, "delta0": ctx.delta0, "regime": ctx.regime.value, "phi": rep.phi,
        "samples": rep.samples, "radius": rep.radius, "violations": rep.violations,
        "margin": rep.margin, "worst_z": rep.worst_z, "seed": cfg.seed})


COMMANDS = {"scatter": cmd_scatter, "partition": cmd_partition, "solitons": cmd_solitons,
            "predict": cmd_predict, "evolve": cmd_evolve, "compare": cmd_compare,
            "sectors": cmd_sectors}


def build_parser():
    ap = argparse.ArgumentParser(prog="mchist", description=__doc__)
    ap.add_argument("verb", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="JSON experiment configuration")
    ap.add_argument("--out", help="output directory (overrides config 'out')")
    ap.add_argument("--seed", type=int, help="seed (overrides config 'seed')")
    ap.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        data = dict(cfg.data)
        if args.seed is not None:
            data["seed"] = args.seed
        if args.out is not None:
            data["out"] = args.out
        cfg = ExperimentConfig(data)
        log.info("%s -> %s", args.verb, cfg["out"])
        COMMANDS[args.verb](cfg, cfg["out"])
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DataIOError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except (MCHError, FloatingPointError, np.linalg.LinAlgError) as e:
        print(f"numerical failure: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    log.info("done")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
