"""Experiment harness.

Each subcommand runs one experiment and writes a CSV plus a JSON sidecar
recording the resolved configuration, seed, wall time, and package version.
Configuration comes from an INI-style key=value file (section = experiment
name) with command-line overrides via ``--set key=value``.

Exit codes: 0 on success, 2 on configuration or usage errors, 3 on runtime
failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
import time

import numpy as np

from . import __version__
from .analysis import MbbeParameters, effective_rate, scalability_sweep
from .detection import DetectionConfig, choose_window, event_rate, scan_stream
from .experiments import detector_stream, estimate_pl_parallel
from .noise import AnomalousRegion
from .pipeline import footprint_kbit
from .plane import throughput_experiment
from .syndrome import species_index


class ConfigError(Exception):
    pass


def _parse_value(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _parse_list(text, cast):
    try:
        return [cast(tok) for tok in str(text).replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"bad list value: {text!r}") from exc


def load_config(experiment, path, overrides, defaults):
    cfg = dict(defaults)
    if path is not None:
        parser = configparser.ConfigParser()
        if not parser.read(path):
            raise ConfigError(f"cannot read config file: {path}")
        section = experiment if parser.has_section(experiment) else "DEFAULT"
        for key, value in parser.items(section):
            if key not in cfg:
                raise ConfigError(f"unknown option {key!r} for {experiment}")
            cfg[key] = _parse_value(value)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        if key not in cfg:
            raise ConfigError(f"unknown option {key!r} for {experiment}")
        cfg[key] = _parse_value(value)
    return cfg


def _region_from(cfg, d):
    d_ano = int(cfg["d_ano"])
    if d_ano <= 0:
        return None
    center = d // 2
    return AnomalousRegion(center=(center, center), d_ano=d_ano,
                           p_ano=float(cfg["p_ano"]))


def run_logical_error_sweep(cfg, seed, workers):
    rows = []
    for d in _parse_list(cfg["d"], int):
        for p in _parse_list(cfg["p"], float):
            region = _region_from(cfg, d)
            for mode in _parse_list(cfg["modes"], str):
                est = estimate_pl_parallel(d, p, mode=mode, region=region,
                                           trials=int(cfg["trials"]),
                                           seed=seed, workers=workers)
                rows.append({"d": d, "p": p, "mode": mode,
                             "d_ano": int(cfg["d_ano"]),
                             "trials": est.trials, "failures": est.failures,
                             "p_l": est.p_l, "se": est.se})
    return rows


def run_detection_eval(cfg, seed, workers):
    d = int(cfg["d"])
    p = float(cfg["p"])
    p_ano = p * float(cfg["p_ano_ratio"])
    d_ano = int(cfg["d_ano"])
    idx_z = species_index(d, "Z")
    idx_x = species_index(d, "X")
    n_positions = idx_z.n_anc + idx_x.n_anc
    q_n = event_rate(4, p, p)
    q_a = event_rate(4, p_ano, p_ano)
    n_region = (d_ano + 1) ** 2 // 2 * 2
    alpha, n_th = float(cfg["alpha"]), int(cfg["n_th"])
    c_win = int(cfg["c_win"])
    if c_win <= 0:
        c_win = choose_window(q_n, q_a, n_positions, n_region,
                              alpha=alpha, n_th=n_th)
    config = DetectionConfig(c_win=c_win, mu=q_n, sigma=np.sqrt(q_n * (1 - q_n)),
                             alpha=alpha, n_th=n_th)
    rng = np.random.default_rng(seed)
    cycles = int(cfg["cycles"])
    start = cycles // 2
    rows = []
    center = d // 2
    region = AnomalousRegion(center=(center, center), d_ano=d_ano, p_ano=p_ano,
                             start_cycle=start, duration_cycles=cycles)
    true_center = np.array([center + 0.5, center + 0.5])
    for trial in range(int(cfg["trials"])):
        inject = trial % 2 == 1
        events, positions = detector_stream(
            d, p, cycles, rng, region=region if inject else None, p_meas=p)
        hit = scan_stream(events, config, positions)
        detected = hit is not None
        pos_err = lat = np.nan
        if detected and inject:
            pos_err = float(np.abs(np.asarray(hit.estimated_center)
                                   - true_center).max())
            lat = hit.detect_cycle - start
        rows.append({"trial": trial, "injected": int(inject),
                     "detected": int(detected), "c_win": c_win,
                     "position_error": pos_err, "latency_cycles": lat})
    return rows


def run_rollback_compare(cfg, seed, workers):
    rows = []
    for d in _parse_list(cfg["d"], int):
        for p in _parse_list(cfg["p"], float):
            region = _region_from(cfg, d)
            for mode in ("uniform_greedy", "aware_greedy"):
                est = estimate_pl_parallel(d, p, mode=mode, region=region,
                                           trials=int(cfg["trials"]),
                                           seed=seed, workers=workers)
                rows.append({"d": d, "p": p, "mode": mode,
                             "trials": est.trials, "failures": est.failures,
                             "p_l": est.p_l, "se": est.se})
    return rows


def run_scalability(cfg, seed, workers):
    areas = _parse_list(cfg["area_ratios"], float)
    params = MbbeParameters(f_ano=float(cfg["f_ano"]),
                            tau_ano=float(cfg["tau_ano"]),
                            tau_cyc=float(cfg["tau_cyc"]),
                            c_lat=int(cfg["c_lat"]))
    return scalability_sweep(areas, params, d_ano_base=int(cfg["d_ano"]),
                             target=float(cfg["target"]), seed=seed)


def run_throughput(cfg, seed, workers):
    rows = []
    for mode in _parse_list(cfg["modes"], str):
        res = throughput_experiment(mode, n_instr=int(cfg["n_instr"]),
                                    per_tick_mbbe_p=float(cfg["mbbe_p"]),
                                    duration_ticks=int(cfg["duration_ticks"]),
                                    seed=seed)
        rows.append({"mode": res.mode, "completed": res.completed,
                     "ticks": res.ticks, "throughput": res.throughput,
                     "se": res.se})
    return rows


def run_memory_table(cfg, seed, workers):
    rows = []
    for d in _parse_list(cfg["d"], int):
        for c_win in _parse_list(cfg["c_win"], int):
            for component, kbit in footprint_kbit(d, c_win).items():
                rows.append({"d": d, "c_win": c_win,
                             "component": component, "kbit": kbit})
    return rows


def run_effective_rate(cfg, seed, workers):
    rate, ratio = effective_rate(float(cfg["p_l"]), float(cfg["p_l_ano"]),
                                 float(cfg["f_ano"]), float(cfg["tau_ano"]))
    return [{"p_l": cfg["p_l"], "p_l_ano": cfg["p_l_ano"],
             "f_ano": cfg["f_ano"], "tau_ano": cfg["tau_ano"],
             "effective_rate": rate,
             "burst_ratio": np.nan if ratio is None else ratio}]


EXPERIMENTS = {
    "logical_error_sweep": (run_logical_error_sweep, {
        "d": "9 13", "p": "1e-3 3e-3", "modes": "uniform_greedy aware_greedy",
        "d_ano": 2, "p_ano": 0.5, "trials": 100000}),
    "detection_eval": (run_detection_eval, {
        "d": 21, "p": 1e-3, "p_ano_ratio": 500, "d_ano": 4, "alpha": 0.01,
        "n_th": 20, "c_win": 0, "cycles": 400, "trials": 1000}),
    "rollback_compare": (run_rollback_compare, {
        "d": "9", "p": "3e-3", "d_ano": 2, "p_ano": 0.5, "trials": 100000}),
    "scalability": (run_scalability, {
        "area_ratios": "0.1 0.316 1 3.16 10 31.6 100", "f_ano": 0.1,
        "tau_ano": 25e-3, "tau_cyc": 1e-6, "c_lat": 30, "d_ano": 4,
        "target": 1e-10}),
    "throughput": (run_throughput, {
        "modes": "no_mbbe q3de baseline_doubled_d", "n_instr": 10000,
        "mbbe_p": 1e-5, "duration_ticks": 100}),
    "memory_table": (run_memory_table, {"d": "21 31", "c_win": "100 300"}),
    "effective_rate": (run_effective_rate, {
        "p_l": 1e-10, "p_l_ano": 1e-4, "f_ano": 0.1, "tau_ano": 25e-3}),
}


def write_outputs(out, rows, sidecar):
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    with open(out + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def build_parser():
    parser = argparse.ArgumentParser(prog="burstqec")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--trials", type=int, default=None)
        sp.add_argument("--out", default=f"{name}.csv")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    runner, defaults = EXPERIMENTS[args.experiment]
    try:
        cfg = load_config(args.experiment, args.config, args.set, defaults)
        if args.trials is not None:
            if "trials" not in cfg:
                raise ConfigError(
                    f"{args.experiment} does not take a trial count")
            cfg["trials"] = args.trials
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        rows = runner(cfg, args.seed, args.workers)
    except Exception as exc:
        print(f"error: {args.experiment} failed: {exc}", file=sys.stderr)
        return 3
    sidecar = {"experiment": args.experiment, "config": cfg,
               "seed": args.seed, "workers": args.workers,
               "wall_time_s": round(time.perf_counter() - t0, 3),
               "version": __version__}
    write_outputs(args.out, rows, sidecar)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
