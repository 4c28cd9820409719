"""
Command-line front end.

    cronav run scenario.yaml --out results/a --override sensor.sigma_y=0
    cronav compare off-nominal --out results/off --jobs 2
    cronav design --overshoot 0.05 --rise-time 10
    cronav replay results/a/manifest.json

Exit codes: 0 success, 1 replay mismatch, 2 invalid configuration,
3 run aborted (a suite exits 3 if any member aborted).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import config_from_dict, config_to_dict, dump_config, load_config
from .errors import ConfigError, InfeasibleBoundError, RunAborted
from .observers.design import (
    LuenbergerDesign,
    design_luenberger,
    eigenvalue_shift_report,
    place_luenberger,
    reactive_design,
)
from .sim import RunResult, Telemetry, compare_runs, metrics_table, resolve_setup, run_scenario

OUTPUT_ROOT_ENV = "CRONAV_OUTPUT_ROOT"
TELEMETRY_SCHEMA = 1

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_ABORT = 3


# ------------------------------------------------------------------- writers


def _fmt(v: float) -> str:
    # repr round-trips; NaN marks columns without data (w_d_hat for non-Levant runs)
    return "" if v != v else repr(v)


def write_telemetry_csv(tel: Telemetry, path) -> str:
    """Write telemetry with round-trip float formatting; returns the SHA-256."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(Telemetry.COLUMNS)
        for row in tel.matrix().tolist():
            writer.writerow([_fmt(v) for v in row])
    return file_sha256(path)


def read_telemetry_csv(path) -> tuple[list[str], np.ndarray]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) if v else math.nan for v in row] for row in reader]
    return header, np.array(rows, dtype=float).reshape(len(rows), len(header))


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _json_value(v):
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _write_json(path, data) -> None:
    def clean(x):
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        return _json_value(x)

    Path(path).write_text(json.dumps(clean(data), indent=2) + "\n")


def default_out_dir(name: str) -> Path:
    root = Path(os.environ.get(OUTPUT_ROOT_ENV, "runs"))
    stamp = _dt.datetime.now().strftime("%Y%m%d-%H%M%S")
    return root / f"{name}-{stamp}"


def write_run_outputs(result: RunResult, out_dir: Path, config_path: str | None,
                      plots: bool = True, command: list | None = None) -> dict:
    """Telemetry, metrics, resolved config, manifest and figures of one run."""
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    manifest = {
        "tool": "cronav",
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "config_path": config_path,
        "output_dir": str(out_dir),
        "command": command,
        "label": result.label,
        "status": "ok" if result.ok else "aborted",
        "telemetry_schema": TELEMETRY_SCHEMA,
        "telemetry_columns": list(Telemetry.COLUMNS),
        "config": config_to_dict(cfg),
    }
    (out_dir / "config.resolved.yaml").write_text(dump_config(cfg))
    tel = result.telemetry
    if tel is not None:
        manifest["telemetry_sha256"] = write_telemetry_csv(tel, out_dir / "telemetry.csv")
        manifest["telemetry_rows"] = len(tel)
    summary = {"label": result.label, "status": manifest["status"], "error": result.error}
    if result.metrics is not None:
        summary["metrics"] = result.metrics.as_dict()
    try:
        summary["setup"] = resolve_setup(cfg).summary()
    except (ConfigError, InfeasibleBoundError):
        pass
    _write_json(out_dir / "metrics.json", summary)
    _write_json(out_dir / "manifest.json", manifest)
    if plots and tel is not None and len(tel) > 1:
        from .plotting import plot_run

        plot_run(tel, out_dir, label=result.label)
    return manifest


# ------------------------------------------------------------------ commands


def cmd_run(args) -> int:
    try:
        cfg, _ = load_config(args.config, args.override, args.seed)
        resolve_setup(cfg)
    except (ConfigError, InfeasibleBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out) if args.out else default_out_dir(cfg.name)
    try:
        tel, metrics = run_scenario(cfg)
        result = RunResult(cfg.name, cfg, tel, metrics)
        code = EXIT_OK
    except RunAborted as exc:
        result = RunResult(cfg.name, cfg, exc.telemetry, None, str(exc))
        code = EXIT_ABORT
        print(f"run aborted: {exc}", file=sys.stderr)
    write_run_outputs(result, out, str(args.config), plots=not args.no_plots, command=sys.argv[1:])
    if result.metrics is not None:
        _print_metrics([result])
    print(f"outputs in {out}")
    return code


def _print_metrics(results) -> None:
    header, rows = metrics_table(results)
    keep = ["label", "status", "E_max", "E_tail", "pos_rmse", "vel_rmse",
            "radius_err_final", "switching_count", "convergence_time", "delta_final"]
    idx = [header.index(k) for k in keep]
    widths = [max(len(keep[j]), 10) for j in range(len(keep))]
    print("  ".join(k.rjust(w) for k, w in zip(keep, widths)))
    for row in rows:
        cells = []
        for j, w in zip(idx, widths):
            v = row[j]
            cells.append((f"{v:.3e}" if isinstance(v, float) else str(v)).rjust(w))
        print("  ".join(cells))


def cmd_compare(args) -> int:
    from .suites import load_suite

    try:
        name, members = load_suite(args.suite, args.override, args.seed)
        labels = [m[0] for m in members]
        cfgs = [m[1] for m in members]
        for c in cfgs:
            resolve_setup(c)
        results = compare_runs(cfgs, labels, jobs=args.jobs)
    except (ConfigError, InfeasibleBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out) if args.out else default_out_dir(name)
    out.mkdir(parents=True, exist_ok=True)
    index = []
    for r in results:
        sub = out / r.label
        write_run_outputs(r, sub, str(args.suite), plots=not args.no_plots, command=sys.argv[1:])
        index.append({"label": r.label, "dir": r.label, "status": "ok" if r.ok else "failed",
                      "error": r.error, "telemetry": f"{r.label}/telemetry.csv"})
    header, rows = metrics_table(results)
    with (out / "comparison.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header + ["telemetry"])
        for row, r in zip(rows, results):
            w.writerow([repr(v) if isinstance(v, float) else v for v in row] + [f"{r.label}/telemetry.csv"])
    _write_json(out / "suite.json", {"suite": name, "version": __version__, "runs": index})
    ok = [r for r in results if r.ok]
    if not args.no_plots and ok:
        from .plotting import plot_comparison, plot_estimation_errors

        plot_comparison({r.label: r.telemetry for r in ok}, out)
        kinds = sorted({r.config.observer.kind for r in ok})
        if len(kinds) > 1:
            for kind in kinds:
                group = {r.label: r.telemetry for r in ok if r.config.observer.kind == kind}
                plot_estimation_errors(group, out / f"estimation_error_{kind}.svg")
    _print_metrics(results)
    print(f"outputs in {out}")
    failed = [r for r in results if not r.ok]
    for r in failed:
        print(f"member {r.label} failed: {r.error}", file=sys.stderr)
    return EXIT_ABORT if failed else EXIT_OK


def cmd_design(args) -> int:
    from .dynamics import OrbitParams

    try:
        omega = args.omega if args.omega is not None else OrbitParams().omega
        if not omega > 0:
            raise ConfigError(f"omega must be > 0, got {omega}")
        if args.overshoot is not None or args.rise_time is not None:
            if args.overshoot is None or args.rise_time is None:
                raise ConfigError("--overshoot and --rise-time go together")
            design = design_luenberger(args.overshoot, args.rise_time, args.zeta_variant)
        elif args.target_eigs is not None:
            design = place_luenberger(omega, tuple(args.target_eigs), label="placed")
        else:
            design = reactive_design(omega)
        if not 0 < args.delta_min <= 1:
            raise ConfigError(f"--delta-min must lie in (0, 1], got {args.delta_min}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print_design_report(design, omega, args.delta_min)
    return EXIT_OK


def print_design_report(design: LuenbergerDesign, omega: float, delta_min: float) -> None:
    print(f"design: {design.label}")
    print(f"omega  = {omega:.10e} rad/s")
    if design.zeta is not None:
        print(f"zeta   = {design.zeta:.6f}")
        print(f"omega_n = {design.omega_n:.6f} rad/s")
    g = design.gains
    print("gains  = " + "  ".join(f"{n}={v:.6e}" for n, v in zip(("Lx", "Ly", "Lz", "Lvx", "Lvy", "Lvz"), g)))
    print("L =")
    for row in design.L:
        print("  " + "  ".join(f"{v: .6e}" for v in row))
    print("spectrum of A - delta L C:")
    for row in eigenvalue_shift_report(design, [1.0, delta_min], omega):
        ev = "  ".join(_fmt_complex(z) for z in row["eigenvalues"])
        print(f"  delta={row['delta']:g}: {ev}")
        print(f"    max Re = {row['max_real']:.3e}  max |Im| = {row['max_abs_imag']:.3e}")


def _fmt_complex(z) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.4g}{z.imag:+.4g}i"


def cmd_replay(args) -> int:
    path = Path(args.manifest)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        manifest = json.loads(path.read_text())
        cfg = config_from_dict(manifest["config"])
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load manifest {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out) if args.out else path.parent / "replay"
    try:
        tel, metrics = run_scenario(cfg)
        result = RunResult(manifest.get("label") or cfg.name, cfg, tel, metrics)
        code = EXIT_OK
    except RunAborted as exc:
        result = RunResult(cfg.name, cfg, exc.telemetry, None, str(exc))
        code = EXIT_ABORT
    new = write_run_outputs(result, out, manifest.get("config_path"), plots=not args.no_plots,
                            command=sys.argv[1:])
    want = manifest.get("telemetry_sha256")
    got = new.get("telemetry_sha256")
    if want is not None and got != want:
        print(f"replay mismatch: telemetry sha256 {got} != {want}", file=sys.stderr)
        return EXIT_MISMATCH
    print(f"replay identical ({got})" if want else f"replayed into {out}")
    return code


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cronav", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"cronav {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help=f"output directory (default: ${OUTPUT_ROOT_ENV} or ./runs)")
        sp.add_argument("--seed", type=int, help="override the scenario seed")
        sp.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                        help="dotted config override, e.g. sensor.sigma_y=0 (repeatable)")
        sp.add_argument("--no-plots", action="store_true", help="skip figure rendering")

    r = sub.add_parser("run", help="run one scenario file")
    r.add_argument("config")
    common(r)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="run a suite (file or built-in name) and tabulate")
    c.add_argument("suite", help="suite file or one of: open-loop-nominal, off-nominal, deployment")
    c.add_argument("--jobs", type=int, default=1, help="parallel member runs")
    common(c)
    c.set_defaults(func=cmd_compare)

    d = sub.add_parser("design", help="Luenberger gain design report")
    d.add_argument("--overshoot", type=float, help="peak overshoot fraction, e.g. 0.05")
    d.add_argument("--rise-time", type=float, help="rise time [s]")
    d.add_argument("--zeta-variant", choices=("printed", "textbook"), default="printed")
    d.add_argument("--target-eigs", type=float, nargs=2, metavar=("P1", "P2"),
                   help="place each real pole with multiplicity 3 (coupled design)")
    d.add_argument("--omega", type=float, help="orbital rate [rad/s] (default 500 km orbit)")
    d.add_argument("--delta-min", type=float, default=1e-3, help="lowest adaptive factor to tabulate")
    d.set_defaults(func=cmd_design)

    rp = sub.add_parser("replay", help="re-run a manifest and check telemetry identity")
    rp.add_argument("manifest", help="manifest.json or the run directory holding it")
    rp.add_argument("--out", help="output directory (default: <run dir>/replay)")
    rp.add_argument("--no-plots", action="store_true")
    rp.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
