"""Command-line front end: runs the verification suites, persists result
manifests (JSON) and plot-ready tables (CSV).

Exit codes: 0 all records within tolerance, 1 tolerance failure or
ill-conditioned fit, 2 config/precondition error, 3 unsupported (n, route)
combination.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, evolution, extraction, quadrature
from .core import (QuadratureConfig, SpiralParams, VerificationRecord,
                   closed_form_In, closed_form_z_infinity, lambda_of)
from .evolution import OdeConfig

# Every key is optional in the config file; these are the embedded defaults.
# Tolerances are absolute unless the key says _rel.
DEFAULTS: dict[str, object] = {
    "quadrature.eps_grid": (0.2, 0.1, 0.05, 0.025, 0.0125),
    "quadrature.s_max": 6.0,
    "quadrature.delta_excise": 1e-8,
    "quadrature.abs_tol": 1e-6,
    "quadrature.rel_tol": 1e-6,
    "quadrature.extrap_order": 4,
    "ode.s_start": -200.0,
    "ode.s_end": 200.0,
    "ode.rel_tol": 1e-10,
    "ode.abs_tol": 1e-10,
    "ode.max_step_coeff": 0.5,
    "ode.tail_window": 8,
    "ode.samples_per_half_period": 32,
    "ode.max_steps": 50_000_000,
    "evolve.hopf_window": 50.0,
    "evolve.hopf_points": 2001,
    "extract.lambda_min": 0.02,
    "extract.lambda_max": 0.6,
    "extract.points": 20,
    "extract.degree": 8,
    "extract.window": 300.0,
    "extract.ode_tol": 1e-12,
    "extract.synthetic_points": 24,
    "extract.synthetic_degree": 10,
    "extract.report_count": 5,
    "zeta.raw_truncation": 500.0,
    "zeta.i3_truncation": 800.0,
    "block.count": 1000,
    "block.max_len": 6,
    "block.seed": 12345,
    "tolerance.fresnel_rel": 1e-6,
    "tolerance.dirichlet_rel": 1e-7,
    "tolerance.i1_direct_rel": 1e-5,
    "tolerance.i2_direct_rel": 1e-2,
    "tolerance.i2_omega_rel": 1e-5,
    "tolerance.i2_delta_abs": 0.0,
    "tolerance.i2_pv_abs": 1e-5,
    "tolerance.i3_rel": 1e-4,
    "tolerance.j_rel": 1e-4,
    "tolerance.j_imag_abs": 1e-6,
    "tolerance.zeta_parametric_rel": 1e-8,
    "tolerance.zeta_raw_rel": 1e-3,
    "tolerance.z_abs": 2e-3,
    "tolerance.a_abs": 1e-3,
    "tolerance.hopf_abs": 1e-8,
    "tolerance.block_abs": 1e-13,
    "tolerance.extract_rel": 1e-2,
    "tolerance.extract_synthetic_abs": 1e-8,
}


class ConfigError(Exception):
    pass


def _coerce(key: str, raw: str, like):
    try:
        if isinstance(like, bool):
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if isinstance(like, int):
            return int(raw)
        if isinstance(like, float):
            return float(raw)
        if isinstance(like, tuple):
            return tuple(float(p) for p in raw.split(",") if p.strip())
        return raw
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: cannot parse value {raw!r}") from exc


def load_config(path: "str | None") -> dict:
    """Defaults overridden by a flat key = value file with dotted keys."""
    cfg = dict(DEFAULTS)
    if path is None:
        return cfg
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{p}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"{p}:{lineno}: unknown config key {key!r}")
        cfg[key] = _coerce(key, raw, DEFAULTS[key])
    return cfg


def dump_defaults() -> str:
    lines = []
    for key, val in DEFAULTS.items():
        if isinstance(val, tuple):
            lines.append(f"{key} = {', '.join('%g' % v for v in val)}")
        else:
            lines.append(f"{key} = {val}")
    return "\n".join(lines) + "\n"


def quadrature_config(cfg: dict) -> QuadratureConfig:
    kwargs = {f.name: cfg[f"quadrature.{f.name}"] for f in fields(QuadratureConfig)}
    try:
        return QuadratureConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid quadrature config: {exc}") from exc


def ode_config(cfg: dict, **overrides) -> OdeConfig:
    kwargs = {f.name: cfg[f"ode.{f.name}"] for f in fields(OdeConfig)}
    kwargs.update(overrides)
    try:
        return OdeConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid ode config: {exc}") from exc


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------

def _json_value(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return float(v)


def _record_dict(rec: VerificationRecord, tolerance: float) -> dict:
    return {
        "name": rec.name,
        "computed": _json_value(rec.computed),
        "reference": _json_value(rec.reference),
        "abs_err": rec.abs_err,
        "rel_err": rec.rel_err,
        "route": rec.route.value,
        "runtime_seconds": rec.runtime_seconds,
        "tolerance": tolerance,
        "pass": bool(rec.abs_err <= tolerance),
    }


class Manifest:
    """Collects records and serializes the run."""

    def __init__(self, command: str, argv: list[str], cfg: dict):
        self.command = command
        self.argv = argv
        self.cfg = cfg
        self.started_at = datetime.now(timezone.utc).isoformat()
        self.records: list[dict] = []
        self.extra: dict = {}

    def add(self, name, computed, reference, route, runtime, tolerance):
        rec = VerificationRecord.create(name, computed, reference, route, runtime)
        self.records.append(_record_dict(rec, float(tolerance)))

    def all_pass(self) -> bool:
        return all(r["pass"] for r in self.records)

    def payload(self) -> dict:
        out = {
            "command": self.command,
            "argv": self.argv,
            "version": __version__,
            "config": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in self.cfg.items()},
            "started_at": self.started_at,
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "records": self.records,
        }
        out.update(self.extra)
        return out


def deterministic_payload(payload: dict) -> dict:
    """The manifest minus wall-clock fields; identical config + command must
    yield a byte-identical serialization of this across runs and thread counts."""
    out = {k: v for k, v in payload.items() if k not in ("started_at", "finished_at")}
    out["records"] = [{k: v for k, v in r.items() if k != "runtime_seconds"}
                      for r in payload.get("records", [])]
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_outputs(manifest: Manifest, out_dir: Path, fmt: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{manifest.command}_manifest.json"
    json_path.write_text(json.dumps(manifest.payload(), indent=2, sort_keys=False) + "\n")
    if fmt == "csv":
        csv_path = out_dir / f"{manifest.command}_records.csv"
        with csv_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name", "computed", "reference", "abs_err",
                             "rel_err", "route", "runtime_seconds",
                             "tolerance", "pass"])
            for r in manifest.records:
                comp = r["computed"]
                if isinstance(comp, dict):
                    comp = complex(comp["re"], comp["im"])
                ref = r["reference"]
                if isinstance(ref, dict):
                    ref = complex(ref["re"], ref["im"])
                writer.writerow([r["name"], _fmt(comp), _fmt(ref),
                                 _fmt(r["abs_err"]), _fmt(r["rel_err"]),
                                 r["route"], _fmt(r["runtime_seconds"]),
                                 _fmt(r["tolerance"]), r["pass"]])
    return json_path


def write_trajectory_csv(path: Path, system: str, traj: evolution.Trajectory):
    """One row per sample, full double precision (17 significant digits)."""
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if system == "so3":
            writer.writerow(["s", "x", "y", "z", "norm_drift"])
            for s, st in zip(traj.s, traj.states):
                drift = abs(math.sqrt(float(np.sum(st ** 2))) - 1.0)
                writer.writerow([_fmt(float(s))] + [_fmt(float(c)) for c in st]
                                + [_fmt(drift)])
        else:
            writer.writerow(["s", "re_a", "im_a", "re_b", "im_b", "norm_drift"])
            for s, st in zip(traj.s, traj.states):
                drift = abs(math.sqrt(float(np.sum(np.abs(st) ** 2))) - 1.0)
                writer.writerow([_fmt(float(s)),
                                 _fmt(st[0].real), _fmt(st[0].imag),
                                 _fmt(st[1].real), _fmt(st[1].imag),
                                 _fmt(drift)])


def _run_ordered(tasks, threads: int):
    """Run independent callables, returning results in task order regardless
    of scheduling."""
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(t) for t in tasks]
            return [f.result() for f in futures]
    return [t() for t in tasks]


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify_basics(args, cfg: dict, manifest: Manifest) -> int:
    qcfg = quadrature_config(cfg)
    sqrt_half_pi = math.sqrt(math.pi / 2.0)

    def block_task():
        rng = np.random.default_rng(int(cfg["block.seed"]))
        count = int(cfg["block.count"])
        max_len = int(cfg["block.max_len"])
        worst = 0.0
        for _ in range(count):
            k = int(rng.integers(2, max_len + 1))
            s_vals = rng.uniform(-4.0, 4.0, size=k)
            params = SpiralParams(a=float(rng.uniform(0.5, 3.0)),
                                  R=float(rng.uniform(0.5, 2.0)))
            worst = max(worst, evolution.block_structure_check(s_vals, params).max_deviation)
        return worst

    results = _run_ordered([
        lambda: _timed(lambda: quadrature.fresnel_full_line("cos", qcfg)),
        lambda: _timed(lambda: quadrature.fresnel_full_line("sin", qcfg)),
        lambda: _timed(lambda: quadrature.dirichlet_integral(qcfg)),
        lambda: _timed(block_task),
    ], args.threads)

    (fc, t1), (fs, t2), (dirich, t3), (block_dev, t4) = results
    manifest.add("fresnel cos(s^2) full line", float(fc), sqrt_half_pi,
                 "direct", t1, cfg["tolerance.fresnel_rel"] * sqrt_half_pi)
    manifest.add("fresnel sin(s^2) full line", float(fs), sqrt_half_pi,
                 "direct", t2, cfg["tolerance.fresnel_rel"] * sqrt_half_pi)
    manifest.add("fresnel cos-sin consistency", float(fc) - float(fs), 0.0,
                 "direct", 0.0, 2.0 * cfg["tolerance.fresnel_rel"] * sqrt_half_pi)
    manifest.add("dirichlet sin(w)/w half line", float(dirich), math.pi / 2.0,
                 "direct", t3, cfg["tolerance.dirichlet_rel"] * math.pi / 2.0)
    manifest.add("generator block structure max deviation", block_dev, 0.0,
                 "closed-form", t4, cfg["tolerance.block_abs"])
    return 0 if manifest.all_pass() else 1


def cmd_integrals(args, cfg: dict, manifest: Manifest) -> int:
    qcfg = quadrature_config(cfg)
    route = args.route
    for n in args.n:
        if route == "direct" and n not in (1, 2):
            print(f"error: direct route supports n in (1, 2); n={n} is cost-gated "
                  "(2n-dimensional nested oscillatory quadrature)", file=sys.stderr)
            return 3
        if route == "omega" and n not in (2, 3):
            print(f"error: omega route supports n in (2, 3); n={n} has no "
                  "implemented reduced representation", file=sys.stderr)
            return 3
    if args.j and route != "direct":
        print("error: --j requires route=direct", file=sys.stderr)
        return 3

    for n in args.n:
        ref = closed_form_In(n)
        if route == "direct":
            val, dt = _timed(lambda: quadrature.direct_In(n, qcfg))
            tol = cfg[f"tolerance.i{n}_direct_rel"] * ref
            manifest.add(f"I_{n} direct nested", float(val), ref, "direct", dt, tol)
        elif n == 2:
            delta, dt1 = _timed(quadrature.i2_delta_part)
            manifest.add("I_2 omega delta part", delta, 0.5, "omega", dt1,
                         cfg["tolerance.i2_delta_abs"])
            pv, dt2 = _timed(lambda: quadrature.i2_pv_part(qcfg))
            manifest.add("I_2 omega principal value part", float(pv), -0.25,
                         "omega", dt2, cfg["tolerance.i2_pv_abs"])
            total, dt3 = _timed(lambda: quadrature.I2_omega(qcfg))
            manifest.add("I_2 omega route", float(total), ref, "omega", dt3,
                         cfg["tolerance.i2_omega_rel"] * ref)
        else:
            trunc = float(cfg["zeta.i3_truncation"])
            itilde, dt1 = _timed(lambda: quadrature.reduced_double_integral(
                qcfg, truncation=trunc))
            manifest.add("I_3 reduced dimensionless integral",
                         float(itilde) / (4.0 * math.pi ** 2), 1.0 / 24.0,
                         "omega", dt1, cfg["tolerance.i3_rel"] / 24.0)
            i3, dt2 = _timed(lambda: quadrature.I3_reduced(qcfg, truncation=trunc))
            manifest.add("I_3 omega route", float(i3), ref, "omega", dt2,
                         cfg["tolerance.i3_rel"] * ref)
        if args.j and route == "direct":
            jref = (math.pi / 2.0) ** n / math.factorial(n)
            jval, dt = _timed(lambda: quadrature.direct_Jn(n, qcfg))
            manifest.add(f"J_{n} direct nested", complex(jval), jref, "direct",
                         dt, cfg["tolerance.j_rel"] * jref)
            manifest.add(f"J_{n} imaginary part", complex(jval).imag, 0.0,
                         "direct", 0.0, cfg["tolerance.j_imag_abs"])
    return 0 if manifest.all_pass() else 1


def cmd_evolve(args, cfg: dict, manifest: Manifest) -> int:
    if args.coupling is not None:
        if args.coupling < 0:
            raise ConfigError("coupling must be nonnegative")
        params = SpiralParams.from_coupling(args.coupling)
    elif args.a is not None and args.R is not None:
        params = SpiralParams(a=args.a, R=args.R)
    else:
        raise ConfigError("provide --coupling or both --a and --R")
    lam = lambda_of(params)
    ocfg = ode_config(cfg)

    z_ref = closed_form_z_infinity(lam)
    a_ref = math.exp(-math.pi * lam / 8.0)

    (z_val, z_unc), dt_z = _timed(lambda: evolution.z_infinity(params, ocfg))
    tol_z = min(cfg["tolerance.z_abs"], z_unc) if z_unc > 0 else cfg["tolerance.z_abs"]
    manifest.add(f"z(infinity) at coupling {lam:g}", z_val, z_ref,
                 "ode-extraction", dt_z, tol_z)

    (a_val, a_unc), dt_a = _timed(lambda: evolution.a_infinity_magnitude(params, ocfg))
    tol_a = min(cfg["tolerance.a_abs"], a_unc) if a_unc > 0 else cfg["tolerance.a_abs"]
    manifest.add(f"|a(infinity)| at coupling {lam:g}", a_val, a_ref,
                 "ode-extraction", dt_a, tol_a)
    manifest.add("2|a|^2 - 1 vs z consistency", 2.0 * a_val ** 2 - 1.0, z_val,
                 "ode-extraction", 0.0, z_unc + 4.0 * a_val * a_unc + 1e-12)

    window = float(cfg["evolve.hopf_window"])
    npts = int(cfg["evolve.hopf_points"])
    grid = np.linspace(-window, window, npts)
    hopf_cfg = ode_config(cfg, s_start=-window, s_end=window)
    state0 = evolution.SpinorState(1.0, 0.0)

    def hopf_dev():
        spin = evolution.integrate("spinor", state0, params, hopf_cfg,
                                   sample_points=grid)
        rot = evolution.integrate("so3", evolution.hopf_map(state0), params,
                                  hopf_cfg, sample_points=grid)
        amps = spin.states
        p = amps[:, 0] * np.conj(amps[:, 1])
        mapped = np.column_stack([
            2.0 * p.real, -2.0 * p.imag,
            np.abs(amps[:, 0]) ** 2 - np.abs(amps[:, 1]) ** 2])
        return float(np.abs(mapped - rot.states).max()), rot

    (dev, rot_traj), dt_h = _timed(hopf_dev)
    manifest.add(f"Hopf-map consistency over [-{window:g}, {window:g}]",
                 dev, 0.0, "ode-extraction", dt_h, cfg["tolerance.hopf_abs"])

    if args.export_trajectory:
        path = Path(args.export_trajectory)
        if args.export_system == "so3":
            write_trajectory_csv(path, "so3", rot_traj)
        else:
            spin = evolution.integrate("spinor", state0, params, hopf_cfg,
                                       sample_points=grid)
            write_trajectory_csv(path, "spinor", spin)
    return 0 if manifest.all_pass() else 1


def cmd_extract(args, cfg: dict, manifest: Manifest) -> int:
    report_n = int(cfg["extract.report_count"])
    if args.synthetic:
        count = int(cfg["extract.synthetic_points"])
        degree = int(cfg["extract.synthetic_degree"])
        grid = extraction.chebyshev_lambda_grid(
            cfg["extract.lambda_min"], cfg["extract.lambda_max"], count)
        samples = [(float(l), closed_form_z_infinity(float(l)), 0.0) for l in grid]
        dt_sample = 0.0
    else:
        count = int(cfg["extract.points"])
        degree = int(cfg["extract.degree"])
        window = float(cfg["extract.window"])
        tol = float(cfg["extract.ode_tol"])
        ocfg = ode_config(cfg, s_start=-window, s_end=window,
                          rel_tol=tol, abs_tol=tol)
        grid = extraction.chebyshev_lambda_grid(
            cfg["extract.lambda_min"], cfg["extract.lambda_max"], count)
        samples, dt_sample = _timed(lambda: extraction.sample_z_curve(
            grid, ocfg, lambda_max=cfg["extract.lambda_max"],
            max_workers=args.threads))

    if len(samples) < 2 * (degree + 1):
        print(f"error: precondition violated: degree {degree} needs at least "
              f"{2 * (degree + 1)} samples, got {len(samples)}", file=sys.stderr)
        return 2

    fit, dt_fit = _timed(lambda: extraction.extract_coefficients(samples, degree))
    manifest.extra["fit"] = {
        "lambdas": fit.lambdas.tolist(),
        "values": fit.values.tolist(),
        "uncertainties": fit.uncertainties.tolist(),
        "degree": fit.degree,
        "coefficients": fit.coefficients.tolist(),
        "standard_errors": fit.standard_errors.tolist(),
        "condition_number": fit.condition_number,
        "ill_conditioned": fit.ill_conditioned,
        "metadata": fit.metadata,
    }

    per_record_time = (dt_sample + dt_fit) / max(report_n, 1)
    for n in range(1, min(report_n, degree) + 1):
        ref = closed_form_In(n)
        tol = (cfg["tolerance.extract_synthetic_abs"] if args.synthetic
               else cfg["tolerance.extract_rel"] * ref)
        manifest.add(f"I_{n} extracted", float(fit.coefficients[n - 1]), ref,
                     "ode-extraction", per_record_time, tol)

    if not args.synthetic:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        sweep = out_dir / "extract_sweep.csv"
        with sweep.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["lambda", "z", "uncertainty"])
            for lam, val, unc in samples:
                writer.writerow([_fmt(lam), _fmt(val), _fmt(unc)])

    if fit.ill_conditioned:
        print(f"warning: ill-conditioned fit design "
              f"(condition number {fit.condition_number:.3e})", file=sys.stderr)
        return 1
    return 0 if manifest.all_pass() else 1


def cmd_zeta2(args, cfg: dict, manifest: Manifest) -> int:
    qcfg = quadrature_config(cfg)
    ref = math.pi ** 2 / 6.0
    methods = ["raw", "parametric"] if args.method == "both" else [args.method]

    tasks = []
    for m in methods:
        if m == "raw":
            tasks.append(lambda: _timed(lambda: quadrature.zeta2_check(
                "raw", qcfg, truncation=float(cfg["zeta.raw_truncation"]))))
        else:
            tasks.append(lambda: _timed(lambda: quadrature.zeta2_check("parametric", qcfg)))
    results = _run_ordered(tasks, args.threads)

    values = {}
    for m, (val, dt) in zip(methods, results):
        tol_key = "tolerance.zeta_raw_rel" if m == "raw" else "tolerance.zeta_parametric_rel"
        manifest.add(f"zeta(2) {m} route", float(val), ref, "omega" if m == "raw"
                     else "closed-form", dt, cfg[tol_key] * ref)
        values[m] = val
    if args.method == "both":
        raw, para = values["raw"], values["parametric"]
        manifest.add("zeta(2) cross-route agreement", float(raw), float(para),
                     "omega", 0.0, raw.uncertainty + para.uncertainty)
    return 0 if manifest.all_pass() else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multifresnel",
        description="Verify ordered multi-dimensional Fresnel-type integrals "
                    "by independent numerical routes.")
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="key = value config file overriding defaults")
    parser.add_argument("--out", metavar="DIR", default=".",
                        help="output directory for manifests and CSV files")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="also write records as CSV when 'csv'")
    parser.add_argument("--threads", type=int, default=1, metavar="N",
                        help="worker threads for independent sub-tasks")
    parser.add_argument("--dump-defaults", action="store_true",
                        help="print the full default config and exit")

    sub = parser.add_subparsers(dest="command")

    sub.add_parser("verify-basics",
                   help="Fresnel and Dirichlet integrals plus block-structure suite")

    p_int = sub.add_parser("integrals", help="ordered integrals by direct or omega route")
    p_int.add_argument("--n", type=int, nargs="+", required=True,
                       help="orders to evaluate")
    p_int.add_argument("--route", choices=("direct", "omega"), required=True)
    p_int.add_argument("--j", action="store_true",
                       help="also evaluate the alternating-phase integrals (direct route)")

    p_ev = sub.add_parser("evolve", help="ODE limits and Hopf consistency")
    p_ev.add_argument("--coupling", type=float, default=None,
                      help="dimensionless coupling 2/(a R^2)")
    p_ev.add_argument("--a", type=float, default=None, help="curvature rate")
    p_ev.add_argument("--R", type=float, default=None, help="sphere radius")
    p_ev.add_argument("--export-trajectory", metavar="PATH", default=None)
    p_ev.add_argument("--export-system", choices=("so3", "spinor"), default="so3")

    p_ex = sub.add_parser("extract", help="series coefficients from the z(lambda) curve")
    p_ex.add_argument("--synthetic", action="store_true",
                      help="fit the closed-form oracle curve instead of ODE data")

    p_z = sub.add_parser("zeta2", help="the double-integral representation of zeta(2)")
    p_z.add_argument("--method", choices=("raw", "parametric", "both"), default="both")

    return parser


_COMMANDS = {
    "verify-basics": cmd_verify_basics,
    "integrals": cmd_integrals,
    "evolve": cmd_evolve,
    "extract": cmd_extract,
    "zeta2": cmd_zeta2,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.dump_defaults:
        sys.stdout.write(dump_defaults())
        return 0
    if args.command is None:
        parser.print_help()
        return 2
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    manifest = Manifest(args.command, argv, cfg)
    try:
        code = _COMMANDS[args.command](args, cfg, manifest)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except evolution.IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if code in (2, 3):  # precondition or gate failure: no results to persist
        return code

    json_path = write_outputs(manifest, Path(args.out), args.format)
    for r in manifest.records:
        status = "PASS" if r["pass"] else "FAIL"
        print(f"[{status}] {r['name']}: abs_err={r['abs_err']:.3e} "
              f"tol={r['tolerance']:.3e}")
    print(f"manifest: {json_path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
