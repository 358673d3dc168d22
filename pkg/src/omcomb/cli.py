"""Command-line entry point: steady / run / sweep / oracle.

Config files are flat JSON documents; frequencies in ordinary Hz, drive
amplitudes in units of 1e9 s^-1, plus optional solver keys
(steps_per_period, settle_periods, record_periods, k_max, threshold_rel).

``run`` writes spectrum.csv, metrics.txt and spectrum.png into --out;
``sweep`` writes sweep.csv and sweep.png; ``oracle`` writes oracle.csv.
All outputs are deterministic for a fixed config.  Failures exit nonzero
after printing one machine-readable JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .dynamics import DivergenceError
from .linear_response import linear_response
from .model import (ConfigError, OmcombError, SystemParams,
                    params_from_config, validate)
from .pipeline import SimulationResult, SolverSettings, simulate
from .presets import PRESETS
from .spectrum import write_spectrum_csv
from .steady_state import solve_steady

_SOLVER_KEYS = ("steps_per_period", "settle_periods", "record_periods",
                "k_max", "threshold_rel")

#: Config key touched by each sweep axis (values in config units).
_SWEEP_AXES = {
    "eps_p": "eps_p",
    "eps_f": "eps_f",
    "n": "n",
    "delta_a": "delta_a_hz",
}

SWEEP_CSV_COLUMNS = ("axis", "value", "cutoff_neg", "cutoff_pos",
                     "f_rep_over_omega_b", "range_lo_over_omega_b",
                     "range_hi_over_omega_b", "max_line_abs", "error")


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    solver: SolverSettings
    out_dir: Path

    @property
    def spectrum_csv(self) -> Path:
        return self.out_dir / "spectrum.csv"

    @property
    def metrics_txt(self) -> Path:
        return self.out_dir / "metrics.txt"

    @property
    def figure_png(self) -> Path:
        return self.out_dir / "spectrum.png"


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    base: RunConfig


def load_config_doc(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    return doc


def solver_from_doc(doc: dict) -> SolverSettings:
    kwargs = {}
    for key in _SOLVER_KEYS:
        if key in doc and doc[key] is not None:
            v = doc[key]
            if key in ("steps_per_period", "record_periods", "k_max"):
                v = int(v)
            else:
                v = float(v)
            kwargs[key] = v
    return SolverSettings(**kwargs).check()


def _resolve_doc(args) -> dict:
    if args.preset is not None and args.config is not None:
        raise ConfigError("give either --preset or --config, not both")
    if args.preset is not None:
        if args.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
        return dict(PRESETS[args.preset])
    if args.config is not None:
        return load_config_doc(args.config)
    raise ConfigError("one of --preset or --config is required")


def build_run_config(doc: dict, out_dir, threshold: float | None = None) -> RunConfig:
    params = params_from_config(doc)
    solver = solver_from_doc(doc)
    if threshold is not None:
        solver = replace(solver, threshold_rel=float(threshold)).check()
    return RunConfig(params=params, solver=solver, out_dir=Path(out_dir))


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_metrics_txt(result: SimulationResult, path) -> None:
    m = result.metrics
    comb = result.spectrum
    p = result.params
    items = [
        ("n", p.n),
        ("omega_b_rad_s", p.omega_b),
        ("omega_fund_rad_s", comb.omega_fund),
        ("f_rep_rad_s", m.f_rep),
        ("f_rep_over_omega_b", m.f_rep / p.omega_b),
        ("range_lo_rad_s", m.f_range[0]),
        ("range_hi_rad_s", m.f_range[1]),
        ("range_lo_over_omega_b", float(m.cutoff_neg)),
        ("range_hi_over_omega_b", float(m.cutoff_pos)),
        ("cutoff_neg", str(m.cutoff_neg)),
        ("cutoff_pos", str(m.cutoff_pos)),
        ("threshold_rel", m.threshold_rel),
        ("reference_amplitude", m.reference),
        ("lines_present", len(m.present_ks)),
        ("present_ks", " ".join(str(k) for k in m.present_ks)),
        ("parseval_rel_err", comb.parseval_error()),
        ("leakage_floor_rel", comb.leakage_floor),
        ("fft_projection_max_dev_rel", result.fft_max_dev_rel),
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in items:
            fh.write(f"{key}={_fmt(value)}\n")


def run(config: RunConfig) -> SimulationResult:
    """Single simulation; writes spectrum CSV, metrics and figure."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    result = simulate(config.params, config.solver)
    write_spectrum_csv(result.spectrum, config.spectrum_csv)
    write_metrics_txt(result, config.metrics_txt)
    from .plotting import save_spectrum_figure
    save_spectrum_figure(result.spectrum, result.metrics, config.figure_png)
    return result


def sweep(spec: SweepSpec) -> list[dict]:
    """One row of metrics per axis value; a failing row does not stop the rest."""
    if spec.axis not in _SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {spec.axis!r}; choose from {sorted(_SWEEP_AXES)}")
    if not spec.values:
        raise ConfigError("sweep needs a non-empty values list")
    rows = []
    for value in spec.values:
        row = {"axis": spec.axis, "value": value, "cutoff_neg": "", "cutoff_pos": "",
               "f_rep_over_omega_b": "", "range_lo_over_omega_b": "",
               "range_hi_over_omega_b": "", "max_line_abs": "", "error": ""}
        try:
            doc = dict(_doc_for(spec.base))
            doc[_SWEEP_AXES[spec.axis]] = value
            params = params_from_config(doc)
            result = simulate(params, spec.base.solver)
            m = result.metrics
            row.update({
                "cutoff_neg": float(m.cutoff_neg),
                "cutoff_pos": float(m.cutoff_pos),
                "f_rep_over_omega_b": m.f_rep / params.omega_b,
                "range_lo_over_omega_b": float(m.cutoff_neg),
                "range_hi_over_omega_b": float(m.cutoff_pos),
                "max_line_abs": float(np.abs(result.spectrum.amp_out).max()),
            })
        except OmcombError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def _doc_for(config: RunConfig) -> dict:
    from .model import params_to_config
    return params_to_config(config.params)


def write_sweep_csv(rows: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(SWEEP_CSV_COLUMNS) + "\n")
        for row in rows:
            cells = [_fmt(row[c]).replace(",", ";") for c in SWEEP_CSV_COLUMNS]
            fh.write(",".join(cells) + "\n")


def oracle_rows(params: SystemParams, ratios: list[float],
                solver: SolverSettings) -> list[dict]:
    """Weak-probe cross-check: full pipeline k = n line vs linearized response."""
    rows = []
    for ratio in ratios:
        p = validate(replace(params, eps_p=ratio * params.eps_c, eps_f=0.0))
        result = simulate(p, solver)
        lin = linear_response(p, p.delta_p, p.eps_p)
        sim_line = result.spectrum.line(p.n).amp_alpha
        dev = abs(sim_line - lin.a_plus) / abs(lin.a_plus) if lin.a_plus != 0 else 0.0
        rows.append({
            "eps_p_over_eps_c": ratio,
            "sim_re": sim_line.real, "sim_im": sim_line.imag,
            "lin_re": lin.a_plus.real, "lin_im": lin.a_plus.imag,
            "rel_dev": float(dev),
            "lin_residual_rel": lin.residual_rel,
        })
    return rows


def write_oracle_csv(rows: list[dict], path) -> None:
    cols = ("eps_p_over_eps_c", "sim_re", "sim_im", "lin_re", "lin_im",
            "rel_dev", "lin_residual_rel")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in cols) + "\n")


def _cmd_run(args) -> int:
    config = build_run_config(_resolve_doc(args), args.out, args.threshold)
    result = run(config)
    m = result.metrics
    print(f"lines_present={len(m.present_ks)} "
          f"f_rep_over_omega_b={m.f_rep / result.params.omega_b:.6g} "
          f"range=[{float(m.cutoff_neg):.4g},{float(m.cutoff_pos):.4g}]*omega_b")
    print(f"wrote {config.spectrum_csv} {config.metrics_txt} {config.figure_png}")
    return 0


def _cmd_steady(args) -> int:
    config = build_run_config(_resolve_doc(args), args.out, None)
    branches = solve_steady(config.params)
    print(f"{'intensity':>14} {'re_alpha0':>14} {'im_alpha0':>14} "
          f"{'re_beta0':>14} {'im_beta0':>14} stable")
    for br in branches:
        print(f"{br.intensity:14.6e} {br.alpha0.real:14.6e} {br.alpha0.imag:14.6e} "
              f"{br.beta0.real:14.6e} {br.beta0.imag:14.6e} {br.stable}")
    return 0


def _cmd_sweep(args) -> int:
    config = build_run_config(_resolve_doc(args), args.out, args.threshold)
    if args.axis == "n":
        values = tuple(int(v) for v in args.values.split(","))
    else:
        values = tuple(float(v) for v in args.values.split(","))
    spec = SweepSpec(axis=args.axis, values=values, base=config)
    rows = sweep(spec)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = config.out_dir / "sweep.csv"
    write_sweep_csv(rows, csv_path)
    from .plotting import save_sweep_figure
    save_sweep_figure(rows, args.axis, config.out_dir / "sweep.png")
    for row in rows:
        if row["error"]:
            print(f"{row['axis']}={row['value']}: ERROR {row['error']}")
        else:
            print(f"{row['axis']}={row['value']}: range=[{row['cutoff_neg']:.4g},"
                  f"{row['cutoff_pos']:.4g}]*omega_b "
                  f"f_rep/omega_b={row['f_rep_over_omega_b']:.6g}")
    print(f"wrote {csv_path}")
    return 0


def _cmd_oracle(args) -> int:
    config = build_run_config(_resolve_doc(args), args.out, args.threshold)
    ratios = [float(v) for v in args.ratios.split(",")]
    rows = oracle_rows(config.params, ratios, config.solver)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = config.out_dir / "oracle.csv"
    write_oracle_csv(rows, csv_path)
    print(f"{'eps_p/eps_c':>12} {'rel_dev':>12} {'lin_residual':>12}")
    for row in rows:
        print(f"{row['eps_p_over_eps_c']:12.3e} {row['rel_dev']:12.3e} "
              f"{row['lin_residual_rel']:12.3e}")
    print(f"wrote {csv_path}")
    return 0


def _add_common(sub) -> None:
    sub.add_argument("--config", type=Path, default=None, help="JSON config path")
    sub.add_argument("--preset", default=None,
                     help=f"named preset: {', '.join(sorted(PRESETS))}")
    sub.add_argument("--out", type=Path, default=Path("."), help="output directory")
    sub.add_argument("--threshold", type=float, default=None,
                     help="presence threshold (relative amplitude)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omcomb",
        description="Three-tone cavity optomechanics simulator and comb analyzer")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("steady", help="print algebraic steady-state branches")
    _add_common(sub)
    sub.set_defaults(func=_cmd_steady)

    sub = subs.add_parser("run", help="single simulation: spectrum + metrics + figure")
    _add_common(sub)
    sub.set_defaults(func=_cmd_run)

    sub = subs.add_parser("sweep", help="metrics table over one parameter axis")
    _add_common(sub)
    sub.add_argument("--axis", required=True, choices=sorted(_SWEEP_AXES))
    sub.add_argument("--values", required=True,
                     help="comma-separated axis values (config units)")
    sub.set_defaults(func=_cmd_sweep)

    sub = subs.add_parser("oracle", help="weak-probe linear-response comparison report")
    _add_common(sub)
    sub.add_argument("--ratios", default="1e-4,1e-3",
                     help="comma-separated probe/control amplitude ratios")
    sub.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DivergenceError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 3
    except OmcombError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
