"""Command-line runner: single runs, coupling sweeps, validation, unit conversion.

Subcommands::

    pairspec run <config>      propagate one input and write all artifacts
    pairspec sweep <config>    run every (sweep value, material count) point
    pairspec validate          oracle-equivalence and invariant suite
    pairspec convert IN OUT    rewrite a grid file with nm <-> meV axes

Exit codes: 0 success, 1 config error, 2 solver failure, 3 validation failure.
The output directory resolves as --out flag > PAIRSPEC_OUT_DIR env var >
config output.dir.
"""

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import observables, scattering, states
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    ConvergenceFailure,
    NearSingularPencil,
    NonConvergentIntegral,
    NonPositiveDeterminant,
    PairspecError,
    SingularCovariance,
    SingularMatrix,
    StepOverflow,
)
from .model import SystemParams, build_dynamical_matrix, build_grid
from .states import (
    gaussian_jsa,
    jsa_from_jsi,
    load_jsi,
    parse_grid_text,
    save_jsi,
)
from .validation import run_validation

OUT_DIR_ENV = "PAIRSPEC_OUT_DIR"

_SOLVER_ERRORS = (
    SingularMatrix,
    NearSingularPencil,
    ConvergenceFailure,
    NonPositiveDeterminant,
    SingularCovariance,
    StepOverflow,
    NonConvergentIntegral,
)


@dataclass
class RunOutputs:
    jsi_in: states.JointSpectralIntensity
    jsi_out: states.JointSpectralIntensity
    jsi_out_raw: states.JointSpectralIntensity
    schmidt: observables.SchmidtSpectrum
    entropy: float
    purity: observables.PurityResult
    prop: scattering.PropagationResult
    epsilon_stability: float | None = None


def render_heatmap(jsi, path):
    """8-bit grayscale PGM (P5): rows = signal ascending, columns = idler
    ascending, linear [0, max] -> [0, 255]; axes metadata goes to a sibling
    .json file."""
    values = np.asarray(jsi.values, dtype=float)
    vmax = values.max()
    if vmax > 0:
        pixels = np.rint(values / vmax * 255.0).astype(np.uint8)
    else:
        pixels = np.zeros_like(values, dtype=np.uint8)
    rows, cols = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
    meta = {
        "rows": "signal ascending",
        "cols": "idler ascending",
        "units": "meV",
        "n": jsi.grid.n,
        "signal_min": float(jsi.grid.signal[0]),
        "signal_max": float(jsi.grid.signal[-1]),
        "idler_min": float(jsi.grid.idler[0]),
        "idler_max": float(jsi.grid.idler[-1]),
        "value_max": float(vmax),
    }
    meta_path = os.path.splitext(path)[0] + ".json"
    _write_json(meta_path, meta)


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _build_inputs(cfg: RunConfig, params: SystemParams):
    if cfg.input_kind == "gaussian":
        grid = build_grid(cfg.n, cfg.signal_range, cfg.idler_range)
        jsa = gaussian_jsa(
            grid,
            pump_center=cfg.gaussian["pump_center"],
            sum_width=cfg.gaussian["sum_width"],
            diff_width=cfg.gaussian["diff_width"],
            diff_offset=cfg.gaussian["diff_offset"],
        )
    else:
        jsi = load_jsi(cfg.input_path)
        grid = jsi.grid
        jsa = jsa_from_jsi(jsi)
    return grid, jsa


def execute_run(cfg: RunConfig, epsilon=None, check_epsilon_stability=True):
    """Run the full pipeline for one configuration; returns RunOutputs."""
    eps = cfg.epsilon if epsilon is None else epsilon
    params = SystemParams(
        omega_c=cfg.omega_c,
        material_freqs=cfg.material_freqs,
        g=cfg.g,
        sqrt_kappa=cfg.sqrt_kappa,
        epsilon=eps,
    )
    grid, jsa = _build_inputs(cfg, params)
    W = build_dynamical_matrix(
        grid,
        params,
        continuum_scaling=cfg.continuum_scaling,
        material_sign=cfg.sign_convention,
    )
    theta_in = states.assemble_input_covariance(jsa, params.n_material)
    prop = scattering.propagate(theta_in, W, epsilon=eps)

    jsa_out = scattering.extract_output_jsa(prop.theta_out)
    jsi_out_raw = states.jsi_of(jsa_out, normalize=False)
    jsi_out = jsi_out_raw.normalized()
    spectrum = observables.schmidt(jsa_out, use_magnitude=cfg.entropy_variant == "magnitude")
    entropy = observables.von_neumann_entropy(spectrum)
    pur = observables.purity(prop.theta_out)

    stability = None
    if check_epsilon_stability:
        half = scattering.propagate(theta_in, W, epsilon=prop.epsilon_used / 2.0)
        denom = np.linalg.norm(prop.theta_out.matrix)
        stability = float(
            np.linalg.norm(half.theta_out.matrix - prop.theta_out.matrix) / denom
        )

    return RunOutputs(
        jsi_in=states.jsi_of(jsa),
        jsi_out=jsi_out,
        jsi_out_raw=jsi_out_raw,
        schmidt=spectrum,
        entropy=entropy,
        purity=pur,
        prop=prop,
        epsilon_stability=stability,
    )


def _metrics_payload(cfg: RunConfig, out: RunOutputs, seed=None):
    prop = out.prop
    lyap = prop.reports["lyapunov"]
    scat = prop.reports["scattering"]
    payload = {
        "schema_version": 1,
        "entropy_nats": out.entropy,
        "entropy_variant": cfg.entropy_variant,
        "schmidt_modes": int(out.schmidt.values.size),
        "purity": {"mu": out.purity.mu, "log_abs_det": out.purity.log_abs_det},
        "diagnostics": {
            "epsilon_used": prop.epsilon_used,
            "regularized": prop.regularized,
            "identity_gap": prop.identity_gap,
            "hermiticity_defect": prop.hermiticity_defect,
            "lyapunov_residual": lyap.residual_norm,
            "lyapunov_condition": lyap.condition_estimate,
            "scattering_residual": scat.residual_norm,
        },
        "config": dict(cfg.raw),
    }
    if out.epsilon_stability is not None:
        payload["diagnostics"]["epsilon_half_relative_change"] = out.epsilon_stability
    if seed is not None:
        payload["seed"] = seed
    return payload


def _write_run_artifacts(out_dir, cfg: RunConfig, out: RunOutputs, seed=None, heatmaps=True):
    os.makedirs(out_dir, exist_ok=True)
    save_jsi(out.jsi_in, os.path.join(out_dir, "input_jsi.csv"))
    save_jsi(out.jsi_out, os.path.join(out_dir, "output_jsi.csv"))
    save_jsi(out.jsi_out_raw, os.path.join(out_dir, "output_jsi_raw.csv"))
    with open(os.path.join(out_dir, "schmidt.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("index,coefficient\n")
        for i, r in enumerate(out.schmidt.values):
            fh.write(f"{i},{r:.17g}\n")
    _write_json(os.path.join(out_dir, "metrics.json"), _metrics_payload(cfg, out, seed=seed))
    if heatmaps:
        render_heatmap(out.jsi_in, os.path.join(out_dir, "input_jsi.pgm"))
        render_heatmap(out.jsi_out, os.path.join(out_dir, "output_jsi.pgm"))


def _resolve_out_dir(args, cfg):
    if getattr(args, "out", None):
        return args.out
    env = os.environ.get(OUT_DIR_ENV)
    if env:
        return env
    return cfg.output_dir


def _sweep_points(cfg: RunConfig):
    if cfg.sweep_parameter is None:
        raise ConfigError("config has no sweep.parameter; nothing to sweep")
    counts = cfg.sweep_material_counts or (len(cfg.material_freqs),)
    points = []
    for value in cfg.sweep_values:
        for m in counts:
            points.append((value, m))
    return points


def _point_config(cfg: RunConfig, value, m_count):
    """Derive the per-point parameter set (material frequencies replicate the
    first configured one when the requested count exceeds the list)."""
    freqs = list(cfg.material_freqs)
    if m_count > len(freqs):
        if not freqs:
            raise ConfigError(
                "sweep.material_counts requires at least one system.material_freqs entry"
            )
        freqs = freqs + [freqs[0]] * (m_count - len(freqs))
    freqs = tuple(freqs[:m_count])
    overrides = {
        "sqrt_kappa": cfg.sqrt_kappa,
        "g": cfg.g,
        "epsilon": cfg.epsilon,
        "omega_c": cfg.omega_c,
    }
    overrides[cfg.sweep_parameter] = value
    return dataclasses.replace(
        cfg,
        material_freqs=freqs,
        sqrt_kappa=overrides["sqrt_kappa"],
        g=overrides["g"],
        epsilon=overrides["epsilon"],
        omega_c=overrides["omega_c"],
    )


def cmd_run(args):
    cfg = load_config(args.config)
    if args.epsilon is not None:
        cfg = dataclasses.replace(cfg, epsilon=args.epsilon)
    out_dir = _resolve_out_dir(args, cfg)
    outputs = execute_run(cfg)
    _write_run_artifacts(out_dir, cfg, outputs, seed=args.seed)
    print(f"run complete: entropy={outputs.entropy:.6f} nats, purity mu={outputs.purity.mu:.6g}")
    print(f"artifacts in {out_dir}")
    return 0


def cmd_sweep(args):
    cfg = load_config(args.config)
    if args.epsilon is not None:
        cfg = dataclasses.replace(cfg, epsilon=args.epsilon)
    out_dir = _resolve_out_dir(args, cfg)
    points = _sweep_points(cfg)
    os.makedirs(out_dir, exist_ok=True)

    def run_point(indexed):
        idx, (value, m_count) = indexed
        point_cfg = _point_config(cfg, value, m_count)
        outputs = execute_run(point_cfg, check_epsilon_stability=False)
        sub = os.path.join(
            out_dir, f"point_{idx:03d}_{cfg.sweep_parameter}_{value:g}_M{m_count}"
        )
        _write_run_artifacts(sub, point_cfg, outputs, heatmaps=False)
        return idx, value, m_count, outputs, sub

    workers = max(1, args.threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_point, enumerate(points)))
    else:
        results = [run_point(item) for item in enumerate(points)]

    # Coordinator writes the index and the entropy table once, in input order.
    rows = ["parameter,value,material_count,entropy_nats,purity_mu,purity_log_abs_det,"
            "lyapunov_residual,epsilon_used"]
    index = []
    for idx, value, m_count, outputs, sub in results:
        lyap = outputs.prop.reports["lyapunov"]
        rows.append(
            f"{cfg.sweep_parameter},{value:.17g},{m_count},{outputs.entropy:.17g},"
            f"{outputs.purity.mu:.17g},{outputs.purity.log_abs_det:.17g},"
            f"{lyap.residual_norm:.17g},{outputs.prop.epsilon_used:.17g}"
        )
        index.append(
            {"index": idx, "value": value, "material_count": m_count, "dir": os.path.basename(sub)}
        )
    with open(os.path.join(out_dir, "entropy.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")
    _write_json(os.path.join(out_dir, "sweep_index.json"), {"points": index})
    print(f"sweep complete: {len(points)} points, artifacts in {out_dir}")
    return 0


def cmd_validate(args):
    report = run_validation()
    for line in report.lines():
        print(line)
    n_fail = sum(1 for r in report.results if not r.passed)
    print(
        f"{len(report.results) - n_fail}/{len(report.results)} checks passed "
        f"in {report.elapsed:.1f} s"
    )
    return 0 if report.passed else 3


def cmd_convert(args):
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    signal_mev, idler_mev, values, units = parse_grid_text(
        text, complex_values=True, source=args.input
    )
    target = "nm" if units == "meV" else "meV"
    if np.all(values.imag == 0):
        cells = values.real
        fmt = states._format_float
    else:
        cells = values
        fmt = states._format_complex
    states._write_grid(args.output, signal_mev, idler_mev, cells, target, fmt)
    print(f"wrote {args.output} ({units} -> {target})")
    return 0


def _add_common_flags(parser, suppress=False):
    # The same flags are accepted before or after the subcommand; the
    # subparser copies use SUPPRESS defaults so they never clobber values
    # parsed at the top level.
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--out", default=default, help="output directory (overrides env and config)")
    parser.add_argument("--epsilon", type=float, default=default, help="regularization override (meV)")
    parser.add_argument("--seed", type=int, default=default, help="reserved; echoed into metrics")
    parser.add_argument(
        "--threads",
        type=int,
        default=argparse.SUPPRESS if suppress else 1,
        help="sweep worker threads",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pairspec",
        description="Photon-pair spectral propagation through cavity-material systems.",
    )
    _add_common_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    _add_common_flags(common, suppress=True)

    p_run = sub.add_parser("run", help="single propagation run", parents=[common])
    p_run.add_argument("config")
    p_run.set_defaults(func=cmd_run, stage="run")

    p_sweep = sub.add_parser("sweep", help="parameter sweep", parents=[common])
    p_sweep.add_argument("config")
    p_sweep.set_defaults(func=cmd_sweep, stage="sweep")

    p_val = sub.add_parser("validate", help="oracle and invariant suite", parents=[common])
    p_val.set_defaults(func=cmd_validate, stage="validate")

    p_conv = sub.add_parser(
        "convert", help="nm <-> meV axis conversion of a grid file", parents=[common]
    )
    p_conv.add_argument("input")
    p_conv.add_argument("output")
    p_conv.set_defaults(func=cmd_convert, stage="convert")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _SOLVER_ERRORS as exc:
        print(f"solver failure during {args.stage}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (PairspecError, OSError) as exc:
        print(f"config/input error during {args.stage}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
