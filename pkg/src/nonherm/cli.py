"""Command-line interface.

    nonherm analyze --config model.json
    nonherm verify [--full] --config model.json [--out report.json] [--tol 1e-9]
    nonherm evolve --config model.json --out trace.csv
    nonherm scan --config sweep.json --out scan.csv [--jobs 4]

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dynamics
from .antilinear import compose_aa, compose_al
from .biortho import BiorthogonalSystem, build_system, invariant_report, system_from_basis
from .config import RunConfig, load_config
from .errors import ConfigError, DegenerateParamError, DegenerateSpectrumError, NonHermError, NumericError
from .intertwine import build_v_ops, full_report, no_selfadjoint_similarity_demo, real_spectrum_report
from .numerics import Tolerances, format_complex, frobenius_residual, general_eig, hermitian_eig
from .report import Report
from .two_level import (
    DasGreenwoodParams,
    Regime,
    TwoLevelParams,
    build_h,
    classify_regime,
    closed_form_hphiphi,
    closed_form_metrics,
    closed_form_system,
    das_greenwood_h,
    map_das_greenwood,
    pipeline_system,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_COEFFS = ((1.0, 1.0), (1.0, 0.0))


@dataclass
class Model:
    h: np.ndarray
    sys: BiorthogonalSystem
    params: TwoLevelParams | None = None
    dg: DasGreenwoodParams | None = None


def _two_level(params: dict) -> TwoLevelParams:
    return TwoLevelParams(params["alpha"], params["beta"], params["e1"], params["e2"])


def _das_greenwood(params: dict) -> DasGreenwoodParams:
    kwargs = {k: params[k] for k in ("r", "s", "t", "theta")}
    if "phi_phase" in params:
        kwargs["phi_phase"] = params["phi_phase"]
    return DasGreenwoodParams(**kwargs)


def resolve_model(cfg: RunConfig, params: dict | None = None) -> Model:
    """Hamiltonian and biorthogonal system for the configured input.

    Two-level inputs use the closed-form eigenvector normalization so that
    evolution coefficients mean the same thing as in the closed forms.
    """
    params = cfg.params if params is None else params
    tol = cfg.tolerances
    if cfg.model == "matrix":
        h = cfg.matrix
        sys_ = build_system(h, tol)
        model = Model(h, sys_)
    elif cfg.model == "two_level":
        p = _two_level(params)
        model = Model(build_h(p), closed_form_system(p, tol), params=p)
    else:
        dg = _das_greenwood(params)
        h = das_greenwood_h(dg)
        if classify_regime(dg, tol) is Regime.BROKEN and abs(dg.phi_phase + math.pi / 2) <= 1e-12:
            p = map_das_greenwood(dg, params.get("branch", "+"), tol)
            model = Model(h, closed_form_system(p, tol), params=p, dg=dg)
        else:
            model = Model(h, build_system(h, tol), dg=dg)
    if cfg.psi_override is not None:
        model.sys = system_from_basis(model.sys.eigenvalues, model.sys.phi, cfg.psi_override, tol)
    return model


# ---------------------------------------------------------------------------
# classification helpers


def spectrum_label(values: np.ndarray, tol: Tolerances) -> str:
    scale = max(1.0, float(np.abs(values).max()))
    nonreal = [v for v in values if abs(v.imag) > tol.tol_gap * scale]
    if not nonreal:
        return "Real spectrum"
    paired = all(np.min(np.abs(values - v.conjugate())) <= 1e-8 * scale for v in nonreal)
    return "Complex-conjugate pair" if paired else "Mixed"


def regime_label(cfg: RunConfig, values: np.ndarray | None) -> str:
    if cfg.model == "das_greenwood":
        regime = classify_regime(_das_greenwood(cfg.params), cfg.tolerances)
        return {
            Regime.UNBROKEN: "Unbroken",
            Regime.BROKEN: "Broken: complex-conjugate pair",
            Regime.EXCEPTIONAL: "Exceptional point",
        }[regime]
    label = spectrum_label(values, cfg.tolerances)
    return {
        "Real spectrum": "Unbroken",
        "Complex-conjugate pair": "Broken: complex-conjugate pair",
        "Mixed": "Mixed",
    }[label]


# ---------------------------------------------------------------------------
# subcommands


def _display(values: np.ndarray) -> list[str]:
    # round-off parts far below the spectral scale are shown as zero
    floor = 1e-14 * max(1.0, float(np.abs(values).max()))
    shown = [complex(0.0 if abs(v.real) < floor else v.real, 0.0 if abs(v.imag) < floor else v.imag) for v in values]
    return [format_complex(v) for v in shown]


def cmd_analyze(cfg: RunConfig) -> tuple[list[str], dict]:
    lines = [f"model: {cfg.model}"]
    result = {"model": cfg.model}
    if cfg.model == "das_greenwood":
        regime = regime_label(cfg, None)
        disc = _das_greenwood(cfg.params).discriminant
        lines += [f"discriminant: {disc:.17g}", f"regime: {regime}"]
        result.update(discriminant=disc, regime=regime)

    model = resolve_model(cfg)
    tol = cfg.tolerances
    values = model.sys.eigenvalues
    eig = general_eig(model.h, tol)
    label = spectrum_label(values, tol)
    if label == "Real spectrum" and frobenius_residual(model.sys.s_phi, np.eye(model.sys.dim)) <= 1e-10:
        label += "; S_phi = I"
    lines.append("eigenvalues: " + ", ".join(_display(values)))
    lines.append(f"spectrum: {label}")
    if cfg.model != "das_greenwood":
        regime = regime_label(cfg, values)
        lines.append(f"regime: {regime}")
        result["regime"] = regime
    s_phi_spec = hermitian_eig(model.sys.s_phi, tol)[0]
    s_psi_spec = hermitian_eig(model.sys.s_psi, tol)[0]
    lines += [
        f"cond(phi): {eig.condition_estimate:.6g}",
        "S_phi spectrum: " + ", ".join(f"{x:.6g}" for x in s_phi_spec),
        "S_psi spectrum: " + ", ".join(f"{x:.6g}" for x in s_psi_spec),
    ]
    result.update(
        eigenvalues=[format_complex(v) for v in values],
        spectrum=label,
        condition_number=eig.condition_estimate,
        s_phi_spectrum=s_phi_spec.tolist(),
        s_psi_spectrum=s_psi_spec.tolist(),
    )
    return lines, result


def _dual_path_report(p: TwoLevelParams, threshold: float, tol: Tolerances) -> Report:
    rep = Report("two-level closed forms")
    closed = closed_form_system(p, tol)
    generic = pipeline_system(p, tol)
    s_phi, s_psi = closed_form_metrics(p)
    rep.add("closed-form phi = pipeline phi", frobenius_residual(closed.phi, generic.phi), threshold)
    rep.add("closed-form Psi = pipeline Psi", frobenius_residual(closed.psi, generic.psi), threshold)
    rep.add("closed-form S_phi = pipeline S_phi", frobenius_residual(s_phi, generic.s_phi), threshold)
    rep.add("closed-form S_psi = pipeline S_psi", frobenius_residual(s_psi, generic.s_psi), threshold)
    v_phi, _ = build_v_ops(generic, tol)
    rep.add("V_phi = conjugation", frobenius_residual(v_phi.m, np.eye(2)), threshold)
    hpp = compose_aa(compose_al(v_phi, build_h(p)), v_phi)
    rep.add("closed-form H_phiphi = V H V", frobenius_residual(closed_form_hphiphi(p), hpp), threshold)
    return rep


def cmd_verify(cfg: RunConfig, full: bool = False, threshold: float = 1e-9) -> Report:
    tol = cfg.tolerances
    model = resolve_model(cfg)
    rep = Report("verify --full" if full else "verify")
    rep.extend(invariant_report(model.sys, model.h, threshold))
    if not full:
        return rep

    try:
        rep.extend(full_report(model.h, model.sys, threshold, tol))
    except NumericError as exc:
        rep.add("derived operators construction", float("inf"), threshold, note=str(exc))

    values = model.sys.eigenvalues
    scale = max(1.0, float(np.abs(values).max()))
    if np.abs(values.imag).max() <= tol.tol_gap * scale:
        rep.extend(real_spectrum_report(model.h, model.sys, min(threshold, 1e-10)))
    else:
        rng = np.random.default_rng(0)
        n = model.sys.dim
        xs = [model.sys.s_psi_sqrt] + [
            np.eye(n) + 0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) for _ in range(5)
        ]
        witness = no_selfadjoint_similarity_demo(model.h, xs, tol)
        rep.add("spectrum(X H X^-1) = spectrum(H)", witness.max_mismatch, 1e-8)

    if model.params is not None and cfg.psi_override is None:
        rep.extend(_dual_path_report(model.params, min(threshold, 1e-10), tol))
    if model.dg is not None and model.params is not None:
        rep.add("build_h(map(h)) = h", frobenius_residual(build_h(model.params), model.h), min(threshold, 1e-10))
    return rep


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _behavior(model: Model, spec: dynamics.EvolutionSpec) -> dynamics.Asymptote:
    if model.params is not None:
        return dynamics.asymptote_and_period(model.params, spec)
    return dynamics.spectral_asymptote(model.sys, spec.c, spec.d)


def cmd_evolve(cfg: RunConfig) -> tuple[str, str]:
    """Return the CSV text and a one-line behaviour summary."""
    model = resolve_model(cfg)
    spec = cfg.evolution
    tr = dynamics.trace(model.h, model.sys, spec)
    n = model.sys.dim
    header = ["t"] + [f"re_phi_{k}" for k in range(n)] + [f"im_phi_{k}" for k in range(n)] + ["norm_sq", "prob"]
    rows = [",".join(header)]
    for i, t in enumerate(tr.times):
        state = tr.states[i]
        fields = [t, *state.real, *state.imag, tr.norms_sq[i], tr.probs[i]]
        rows.append(",".join(_fmt(x) for x in fields))
    summary = f"behavior: {_behavior(model, spec).describe()}; final prob: {_fmt(tr.probs[-1])}"
    return "\n".join(rows) + "\n", summary


def _scan_point(cfg: RunConfig, params: dict, spec: dynamics.EvolutionSpec) -> dict:
    row = {}
    try:
        if cfg.model == "das_greenwood":
            dg = _das_greenwood(params)
            row["discriminant"] = _fmt(dg.discriminant)
            regime = classify_regime(dg, cfg.tolerances)
            row["regime"] = regime.value
            if regime is Regime.EXCEPTIONAL:
                row["status"] = "degenerate: exceptional point"
                return row
            values = general_eig(das_greenwood_h(dg), cfg.tolerances).eigenvalues
            if regime is Regime.BROKEN:
                behavior = dynamics.asymptote_and_period(map_das_greenwood(dg, params["branch"]), spec)
            else:
                behavior = dynamics.Asymptote(dynamics.Behavior.PERIODIC, 2 * math.pi / abs(values[0] - values[1]))
        else:
            p = _two_level(params)
            values = np.array([p.e1, p.e2])
            row["regime"] = regime_label(cfg, values).split(":")[0]
            general_eig(build_h(p), cfg.tolerances)
            behavior = dynamics.asymptote_and_period(p, spec)
    except (DegenerateParamError, DegenerateSpectrumError) as exc:
        row["status"] = f"degenerate: {exc}"
        return row
    except NumericError as exc:
        row["status"] = f"error: {exc}"
        return row
    row["im_e0"] = _fmt(values[0].imag)
    row["im_e1"] = _fmt(values[1].imag)
    row["behavior"] = behavior.behavior.value
    row["value"] = "" if behavior.value is None else _fmt(behavior.value)
    row["status"] = "ok"
    return row


def cmd_scan(cfg: RunConfig, jobs: int = 1) -> str:
    spec = cfg.evolution or dynamics.EvolutionSpec(*DEFAULT_COEFFS)
    names = list(cfg.scan)
    grid = list(itertools.product(*(cfg.scan[k] for k in names)))
    if cfg.model == "das_greenwood":
        param_cols = ["r", "s", "t", "theta"]
        extra = ["discriminant"]
    else:
        param_cols = ["alpha", "beta", "e1", "e2"]
        extra = []
    columns = ["index", *param_cols, *extra, "regime", "im_e0", "im_e1", "behavior", "value", "status"]

    points = []
    for values in grid:
        params = dict(cfg.params)
        params.update(dict(zip(names, (float(v) for v in values))))
        points.append(params)

    def run(params):
        return _scan_point(cfg, params, spec)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, points))
    else:
        results = [run(p) for p in points]

    lines = [",".join(columns)]
    for i, (params, row) in enumerate(zip(points, results)):
        cells = [str(i)]
        for col in param_cols:
            v = params.get(col)
            cells.append(format_complex(v) if isinstance(v, complex) else _fmt(v))
        for col in columns[1 + len(param_cols):]:
            cells.append(row.get(col, ""))
        lines.append(",".join(f'"{c}"' if "," in c else c for c in cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonherm", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "verify", "evolve", "scan"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output path (report JSON or CSV)")
        p.add_argument("--tol", type=float, help="residual threshold for verification rows")
        if name == "verify":
            p.add_argument("--full", action="store_true", help="also run every intertwining check")
        if name == "scan":
            p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    return parser


def _write(path: str | None, text: str, stream=None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        (stream or sys.stdout).write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config, mode=args.command)
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("must be positive", field="--tol")
        if getattr(args, "jobs", 1) < 1:
            raise ConfigError("must be at least 1", field="--jobs")
        out = args.out or cfg.output

        if args.command == "analyze":
            lines, result = cmd_analyze(cfg)
            print("\n".join(lines))
            if out:
                Path(out).write_text(json.dumps(result, indent=2) + "\n")
            return EXIT_OK

        if args.command == "verify":
            threshold = args.tol if args.tol is not None else 1e-9
            rep = cmd_verify(cfg, full=args.full, threshold=threshold)
            print(rep.table())
            print("all checks passed" if rep.ok else f"{len(rep.failures())} check(s) failed")
            if out:
                Path(out).write_text(json.dumps(rep.to_dict(), indent=2) + "\n")
            return EXIT_OK if rep.ok else EXIT_FAIL

        if args.command == "evolve":
            csv_text, summary = cmd_evolve(cfg)
            _write(out, csv_text)
            print(summary, file=sys.stderr if not out else sys.stdout)
            return EXIT_OK

        csv_text = cmd_scan(cfg, jobs=args.jobs)
        _write(out, csv_text)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonHermError as exc:
        print(f"numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
