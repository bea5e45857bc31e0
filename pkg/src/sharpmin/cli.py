"""Command-line front end: full pipeline from expression to verdict report.

Pipeline: parse -> tangency polynomial -> trace branches over the radius
ladder -> fit growth exponents -> classify -> cross-check against the
brute-force circle minima -> probe the growth/subregularity/gradient
inequalities -> write a deterministic report, CSV rows, and (optionally)
figures.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, report as report_mod
from .branchtrack import (
    AmbiguousMatchError,
    NonStabilizedError,
    Trace,
    build_ladder,
    fit_trace,
    trace,
)
from .classify import ISOLATED_LOCAL_MIN, INCONCLUSIVE, classify
from .expansion import CONSTANT_TOL, SignFlipError
from .oracle import fit_psi, psi_samples
from .polynomial import ParseError, parse, parse_rational
from .tangency import FunctionModel, abs_model, smooth_model, tangency_polynomial
from .verify import BL, GROWTH, LOJA, SUBREG, counterexample_probe, probe

VARIABLES = ("x", "y")
PSI_CONSISTENCY_RTOL = 1e-9
ORACLE_A_RTOL = 1e-6


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    function_text: str
    model_kind: str  # "smooth" | "abs"
    center: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    t0: Fraction = Fraction(1, 8)
    rho: Fraction = Fraction(1, 2)
    rungs: int = 24
    qmax: int = 12
    grid: int = 4096
    per_rung: int = 512
    verify_alphas: tuple[float, ...] = ()
    counterexample: bool = False
    report_path: str | None = None
    csv_path: str | None = None
    plots_dir: str | None = None
    seed: int = 0


@dataclass
class AnalysisReport:
    data: dict
    exit_code: int
    trace: Trace | None = field(default=None, repr=False)

    def text(self) -> str:
        return report_mod.dumps(self.data)


def _config_echo(config: RunConfig) -> dict:
    return {
        "function": config.function_text,
        "model_kind": config.model_kind,
        "center": [str(config.center[0]), str(config.center[1])],
        "t0": str(config.t0),
        "rho": str(config.rho),
        "rungs": config.rungs,
        "qmax": config.qmax,
        "grid": config.grid,
        "per_rung": config.per_rung,
        "verify_alphas": [float(a) for a in config.verify_alphas],
        "counterexample": config.counterexample,
        "report_path": config.report_path,
        "csv_path": config.csv_path,
        "plots_dir": config.plots_dir,
        "seed": config.seed,
    }


def _finite_or_none(x) -> float | None:
    x = float(x)
    return x if math.isfinite(x) else None


def _probe_payload(res) -> dict:
    return {
        "name": res.name,
        "alpha": None if res.alpha is None else float(res.alpha),
        "inf_ratio": _finite_or_none(res.inf_ratio),
        "trend_slope": _finite_or_none(res.trend_slope),
        "excluded": res.excluded,
        "per_rung": [[t, v] for t, v in res.per_rung],
        "witnesses": [[list(pt), r] for pt, r in res.samples],
    }


def build_model(config: RunConfig) -> FunctionModel:
    body = parse(config.function_text, VARIABLES)
    if config.model_kind == "smooth":
        return smooth_model(body, config.center)
    if config.model_kind == "abs":
        return abs_model(body, config.center)
    raise UsageError(f"unknown model kind {config.model_kind!r}")


def run(config: RunConfig) -> AnalysisReport:
    """Execute the full pipeline; never raises for math-level failures."""
    t_start = time.perf_counter()
    warnings: list[str] = []
    model = build_model(config)
    tp = tangency_polynomial(model)
    ladder = build_ladder(config.t0, config.rho, config.rungs)

    data: dict = {
        "schema_version": report_mod.SCHEMA_VERSION,
        "config": _config_echo(config),
        "tangency_polynomial": str(tp.g),
        "degenerate": tp.g.is_zero,
        "f_center": float(model.value_at_center),
    }

    tr = None
    try:
        try:
            tr = trace(model, tp, ladder)
        except NonStabilizedError as exc:
            warnings.append(f"trace failed ({exc}); retrying with t0/8")
            ladder = build_ladder(config.t0 / 8, config.rho, config.rungs)
            tr = trace(model, tp, ladder)
        fit_trace(tr, model, config.qmax)
    except (NonStabilizedError, AmbiguousMatchError, SignFlipError) as exc:
        warnings.append(f"analysis aborted: {exc}")
        data.update({
            "stabilized": None,
            "branches": [],
            "classification": {
                "verdict": INCONCLUSIVE, "alpha_star": None, "a_star": None,
                "lojasiewicz_exponent": None, "subregularity_order": None,
                "certificate": None,
            },
            "trust_radius": None,
            "oracle": None,
            "psi_consistency": None,
            "probes": [],
            "counterexample": None,
            "warnings": warnings,
            "work": {"slices": 0, "tangency_points": 0, "probe_samples": 0},
        })
        return AnalysisReport(data=data, exit_code=2)

    classification = classify(tr.branches, tr.trust_radius)
    warnings.extend(classification.warnings)

    window_radii = [float(t) for t in tr.window_radii]
    data["stabilized"] = {
        "window_start": tr.window_start,
        "window_rungs": len(window_radii),
    }
    data["trust_radius"] = tr.trust_radius
    data["branches"] = [{
        "id": b.id,
        "theta_start": b.theta_start,
        "constant": b.constant,
        "on_zero_set": b.on_zero_set,
        "alpha": None if b.fit.alpha is None else str(b.fit.alpha),
        "alpha_raw": b.fit.alpha_raw,
        "a": b.fit.a,
        "a_sign": b.fit.a_sign,
        "residual": b.fit.residual,
        "t": window_radii,
        "theta": [p.theta for p in b.points],
        "f_value": [p.f_value for p in b.points],
        "delta": list(b.deltas),
    } for b in tr.branches]

    # brute-force cross-check of the minima on each stabilized circle
    window_ladder = build_ladder(tr.window_radii[0], ladder.rho,
                                 len(window_radii))
    samples = psi_samples(model, window_ladder, config.grid)
    flat_tol = CONSTANT_TOL * (1.0 + abs(float(model.value_at_center)))
    max_gap = 0.0
    for j, s in enumerate(samples):
        branch_min = min(b.deltas[j] for b in tr.branches)
        diff = abs(branch_min - s.delta)
        if diff <= flat_tol:
            continue
        max_gap = max(max_gap, diff / max(abs(branch_min), abs(s.delta)))
    psi_ok = max_gap <= PSI_CONSISTENCY_RTOL
    if not psi_ok:
        warnings.append(
            f"branch minima disagree with the scanned circle minima "
            f"(relative gap {max_gap:.3e})")
    data["psi_consistency"] = {"max_rel_gap": max_gap, "ok": psi_ok}

    oracle_fit = None
    try:
        oracle_fit = fit_psi(model, window_ladder, config.grid, config.qmax)
    except (SignFlipError, ValueError) as exc:
        warnings.append(f"oracle growth fit failed: {exc}")
    data["oracle"] = None if oracle_fit is None else {
        "alpha": None if oracle_fit.alpha is None else str(oracle_fit.alpha),
        "alpha_raw": oracle_fit.alpha_raw,
        "a": oracle_fit.a,
        "constant": oracle_fit.constant,
        "samples": [[s.t, s.psi, s.argmin_theta, s.delta] for s in samples],
    }

    classification_payload = {
        "verdict": classification.verdict,
        "alpha_star": None if classification.alpha_star is None
        else str(classification.alpha_star),
        "a_star": classification.a_star,
        "lojasiewicz_exponent": classification.lojasiewicz_exponent,
        "subregularity_order": None if classification.subregularity_order is None
        else str(classification.subregularity_order),
        "certificate": None,
    }

    if classification.verdict == ISOLATED_LOCAL_MIN and oracle_fit is not None:
        if oracle_fit.alpha != classification.alpha_star:
            warnings.append(
                f"oracle exponent {oracle_fit.alpha} disagrees with "
                f"alpha_star {classification.alpha_star}")
        elif oracle_fit.a is not None and classification.a_star and abs(
                oracle_fit.a - classification.a_star) > ORACLE_A_RTOL * abs(
                classification.a_star):
            warnings.append(
                f"oracle coefficient {oracle_fit.a!r} disagrees with "
                f"a_star {classification.a_star!r}")

    # tangency angles per ladder rung, where the probes should look
    extra_angles = {tr.window_start + j: [p.theta for p in sl]
                    for j, sl in enumerate(tr.slices)}

    probes = []
    probe_samples = 0
    if classification.verdict == ISOLATED_LOCAL_MIN:
        alpha_star = float(classification.alpha_star)
        growth_star = probe(model, GROWTH, alpha_star, ladder,
                            config.per_rung, extra_angles)
        probes.append(growth_star)
        probes.append(probe(model, SUBREG, alpha_star, ladder,
                            config.per_rung, extra_angles))
        probes.append(probe(model, LOJA, alpha_star, ladder,
                            config.per_rung, extra_angles))
        probes.append(probe(model, BL, None, ladder, config.per_rung,
                            extra_angles))
        c, eps = classification.certificate
        verified = growth_star.inf_ratio >= c
        if not verified:
            warnings.append(
                f"growth certificate c={c!r} not confirmed by sampling "
                f"(infimum {growth_star.inf_ratio!r}); marked unverified")
        classification_payload["certificate"] = {
            "c": c, "epsilon": eps, "verified": verified,
        }
    for alpha in config.verify_alphas:
        probes.append(probe(model, GROWTH, float(alpha), ladder,
                            config.per_rung, extra_angles))
    probe_samples = sum(len(p.per_rung) for p in probes) * config.per_rung
    data["classification"] = classification_payload
    data["probes"] = [_probe_payload(p) for p in probes]

    data["counterexample"] = None
    if config.counterexample:
        if model.kind != "abs":
            raise UsageError("--counterexample requires an abs model (--abs)")
        try:
            ce = counterexample_probe(model.body, ladder, config.center,
                                      config.per_rung)
            data["counterexample"] = {
                "ratio": _probe_payload(ce.ratio),
                "rows": [[t, m, d, r] for t, m, d, r in ce.rows],
                "quadratic_growth_inf": _finite_or_none(
                    ce.quadratic_growth_inf),
                "quadratic_growth_excluded": ce.quadratic_growth_excluded,
            }
        except ValueError as exc:
            warnings.append(f"counterexample probe failed: {exc}")

    data["warnings"] = warnings
    data["work"] = {
        "slices": len(tr.slices),
        "tangency_points": sum(len(s) for s in tr.slices),
        "probe_samples": probe_samples,
    }

    print(f"analysis wall time: {time.perf_counter() - t_start:.2f}s",
          file=sys.stderr)
    exit_code = 2 if classification.verdict == INCONCLUSIVE else 0
    return AnalysisReport(data=data, exit_code=exit_code, trace=tr)


def emit_csv(analysis: AnalysisReport, path: str) -> None:
    """One row per (branch, rung) plus a psi pseudo-branch, plot-ready."""
    ff = report_mod.format_float
    lines = ["branch_id,t,theta,f_value,delta"]
    for b in analysis.data.get("branches", []):
        for t, theta, f_value, delta in zip(b["t"], b["theta"],
                                            b["f_value"], b["delta"]):
            lines.append(f"{b['id']},{ff(t)},{ff(theta)},{ff(f_value)},{ff(delta)}")
    oracle = analysis.data.get("oracle")
    if oracle:
        for t, psi_val, theta, delta in oracle["samples"]:
            lines.append(f"psi,{ff(t)},{ff(theta)},{ff(psi_val)},{ff(delta)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _summary_lines(data: dict) -> list[str]:
    cls = data["classification"]
    out = [f"tangency polynomial: {data['tangency_polynomial']}",
           f"verdict: {cls['verdict']}"]
    if cls["alpha_star"] is not None:
        out.append(f"sharp order alpha* = {cls['alpha_star']}, "
                   f"a* = {cls['a_star']:.9g}")
        out.append(f"lojasiewicz exponent = {cls['lojasiewicz_exponent']:.9g}, "
                   f"subregularity order = {cls['subregularity_order']}")
        cert = cls["certificate"]
        if cert:
            status = "verified" if cert["verified"] else "NOT confirmed"
            out.append(f"growth certificate: f >= f(center) + {cert['c']:.9g}"
                       f"*r^{cls['alpha_star']} down to r = {cert['epsilon']:.3g}"
                       f" ({status})")
    branches = data.get("branches", [])
    if branches:
        out.append(f"branches ({len(branches)}):")
        for b in branches:
            label = "constant" if b["constant"] else (
                f"alpha = {b['alpha'] or b['alpha_raw']}, a = "
                f"{b['a']:.9g}, sign {b['a_sign']:+d}")
            zero = ", on zero set" if b["on_zero_set"] else ""
            out.append(f"  branch {b['id']} at theta {b['theta_start']:.6f}: "
                       f"{label}{zero}")
    for w in data.get("warnings", []):
        out.append(f"warning: {w}")
    return out


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sharpmin",
        description="Decide whether a point is a local minimizer of a "
                    "bivariate polynomial (or |polynomial|) via its tangency "
                    "variety, and compute the sharp growth order.")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--fn", metavar="EXPR",
                       help="polynomial f(x, y), e.g. '3*x^2 + 2*y^3'")
    group.add_argument("--abs", dest="abs_fn", metavar="EXPR",
                       help="inner polynomial p(x, y) for f = |p|")
    parser.add_argument("--at", default="0,0", metavar="X,Y",
                        help="center point; rational literals accepted "
                             "(default 0,0)")
    parser.add_argument("--t0", default="1/8", help="largest radius (rational)")
    parser.add_argument("--rho", default="1/2",
                        help="ladder ratio in (0,1) (rational)")
    parser.add_argument("--rungs", type=int, default=24)
    parser.add_argument("--qmax", type=int, default=12,
                        help="max denominator for exponent snapping")
    parser.add_argument("--grid", type=int, default=4096,
                        help="angular grid for the brute-force scan")
    parser.add_argument("--per-rung", type=int, default=512,
                        help="samples per circle for inequality probes")
    parser.add_argument("--alpha", action="append", type=float, default=[],
                        help="extra growth order to probe (repeatable)")
    parser.add_argument("--counterexample", action="store_true",
                        help="probe m_f/dist along (0,t) (abs models only)")
    parser.add_argument("--report", metavar="PATH",
                        help="write the full report (deterministic JSON)")
    parser.add_argument("--csv", metavar="PATH",
                        help="write branch/psi rows as CSV")
    parser.add_argument("--plots", metavar="DIR",
                        help="render figures next to the delimited output")
    parser.add_argument("--seed", type=int, default=0,
                        help="echoed into the report (the pipeline itself is "
                             "deterministic)")
    parser.add_argument("--version", action="version", version=__version__)
    return parser


def config_from_args(args) -> RunConfig:
    center_parts = args.at.split(",")
    if len(center_parts) != 2:
        raise UsageError("--at expects X,Y")
    center = (parse_rational(center_parts[0]), parse_rational(center_parts[1]))
    if args.counterexample and args.abs_fn is None:
        raise UsageError("--counterexample is only meaningful with --abs")
    return RunConfig(
        function_text=args.fn if args.fn is not None else args.abs_fn,
        model_kind="smooth" if args.fn is not None else "abs",
        center=center,
        t0=parse_rational(args.t0),
        rho=parse_rational(args.rho),
        rungs=args.rungs,
        qmax=args.qmax,
        grid=args.grid,
        per_rung=args.per_rung,
        verify_alphas=tuple(args.alpha),
        counterexample=args.counterexample,
        report_path=args.report,
        csv_path=args.csv,
        plots_dir=args.plots,
        seed=args.seed,
    )


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        analysis = run(config)
    except (UsageError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for line in _summary_lines(analysis.data):
        print(line)
    if config.report_path:
        with open(config.report_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(analysis.text())
    if config.csv_path:
        emit_csv(analysis, config.csv_path)
    if config.plots_dir:
        from .plots import render_figures
        for path in render_figures(analysis.data, config.plots_dir):
            print(f"wrote {path}", file=sys.stderr)
    return analysis.exit_code


if __name__ == "__main__":
    sys.exit(main())
