"""Command-line front end: reproducible experiments and verification.

Subcommands
-----------
``msd``
    Monte Carlo vs analytic mean-square separation for one step; CSV
    columns ``protocol,p,r,l,analytic,mc_mean,mc_stderr,n_samples,z_score``.
    Exit 0 when every ``|z| <= 3``, else 1.
``simulate``
    Multi-step ensemble; CSV columns ``step,mean_r2,meeting_fraction``.
``curve``
    Traced solution curve of the curvature equation; CSV columns
    ``lambda,rho,residual,branch_id,l_over_r,R_over_r`` where ``residual``
    is the root's residual re-evaluated on a grid twice as fine as the
    one it was solved on.  Exit 1 if any root fails certification.
``threshold``
    JSON report with endpoints, per-branch ratio bounds and the
    comparison against the reference value 0.64.
``verify``
    Named self-checks spanning all layers; exit 0 only if all pass.

Exit codes: 0 success, 1 check or certification failure, 2 usage or
configuration error.  A flat ``key=value`` config file can seed any
option; explicit command-line flags win.  The default seed is 0, so the
default run of every subcommand is reproducible; outputs are pure
functions of the configuration and are byte-identical across reruns and
worker counts.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import geometry, solver, walk
from .correlations import (
    PlanarDirection,
    SignPair,
    WernerParameter,
    outcome_probability,
)
from .geometry import GeometryKind
from .solver import CurvatureProblem, QuadratureSpec
from .walk import Protocol, ProtocolSpec, WalkState

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

_PROTOCOLS = {p.value: p for p in Protocol}
_GEOMETRIES = {g.value: g for g in GeometryKind}

#: Default scaled-step grids for curve tracing: from lambda_min up to
#: this fraction of the axis crossing.
_GRID_TOP_FRACTION = 0.98
_GRID_LAM_MIN = {
    GeometryKind.SPHERICAL: 0.02,
    GeometryKind.HYPERBOLIC: 0.05,
}


@dataclasses.dataclass
class RunConfig:
    """All knobs for one CLI invocation; unset fields take these defaults."""

    seed: int = 0
    protocol: str | None = None
    p: float = 1.0
    r: float = 1.0
    l: float = 0.5
    samples: int = 1_000_000
    steps: int = 100
    walkers: int = 1000
    epsilon: float | None = None
    geometry: str = "spherical"
    w: float | None = None
    quad_nodes: int = 128
    lambda_min: float | None = None
    lambda_max: float | None = None
    lambda_steps: int = 32
    workers: int = 1
    out: str | None = None

    @property
    def meeting_radius(self) -> float:
        # Default detection radius: a tenth of the step length.
        return 0.1 * self.l if self.epsilon is None else self.epsilon

    def geometry_kind(self) -> GeometryKind:
        try:
            return _GEOMETRIES[self.geometry]
        except KeyError:
            raise ValueError(f"unknown geometry: {self.geometry!r}") from None

    def protocol_spec(self, name: str) -> ProtocolSpec:
        try:
            kind = _PROTOCOLS[name]
        except KeyError:
            raise ValueError(f"unknown protocol: {name!r}") from None
        return ProtocolSpec(kind, self.p)

    def rhs_weight(self, kind: GeometryKind) -> float:
        """Explicit --w wins; otherwise pair the geometry's natural protocol."""
        if self.w is not None:
            return self.w
        proto = Protocol.PLUS if kind is GeometryKind.SPHERICAL else Protocol.MINUS
        return walk.weight(proto, self.p)

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(self.quad_nodes)


_FIELD_PARSERS = {
    "seed": int,
    "protocol": str,
    "p": float,
    "r": float,
    "l": float,
    "samples": int,
    "steps": int,
    "walkers": int,
    "epsilon": float,
    "geometry": str,
    "w": float,
    "quad_nodes": int,
    "lambda_min": float,
    "lambda_max": float,
    "lambda_steps": int,
    "workers": int,
    "out": str,
}


def _load_config_file(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            entries[key.strip()] = value.strip()
    return entries


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, raw in _load_config_file(args.config).items():
            if key not in _FIELD_PARSERS:
                raise ValueError(f"unknown config key: {key!r}")
            setattr(cfg, key, _FIELD_PARSERS[key](raw))
    for key in _FIELD_PARSERS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def _write_text(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# subcommands


def cmd_msd(cfg: RunConfig) -> int:
    names = [cfg.protocol] if cfg.protocol else ["plus", "minus", "classical"]
    rng = np.random.default_rng(cfg.seed)
    rows = []
    worst = 0.0
    for name in names:
        proto = cfg.protocol_spec(name)
        analytic = walk.expected_sq_separation(cfg.r, cfg.l, proto)
        mean, stderr = walk.mc_sq_separation(cfg.r, cfg.l, proto, cfg.samples, rng)
        z = (mean - analytic) / stderr
        worst = max(worst, abs(z))
        rows.append(
            [
                name,
                _fmt(proto.effective_p),
                _fmt(cfg.r),
                _fmt(cfg.l),
                _fmt(analytic),
                _fmt(mean),
                _fmt(stderr),
                str(cfg.samples),
                _fmt(z),
            ]
        )
    header = [
        "protocol",
        "p",
        "r",
        "l",
        "analytic",
        "mc_mean",
        "mc_stderr",
        "n_samples",
        "z_score",
    ]
    _write_text(cfg, _csv(header, rows))
    return EXIT_OK if worst <= 3.0 else EXIT_CHECK_FAILED


def cmd_simulate(cfg: RunConfig) -> int:
    proto = cfg.protocol_spec(cfg.protocol or "plus")
    initial = WalkState((0.0, 0.0), (cfg.r, 0.0), cfg.l)
    result = walk.run_ensemble(
        initial,
        proto,
        cfg.steps,
        cfg.walkers,
        cfg.meeting_radius,
        seed=cfg.seed,
        n_workers=cfg.workers,
    )
    rows = [
        [str(t), _fmt(result.mean_r2[t]), _fmt(result.meeting_fraction[t])]
        for t in range(cfg.steps + 1)
    ]
    _write_text(cfg, _csv(["step", "mean_r2", "meeting_fraction"], rows))
    return EXIT_OK


def _curve_grid(cfg: RunConfig, problem: CurvatureProblem, lam_star: float | None):
    lam_min = cfg.lambda_min
    lam_max = cfg.lambda_max
    if lam_min is None:
        lam_min = _GRID_LAM_MIN[problem.geometry]
    if lam_max is None:
        if lam_star is not None:
            lam_max = _GRID_TOP_FRACTION * lam_star
        else:
            lam_max = solver._LAMBDA_SCAN_MAX[problem.geometry] / 2.0
    if not lam_max > lam_min:
        raise ValueError("lambda grid is empty: need lambda_max > lambda_min")
    if cfg.lambda_steps < 2:
        raise ValueError("lambda_steps must be at least 2")
    return np.linspace(lam_min, lam_max, cfg.lambda_steps)


def cmd_curve(cfg: RunConfig) -> int:
    kind = cfg.geometry_kind()
    problem = CurvatureProblem(kind, cfg.rhs_weight(kind))
    quad = cfg.quadrature()
    axis = solver.certified_axis_crossing(problem, quad)
    grid = _curve_grid(cfg, problem, axis[0] if axis else None)
    traced = solver.trace_curve(problem, grid, quad)
    cert = solver.certify_curve(problem, traced, quad)

    points = list(cert.curve.points)
    residuals = list(cert.certified)

    # The curve meets the rho = 0 axis where F(0, lam) = w lam^2; append
    # that endpoint (within the grid's reach) so the file records it.
    if axis is not None and grid[0] <= axis[0]:
        lam_star, axis_cert, _ = axis
        branch_id = 0
        if points:
            last = min(points, key=lambda pt: (pt.rho, -pt.lam))
            branch_id = last.branch_id
        points.append(
            solver.CurvePoint(
                lam=lam_star, rho=0.0, residual=axis_cert, branch_id=branch_id
            )
        )
        residuals.append(axis_cert)

    rows = []
    ok = True
    for pt, res in zip(points, residuals):
        ok = ok and abs(res) <= solver.CERTIFICATION_TOL
        if pt.rho > 0.0:
            l_over_r = _fmt(pt.lam / pt.rho)
            r_over_r = _fmt(1.0 / pt.rho)
        else:
            # dropped by the ratio transform: no finite image on the axis
            l_over_r = ""
            r_over_r = ""
        rows.append(
            [
                _fmt(pt.lam),
                _fmt(pt.rho),
                _fmt(res),
                str(pt.branch_id),
                l_over_r,
                r_over_r,
            ]
        )
    header = ["lambda", "rho", "residual", "branch_id", "l_over_r", "R_over_r"]
    _write_text(cfg, _csv(header, rows))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_threshold(cfg: RunConfig) -> int:
    kind = cfg.geometry_kind()
    problem = CurvatureProblem(kind, cfg.rhs_weight(kind))
    grid = None
    if cfg.lambda_min is not None and cfg.lambda_max is not None:
        grid = np.linspace(cfg.lambda_min, cfg.lambda_max, cfg.lambda_steps)
    report = solver.extract_thresholds(problem, cfg.quadrature(), lambda_grid=grid)
    branches = [
        {
            "branch_id": bid,
            "ratio_inf": extrema[0],
            "ratio_sup": extrema[1],
        }
        for bid, extrema in sorted(report.ratio_extrema.items())
    ]
    ratio_infs = [b["ratio_inf"] for b in branches]
    ratio_sups = [b["ratio_sup"] for b in branches]
    payload = {
        "geometry": report.geometry.value,
        "w": report.w,
        "lambda_star": report.lambda_star,
        "rho0": report.rho0,
        "ratio_inf": min(ratio_infs) if ratio_infs else None,
        "ratio_sup": max(ratio_sups) if ratio_sups else None,
        "nu_slope": report.nu_slope,
        "paper_value": report.paper_comparison.paper_value,
        "status": report.paper_comparison.status,
        "branches": branches,
    }
    _write_text(cfg, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suite

_VERIFY_MSD_Z_BOUND = 4.0


def _check_normalization(cfg: RunConfig) -> tuple[bool, str]:
    rng = np.random.default_rng([cfg.seed, 1])
    worst_norm = 0.0
    worst_marginal = 0.0
    worst_rotation = 0.0
    for _ in range(200):
        a, b, offset = rng.uniform(0.0, 2.0 * math.pi, 3)
        p = WernerParameter(rng.uniform(0.0, 1.0))
        probs = {}
        for sa in (-1, 1):
            for sb in (-1, 1):
                probs[sa, sb] = outcome_probability(
                    SignPair(sa, sb), PlanarDirection(a), PlanarDirection(b), p
                )
        worst_norm = max(worst_norm, abs(sum(probs.values()) - 1.0))
        for sa in (-1, 1):
            worst_marginal = max(
                worst_marginal, abs(probs[sa, -1] + probs[sa, 1] - 0.5)
            )
        shifted = outcome_probability(
            SignPair(1, -1),
            PlanarDirection(a + offset),
            PlanarDirection(b + offset),
            p,
        )
        worst_rotation = max(
            worst_rotation,
            abs(
                shifted
                - outcome_probability(
                    SignPair(1, -1), PlanarDirection(a), PlanarDirection(b), p
                )
            ),
        )
    worst = max(worst_norm, worst_marginal, worst_rotation)
    return worst <= 1e-15, f"max deviation {worst:.2e} (bound 1e-15)"


def _check_msd(cfg: RunConfig) -> tuple[bool, str]:
    rng = np.random.default_rng([cfg.seed, 2])
    worst = 0.0
    for name in ("plus", "minus", "classical"):
        proto = cfg.protocol_spec(name)
        analytic = walk.expected_sq_separation(cfg.r, cfg.l, proto)
        mean, stderr = walk.mc_sq_separation(cfg.r, cfg.l, proto, cfg.samples, rng)
        worst = max(worst, abs(mean - analytic) / stderr)
    return worst <= _VERIFY_MSD_Z_BOUND, (
        f"max |z| = {worst:.2f} (bound {_VERIFY_MSD_Z_BOUND})"
    )


def _check_oracles(cfg: RunConfig) -> tuple[bool, str]:
    rng = np.random.default_rng([cfg.seed, 3])
    n = 2000
    details = []
    ok = True
    for kind, rho_hi, tol in (
        (GeometryKind.SPHERICAL, math.pi - 0.01, 1e-12),
        (GeometryKind.HYPERBOLIC, 5.0, 1e-9),
    ):
        rho = rng.uniform(0.01, rho_hi, n)
        lam = rng.uniform(0.001, 2.0, n)
        pa = rng.uniform(0.0, 2.0 * math.pi, n)
        pb = rng.uniform(0.0, 2.0 * math.pi, n)
        diff = np.max(
            np.abs(
                geometry.construction_distances(kind, rho, lam, pa, pb)
                - geometry.closed_form_distances(kind, rho, lam, pa, pb)
            )
        )
        ok = ok and diff <= tol
        details.append(f"{kind.value} {diff:.2e} (bound {tol:g})")
    return ok, "; ".join(details)


def _check_series(cfg: RunConfig) -> tuple[bool, str]:
    quad = cfg.quadrature()
    worst_lo, worst_hi = math.inf, 0.0
    for kind in GeometryKind:
        for rho in (0.5, 1.0, 1.5):
            coef = solver.small_lambda_series(kind, rho)
            resid = [
                solver.mean_sq_step(kind, rho, lam, quad)
                - rho * rho
                - coef * lam * lam
                for lam in (0.04, 0.02)
            ]
            if resid[1] == 0.0:
                return False, "quartic remainder vanished; cannot form ratio"
            ratio = resid[0] / resid[1]
            worst_lo = min(worst_lo, ratio)
            worst_hi = max(worst_hi, ratio)
    ok = 14.0 <= worst_lo and worst_hi <= 18.0
    return ok, f"quartic ratios in [{worst_lo:.2f}, {worst_hi:.2f}] (need [14, 18])"


def _check_roots(cfg: RunConfig) -> tuple[bool, str]:
    quad = cfg.quadrature()
    worst = 0.0
    count = 0
    for kind, w, grid in (
        (GeometryKind.SPHERICAL, 1.0, np.linspace(0.1, 0.5, 3)),
        (GeometryKind.HYPERBOLIC, 3.0, np.linspace(0.1, 1.5, 3)),
    ):
        problem = CurvatureProblem(kind, w)
        traced = solver.trace_curve(problem, grid, quad)
        cert = solver.certify_curve(problem, traced, quad)
        count += len(cert.curve.points)
        if cert.certified.size:
            worst = max(worst, float(np.max(np.abs(cert.certified))))
        axis = solver.certified_axis_crossing(problem, quad)
        if axis is not None:
            count += 1
            worst = max(worst, abs(axis[1]))
    ok = count > 0 and worst <= solver.CERTIFICATION_TOL
    return ok, f"{count} roots, max certified residual {worst:.2e} (bound 1e-08)"


VERIFY_CHECKS = [
    ("outcome-normalization", _check_normalization),
    ("msd-mc-vs-analytic", _check_msd),
    ("closed-vs-construction", _check_oracles),
    ("quadrature-vs-series", _check_series),
    ("root-certification", _check_roots),
]


def cmd_verify(cfg: RunConfig) -> int:
    failures = 0
    lines = []
    for name, check in VERIFY_CHECKS:
        ok, detail = check(cfg)
        failures += 0 if ok else 1
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    summary = "all checks passed" if failures == 0 else f"{failures} check(s) failed"
    text = "\n".join(lines + [summary]) + "\n"
    _write_text(cfg, text)
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, help="master seed (default 0)")
    sub.add_argument("--out", type=str, help="output path (default stdout)")
    sub.add_argument("--config", type=str, help="key=value config file")
    sub.add_argument("--quad-nodes", dest="quad_nodes", type=int,
                     help="quadrature nodes per axis (default 128)")
    sub.add_argument("--protocol", choices=sorted(_PROTOCOLS),
                     help="step protocol")
    sub.add_argument("--p", type=float, help="mixing parameter in [0, 1]")
    sub.add_argument("--r", type=float, help="initial separation (default 1)")
    sub.add_argument("--l", type=float, help="step length (default 0.5)")
    sub.add_argument("--geometry", choices=sorted(_GEOMETRIES),
                     help="surface geometry for curve/threshold")
    sub.add_argument("--w", type=float,
                     help="explicit right-hand-side weight (default from protocol)")
    sub.add_argument("--lambda-min", dest="lambda_min", type=float,
                     help="smallest scaled step in the curve grid")
    sub.add_argument("--lambda-max", dest="lambda_max", type=float,
                     help="largest scaled step in the curve grid")
    sub.add_argument("--lambda-steps", dest="lambda_steps", type=int,
                     help="number of curve grid points (default 32)")
    sub.add_argument("--samples", type=int,
                     help="Monte Carlo sample count (default 1000000)")
    sub.add_argument("--steps", type=int, help="ensemble steps (default 100)")
    sub.add_argument("--walkers", type=int, help="ensemble walkers (default 1000)")
    sub.add_argument("--epsilon", type=float,
                     help="meeting radius (default 0.1 * l)")
    sub.add_argument("--workers", type=int, help="worker threads (default 1)")


_COMMANDS = {
    "msd": cmd_msd,
    "simulate": cmd_simulate,
    "curve": cmd_curve,
    "threshold": cmd_threshold,
    "verify": cmd_verify,
}

_COMMAND_HELP = {
    "msd": "single-step mean-square separation: Monte Carlo vs analytic",
    "simulate": "multi-step two-walker ensemble trajectory statistics",
    "curve": "trace and certify the curvature-equation solution curve",
    "threshold": "endpoint and ratio-bound report for one geometry",
    "verify": "run the named self-check suite",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entwalk",
        description="Correlated two-walker steps and their curved-surface models.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sub = subparsers.add_parser(name, help=_COMMAND_HELP[name])
        _add_common(sub)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        return _COMMANDS[args.command](cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
