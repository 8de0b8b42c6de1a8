"""Command-line interface.

Exit codes: 0 satisfied/verified, 1 not satisfied/refuted, 2 inconclusive,
3 input error, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
from pathlib import Path

from . import __version__
from .certificate import certify_planar, certify_spatial, max_scaling_planar, max_scaling_spatial
from .domainfile import DomainFileError, dump_domain, load_domain
from .fixtures import unit_disk
from .geometry import probe_points, radii
from .greenbounds import density_lower_bound
from .metrics import planar_proof_trace
from .oracle import WosConfig, angular_bins, score_probes, verify_density
from .oracle.wos import bin_exits, sample_exits
from .svg import render_svg

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3, 4

CSV_COLUMNS = (
    "probe",
    "x",
    "y",
    "z",
    "delta",
    "patch_measure",
    "hits",
    "walkers",
    "probability",
    "density",
    "normalized_density",
    "std_error",
    "ci95",
)

log = logging.getLogger("harmcert")


class InputError(Exception):
    pass


def _g(v: float) -> str:
    return f"{v:.12g}"


def _load(path: str):
    raw = Path(path).read_bytes() if Path(path).is_file() else None
    if raw is None:
        raise InputError(f"cannot read domain file {path}")
    try:
        body = load_domain(path)
    except DomainFileError as exc:
        raise InputError(f"{path}: {exc}") from None
    return body, hashlib.sha256(raw).hexdigest()


def _report(args, digest: str, **fields) -> dict:
    rep = {"command": args.command, "input_sha256": digest}
    rep.update(fields)
    return rep


def _radii_dict(rad) -> dict:
    return {"outer": rad.outer, "inner": rad.inner, "curvature": rad.curvature}


def _certificate(body, n_override):
    rad = radii(body)
    if body.dim == 2:
        if n_override not in (None, 2):
            raise InputError("planar domains use the planar certificate; --n is only valid for 3D domains")
        cert = certify_planar(rad)
        scale = max_scaling_planar(rad)
        fields = {
            "kind": "planar",
            "lhs": cert.lhs,
            "rhs": 0.0,
            "scale_invariant_term": cert.scale_invariant_term,
            "margin": cert.margin,
            "satisfied": cert.satisfied,
        }
    else:
        n = 3 if n_override is None else n_override
        if n < 3:
            raise InputError(f"--n must be >= 3 for spatial domains, got {n}")
        cert = certify_spatial(rad, n)
        scale = max_scaling_spatial(rad, n)
        fields = {
            "kind": "spatial",
            "n": n,
            "lhs": cert.lhs,
            "rhs": cert.rhs,
            "exponent": cert.exponent,
            "margin": cert.margin,
            "satisfied": cert.satisfied,
        }
    return rad, fields, {"lambda_max": scale.lambda_max, "residual": scale.residual}


def _emit(args, report: dict, lines: list[str], stream=None):
    stream = stream or sys.stdout
    if getattr(args, "json", False):
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stream.write("\n".join(lines) + "\n")


def cmd_radii(args) -> int:
    body, digest = _load(args.file)
    rad = radii(body)
    rep = _report(args, digest, radii=_radii_dict(rad))
    _emit(args, rep, [f"R_O {_g(rad.outer)}", f"R_I {_g(rad.inner)}", f"R_C {_g(rad.curvature)}"])
    return EXIT_OK


def cmd_certify(args) -> int:
    body, digest = _load(args.file)
    rad, cert, scale = _certificate(body, args.n)
    rep = _report(args, digest, radii=_radii_dict(rad), certificate=cert, scaling=scale)
    lines = [
        f"R_O {_g(rad.outer)}",
        f"R_I {_g(rad.inner)}",
        f"R_C {_g(rad.curvature)}",
        f"certificate {cert['kind']}" + (f" n={cert['n']}" if "n" in cert else ""),
        f"lhs {_g(cert['lhs'])}",
        f"rhs {_g(cert['rhs'])}",
        f"margin {_g(cert['margin'])}",
        f"lambda_max {_g(scale['lambda_max'])}",
        f"satisfied {'yes' if cert['satisfied'] else 'no'}",
    ]
    _emit(args, rep, lines)
    return EXIT_OK if cert["satisfied"] else EXIT_FAIL


def cmd_scale(args) -> int:
    body, digest = _load(args.file)
    rad, cert, scale = _certificate(body, args.n)
    scaled = body.scaled(scale["lambda_max"])
    rep = _report(args, digest, radii=_radii_dict(rad), certificate=cert, scaling=scale)
    _emit(args, rep, [f"lambda_max {_g(scale['lambda_max'])}", f"residual {scale['residual']:.3e}"], sys.stderr)
    sys.stdout.write(dump_domain(scaled))
    return EXIT_OK


def _config(args) -> WosConfig:
    try:
        return WosConfig(
            epsilon=args.epsilon, walkers=args.walkers, seed=args.seed, workers=args.workers, max_steps=args.max_steps
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def probe_csv(report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for i, (p, v) in enumerate(zip(report.probes, report.normalized)):
        z = repr(float(p.point[2])) if len(p.point) == 3 else ""
        writer.writerow(
            [
                i,
                repr(float(p.point[0])),
                repr(float(p.point[1])),
                z,
                repr(p.delta),
                repr(p.patch_measure),
                p.hits,
                p.walkers,
                repr(p.probability),
                repr(p.density),
                repr(float(v)),
                repr(p.std_error),
                repr(p.ci95),
            ]
        )
    return buf.getvalue()


def _verify(args, body):
    config = _config(args)
    try:
        return verify_density(body, config, delta=args.delta, probe_count=args.probes, slack=args.slack)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _verify_fields(args, report) -> dict:
    return {
        "verdict": report.verdict,
        "threshold": report.threshold,
        "min_normalized": report.min_normalized,
        "slack": report.slack,
        "band_ci95": report.band,
        "overflow_fraction": report.overflow_fraction,
        "seed": args.seed,
        "walkers": args.walkers,
        "probes": [
            {
                "point": [float(c) for c in p.point],
                "hits": p.hits,
                "patch_measure": p.patch_measure,
                "density": p.density,
                "normalized_density": float(v),
                "std_error": p.std_error,
            }
            for p, v in zip(report.probes, report.normalized)
        ],
        "note": "verdict covers the probe points only",
    }


_VERDICT_EXIT = {"verified": EXIT_OK, "refuted": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}


def cmd_verify(args) -> int:
    body, digest = _load(args.file)
    t0 = time.perf_counter()
    report = _verify(args, body)
    rep = _report(args, digest, radii=_radii_dict(radii(body)), **_verify_fields(args, report))
    if args.timing:
        rep["timing_seconds"] = time.perf_counter() - t0
    if args.out:
        Path(args.out).write_text(probe_csv(report), encoding="utf-8")
    lines = [f"{'probe':>5} {'normalized':>12} {'std_error':>10}"]
    for i, (p, v) in enumerate(zip(report.probes, report.normalized)):
        lines.append(f"{i:>5} {v:>12.6f} {p.std_error / report.threshold:>10.6f}")
    lines += [f"min_normalized {_g(report.min_normalized)}", f"verdict {report.verdict}"]
    _emit(args, rep, lines)
    return _VERDICT_EXIT[report.verdict]


def cmd_trace(args) -> int:
    body, digest = _load(args.file)
    rad = radii(body)
    d = rad.curvature / 10 if args.d is None else args.d
    try:
        if body.dim == 2:
            tr = planar_proof_trace(rad, d)
            fields = {
                "d": tr.d,
                "pf1_bound": tr.pf1_bound,
                "pf4_bound": tr.pf4_bound,
                "pf5_lower": tr.pf5_lower,
                "con2_rhs": tr.con2_rhs,
                "d_star": tr.d_star,
                "contradiction_at_d": tr.contradiction,
            }
        else:
            n = 3 if args.n is None else args.n
            gb = density_lower_bound(rad, n, d)
            fields = {
                "n": gb.n,
                "d": gb.d,
                "harnack_factor": gb.harnack_factor,
                "ball_minorant": gb.ball_minorant,
                "chain_penalty": gb.chain_penalty,
                "density_ratio_bound": gb.density_ratio_bound,
                "limit": gb.limit,
            }
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rep = _report(args, digest, radii=_radii_dict(rad), trace=fields)
    lines = [f"{k} {_g(v) if isinstance(v, float) else v}" for k, v in fields.items()]
    _emit(args, rep, lines)
    return EXIT_OK


def cmd_report(args) -> int:
    body, digest = _load(args.file)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rad = radii(body)
    _, cert, scale = _certificate(body, args.n)
    report = _verify(args, body)
    (out / "report.csv").write_text(probe_csv(report), encoding="utf-8")
    rep = _report(args, digest, radii=_radii_dict(rad), certificate=cert, scaling=scale, **_verify_fields(args, report))
    (out / "report.json").write_text(json.dumps(rep, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    written = ["report.csv", "report.json"]
    if body.dim == 2:
        svg = render_svg(body, rad, [p.point for p in report.probes], report.normalized)
        (out / "domain.svg").write_text(svg, encoding="utf-8")
        written.append("domain.svg")
    sys.stdout.write("".join(f"wrote {out / name}\n" for name in written))
    return _VERDICT_EXIT[report.verdict]


def cmd_oracle_disk(args) -> int:
    """Self-test: unit-disk densities and half-disk measures against exact values."""
    body = unit_disk()
    config = _config(args)
    sample = sample_exits(body, config)
    probes = score_probes(body, sample, probe_points(body, args.probes), args.delta or body.radius / 20)
    exact = 1.0 / (2.0 * math.pi)
    ok = True
    lines = []
    for p in probes:
        z = (p.density - exact) / p.std_error
        ok &= abs(z) <= 3.0
        lines.append(f"density {p.density * 2 * math.pi:.6f} (z={z:+.2f})")
    est = bin_exits(sample, angular_bins(2))
    for prob, se in zip(est.probability, est.std_error):
        ok &= abs(prob - 0.5) <= 3.0 * se
        lines.append(f"half-disk {prob:.6f} (z={(prob - 0.5) / se:+.2f})")
    lines.append("oracle-disk " + ("pass" if ok else "FAIL"))
    rep = {"command": "oracle-disk", "pass": bool(ok), "seed": args.seed, "walkers": args.walkers}
    _emit(args, rep, lines)
    return EXIT_OK if ok else EXIT_FAIL


def _positive_int(v):
    i = int(v)
    if i < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return i


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmcert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, file=True):
        p = sub.add_parser(name, help=help_)
        if file:
            p.add_argument("file", help="domain file (JSON with dim, points, radius)")
        p.add_argument("--json", action="store_true", help="print the run report as JSON")
        p.set_defaults(func=func)
        return p

    def add_mc(p, walkers=10**6):
        p.add_argument("--walkers", type=_positive_int, default=walkers)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=_positive_int, default=1)
        p.add_argument("--epsilon", type=float, default=None, help="absorption shell (default 1e-5 R_I)")
        p.add_argument("--delta", type=float, default=None, help="probe patch radius (default R_C/20)")
        p.add_argument("--probes", type=int, default=8, help="extra probe points beyond the piece representatives")
        p.add_argument("--max-steps", type=_positive_int, default=10**6)

    add("radii", cmd_radii, "outer, inner and curvature radius")
    p = add("certify", cmd_certify, "evaluate the radius certificate")
    p.add_argument("--n", type=int, default=None, help="ambient dimension for 3D domains (default 3)")
    p = add("scale", cmd_scale, "largest certified rescaling; writes the scaled domain to stdout")
    p.add_argument("--n", type=int, default=None)
    p = add("verify", cmd_verify, "Monte Carlo check of the density threshold")
    add_mc(p)
    p.add_argument("--slack", type=float, default=0.05)
    p.add_argument("--out", default=None, help="write the probe table as CSV")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    p = add("trace", cmd_trace, "proof-chain diagnostics at offset d")
    p.add_argument("--d", type=float, default=None, help="boundary offset (default R_C/10)")
    p.add_argument("--n", type=int, default=None)
    p = add("report", cmd_report, "write report.csv, report.json and (2D) domain.svg")
    add_mc(p)
    p.add_argument("--slack", type=float, default=0.05)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p = add("oracle-disk", cmd_oracle_disk, "self-test on the unit disk", file=False)
    add_mc(p, walkers=10**5)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
