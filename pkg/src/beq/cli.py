"""Command-line entry point ``beq``.

Exit codes: 0 on success, 1 for I/O and schema problems, 2 for domain errors.
Results go to stdout unless ``--out`` names a file; diagnostics go to stderr.
Set ``BEQ_LOG`` to error, info or debug to control logging.
"""

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import io as bio
from .blaschke import BlaschkeProduct, critical_points
from .cayley import CayleyMap, SignedAtomicMeasure, energy_shift_constant, pushforward_measure
from .energy import (
    LineConfiguration,
    ProtonSystem,
    energy_V,
    energy_V_nu,
    energy_V_with_infinity,
    energy_W,
    energy_W_mu,
    exceptional_report,
    tangential_gradient,
)
from .equilibrium import DEFAULT_PROBES, DEFAULT_SEED, DEFAULT_TOLERANCE, reverse_problem_pipeline, verify_on_curve
from .errors import BeqError, ExceptionalConfiguration, SchemaError
from .figures import argument_table, curve_header, curve_table, write_figure1, write_figure2
from .level import CircleConfiguration, solve_level, trace_curve, wrap_angle

log = logging.getLogger("beq")

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging():
    name = os.environ.get("BEQ_LOG", "").strip().lower()
    level = LOG_LEVELS.get(name, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="beq: %(levelname)s: %(message)s", force=True)
    if name and name not in LOG_LEVELS:
        log.warning("ignoring BEQ_LOG=%r (expected error, info or debug)", name)


def _load(path, *kinds):
    if path is None:
        raise SchemaError("--input is required")
    doc = bio.load(path)
    if kinds and doc.kind not in kinds:
        raise SchemaError(f"kind: expected {' or '.join(kinds)}, got {doc.kind!r}")
    return bio.from_document(doc)


def _emit(result, out):
    text = json.dumps(bio.to_jsonable(result), indent=2, sort_keys=True) + "\n"
    if out:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands

def cmd_critical_points(args):
    B = _load(args.input, "blaschke")
    if B.degree == 1:
        log.warning("a degree-1 product has no critical points")
    crit = critical_points(B)
    m = crit.inside.size
    _emit({
        "degree": B.degree,
        "inside": crit.inside,
        "outside": crit.outside,
        "inside_residuals": crit.residuals[:m],
        "outside_residuals": crit.residuals[m:],
    }, args.out)


def cmd_solve(args):
    B = _load(args.input, "blaschke")
    config = solve_level(B, args.delta)
    _emit({
        "delta": args.delta,
        "angles": config.angles,
        "display_angles": np.sort(config.display_angles()),
    }, args.out)


def cmd_trace(args):
    B = _load(args.input, "blaschke")
    curve = trace_curve(B, args.samples)
    rows = curve_table(curve, critical_points(B).inside)
    header = curve_header(B.degree)
    target = args.csv or args.out
    if target:
        os.makedirs(os.path.dirname(os.path.abspath(target)), exist_ok=True)
        bio.write_csv(target, header, rows)
        arg_path = os.path.join(os.path.dirname(os.path.abspath(target)), "arg.csv")
        bio.write_csv(arg_path, ["t", "Phi"], argument_table(B))
        log.info("wrote %d rows to %s and the argument table to %s", len(rows), target, arg_path)
    else:
        sys.stdout.write(bio.csv_text(header, rows))


def _protons_from(field):
    if isinstance(field, BlaschkeProduct):
        return critical_points(field).inside
    if isinstance(field, np.ndarray):
        return field
    return None


def cmd_energy(args):
    config = _load(args.input, "configuration")
    if args.field is None:
        raise SchemaError("--field is required (blaschke, points or measure document)")
    field = _load(args.field, "blaschke", "points", "measure")
    result = {}
    if isinstance(config, CircleConfiguration):
        if isinstance(field, SignedAtomicMeasure):
            mu = field
            result["energy"] = energy_W_mu(config, mu)
        else:
            protons = ProtonSystem(_protons_from(field))
            mu = protons.as_measure()
            result["energy"] = energy_W(config, protons)
            result["gradient"] = tangential_gradient(config.angles, protons)
            result["gradient_norm"] = float(np.linalg.norm(result["gradient"]))
            result["protons"] = protons.inner
        if args.theta is not None:
            cmap = CayleyMap(args.theta)
            nu = pushforward_measure(cmap, mu)
            at_pole = np.abs(wrap_angle(config.angles - args.theta)) < 1e-12
            line = np.where(at_pole, math.inf, cmap.forward_boundary(config.angles))
            lc = LineConfiguration(line)
            shift = energy_shift_constant(nu, len(config))
            line_energy = energy_V_with_infinity(lc, nu) if at_pole.any() else energy_V_nu(lc, nu)
            result.update(theta=args.theta, line_points=lc.points, line_energy=line_energy, shift_constant=shift,
                          identity_gap=result["energy"] - (line_energy + shift))
    else:
        if isinstance(field, SignedAtomicMeasure):
            result["energy"] = energy_V_with_infinity(config, field) if config.infinite_index is not None \
                else energy_V_nu(config, field)
        elif isinstance(field, np.ndarray):
            result["energy"] = energy_V(config, field)
        else:
            raise SchemaError("kind: a line configuration needs a points or measure field")
    _emit(result, args.out)


def cmd_verify(args):
    B = _load(args.input, "blaschke")
    verdict = verify_on_curve(B, args.delta, args.tolerance, args.probes, args.seed)
    _emit(verdict.as_dict(), args.out)


def cmd_inverse(args):
    points = _load(args.input, "points")
    result, verdict = reverse_problem_pipeline(points, args.tolerance, args.probes, args.seed)
    out = result.as_dict()
    out["verdict"] = verdict.as_dict()
    _emit(out, args.out)


def cmd_figure(args):
    out_dir = args.out or "."
    if args.which == 1:
        paths = write_figure1(out_dir, args.samples)
    else:
        paths = write_figure2(out_dir)
    for p in paths.values():
        log.info("wrote %s", p)
    sys.stdout.write("".join(f"{p}\n" for p in paths.values()))


COMMANDS = {
    "critical-points": (cmd_critical_points, "critical points of a Blaschke product"),
    "solve": (cmd_solve, "solve B(e^{it}) = e^{i delta}"),
    "trace": (cmd_trace, "trace the solution curve to CSV"),
    "energy": (cmd_energy, "evaluate circle or line energies"),
    "verify": (cmd_verify, "check equilibrium and minimality on the curve"),
    "inverse": (cmd_inverse, "interpolate B = 1 at given boundary points"),
    "figure": (cmd_figure, "write figure data and renderings"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="beq", description="Blaschke products and electron equilibria on the circle.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--input", help="input JSON document")
        p.add_argument("--out", help="output file (or directory for 'figure')")
        if name in ("solve", "verify"):
            p.add_argument("--delta", type=float, default=0.0)
        if name in ("trace", "figure"):
            p.add_argument("--samples", type=int, default=256, help="samples per branch")
        if name == "trace":
            p.add_argument("--csv", help="CSV output path; arg.csv is written next to it")
        if name in ("verify", "inverse"):
            p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
            p.add_argument("--probes", type=int, default=DEFAULT_PROBES)
        if name == "energy":
            p.add_argument("--field", help="blaschke, points or measure document supplying the protons")
            p.add_argument("--theta", type=float, help="also evaluate the line energy under the Cayley map at theta")
        if name == "figure":
            p.add_argument("--which", type=int, choices=(1, 2), required=True)
    return parser


def main(argv=None):
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except SchemaError as exc:
        log.error("%s", exc)
        return 1
    except OSError as exc:
        log.error("%s", exc)
        return 1
    except ExceptionalConfiguration as exc:
        log.error("exceptional configuration: %s", "; ".join(c.describe() for c in exc.report.reasons))
        return 2
    except (BeqError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
