"""Command line front end.

    gsqc validate PATH
    gsqc gap --preset paper-1qubit-boost --lambda 10
    gsqc groundstate --preset paper-2qubit --lambda 10 --out run/
    gsqc sweep --family chain --n 3 --lambda 10,sqrt(1000),100 --out run/
    gsqc estimate --N 20 --k 2
    gsqc paper-repro
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from gsqc.analysis import (
    final_row_success_probability,
    fit_exponent,
    lambda_sweep,
    resource_estimate,
    row_profile,
    write_sweep,
)
from gsqc.basis import DimensionTooLarge, build_basis
from gsqc.circuit import (
    Boost,
    CircuitError,
    Project,
    SchemaError,
    chain_circuit,
    insert_teleportation,
    load_circuit,
    single_qubit_circuit,
    two_qubit_circuit,
    validate_circuit,
    with_lambda,
)
from gsqc.eigen import ConvergenceError, EigenOptions, spectral_gap
from gsqc.groundstate import construct_ground_state, dump_state
from gsqc.presets import load_preset, preset_names
from gsqc.repro import DEFAULT_TOLERANCE, QUOTED_LAMBDAS, quoted_rows

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_SOLVER = 0, 1, 2, 3
WORKERS_ENV = "GSQC_WORKERS"

_NUM = r"[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?"


def parse_lambda_list(text: str) -> list:
    """Comma-separated values; each a number or sqrt(number). ``quoted`` expands to the five reference values."""
    if text.strip() == "quoted":
        return list(QUOTED_LAMBDAS)
    out = []
    for item in text.split(","):
        item = item.strip()
        m = re.fullmatch(rf"sqrt\(({_NUM})\)", item)
        try:
            v = math.sqrt(float(m.group(1))) if m else float(item)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad lambda value {item!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"lambda must be positive, got {item!r}")
        out.append(v)
    return out


def _default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _eigen_opts(args) -> EigenOptions:
    return EigenOptions(
        k=args.k,
        tol=args.tol,
        seed=args.seed,
        dense_threshold=args.dense_threshold,
        shift_invert=args.shift_invert,
        dense_method=args.dense_method,
    )


def _load_input(args):
    if bool(args.circuit) == bool(args.preset):
        raise SystemExit("exactly one of --circuit or --preset is required")
    if args.circuit:
        return load_circuit(args.circuit)
    return load_preset(args.preset)


def _out_dir(args):
    if not args.out:
        return None
    p = Path(args.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _fmt(x):
    return "-" if x is None else f"{x:.6e}"


def cmd_validate(args) -> int:
    try:
        spec = load_circuit(args.path)
    except OSError as exc:
        print(f"error: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SchemaError as exc:
        print(f"parse error: {args.path}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    rep = validate_circuit(spec)
    print(rep)
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_gap(args) -> int:
    spec = _load_input(args)
    lams = args.lam or [None]
    opts = _eigen_opts(args)
    out = _out_dir(args)
    reports, timing, status = [], [], EXIT_OK
    print("lambda\tE0\tgap\tE2-E0\tmethod\tdimension\tmax_residual")
    for lam in lams:
        s = spec if lam is None else with_lambda(spec, lam)
        try:
            r = spectral_gap(s, opts)
        except ConvergenceError as exc:
            print(f"{lam}\tsolver did not converge: {exc}", file=sys.stderr)
            reports.append({"lambda": lam, "error": str(exc)})
            status = EXIT_SOLVER
            continue
        print(f"{'-' if lam is None else f'{lam:.6g}'}\t{_fmt(r.E0)}\t{_fmt(r.gap)}\t{_fmt(r.gap2)}\t{r.method}\t{r.dimension}\t{max(r.residuals):.2e}")
        d = r.to_dict()
        d["lambda"] = lam
        reports.append(d)
        timing.append({"lambda": lam, "seconds": r.seconds})
    if out:
        (out / "gap.json").write_text(json.dumps(reports, indent=2, sort_keys=True) + "\n")
        (out / "gap.timing.json").write_text(json.dumps(timing, indent=2) + "\n")
    return status


def cmd_groundstate(args) -> int:
    spec = _load_input(args)
    if args.lam:
        spec = with_lambda(spec, args.lam[0])
    basis = build_basis(spec)
    gs = construct_ground_state(spec, basis)
    psi = gs.normalized()
    print(basis.pruning_report())
    print(f"dimension {basis.dimension}, final-row probability {final_row_success_probability(psi, basis):.6g}")
    profiles = {}
    for qid in basis.qubit_ids:
        prof = row_profile(psi, basis, qid)
        profiles[qid] = {"probability": prof.probability.tolist(), "peak": prof.peak.tolist()}
        print(f"{qid}\t" + "\t".join(f"{p:.4e}" for p in prof.probability))
    out = _out_dir(args)
    if out:
        dump_state(psi, basis, out / "groundstate.txt")
        (out / "profiles.json").write_text(json.dumps(profiles, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


FAMILIES = ("single-boost", "single-project", "two-qubit", "two-qubit-mixed", "chain")


def family_builder(args):
    """Circuit factory lam -> CircuitSpec for a sweep family."""
    rows = args.rows
    if args.family == "single-boost":
        make = lambda lam: single_qubit_circuit(rows or 6, Boost(lam))
    elif args.family == "single-project":
        make = lambda lam: single_qubit_circuit(rows or 6, Project(0, lam))
    elif args.family == "two-qubit":
        make = lambda lam: two_qubit_circuit(rows or 4, lam)
    elif args.family == "two-qubit-mixed":
        make = lambda lam: two_qubit_circuit(rows or 4, lam, ("project", "boost"))
    elif args.family == "chain":
        make = lambda lam: chain_circuit(args.n, args.rows_between, lam)
    else:
        raise SystemExit(f"unknown family {args.family!r}")
    if args.teleport:
        base = make
        make = lambda lam: insert_teleportation(base(lam), args.policy, args.gadget)
    return make


def cmd_sweep(args) -> int:
    lams = args.lam or list(QUOTED_LAMBDAS)
    name = args.family + (f"-n{args.n}" if args.family == "chain" else "") + ("-teleport" if args.teleport else "")
    table = lambda_sweep(family_builder(args), lams, name, _eigen_opts(args), args.workers)
    print(table.to_tsv(), end="")
    window = tuple(args.window) if args.window else None
    try:
        slope, stderr = fit_exponent(table, window)
        print(f"fitted exponent: {slope:.4f} +/- {stderr:.4f}")
    except ValueError as exc:
        print(f"fit skipped: {exc}")
    out = _out_dir(args)
    if out:
        write_sweep(table, out, name, window)
    return EXIT_SOLVER if any(p.error for p in table.points) else EXIT_OK


def cmd_estimate(args) -> int:
    try:
        est = resource_estimate(args.N, args.k_exp, args.D, args.F, args.C)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(est.report())
    return EXIT_OK


def cmd_paper_repro(args) -> int:
    rows = quoted_rows(args.tolerance, _eigen_opts(args))
    print("table\tlambda\texpected\tmeasured\trel_error\ttolerance\tstatus")
    for r in rows:
        print(f"{r.table}\t{r.lam_label}\t{r.expected:.3e}\t{r.measured:.4e}\t{r.rel_error:.4f}\t{r.tolerance:g}\t{'PASS' if r.passed else 'FAIL'}")
    n_pass = sum(r.passed for r in rows)
    print(f"{n_pass}/{len(rows)} quoted gaps within tolerance")
    out = _out_dir(args)
    if out:
        lines = ["table\tlambda\texpected\tmeasured\trel_error\ttolerance\tpassed"]
        lines += [f"{r.table}\t{r.lam!r}\t{r.expected!r}\t{r.measured!r}\t{r.rel_error!r}\t{r.tolerance!r}\t{r.passed}" for r in rows]
        (out / "paper_repro.tsv").write_text("\n".join(lines) + "\n")
    return EXIT_OK if n_pass == len(rows) else EXIT_INVALID


def _add_input(p):
    p.add_argument("--circuit", help="circuit JSON file")
    p.add_argument("--preset", help=f"preset name ({', '.join(preset_names())})")


def _add_solver(p):
    p.add_argument("--lambda", dest="lam", type=parse_lambda_list, help="comma-separated lambdas, sqrt(x) allowed, or 'quoted'")
    p.add_argument("--k", type=int, default=3, help="eigenpairs including the ground state")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--dense-threshold", type=int, default=2048)
    p.add_argument("--dense-method", choices=("eigh", "svd"), default="eigh")
    p.add_argument("--shift-invert", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--out", help="directory for report files")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gsqc", description="Ground-state quantum computer circuits: gaps and scaling.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a circuit file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gap", help="spectral gap of a circuit")
    _add_input(p)
    _add_solver(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("groundstate", help="analytic ground state, row profiles and dump")
    _add_input(p)
    _add_solver(p)
    p.set_defaults(func=cmd_groundstate)

    p = sub.add_parser("sweep", help="gap over a lambda list with exponent fit")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, default=3, help="chain length")
    p.add_argument("--rows", type=int, default=None, help="rows per qubit (single/two-qubit families)")
    p.add_argument("--rows-between", type=int, default=0)
    p.add_argument("--teleport", action="store_true")
    p.add_argument("--policy", default="between-couplings", choices=("between-couplings", "after-every-coupling"))
    p.add_argument("--gadget", default="postselected")
    p.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))
    _add_solver(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("estimate", help="closed-form resource scaling")
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--k", dest="k_exp", type=float, default=2.0, help="control operations scale as N^k")
    p.add_argument("--D", type=float, default=None)
    p.add_argument("--F", type=float, default=1.0)
    p.add_argument("--C", type=float, default=8.0)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("paper-repro", help="check the quoted gap tables")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--skip-slow", action="store_true", help="accepted for symmetry; every row is a small dense solve")
    _add_solver(p)
    p.set_defaults(func=cmd_paper_repro)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CircuitError, KeyError, DimensionTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
