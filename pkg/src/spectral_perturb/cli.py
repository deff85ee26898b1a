"""
Command-line front end.

    spectral-perturb bound POP SAMP --r R --s S [--mode symmetric|svd-right|svd-left]
    spectral-perturb sharpness --example diag|rotation [--p P --d D] --epsilon EPS
    spectral-perturb montecarlo --ensemble spiked|rectangular --p P [--q Q] ...
    spectral-perturb verify --suite identities|bounds|all --trials N --seed S

Exit codes: 0 success, 1 I/O or parse error (and failed ``verify``
properties), 2 theorem precondition or parameter validation failure,
3 bound violation (a library bug; the counterexample is written out).
Reports go to stdout unless ``--out`` is given.  When ``--seed`` is
omitted the environment variable ``SPECTRAL_PERTURB_SEED`` is used.
"""

import argparse
import os
import sys
from pathlib import Path

from . import bounds, harness, verify
from .bounds import BlockSelection, PreconditionError
from .matrix_core import MatrixError
from .reporting import MatrixFileError, ReportDocument, load_matrix, report_to_dict, save_matrix

EXIT_OK = 0
EXIT_IO = 1
EXIT_PRECONDITION = 2
EXIT_VIOLATION = 3

SEED_ENV = "SPECTRAL_PERTURB_SEED"
DEFAULT_CAMPAIGN_SEED = 42


class UsageError(Exception):
    pass


def _resolve_seed(value, default):
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            seed = int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
        if not 0 <= seed < 2**64:
            raise UsageError(f"{SEED_ENV} must be an unsigned 64-bit integer")
        return seed
    return default


def _emit(doc, args):
    text = doc.write(args.out, args.format)
    if args.out is None:
        sys.stdout.write(text)


def _err(msg):
    print(f"spectral-perturb: {msg}", file=sys.stderr)


def cmd_bound(args):
    try:
        pop = load_matrix(args.pop_file)
        samp = load_matrix(args.samp_file)
    except MatrixFileError as exc:
        _err(str(exc))
        return EXIT_IO
    flags = {"pop_file": str(args.pop_file), "samp_file": str(args.samp_file),
             "r": args.r, "s": args.s, "mode": args.mode, "format": args.format}
    doc = ReportDocument(command="bound", flags=flags)
    code = EXIT_OK
    try:
        sel = BlockSelection(args.r, args.s)
        if args.mode == "symmetric":
            report = bounds.evaluate_symmetric(pop, samp, sel, strict=False)
        else:
            report = bounds.svd_variant_bounds(pop, samp, sel, args.mode.split("-")[1], strict=False)
    except (PreconditionError, MatrixError) as exc:
        doc.records.append({"mode": args.mode, "r": args.r, "s": args.s, "inapplicable": str(exc)})
        doc.summary = {"status": "inapplicable", "reason": str(exc)}
        _err(f"precondition failed: {exc}")
        _emit(doc, args)
        return EXIT_PRECONDITION
    doc.records.append(report_to_dict(report))
    inapplicable = report.inapplicable
    violated = [c.name for c in report.violations()]
    status = "ok"
    if violated:
        status, code = "violation", EXIT_VIOLATION
        _err(f"bound violated: {', '.join(violated)}")
    elif any(name.startswith(("variant", "svd")) for name in inapplicable):
        status, code = "inapplicable", EXIT_PRECONDITION
        _err("precondition failed: " + "; ".join(sorted(set(inapplicable.values()))))
    doc.summary = {"status": status, "inapplicable": inapplicable, "violations": violated}
    _emit(doc, args)
    return code


def cmd_sharpness(args):
    eps_list = args.epsilon
    flags = {"example": args.example, "p": args.p, "d": args.d, "epsilon": eps_list,
             "format": args.format}
    doc = ReportDocument(command="sharpness", flags=flags)
    try:
        for eps in eps_list:
            if args.example == "diag":
                row, _ = harness.sharpness_diag_row(args.p, args.d, eps)
                pop, samp = harness.gen_sharpness_diag(args.p, args.d, eps)
            else:
                row, _ = harness.sharpness_rotation_row(eps)
                pop, samp = harness.gen_sharpness_rotation(eps)
            doc.records.append(row)
            if args.emit_matrices is not None:
                out_dir = Path(args.emit_matrices)
                out_dir.mkdir(parents=True, exist_ok=True)
                tag = f"{args.example}_eps{eps!r}"
                save_matrix(out_dir / f"{tag}_pop.csv", pop)
                save_matrix(out_dir / f"{tag}_samp.csv", samp)
    except harness.SpecError as exc:
        _err(str(exc))
        return EXIT_PRECONDITION
    except OSError as exc:
        _err(f"cannot write matrices: {exc}")
        return EXIT_IO
    ratios = [r["ratio"] for r in doc.records]
    doc.summary = {"rows": len(doc.records), "min_ratio": min(ratios), "max_ratio": max(ratios)}
    _emit(doc, args)
    return EXIT_OK


def _parse_spectrum(text, kind, p):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise harness.SpecError("spectrum", f"cannot parse {text!r}") from None
    if not values:
        raise harness.SpecError("spectrum", "no values given")
    if kind == "spiked_symmetric" and len(values) < p:
        values += [values[-1]] * (p - len(values))
    return tuple(values)


def cmd_montecarlo(args):
    kind = {"spiked": "spiked_symmetric", "rectangular": "rectangular"}[args.ensemble]
    try:
        seed = _resolve_seed(args.seed, DEFAULT_CAMPAIGN_SEED)
        spectrum = _parse_spectrum(args.spectrum, kind, args.p)
        spec = harness.EnsembleSpec(kind=kind, p=args.p, q=args.q, spectrum=spectrum,
                                    noise_scale=args.noise, trials=args.trials, seed=seed,
                                    r=args.r, s=args.s)
    except (harness.SpecError, UsageError) as exc:
        _err(f"invalid campaign: {exc}")
        return EXIT_PRECONDITION
    if args.parallel < 1:
        _err("invalid campaign: parallel: must be >= 1")
        return EXIT_PRECONDITION
    flags = {"ensemble": args.ensemble, **spec.to_dict(), "format": args.format}
    doc = ReportDocument(command="montecarlo", flags=flags, seed=seed)
    try:
        result = harness.run_campaign(spec, parallel=args.parallel)
    except harness.CampaignViolation as exc:
        pop, samp = exc.matrices
        doc.records.append({"trial_index": exc.trial_index,
                            "reports": {exc.report.mode: report_to_dict(exc.report)}})
        doc.summary = {"status": "violation", "trial_index": exc.trial_index,
                       "counterexample": {"pop": pop.tolist(), "samp": samp.tolist()}}
        _err(str(exc))
        _emit(doc, args)
        return EXIT_VIOLATION
    except PreconditionError as exc:
        _err(f"campaign precondition failed: {exc}")
        return EXIT_PRECONDITION
    for rec in result.records:
        doc.records.append({"trial_index": rec.trial_index,
                            "reports": {m: report_to_dict(r) for m, r in rec.reports.items()}})
    doc.summary = {"status": "ok", **result.summary}
    _emit(doc, args)
    return EXIT_OK


def cmd_verify(args):
    try:
        seed = _resolve_seed(args.seed, 0)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_PRECONDITION
    corrupt = tuple(args.inject_failure or ())
    result = verify.run_suite(args.suite, trials=args.trials, seed=seed, corrupt=corrupt)
    for line in result.lines():
        print(line)
    return EXIT_OK if result.passed else EXIT_IO


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spectral-perturb",
        description="Subspace distances and eigenvector/singular-vector perturbation bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p):
        p.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("bound", help="evaluate bounds for a matrix pair")
    p.add_argument("pop_file", type=Path, help="population matrix (.csv or .json)")
    p.add_argument("samp_file", type=Path, help="perturbed matrix (.csv or .json)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mode", choices=("symmetric", "svd-right", "svd-left"), default="symmetric")
    output_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sharpness", help="reproduce the sharpness examples")
    p.add_argument("--example", choices=("diag", "rotation"), required=True)
    p.add_argument("--p", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--epsilon", type=float, nargs="+", required=True)
    p.add_argument("--emit-matrices", type=Path, default=None, metavar="DIR",
                   help="also write each matrix pair as CSV into DIR")
    output_flags(p)
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("montecarlo", help="run a soundness campaign on a random ensemble")
    p.add_argument("--ensemble", choices=("spiked", "rectangular"), default="spiked")
    p.add_argument("--p", type=int, default=20)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--spectrum", default="5,1",
                   help="comma-separated values; for spiked ensembles the last is repeated up to p")
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--parallel", type=int, default=1, metavar="N")
    output_flags(p)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("verify", help="run the identity and bound property suites")
    p.add_argument("--suite", choices=("identities", "bounds", "all"), default="all")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--inject-failure", action="append", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
