"""Command line interface: ``sepcheck check | threshold | compare``.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from sepcheck.criteria import CONSTANTS, CRITERIA, applicable_criteria, evaluate
from sepcheck.errors import InputError, NumericalError
from sepcheck.harness import SAMPLERS, compare_sweep, threshold_bisect, werner_reference
from sepcheck.linalg import BipartiteLayout
from sepcheck.stateio import load_state, parse_psi
from sepcheck.states import WernerFamily

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def _cmd_check(args: argparse.Namespace) -> int:
    rho = load_state(args.state)
    available = applicable_criteria(rho.layout)
    if args.criterion == "all":
        names = available
    elif args.criterion in available:
        names = [args.criterion]
    else:
        raise InputError(f"criterion {args.criterion!r} does not apply to a {rho.layout} state")
    verdicts = [evaluate(rho, name) for name in names]
    if args.json:
        print(json.dumps([v.to_dict() for v in verdicts], indent=2))
    else:
        for v in verdicts:
            print(v.summary())
    return EXIT_OK


def _cmd_threshold(args: argparse.Namespace) -> int:
    label, psi = parse_psi(args.psi)
    family = WernerFamily(psi, label)
    result = threshold_bisect(
        family, args.criterion, args.tol, reference=werner_reference(args.criterion, psi)
    )
    if args.json:
        doc = result.to_dict()
        doc["reference_constants"] = dict(CONSTANTS.table())
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    print(f"criterion   {result.criterion}")
    print(f"family      werner({result.family})")
    if result.x_star is None:
        print("x_star      undetected")
    else:
        lo, hi = result.bracket
        print(f"x_star      {result.x_star:.6f}")
        print(f"bracket     [{lo:.12f}, {hi:.12f}]  ({result.iterations} iterations)")
    if result.reference is not None:
        print(f"closed form {result.reference:.6f}")
    print("reference thresholds (Bell-state Werner family):")
    for name, value in CONSTANTS.table():
        print(f"  {name:<12} {value:.6f}")
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    layout = BipartiteLayout.parse(args.layout)
    report = compare_sweep(args.samples, layout, args.seed, sampler=args.sampler)
    if args.out:
        report.write_csv(args.out)
    print(f"samples {args.samples}  layout {layout}  sampler {args.sampler}  ppt_entangled {report.n_entangled}")
    for name, stats in report.summary.items():
        print(
            f"  {name:<16} detected {stats['detected']:>6}  "
            f"rate {stats['detection_rate']:.4f}  false_positives {stats['false_positives']}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate criteria on a state file")
    p.add_argument("--state", required=True, help="JSON state file or bundled fixture name")
    p.add_argument("--criterion", default="all", choices=["all", *CRITERIA])
    p.add_argument("--json", action="store_true", help="print verdicts as JSON")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("threshold", help="bisect the Werner detection threshold")
    p.add_argument("--family", default="werner", choices=["werner"])
    p.add_argument("--psi", default="phi_minus", help="Bell name, 00_11:A,B or 01_10:A,B")
    p.add_argument("--criterion", required=True, choices=list(CRITERIA))
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("compare", help="randomized sweep against the PPT ground truth")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layout", default="2x2")
    p.add_argument("--sampler", default="ginibre", choices=SAMPLERS)
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
