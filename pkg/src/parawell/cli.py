"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys

from .errors import ParawellError, SpecFormatError
from .runner import run
from .specfile import STAGES


def _summary_line(name: str, section: dict) -> str:
    status = "PASS" if section.get("passed") else "FAIL"
    detail = ""
    if name == "parabolicity":
        ci = section.get("condition_i", {})
        detail = f"delta_estimate={ci.get('delta_estimate')}"
        cii = section.get("condition_ii")
        if cii:
            detail += f", min_sv={cii.get('min_singular_value'):.3g}"
    elif name == "compatibility":
        detail = f"max_residual={section.get('max_residual', 'n/a')}"
    elif name == "interpolation":
        wi = section.get("weight_identity", {})
        detail = f"identity_err={wi.get('max_relative_error')}"
    elif name == "sweep":
        detail = (f"spread={section.get('spread'):.3g} "
                  f"(bound {section.get('policy_bound')})")
    if "error" in section:
        detail = section["error"]
    return f"{name}: {status} ({detail})"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="parawell",
        description="Verification toolkit for Petrovskii parabolic "
                    "initial-boundary value problems in generalized "
                    "anisotropic Sobolev spaces.")
    parser.add_argument("--config", required=True, help="run config file")
    parser.add_argument("--stage", action="append", choices=STAGES,
                        help="run only the named stage (repeatable)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--out", default=None,
                        help="write the JSON report (and ratio CSV) here")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the reported run tolerance")
    args = parser.parse_args(argv)
    try:
        report = run(args.config, stages=args.stage, seed=args.seed,
                     out=args.out, tol=args.tol)
    except SpecFormatError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ParawellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for name, section in report.sections.items():
        print(_summary_line(name, section))
    if args.out:
        print(f"report written to {args.out}")
    print("overall:", "PASS" if report.overall_pass else "FAIL")
    return 0 if report.overall_pass else 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
