"""``verify <suite>``: run a verification suite and write a deterministic report.

Exit status: 0 all checks pass, 1 some check fails, 2 usage error, 3 I/O error.
Environment variables ``FLATTORSION_SAMPLES``, ``FLATTORSION_SEED``,
``FLATTORSION_TOL_EXACT``, ``FLATTORSION_TOL_FD``, ``FLATTORSION_FORMAT`` and
``FLATTORSION_OUT`` supply defaults; command-line flags win.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import InvalidInputError
from .report import SUITES, SuiteConfig, render_report, run_suite

ENV_PREFIX = "FLATTORSION_"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _env(name: str, cast, default):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise InvalidInputError(f"{ENV_PREFIX}{name}={raw!r} is not a valid {cast.__name__}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description=__doc__.splitlines()[0])
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--samples", type=int, help="sample points or random inputs per check (default 50)")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--tol-exact", type=float, help="tolerance for closed-form identities (default 1e-10)")
    p.add_argument("--tol-fd", type=float, help="tolerance for finite-difference checks (default 1e-6)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), help="report format (default json)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = SuiteConfig(
            suite=args.suite,
            samples=args.samples if args.samples is not None else _env("SAMPLES", int, 50),
            seed=args.seed if args.seed is not None else _env("SEED", int, 0),
            tol_exact=args.tol_exact if args.tol_exact is not None else _env("TOL_EXACT", float, 1e-10),
            tol_fd=args.tol_fd if args.tol_fd is not None else _env("TOL_FD", float, 1e-6),
        )
        fmt = args.format or _env("FORMAT", str, "json")
        if fmt not in ("json", "csv"):
            raise InvalidInputError(f"unknown format {fmt!r}")
    except InvalidInputError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = args.out or _env("OUT", str, None)

    report = run_suite(cfg)
    text = render_report(report, fmt)
    if out:
        try:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"verify: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    failed = [c.check_id for c in report.checks if not c.passed]
    for cid in failed:
        print(f"FAIL {cid}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
