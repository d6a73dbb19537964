"""Command line front end.

    verify run [--p P --e E --f F] [--ball N] [--checks a,b,c] [--json] ...
    verify list
    verify describe <check-id>

Without --p the run covers the default grid.  A config file (--config) holds
the same options as flat key=value lines; explicit flags win over the file.
Exit codes: 0 all pass, 1 any fail, 2 bad configuration, 3 resource budget
exceeded.
"""

import argparse
import sys

from .errors import ConfigError, LabError, ResourceBudgetExceeded
from .harness import (Report, RunConfig, describe_check, list_checks,
                      report_emit, run_checks)

_BOOLS = {"1": True, "true": True, "yes": True, "on": True,
          "0": False, "false": False, "no": False, "off": False}

# config-file keys -> RunConfig fields and parsers
_KEYS = {
    "p": ("p", int), "e": ("e", int), "f": ("f", int),
    "prec": ("prec", int), "ball": ("ball", int), "seed": ("seed", int),
    "samples": ("samples", int), "max_cutoff": ("max_cutoff", int),
    "checks": ("checks", None), "out": ("out", str),
    "checked": ("checked", None), "smoke": ("smoke", None),
}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOLS[text.strip().lower()]
    except KeyError:
        raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_checks(text: str) -> tuple:
    names = [t.strip() for t in text.split(",") if t.strip()]
    return tuple(names)


def read_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment; blank lines ignored."""
    out = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as ex:
        raise ConfigError(f"cannot read config file {path}: {ex}")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        field, conv = _KEYS[key]
        if key == "checks":
            out[field] = _parse_checks(val)
        elif key in ("checked", "smoke"):
            out[field] = _parse_bool(val)
        else:
            try:
                out[field] = conv(val)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}")
    return out


def _build_parser():
    top = argparse.ArgumentParser(
        prog="verify",
        description="exact checks for mod-p Hecke actions on the tree")
    sub = top.add_subparsers(dest="cmd")

    run = sub.add_parser("run", help="execute checks and print a report")
    run.add_argument("--p", type=int, default=None)
    run.add_argument("--e", type=int, default=None)
    run.add_argument("--f", type=int, default=None)
    run.add_argument("--prec", type=int, default=None)
    run.add_argument("--ball", type=int, default=None,
                     help="invariant ball radius N (1..4)")
    run.add_argument("--checks", type=str, default=None,
                     help="comma separated check ids, or 'all'")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--samples", type=int, default=None)
    run.add_argument("--max-cutoff", type=int, default=None, dest="max_cutoff")
    run.add_argument("--checked", type=str, default=None,
                     help="true/false: witness-checked coset reductions")
    run.add_argument("--smoke", action="store_true", default=None,
                     help="add the q=8 and q=9 contexts at small balls")
    run.add_argument("--json", action="store_true",
                     help="emit the JSON report instead of the table")
    run.add_argument("--out", type=str, default=None,
                     help="write the report here instead of stdout")
    run.add_argument("--config", type=str, default=None,
                     help="flat key=value option file")

    sub.add_parser("list", help="print every check id with its statement")

    desc = sub.add_parser("describe", help="explain one check")
    desc.add_argument("check_id")
    return top


def _config_from_args(args) -> RunConfig:
    fields = {}
    if args.config:
        fields.update(read_config_file(args.config))
    overrides = {
        "p": args.p, "e": args.e, "f": args.f, "prec": args.prec,
        "ball": args.ball, "seed": args.seed, "samples": args.samples,
        "max_cutoff": args.max_cutoff, "out": args.out, "smoke": args.smoke,
    }
    if args.checks is not None:
        overrides["checks"] = _parse_checks(args.checks)
    if args.checked is not None:
        overrides["checked"] = _parse_bool(args.checked)
    for key, val in overrides.items():
        if val is not None:
            fields[key] = val
    return RunConfig(**fields)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.cmd is None:
        parser.print_help()
        return 2
    try:
        if args.cmd == "list":
            sys.stdout.write(list_checks())
            return 0
        if args.cmd == "describe":
            sys.stdout.write(describe_check(args.check_id))
            return 0
        config = _config_from_args(args)
        report = run_checks(config)
        payload = report_emit(report, "json" if args.json else "text")
        if config.out:
            with open(config.out, "wb") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload.decode())
        return report.exit_code()
    except ConfigError as ex:
        print(f"configuration error: {ex}", file=sys.stderr)
        return 2
    except ResourceBudgetExceeded as ex:
        print(f"resource budget exceeded: {ex}", file=sys.stderr)
        return 3
    except LabError as ex:
        print(f"internal error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
