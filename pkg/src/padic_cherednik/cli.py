"""Command-line front end.

    padic-cherednik reflections           --config run.cfg
    padic-cherednik verify <suite>        --config run.cfg [--seed N] [--inject EXPR]
    padic-cherednik apply <op> <poly>     --config run.cfg
    padic-cherednik norm <expr>           --config run.cfg
    padic-cherednik report-all            --config run.cfg [--seed N]

Reports are JSON with sorted keys.  Exit status: 0 when every check passes,
1 when some check fails, 2 on configuration, parse or runtime errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config, parse_config
from .padic import LatticeLevel, gauge_report
from .refgroup import conjugacy_classes, enumerate_reflections
from .serialize import ParseError, format_localized, parse_operator, parse_poly
from .suites import SUITES, Runner, run_suite

CONVENTIONS = {
    "group_action": "(g.f)(x) = f(M_g x)",
    "skew_normal_form": "f * L^beta * g",
    "pbw_normal_form": "f * g * D^alpha",
    "gauge": "min v(f) - n|alpha|",
}


class CliError(Exception):
    pass


def _header(cfg: RunConfig, command: str, seed: int | None = None) -> dict:
    head = {"command": command, "config": cfg.summary(), "conventions": CONVENTIONS}
    if seed is not None:
        head["seed"] = seed
    return head


def _emit(report: dict, out: str | None):
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _status_code(entries) -> int:
    statuses = {e["status"] for e in entries}
    if "error" in statuses:
        return 2
    return 1 if "fail" in statuses else 0


def _tally(entries) -> dict:
    counts = {"pass": 0, "fail": 0, "error": 0, "skip": 0}
    for e in entries:
        counts[e["status"]] += 1
    return counts


# -- commands ----------------------------------------------------------------------------


def cmd_reflections(cfg: RunConfig) -> tuple[dict, int]:
    group = cfg.group()
    data = enumerate_reflections(group)
    classes = conjugacy_classes(group, data)
    class_of = {i: k for k, cls in enumerate(classes) for i in cls}
    rows = [
        {
            "element": d.s,
            "hyperplane": d.hyperplane,
            "form": [str(a) for a in d.alpha],
            "eigenvalue": str(d.lam),
            "class": class_of[i] + 1,
        }
        for i, d in enumerate(data)
    ]
    report = {
        "group": {"name": group.name, "order": len(group), "rank": group.r},
        "reflections": rows,
        "classes": [[data[i].s for i in cls] for cls in classes],
        "hyperplanes": len({d.hyperplane for d in data}),
    }
    return report, 0


def cmd_verify(cfg: RunConfig, suites, seed: int, inject: str | None, timing: bool) -> tuple[dict, int]:
    run = Runner(cfg, seed, timing)
    for suite in suites:
        run_suite(run, suite, inject if suite == "pbw" else None)
    entries = sorted(run.entries, key=lambda e: e["name"])
    report = {"entries": entries, "summary": _tally(entries)}
    return report, _status_code(entries)


def cmd_apply(cfg: RunConfig, op_text: str, poly_text: str) -> str:
    alg = cfg.algebra()
    m = cfg["cyclotomic_order"]
    op = parse_operator(op_text, alg.skew, alg.dunkl, m)
    f = parse_poly(poly_text, alg.r, m)
    return format_localized(alg.skew.apply_to_function(op, f))


def cmd_norm(cfg: RunConfig, expr: str) -> dict:
    alg = cfg.algebra()
    op = parse_operator(expr, alg.skew, alg.dunkl, cfg["cyclotomic_order"])
    a = alg.pbw_normal_form(op)
    level = LatticeLevel(cfg["verify.level_n"], cfg["verify.level_m"])
    return gauge_report(a, level, cfg.field_spec())


# -- entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="plain-text run configuration")
    common.add_argument("--seed", type=int, help="random seed (overrides the config)")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="record per-check wall time")

    parser = argparse.ArgumentParser(prog="padic-cherednik", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("reflections", parents=[common], help="list reflections and conjugacy classes")
    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--inject", metavar="EXPR", help="operator expected to fall outside the algebra")
    apply = sub.add_parser("apply", parents=[common], help="apply an operator to a polynomial")
    apply.add_argument("operator")
    apply.add_argument("poly")
    norm = sub.add_parser("norm", parents=[common], help="gauge of an element at verify.level_n")
    norm.add_argument("expr")
    sub.add_parser("report-all", parents=[common], help="run every suite")
    return parser


def _load(args) -> RunConfig:
    if args.config is None:
        return parse_config("", "<defaults>")
    return load_config(args.config)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        seed = args.seed if args.seed is not None else cfg["seed"]
        if seed < 0 or seed >= 2**64:
            raise CliError("--seed must be an unsigned 64-bit integer")
        out = args.out or cfg["output"]
        if args.command == "apply":
            print(cmd_apply(cfg, args.operator, args.poly))
            return 0
        if args.command == "reflections":
            body, code = cmd_reflections(cfg)
            seed = None
        elif args.command == "norm":
            body, code = cmd_norm(cfg, args.expr), 0
            seed = None
        elif args.command == "verify":
            body, code = cmd_verify(cfg, [args.suite], seed, args.inject, args.timing)
        else:
            body, code = cmd_verify(cfg, SUITES, seed, None, args.timing)
        _emit({"header": _header(cfg, args.command if args.command != "verify" else f"verify {args.suite}", seed), **body}, out)
        return code
    except (ConfigError, ParseError, CliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
