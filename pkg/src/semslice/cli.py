"""Command-line interface.

Commands: ``validate`` a scenario file, ``run`` one policy, ``compare``
policies side by side, ``generate`` the built-in scenario, and
``emit-schema`` to print the scenario document schema.

Exit codes are a stable contract: 0 success, 1 input error (bad scenario,
bad parameters), 2 environment error (unreadable input, unwritable
output, bad usage).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from semslice.baselines import PolicyKind
from semslice.engine import (
    COMPARISON_FILE,
    GeneratorParams,
    SCENARIO_SCHEMA,
    Scenario,
    emit_comparison,
    emit_metrics,
    generate_first_responder,
    load_scenario,
    run,
    scenario_to_json,
)
from semslice.errors import (
    InvalidParams,
    ScenarioParseError,
    ScenarioValidationError,
    SinkUnavailable,
)

OUT_DIR_ENV = "SEMSLICE_OUT"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ENV = 2


def _default_out() -> str:
    return os.environ.get(OUT_DIR_ENV, "out")


def _complain(message: str) -> None:
    print(f"semslice: {message}", file=sys.stderr)


def _report_invalid(err: ScenarioValidationError) -> int:
    _complain(f"invalid scenario ({len(err.issues)} issue(s)):")
    for loc, msg in err.issues:
        print(f"  {loc}: {msg}", file=sys.stderr)
    return EXIT_INPUT


def _set_dotted(doc: dict, dotted: str, raw: str) -> None:
    """Apply one ``a.b.c=value`` override onto the scenario document."""
    node = doc
    keys = dotted.split(".")
    for key in keys[:-1]:
        nxt = node.get(key)
        if not isinstance(nxt, dict):
            nxt = {}
            node[key] = nxt
        node = nxt
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node[keys[-1]] = value


def _load_scenario_arg(args: argparse.Namespace) -> Scenario:
    """Scenario from --scenario (with overrides applied) or the built-in."""
    overrides = list(getattr(args, "set", None) or [])
    seed = getattr(args, "seed", None)
    if args.scenario is None:
        scenario = generate_first_responder()
        if not overrides and seed is None:
            return scenario
        text = scenario_to_json(scenario)
    else:
        text = Path(args.scenario).read_text()
    if overrides or seed is not None:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ScenarioParseError(err.msg, err.lineno, err.colno) from err
        for item in overrides:
            dotted, _, raw = item.partition("=")
            if not _ or not dotted:
                raise InvalidParams(f"override must look like key=value: {item!r}")
            _set_dotted(doc, dotted, raw)
        if seed is not None:
            doc["seed"] = seed
        text = json.dumps(doc)
    return load_scenario(text)


def _print_summary(summary: dict) -> None:
    print(json.dumps(summary, indent=2, sort_keys=True))


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args)
    policy = PolicyKind.parse(args.policy)
    report = run(scenario, policy)
    emit_metrics(report, args.out)
    _print_summary(report.summary)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args)
    if args.policies:
        chosen = {PolicyKind.parse(tok.strip())
                  for tok in args.policies.split(",") if tok.strip()}
    else:
        chosen = set(PolicyKind)
    ordered = [kind for kind in PolicyKind if kind in chosen]
    out = Path(args.out)
    reports = []
    for kind in ordered:
        report = run(scenario, kind)
        emit_metrics(report, out / kind.value)
        reports.append(report)
        print(f"{kind.value}: "
              f"qos={report.summary['qos_satisfaction_rate']:.4f} "
              f"sla_violations={report.summary['sla_violation_count']} "
              f"mean_util={report.summary['mean_pool_utilization']:.4f}")
    emit_comparison(reports, out)
    print(f"wrote {out / COMPARISON_FILE}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args)
    print(f"scenario ok: {len(scenario.ues)} UEs, {len(scenario.slices)} "
          f"slices, {len(scenario.timeline)} events, "
          f"{scenario.duration_ticks} ticks")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    params = GeneratorParams(ues=args.ues, duration_ticks=args.duration,
                             accident_tick=args.t_accident, seed=args.seed)
    scenario = generate_first_responder(params)
    text = scenario_to_json(scenario)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_emit_schema(_args: argparse.Namespace) -> int:
    print(json.dumps(SCENARIO_SCHEMA, indent=2, sort_keys=True))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semslice",
        description="semantic network-slicing simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", default=None,
                       help="scenario file (default: built-in first-responder)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="dotted-key override on the scenario document")

    p_run = sub.add_parser("run", help="run one policy and emit artifacts")
    add_scenario_flags(p_run)
    p_run.add_argument("--policy", required=True,
                       choices=[k.value for k in PolicyKind])
    p_run.add_argument("--out", default=_default_out(),
                       help=f"output directory (default ${OUT_DIR_ENV} or ./out)")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run several policies side by side")
    add_scenario_flags(p_cmp)
    p_cmp.add_argument("--policies", default=None,
                       help="comma-separated subset (default: all four)")
    p_cmp.add_argument("--out", default=_default_out())
    p_cmp.set_defaults(func=cmd_compare)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    add_scenario_flags(p_val)
    p_val.set_defaults(func=cmd_validate)

    p_gen = sub.add_parser("generate", help="write the built-in scenario")
    p_gen.add_argument("--ues", type=int, default=6)
    p_gen.add_argument("--duration", type=int, default=200)
    p_gen.add_argument("--t-accident", type=int, default=50)
    p_gen.add_argument("--seed", type=int, default=42)
    p_gen.add_argument("--out", default="first-responder.scn.json")
    p_gen.set_defaults(func=cmd_generate)

    p_schema = sub.add_parser("emit-schema",
                              help="print the scenario JSON schema")
    p_schema.set_defaults(func=cmd_emit_schema)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioValidationError as err:
        return _report_invalid(err)
    except (ScenarioParseError, InvalidParams, ValueError) as err:
        _complain(str(err))
        return EXIT_INPUT
    except SinkUnavailable as err:
        _complain(str(err))
        return EXIT_ENV
    except OSError as err:
        _complain(str(err))
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
